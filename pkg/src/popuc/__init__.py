"""CMV matrices, zeros of paraorthogonal polynomials on the unit circle, and
numerical verification of interlacing between spectra of related CMV matrices."""
from popuc.circle import CircularPointSet
from popuc.cmv import CmvMatrix, ParameterArray, build_cmv, cmv, partition
from popuc.engine import (SpectralDecomposition, level_set, popuc_eval, pseudo_reflection,
                          schur_complement_reduce, zeros)
from popuc.errors import ConvergenceError, DomainError, InputError, PopucError, VerificationError
from popuc.interlace import (InterlacingVerdict, Verdict, corollary_verify, interlace_check,
                             rotate_tail, theorem_i_verify, theorem_ii_verify)
from popuc.tolerances import DEFAULT, Tolerances

__all__ = [
    "CircularPointSet", "CmvMatrix", "ParameterArray", "build_cmv", "cmv", "partition",
    "SpectralDecomposition", "level_set", "popuc_eval", "pseudo_reflection",
    "schur_complement_reduce", "zeros", "ConvergenceError", "DomainError", "InputError",
    "PopucError", "VerificationError", "InterlacingVerdict", "Verdict", "corollary_verify",
    "interlace_check", "rotate_tail", "theorem_i_verify", "theorem_ii_verify", "DEFAULT",
    "Tolerances",
]
__version__ = "0.1.0"
