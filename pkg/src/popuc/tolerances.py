"""Numerical tolerance policy shared by every module.

All thresholds live in one frozen record so that a command-line run can
override them (``--tol eps_match=1e-9``) without touching global state.
"""
from __future__ import annotations

from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    # slack on |b| = 1, |beta| = 1 for user-supplied values
    eps_unit: float = 1e-10
    # unitarity of constructed matrices
    eps_unitary: float = 1e-12
    # two circle points are "the same" below this angular distance
    eps_match: float = 1e-8
    # fallback match threshold when a pair sits in the marginal band
    eps_tight: float = 1e-11
    # minimum gap for a spectrum to count as simple
    eps_sep: float = 1e-9
    # eigenpair residual ||C z - lambda z||
    eps_eig: float = 1e-9
    # smallest admissible eigenvector component
    eps_comp: float = 1e-12
    # numerical rank threshold on singular values of I - S
    eps_rank: float = 1e-8
    # residual of u v^T against US - U
    eps_rank1: float = 1e-12
    # Schur complement / structural identities
    eps_schur: float = 1e-12
    # relative residual for the lemma identities
    eps_lemma: float = 1e-7
    # bisection stopping width in angle
    xtol: float = 1e-13
    # tightened root width used when a set match is ambiguous
    xtol_tight: float = 1e-15

    def override(self, **changes: float) -> "Tolerances":
        known = {f.name for f in fields(self)}
        unknown = set(changes) - known
        if unknown:
            raise KeyError(f"unknown tolerance(s): {', '.join(sorted(unknown))}")
        return replace(self, **{k: float(v) for k, v in changes.items()})


DEFAULT = Tolerances()
