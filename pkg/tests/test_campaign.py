import json

import numpy as np
import pytest

from popuc.campaign import SUITES, JobSpec, random_disk, random_unit, run_campaign, run_trial


@pytest.mark.parametrize("suite", SUITES)
def test_each_suite_small(suite):
    summary = run_campaign(JobSpec(suite, seed=5, trials=6, n_max=8, resonant=0.5))
    assert summary.ok, [r.to_dict() for r in summary.records if not r.ok]
    assert summary.passed == 6


def test_rerun_is_identical():
    spec = JobSpec("theorem2", seed=11, trials=4, n_max=10, resonant=0.5)
    a = [run_trial(spec, i).verdict_fields() for i in range(4)]
    b = [run_trial(spec, i).verdict_fields() for i in range(4)]
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_single_trial_reproduces_from_its_seed():
    spec = JobSpec("oracle", seed=2, trials=10, n_max=12)
    full = run_campaign(spec).records[7]
    assert run_trial(spec, 7).verdict_fields() == full.verdict_fields()
    assert full.seed == [2, 7]


def test_outputs(tmp_path):
    run_campaign(JobSpec("structure", seed=1, trials=3, output_dir=str(tmp_path)))
    lines = (tmp_path / "structure_trials.jsonl").read_text().splitlines()
    assert len(lines) == 3
    summary = json.loads((tmp_path / "structure_summary.json").read_text())
    assert summary["passed"] == 3 and summary["failures"] == []


@pytest.mark.parametrize("kwargs", [dict(suite="nope"), dict(suite="oracle", trials=0),
                                    dict(suite="oracle", n_min=5, n_max=3),
                                    dict(suite="oracle", alpha_radius=1.0),
                                    dict(suite="oracle", seed=-1)])
def test_jobspec_validation(kwargs):
    with pytest.raises(ValueError):
        JobSpec(**kwargs)


def test_generators():
    rng = np.random.default_rng(0)
    z = random_disk(rng, 1000, 0.5)
    assert np.all(np.abs(z) <= 0.5)
    for _ in range(100):
        u = random_unit(rng, guard=0.1)
        assert abs(abs(u) - 1) <= 1e-15 and abs(u - 1) > 0.05
