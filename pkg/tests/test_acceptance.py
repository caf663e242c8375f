"""Acceptance criteria, one test each, at their stated tolerances and runtime limits.

Each test records a ``criterion N: PASS|FAIL`` line that is printed in the
terminal summary.
"""

import json

import pytest
from click.testing import CliRunner

from quasisect.claims import DEFAULT_SEED, run_claim
from quasisect.cli import main

pytestmark = pytest.mark.acceptance

# criterion number -> (claim identifier, runtime limit in seconds)
CRITERIA = {
    1: ("sup-im-square", 1.0),
    2: ("power-asymptotics", 10.0),
    3: ("power-containment", 10.0),
    4: ("resolvent-quasi-sectorial", 60.0),
    5: ("semigroup-quasi-sectorial", 60.0),
    6: ("resolvent-estimate", 30.0),
    7: ("chernoff-vector-bound", 30.0),
    8: ("power-difference-bound", 30.0),
    9: ("euler-rate", 60.0),
    10: ("chernoff-envelope", 60.0),
    11: ("chernoff-family", 60.0),
}


def record(log, number, name, passed, note):
    line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {name:<28s} {note}"
    log.append(line)
    print(line)


@pytest.mark.parametrize("number", sorted(CRITERIA), ids=lambda n: f"criterion-{n:02d}-{CRITERIA[n][0]}")
def test_criterion(number, acceptance_log):
    claim, limit = CRITERIA[number]
    res = run_claim(claim, DEFAULT_SEED)
    in_time = res.runtime < limit
    record(acceptance_log, number, claim, res.passed and in_time, f"{res.runtime:.2f}s (limit {limit:g}s)")
    assert res.passed, json.dumps(res.details, indent=1, default=str)[:4000]
    assert in_time, f"{claim} took {res.runtime:.2f}s, limit {limit}s"


def test_criterion_12_verify_is_deterministic(tmp_path, acceptance_log):
    runner = CliRunner()
    outs = [tmp_path / "run1", tmp_path / "run2"]
    codes = [runner.invoke(main, ["verify", "--seed", str(DEFAULT_SEED), "--out", str(o)]).exit_code for o in outs]
    names = sorted(p.name for p in outs[0].glob("*.json"))
    same = names == sorted(p.name for p in outs[1].glob("*.json")) and all(
        (outs[0] / n).read_bytes() == (outs[1] / n).read_bytes() for n in names
    )
    record(acceptance_log, 12, "verify-determinism", same, f"{len(names)} JSON files compared, exit codes {codes}")
    assert "summary.json" in names
    assert codes[0] == codes[1]
    assert same
