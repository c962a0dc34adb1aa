import json
from fractions import Fraction

import pytest

from dendrite_ifs import report as rpt
from dendrite_ifs.report import VerificationReport


def sample():
    return [
        VerificationReport("separation", 3, 39, "pass", Fraction(-1, 7), 128, [], {"h": "2/9"}),
        VerificationReport("tree", 2, 10, "fail", None, 128, [{"kind": "not_tree", "depth": 2}]),
    ]


def test_round_trip():
    text = rpt.dumps(sample())
    back = rpt.loads(text)
    assert [r.to_record() for r in back] == [r.to_record() for r in sample()]
    assert back[0].min_margin == Fraction(-1, 7)


def test_header_and_rational_format():
    lines = rpt.dumps(sample()).splitlines()
    assert json.loads(lines[0]) == {"format": "dendrite-ifs-report", "version": 1}
    assert json.loads(lines[1])["min_margin"] == "-1/7"


def test_loads_rejects_bad_documents():
    with pytest.raises(ValueError):
        rpt.loads("")
    with pytest.raises(ValueError):
        rpt.loads('{"format": "other", "version": 1}\n')
    with pytest.raises(ValueError):
        rpt.loads('{"format": "dendrite-ifs-report", "version": 2}\n')


def test_unknown_result_rejected():
    with pytest.raises(ValueError):
        VerificationReport("x", 1, result="maybe")


def test_settle():
    r = VerificationReport("x", 1, failures=[{"kind": "unknown"}])
    assert rpt.settle(r, True).result == "inconclusive"
    r.failures.append({"kind": "gap"})
    assert rpt.settle(r, True).result == "fail"
    assert rpt.settle(VerificationReport("x", 1), False).result == "pass"


def test_overall_exit_code():
    p = VerificationReport("a", 1, result="pass")
    i = VerificationReport("b", 1, result="inconclusive")
    f = VerificationReport("c", 1, result="fail")
    assert rpt.overall_exit_code([p]) == 0
    assert rpt.overall_exit_code([p, i]) == 2
    assert rpt.overall_exit_code([i, f, p]) == 1
