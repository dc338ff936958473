import pytest

import idealpts


def test_decisions():
    assert idealpts.decide("z", "(blocks 2 1 0)")["verdict"] == "in"
    assert idealpts.decide("banach", "(blocks 2 1 0)")["verdict"] == "positive"
    with pytest.raises(ValueError):
        idealpts.decide("nope", "(res 0 2)")


def test_cantor():
    assert idealpts.cantor_dist("0:0", "001:0") == "2^-2"
    assert idealpts.cantor_dist("01:1", "01:1") == "0"
    assert idealpts.q_enum(0) == idealpts.q_enum(0)
    assert len({idealpts.q_enum(n) for n in range(200)}) == 200


def test_demo_matches_cli_contract():
    assert "gamma-not-lambda-z" in idealpts.demo_names()
    report = idealpts.run_demo("gamma-not-lambda-z", sweep=20)
    assert report["verdict"] == "pass"
    assert idealpts.exit_code(report) == 0
    assert report == idealpts.run_demo("gamma-not-lambda-z", sweep=20)
    with pytest.raises(ValueError):
        idealpts.run_demo("nope")


def test_schemes():
    assert idealpts.scheme_check("fin-full", depth=4)["verdict"] == "pass"
    probe = idealpts.scheme_probe("fin2-anchored", "-:01", sweep=10)
    assert probe["notes"]["outcome"] == "NotInB"


def test_subject_and_realize():
    subject = {"kind": "closed", "targets": ["cyl:011"], "points": ["011:0"]}
    assert idealpts.verify_subject(subject, horizon=5000, range_count=500)["verdict"] == "pass"
    values = idealpts.realize(subject, count=50, bits=8)
    assert len(values) == 50
    assert all(v.startswith("011") for v in values)
