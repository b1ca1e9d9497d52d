import pytest

from golden_cases import CASES, check_case, expected, run_cli


@pytest.mark.parametrize("name,argv,code", CASES, ids=[c[0] for c in CASES])
def test_golden_output(name, argv, code):
    assert check_case(name, argv, code) == []


def test_type_error_diagnostic():
    code, out, err = run_cli(["check", "bad_type.sdc"])
    assert code == 3
    assert out == ""
    assert err == expected("bad_type.check.err")


def test_check_summary():
    code, out, _ = run_cli(["check", "signature.sdc"])
    assert code == 0
    assert "term framed : y·x·x -> y·x" in out.splitlines()
