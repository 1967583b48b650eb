import pytest

from bicov.suites import SUITES, run_suite, suite_tasks


@pytest.mark.parametrize("name", SUITES)
def test_suite_passes(name):
    rep = run_suite(name, jobs=2)
    assert rep.passed, [c.name for c in rep.failures()]
    assert rep.data["suite"] == name
    assert all(c.suite for c in rep.checks)


def test_unknown_suite():
    with pytest.raises(KeyError):
        suite_tasks("nope")
