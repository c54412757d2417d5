import pytest

from symrigid import verify


def strip(res):
    d = res.as_dict()
    d.pop("seconds")
    return d


@pytest.mark.parametrize("name,trials", [("inversion", 12), ("transfer", 12), ("orbit", 8), ("epsilon", 5)])
def test_deterministic_across_runs_and_threads(name, trials):
    a = verify.run_suite(name, trials, seed=3, jobs=1)
    b = verify.run_suite(name, trials, seed=3, jobs=4)
    assert strip(a) == strip(b)
    assert a.ok


def test_failures_are_ordered_by_trial():
    res = verify._run("demo", lambda k: None if k % 3 else f"bad {k}", range(7), jobs=3)
    assert res.failures == ["trial 0: bad 0", "trial 3: bad 3", "trial 6: bad 6"]
    assert not res.ok and res.passed == 4


def test_crashing_trial_is_a_failure():
    def boom(k):
        raise RuntimeError("nope")

    res = verify._run("demo", boom, range(2))
    assert res.failed == 2 and "RuntimeError" in res.failures[0]


def test_empty_suite_is_not_ok():
    assert not verify._run("demo", lambda k: None, []).ok


def test_fixture_paths_agree():
    assert verify.fixture_values_exact() == verify.FIXTURE_EXPECTED
    assert verify.fixture_values_float() == verify.FIXTURE_EXPECTED
