"""Acceptance gate: one test per criterion, each printing a single pass/fail line."""
import time

from symrigid import corpus, verify

SEED = 1
JOBS = 4

REQUIRED_PAIRINGS = {
    "C2~Cs", "C2~C1h", "C6~C3h", "C10~C5h", "C4~S4", "C8~S8",
    "C2v~D2", "C3v~D3", "C4v~D4", "C5v~D5", "C6v~D6",
    "C4v~D2d", "C8v~D4d", "C2v~D1h", "C6v~D3h", "Td~O",
}


def check(acceptance_line, number, name, trials=None, extra_ok=True, extra=""):
    t0 = time.perf_counter()
    res = verify.run_suite(name, trials, seed=SEED, jobs=JOBS)
    wall = time.perf_counter() - t0
    ok = res.ok and extra_ok
    detail = f"{name}: {res.passed}/{res.passed + res.failed} in {wall:.2f}s"
    if extra:
        detail += f"; {extra}"
    if res.failures:
        detail += f"; first failure: {res.failures[0]}"
    acceptance_line(number, ok, detail)
    assert ok, detail
    return res, wall


def test_criterion_01_inversion(acceptance_line):
    t0 = time.perf_counter()
    res = verify.run_suite("inversion", 100, seed=SEED, jobs=1)
    wall = time.perf_counter() - t0
    ok = res.ok and res.passed == 100 and wall < 5.0
    acceptance_line(1, ok, f"inversion: {res.passed}/100 in {wall:.2f}s (limit 5s)")
    assert ok


def test_criterion_02_transfer(acceptance_line):
    res, _ = check(acceptance_line, 2, "transfer", 100)
    assert res.passed == 100


def test_criterion_03_forced_transfer(acceptance_line):
    res, _ = check(acceptance_line, 3, "forced-transfer", 100)
    assert res.passed == 100


def test_criterion_04_orbit(acceptance_line):
    res, _ = check(acceptance_line, 4, "orbit", 100)
    assert res.passed == 100


def test_criterion_05_pairing(acceptance_line):
    tags = {p.tag for p in verify.pairing_list()}
    missing = REQUIRED_PAIRINGS - tags
    n_inv = sum(t.startswith("inv") for t in tags)
    res, _ = check(acceptance_line, 5, "pairing", 20, extra_ok=not missing and n_inv > 0,
                   extra=f"{len(tags)} pairings, {n_inv} involution, missing {sorted(missing) or 'none'}")
    assert res.passed == 20 * len(tags)


def test_criterion_06_combinatorial(acceptance_line):
    n_graphs = len(corpus.z2_gain_graphs(4))
    res, _ = check(acceptance_line, 6, "combinatorial", extra=f"{n_graphs} gain graphs")
    assert res.passed == n_graphs


def test_criterion_07_isostatic(acceptance_line):
    n = len(corpus.isostatic_catalog())
    res, _ = check(acceptance_line, 7, "isostatic", extra_ok=n >= 10, extra=f"{n} catalog entries")
    assert res.passed == n


def test_criterion_08_point_line(acceptance_line):
    res, _ = check(acceptance_line, 8, "point-line", 30, extra="30 mirror + 30 half-turn")
    assert res.passed == 60


def test_criterion_09_doublecover(acceptance_line):
    rows = corpus.double_cover_rows(6)
    res, _ = check(acceptance_line, 9, "doublecover", 50, extra=f"{len(rows)} rows x 50")
    assert res.passed == 50 * len(rows)


def test_criterion_10_epsilon(acceptance_line):
    check(acceptance_line, 10, "epsilon")


def test_criterion_11_fixture(acceptance_line):
    values = verify.fixture_values_exact()
    ok = values == verify.FIXTURE_EXPECTED and verify.run_suite("fixture").ok
    acceptance_line(11, ok, f"fixture: {values}")
    assert ok
