import pytest

from noonsim.verify import run_suite


def test_similarity_suite_passes():
    results = run_suite("similarity")
    assert results and all(r.passed for r in results)
    assert all(r.tolerance == 1e-12 for r in results)


def test_factorization_suite_passes():
    results = run_suite("factorization")
    assert results and all(r.passed for r in results)
    assert all(r.tolerance == 1e-9 for r in results)
    assert all(r.deviation <= 1e-9 for r in results)


def test_weinorman_suite_passes():
    results = run_suite("wei-norman")
    assert results and all(r.passed for r in results)


def test_all_aggregates_every_suite():
    combined = run_suite("all")
    individual = sum((run_suite(name) for name in
                      ("similarity", "factorization", "wei-norman")), [])
    assert [r.name for r in combined] == [r.name for r in individual]


def test_unknown_suite_rejected():
    with pytest.raises(ValueError):
        run_suite("nonsense")


def test_suites_are_deterministic():
    first = run_suite("similarity")
    second = run_suite("similarity")
    assert [(r.name, r.deviation) for r in first] == [(r.name, r.deviation) for r in second]
