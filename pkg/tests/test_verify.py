import pytest

from hpo.errors import UnknownSuite
from hpo.verify import SUITES, run_all, run_suite


def test_conjugation_axioms_seed7():
    res = run_suite("conjugation_axioms", seed=7, scale="quick")
    assert res.passed
    by_label = {c.label: c for c in res.cases}
    for name in ("J", "W0", "Jr(1.5)", "Jr(-1.5)"):
        assert by_label[f"{name} is an involution"].passed
        assert by_label[f"{name} is antiunitary"].passed
    ua = [c for c in res.cases if c.expected_fail]
    assert len(ua) == 1 and ua[0].measured > 0.1 and ua[0].passed


def test_thm100_lists_both_directions():
    res = run_suite("thm100", seed=0)
    labels = [c.label for c in res.cases]
    assert any("is Jr(" in l and c.direction == "below" for l, c in zip(labels, res.cases))
    assert any("is not Jr(" in l and c.direction == "above" for l, c in zip(labels, res.cases))


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        run_suite("nope")
    with pytest.raises(ValueError):
        run_suite("thm9", scale="huge")


def test_run_all_quick_passes():
    results = run_all(seed=0, scale="quick")
    assert [r.suite_name for r in results] == list(SUITES)
    failing = {r.suite_name: [c.label for c in r.cases if not c.passed] for r in results if not r.passed}
    assert not failing


def test_determinism_bit_for_bit():
    for name in SUITES:
        a = run_suite(name, seed=5)
        b = run_suite(name, seed=5)
        assert [(c.label, c.measured) for c in a.cases] == [(c.label, c.measured) for c in b.cases]


def test_suites_do_not_depend_on_run_order():
    alone = run_suite("thm101", seed=2)
    together = [r for r in run_all(seed=2) if r.suite_name == "thm101"][0]
    assert [c.measured for c in alone.cases] == [c.measured for c in together.cases]


@pytest.mark.parametrize("seed", range(10))
def test_seed_robustness(seed):
    pattern = [(r.suite_name, r.passed) for r in run_all(seed=seed)]
    assert pattern == [(name, True) for name in SUITES]


def test_case_direction_semantics():
    res = run_suite("prop3", seed=0)
    for c in res.cases:
        assert c.passed == (c.measured < c.threshold if c.direction == "below" else c.measured > c.threshold)
