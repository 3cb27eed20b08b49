"""Smoke test for the graphcx extension: run with `python python/smoke_test.py` or pytest."""

import json
from fractions import Fraction

import graphcx


def test_homology_matches_forest_count():
    cfg = json.dumps({"family": "Graphs", "n": 2, "N": 3, "j": 0})
    betti = graphcx.homology(cfg)
    assert betti == {0: 1, 1: 3, 2: 2}
    assert graphcx.euler(cfg) == 1 - 3 + 2


def test_canonical_signs():
    assert graphcx.canonical("N2 k0 | 2>1", "Graphs", 3, arity=2) == ("N2 k0 | 1>2", -1)
    assert graphcx.canonical("N0 k3 | i1>i2 i2>i3 i3>i1", "GC2", 2) is None


def test_twisted_tripod_series():
    series = graphcx.tripod_series(2, 9)
    assert Fraction(series["N3 k1 | i1>1 i1>2 i1>3"]) != 0
    assert graphcx.twisted_differential(series, 2, 9) == {}
    assert graphcx.mc_residual(2, 9) == []
    assert graphcx.mc_residual(2, 5, "1/3") == []


def test_loop_classes():
    nonzero = [r for (r, _, closed, nz) in graphcx.loop_classes(2, 9) if nz]
    assert nonzero == [1, 5, 9]


def test_pod_coefficient():
    est, err, n = graphcx.pod_coefficient(2, 3, 200_000, 7)
    assert n == 200_000 and abs(est - 0.25) < 5 * err


def test_poisson():
    assert graphcx.poisson_normal_form("[2,1]", 1) == {"[1,2]": "-1"}
    assert graphcx.pbw("[1,2]") == {"12": "1", "21": "-1"}
    assert graphcx.filtration_check(3)


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            fn()
            print("ok", name)
