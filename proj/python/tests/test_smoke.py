import math

import pytest

import nashadow as ns


def circle(a, b):
    d = abs(a - b) % 1.0
    return min(d, 1.0 - d)


def test_evaluate_and_compose():
    d = ns.family({"kind": "doubling"})
    assert ns.evaluate(d, 0, [0.3])[0] == pytest.approx(0.6)
    seg = ns.compose(d, [0.1], 3)
    assert [p[0] for p in seg] == pytest.approx([0.1, 0.2, 0.4, 0.8])


def test_pullback_shadow_doubling():
    d = ns.family({"kind": "doubling"})
    budget = ns.delta_budget(d, 64, 0.1, 0.98)
    assert budget[0] == pytest.approx(0.049)
    po = ns.perturb_orbit(d, [0.1], 64, budget[0], 7)
    assert po.max_defect < 0.049
    rep = ns.pullback_shadow(d, po, 0.1)
    assert rep["verdict"]
    assert rep["max_error"] < 0.1
    assert len(rep["per_step_errors"]) == 65


def test_uniqueness_certificate():
    d = ns.family({"kind": "doubling"})
    po = ns.perturb_orbit(d, [0.2], 20, 0.0, 0)
    assert ns.uniqueness_certificate(d, po, 0.1, 20) == 0.2 * 2.0**-20


def test_periodic_shadow():
    d = ns.family({"kind": "doubling"})
    base = ns.PseudoOrbit(d, [[1 / 3 + 0.002], [2 / 3 - 0.001], [1 / 3 + 0.002]])
    po = ns.periodicize(d, base, 2, 6)
    r = ns.periodic_shadow(d, po, 2, 0.05)
    assert r["fixed_point_residual"] < 1e-9
    assert circle(r["point"][0], 1 / 3) < 0.05


def test_density_roundtrip():
    a = [1.0 if math.isqrt(n) ** 2 == n else 0.0 for n in range(10000)]
    s = ns.cesaro_to_density_zero(a)
    assert s["density"] == pytest.approx(0.01)
    c = ns.density_zero_to_cesaro(a, s["J"], 1.0)
    assert c["actual"] <= c["bound"]


def test_limit_and_average():
    r = ns.family({"kind": "rotation", "angles": [0.6180339887498949]})
    e = [min(0.5, 1.0 / (i + 1)) for i in range(2000)]
    po = ns.inject_defects(r, [0.1], e)
    out = ns.limit_shadow_point(r, po, 6)
    assert out["verdict"]

    f = ns.family({"kind": "funnel8"})
    sq = [1.0 if math.isqrt(i) ** 2 == i else 0.0 for i in range(4000)]
    po = ns.inject_defects(f, [0.0], sq)
    avg = ns.average_shadow_point(f, [0, 1, 2], po)
    assert avg["cesaro_error"] < 0.05
    assert avg["support_in_J_prime_B"]


def test_product_equivalence():
    c = ns.family({"kind": "finite_cycle", "n": 3})
    i = ns.family({"kind": "finite_identity", "n": 4, "spacing": 0.2})
    rec = ns.product_equivalence_check(c, i, "h")
    assert rec["consistent"]
    assert not rec["product"]["verdict"]


def test_errors_carry_code():
    d = ns.family({"kind": "doubling"})
    with pytest.raises(ns.ShadowError) as info:
        ns.delta_budget(d, 4, 0.3)
    assert info.value.code == "EpsilonTooLarge"
    with pytest.raises(ns.ShadowError):
        ns.family({"kind": "nope"})


def test_run_scenario():
    rep = ns.run_scenario(
        {
            "name": "py",
            "experiment": "shadow",
            "family": {"kind": "doubling"},
            "params": {"epsilon": 0.1, "horizon": 32, "trials": 3, "seed": 2},
        }
    )
    assert rep["verdict"]
    assert "timestamp" in rep["metadata"]
