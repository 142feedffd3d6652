import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from monarel import (FinSet, RatDist, corner_dists, dist_monad,
                     nonempty_powerset_monad, powerset_monad, random_dist,
                     value_key)

F = Fraction


def test_ratdist_probability_must_sum_to_one():
    with pytest.raises(ValueError):
        RatDist({"x": F(1, 2)}, "probability")
    RatDist({"x": F(1, 2)}, "subprobability")


def test_ratdist_rejects_negative_and_overweight():
    with pytest.raises(ValueError):
        RatDist({"x": F(-1, 2), "y": F(3, 2)}, "probability")
    with pytest.raises(ValueError):
        RatDist({"x": F(3, 2)}, "subprobability")


def test_ratdist_rejects_unknown_mode():
    with pytest.raises(ValueError):
        RatDist({"x": F(1)}, "affine")


def test_ratdist_drops_zero_weights():
    nu = RatDist({"x": F(1), "y": F(0)}, "probability")
    assert sorted(nu.support()) == ["x"]


def test_ratdist_equality_ignores_carrier():
    a = RatDist({"x": F(1)}, "probability", carrier=FinSet(["x", "y"]))
    b = RatDist({"x": F(1)}, "probability")
    assert a == b
    assert hash(a) == hash(b)
    assert a != RatDist({"x": F(1)}, "subprobability")


def test_ratdist_mass_and_total():
    nu = RatDist({"x": F(1, 3), "y": F(2, 3)}, "probability")
    assert nu.mass(["x"]) == F(1, 3)
    assert nu.mass(["x", "y"]) == F(1)
    assert nu.mass([]) == F(0)
    assert nu.total() == F(1)


def test_dirac_and_zero():
    assert RatDist.dirac("x").weights == {"x": F(1)}
    assert RatDist.zero("subprobability").total() == F(0)


def test_corner_dists_cover_vertices():
    cs = corner_dists(FinSet(["a", "b"]), "probability")
    weights = [sorted(d.weights.items()) for d in cs]
    assert [("a", F(1))] in weights
    assert [("b", F(1))] in weights


@given(st.integers(0, 10_000), st.integers(1, 4))
@settings(max_examples=60, deadline=None)
def test_random_dist_is_a_distribution(seed, n):
    rng = random.Random(seed)
    carrier = [f"a{i}" for i in range(n)]
    nu = random_dist(rng, carrier, "probability")
    assert nu.total() == F(1)
    assert set(nu.support()) <= set(carrier)
    mu = random_dist(random.Random(seed), carrier, "subprobability")
    assert mu.total() <= F(1)


def test_random_dist_is_seed_deterministic():
    a = random_dist(random.Random(5), ["x", "y", "z"], "probability")
    b = random_dist(random.Random(5), ["x", "y", "z"], "probability")
    assert a == b


def test_powerset_ops():
    t = powerset_monad()
    assert t.v_unit("a") == frozenset({"a"})
    assert t.v_map(str.upper, frozenset("ab")) == frozenset("AB")
    tt = frozenset({frozenset("a"), frozenset("bc")})
    assert t.v_mult(tt) == frozenset("abc")
    assert t.v_strength("x", frozenset("ab")) == frozenset(
        {("x", "a"), ("x", "b")})
    med = t.v_mediator(frozenset("ab"), frozenset("c"))
    assert med == frozenset({("a", "c"), ("b", "c")})


def test_powerset_apply_sizes():
    t = powerset_monad()
    assert len(t.apply(FinSet(["a", "b"]))) == 4
    assert len(nonempty_powerset_monad().apply(FinSet(["a", "b"]))) == 3


def test_dist_mediator_is_the_product_distribution():
    t = dist_monad("probability")
    nu = RatDist({"x": F(1, 2), "y": F(1, 2)}, "probability")
    med = t.v_mediator(nu, RatDist.dirac("z"))
    assert med.weights == {("x", "z"): F(1, 2), ("y", "z"): F(1, 2)}


def test_dist_mult_averages():
    t = dist_monad("probability")
    inner1 = RatDist({"a": F(1)}, "probability")
    inner2 = RatDist({"a": F(1, 2), "b": F(1, 2)}, "probability")
    outer = RatDist({inner1: F(1, 2), inner2: F(1, 2)}, "probability")
    flat = t.v_mult(outer)
    assert flat.weights == {"a": F(3, 4), "b": F(1, 4)}


def test_dist_map_pushes_mass_forward():
    t = dist_monad("probability")
    nu = RatDist({"x": F(1, 2), "y": F(1, 2)}, "probability")
    assert t.v_map(lambda _: "z", nu).weights == {"z": F(1)}


def test_dist_strength():
    t = dist_monad("probability")
    nu = RatDist({"a": F(1, 3), "b": F(2, 3)}, "probability")
    out = t.v_strength("p", nu)
    assert out.weights == {("p", "a"): F(1, 3), ("p", "b"): F(2, 3)}


def test_value_key_total_order_on_mixed_values():
    vals = [frozenset("a"), frozenset(), frozenset("ab")]
    assert sorted(vals, key=value_key)[0] == frozenset()
    nu = RatDist({"x": F(1)}, "probability")
    mu = RatDist({"y": F(1)}, "probability")
    assert value_key(nu) != value_key(mu)


def test_monad_instance_names():
    assert powerset_monad().name == "powerset"
    assert nonempty_powerset_monad().name == "nonempty-powerset"
    assert dist_monad("probability").name == "dist-probability"
    assert dist_monad("subprobability").name == "dist-subprobability"
    with pytest.raises(ValueError):
        dist_monad("affine")
