import itertools
import random
from fractions import Fraction

import pytest

import oracles
from monarel import (FinSet, FinFun, RatDist, Rel, converse_coupling,
                     dist_monad, is_saturated, lift, lift_enumerate,
                     lift_member_dist, lift_member_dist_saturated,
                     lift_member_powerset, lifted_morphism, lifted_mult_check,
                     lifted_strength_check, lifted_unit_check,
                     nonempty_powerset_monad, powerset_monad, random_dist,
                     saturate, subsets)

F = Fraction

A12 = FinSet(["1", "2"])
AB = FinSet(["a", "b"])
S_STAIR = Rel(A12, AB, [("1", "a"), ("2", "a"), ("2", "b")])


def all_rels(n, m):
    left = FinSet([f"l{i}" for i in range(n)])
    right = FinSet([f"r{j}" for j in range(m)])
    universe = [(a, b) for a in left for b in right]
    for pairs in subsets(universe):
        yield Rel(left, right, pairs)


# ------------------------------------------------------------ powerset

def test_lift_enumerate_stair_relation():
    lifted = lift_enumerate(powerset_monad(), S_STAIR)
    want = {
        (frozenset(), frozenset()),
        (frozenset({"1"}), frozenset({"a"})),
        (frozenset({"2"}), frozenset({"a"})),
        (frozenset({"2"}), frozenset({"b"})),
        (frozenset({"2"}), frozenset({"a", "b"})),
        (frozenset({"1", "2"}), frozenset({"a"})),
        (frozenset({"1", "2"}), frozenset({"a", "b"})),
    }
    assert lifted.pairs == want


def test_lift_enumerate_matches_projection_oracle():
    for s in all_rels(2, 2):
        got = lift_enumerate(powerset_monad(), s).pairs
        assert got == oracles.powerset_lift_pairs(s)


def test_lift_member_agrees_with_realization_search():
    t = powerset_monad()
    for s in all_rels(2, 2):
        for b1 in subsets(s.left):
            for b2 in subsets(s.right):
                want = oracles.realization_exists(b1, b2, s)
                assert lift_member_powerset(b1, b2, s) == want
                assert oracles.egli_milner(b1, b2, s) == want


def test_lift_member_rejects_carrier_escape():
    with pytest.raises(ValueError):
        lift_member_powerset(frozenset({"z"}), frozenset({"a"}), S_STAIR)


def test_lift_is_monotone_in_the_relation():
    t = powerset_monad()
    small = Rel(A12, AB, [("1", "a")])
    assert lift_enumerate(t, small).pairs <= lift_enumerate(t, S_STAIR).pairs


def test_lift_of_diagonal_is_diagonal():
    t = powerset_monad()
    lifted = lift_enumerate(t, Rel.diagonal(AB))
    assert lifted.pairs == {(v, v) for v in t.apply(AB)}


def test_nonempty_powerset_drops_the_empty_pair():
    lifted = lift_enumerate(nonempty_powerset_monad(), S_STAIR)
    assert (frozenset(), frozenset()) not in lifted.pairs
    full = lift_enumerate(powerset_monad(), S_STAIR)
    assert lifted.pairs == full.pairs - {(frozenset(), frozenset())}


# ------------------------------------------------------ dist membership

def half(x, y):
    return RatDist({x: F(1, 2), y: F(1, 2)}, "probability")


def test_coupling_found_on_the_stair_relation():
    res = lift_member_dist(half("1", "2"), half("a", "b"), S_STAIR)
    assert res.member and bool(res)
    assert res.witness.weights == {("1", "a"): F(1, 2), ("2", "b"): F(1, 2)}
    assert res.violated is None


def test_witness_has_exact_marginals_and_support():
    res = lift_member_dist(half("1", "2"), half("a", "b"), S_STAIR)
    assert oracles.coupling_valid(res.witness, half("1", "2"),
                                  half("a", "b"), S_STAIR)


def test_infeasible_pair_yields_a_violated_subset():
    res = lift_member_dist(RatDist.dirac("1"), half("a", "b"),
                           Rel(A12, AB, [("1", "a"), ("2", "b")]))
    assert not res.member
    assert res.violated == ("1",)
    assert res.witness is None


def test_violated_subset_certifies_infeasibility():
    rng = random.Random(13)
    s = Rel(A12, AB, [("1", "a"), ("2", "b")])
    for _ in range(200):
        nu1 = random_dist(rng, list(A12), "probability")
        nu2 = random_dist(rng, list(AB), "probability")
        res = lift_member_dist(nu1, nu2, s)
        if res.member:
            assert oracles.coupling_valid(res.witness, nu1, nu2, s)
        else:
            u = res.violated
            image = {b for a in u for a2, b in s.pairs if a2 == a}
            assert nu1.mass(u) > nu2.mass(image)


def test_membership_matches_subset_condition_oracle():
    rng = random.Random(99)
    for s in all_rels(2, 2):
        for _ in range(6):
            nu1 = random_dist(rng, list(s.left), "probability")
            nu2 = random_dist(rng, list(s.right), "probability")
            assert bool(lift_member_dist(nu1, nu2, s)) == \
                oracles.strassen_ok(nu1, nu2, s)


def test_subprobability_membership():
    s = Rel(A12, AB, [("1", "a")])
    nu1 = RatDist({"1": F(1, 2)}, "subprobability")
    nu2 = RatDist({"a": F(1, 2)}, "subprobability")
    assert lift_member_dist(nu1, nu2, s).member
    zero = RatDist.zero("subprobability")
    res = lift_member_dist(zero, zero, s)
    assert res.member and res.witness.total() == 0


def test_unequal_totals_are_not_members():
    s = Rel(A12, AB, [("1", "a")])
    nu1 = RatDist({"1": F(1, 2)}, "subprobability")
    nu2 = RatDist({"a": F(1, 4)}, "subprobability")
    assert not lift_member_dist(nu1, nu2, s).member


def test_mode_mismatch_is_an_error():
    s = Rel(A12, AB, [("1", "a")])
    with pytest.raises(ValueError):
        lift_member_dist(RatDist.dirac("1"),
                         RatDist({"a": F(1, 2)}, "subprobability"), s)


def test_dist_membership_rejects_carrier_escape():
    with pytest.raises(ValueError):
        lift_member_dist(RatDist.dirac("z"), RatDist.dirac("a"), S_STAIR)


def test_diagonal_dist_membership_is_equality():
    rng = random.Random(3)
    d = Rel.diagonal(AB)
    for _ in range(60):
        nu1 = random_dist(rng, list(AB), "probability")
        nu2 = random_dist(rng, list(AB), "probability")
        assert bool(lift_member_dist(nu1, nu2, d)) == (nu1 == nu2)


# ------------------------------------------------- saturation machinery

def test_saturate_stair_prefix():
    s = Rel(A12, AB, [("1", "a"), ("2", "a")])
    classes, closure = saturate(s)
    assert classes == [frozenset({("L", "1"), ("L", "2"), ("R", "a")}),
                       frozenset({("R", "b")})]
    assert ("2", "a") in closure.pairs and ("1", "b") not in closure.pairs


def test_saturate_is_idempotent():
    rng = random.Random(7)
    for _ in range(50):
        pairs = [(a, b) for a in A12 for b in AB if rng.random() < 0.4]
        s = Rel(A12, AB, pairs)
        _, closure = saturate(s)
        _, again = saturate(closure)
        assert closure.pairs == again.pairs
        assert is_saturated(closure)


def test_saturate_matches_union_find_oracle():
    rng = random.Random(21)
    tagged = [("L", a) for a in A12] + [("R", b) for b in AB]
    for _ in range(40):
        pairs = [(a, b) for a in A12 for b in AB if rng.random() < 0.4]
        s = Rel(A12, AB, pairs)
        classes, _ = saturate(s)
        want = oracles.brute_equiv_classes(
            [(("L", a), ("R", b)) for a, b in pairs], tagged)
        assert {frozenset(c) for c in classes} == \
            {frozenset(c) for c in want}


def test_saturated_membership_requires_saturation():
    s = Rel(A12, AB, [("1", "a"), ("2", "b")])
    if not is_saturated(s):
        with pytest.raises(ValueError):
            lift_member_dist_saturated(RatDist.dirac("1"),
                                       RatDist.dirac("a"), s)


def test_saturated_membership_agrees_with_the_flow_check():
    rng = random.Random(17)
    for _ in range(120):
        pairs = [(a, b) for a in A12 for b in AB if rng.random() < 0.5]
        _, closure = saturate(Rel(A12, AB, pairs))
        nu1 = random_dist(rng, list(A12), "probability")
        nu2 = random_dist(rng, list(AB), "probability")
        assert lift_member_dist_saturated(nu1, nu2, closure) == \
            bool(lift_member_dist(nu1, nu2, closure))


def test_converse_coupling_frozen_example():
    s = Rel(A12, AB, [("1", "a"), ("2", "a")])
    nu1 = RatDist({"1": F(1, 3), "2": F(2, 3)}, "probability")
    gamma = converse_coupling(nu1, RatDist.dirac("a"), s)
    assert gamma.weights == {("1", "a"): F(1, 3), ("2", "a"): F(2, 3)}


def test_converse_coupling_is_a_coupling():
    rng = random.Random(29)
    done = 0
    while done < 60:
        pairs = [(a, b) for a in A12 for b in AB if rng.random() < 0.5]
        _, closure = saturate(Rel(A12, AB, pairs))
        nu1 = random_dist(rng, list(A12), "probability")
        nu2 = random_dist(rng, list(AB), "probability")
        if not lift_member_dist_saturated(nu1, nu2, closure):
            continue
        gamma = converse_coupling(nu1, nu2, closure)
        assert oracles.coupling_valid(gamma, nu1, nu2, closure)
        done += 1


def test_converse_coupling_rejects_unbalanced_classes():
    s = Rel(A12, AB, [("1", "a"), ("2", "a")])
    nu1 = RatDist({"1": F(1, 2), "2": F(1, 2)}, "probability")
    nu2 = RatDist({"a": F(1, 2), "b": F(1, 2)}, "probability")
    with pytest.raises(ValueError):
        converse_coupling(nu1, nu2, saturate(s)[1])


# ------------------------------------------------------------- wrappers

def test_lifted_rel_wrapper_enumerable():
    lr = lift(powerset_monad(), S_STAIR)
    assert lr.realization is not None
    assert lr.member(frozenset({"1"}), frozenset({"a"}))
    assert not lr.member(frozenset({"1"}), frozenset({"b"}))


def test_lifted_rel_wrapper_dist():
    lr = lift(dist_monad("probability"), S_STAIR)
    assert lr.realization is None
    assert lr.member(half("1", "2"), half("a", "b"))
    res = lr.witness(half("1", "2"), half("a", "b"))
    assert oracles.coupling_valid(res.witness, half("1", "2"),
                                  half("a", "b"), S_STAIR)


def test_lifted_morphism_induced_map():
    t = powerset_monad()
    s = Rel(A12, AB, [("1", "a"), ("2", "b")])
    s2 = Rel(FinSet(["x"]), FinSet(["y"]), [("x", "y")])
    h1 = FinFun(A12, FinSet(["x"]), {"1": "x", "2": "x"})
    h2 = FinFun(AB, FinSet(["y"]), {"a": "y", "b": "y"})
    chk = lifted_morphism(t, s, s2, h1, h2)
    assert chk.ok
    assert chk.induced is not None
    assert chk.induced((frozenset({"1"}), frozenset({"a"}))) == \
        (frozenset({"x"}), frozenset({"y"}))


def test_lifted_morphism_rejects_nonmorphic_pair():
    t = powerset_monad()
    s = Rel(A12, AB, [("1", "a")])
    s2 = Rel(FinSet(["x", "z"]), FinSet(["y", "w"]), [("z", "w")])
    h1 = FinFun(A12, s2.left, {"1": "x", "2": "x"})
    h2 = FinFun(AB, s2.right, {"a": "y", "b": "y"})
    with pytest.raises(ValueError):
        lifted_morphism(t, s, s2, h1, h2)


# ------------------------------------------------------- lifted laws

def test_lifted_laws_hold_for_powerset_on_the_stair():
    t = powerset_monad()
    assert lifted_unit_check(t, S_STAIR).ok
    assert lifted_mult_check(t, S_STAIR).ok
    assert lifted_strength_check(t, S_STAIR, S_STAIR).ok


def test_lifted_laws_hold_for_dist_on_the_stair():
    t = dist_monad("probability")
    assert lifted_unit_check(t, S_STAIR).ok
    assert lifted_mult_check(t, S_STAIR, samples=40).ok
    assert lifted_strength_check(t, S_STAIR, S_STAIR, samples=30).ok


def test_lifted_unit_detects_a_hole():
    # a relation with no pairs lifts to a relation its own units miss
    t = powerset_monad()
    s = Rel(A12, AB, [("1", "a")])
    r = lifted_unit_check(t, s)
    assert r.ok and r.cases == 1
