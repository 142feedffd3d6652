"""Lifting a monad from carriers to binary relations.

A relation S between A1 and A2 lifts to a relation between T A1 and
T A2: the direct image of T S under the two pushforward projections.
For enumerable monads the lifted relation is materialized; for
distributions membership is decided by exact integral max-flow
(does a coupling with the given marginals live inside S?), with the
saturated-relation shortcut and its explicit product-form coupling.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .finset import FinFun, FinSet, Rel, atom_key, product_set, subsets
from .lawcheck import LawReport
from .monads import MonadInstance, RatDist, random_dist
import random


def lift_enumerate(t: MonadInstance, s: Rel) -> Rel:
    """The lifted relation over (T A1, T A2), materialized.

    Pairs are exactly the images (fst-pushforward R, snd-pushforward R)
    of elements R of T S.
    """
    if not t.enumerable:
        raise ValueError(f"monad {t.name} is not enumerable")
    sfs = s.as_finset()
    rho1 = s.proj_left()
    rho2 = s.proj_right()
    pairs = {
        (t.v_map(rho1, r, s.left), t.v_map(rho2, r, s.right))
        for r in t.apply(sfs)
    }
    return Rel(t.apply(s.left), t.apply(s.right), pairs)


def lift_member_powerset(b1, b2, s: Rel) -> bool:
    """Egli-Milner membership: every element on either side is related
    to some element on the other side, inside the given subsets."""
    b1, b2 = frozenset(b1), frozenset(b2)
    for x in b1:
        if x not in s.left:
            raise ValueError("first subset leaves the left carrier")
    for y in b2:
        if y not in s.right:
            raise ValueError("second subset leaves the right carrier")
    return all(s.right_image(x) & b2 for x in b1) and all(
        s.left_image(y) & b1 for y in b2
    )


@dataclass(frozen=True)
class CouplingResult:
    """Outcome of a coupling-feasibility query.

    witness is an exact coupling when feasible; violated, when present,
    is a subset U of the left carrier whose mass exceeds the mass of its
    S-image (read off the min cut).
    """

    member: bool
    witness: RatDist | None = None
    violated: tuple | None = None

    def __bool__(self):
        return self.member


def _edmonds_karp(edges, src, snk):
    """Max flow on integer capacities; returns (value, flow, reachable).

    edges maps (u, v) to capacity.  reachable is the set of nodes the
    source still reaches in the residual graph, i.e. the min-cut side.
    """
    adj = {}
    for (u, v) in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    flow = {}

    def residual(u, v):
        return edges.get((u, v), 0) - flow.get((u, v), 0)

    value = 0
    while True:
        parent = {src: None}
        queue = deque([src])
        while queue and snk not in parent:
            u = queue.popleft()
            for v in adj.get(u, ()):
                if v not in parent and residual(u, v) > 0:
                    parent[v] = u
                    queue.append(v)
        if snk not in parent:
            reachable = set(parent)
            return value, flow, reachable
        path = []
        v = snk
        while parent[v] is not None:
            path.append((parent[v], v))
            v = parent[v]
        push = min(residual(u, w) for u, w in path)
        for u, w in path:
            flow[(u, w)] = flow.get((u, w), 0) + push
            flow[(w, u)] = flow.get((w, u), 0) - push
        value += push


def lift_member_dist(nu1: RatDist, nu2: RatDist, s: Rel) -> CouplingResult:
    """Decide whether a coupling of nu1 and nu2 supported in S exists.

    Exact integral max-flow after clearing denominators: the marginals
    are feasible iff the flow saturates both total masses.
    """
    if nu1.mode != nu2.mode:
        raise ValueError(f"mode mismatch: {nu1.mode} vs {nu2.mode}")
    if nu1.carrier is not None and nu1.carrier != s.left:
        raise ValueError("left carrier mismatch")
    if nu2.carrier is not None and nu2.carrier != s.right:
        raise ValueError("right carrier mismatch")
    for x in nu1.weights:
        if x not in s.left:
            raise ValueError("left support leaves the carrier")
    for y in nu2.weights:
        if y not in s.right:
            raise ValueError("right support leaves the carrier")

    total1, total2 = nu1.total(), nu2.total()
    if total1 != total2:
        return CouplingResult(False)
    if total1 == 0:
        witness = RatDist({}, nu1.mode, product_set(s.left, s.right))
        return CouplingResult(True, witness=witness)

    dens = [w.denominator for w in nu1.weights.values()]
    dens += [w.denominator for w in nu2.weights.values()]
    scale = lcm(*dens)
    target = int(total1 * scale)
    edges = {}
    support1 = sorted(nu1.weights, key=atom_key)
    support2 = sorted(nu2.weights, key=atom_key)
    for x in support1:
        edges[("src", ("l", x))] = int(nu1.weights[x] * scale)
    for y in support2:
        edges[(("r", y), "snk")] = int(nu2.weights[y] * scale)
    sup2 = set(support2)
    for x in support1:
        for y in sorted(s.right_image(x), key=atom_key):
            if y in sup2:
                edges[(("l", x), ("r", y))] = target
    value, flow, reachable = _edmonds_karp(edges, "src", "snk")
    if value == target:
        weights = {}
        for x in support1:
            for y in support2:
                units = flow.get((("l", x), ("r", y)), 0)
                if units > 0:
                    weights[(x, y)] = Fraction(units, scale)
        witness = RatDist(weights, nu1.mode, product_set(s.left, s.right))
        return CouplingResult(True, witness=witness)
    violated = tuple(
        x for x in support1 if ("l", x) in reachable
    )
    return CouplingResult(False, violated=violated)


def saturate(s: Rel):
    """Close S under the smallest equivalence on the disjoint union.

    Returns (classes, saturated relation): classes partition the tagged
    union (("L", a) for the left carrier, ("R", b) for the right), and
    the saturated relation holds between any left/right pair sharing a
    class.
    """
    parent = {}

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry, key=atom_key)] = min(rx, ry, key=atom_key)

    for a in s.left:
        parent[("L", a)] = ("L", a)
    for b in s.right:
        parent[("R", b)] = ("R", b)
    for a, b in sorted(s.pairs, key=atom_key):
        union(("L", a), ("R", b))

    groups = {}
    for node in parent:
        groups.setdefault(find(node), set()).add(node)
    classes = sorted(
        (frozenset(g) for g in groups.values()),
        key=lambda c: atom_key(min(c, key=atom_key)),
    )
    sat = {
        (a, b)
        for a in s.left
        for b in s.right
        if find(("L", a)) == find(("R", b))
    }
    return classes, Rel(s.left, s.right, sat)


def is_saturated(s: Rel) -> bool:
    return saturate(s)[1] == s


def lift_member_dist_saturated(nu1: RatDist, nu2: RatDist, s: Rel) -> bool:
    """Class-mass criterion: on a saturated relation, membership holds
    iff nu1 and nu2 give every equivalence class the same mass."""
    if nu1.mode != nu2.mode:
        raise ValueError(f"mode mismatch: {nu1.mode} vs {nu2.mode}")
    classes, sat = saturate(s)
    if sat != s:
        raise ValueError("relation is not saturated")
    for cls in classes:
        left = {a for tag, a in cls if tag == "L"}
        right = {b for tag, b in cls if tag == "R"}
        if nu1.mass(left) != nu2.mass(right):
            return False
    return True


def converse_coupling(nu1: RatDist, nu2: RatDist, s: Rel) -> RatDist:
    """The product-form coupling on a saturated relation with matching
    class masses: inside a class of mass d, the pair (a1, a2) carries
    nu1(a1) * nu2(a2) / d."""
    classes, sat = saturate(s)
    if sat != s:
        raise ValueError("relation is not saturated")
    weights = {}
    for cls in classes:
        left = {a for tag, a in cls if tag == "L"}
        right = {b for tag, b in cls if tag == "R"}
        d1, d2 = nu1.mass(left), nu2.mass(right)
        if d1 != d2:
            raise ValueError("class masses differ; no coupling exists")
        if d1 == 0:
            continue
        for a in left:
            for b in right:
                w = nu1(a) * nu2(b) / d1
                if w:
                    weights[(a, b)] = w
    return RatDist(weights, nu1.mode, product_set(s.left, s.right))


class LiftedRel:
    """The lifted relation with a uniform membership API.

    Enumerable monads carry an explicit realization Rel; distribution
    monads answer membership through the coupling decision procedure.
    """

    def __init__(self, base: Rel, monad: MonadInstance):
        self.base = base
        self.monad = monad
        self._realization = lift_enumerate(monad, base) if monad.enumerable else None

    @property
    def realization(self) -> Rel | None:
        return self._realization

    def member(self, v1, v2) -> bool:
        if self._realization is not None:
            return (v1, v2) in self._realization.pairs
        return bool(lift_member_dist(v1, v2, self.base))

    def witness(self, v1, v2) -> CouplingResult:
        if self.monad.enumerable:
            raise ValueError("witness couplings exist only for distributions")
        return lift_member_dist(v1, v2, self.base)

    def __repr__(self):
        return f"LiftedRel({self.monad.name}, base={self.base!r})"


def lift(t: MonadInstance, s: Rel) -> LiftedRel:
    return LiftedRel(s, t)


@dataclass(frozen=True)
class MorphismCheck:
    ok: bool
    induced: FinFun | None = None
    counterexample: tuple | None = None

    def __bool__(self):
        return self.ok


def lifted_morphism(t: MonadInstance, s: Rel, s2: Rel, h1: FinFun, h2: FinFun,
                    *, samples: int = 50, seed: int = 0) -> MorphismCheck:
    """Functoriality on relation morphisms.

    Requires (h1, h2) to map S into S'; verifies the pushforward pair
    maps the lifted relation of S into that of S', and returns the
    induced map between the realizations when both are materialized.
    """
    for a, b in s.pairs:
        if (h1(a), h2(b)) not in s2.pairs:
            raise ValueError(
                f"({h1(a)!r},{h2(b)!r}) escapes the target relation")
    if t.enumerable:
        lifted = lift_enumerate(t, s)
        lifted2 = lift_enumerate(t, s2)
        graph = {}
        for v1, v2 in lifted.pairs:
            w1 = t.v_map(h1, v1, s2.left)
            w2 = t.v_map(h2, v2, s2.right)
            if (w1, w2) not in lifted2.pairs:
                return MorphismCheck(False, counterexample=(v1, v2, w1, w2))
            graph[(v1, v2)] = (w1, w2)
        induced = FinFun(lifted.as_finset(), lifted2.as_finset(), graph)
        return MorphismCheck(True, induced=induced)
    rng = random.Random(seed)
    for nu in _sample_couplings(t, rng, s, samples):
        v1 = t.v_map(lambda p: p[0], nu, s.left)
        v2 = t.v_map(lambda p: p[1], nu, s.right)
        w1 = t.v_map(h1, v1, s2.left)
        w2 = t.v_map(h2, v2, s2.right)
        if not lift_member_dist(w1, w2, s2):
            return MorphismCheck(False, counterexample=(v1, v2, w1, w2))
    return MorphismCheck(True)


def _sample_couplings(t: MonadInstance, rng, s: Rel, samples: int):
    """Seeded distributions over the pairs of S (members by construction)."""
    pairs = sorted(s.pairs, key=atom_key)
    if not pairs:
        if t.mode == "subprobability":
            yield RatDist({}, t.mode)
        return
    for _ in range(samples):
        yield random_dist(rng, pairs, t.mode)


def _member_pair(t: MonadInstance, s: Rel, v1, v2, cache) -> bool:
    if t.name == "powerset":
        return lift_member_powerset(v1, v2, s)
    if t.name == "nonempty-powerset":
        return bool(v1) and bool(v2) and lift_member_powerset(v1, v2, s)
    if t.enumerable:
        if id(s) not in cache:
            cache[id(s)] = lift_enumerate(t, s)
        return (v1, v2) in cache[id(s)].pairs
    return bool(lift_member_dist(v1, v2, s))


def lifted_unit_check(t: MonadInstance, s: Rel) -> LawReport:
    """Related points have related units."""
    cache = {}
    cases = 0
    for a, b in sorted(s.pairs, key=atom_key):
        cases += 1
        v1, v2 = t.v_unit(a), t.v_unit(b)
        if not _member_pair(t, s, v1, v2, cache):
            return LawReport(
                "lifted-unit", False, cases,
                {"diagram": "lifted-unit", "input": (a, b),
                 "lhs": (v1, v2), "rhs": "member"},
            )
    return LawReport("lifted-unit", True, cases)


def lifted_mult_check(t: MonadInstance, s: Rel, *, samples: int = 100,
                      seed: int = 0) -> LawReport:
    """Flattening a related pair of second-level values stays related.

    Enumerable monads enumerate sub-relations of the lifted relation
    (cap 2^16, beyond which seeded sampling takes over); distributions
    sample second-level values built from couplings, which are related
    by construction.
    """
    rng = random.Random(seed)
    cases = 0
    if t.enumerable:
        lifted = lift_enumerate(t, s)
        lifted_pairs = sorted(lifted.pairs, key=atom_key)
        ta1 = t.apply(s.left)
        ta2 = t.apply(s.right)
        if len(lifted_pairs) <= 16:
            candidates = subsets(lifted_pairs)
        else:
            candidates = (
                frozenset(p for p in lifted_pairs if rng.random() < 0.5)
                for _ in range(samples)
            )
        seen = set()
        for r in candidates:
            xi1 = frozenset(p[0] for p in r)
            xi2 = frozenset(p[1] for p in r)
            if xi1 not in ta1 or xi2 not in ta2:
                continue  # nonempty-powerset: the empty sub-relation is not a value
            if (xi1, xi2) in seen:
                continue
            seen.add((xi1, xi2))
            cases += 1
            m1 = t.v_mult(xi1, s.left)
            m2 = t.v_mult(xi2, s.right)
            if (m1, m2) not in lifted.pairs:
                return LawReport(
                    "lifted-mult", False, cases,
                    {"diagram": "lifted-mult", "input": (xi1, xi2),
                     "lhs": (m1, m2), "rhs": "member"}, seed)
        return LawReport("lifted-mult", True, cases, seed=seed)
    for _ in range(samples):
        members = []
        for nu in _sample_couplings(t, rng, s, rng.randint(1, 3)):
            members.append((
                t.v_map(lambda p: p[0], nu, s.left),
                t.v_map(lambda p: p[1], nu, s.right),
            ))
        if not members:
            break
        outer = random_dist(rng, members, t.mode)
        xi1 = t.v_map(lambda p: p[0], outer)
        xi2 = t.v_map(lambda p: p[1], outer)
        cases += 1
        m1 = t.v_mult(xi1)
        m2 = t.v_mult(xi2)
        if not lift_member_dist(m1, m2, s):
            return LawReport(
                "lifted-mult", False, cases,
                {"diagram": "lifted-mult", "input": (xi1, xi2),
                 "lhs": (m1, m2), "rhs": "member"}, seed)
    return LawReport("lifted-mult", True, cases, seed=seed)


def lifted_strength_check(t: MonadInstance, s: Rel, s2: Rel, *,
                          samples: int = 50, seed: int = 0) -> LawReport:
    """Strength applied to related points and related values lands in
    the lifted product relation."""
    rng = random.Random(seed)
    sp = s.product(s2)
    cases = 0
    cache = {}
    if t.enumerable:
        lifted2 = lift_enumerate(t, s2)
        related = sorted(lifted2.pairs, key=atom_key)
    else:
        related = []
        for nu in _sample_couplings(t, rng, s2, samples):
            related.append((
                t.v_map(lambda p: p[0], nu, s2.left),
                t.v_map(lambda p: p[1], nu, s2.right),
            ))
    for a, b in sorted(s.pairs, key=atom_key):
        for w1, w2 in related:
            cases += 1
            v1 = t.v_strength(a, w1)
            v2 = t.v_strength(b, w2)
            if not _member_pair(t, sp, v1, v2, cache):
                return LawReport(
                    "lifted-strength", False, cases,
                    {"diagram": "lifted-strength", "input": ((a, b), (w1, w2)),
                     "lhs": (v1, v2), "rhs": "member"}, seed)
    return LawReport("lifted-strength", True, cases, seed=seed)
