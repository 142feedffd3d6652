"""Finite posets, the upper-set monad, and two mono factorizations.

The monad sends a poset to its nonempty antichains under the Smyth
ordering (E below F when every generator of F sits above some generator
of E); an antichain stands for the upper set it generates.  Monotone
maps factor through their image in two ways: with the order inherited
from the codomain (surjection followed by embedding) or with the order
generated by pushing the domain order forward (quotient followed by an
injective monotone map).  Lifting a relation through the monad under
either system yields the same pairs; only the orderings may differ.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .finset import FinSet, Rel, UNIT_ATOM, atom_key, product_set, subsets
from .monads import MonadInstance


class FinPoset:
    """A finite poset.

    leq lists generating pairs; reflexive pairs may be omitted.  The
    reflexive-transitive closure is taken on construction and
    antisymmetry is checked afterwards.
    """

    def __init__(self, carrier, leq=()):
        self.carrier = carrier if isinstance(carrier, FinSet) else FinSet(carrier)
        atoms = list(self.carrier)
        index = {x: i for i, x in enumerate(atoms)}
        n = len(atoms)
        succ = [1 << i for i in range(n)]
        for x, y in leq:
            if x not in self.carrier or y not in self.carrier:
                raise ValueError(f"order pair ({x!r},{y!r}) outside the carrier")
            succ[index[x]] |= 1 << index[y]
        for k in range(n):
            reach_k = succ[k]
            bit = 1 << k
            for i in range(n):
                if succ[i] & bit:
                    succ[i] |= reach_k
        for i in range(n):
            for j in range(i + 1, n):
                if succ[i] >> j & 1 and succ[j] >> i & 1:
                    raise ValueError(
                        f"antisymmetry fails on {atoms[i]!r}, {atoms[j]!r}")
        self.pairs = frozenset(
            (atoms[i], atoms[j])
            for i in range(n) for j in range(n) if succ[i] >> j & 1)

    def le(self, x, y) -> bool:
        return (x, y) in self.pairs

    def minimize(self, xs) -> frozenset:
        """Minimal elements: the canonical antichain generating the
        same upper set."""
        xs = set(xs)
        return frozenset(
            x for x in xs
            if not any(y != x and self.le(y, x) for y in xs))

    def upset(self, xs) -> frozenset:
        return frozenset(y for y in self.carrier
                         if any(self.le(x, y) for x in xs))

    def is_antichain(self, xs) -> bool:
        xs = list(xs)
        return all(not self.le(x, y)
                   for x in xs for y in xs if x != y)

    def __len__(self):
        return len(self.carrier)

    def __iter__(self):
        return iter(self.carrier)

    def __contains__(self, x):
        return x in self.carrier

    def __eq__(self, other):
        return (isinstance(other, FinPoset)
                and self.carrier == other.carrier
                and self.pairs == other.pairs)

    def __hash__(self):
        return hash((self.carrier, self.pairs))

    def __repr__(self):
        strict = sorted((p for p in self.pairs if p[0] != p[1]), key=atom_key)
        return f"FinPoset({list(self.carrier)!r}, {strict!r})"


def chain(atoms) -> FinPoset:
    atoms = list(atoms)
    return FinPoset(atoms, [(atoms[i], atoms[i + 1])
                            for i in range(len(atoms) - 1)])


def discrete(atoms) -> FinPoset:
    return FinPoset(list(atoms))


def ord_product(p: FinPoset, q: FinPoset) -> FinPoset:
    carrier = product_set(p.carrier, q.carrier)
    leq = [
        ((x1, y1), (x2, y2))
        for (x1, y1) in carrier
        for (x2, y2) in carrier
        if p.le(x1, x2) and q.le(y1, y2)
    ]
    return FinPoset(carrier, leq)


ORD_UNIT = FinPoset([UNIT_ATOM])


class OrdFun:
    """A monotone map between finite posets."""

    def __init__(self, dom: FinPoset, cod: FinPoset, mapping):
        self.dom = dom
        self.cod = cod
        if callable(mapping) and not isinstance(mapping, dict):
            mapping = {x: mapping(x) for x in dom}
        self.mapping = dict(mapping)
        for x in dom:
            if x not in self.mapping:
                raise ValueError(f"no image for {x!r}")
            if self.mapping[x] not in cod:
                raise ValueError(f"image of {x!r} outside the codomain")
        if set(self.mapping) != set(dom.carrier):
            raise ValueError("mapping domain does not match the carrier")
        for x, y in dom.pairs:
            if not cod.le(self.mapping[x], self.mapping[y]):
                raise ValueError(
                    f"not monotone: {x!r} <= {y!r} but images are unrelated")

    def __call__(self, x):
        return self.mapping[x]

    def image(self) -> frozenset:
        return frozenset(self.mapping.values())

    def __repr__(self):
        return f"OrdFun({self.mapping!r})"


def ord_identity(p: FinPoset) -> OrdFun:
    return OrdFun(p, p, {x: x for x in p})


def ord_compose(g: OrdFun, f: OrdFun) -> OrdFun:
    if f.cod != g.dom:
        raise ValueError("composition mismatch")
    return OrdFun(f.dom, g.cod, {x: g(f(x)) for x in f.dom})


# ---------------------------------------------------------- upper monad

def smyth_le(p: FinPoset, e, f) -> bool:
    """E below F: the upper set of E contains that of F."""
    return all(any(p.le(x, y) for x in e) for y in f)


def _antichains(p: FinPoset):
    out = []
    for xs in subsets(p.carrier):
        if xs and p.is_antichain(xs):
            out.append(xs)
    return out


def _upper_apply(p: FinPoset) -> FinPoset:
    if not isinstance(p, FinPoset):
        raise ValueError("the upper-set monad lives on posets")
    chains = _antichains(p)
    atoms = list(p.carrier)
    index = {x: i for i, x in enumerate(atoms)}
    above = [0] * len(atoms)
    for x, y in p.pairs:
        above[index[x]] |= 1 << index[y]
    # E below F iff every generator of F sits above some generator of E
    ups, bits = [], []
    for e in chains:
        up = 0
        for x in e:
            up |= above[index[x]]
        ups.append(up)
        mask = 0
        for x in e:
            mask |= 1 << index[x]
        bits.append(mask)
    leq = [(chains[i], chains[j])
           for i in range(len(chains)) for j in range(len(chains))
           if bits[j] & ~ups[i] == 0]
    return FinPoset(FinSet(chains), leq)


def _upper_map(fn, e, cod):
    if cod is None:
        raise ValueError("mapping an antichain needs the codomain poset")
    return cod.minimize(fn(x) for x in e)


def _upper_mult(ee, obj):
    if obj is None:
        raise ValueError("flattening antichains needs the base poset")
    return obj.minimize(x for e in ee for x in e)


def _upper_sample(rng, p: FinPoset):
    atoms = list(p.carrier)
    picked = [x for x in atoms if rng.random() < 0.5]
    if not picked:
        picked = [rng.choice(atoms)]
    return p.minimize(picked)


def upper_monad() -> MonadInstance:
    """Nonempty antichains under the Smyth order.

    unit is the singleton, mult unions generators and re-minimizes, the
    mediator pairs generators (a product of antichains is an antichain
    in the product order, so no re-minimization is needed).
    """
    return MonadInstance(
        "upper",
        enumerable=True,
        category="ord",
        unit=lambda x: frozenset({x}),
        map=_upper_map,
        mult=_upper_mult,
        strength=lambda x, e: frozenset((x, y) for y in e),
        mediator=lambda e, f: frozenset(itertools.product(e, f)),
        apply=_upper_apply,
        sample=_upper_sample,
    )


@dataclass(frozen=True)
class UpperSet:
    """An upper set of a poset, presented by its minimal generators."""

    poset: FinPoset
    antichain: frozenset

    def __post_init__(self):
        if not self.antichain:
            raise ValueError("upper sets here are nonempty")
        for x in self.antichain:
            if x not in self.poset:
                raise ValueError(f"generator {x!r} outside the carrier")
        if not self.poset.is_antichain(self.antichain):
            raise ValueError("generators must be pairwise incomparable")

    def elements(self) -> frozenset:
        return self.poset.upset(self.antichain)

    def __contains__(self, x):
        return any(self.poset.le(g, x) for g in self.antichain)


def upper_set(poset: FinPoset, xs) -> UpperSet:
    return UpperSet(poset, poset.minimize(xs))


# ------------------------------------------------------- factorizations

SYSTEMS = ("epi-regmono", "extremalepi-mono")


@dataclass(frozen=True)
class OrdFactorization:
    epi: OrdFun
    mid: FinPoset
    mono: OrdFun
    system: str

    def compose(self) -> OrdFun:
        return ord_compose(self.mono, self.epi)


def factorize_ord(f: OrdFun, system: str) -> OrdFactorization:
    """Image factorization in the chosen system.

    epi-regmono: the image carries the codomain's order restricted to
    it, making the second leg an embedding.  extremalepi-mono: the
    image carries the smallest order containing the pushed-forward
    domain order, making the first leg a quotient; if antisymmetry
    failed (impossible for monotone maps into a poset, kept for safety)
    the image is further quotiented by the induced equivalence.
    """
    if system not in SYSTEMS:
        raise ValueError(f"unknown system {system!r}; pick one of {SYSTEMS}")
    img = sorted(f.image(), key=atom_key)
    if system == "epi-regmono":
        leq = [(u, v) for u in img for v in img if f.cod.le(u, v)]
        mid = FinPoset(FinSet(img), leq)
    else:
        pushed = {(f(x), f(y)) for x, y in f.dom.pairs}
        mid = _generated_poset(img, pushed)
    epi = OrdFun(f.dom, mid, {x: f(x) for x in f.dom})
    mono = OrdFun(mid, f.cod, {u: u for u in mid})
    return OrdFactorization(epi, mid, mono, system)


def _generated_poset(img, pushed) -> FinPoset:
    # transitive closure of the pushed pairs; on a cycle, collapse the
    # strongly connected elements (cannot happen for poset codomains)
    index = {u: i for i, u in enumerate(img)}
    succ = [1 << i for i in range(len(img))]
    for u, v in pushed:
        succ[index[u]] |= 1 << index[v]
    for k in range(len(img)):
        reach_k = succ[k]
        bit = 1 << k
        for i in range(len(img)):
            if succ[i] & bit:
                succ[i] |= reach_k
    rel = {(img[i], img[j])
           for i in range(len(img)) for j in range(len(img))
           if succ[i] >> j & 1}
    cyclic = [(u, v) for u, v in rel if u != v and (v, u) in rel]
    if not cyclic:
        return FinPoset(FinSet(img), rel)
    rep = {}
    for u in img:
        cls = sorted((v for v in img if (u, v) in rel and (v, u) in rel),
                     key=atom_key)
        rep[u] = cls[0]
    carrier = sorted(set(rep.values()), key=atom_key)
    leq = {(rep[u], rep[v]) for u, v in rel}
    return FinPoset(FinSet(carrier), leq)


# -------------------------------------------------- lifting over posets

class OrderedRel:
    """A relation between two posets, itself carrying a partial order.

    The order must refine the product order (so the inclusion into the
    product is monotone).  The default order is the full restriction of
    the product order to the pairs.
    """

    def __init__(self, left: FinPoset, right: FinPoset, pairs, order=None):
        self.left = left
        self.right = right
        pairs = frozenset(pairs)
        for a, b in pairs:
            if a not in left or b not in right:
                raise ValueError(f"pair ({a!r},{b!r}) outside the carriers")
        self.pairs = pairs
        if order is None:
            order = {
                (p, q) for p in pairs for q in pairs
                if left.le(p[0], q[0]) and right.le(p[1], q[1])
            }
        self._poset = FinPoset(FinSet(sorted(pairs, key=atom_key)), order)
        for p, q in self._poset.pairs:
            if not (left.le(p[0], q[0]) and right.le(p[1], q[1])):
                raise ValueError(
                    f"order pair {p!r} <= {q!r} is not below the product order")

    @property
    def order(self) -> frozenset:
        return self._poset.pairs

    def as_poset(self) -> FinPoset:
        return self._poset

    def __eq__(self, other):
        return (isinstance(other, OrderedRel)
                and self.left == other.left and self.right == other.right
                and self.pairs == other.pairs and self.order == other.order)

    def __hash__(self):
        return hash((self.left, self.right, self.pairs, self.order))

    def __repr__(self):
        return f"OrderedRel({sorted(self.pairs, key=atom_key)!r})"


def lift_relation_ord(s: OrderedRel, system: str) -> OrderedRel:
    """Lift a relation through the upper-set monad in a chosen system.

    Apply the monad to the relation-as-poset, project both ways, and
    factor the pairing; the middle object is the lifted relation over
    the two antichain posets.
    """
    t = upper_monad()
    sp = s.as_poset()
    tsp = t.apply(sp)
    ta1 = t.apply(s.left)
    ta2 = t.apply(s.right)
    prod = ord_product(ta1, ta2)
    phi = OrdFun(tsp, prod, {
        q: (t.v_map(lambda p: p[0], q, s.left),
            t.v_map(lambda p: p[1], q, s.right))
        for q in tsp
    })
    fact = factorize_ord(phi, system)
    return OrderedRel(ta1, ta2, fact.mid.carrier, fact.mid.pairs)


class OrdCategory:
    """Adapter so the diagram checkers run over posets."""

    def terminal(self):
        return ORD_UNIT

    def product(self, a, b):
        return ord_product(a, b)

    def default_sets(self, max_size=3):
        out = [chain(["a"]), chain(["a", "b"]), discrete(["a", "b"])]
        if max_size >= 3:
            out.append(FinPoset(["a", "b", "c"], [("a", "c"), ("b", "c")]))
        return out


ORD = OrdCategory()
