"""Bisimulation through lifted relations.

Nondeterministic systems step into subsets and are compared through
Egli-Milner lifting; probabilistic systems step into rational
distributions and are compared through coupling feasibility.  The
class-mass formulation over the disjoint union of the state spaces
(Larsen-Skou) is implemented directly so the two views can be played
against each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .finset import FinSet, Rel, atom_key
from .lifting import lift_member_dist, lift_member_powerset
from .monads import MODES, RatDist


class LTS:
    """Finitely branching labelled transition system.

    step maps (state, label) to a set of successor states; missing
    entries mean no successors.
    """

    def __init__(self, states, labels, step):
        self.states = states if isinstance(states, FinSet) else FinSet(states)
        self.labels = labels if isinstance(labels, FinSet) else FinSet(labels)
        table = {}
        for (s, l), succs in step.items():
            if s not in self.states:
                raise ValueError(f"unknown state {s!r}")
            if l not in self.labels:
                raise ValueError(f"unknown label {l!r}")
            succs = frozenset(succs)
            for s2 in succs:
                if s2 not in self.states:
                    raise ValueError(f"successor {s2!r} outside the carrier")
            table[(s, l)] = succs
        self._step = table

    def step(self, state, label) -> frozenset:
        return self._step.get((state, label), frozenset())

    def moves(self):
        return dict(self._step)


class PLTS:
    """Probabilistic labelled transition system.

    Every step is a RatDist over the states.  In probability mode each
    (state, label) must carry an explicit distribution; in
    subprobability mode missing entries default to the zero
    subdistribution.
    """

    def __init__(self, states, labels, step, mode="probability"):
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}")
        self.states = states if isinstance(states, FinSet) else FinSet(states)
        self.labels = labels if isinstance(labels, FinSet) else FinSet(labels)
        self.mode = mode
        table = {}
        for (s, l), nu in step.items():
            if s not in self.states:
                raise ValueError(f"unknown state {s!r}")
            if l not in self.labels:
                raise ValueError(f"unknown label {l!r}")
            if not isinstance(nu, RatDist):
                nu = RatDist(nu, mode)
            if nu.mode != mode:
                raise ValueError(
                    f"step ({s!r},{l!r}) has mode {nu.mode}, system is {mode}")
            for s2 in nu.weights:
                if s2 not in self.states:
                    raise ValueError(f"successor {s2!r} outside the carrier")
            table[(s, l)] = nu
        if mode == "probability":
            for s in self.states:
                for l in self.labels:
                    if (s, l) not in table:
                        raise ValueError(
                            f"missing step for ({s!r},{l!r}) in "
                            f"probability mode")
        self._step = table

    def step(self, state, label) -> RatDist:
        got = self._step.get((state, label))
        if got is None:
            return RatDist({}, self.mode)
        return got

    def moves(self):
        return dict(self._step)


@dataclass(frozen=True)
class BisimResult:
    ok: bool
    counterexample: dict | None = None

    def __bool__(self):
        return self.ok


def _check_frames(s: Rel, f1, f2, rl: Rel):
    if s.left != f1.states or s.right != f2.states:
        raise ValueError("relation carriers do not match the state spaces")
    if rl.left != f1.labels or rl.right != f2.labels:
        raise ValueError("label relation does not match the label sets")


def check_bisimulation(s: Rel, f1: LTS, f2: LTS, rl: Rel) -> BisimResult:
    """S is a strong bisimulation: related states take related-label
    steps into Egli-Milner-related successor sets."""
    _check_frames(s, f1, f2, rl)
    for a1, a2 in sorted(s.pairs, key=atom_key):
        for l1, l2 in sorted(rl.pairs, key=atom_key):
            if not lift_member_powerset(f1.step(a1, l1), f2.step(a2, l2), s):
                return BisimResult(False, {
                    "pair": (a1, a2), "labels": (l1, l2),
                    "succ": (f1.step(a1, l1), f2.step(a2, l2))})
    return BisimResult(True)


def check_prob_bisimulation(s: Rel, f1: PLTS, f2: PLTS, rl: Rel) -> BisimResult:
    """S is a probabilistic bisimulation: related states take
    related-label steps into couplable distributions."""
    if f1.mode != f2.mode:
        raise ValueError(f"mode mismatch: {f1.mode} vs {f2.mode}")
    _check_frames(s, f1, f2, rl)
    for a1, a2 in sorted(s.pairs, key=atom_key):
        for l1, l2 in sorted(rl.pairs, key=atom_key):
            got = lift_member_dist(f1.step(a1, l1), f2.step(a2, l2), s)
            if not got:
                return BisimResult(False, {
                    "pair": (a1, a2), "labels": (l1, l2),
                    "succ": (f1.step(a1, l1), f2.step(a2, l2)),
                    "violated": got.violated})
    return BisimResult(True)


def largest_bisimulation(f1, f2, rl: Rel = None, mode: str = "auto") -> Rel:
    """Greatest fixpoint of one-step refinement from the full relation.

    Each round removes, simultaneously, every pair whose step check
    fails against the current relation; the result is the largest
    relation passing its own check.
    """
    if mode == "auto":
        if isinstance(f1, PLTS) and isinstance(f2, PLTS):
            mode = "dist"
        elif isinstance(f1, LTS) and isinstance(f2, LTS):
            mode = "powerset"
        else:
            raise ValueError("systems have different kinds")
    if mode not in ("powerset", "dist"):
        raise ValueError(f"unknown mode {mode!r}")
    if rl is None:
        if f1.labels != f2.labels:
            raise ValueError("label sets differ; pass an explicit relation")
        rl = Rel.diagonal(f1.labels)
    if mode == "dist" and f1.mode != f2.mode:
        raise ValueError(f"mode mismatch: {f1.mode} vs {f2.mode}")

    label_pairs = sorted(rl.pairs, key=atom_key)
    current = {(a1, a2) for a1 in f1.states for a2 in f2.states}
    while True:
        rel = Rel(f1.states, f2.states, current)
        survivors = set()
        for a1, a2 in sorted(current, key=atom_key):
            ok = True
            for l1, l2 in label_pairs:
                if mode == "powerset":
                    ok = lift_member_powerset(
                        f1.step(a1, l1), f2.step(a2, l2), rel)
                else:
                    ok = bool(lift_member_dist(
                        f1.step(a1, l1), f2.step(a2, l2), rel))
                if not ok:
                    break
            if ok:
                survivors.add((a1, a2))
        if survivors == current:
            return rel
        current = survivors


def tagged_states(f1, f2) -> frozenset:
    return frozenset({("L", a) for a in f1.states}
                     | {("R", b) for b in f2.states})


def larsen_skou_check(f1: PLTS, f2: PLTS, classes) -> bool:
    """Class-mass bisimulation over the combined system.

    classes must partition the tagged disjoint union of the two state
    spaces (("L", a) and ("R", b) atoms).  States sharing a class must
    give every class the same one-step mass, for every label; steps
    never cross sides.
    """
    if f1.labels != f2.labels:
        raise ValueError("label sets differ")
    if f1.mode != f2.mode:
        raise ValueError(f"mode mismatch: {f1.mode} vs {f2.mode}")
    atoms = tagged_states(f1, f2)
    seen = set()
    for cls in classes:
        if not cls:
            raise ValueError("empty equivalence class")
        for x in cls:
            if x in seen:
                raise ValueError(f"classes overlap at {x!r}")
            seen.add(x)
    if seen != atoms:
        raise ValueError("classes do not partition the combined state space")

    split = [
        ({a for tag, a in cls if tag == "L"},
         {b for tag, b in cls if tag == "R"})
        for cls in classes
    ]
    for cls in classes:
        members = sorted(cls, key=atom_key)
        for label in f1.labels:
            signatures = []
            for tag, a in members:
                nu = (f1 if tag == "L" else f2).step(a, label)
                side = 0 if tag == "L" else 1
                signatures.append(tuple(nu.mass(c[side]) for c in split))
            if any(sig != signatures[0] for sig in signatures[1:]):
                return False
    return True
