"""JSON encodings for the CLI.

Input carriers are arrays of strings; relations pair them; rational
weights travel as "p/q" strings.  Transition tables key on "state|label"
(so carrier atoms must avoid "|"); equivalence classes over a disjoint
union tag atoms as "L:x" / "R:y".  Outputs render structured values
(sets, pairs, distributions) recursively.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .bisim import LTS, PLTS
from .finset import FinFun, FinSet, Rel, atom_key
from .lawcheck import LawReport
from .metalang import Model
from .monads import MODES, MonadInstance, RatDist, dist_monad, \
    nonempty_powerset_monad, powerset_monad
from .poset import FinPoset, OrderedRel, upper_monad

MONAD_NAMES = ("powerset", "nonempty-powerset", "dist", "upper")


def monad_by_name(name: str, mode: str = "probability") -> MonadInstance:
    if name == "powerset":
        return powerset_monad()
    if name == "nonempty-powerset":
        return nonempty_powerset_monad()
    if name == "dist":
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}")
        return dist_monad(mode)
    if name == "upper":
        return upper_monad()
    raise ValueError(
        f"unknown monad {name!r}; pick one of {', '.join(MONAD_NAMES)}")


def _require(cond, msg):
    if not cond:
        raise ValueError(msg)


def load_finset(obj) -> FinSet:
    _require(isinstance(obj, list), "a finite set must be an array of strings")
    for x in obj:
        _require(isinstance(x, str), f"set element {x!r} is not a string")
    return FinSet(obj)


def load_fun(obj) -> FinFun:
    _require(isinstance(obj, dict), "a function must be an object")
    for key in ("dom", "cod", "map"):
        _require(key in obj, f"function needs a {key!r} field")
    dom = load_finset(obj["dom"])
    cod = load_finset(obj["cod"])
    _require(isinstance(obj["map"], dict), "'map' must be an object")
    return FinFun(dom, cod, obj["map"])


def load_rel(obj) -> Rel:
    _require(isinstance(obj, dict), "a relation must be an object")
    for key in ("left", "right", "pairs"):
        _require(key in obj, f"relation needs a {key!r} field")
    left = load_finset(obj["left"])
    right = load_finset(obj["right"])
    pairs = set()
    for p in obj["pairs"]:
        _require(isinstance(p, list) and len(p) == 2,
                 f"relation pair {p!r} must be a two-element array")
        pairs.add((p[0], p[1]))
    return Rel(left, right, pairs)


def load_fraction(s) -> Fraction:
    _require(isinstance(s, (str, int)), f"weight {s!r} must be 'p/q' or int")
    try:
        f = Fraction(s)
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"bad rational {s!r}: {e}") from None
    _require(f >= 0, f"negative weight {s!r}")
    return f


def load_ratdist(obj, carrier: FinSet = None) -> RatDist:
    _require(isinstance(obj, dict), "a distribution must be an object")
    _require("weights" in obj, "distribution needs a 'weights' field")
    mode = obj.get("mode", "probability")
    weights = {x: load_fraction(w) for x, w in obj["weights"].items()}
    return RatDist(weights, mode, carrier)


def _step_carriers(obj):
    states = load_finset(obj["states"])
    labels = load_finset(obj["labels"])
    for atom in list(states) + list(labels):
        _require("|" not in atom,
                 f"atom {atom!r} contains '|', which step keys reserve")
    return states, labels


def _split_step_key(key, states: FinSet, labels: FinSet):
    _require(isinstance(key, str) and key.count("|") == 1,
             f"step key {key!r} must look like 'state|label'")
    s, l = key.split("|")
    _require(s in states, f"step key {key!r}: unknown state {s!r}")
    _require(l in labels, f"step key {key!r}: unknown label {l!r}")
    return s, l


def load_lts(obj) -> LTS:
    _require(isinstance(obj, dict), "a transition system must be an object")
    for key in ("states", "labels", "step"):
        _require(key in obj, f"transition system needs a {key!r} field")
    states, labels = _step_carriers(obj)
    step = {}
    for key, succs in obj["step"].items():
        s, l = _split_step_key(key, states, labels)
        _require(isinstance(succs, list), f"successors of {key!r} must be an array")
        step[(s, l)] = frozenset(succs)
    return LTS(states, labels, step)


def load_plts(obj) -> PLTS:
    _require(isinstance(obj, dict), "a transition system must be an object")
    for key in ("states", "labels", "step"):
        _require(key in obj, f"transition system needs a {key!r} field")
    states, labels = _step_carriers(obj)
    mode = obj.get("mode", "probability")
    step = {}
    for key, dist in obj["step"].items():
        s, l = _split_step_key(key, states, labels)
        if isinstance(dist, dict) and "weights" not in dist:
            dist = {"mode": mode, "weights": dist}
        nu = load_ratdist(dist)
        _require(nu.mode == mode,
                 f"step {key!r} has mode {nu.mode}, system says {mode}")
        step[(s, l)] = nu
    return PLTS(states, labels, step, mode)


def load_poset(obj) -> FinPoset:
    _require(isinstance(obj, dict), "a poset must be an object")
    _require("carrier" in obj, "poset needs a 'carrier' field")
    carrier = load_finset(obj["carrier"])
    leq = []
    for p in obj.get("leq", []):
        _require(isinstance(p, list) and len(p) == 2,
                 f"order pair {p!r} must be a two-element array")
        leq.append((p[0], p[1]))
    return FinPoset(carrier, leq)


def load_ordered_rel(obj) -> OrderedRel:
    _require(isinstance(obj, dict), "an ordered relation must be an object")
    for key in ("left", "right", "pairs"):
        _require(key in obj, f"ordered relation needs a {key!r} field")
    left = load_poset(obj["left"])
    right = load_poset(obj["right"])
    pairs = set()
    for p in obj["pairs"]:
        _require(isinstance(p, list) and len(p) == 2,
                 f"pair {p!r} must be a two-element array")
        pairs.add((p[0], p[1]))
    order = None
    if "order" in obj:
        order = set()
        for entry in obj["order"]:
            _require(isinstance(entry, list) and len(entry) == 2
                     and all(isinstance(q, list) and len(q) == 2
                             for q in entry),
                     f"order entry {entry!r} must pair two pairs")
        order = {(tuple(entry[0]), tuple(entry[1])) for entry in obj["order"]}
    return OrderedRel(left, right, pairs, order)


def load_model(obj) -> Model:
    _require(isinstance(obj, dict), "a model must be an object")
    for key in ("monad", "base"):
        _require(key in obj, f"model needs a {key!r} field")
    monad = monad_by_name(obj["monad"], obj.get("mode", "probability"))
    _require(isinstance(obj["base"], dict), "'base' must map names to sets")
    base = {name: load_finset(xs) for name, xs in obj["base"].items()}
    return Model(monad, base)


def load_base_rels(obj) -> dict:
    _require(isinstance(obj, dict), "base relations must map names to relations")
    return {name: load_rel(r) for name, r in obj.items()}


def load_tagged(atom):
    _require(isinstance(atom, str) and atom[:2] in ("L:", "R:"),
             f"tagged atom {atom!r} must look like 'L:x' or 'R:y'")
    return (atom[0], atom[2:])


def load_classes(obj) -> list:
    _require(isinstance(obj, list), "classes must be an array of arrays")
    out = []
    for cls in obj:
        _require(isinstance(cls, list), f"class {cls!r} must be an array")
        out.append(frozenset(load_tagged(a) for a in cls))
    return out


# ------------------------------------------------------------- encoding

def value_json(v):
    """Recursive rendering of semantic values.

    Strings pass through, pairs become two-element arrays, sets become
    sorted arrays under {"set": ...}, distributions carry their mode and
    weights keyed by the rendered value.
    """
    if isinstance(v, str):
        return v
    if isinstance(v, tuple):
        return [value_json(x) for x in v]
    if isinstance(v, frozenset):
        return {"set": sorted((value_json(x) for x in v), key=_json_key)}
    if isinstance(v, dict):
        return {_flat(k): value_json(x) for k, x in sorted(v.items())}
    if isinstance(v, RatDist):
        return {
            "mode": v.mode,
            "weights": {
                _flat(x): str(w) for x, w in v.items()
            },
        }
    if isinstance(v, Fraction):
        return str(v)
    if v is None or isinstance(v, (bool, int)):
        return v
    return repr(v)


def _json_key(x):
    return json.dumps(x, sort_keys=True)


def _flat(v) -> str:
    from .finset import atom_str
    if isinstance(v, RatDist):
        inner = ",".join(f"{_flat(x)}:{w}" for x, w in v.items())
        return "{" + inner + "}"
    return atom_str(v)


def finset_json(a: FinSet):
    return [value_json(x) for x in a]


def rel_json(r: Rel):
    return {
        "left": finset_json(r.left),
        "right": finset_json(r.right),
        "pairs": [[value_json(a), value_json(b)]
                  for a, b in sorted(r.pairs, key=atom_key)],
    }


def poset_json(p: FinPoset):
    return {
        "carrier": finset_json(p.carrier),
        "leq": [[value_json(a), value_json(b)]
                for a, b in sorted(p.pairs, key=atom_key) if a != b],
    }


def ordered_rel_json(r: OrderedRel):
    return {
        "left": poset_json(r.left),
        "right": poset_json(r.right),
        "pairs": [[value_json(a), value_json(b)]
                  for a, b in sorted(r.pairs, key=atom_key)],
        "order": [[[value_json(p[0]), value_json(p[1])],
                   [value_json(q[0]), value_json(q[1])]]
                  for p, q in sorted(r.order, key=atom_key) if p != q],
    }


def report_json(rep: LawReport):
    out = {"law": rep.law, "ok": rep.ok, "cases": rep.cases}
    if rep.seed is not None:
        out["seed"] = rep.seed
    if rep.counterexample is not None:
        out["counterexample"] = {
            k: value_json(v) for k, v in rep.counterexample.items()
        }
    return out
