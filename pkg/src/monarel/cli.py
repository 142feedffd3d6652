"""Command-line front end.

Exit codes: 0 when the requested check passes (or a construction
succeeds), 1 when a check fails (a counterexample or violated subset is
printed), 2 on usage or input errors.  --json switches every command to
a structured report; seeds are echoed so runs can be reproduced.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import jsonio
from .bisim import (check_bisimulation, check_prob_bisimulation,
                    largest_bisimulation, larsen_skou_check)
from .finset import Rel, atom_str
from .lawcheck import SET, check_cartesian, standard_battery
from .lifting import (lift_enumerate, lift_member_dist,
                      lift_member_dist_saturated, lift_member_powerset)
from .metalang import (ParseError, TypecheckError, basic_lemma_check, parse,
                       parse_ty, synthesize, term_str, type_pool, typecheck)
from .poset import ORD, lift_relation_ord


class _Usage(Exception):
    pass


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise _Usage(f"{path}: no such file")
    except json.JSONDecodeError as e:
        raise _Usage(f"{path}:{e.lineno}:{e.colno}: {e.msg}")


def _load(path, loader):
    obj = _read_json(path)
    try:
        return loader(obj)
    except ValueError as e:
        raise _Usage(f"{path}: {e}")


def _emit(args, payload):
    print(json.dumps(payload, sort_keys=True, indent=2))


def _monad(args):
    try:
        return jsonio.monad_by_name(args.monad, getattr(args, "mode", "probability"))
    except ValueError as e:
        raise _Usage(str(e))


# ------------------------------------------------------------- commands

def cmd_check_laws(args):
    t = _monad(args)
    cat = ORD if t.category == "ord" else SET
    sets = cat.default_sets(args.max_size)
    reports = standard_battery(t, sets, samples=args.samples, seed=args.seed,
                               category=cat)
    cartesian = check_cartesian(t, sets, samples=args.samples, seed=args.seed,
                                category=cat)
    ok = all(r.ok for r in reports)
    if args.json:
        _emit(args, {
            "monad": t.name, "seed": args.seed, "ok": ok,
            "reports": [jsonio.report_json(r) for r in reports],
            "cartesian": jsonio.report_json(cartesian),
        })
    else:
        for r in reports:
            print(r)
        note = "holds" if cartesian.ok else "fails"
        print(f"cartesian: {note} (informational, {cartesian.cases} cases)")
        if not cartesian.ok:
            cex = cartesian.counterexample
            print(f"  e.g. {cex['diagram']} at {_show(cex['input'])}")
        for r in reports:
            if not r.ok:
                print(f"counterexample [{r.law}]: {_show(r.counterexample)}")
    return 0 if ok else 1


def cmd_lift(args):
    t = _monad(args)
    if not t.enumerable:
        raise _Usage(f"monad {t.name} is not enumerable; "
                     "use 'member' for pointwise queries")
    if t.category == "ord":
        raise _Usage("use 'poset-lift' for the ordered monad")
    s = _load(args.S, jsonio.load_rel)
    lifted = lift_enumerate(t, s)
    if args.json:
        _emit(args, {"monad": t.name, "lifted": jsonio.rel_json(lifted)})
    else:
        print(f"{len(lifted.pairs)} related pairs over "
              f"{len(lifted.left)} x {len(lifted.right)} carriers")
        for a, b in sorted(lifted.pairs, key=_pair_key):
            print(f"  {atom_str(a)}  ~  {atom_str(b)}")
    return 0


def _pair_key(p):
    from .finset import atom_key
    return atom_key(p)


def cmd_member(args):
    _monad(args)  # validates the name/mode pair
    s = _load(args.S, jsonio.load_rel)
    if args.monad in ("powerset", "nonempty-powerset"):
        if not (args.b1 and args.b2):
            raise _Usage("powerset membership needs --b1 and --b2")
        b1 = set(_load(args.b1, jsonio.load_finset))
        b2 = set(_load(args.b2, jsonio.load_finset))
        if args.monad == "nonempty-powerset" and (not b1 or not b2):
            raise _Usage("the empty set is not a value of this monad")
        try:
            member = lift_member_powerset(b1, b2, s)
        except ValueError as e:
            raise _Usage(str(e))
        if args.json:
            _emit(args, {"member": member})
        else:
            print("member" if member else "not a member")
        return 0 if member else 1
    if args.monad != "dist":
        raise _Usage(f"membership queries support powerset and dist, "
                     f"not {args.monad}")
    if not (args.nu1 and args.nu2):
        raise _Usage("distribution membership needs --nu1 and --nu2")
    nu1 = _load(args.nu1, lambda o: jsonio.load_ratdist(o))
    nu2 = _load(args.nu2, lambda o: jsonio.load_ratdist(o))
    try:
        if args.saturated:
            member = lift_member_dist_saturated(nu1, nu2, s)
            witness = violated = None
        else:
            got = lift_member_dist(nu1, nu2, s)
            member, witness, violated = got.member, got.witness, got.violated
    except ValueError as e:
        raise _Usage(str(e))
    if args.json:
        _emit(args, {
            "member": member,
            "witness": jsonio.value_json(witness) if witness else None,
            "violated": list(violated) if violated else None,
        })
    else:
        if member:
            print("member")
            if witness is not None:
                for (x, y), w in witness.items():
                    print(f"  coupling ({x},{y}) -> {w}")
        else:
            print("not a member")
            if violated:
                img = sorted(set().union(
                    *(s.right_image(x) for x in violated)))
                print(f"  violated subset U = {{{', '.join(violated)}}}: "
                      f"nu1(U) = {nu1.mass(violated)} > "
                      f"nu2(S(U)) = {nu2.mass(img)}")
    return 0 if member else 1


def _label_rel(args, f1, f2):
    if args.labels:
        return _load(args.labels, jsonio.load_rel)
    if f1.labels != f2.labels:
        raise _Usage("label sets differ; pass --labels")
    return Rel.diagonal(f1.labels)


def _state_rel(args, f1, f2):
    if args.rel:
        return _load(args.rel, jsonio.load_rel)
    if f1.states != f2.states:
        raise _Usage("state spaces differ; pass --rel")
    return Rel.diagonal(f1.states)


def _bisim_common(args, loader, checker):
    f1 = _load(args.sys1, loader)
    f2 = _load(args.sys2, loader)
    s = _state_rel(args, f1, f2)
    rl = _label_rel(args, f1, f2)
    try:
        got = checker(s, f1, f2, rl)
    except ValueError as e:
        raise _Usage(str(e))
    if args.json:
        _emit(args, {
            "bisimulation": got.ok,
            "counterexample": jsonio.value_json(got.counterexample),
        })
    else:
        if got.ok:
            print("bisimulation")
        else:
            cex = got.counterexample
            a1, a2 = cex["pair"]
            l1, l2 = cex["labels"]
            print(f"not a bisimulation: ({a1},{a2}) on labels ({l1},{l2})")
            if cex.get("violated"):
                print(f"  violated subset: {{{', '.join(cex['violated'])}}}")
    return 0 if got.ok else 1


def cmd_bisim(args):
    return _bisim_common(args, jsonio.load_lts, check_bisimulation)


def cmd_prob_bisim(args):
    return _bisim_common(args, jsonio.load_plts, check_prob_bisimulation)


def cmd_max_bisim(args):
    kind = args.kind
    loader = jsonio.load_lts if kind == "powerset" else jsonio.load_plts
    if kind == "auto":
        raw = _read_json(args.sys1)
        probabilistic = isinstance(raw.get("step", {}), dict) and any(
            isinstance(v, dict) for v in raw["step"].values())
        loader = jsonio.load_plts if probabilistic else jsonio.load_lts
    f1 = _load(args.sys1, loader)
    f2 = _load(args.sys2, loader)
    rl = _label_rel(args, f1, f2)
    try:
        best = largest_bisimulation(f1, f2, rl)
    except ValueError as e:
        raise _Usage(str(e))
    if args.json:
        _emit(args, {"largest": jsonio.rel_json(best)})
    else:
        print(f"largest bisimulation: {len(best.pairs)} pairs")
        for a, b in sorted(best.pairs, key=_pair_key):
            print(f"  {a}  ~  {b}")
    return 0


def cmd_larsen_skou(args):
    f1 = _load(args.sys1, jsonio.load_plts)
    f2 = _load(args.sys2, jsonio.load_plts)
    classes = _load(args.classes, jsonio.load_classes)
    try:
        ok = larsen_skou_check(f1, f2, classes)
    except ValueError as e:
        raise _Usage(str(e))
    if args.json:
        _emit(args, {"bisimulation": ok})
    else:
        print("probabilistic bisimulation" if ok else "class masses differ")
    return 0 if ok else 1


def _models_and_base(args):
    m1 = _load(args.model1, jsonio.load_model)
    m2 = _load(args.model2, jsonio.load_model)
    if args.base:
        base = _load(args.base, jsonio.load_base_rels)
    else:
        base = {}
        for name, a in m1.base.items():
            if name not in m2.base or m2.base[name] != a:
                raise _Usage(
                    f"base type {name!r} differs between the models; "
                    "pass --base with explicit relations")
            base[name] = Rel.diagonal(a)
    return m1, m2, base


def cmd_logrel(args):
    m1, m2, base = _models_and_base(args)
    try:
        ty = parse_ty(args.type)
    except ParseError as e:
        raise _Usage(f"--type: {e}")
    try:
        from .metalang import logical_relation
        rel = logical_relation(m1, m2, base, ty)
    except ValueError as e:
        raise _Usage(str(e))
    if args.json:
        _emit(args, {"type": str(ty), "relation": jsonio.rel_json(rel)})
    else:
        print(f"relation at {ty}: {len(rel.pairs)} pairs over "
              f"{len(rel.left)} x {len(rel.right)}")
        for a, b in sorted(rel.pairs, key=_pair_key):
            print(f"  {atom_str(a)}  ~  {atom_str(b)}")
    return 0


def _parse_ctx(src):
    ctx = {}
    if not src:
        return ctx
    for part in src.split(","):
        part = part.strip()
        if not part:
            continue
        if ":" not in part:
            raise _Usage(f"--ctx entries look like 'x:ty', got {part!r}")
        name, ty = part.split(":", 1)
        try:
            ctx[name.strip()] = parse_ty(ty)
        except ParseError as e:
            raise _Usage(f"--ctx {name.strip()!r}: {e}")
    return ctx


def cmd_basic_lemma(args):
    import random
    m1, m2, base = _models_and_base(args)
    ctx = _parse_ctx(args.ctx)
    if args.term:
        try:
            with open(args.term) as fh:
                src = fh.read()
        except FileNotFoundError:
            raise _Usage(f"{args.term}: no such file")
        try:
            t = parse(src)
            typecheck(ctx, t)
        except (ParseError, TypecheckError) as e:
            raise _Usage(f"{args.term}: {e}")
        rep = basic_lemma_check(m1, m2, base, ctx, t)
        if args.json:
            _emit(args, {"term": term_str(t), "report": jsonio.report_json(rep)})
        else:
            print(f"{term_str(t)}: {'related' if rep.ok else 'NOT related'} "
                  f"({rep.cases} environment pairs)")
            if not rep.ok:
                print(f"  counterexample: {_show(rep.counterexample)}")
        return 0 if rep.ok else 1
    # generated suite
    if not ctx:
        if not m1.base:
            raise _Usage("generated terms need --ctx or a base type")
        name = sorted(m1.base)[0]
        ctx = _parse_ctx(f"x:{name}, m:T {name}")
    rng = random.Random(args.seed)
    types = type_pool(ctx, parse_ty("Unit"))
    from .metalang import TTy
    types = types + [TTy(s) for s in types if not isinstance(s, TTy)]
    checked = 0
    failures = []
    while checked < args.count:
        ty = rng.choice(types)
        t = synthesize(rng, ctx, ty, args.max_size)
        if t is None:
            continue
        rep = basic_lemma_check(m1, m2, base, ctx, t)
        checked += 1
        if not rep.ok:
            failures.append((t, rep))
            break
    ok = not failures
    if args.json:
        _emit(args, {
            "seed": args.seed, "count": checked, "ok": ok,
            "failure": None if ok else {
                "term": term_str(failures[0][0]),
                "report": jsonio.report_json(failures[0][1]),
            },
        })
    else:
        if ok:
            print(f"{checked} generated terms (size <= {args.max_size}, "
                  f"seed {args.seed}): all related")
        else:
            t, rep = failures[0]
            print(f"term {term_str(t)} NOT related: {_show(rep.counterexample)}")
    return 0 if ok else 1


def cmd_poset_lift(args):
    s = _load(args.rel, jsonio.load_ordered_rel)
    systems = (["epi-regmono", "extremalepi-mono"]
               if args.system == "both" else [args.system])
    results = {name: lift_relation_ord(s, name) for name in systems}
    if args.json:
        payload = {name: jsonio.ordered_rel_json(r)
                   for name, r in results.items()}
        if len(results) == 2:
            a, b = results.values()
            payload["same_pairs"] = a.pairs == b.pairs
            payload["same_order"] = a.order == b.order
        _emit(args, payload)
    else:
        for name, r in results.items():
            print(f"[{name}] {len(r.pairs)} pairs, "
                  f"{sum(1 for p, q in r.order if p != q)} strict order pairs")
            for a, b in sorted(r.pairs, key=_pair_key):
                print(f"  {atom_str(a)}  ~  {atom_str(b)}")
        if len(results) == 2:
            a, b = results.values()
            print(f"pair sets {'agree' if a.pairs == b.pairs else 'DIFFER'}; "
                  f"orderings {'agree' if a.order == b.order else 'differ'}")
    return 0


def _show(obj):
    return json.dumps(jsonio.value_json(obj), sort_keys=True)


# --------------------------------------------------------------- parser

_SCHEMAS = """\
JSON schemas:
  finite set      ["a","b"]
  function        {"dom":[...],"cod":[...],"map":{"a":"b"}}
  relation        {"left":[...],"right":[...],"pairs":[["a","b"],...]}
  distribution    {"mode":"probability","weights":{"a":"1/2","b":"1/2"}}
  LTS             {"states":[...],"labels":[...],"step":{"s|l":["t","u"]}}
  PLTS            {"states":[...],"labels":[...],"mode":"probability",
                   "step":{"s|l":{"t":"1/2","u":"1/2"}}}
  classes         [["L:a","R:b"],["L:c"]]   (partition of the tagged union)
  poset           {"carrier":[...],"leq":[["a","b"],...]}  (reflexive implied)
  ordered rel     {"left":<poset>,"right":<poset>,"pairs":[["a","b"],...],
                   "order":[[["a","b"],["c","d"]],...]}    (order optional)
  model           {"monad":"powerset","base":{"b":["a","b"]}}
  base relations  {"b":<relation>}
Rationals are "p/q" strings; step keys are "state|label"; tagged atoms
are "L:x" (left carrier) and "R:y" (right carrier).
"""


def _build_parser():
    p = argparse.ArgumentParser(
        prog="monarel",
        description="Finite-model checks for strong commutative monads, "
                    "relation lifting, and bisimulation.",
        epilog=_SCHEMAS,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seeded=True):
        sp.add_argument("--json", action="store_true",
                        help="emit a structured JSON report")
        if seeded:
            sp.add_argument("--seed", type=int, default=0,
                            help="seed for randomized suites")
            sp.add_argument("--samples", type=int, default=200,
                            help="sample count for non-enumerable checks")

    sp = sub.add_parser("check-laws", help="run the equational law battery")
    sp.add_argument("--monad", required=True,
                    help="powerset | nonempty-powerset | dist | upper")
    sp.add_argument("--mode", default="probability",
                    help="probability | subprobability (dist only)")
    sp.add_argument("--max-size", type=int, default=3,
                    help="largest carrier in the test grid")
    common(sp)
    sp.set_defaults(fn=cmd_check_laws)

    sp = sub.add_parser("lift", help="materialize a lifted relation")
    sp.add_argument("--monad", required=True)
    sp.add_argument("--S", required=True, help="relation JSON file")
    common(sp, seeded=False)
    sp.set_defaults(fn=cmd_lift)

    sp = sub.add_parser("member", help="decide lifted-relation membership")
    sp.add_argument("--monad", required=True)
    sp.add_argument("--mode", default="probability")
    sp.add_argument("--S", required=True, help="relation JSON file")
    sp.add_argument("--b1", help="left subset (powerset)")
    sp.add_argument("--b2", help="right subset (powerset)")
    sp.add_argument("--nu1", help="left distribution (dist)")
    sp.add_argument("--nu2", help="right distribution (dist)")
    sp.add_argument("--saturated", action="store_true",
                    help="use the class-mass criterion (S must be saturated)")
    common(sp, seeded=False)
    sp.set_defaults(fn=cmd_member)

    for name, fn, blurb in (
            ("bisim", cmd_bisim, "check a strong bisimulation"),
            ("prob-bisim", cmd_prob_bisim,
             "check a probabilistic bisimulation")):
        sp = sub.add_parser(name, help=blurb)
        sp.add_argument("--sys1", required=True)
        sp.add_argument("--sys2", required=True)
        sp.add_argument("--rel", help="relation JSON (default: diagonal)")
        sp.add_argument("--labels", help="label relation (default: diagonal)")
        common(sp, seeded=False)
        sp.set_defaults(fn=fn)

    sp = sub.add_parser("max-bisim", help="largest bisimulation")
    sp.add_argument("--sys1", required=True)
    sp.add_argument("--sys2", required=True)
    sp.add_argument("--labels")
    sp.add_argument("--kind", default="auto",
                    choices=["auto", "powerset", "dist"])
    common(sp, seeded=False)
    sp.set_defaults(fn=cmd_max_bisim)

    sp = sub.add_parser("larsen-skou", help="class-mass bisimulation check")
    sp.add_argument("--sys1", required=True)
    sp.add_argument("--sys2", required=True)
    sp.add_argument("--classes", required=True,
                    help="partition of the tagged union, JSON")
    common(sp, seeded=False)
    sp.set_defaults(fn=cmd_larsen_skou)

    sp = sub.add_parser("logrel", help="materialize a logical relation")
    sp.add_argument("--model1", required=True)
    sp.add_argument("--model2", required=True)
    sp.add_argument("--type", required=True, help='e.g. "T (b -> b)"')
    sp.add_argument("--base", help="base relations JSON (default: diagonals)")
    common(sp, seeded=False)
    sp.set_defaults(fn=cmd_logrel)

    sp = sub.add_parser("basic-lemma",
                        help="related environments give related meanings")
    sp.add_argument("--model1", required=True)
    sp.add_argument("--model2", required=True)
    sp.add_argument("--base")
    sp.add_argument("--term", help="term source file (omit to generate)")
    sp.add_argument("--ctx", default="",
                    help='typing context, e.g. "x:b, m:T b"')
    sp.add_argument("--count", type=int, default=100,
                    help="generated terms to check")
    sp.add_argument("--max-size", type=int, default=8,
                    help="largest generated term")
    common(sp)
    sp.set_defaults(fn=cmd_basic_lemma)

    sp = sub.add_parser("poset-lift",
                        help="lift an ordered relation in one or both systems")
    sp.add_argument("--rel", required=True, help="ordered relation JSON")
    sp.add_argument("--system", default="both",
                    choices=["both", "epi-regmono", "extremalepi-mono"])
    common(sp, seeded=False)
    sp.set_defaults(fn=cmd_poset_lift)

    return p


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors and 0 on --help; keep both
        return int(e.code or 0)
    try:
        return args.fn(args)
    except _Usage as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
