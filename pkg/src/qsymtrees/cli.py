"""Command-line front end.

Exit codes: 0 success, 1 domain error (cycles, unrealizable assignments,
guards, unreadable files), 2 usage error (argparse).  JSON output is the
source of truth; the text renderings are produced from the same values.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import families, verify
from .digraphs import (chromatic_qsym_t, parse_digraph_inline,
                       parse_digraph_text)
from .errors import DomainError
from .posets import (antichain_counts, anti_table, canonical_key, enumerator_m,
                     greene_shape, is_fair_tree, is_in_class_c, jump_pairs,
                     jump_vector, leading_term_check, linear_extension_count,
                     parse_poset_inline, parse_poset_text, realize_labeling)
from .qsym import m_to_f, principal_specialization


def _read_file(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc}") from exc


def _load_posets(args):
    out = []
    for path in args.file or []:
        out.append(parse_poset_text(_read_file(path)))
    for literal in args.poset or []:
        out.append(parse_poset_inline(literal))
    if not out:
        raise DomainError("no poset given; use --file or --poset")
    return out


def _load_digraphs(args):
    out = []
    for path in args.file or []:
        out.append(parse_digraph_text(_read_file(path)))
    for literal in args.digraph or []:
        out.append(parse_digraph_inline(literal))
    if not out:
        raise DomainError("no digraph given; use --file or --digraph")
    return out


def _emit(args, json_obj, text):
    if args.output == "json":
        print(json.dumps(json_obj, indent=2))
    else:
        print(text)


def _cmd_kpw(args):
    P = _load_posets(args)[0]
    if args.basis == "F":
        realize_labeling(P)  # the F expansion needs a realizable assignment
        expr = m_to_f(enumerator_m(P))
    else:
        expr = enumerator_m(P)
    _emit(args, expr.to_json_obj(), str(expr))
    return 0


def _cmd_xgt(args):
    G = _load_digraphs(args)[0]
    X = chromatic_qsym_t(G, guard=families.guard_limit(9), force=args.force)
    _emit(args, X.to_json_obj(), str(X))
    return 0


def _cmd_spec(args):
    P = _load_posets(args)[0]
    if args.k is None:
        raise DomainError("spec requires --k")
    if args.strictness == "strict":
        P = P.with_all_strict()
    elif args.strictness == "weak":
        P = P.with_all_weak()
    poly = principal_specialization(enumerator_m(P), args.k)
    _emit(args, poly.to_json_obj(), str(poly))
    return 0


def _cmd_invariants(args):
    P = _load_posets(args)[0]
    data = {
        "n": P.n,
        "canonical_key": canonical_key(P).decode(),
        "linear_extensions": linear_extension_count(P),
        "jump_vector": list(jump_vector(P)),
        "jump_pairs": {f"{i},{j}": c for (i, j), c in sorted(jump_pairs(P).items())},
        "antichain_counts": {str(s): c for s, c in sorted(antichain_counts(P).items())},
        "anti_table": {f"{k},{i},{j}": c
                       for (k, i, j), c in sorted(anti_table(P).items())},
        "greene_shape": list(greene_shape(P)),
        "is_fair_tree": is_fair_tree(P),
        "in_class_c": is_in_class_c(P),
    }
    vec, ok = leading_term_check(P)
    data["leading_term_exponents"] = list(vec)
    data["leading_term_matches"] = ok
    lines = [f"{k}: {v}" for k, v in data.items()]
    _emit(args, data, "\n".join(lines))
    return 0


def _cmd_iso(args):
    ps = _load_posets(args)
    if len(ps) != 2:
        raise DomainError("iso compares exactly two posets")
    P, Q = ps
    iso = canonical_key(P) == canonical_key(Q)
    kp_equal = enumerator_m(P.with_all_weak()) == enumerator_m(Q.with_all_weak())
    kpw_equal = enumerator_m(P) == enumerator_m(Q)
    data = {"isomorphic": iso, "kp_equal": kp_equal, "kpw_equal": kpw_equal}
    word = "isomorphic" if iso else "non-isomorphic"
    txt = f"{word}; K_P {'equal' if kp_equal else 'different'}"
    if not P.is_all_weak() or not Q.is_all_weak():
        txt += f"; K_(P,w) {'equal' if kpw_equal else 'different'}"
    _emit(args, data, txt)
    return 0


def _cmd_enumerate(args):
    spec = families.FamilySpec(args.family, args.n, args.policy)
    start, stop = 0, None
    if args.range:
        try:
            a, b = args.range.split("..")
            start, stop = int(a), int(b)
        except ValueError:
            raise DomainError(f"bad --range {args.range!r}; expected a..b") from None
    stream = families.iter_family(spec, start, stop, force=args.force)
    if args.count_only:
        count = sum(1 for _ in stream)
        _emit(args, {"family": spec.describe(), "count": count}, str(count))
        return 0
    blocks = [families.family_text(spec, obj) for obj in stream]
    if args.output == "json":
        print(json.dumps({"family": spec.describe(),
                          "objects": [b.strip() for b in blocks]}, indent=2))
    else:
        print("\n".join(blocks).rstrip("\n"))
    return 0


def _cmd_verify(args):
    kw = dict(jobs=args.jobs, force=args.force)
    if args.checkpoint:
        kw["checkpoint_path"] = args.checkpoint
    name = args.conjecture
    if name == "c2":
        reports = [verify.conjecture2_scan(args.n, **kw)]
    elif name == "c3":
        reports = [verify.conjecture3_scan(args.n, **kw)]
    elif name == "fair":
        reports = [verify.fair_tree_scan(args.n, **kw)]
    elif name == "spec":
        reports = list(verify.spec_scan(args.n, args.k, **kw))
    elif name == "xgt":
        reports = [verify.xgt_scan(args.n, **kw)]
    elif name == "multiset":
        reports = [verify.multiset_question_scan(args.n, force=args.force)]
    else:
        raise DomainError(f"unknown conjecture {name!r}")
    if args.output == "json":
        payload = [r.to_json_obj() for r in reports]
        print(json.dumps(payload[0] if len(payload) == 1 else payload, indent=2))
    else:
        for r in reports:
            print(r.render_text())
    return 0


def build_parser():
    top = argparse.ArgumentParser(
        prog="qsymtrees",
        description="Partition enumerators of labeled posets, chromatic "
                    "quasisymmetric functions of digraphs, and exhaustive "
                    "distinguishing scans over tree families.")
    top.add_argument("--seed", type=int, default=0,
                     help="seed for any sampled subchecks (scans are exhaustive)")
    sub = top.add_subparsers(dest="command", required=True)

    def add_common(p, poset=False, digraph=False):
        p.add_argument("--file", action="append", help="input file (repeatable)")
        if poset:
            p.add_argument("--poset", action="append",
                           help="inline poset literal like '3; 1<2 W; 1<3 S'")
        if digraph:
            p.add_argument("--digraph", action="append",
                           help="inline digraph literal like '3; 1->2; 3->2'")
        p.add_argument("--output", choices=("json", "text"), default="text")
        p.add_argument("--force", action="store_true",
                       help="override size guards")

    p = sub.add_parser("kpw", help="partition enumerator of a labeled poset")
    add_common(p, poset=True)
    p.add_argument("--basis", choices=("M", "F"), default="F")
    p.set_defaults(fn=_cmd_kpw)

    p = sub.add_parser("xgt", help="chromatic quasisymmetric function in t")
    add_common(p, digraph=True)
    p.set_defaults(fn=_cmd_xgt)

    p = sub.add_parser("spec", help="principal specialization of an enumerator")
    add_common(p, poset=True)
    p.add_argument("--k", type=int, help="specialization order")
    p.add_argument("--strictness", choices=("as-is", "strict", "weak"),
                   default="as-is")
    p.set_defaults(fn=_cmd_spec)

    p = sub.add_parser("invariants", help="necessary-condition battery")
    add_common(p, poset=True)
    p.set_defaults(fn=_cmd_invariants)

    p = sub.add_parser("iso", help="compare two posets")
    add_common(p, poset=True)
    p.set_defaults(fn=_cmd_iso)

    p = sub.add_parser("enumerate", help="stream a canonical family")
    p.add_argument("--family", required=True, choices=families.FAMILIES)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--policy", choices=families.POLICIES, default=None)
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--range", help="index range a..b (half-open)")
    p.add_argument("--output", choices=("json", "text"), default="text")
    p.add_argument("--force", action="store_true")
    p.set_defaults(fn=_cmd_enumerate)

    p = sub.add_parser("verify", help="run a conjecture scan")
    p.add_argument("--conjecture", required=True,
                   choices=("c2", "c3", "fair", "spec", "xgt", "multiset"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=None,
                   help="specialization order for --conjecture spec")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--checkpoint", help="checkpoint path for resumable scans")
    p.add_argument("--output", choices=("json", "text"), default="text")
    p.add_argument("--force", action="store_true")
    p.set_defaults(fn=_cmd_verify)

    return top


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
