"""Command-line front end.

Every verb prints a human report on stdout.  ``--json-like`` switches the
report to JSON (sorted keys, stable order); ``--json-like PATH`` keeps the
human report and writes the JSON to PATH.  Exit status: 0 on success, 1 when
the input is rejected (the diagnostic is printed on stderr), 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .calculus import Rejection, TheoryError, check_fin, format_proof, format_theory, load_proof, load_theory
from .omega import (
    BudgetExceeded, CodeSpec, EmbedError, OutOfTree, descriptor, expand, format_code, iter_expanded,
    load_code, render_expanded,
)
from .ordinal import (
    EQ, GT, LT, OrdinalError, compare, decode_nat, encode_nat, format_ordinal, omega_tower, parse_ordinal,
)
from .schemas import build_RFN
from .syntax import classify, encode, parse, print_formula
from .synth import (
    MAX_LIFT, SynthError, XiContext, XiError, audit_sequent_truth, audit_Xi_truth, synth_induction_instance,
    synth_lift, synth_reflection_to_induction,
)
from .truth import DEFAULT_UNIVERSE, EvalError, load_universe


class Failure(Exception):
    """Validation failure: exit status 1."""


# -- output ----------------------------------------------------------------------------

class Out:
    def __init__(self, json_like):
        self.json_like = json_like
        self.lines = []
        self.data = {}

    def put(self, key, value, text=None):
        self.data[key] = value
        if text is not False:
            self.lines.append(f"{key}: {value}" if text is None else text)

    def text(self, line):
        self.lines.append(line)

    def flush(self, verb):
        self.data = {"verb": verb, **self.data}
        js = json.dumps(self.data, sort_keys=True, indent=1) + "\n"
        human = "\n".join(self.lines) + ("\n" if self.lines else "")
        if self.json_like == "-":
            sys.stdout.write(js)
        else:
            sys.stdout.write(human)
            if self.json_like:
                Path(self.json_like).write_text(js)


def _write(path, text):
    if path:
        Path(path).write_text(text)


def _formula(args):
    text = args.phi
    if text.startswith("@"):
        text = Path(text[1:]).read_text().strip()
    return parse(text)


def _report_dict(rep):
    return {"height": rep.height, "size": rep.size, "cut_ranks": rep.cut_ranks,
            "max_cut_rank": rep.max_cut_rank, "axioms": dict(sorted(rep.axiom_tags.items())),
            "obligations": [list(o) for o in rep.obligations],
            "schema_instances": [list(s) for s in rep.schema_instances]}


def _put_report(out, rep):
    out.data["report"] = _report_dict(rep)
    for line in rep.lines():
        out.text(line)


def _node_dict(n):
    return {"rule": n.rule, "tag": format_ordinal(n.tag), "cut_rank": n.cut_rank,
            "principal": None if n.principal is None else print_formula(n.principal),
            "arg": None if n.arg is None else n.arg_text(),
            "seq": [print_formula(f) for f in n.seq]}


def _expanded_dict(e):
    d = {"pos": list(e.pos), **_node_dict(e.node), "violation": e.violation, "truncated": e.truncated}
    d["children"] = [_expanded_dict(k) for k in e.children]
    return d


# -- verbs ------------------------------------------------------------------------------

def cmd_ordinal(args, out):
    if args.op == "eval":
        a = decode_nat(int(args.args[0])) if args.code else parse_ordinal(args.args[0])
        out.put("cnf", format_ordinal(a))
        out.put("code", encode_nat(a))
        out.put("finite", a.is_finite())
    elif args.op == "cmp":
        a, b = (parse_ordinal(t) for t in args.args[:2])
        out.put("result", {LT: "LT", EQ: "EQ", GT: "GT"}[compare(a, b)])
    else:
        k = int(args.args[0])
        t = omega_tower(k)
        out.put("tower", k)
        out.put("cnf", format_ordinal(t))
        out.put("code", encode_nat(t))


def cmd_parse(args, out):
    f = _formula(args)
    out.put("formula", print_formula(f))
    out.put("code", encode(f))


def cmd_classify(args, out):
    c = classify(_formula(args))
    for k in ("tag", "level", "pi1", "sigma1", "rank", "lightface", "closed"):
        out.put(k, getattr(c, k))


def cmd_check(args, out):
    th = load_theory(args.theory)
    rep = check_fin(load_proof(args.proof), th)
    out.put("theory", th.name)
    out.put("accepted", True)
    _put_report(out, rep)


def _code_summary(out, c):
    n = descriptor(c)
    out.put("end_sequent", [print_formula(f) for f in c.end_sequent], "end-sequent: "
            + ", ".join(print_formula(f) for f in c.end_sequent))
    out.put("tag", format_ordinal(n.tag))
    out.put("cut_rank", n.cut_rank)


def cmd_embed(args, out):
    th = load_theory(args.theory)
    p = load_proof(args.proof)
    check_fin(p, th)
    env = tuple((k, int(v)) for k, _, v in (e.partition(":") for e in args.env))
    spec = CodeSpec(th, p, env)
    _code_summary(out, spec.build())
    _emit_artifact(out, args, format_code(spec), "code")


def cmd_expand(args, out):
    c = load_code(args.code).build()
    e = expand(c, args.depth, args.width, args.max_nodes)
    bad = [(x.pos, x.violation) for x in iter_expanded(e) if x.violation]
    out.data["tree"] = _expanded_dict(e)
    out.text(render_expanded(e, args.width))
    out.put("violations", [[".".join(map(str, p)) or "-", v] for p, v in bad],
            f"violations: {len(bad)}")
    if bad:
        out.failed = f"local check failed at {'.'.join(map(str, bad[0][0])) or '-'}: {bad[0][1]}"


def cmd_elim(args, out):
    spec = load_code(args.code)
    c = spec.build()
    steps = c.cut_rank if args.all else args.steps
    if steps > c.cut_rank:
        raise Failure(f"cannot eliminate {steps} levels from cut rank {c.cut_rank}")
    for _ in range(steps):
        spec = spec.with_op("elim")
    _code_summary(out, spec.build())
    _emit_artifact(out, args, format_code(spec), "code")


def cmd_induct(args, out):
    p = synth_induction_instance(_formula(args), args.var, args.n)
    rep = check_fin(p, load_theory(args.theory) if args.theory else _pure())
    out.put("conclusion", print_formula(p.seq[0]))
    _put_report(out, rep)
    _emit_artifact(out, args, format_proof(p) + "\n", "proof")


def cmd_lift(args, out):
    r = synth_lift(_formula(args), args.var, args.k, max_k=args.max_k)
    rep = check_fin(r.proof, r.theory)
    out.put("conclusion", print_formula(r.proof.seq[0]))
    out.put("bound_code", r.bound_code)
    out.put("induction_level", r.level)
    _put_report(out, rep)
    if args.theory_out:
        _write(args.theory_out, format_theory(r.theory))
    _emit_artifact(out, args, format_proof(r.proof) + "\n", "proof")


def cmd_rfn(args, out):
    th = load_theory(args.theory)
    phi = _formula(args)
    ds = th.descriptors("rfn")
    if not ds:
        raise Failure(f"theory {th.name} declares no rfn schema")
    out.put("instance", print_formula(build_RFN(th.pr_name(ds[0]), phi, args.var)))
    if args.proof:
        p = synth_reflection_to_induction(phi, args.var, th)
        rep = check_fin(p, th)
        out.put("conclusion", print_formula(p.seq[0]))
        _put_report(out, rep)
        _write(args.proof, format_proof(p) + "\n")


def _load_ctx(path, th):
    fields = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        k, sep, v = line.partition("=")
        if not sep:
            raise Failure(f"{path}:{lineno}: expected key = value")
        fields[k.strip()] = v.strip().strip('"')
    psi = parse(fields["psi"]) if "psi" in fields else th.axiom
    if psi is None or "target" not in fields:
        raise Failure(f"{path}: needs a target (and psi unless the theory has an axiom)")
    return XiContext(psi, parse(fields["target"]), int(fields.get("n", 0)), fields.get("x0"))


def cmd_audit(args, out):
    spec = load_code(args.code)
    c = spec.build()
    u = load_universe(args.universe) if args.universe else DEFAULT_UNIVERSE
    if args.plain:
        rep = audit_sequent_truth(c, u, args.depth, args.width, args.budget)
    else:
        if not args.ctx:
            raise Failure("audit needs --ctx (or --plain)")
        rep = audit_Xi_truth(c, _load_ctx(args.ctx, spec.theory), u, args.depth, args.width,
                             args.budget, x0_all=args.x0_all)
    out.data["rows"] = [{"pos": ".".join(map(str, r.pos)) or "-", "class": r.kind, "verdict": r.verdict,
                         "note": r.note, "x0": r.x0} for r in rep.rows]
    out.data["counts"] = dict(sorted(rep.counts().items()))
    out.text(rep.format().rstrip("\n"))
    if rep.violations:
        r = rep.violations[0]
        out.failed = f"soundness violation at {'.'.join(map(str, r.pos)) or '-'} ({r.note})"


def _pure():
    from .calculus import make_theory
    return make_theory("pure", None, [])


def _emit_artifact(out, args, text, kind):
    if args.out:
        _write(args.out, text)
        out.put(kind, args.out, f"{kind} written to {args.out}")
    else:
        out.data[kind] = text
        out.text(text.rstrip("\n"))


# -- parser -----------------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json-like", nargs="?", const="-", default=None, metavar="PATH",
                        help="JSON report on stdout, or into PATH alongside the text report")
    p = argparse.ArgumentParser(prog="omegarfn", description="Ordinal analysis toolkit.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("ordinal", parents=[common], help="ordinal notation arithmetic")
    s.add_argument("op", choices=("eval", "cmp", "tower"))
    s.add_argument("args", nargs="+")
    s.add_argument("--code", action="store_true", help="eval: the argument is a code")
    s.set_defaults(func=cmd_ordinal, nargs_needed={"eval": 1, "cmp": 2, "tower": 1})

    for name, func in (("parse", cmd_parse), ("classify", cmd_classify)):
        s = sub.add_parser(name, parents=[common], help=f"{name} a formula")
        s.add_argument("phi", help="formula text, or @file")
        s.set_defaults(func=func)

    s = sub.add_parser("check", parents=[common], help="check a finitary proof")
    s.add_argument("proof")
    s.add_argument("--theory", required=True)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("embed", parents=[common], help="embed a proof as an omega-code")
    s.add_argument("proof")
    s.add_argument("--theory", required=True)
    s.add_argument("--env", nargs="*", default=[], metavar="VAR:N")
    s.add_argument("-o", "--out")
    s.set_defaults(func=cmd_embed)

    s = sub.add_parser("expand", parents=[common], help="expand a code to finite depth")
    s.add_argument("code")
    s.add_argument("--depth", type=int, default=3)
    s.add_argument("--width", type=int, default=3)
    s.add_argument("--max-nodes", type=int, default=100_000)
    s.set_defaults(func=cmd_expand)

    s = sub.add_parser("elim", parents=[common], help="apply cut-rank reduction")
    s.add_argument("code")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--steps", type=int, default=1)
    g.add_argument("--all", action="store_true")
    s.add_argument("-o", "--out")
    s.set_defaults(func=cmd_elim)

    s = sub.add_parser("induct", parents=[common], help="synthesize an induction instance")
    s.add_argument("--phi", required=True)
    s.add_argument("--var", default="x")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--theory")
    s.add_argument("-o", "--out")
    s.set_defaults(func=cmd_induct)

    s = sub.add_parser("lift", parents=[common], help="synthesize a transfinite-induction lift")
    s.add_argument("--phi", required=True)
    s.add_argument("--var", default="x")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--max-k", type=int, default=MAX_LIFT, help="resource gate on k")
    s.add_argument("--theory-out")
    s.add_argument("-o", "--out")
    s.set_defaults(func=cmd_lift)

    s = sub.add_parser("rfn", parents=[common], help="reflection instance (and induction from it)")
    s.add_argument("--theory", required=True)
    s.add_argument("--phi", required=True)
    s.add_argument("--var", default="x")
    s.add_argument("--proof", help="also synthesize induction from reflection into this file")
    s.set_defaults(func=cmd_rfn)

    s = sub.add_parser("audit", parents=[common], help="truth audit of a cut-free code")
    s.add_argument("--code", required=True)
    s.add_argument("--ctx")
    s.add_argument("--universe")
    s.add_argument("--depth", type=int, default=3)
    s.add_argument("--width", type=int, default=3)
    s.add_argument("--budget", type=int, default=1000)
    s.add_argument("--x0-all", action="store_true", help="repeat for every choice of X0")
    s.add_argument("--plain", action="store_true", help="require a true formula in every sequent")
    s.set_defaults(func=cmd_audit)
    return p


ERRORS = (Failure, Rejection, TheoryError, EmbedError, OutOfTree, BudgetExceeded, OrdinalError,
          SynthError, XiError, EvalError, ValueError, OSError, KeyError)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        need = getattr(args, "nargs_needed", {}).get(getattr(args, "op", None))
        if need is not None and len(args.args) != need:
            parser.error(f"ordinal {args.op} takes {need} argument(s)")
    except SystemExit as e:           # argparse: 2 on usage errors, 0 for --help
        return e.code
    out = Out(args.json_like)
    out.failed = None
    try:
        args.func(args, out)
    except ERRORS as e:
        msg = str(e) if not isinstance(e, KeyError) else f"missing {e}"
        print(f"error: {msg}", file=sys.stderr)
        return 1
    out.flush(args.verb)
    if out.failed:
        print(f"error: {out.failed}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
