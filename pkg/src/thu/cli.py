"""Command-line driver: ``thu check|normalize|classify|catalog|verify-theory|fragment|encode-pts``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import catalog as cat
from .encoders import encode_pts, parse_pts_spec
from .errors import KernelError, ParseError
from .fragments import classify, fragment_closure
from .kernel import Checker, declare, lint_user_term
from .rewrite import DEFAULT_FUEL, Normalizer, check_orthogonality
from .signature import Context, Theory, add_rule, append_declaration
from .syntax import (
    Check,
    Classify,
    Conv,
    Infer,
    Normalize,
    Require,
    RuleDecl,
    Script,
    SymbolDecl,
    format_term,
    parse,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class NotConvertible(KernelError):
    pass


@dataclass
class Record:
    status: str  # OK or ERROR
    command: str
    payload: str
    text: str | None = None  # human-readable line(s); None means silent in text mode


@dataclass
class Session:
    """Runs statements in order against an ambient theory."""

    theory: Theory = field(default_factory=Theory)
    fuel: int = DEFAULT_FUEL
    mode: str = "check"  # check, normalize or classify

    def require(self, name: str) -> None:
        base = cat.subtheory(name)
        # keep what the script already declared on top of the requested theory
        sig = base.signature
        for d in self.theory.signature:
            if d.name not in sig:
                sig = append_declaration(sig, d.name, d.type, d.dagger)
        th = Theory(sig, base.rules, base.clusters, base.name)
        for r in self.theory.rules:
            if r.name not in th.rule_names:
                th = add_rule(th, r)
        self.theory = th

    def run(self, st) -> Record | None:
        th = self.theory
        match st:
            case Require(name):
                self.require(name)
                return Record("OK", "REQUIRE", name)
            case SymbolDecl(name, ty, dagger):
                lint_user_term(th, ty)
                self.theory = declare(th, name, ty, dagger, self.fuel)
                return Record("OK", "SYMBOL", name)
            case RuleDecl():
                rule = st.to_rule(th.signature, default_name=f"rule{len(th.rules) + 1}")
                self.theory = add_rule(th, rule)
                return Record("OK", "RULE", rule.name)

        if self.mode == "normalize" and not isinstance(st, Normalize):
            return None
        if self.mode == "classify" and not isinstance(st, (Check, Classify)):
            return None
        k = Checker(th, self.fuel)
        ctx = Context()
        match st:
            case Check(t, a) if self.mode != "classify":
                lint_user_term(th, t)
                lint_user_term(th, a)
                k.check(ctx, t, a)
                line = f"{format_term(t)} : {format_term(a)}"
                return Record("OK", "CHECK", line, f"checked {line}")
            case Check(t, a) | Classify(t, a):
                lint_user_term(th, t)
                lint_user_term(th, a)
                k.check(ctx, t, a)
                rep = classify(th, ctx, t, a, fuel=self.fuel)
                return Record("OK", "CLASSIFY", json.dumps(rep.to_record(), sort_keys=True), rep.to_text())
            case Infer(t):
                lint_user_term(th, t)
                ty = k.infer(ctx, t)
                line = f"{format_term(t)} : {format_term(ty)}"
                return Record("OK", "INFER", line, line)
            case Normalize(t):
                lint_user_term(th, t)
                k.infer(ctx, t)
                nf = Normalizer(th, self.fuel).nf(t)
                return Record("OK", "NORMALIZE", format_term(nf), format_term(nf))
            case Conv(t, u):
                lint_user_term(th, t)
                lint_user_term(th, u)
                if not Normalizer(th, self.fuel).convertible(t, u):
                    raise NotConvertible(f"{format_term(t)} and {format_term(u)} are not convertible")
                line = f"{format_term(t)} == {format_term(u)}"
                return Record("OK", "CONV", line, f"convertible {line}")
        raise TypeError(st)


def _command_name(st) -> str:
    return {
        SymbolDecl: "SYMBOL",
        RuleDecl: "RULE",
        Check: "CHECK",
        Infer: "INFER",
        Normalize: "NORMALIZE",
        Conv: "CONV",
        Classify: "CLASSIFY",
        Require: "REQUIRE",
    }[type(st)]


def run_script(script: Script, session: Session, path: str, fmt: str, keep_going: bool, out, err) -> int:
    status = EXIT_OK
    for st in script.statements:
        try:
            rec = session.run(st)
        except KernelError as e:
            line, col = st.pos
            diag = f"{path}:{line}:{col}: error[{e.code}]: {e}"
            if fmt == "records":
                print(f"ERROR\t{_command_name(st)}\t{diag}", file=out)
            else:
                print(diag, file=err)
            status = EXIT_FAIL
            if not keep_going:
                break
            continue
        if rec is None:
            continue
        if fmt == "records":
            print(f"{rec.status}\t{rec.command}\t{rec.payload}", file=out)
        elif rec.text is not None:
            print(rec.text, file=out)
    return status


def _initial_theory(name: str | None) -> Theory:
    return Theory() if name is None else cat.subtheory(name)


def cmd_scripts(args, out, err) -> int:
    worst = EXIT_OK
    for path in args.files:
        try:
            with open(path, encoding="utf-8") as fh:
                src = fh.read()
        except OSError as e:
            print(f"{path}: error[IOError]: {e.strerror}", file=err)
            return EXIT_USAGE
        try:
            script = parse(src)
        except ParseError as e:
            diag = f"{path}:{e.line}:{e.column}: error[{e.code}]: expected {e.expectation}"
            if args.format == "records":
                print(f"ERROR\tPARSE\t{diag}", file=out)
            else:
                print(diag, file=err)
            return EXIT_USAGE
        session = Session(_initial_theory(args.theory), args.fuel, args.verb)
        code = run_script(script, session, path, args.format, args.keep_going, out, err)
        worst = max(worst, code)
        if code and not args.keep_going:
            break
    return worst


def cmd_catalog(args, out, err) -> int:
    th = cat.subtheory(args.name or args.theory or "theory-u")
    if args.format == "records":
        for rec in cat.manifest_records(th):
            print(f"OK\tCLUSTER\t{json.dumps(rec, ensure_ascii=False, sort_keys=True)}", file=out)
    else:
        out.write(cat.manifest_text(th))
    return EXIT_OK


def cmd_verify(args, out, err) -> int:
    name = args.name or args.theory
    entries = [cat.catalog_entry(name)] if name else list(cat.CATALOG)
    ok = True
    for e in entries:
        rep = cat.verify_entry(e)
        ok &= rep.ok
        if args.format == "records":
            payload = {
                "name": rep.name,
                "fragment": rep.fragment_ok,
                "orthogonal": rep.orthogonal,
                "preserved": sum(p.verdict for p in rep.preservation),
                "rules": len(rep.preservation),
                "violations": [str(v) for v in rep.violations],
            }
            print(f"{'OK' if rep.ok else 'ERROR'}\tVERIFY\t{json.dumps(payload, sort_keys=True)}", file=out)
        else:
            print(rep.to_text(), file=out)
            if name:
                print(check_orthogonality(cat.subtheory(name).rules).to_text(), file=out)
                for p in rep.preservation:
                    print(p.to_text(), file=out)
    if args.format != "records" and not name:
        print(f"{sum(1 for _ in entries)} entries checked: {'all confirmed' if ok else 'FAILURES'}", file=out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_fragment(args, out, err) -> int:
    th = cat.subtheory(args.theory or "theory-u")
    seed = [s for s in args.seed.split(",") if s]
    rep = fragment_closure(th, seed)
    if args.format == "records":
        print(f"OK\tFRAGMENT\t{json.dumps(rep.to_record(), sort_keys=True)}", file=out)
    else:
        print(rep.to_text(), file=out)
    return EXIT_OK


def cmd_encode_pts(args, out, err) -> int:
    th = encode_pts(parse_pts_spec(args.spec))
    if args.format == "records":
        for rec in cat.manifest_records(th):
            print(f"OK\tCLUSTER\t{json.dumps(rec, ensure_ascii=False, sort_keys=True)}", file=out)
    else:
        out.write(cat.manifest_text(th))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--fuel", type=int, default=DEFAULT_FUEL, help="rewrite step budget per command")
    common.add_argument("--theory", default=None, help="catalog entry to start from")
    common.add_argument("--keep-going", action="store_true", help="report every error, not just the first")
    common.add_argument("--format", choices=("text", "records"), default="text")

    p = argparse.ArgumentParser(prog="thu", description=__doc__)
    sub = p.add_subparsers(dest="verb", required=True)
    s = sub.add_parser("check", parents=[common], help="run every statement of the scripts")
    s.add_argument("files", nargs="+")
    s = sub.add_parser("normalize", parents=[common], help="print the normal form of each #NORMALIZE")
    s.add_argument("files", nargs=1)
    s = sub.add_parser("classify", parents=[common], help="classify each #CHECK and #CLASSIFY judgement")
    s.add_argument("files", nargs=1)
    s = sub.add_parser("catalog", parents=[common], help="print a theory cluster by cluster")
    s.add_argument("name", nargs="?")
    s = sub.add_parser("verify-theory", parents=[common], help="orthogonality, preservation and fragment checks")
    s.add_argument("name", nargs="?")
    s = sub.add_parser("fragment", parents=[common], help="print the least fragment containing some constants")
    s.add_argument("--seed", required=True, help="comma-separated constants")
    s = sub.add_parser("encode-pts", parents=[common], help="print the encoding of a functional PTS")
    s.add_argument("spec", help="e.g. 'sorts: * box; axioms: *:box; rules: *,*,* *,box,box'")
    return p


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    if args.fuel <= 0:
        print("thu: error: --fuel must be positive", file=err)
        return EXIT_USAGE
    handler = {
        "check": cmd_scripts,
        "normalize": cmd_scripts,
        "classify": cmd_scripts,
        "catalog": cmd_catalog,
        "verify-theory": cmd_verify,
        "fragment": cmd_fragment,
        "encode-pts": cmd_encode_pts,
    }[args.verb]
    try:
        return handler(args, out, err)
    except KernelError as e:
        # unknown catalog names, bad seeds, bad specs: usage errors
        print(f"thu: error[{e.code}]: {e}", file=err)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
