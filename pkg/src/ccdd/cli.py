"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 unreadable or malformed input,
3 resource limit, 4 internal invariant failure (including a failed
``verify``).  Results go to standard output, diagnostics to standard error.
"""

from __future__ import annotations

import argparse
import sys
import time
import typing as t
from collections import Counter
from pathlib import Path

from . import diagram as dg
from .compiler import CompilerConfig, ResourceLimitError, compile_cnf
from .counter import COUNTING_CONFIG, CountError, ct, exact_mc, materialize
from .formula import CnfFormula, DimacsError, evaluate, parse_dimacs
from .oracle import MAX_VARS, brute_count, brute_models, chi_square_uniform
from .queries import InconsistentTermError, consistency, enumerate_models, implicant_check, validity
from .sampler import SamplerState, format_model, sample

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3
EXIT_INTERNAL = 4


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class CheckFailed(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> t.NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _input_format(path: str, override: t.Optional[str]) -> str:
    if override:
        return override
    suffix = Path(path).suffix.lower()
    if suffix == ".ccdd":
        return "ccdd"
    if suffix in (".cnf", ".dimacs"):
        return "cnf"
    raise UsageError(f"cannot tell the format of {path!r}; pass --format")


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _load_cnf(path: str) -> CnfFormula:
    try:
        return parse_dimacs(_read(path))
    except (DimacsError, UnicodeDecodeError) as e:
        raise InputError(f"{path}: {e}") from None


def _load_ccdd(path: str) -> dg.Diagram:
    try:
        return dg.deserialize(_read(path))
    except (dg.CcddFormatError, dg.DiagramError, UnicodeDecodeError) as e:
        raise InputError(f"{path}: {e}") from None


def _config(args: argparse.Namespace, base: CompilerConfig) -> CompilerConfig:
    return CompilerConfig(
        kernelization_enabled=not args.no_kernelize,
        pre_kernelize=getattr(args, "pre_kernelize", base.pre_kernelize),
        order_mode=args.order,
        crossover_divisor=getattr(args, "crossover_divisor", None) or base.crossover_divisor,
        node_budget=getattr(args, "node_budget", None) or base.node_budget,
    )


def _write(path: t.Optional[str], data: bytes) -> None:
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        Path(path).write_bytes(data)


def _stats_line(d: dg.Diagram) -> str:
    s = dg.stats(d)
    return (f"nodes={s['nodes']} edges={s['edges']} knodes={s['kernelized_node_count']} "
            f"decisions={s['decision_count']} max_depth={s['max_depth']}")


def cmd_compile(args: argparse.Namespace) -> int:
    phi = _load_cnf(args.input)
    t0 = time.perf_counter()
    d = compile_cnf(phi, _config(args, CompilerConfig()))
    elapsed = (time.perf_counter() - t0) * 1000
    out = args.out or str(Path(args.input).with_suffix(".ccdd"))
    _write(out, dg.serialize(d))
    s = dg.stats(d)
    print(f"nodes={s['nodes']} edges={s['edges']} knodes={s['kernelized_node_count']} "
          f"time_ms={elapsed:.0f}")
    return EXIT_OK


def cmd_count(args: argparse.Namespace) -> int:
    if _input_format(args.input, args.format) == "ccdd":
        count = ct(_load_ccdd(args.input)).root
    else:
        count = exact_mc(_load_cnf(args.input), _config(args, COUNTING_CONFIG))
    print(materialize(count))
    return EXIT_OK


def _diagram_for(args: argparse.Namespace) -> t.Tuple[dg.Diagram, t.Optional[CnfFormula]]:
    if _input_format(args.input, args.format) == "ccdd":
        return _load_ccdd(args.input), None
    phi = _load_cnf(args.input)
    return compile_cnf(phi, CompilerConfig()), phi


def cmd_sample(args: argparse.Namespace) -> int:
    if args.n < 0:
        raise UsageError("-n must be nonnegative")
    d, _ = _diagram_for(args)
    st = SamplerState(d, seed=args.seed, scope=range(1, d.num_vars + 1))
    if not st.count:
        _log("formula is unsatisfiable; no samples written")
        _write(args.out, b"")
        return EXIT_OK
    lines = [format_model(sample(st)) + "\n" for _ in range(args.n)]
    _write(args.out, "".join(lines).encode("ascii"))
    return EXIT_OK


def cmd_query(args: argparse.Namespace) -> int:
    d = _load_ccdd(args.input)
    if args.query == "imply":
        try:
            lits = [int(tok) for tok in args.lits.split()]
        except ValueError:
            raise UsageError(f"bad literal list {args.lits!r}") from None
        if any(l == 0 or abs(l) > d.num_vars for l in lits):
            raise UsageError("literal out of range")
        try:
            print("yes" if implicant_check(d, lits) else "no")
        except InconsistentTermError as e:
            raise UsageError(str(e)) from None
    elif args.query == "consistent":
        print("yes" if consistency(d) else "no")
    elif args.query == "valid":
        print("yes" if validity(d) else "no")
    else:
        for model in enumerate_models(d, limit=args.limit):
            sys.stdout.write(format_model(model) + "\n")
    return EXIT_OK


def _read_samples(path: str, num_vars: int) -> t.List[t.Dict[int, bool]]:
    out = []
    for lineno, line in enumerate(_read(path).decode("ascii").splitlines(), 1):
        try:
            lits = [int(tok) for tok in line.split()]
        except ValueError:
            raise InputError(f"{path}:{lineno}: bad literal") from None
        if any(l == 0 or abs(l) > num_vars for l in lits):
            raise InputError(f"{path}:{lineno}: literal out of range")
        out.append({abs(l): l > 0 for l in lits})
    return out


def cmd_verify(args: argparse.Namespace) -> int:
    phi = _load_cnf(args.input)
    failures = []
    mc = int(exact_mc(phi))
    d = _load_ccdd(args.ccdd) if args.ccdd else compile_cnf(phi)
    problems = dg.validate(d)
    if problems:
        failures.append(f"diagram invalid: {problems[0].message}")
    via_ct = int(ct(d, range(1, phi.num_vars + 1)).root)
    print(f"exact_mc={mc}")
    print(f"compile_ct={via_ct}")
    if mc != via_ct:
        failures.append("exact_mc and compile+ct disagree")
    if phi.num_vars <= MAX_VARS:
        oracle = brute_count(phi)
        print(f"brute_count={oracle}")
        if oracle != mc:
            failures.append("exact_mc and brute force disagree")
    else:
        _log(f"brute-force count skipped: {phi.num_vars} variables exceed {MAX_VARS}")

    if args.samples:
        samples = _read_samples(args.samples, phi.num_vars)
        bad = 0
        for i, s in enumerate(samples, 1):
            total = s.keys() == set(range(1, phi.num_vars + 1))
            if not total or not evaluate(phi, s):
                bad += 1
        print(f"samples={len(samples)} unsatisfying={bad}")
        if bad:
            failures.append(f"{bad} samples do not satisfy the formula")
        elif phi.num_vars <= MAX_VARS and samples:
            models = brute_models(phi)
            index = {tuple(sorted(m.items())): i for i, m in enumerate(models)}
            hist = Counter(index[tuple(sorted(s.items()))] for s in samples)
            m = len(models)
            if m >= 2 and len(samples) >= 10 * m:
                res = chi_square_uniform([hist.get(i, 0) for i in range(m)], m)
                print(f"chi_square={res.statistic:.4f} critical={res.critical:.4f} "
                      f"reject={'yes' if res.reject else 'no'}")
                if res.reject:
                    failures.append("samples fail the uniformity test")
            else:
                _log("uniformity test skipped: too few samples or models")
    for f in failures:
        _log(f"FAIL: {f}")
    if failures:
        raise CheckFailed("; ".join(failures))
    print("ok")
    return EXIT_OK


def cmd_stats(args: argparse.Namespace) -> int:
    print(_stats_line(_load_ccdd(args.input)))
    return EXIT_OK


def cmd_dot(args: argparse.Namespace) -> int:
    _write(args.out, dg.to_dot(_load_ccdd(args.input)))
    return EXIT_OK


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ccdd", description="Compile CNF to CCDD; count, sample and query.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def search_flags(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--no-kernelize", action="store_true", help="never build kernelized nodes")
        sp.add_argument("--order", choices=("auto", "minfill", "dlcp"), default="auto")

    c = sub.add_parser("compile", help="compile a CNF file")
    c.add_argument("input")
    c.add_argument("--out", help="output .ccdd path (default: input with .ccdd suffix)")
    search_flags(c)
    c.add_argument("--pre-kernelize", action=argparse.BooleanOptionalAction, default=True,
                   help="kernelize the input formula once before searching (default on)")
    c.add_argument("--crossover-divisor", type=_positive, default=5)
    c.add_argument("--node-budget", type=_positive, default=50_000_000)
    c.set_defaults(func=cmd_compile)

    n = sub.add_parser("count", help="exact model count of a .cnf or .ccdd file")
    n.add_argument("input")
    n.add_argument("--format", choices=("cnf", "ccdd"))
    search_flags(n)
    n.set_defaults(func=cmd_count)

    s = sub.add_parser("sample", help="uniform samples")
    s.add_argument("input")
    s.add_argument("--format", choices=("cnf", "ccdd"))
    s.add_argument("-n", type=int, default=1, help="number of samples")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sample)

    q = sub.add_parser("query", help="queries on a .ccdd file")
    q.add_argument("input")
    qs = q.add_subparsers(dest="query", required=True, parser_class=_Parser)
    imply = qs.add_parser("imply", help="does the term entail the diagram")
    imply.add_argument("lits", help='DIMACS literals, e.g. "1 -3"')
    qs.add_parser("consistent")
    qs.add_parser("valid")
    en = qs.add_parser("enumerate")
    en.add_argument("--limit", type=int)
    q.set_defaults(func=cmd_query)

    v = sub.add_parser("verify", help="cross-check counts and samples")
    v.add_argument("input")
    v.add_argument("--samples")
    v.add_argument("--ccdd", help="check this diagram instead of compiling the input")
    v.set_defaults(func=cmd_verify)

    st = sub.add_parser("stats", help="size statistics of a .ccdd file")
    st.add_argument("input")
    st.set_defaults(func=cmd_stats)

    dot = sub.add_parser("dot", help="Graphviz rendering of a .ccdd file")
    dot.add_argument("input")
    dot.add_argument("--out")
    dot.set_defaults(func=cmd_dot)
    return p


def main(argv: t.Optional[t.Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # --help exits 0, usage errors exit 1
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as e:
        _log(f"error: {e}")
        return EXIT_USAGE
    except InputError as e:
        _log(f"error: {e}")
        return EXIT_INPUT
    except ResourceLimitError as e:
        _log(f"resource limit: {e}")
        return EXIT_RESOURCE
    except (CheckFailed, CountError, dg.DiagramError, AssertionError) as e:
        _log(f"internal check failed: {e}")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
