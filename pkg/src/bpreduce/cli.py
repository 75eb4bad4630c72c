"""Command-line front end: generate, compile, reduce, solve, verify and report sizes."""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Sequence

from . import alignment, barrington, lcs_reduction
from .bp_core import MAX_BRUTE_FORCE_N, BranchingProgram, brute_force_sat, parse_bp, random_bp, serialize_bp
from .corpus import InstanceSpec, direct_corpus, framework_corpus
from .errors import GuardRefusal, InputError
from .seq_measures import (
    DEFAULT_MAX_EXPAND,
    WeightedAlphabet,
    WeightedSequence,
    format_sequence_file,
    k_lcs,
    lcs,
    parse_sequence_file,
    total_length,
    unweight,
    wlcs,
)

EXIT_OK, EXIT_DISAGREE, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3
SCHEMA = 1


def jsonable(obj: Any) -> Any:
    """Integers become decimal strings so that no reader truncates them."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, float)):
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_json(path: Path, payload: dict) -> None:
    body = {**jsonable(payload), "schema": SCHEMA}
    path.write_text(json.dumps(body, indent=2, sort_keys=True) + "\n")


def _read_bp(path: str) -> BranchingProgram:
    return parse_bp(Path(path).read_text())


def _bits(text: str, n: int) -> tuple[int, ...]:
    if len(text) != n or set(text) - {"0", "1"}:
        raise InputError(f"assignment {text!r} must be {n} characters of 0/1")
    return tuple(int(c) for c in text)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args: argparse.Namespace) -> int:
    bp = random_bp(args.n, args.W, args.t, args.seed, args.density)
    _emit(serialize_bp(bp), args.output)
    return EXIT_OK


def cmd_compile_formula(args: argparse.Namespace) -> int:
    text = args.formula if args.formula is not None else Path(args.file).read_text()
    f = barrington.parse_formula(text)
    bp = barrington.to_width5_bp(f, args.n)
    header = f"# depth {barrington.formula_depth(f)}, layers {bp.T}\n"
    _emit(header + serialize_bp(bp), args.output)
    return EXIT_OK


def _write_seq(path: Path, seq: WeightedSequence, weighted: bool, max_expand: int) -> int:
    if weighted:
        text = format_sequence_file(seq, weighted=True)
    else:
        flat = unweight(seq, max_expand)
        text = format_sequence_file(WeightedSequence(tuple(flat), WeightedAlphabet.uniform(set(flat))), weighted=False)
    path.write_text(text)
    return len(text.encode())


def cmd_reduce(args: argparse.Namespace) -> int:
    bp = _read_bp(args.bp)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    weighted = args.measure != "lcs"
    files: dict[str, int] = {}
    if args.measure == "klcs":
        if args.engine != "direct":
            raise InputError("k-LCS gadgets are only produced by the direct engine")
        K = args.k
        asg = _bits(args.assignment or "0" * bp.n, bp.n)
        layout = lcs_reduction.LetterLayout(bp.W, bp.t, K)
        block = bp.n // K if bp.n % K == 0 else None
        if block is None:
            raise InputError(f"n={bp.n} is not divisible into {K} blocks")
        for j in range(1, K + 1):
            seq = lcs_reduction.rg_k_multiparty(bp, j, K, asg[(j - 1) * block: j * block],
                                                bp.start, bp.accept, bp.t, layout)
            files[f"P{j}.seq"] = _write_seq(out / f"P{j}.seq", seq, True, args.max_expand)
        tables = layout.tables
        manifest = {"engine": "direct", "measure": "klcs", "K": K, "n": bp.n, "W": bp.W, "T": bp.T,
                    "t": bp.t, "Z": list(tables.Z), "Y": list(tables.Y), "E": tables.Y[bp.t],
                    "letters": {str(k): v for k, v in layout.alphabet.names.items()}, "byte_lengths": files}
        write_json(out / "manifest.json", manifest)
        return EXIT_OK
    if args.engine == "direct":
        art = lcs_reduction.combine(bp, args.combine)
        A, B = art.A, art.B
        manifest = {"engine": "direct", "measure": args.measure, "n": bp.n, "W": bp.W, "T": bp.T, "t": bp.t,
                    **art.manifest()}
    else:
        binding = alignment.lcs_measure_binding(bp.W, bp.T)
        art = alignment.final_sequences(binding, bp)
        A = WeightedSequence(art.x.payload, binding.session.alphabet)
        B = WeightedSequence(art.y.payload, binding.session.alphabet)
        manifest = {"engine": "framework", "measure": args.measure, "n": bp.n, "W": bp.W, "T": bp.T,
                    "t": bp.t, "constants": art.manifest()}
    files["A.seq"] = _write_seq(out / "A.seq", A, weighted, args.max_expand)
    files["B.seq"] = _write_seq(out / "B.seq", B, weighted, args.max_expand)
    manifest["byte_lengths"] = files
    write_json(out / "manifest.json", manifest)
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    seqs = [parse_sequence_file(Path(p).read_text()) for p in args.files]
    if args.measure == "klcs":
        weights: dict[int, int] = {}
        for s in seqs:
            weights.update(s.alphabet.weights)
        value = k_lcs([s.symbols for s in seqs], weights)
    else:
        if len(seqs) != 2:
            raise InputError(f"{args.measure} needs exactly two sequence files")
        if args.measure == "wlcs":
            value = wlcs(seqs[0], seqs[1])
        else:
            value = lcs(unweight(seqs[0], args.max_expand), unweight(seqs[1], args.max_expand))
        if args.distance:
            value = total_length(seqs[0]) + total_length(seqs[1]) - 2 * value
    print(value)
    if args.report:
        write_json(Path(args.report), {"measure": args.measure, "value": value,
                                       "files": list(args.files)})
    return EXIT_OK


def _verify_one(inst: InstanceSpec, engine: str, measure: str, combine: str, max_expand: int,
                max_n: int) -> dict:
    return _verify_bp(inst.build(), inst.label(), engine, measure, combine, max_expand, max_n)


def _verify_bp(bp: BranchingProgram, label: str, engine: str, measure: str, combine: str,
               max_expand: int, max_n: int) -> dict:
    truth = brute_force_sat(bp, max_n) is not None
    if engine == "direct":
        art = lcs_reduction.combine(bp, combine)
        if measure == "lcs":
            value = lcs(unweight(art.A, max_expand), unweight(art.B, max_expand))
        else:
            value = wlcs(art.A, art.B)
        verdict = art.accepts(value)
        threshold = art.E
    else:
        binding = alignment.lcs_measure_binding(bp.W, bp.T)
        art = alignment.final_sequences(binding, bp)
        value = binding.delta(art.x, art.y)
        verdict = art.accepts(value)
        threshold = art.threshold
    return {"instance": label, "value": value, "threshold": threshold,
            "verdict": verdict, "oracle": truth, "agree": verdict == truth}


def cmd_verify(args: argparse.Namespace) -> int:
    if args.bp:
        rows = [_verify_bp(_read_bp(path), path, args.engine, args.measure, args.combine, args.max_expand,
                           args.max_brute_n)
                for path in args.bp]
    else:
        make = direct_corpus if args.engine == "direct" else framework_corpus
        specs = make(args.size, args.seed)
        jobs = [(s, args.engine, args.measure, args.combine, args.max_expand, args.max_brute_n) for s in specs]
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                rows = list(pool.map(_verify_star, jobs))
        else:
            rows = [_verify_one(*j) for j in jobs]
    bad = sum(not r["agree"] for r in rows)
    for r in rows:
        mark = "ok  " if r["agree"] else "FAIL"
        print(f"{mark} {r['instance']}: value={r['value']} threshold={r['threshold']} "
              f"verdict={int(r['verdict'])} oracle={int(r['oracle'])}")
    print(f"{len(rows) - bad}/{len(rows)} instances agree")
    if args.report:
        write_json(Path(args.report), {"engine": args.engine, "measure": args.measure, "rows": rows,
                                       "disagreements": bad})
    return EXIT_DISAGREE if bad else EXIT_OK


def _verify_star(job: tuple) -> dict:
    return _verify_one(*job)


def cmd_stats(args: argparse.Namespace) -> int:
    bp = _read_bp(args.bp)
    if args.engine == "direct":
        art = lcs_reduction.combine(bp, args.combine)
        W, t = bp.W, bp.t
        closed = (W * (36 * W + 26)) ** t
        rows = {"gadget_closed_form": closed, **{f"predicted_{k}": v for k, v in art.predicted.items()},
                **{f"measured_{k}": v for k, v in art.measured.items()}}
        ok = art.measured["gadget"] == closed and all(
            art.predicted[k] == art.measured[k] for k in ("A", "B"))
    else:
        binding = alignment.lcs_measure_binding(bp.W, bp.T)
        art = alignment.final_sequences(binding, bp)
        rows = art.size_report()
        ok = rows["ok"]
    for k, v in rows.items():
        print(f"{k}: {v}")
    print("match" if ok else "MISMATCH")
    if args.report:
        write_json(Path(args.report), {"engine": args.engine, "stats": rows, "ok": ok})
    return EXIT_OK if ok else EXIT_DISAGREE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bpreduce", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--engine", choices=("direct", "framework"), default="direct")
        sp.add_argument("--measure", choices=("wlcs", "lcs", "klcs"), default="wlcs")
        sp.add_argument("--combine", choices=lcs_reduction.COMBINE_MODES, default="align",
                        help="direct engine: window combination (linear) or exact max (quadratic)")
        sp.add_argument("--max-expand", type=int, default=DEFAULT_MAX_EXPAND)
        sp.add_argument("--report", help="write a JSON report to this path")

    g = sub.add_parser("gen", help="write a seeded random program")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--W", type=int, required=True)
    g.add_argument("--t", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--density", type=float, default=0.5)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("compile-formula", help="compile a formula to a width-5 program")
    src = c.add_mutually_exclusive_group(required=True)
    src.add_argument("--formula")
    src.add_argument("--file")
    c.add_argument("--n", type=int)
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_compile_formula)

    r = sub.add_parser("reduce", help="emit sequence files and a manifest")
    r.add_argument("bp")
    r.add_argument("--out", required=True)
    r.add_argument("--k", type=int, default=3)
    r.add_argument("--assignment", help="k-LCS only: full assignment as a 0/1 string")
    common(r)
    r.set_defaults(func=cmd_reduce)

    s = sub.add_parser("solve", help="evaluate a measure on sequence files")
    s.add_argument("files", nargs="+")
    s.add_argument("--measure", choices=("wlcs", "lcs", "klcs"), default="wlcs")
    s.add_argument("--max-expand", type=int, default=DEFAULT_MAX_EXPAND)
    s.add_argument("--distance", action="store_true",
                   help="print |A| + |B| - 2 value, the quantity the framework threshold bounds")
    s.add_argument("--report")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="compare threshold verdicts with brute force")
    v.add_argument("bp", nargs="*")
    v.add_argument("--size", type=int, default=200, help="corpus size when no files are given")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--max-brute-n", type=int, default=MAX_BRUTE_FORCE_N)
    common(v)
    v.set_defaults(func=cmd_verify)

    st = sub.add_parser("stats", help="measured lengths against closed forms")
    st.add_argument("bp")
    common(st)
    st.set_defaults(func=cmd_stats)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    for guard in ("max_expand", "max_brute_n", "jobs", "k", "size"):
        if getattr(args, guard, 1) < 1:
            print(f"error: --{guard.replace('_', '-')} must be positive", file=sys.stderr)
            return EXIT_USAGE
    try:
        return args.func(args)
    except GuardRefusal as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
