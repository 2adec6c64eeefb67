"""Command-line frontend.

Exit codes: 0 ok, 1 I/O or file-format problem, 2 bad parameters,
3 decoding or parsing failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from decimal import Decimal
from pathlib import Path

from . import gf
from .channel import BreakPlan, apply_channel, greedy_adversary, random_adversary
from .codec import decode_report, encode
from .embed import EmbedParams, ParseFailure, apply_imperfection, embed_bits, layers_from_csv, layers_to_csv, parse_bits
from .fragsim import SimConfig, run_experiment, stderr_progress
from .params import (
    DEFAULT_MAX_M, BrcParams, ParameterError, budget_ok, code_rate, cpc_rate_bound, factorizations,
    min_dimension, search_params, smallest_feasible_k,
)
from .serialize import Container, FormatError, fragments_from_json, fragments_to_json, pack_codeword, unpack_codeword

EXIT_OK, EXIT_IO, EXIT_PARAMS, EXIT_DECODE = 0, 1, 2, 3
DEFAULT_SEED = 2024

# reference k values for the minimum-dimension sweep
PAPER_K_GRID = [3, 11, 17, 31, 39, 47, 55, 79, 89, 99, 109, 119, 129, 139, 149, 191, 203, 215,
                227, 239, 251, 263, 275, 287, 299, 311, 323, 335, 347, 359, 371]


class UsageError(Exception):
    """Bad parameters from the command line (exit 2)."""


def _err(msg: str) -> None:
    print(f"brc: {msg}", file=sys.stderr)


def _write(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _read_text(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text()


# -- parameter flags ----------------------------------------------------------

def _add_param_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=int, default=1, help="security parameter (default 1)")
    p.add_argument("--l", type=int, help="number of distinct strings")
    p.add_argument("--m", type=int, help="string width in bits")
    p.add_argument("--k", type=int, help="information length; picks the shortest (l, m)")


def _params_from(args, need_k: int | None = None) -> BrcParams:
    if args.l is not None or args.m is not None:
        if args.l is None or args.m is None:
            raise UsageError("--l and --m go together")
        params = BrcParams(args.alpha, args.l, args.m)
        if args.k is not None and args.k != params.k:
            raise UsageError(f"--k {args.k} disagrees with l={args.l}, m={args.m} (k={params.k})")
        return params
    k = args.k if args.k is not None else need_k
    if k is None:
        raise UsageError("give --l/--m or --k")
    return search_params(k, args.alpha)


# -- encode / decode ----------------------------------------------------------

def _fingerprint(args) -> tuple[str, bool]:
    """Fingerprint bits and whether they came from hex (hex has no fixed width)."""
    if args.hex is not None:
        text = args.hex.lower().removeprefix("0x")
        try:
            value = int(text, 16)
        except ValueError:
            raise UsageError(f"not a hex string: {args.hex!r}")
        return format(value, "b"), True
    raw = args.bits if args.bits is not None else _read_text(args.input)
    bits = "".join(raw.split())
    if set(bits) - {"0", "1"}:
        raise UsageError("fingerprint must consist of 0 and 1 characters")
    return bits, False


def cmd_encode(args) -> int:
    bits, from_hex = _fingerprint(args)
    if args.l is None and args.m is None and args.k is None:
        k = smallest_feasible_k(len(bits), args.alpha) if args.pad else len(bits)
        params = search_params(k, args.alpha)
    else:
        params = _params_from(args)
    k = params.k
    pad = 0
    if from_hex:
        if len(bits) > k:
            raise UsageError(f"hex value needs {len(bits)} bits, k={k}")
        bits = bits.zfill(k)
    elif len(bits) != k:
        if not args.pad or len(bits) > k:
            raise UsageError(f"fingerprint has {len(bits)} bits, k={k} (use --pad to zero-fill)")
        pad = k - len(bits)
        bits += "0" * pad
    cw = encode(bits, params)
    Path(args.output).write_bytes(pack_codeword(Container(params, cw, pad)))
    rate = code_rate(params)
    print(f"alpha={params.alpha} l={params.l} m={params.m} k={k} n={params.n} pad={pad}")
    print(f"rate={rate.numerator}/{rate.denominator} ({float(rate):.4f})")
    print(f"min dimension at {args.pitch} mm/bit: {params.n * Decimal(str(args.pitch))} mm")
    return EXIT_OK


def cmd_decode(args) -> int:
    params, frags, pad = fragments_from_json(_read_text(args.fragments))
    rep = decode_report(frags, params)
    doc = rep.as_dict()
    if rep.word is not None and pad:
        doc["fingerprint"] = rep.word[: len(rep.word) - pad]
    doc["pad"] = pad
    if args.report:
        _write(args.report, json.dumps(doc, indent=2) + "\n")
    if rep.ok:
        print(doc["fingerprint"])
        return EXIT_OK
    _err(f"decoding failed at stage {rep.stage!r}: {rep.message}")
    if not args.report:
        print(json.dumps(doc, indent=2), file=sys.stderr)
    return EXIT_DECODE


def cmd_break(args) -> int:
    box = unpack_codeword(Path(args.codeword).read_bytes())
    params = box.params
    if args.plan:
        plan = BreakPlan.from_json(_read_text(args.plan))
    elif args.greedy:
        plan = greedy_adversary(params, args.t, args.s)
    else:
        if not _budget(params, args.t, args.s):
            raise UsageError(f"(t={args.t}, s={args.s}) exceeds the correction budget")
        plan = random_adversary(params, args.t, args.s, seed=args.seed, overlap_extension=args.overlap)
    if plan.seed is None:
        plan.seed = args.seed
    out = apply_channel(box.bits, plan, params)
    extra = {"plan": json.loads(plan.to_json()), "t": out.t, "s": out.s}
    _write(args.output, fragments_to_json(params, out.fragments, box.pad, extra))
    print(f"{len(out.fragments)} fragments, realized t={out.t} s={out.s}", file=sys.stderr)
    return EXIT_OK


def _budget(params, t, s):
    try:
        return budget_ok(params, t, s)
    except ValueError as exc:
        raise UsageError(str(exc))


# -- analytics ------------------------------------------------------------------

def rate_rows(alphas, m: int = 12) -> list[dict]:
    rows = []
    for a in alphas:
        l = a + 2
        while True:
            try:
                p = BrcParams(a, l, m)
            except ParameterError:
                break
            r = code_rate(p)
            rows.append({"alpha": a, "l": l, "m": m, "k": p.k, "n": p.n, "rate": float(r),
                         "cpc_bound": float(cpc_rate_bound(a))})
            l += 1
    return rows


def mindim_rows(ks, alphas, pitch) -> list[dict]:
    rows = []
    for a in alphas:
        for k in ks:
            if factorizations(k, a, DEFAULT_MAX_M):
                p = search_params(k, a)
                rows.append({"k": k, "alpha": a, "l": p.l, "m": p.m, "n": p.n,
                             "mm": float(min_dimension(k, a, pitch))})
            else:
                rows.append({"k": k, "alpha": a, "l": "", "m": "", "n": "", "mm": None})
    return rows


def _rows_csv(rows: list[dict], cols: list[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for r in rows:
        w.writerow({c: ("" if r[c] is None else f"{r[c]:.6f}" if isinstance(r[c], float) else r[c]) for c in cols})
    return buf.getvalue()


RATE_COLS = ["alpha", "l", "m", "k", "n", "rate", "cpc_bound"]
MINDIM_COLS = ["k", "alpha", "l", "m", "n", "mm"]


def _int_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        if "-" in part:
            a, b = part.split("-")
            out.extend(range(int(a), int(b) + 1))
        elif part:
            out.append(int(part))
    return out


def cmd_rate(args) -> int:
    rows = rate_rows(_int_list(args.alphas), args.m)
    _write(args.output, _rows_csv(rows, RATE_COLS))
    if args.figure:
        from .plotting import plot_rates
        plot_rates(rows, args.figure)
    return EXIT_OK


def cmd_mindim(args) -> int:
    if args.k is not None:
        if args.alpha is None or args.pitch is None:
            raise UsageError("mindim K ALPHA PITCH")
        print(min_dimension(args.k, args.alpha, args.pitch))
        return EXIT_OK
    rows = mindim_rows(PAPER_K_GRID, _int_list(args.alphas), args.sweep_pitch)
    _write(args.output, _rows_csv(rows, MINDIM_COLS))
    if args.figure:
        from .plotting import plot_min_dimension
        plot_min_dimension(rows, args.figure)
    return EXIT_OK


# -- simulation -----------------------------------------------------------------

def load_sim_config(text: str) -> tuple[SimConfig, list[int], list[int], list[float], int]:
    d = json.loads(text)
    base = SimConfig(
        alpha=1,
        k=int(d.get("k", 128)),
        trials=int(d.get("trials", 256)),
        width=float(d.get("box", [35.0, 35.0])[0]),
        depth=float(d.get("box", [35.0, 35.0])[1]),
        pitch=float(d.get("pitch", 0.215)),
        grid=int(d.get("grid", 16)),
        seed=int(d.get("seed", DEFAULT_SEED)),
    )
    alphas = [int(a) for a in d.get("alphas", [8])]
    betas = [int(b) for b in d.get("betas", [100])]
    rhos = [float(r) for r in d.get("rhos", [0.0])]
    return base, alphas, betas, rhos, int(d.get("workers", 1))


def cmd_simulate(args) -> int:
    text = _read_text(args.config) if args.config else "{}"
    try:
        base, alphas, betas, rhos, workers = load_sim_config(text)
    except (json.JSONDecodeError, TypeError, IndexError) as exc:
        raise FormatError(f"bad simulation config: {exc}")
    if args.seed is not None:
        base = SimConfig(**{**base.__dict__, "seed": args.seed})
    if args.trials is not None:
        base = SimConfig(**{**base.__dict__, "trials": args.trials})
    workers = args.workers or workers
    res = run_experiment(base, alphas, betas, rhos, workers=workers,
                         progress=None if args.quiet else stderr_progress)
    _write(args.output, res.to_csv())
    if args.figure:
        from .plotting import plot_success
        plot_success(res.rows, args.figure)
    return EXIT_OK


def cmd_report(args) -> int:
    """Rate and minimum-dimension tables plus figures, and a simulation when asked."""
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    from .plotting import plot_min_dimension, plot_rates, plot_success
    rates = rate_rows(range(1, 11), 12)
    (out / "rate.csv").write_text(_rows_csv(rates, RATE_COLS))
    plot_rates(rates, str(out / "rate.png"))
    dims = mindim_rows(PAPER_K_GRID, range(1, 11), args.pitch)
    (out / "mindim.csv").write_text(_rows_csv(dims, MINDIM_COLS))
    plot_min_dimension(dims, str(out / "mindim.png"))
    written = ["rate.csv", "rate.png", "mindim.csv", "mindim.png"]
    if args.sim_config:
        base, alphas, betas, rhos, workers = load_sim_config(_read_text(args.sim_config))
        res = run_experiment(base, alphas, betas, rhos, workers=args.workers or workers,
                             progress=stderr_progress)
        (out / "simulate.csv").write_text(res.to_csv())
        plot_success(res.rows, str(out / "simulate.png"))
        written += ["simulate.csv", "simulate.png"]
    for name in written:
        print(out / name)
    return EXIT_OK


# -- embedding ------------------------------------------------------------------

def _embed_params(args) -> EmbedParams:
    return EmbedParams(args.mode, args.x, args.y, args.eps)


def cmd_embed(args) -> int:
    bits = args.bits if args.bits is not None else "".join(_read_text(args.input).split())
    if set(bits) - {"0", "1"}:
        raise UsageError("bits must consist of 0 and 1 characters")
    seq = embed_bits(bits, _embed_params(args))
    if args.delta:
        seq = apply_imperfection(seq, args.delta, args.seed)
    if args.reverse:
        seq = seq[::-1]
    _write(args.output, layers_to_csv(seq))
    return EXIT_OK


def cmd_parse(args) -> int:
    seq = layers_from_csv(_read_text(args.layers))
    res = parse_bits(seq, _embed_params(args))
    if isinstance(res, ParseFailure):
        _err(f"parse failed at layer {res.layer}: {res.reason}")
        return EXIT_DECODE
    print(res)
    return EXIT_OK


def show_field() -> None:
    print(f"primitive polynomial table v{gf.POLY_TABLE_VERSION}")
    for degree, poly, text in gf.field_table():
        print(f"GF(2^{degree:<2})  0x{poly:X}  {text}")


# -- wiring ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="brc", description="Break-resilient fingerprint codes.")
    ap.add_argument("--show-field", action="store_true", help="print the GF modulus table and exit")
    sub = ap.add_subparsers(dest="command")

    p = sub.add_parser("encode", help="encode a fingerprint into a codeword file")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--hex", help="fingerprint as a hex integer")
    src.add_argument("--bits", help="fingerprint as a 0/1 string")
    src.add_argument("--input", help="file holding a 0/1 fingerprint")
    _add_param_flags(p)
    p.add_argument("--pad", action="store_true", help="zero-fill a short fingerprint up to k")
    p.add_argument("--pitch", type=float, default=0.12, help="mm per bit for the size report")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="recover a fingerprint from a fragments file")
    p.add_argument("fragments")
    p.add_argument("--report", help="write the decoder report JSON here")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("break", help="cut and hide a codeword")
    p.add_argument("codeword")
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--overlap", type=int, default=0, help="max random extension per fragment side")
    p.add_argument("--greedy", action="store_true", help="use the deterministic greedy adversary")
    p.add_argument("--plan", help="replay a plan JSON instead of drawing one")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_break)

    p = sub.add_parser("simulate", help="Voronoi fragmentation experiment")
    p.add_argument("--config", help="JSON config (alphas, betas, rhos, k, trials, box, pitch, grid, seed)")
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--workers", type=int, default=0)
    p.add_argument("--figure", help="write a success-rate plot here")
    p.add_argument("--quiet", action="store_true")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("rate", help="code rate table")
    p.add_argument("--alphas", default="1-10")
    p.add_argument("--m", type=int, default=12)
    p.add_argument("--figure")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("mindim", help="minimum object height")
    p.add_argument("k", type=int, nargs="?")
    p.add_argument("alpha", type=int, nargs="?")
    p.add_argument("pitch", type=float, nargs="?")
    p.add_argument("--alphas", default="1-10", help="sweep mode: alphas over the reference k grid")
    p.add_argument("--sweep-pitch", type=float, default=0.12)
    p.add_argument("--figure")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_mindim)

    p = sub.add_parser("report", help="write rate/size tables and figures to a directory")
    p.add_argument("outdir")
    p.add_argument("--pitch", type=float, default=0.12)
    p.add_argument("--sim-config", help="also run this simulation config")
    p.add_argument("--workers", type=int, default=0)
    p.set_defaults(func=cmd_report)

    for name, helptext in (("embed", "bits to layer thicknesses"), ("parse", "layer thicknesses to bits")):
        p = sub.add_parser(name, help=helptext)
        if name == "embed":
            src = p.add_mutually_exclusive_group(required=True)
            src.add_argument("--bits")
            src.add_argument("--input")
            p.add_argument("--delta", type=float, default=0.0, help="per-layer imperfection bound")
            p.add_argument("--seed", type=int, default=DEFAULT_SEED)
            p.add_argument("--reverse", action="store_true", help="emit layers upside down")
            p.add_argument("-o", "--output", default="-")
        else:
            p.add_argument("layers", help="layers CSV in micrometres")
        p.add_argument("--mode", choices=["normal", "stealthy"], default="normal")
        p.add_argument("--x", type=float, default=0.08)
        p.add_argument("--y", type=float, default=0.12)
        p.add_argument("--eps", type=float, default=0.02)
        p.set_defaults(func=cmd_embed if name == "embed" else cmd_parse)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.show_field:
        show_field()
        return EXIT_OK
    if not args.command:
        ap.print_help(sys.stderr)
        return EXIT_PARAMS
    try:
        return args.func(args)
    except (UsageError, ParameterError) as exc:
        _err(str(exc))
        return EXIT_PARAMS
    except (OSError, FormatError) as exc:
        _err(str(exc))
        return EXIT_IO
    except ValueError as exc:
        _err(str(exc))
        return EXIT_PARAMS


if __name__ == "__main__":
    sys.exit(main())
