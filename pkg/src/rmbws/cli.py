"""Command-line front end: Monte Carlo campaigns and single-frame decoding."""

from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from .channel import ChannelPoint, run_bler
from .rm_core import CodeParams
from .specs import CodeMismatchError, ParseError, build_python_decoder, parse_decoder_spec
from .streams import Stream

CSV_HEADER = [
    "code_r", "code_m", "decoder", "ebn0_db", "frames", "frame_errors",
    "bler", "ml_lb_events", "ml_lb", "avg_ops", "elapsed_s",
]


def _parse_code(text: str) -> CodeParams:
    try:
        r_text, m_text = text.split(",")
        return CodeParams(int(r_text), int(m_text))
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"--code must be r,m (got {text!r}): {exc}")


def _parse_snr_range(text: str) -> list[float]:
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return [float(parts[0])]
        if len(parts) == 3:
            start, step, stop = (float(p) for p in parts)
            if step <= 0:
                raise ValueError("step must be positive")
            if stop < start - 1e-9:
                raise ValueError("end must not be below start")
            count = int(round((stop - start) / step)) + 1
            return [start + i * step for i in range(count)]
        raise ValueError("use a single value or a:step:b")
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad --snr-db {text!r}: {exc}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rmbws",
        description="Reed-Muller decoding over BI-AWGN: simulation and single-frame decoding",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="measure BLER over a range of SNR points")
    sim.add_argument("--code", type=_parse_code, required=True, metavar="R,M")
    sim.add_argument("--decoder", required=True, metavar="SPEC")
    sim.add_argument("--snr-db", type=_parse_snr_range, required=True, metavar="A:STEP:B")
    sim.add_argument("--snr-mode", choices=("ebn0", "esn0"), default="ebn0",
                     help="interpret --snr-db as Eb/N0 (default) or Es/N0")
    sim.add_argument("--max-frames", type=int, default=1_000_000)
    sim.add_argument("--min-errors", type=int, default=100,
                     help="stop a point after this many frame errors (0 = never)")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--ops", action="store_true",
                     help="emit the average operation count per codeword")
    sim.add_argument("--chase-cap", type=int, default=7)
    sim.add_argument("--out", default=None, help="CSV path (default: stdout)")

    dec = sub.add_parser("decode", help="decode one LLR vector")
    dec.add_argument("--code", type=_parse_code, required=True, metavar="R,M")
    dec.add_argument("--decoder", required=True, metavar="SPEC")
    dec.add_argument("--llr-file", default=None,
                     help="whitespace-separated decimal LLRs (default: stdin)")
    dec.add_argument("--seed", type=int, default=0)
    dec.add_argument("--chase-cap", type=int, default=7)
    return parser


def _format_rows(code, decoder_text, records, show_ops):
    rows = []
    for rec in records:
        rows.append([
            str(code.r),
            str(code.m),
            decoder_text,
            f"{rec.point.ebn0_db:.6g}",
            str(rec.frames),
            str(rec.frame_errors),
            f"{rec.bler:.6e}",
            str(rec.ml_lb_events),
            f"{rec.ml_lb:.6e}",
            f"{rec.avg_ops:.6e}" if show_ops else "",
            f"{rec.elapsed_s:.3f}",
        ])
    return rows


def cmd_simulate(args) -> int:
    try:
        spec = parse_decoder_spec(args.decoder)
    except ParseError as exc:
        print(f"rmbws: bad decoder spec: {exc}", file=sys.stderr)
        return 2
    if args.max_frames < 1 or args.min_errors < 0 or args.chase_cap < 1:
        print("rmbws: --max-frames, --min-errors, --chase-cap out of range", file=sys.stderr)
        return 2
    code = args.code
    if args.snr_mode == "ebn0":
        points = [ChannelPoint.from_ebn0(db, code.rate) for db in args.snr_db]
    else:
        points = [ChannelPoint.from_esn0(db, code.rate) for db in args.snr_db]
    try:
        records = run_bler(
            code, spec, points,
            max_frames=args.max_frames,
            min_errors=args.min_errors or None,
            seed=args.seed,
            chase_cap=args.chase_cap,
        )
    except CodeMismatchError as exc:
        print(f"rmbws: decoder does not fit the code: {exc}", file=sys.stderr)
        return 3

    rows = _format_rows(code, spec.render(), records, args.ops)
    if args.out is None:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        writer.writerows(rows)
    else:
        with open(args.out, "w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            writer.writerows(rows)
    return 0


def cmd_decode(args) -> int:
    try:
        spec = parse_decoder_spec(args.decoder)
    except ParseError as exc:
        print(f"rmbws: bad decoder spec: {exc}", file=sys.stderr)
        return 2
    code = args.code
    if args.llr_file is None:
        text = sys.stdin.read()
    else:
        with open(args.llr_file) as handle:
            text = handle.read()
    try:
        llrs = np.array([float(tok) for tok in text.split()], dtype=np.float64)
    except ValueError as exc:
        print(f"rmbws: bad LLR value: {exc}", file=sys.stderr)
        return 2
    if llrs.shape[0] != code.n:
        print(
            f"rmbws: expected {code.n} LLR values for {code}, got {llrs.shape[0]}",
            file=sys.stderr,
        )
        return 2
    try:
        decoder = build_python_decoder(spec, code, args.chase_cap)
    except CodeMismatchError as exc:
        print(f"rmbws: decoder does not fit the code: {exc}", file=sys.stderr)
        return 3
    ops = np.zeros(1, dtype=np.int64)
    bits, disc = decoder(llrs, Stream(args.seed).state, ops)
    print("".join(str(int(b)) for b in bits))
    print(f"discrepancy {disc:.6e}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "simulate":
        return cmd_simulate(args)
    return cmd_decode(args)


if __name__ == "__main__":
    sys.exit(main())
