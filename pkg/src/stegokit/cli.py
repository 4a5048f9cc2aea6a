"""Command-line front end: embed, extract, analyze, psnr, bench."""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from .bench import (
    ExperimentConfig,
    emit_csv,
    run_grid_on_covers,
    synth_cover,
    trend_checks,
)
from .image import GrayImage, load_pgm, pack_bits, save_pgm, unpack_bits
from .metrics import psnr
from .schemes import (
    CapacityError,
    KeyFormatError,
    Scheme,
    StegoKey,
    capacity_bits,
    embed,
    extract,
)
from .steganalysis import mlsb_ws_estimate, pov_curve, ws_estimate

SCHEME_TOKENS = [s.value for s in Scheme]


def _load_image(path: str) -> GrayImage:
    return load_pgm(Path(path).read_bytes())


def _fmt(value: float) -> str:
    return "inf" if math.isinf(value) else f"{value:.4f}"


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_embed(args) -> int:
    cover = _load_image(args.cover)
    message = Path(args.message).read_bytes()
    bits = pack_bits(message)
    scheme = Scheme.from_token(args.scheme)
    stego, key = embed(cover, bits, scheme, args.seed)
    Path(args.out).write_bytes(save_pgm(stego))
    Path(args.key_out).write_text(key.to_line() + "\n")
    quality = psnr(cover, stego)
    print(f"payload_bits={key.bit_length} psnr_db={_fmt(quality.psnr_db)}")
    return 0


def cmd_extract(args) -> int:
    key = StegoKey.from_line(Path(args.key).read_text())
    stego = _load_image(args.stego)
    bits = extract(stego, key)
    data, _ = unpack_bits(bits)
    Path(args.out).write_bytes(data)
    return 0


def cmd_analyze(args) -> int:
    img = _load_image(args.image)
    if args.method == "pov":
        if args.plane is not None:
            raise ValueError("--plane is only valid with --method mlsbws")
        curve = pov_curve(img, args.steps)
        lines = ["fraction,p_value"]
        lines += [f"{f:.4f},{p:.4f}" for f, p in zip(curve.fractions, curve.p_values)]
        _write_or_print("\n".join(lines) + "\n", args.out)
        if args.plot:
            from .plots import save_pov_figure

            save_pov_figure(curve, args.plot, title=f"PoV: {Path(args.image).name}")
            print(f"figure written to {args.plot}", file=sys.stderr)
        return 0
    if args.method == "ws":
        if args.plane is not None:
            raise ValueError("--plane is only valid with --method mlsbws")
        estimate = ws_estimate(img)
    else:
        plane_l = args.plane if args.plane is not None else 1
        estimate = mlsb_ws_estimate(img, plane_l - 1)
    _write_or_print(
        f"estimate={estimate.estimate:.4f},clamped={estimate.clamped:.4f}\n", args.out
    )
    return 0


def cmd_psnr(args) -> int:
    cover = _load_image(args.cover)
    stego = _load_image(args.stego)
    report = psnr(cover, stego)
    print(f"mse={_fmt(report.mse)} psnr_db={_fmt(report.psnr_db)}")
    return 0


def _bench_covers(args) -> list[tuple[str, GrayImage]]:
    if args.covers:
        paths = sorted(Path(args.covers).glob("*.pgm"))
        if not paths:
            raise ValueError(f"no .pgm covers found in {args.covers}")
        return [(p.stem, load_pgm(p.read_bytes())) for p in paths]
    width, height = args.size
    return [
        (
            f"{args.synthetic}{i:02d}",
            synth_cover(args.synthetic, width, height, args.cover_seed + i),
        )
        for i in range(args.count)
    ]


def _parse_rates(text: str) -> tuple[float, ...]:
    # "0" entries request baseline-only rows; baselines are always emitted.
    rates = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        value = float(token)
        if value == 0.0:
            continue
        rates.append(value)
    return tuple(rates)


def cmd_bench(args) -> int:
    covers = _bench_covers(args)
    cfg = ExperimentConfig(
        rates=_parse_rates(args.rates),
        schemes=tuple(Scheme.from_token(t.strip()) for t in args.schemes.split(",") if t.strip()),
        seeds=tuple(int(t) for t in args.seeds.split(",") if t.strip()),
        steps=args.steps,
    )
    rows = run_grid_on_covers(covers, cfg)
    csv_text = emit_csv(rows)

    summary_stream = sys.stdout if args.out else sys.stderr
    if args.out:
        Path(args.out).write_text(csv_text)
        print(f"wrote {len(rows)} rows to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(csv_text)

    for check in trend_checks(rows):
        status = "PASS" if check.passed else "FAIL"
        print(f"[{status}] {check.name}: {check.detail}", file=summary_stream)

    if args.plots:
        from .plots import save_bench_figures

        for path in save_bench_figures(rows, args.plots):
            print(f"figure written to {path}", file=sys.stderr)
    return 0


def _apply_config_file(argv: list[str]) -> list[str]:
    # --config FILE supplies key=value defaults; explicit flags win because
    # they come later in the synthesized argument list.
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    if idx + 1 >= len(argv):
        raise ValueError("--config requires a file path")
    path = argv[idx + 1]
    rest = argv[:idx] + argv[idx + 2 :]
    injected: list[str] = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"bad config line {raw!r}, expected key=value")
        key, _, value = line.partition("=")
        injected += [f"--{key.strip()}", value.strip()]
    if not rest:
        return injected
    # Keep the subcommand first, then config defaults, then explicit flags.
    return rest[:1] + injected + rest[1:]


def _size(text: str) -> tuple[int, int]:
    try:
        w, _, h = text.lower().partition("x")
        return int(w), int(h)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected WIDTHxHEIGHT, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stegokit",
        description="Bitplane steganography schemes, statistical attacks, and benchmarks "
        "for 8-bit grayscale PGM images.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("embed", help="hide a message file inside a cover image")
    p.add_argument("--cover", required=True, help="cover PGM path")
    p.add_argument("--message", required=True, help="message file (raw bytes)")
    p.add_argument("--scheme", required=True, choices=SCHEME_TOKENS)
    p.add_argument("--seed", required=True, type=int, help="unsigned 64-bit position key")
    p.add_argument("--out", required=True, help="stego PGM output path")
    p.add_argument("--key-out", required=True, help="stego key output path")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("extract", help="recover a message using a stego key")
    p.add_argument("--stego", required=True, help="stego PGM path")
    p.add_argument("--key", required=True, help="stego key path")
    p.add_argument("--out", required=True, help="recovered message output path")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("analyze", help="run a steganalyser on an image")
    p.add_argument("--image", required=True, help="image PGM path")
    p.add_argument("--method", required=True, choices=["pov", "ws", "mlsbws"])
    p.add_argument("--plane", type=int, choices=[1, 2], help="bitplane for mlsbws (1 or 2)")
    p.add_argument("--steps", type=int, default=100, help="PoV curve resolution")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--plot", help="render the PoV curve figure to this path")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("psnr", help="measure distortion between two images")
    p.add_argument("--cover", required=True)
    p.add_argument("--stego", required=True)
    p.set_defaults(func=cmd_psnr)

    p = sub.add_parser("bench", help="run the embedding/attack benchmark grid")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--covers", help="directory of cover .pgm files")
    group.add_argument("--synthetic", choices=["smooth", "uniform"], help="generate covers")
    p.add_argument("--count", type=int, default=10, help="number of synthetic covers")
    p.add_argument("--size", type=_size, default=(256, 256), help="synthetic cover WIDTHxHEIGHT")
    p.add_argument("--cover-seed", type=int, default=1, help="seed of the first synthetic cover")
    p.add_argument("--rates", default="0.2,0.4,0.6,0.8,1", help="comma-separated rates in (0,1]")
    p.add_argument("--schemes", default="lsb,2lsb,bpi", help="comma-separated scheme tokens")
    p.add_argument("--seeds", default="1,2,3,4,5", help="comma-separated message/position seeds")
    p.add_argument("--steps", type=int, default=100, help="PoV curve resolution")
    p.add_argument("--out", help="CSV output path (default: stdout)")
    p.add_argument("--plots", help="directory for rendered figures")
    p.add_argument("--config", help="key=value file supplying defaults for these flags")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _apply_config_file(argv)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CapacityError, KeyFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
