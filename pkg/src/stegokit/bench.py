"""Experiment grid: embed at several rates, attack, measure, emit CSV rows.

For every cover x scheme x rate x seed cell the harness embeds a keyed
pseudo-random message, verifies the stego round-trips it, then records both
weighted-stego plane estimates, the mean PoV p-value, and PSNR. Rate-0
baseline rows carry the raw cover's statistics and are identical across
schemes by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .image import GrayImage, load_pgm
from .metrics import psnr
from .schemes import Scheme, embed, extract
from .selection import SEED_ZERO_SUBSTITUTE, _stream
from .steganalysis import mlsb_ws_estimate, pov_curve

__all__ = [
    "ExperimentConfig",
    "ResultRow",
    "TrendCheck",
    "generate_message",
    "synth_cover",
    "run_grid",
    "run_grid_on_covers",
    "emit_csv",
    "trend_checks",
]

CSV_HEADER = "cover,scheme,rate,ws_L1,ws_L2,pov_mean_p,psnr_db,ws_L1_clamped,ws_L2_clamped"

_FLOAT_SCALE = 2.0 ** -53


@dataclass(frozen=True)
class ExperimentConfig:
    """Grid parameters: covers, embedding rates, schemes, seeds, PoV steps.

    ``rates`` holds positive embedding rates in (0, 1]; the rate-0 baseline
    rows are always produced and need not be listed.
    """

    cover_paths: tuple = ()
    rates: tuple = (0.2, 0.4, 0.6, 0.8, 1.0)
    schemes: tuple = (Scheme.LSB, Scheme.TWOLSB, Scheme.BPI)
    seeds: tuple = (1, 2, 3, 4, 5)
    steps: int = 100

    def __post_init__(self) -> None:
        for rate in self.rates:
            if not 0.0 < rate <= 1.0:
                raise ValueError(f"embedding rates must lie in (0, 1], got {rate}")
        if not self.schemes:
            raise ValueError("at least one scheme is required")
        if not self.seeds:
            raise ValueError("at least one seed is required")
        for seed in self.seeds:
            if not 0 <= seed < (1 << 64):
                raise ValueError(f"seeds must be unsigned 64-bit integers, got {seed}")
        if self.steps < 1:
            raise ValueError(f"steps must be positive, got {self.steps}")


@dataclass(frozen=True)
class ResultRow:
    """One analyzed cell. ``seed`` orders per-seed rows; it is not a CSV column."""

    cover: str
    scheme: str
    rate: float
    seed: int
    ws_plane1: float
    ws_plane2: float
    pov_mean_pvalue: float
    psnr_db: float


@dataclass(frozen=True)
class TrendCheck:
    name: str
    passed: bool
    detail: str


def _bits_from_values(values: list[int]) -> np.ndarray:
    return np.fromiter((v & 1 for v in values), dtype=np.uint8, count=len(values))


@lru_cache(maxsize=256)
def _cached_message(seed: int, bit_count: int) -> np.ndarray:
    state = seed if seed != 0 else SEED_ZERO_SUBSTITUTE
    bits = _bits_from_values(_stream(state, bit_count))
    bits.setflags(write=False)
    return bits


def generate_message(seed: int, bit_count: int) -> np.ndarray:
    """Deterministic keyed message bits (one generator draw per bit)."""
    if bit_count < 0:
        raise ValueError(f"bit_count must be non-negative, got {bit_count}")
    if not 0 <= seed < (1 << 64):
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return _cached_message(seed, bit_count).copy()


def _uniform_pixels(seed: int, n: int) -> np.ndarray:
    state = seed if seed != 0 else SEED_ZERO_SUBSTITUTE
    draws = _stream(state, (n + 7) // 8)
    raw = np.array(draws, dtype=np.uint64).astype("<u8").tobytes()
    return np.frombuffer(raw, dtype=np.uint8)[:n].copy()


def synth_cover(kind: str, width: int, height: int, seed: int) -> GrayImage:
    """Deterministic synthetic cover: ``uniform`` noise or a ``smooth`` scene.

    ``uniform`` fills the raster with i.i.d. bytes from the keyed generator.
    ``smooth`` is a diagonal linear gradient plus a keyed perturbation of
    amplitude <= 8: a few low-frequency sinusoids, quantization to steps of 3
    and a flat +/-2 dither. The quantize+dither step gives the value
    histogram the uneven pair structure of natural photographs while leaving
    the scene smooth enough for neighbor-mean prediction.
    """
    if width < 1 or height < 1:
        raise ValueError(f"cover dimensions must be positive, got {width}x{height}")
    if kind == "uniform":
        return GrayImage(width, height, _uniform_pixels(seed, width * height))
    if kind != "smooth":
        raise ValueError(f"unknown cover kind {kind!r}, expected 'smooth' or 'uniform'")

    n = width * height
    state = seed if seed != 0 else SEED_ZERO_SUBSTITUTE
    draws = _stream(state, 12 + n)
    unit = np.array([d >> 11 for d in draws[:12]], dtype=np.float64) * _FLOAT_SCALE

    y, x = np.mgrid[0:height, 0:width].astype(np.float64)
    gx = x / max(width - 1, 1)
    gy = y / max(height - 1, 1)
    base = (gx + gy) / 2.0 * 255.0

    perturbation = np.zeros((height, width))
    for k in range(3):
        fx = 0.5 + 2.5 * unit[4 * k]
        fy = 0.5 + 2.5 * unit[4 * k + 1]
        phase_x = 2.0 * math.pi * unit[4 * k + 2]
        phase_y = 2.0 * math.pi * unit[4 * k + 3]
        perturbation += np.sin(2.0 * math.pi * fx * gx + phase_x) * np.sin(
            2.0 * math.pi * fy * gy + phase_y
        )

    dither_units = np.array([d >> 11 for d in draws[12:]], dtype=np.float64) * _FLOAT_SCALE
    dither = np.floor(dither_units * 5.0).astype(np.int64).reshape(height, width) - 2

    img = np.rint((base + perturbation) / 3.0) * 3.0 + dither
    return GrayImage(width, height, np.clip(img, 0, 255).astype(np.uint8))


def _analyze(cover: GrayImage, stego: GrayImage, steps: int) -> tuple[float, float, float, float]:
    l1 = mlsb_ws_estimate(stego, 0).estimate
    l2 = mlsb_ws_estimate(stego, 1).estimate
    pov = pov_curve(stego, steps).mean_p_value
    quality = psnr(cover, stego).psnr_db
    return l1, l2, pov, quality


def run_grid_on_covers(covers, cfg: ExperimentConfig) -> list[ResultRow]:
    """Run the grid on pre-loaded ``(cover_id, GrayImage)`` pairs."""
    covers = list(covers)
    if not covers:
        raise ValueError("cover set is empty")
    rows: list[ResultRow] = []
    for cover_id, cover in covers:
        baseline = _analyze(cover, cover, cfg.steps)
        for scheme in cfg.schemes:
            rows.append(ResultRow(cover_id, scheme.value, 0.0, 0, *baseline))
        n = cover.pixel_count
        for scheme in cfg.schemes:
            for rate in cfg.rates:
                bit_count = round(rate * n)
                for seed in cfg.seeds:
                    message = generate_message(seed, bit_count)
                    stego, key = embed(cover, message, scheme, seed)
                    if not np.array_equal(extract(stego, key), message):
                        raise RuntimeError(
                            f"round-trip failed for {cover_id} {scheme.value} "
                            f"rate={rate} seed={seed}"
                        )
                    l1, l2, pov, quality = _analyze(cover, stego, cfg.steps)
                    rows.append(
                        ResultRow(cover_id, scheme.value, rate, seed, l1, l2, pov, quality)
                    )
    return rows


def run_grid(cfg: ExperimentConfig) -> list[ResultRow]:
    """Load covers from ``cfg.cover_paths`` and run the grid."""
    covers = []
    for path in cfg.cover_paths:
        p = Path(path)
        try:
            covers.append((p.stem, load_pgm(p.read_bytes())))
        except (OSError, ValueError) as exc:
            raise ValueError(f"cannot load cover {p}: {exc}") from exc
    return run_grid_on_covers(covers, cfg)


def _fmt(value: float) -> str:
    if math.isinf(value):
        return "inf"
    return f"{value:.4f}"


def _clamp(value: float) -> float:
    return min(max(value, 0.0), 1.0)


def emit_csv(rows) -> str:
    """Render rows as deterministic CSV, sorted by (cover, scheme, rate, seed).

    Raw estimates keep their sign; the ``*_clamped`` columns apply the
    presentation rule (negatives to 0, values above 1 to 1).
    """
    ordered = sorted(rows, key=lambda r: (r.cover, r.scheme, r.rate, r.seed))
    lines = [CSV_HEADER]
    for r in ordered:
        lines.append(
            ",".join(
                (
                    r.cover,
                    r.scheme,
                    _fmt(r.rate),
                    _fmt(r.ws_plane1),
                    _fmt(r.ws_plane2),
                    _fmt(r.pov_mean_pvalue),
                    _fmt(r.psnr_db),
                    _fmt(_clamp(r.ws_plane1)),
                    _fmt(_clamp(r.ws_plane2)),
                )
            )
        )
    return "\n".join(lines) + "\n"


def _mean(values) -> float:
    vals = list(values)
    return sum(vals) / len(vals) if vals else math.nan


def _cell_means(rows, scheme: str, rate: float):
    picked = [r for r in rows if r.scheme == scheme and math.isclose(r.rate, rate)]
    if not picked:
        return None
    return (
        _mean(r.ws_plane1 for r in picked),
        _mean(r.ws_plane2 for r in picked),
        _mean(r.pov_mean_pvalue for r in picked),
        _mean(r.psnr_db for r in picked),
    )


def trend_checks(rows) -> list[TrendCheck]:
    """Pass/fail trend assertions over grid means, mirroring the known
    behavior of the three schemes against the three attacks.

    Each check is evaluated only when the grid contains the cells it needs.
    """
    rows = list(rows)
    checks: list[TrendCheck] = []
    schemes = {r.scheme for r in rows}
    rates = sorted({r.rate for r in rows if r.rate > 0})

    def add(name: str, passed: bool, detail: str) -> None:
        checks.append(TrendCheck(name, passed, detail))

    baseline = [r for r in rows if r.rate == 0.0]
    if baseline:
        mean_abs = _mean(abs(r.ws_plane1) for r in baseline)
        add("ws-cover-near-zero", mean_abs < 0.05, f"mean |estimate| {mean_abs:.4f} < 0.05")
        pov0 = _mean(r.pov_mean_pvalue for r in baseline)
        add("pov-cover-low", pov0 < 0.1, f"mean p-value {pov0:.4f} < 0.1")

    for rate in rates:
        if "lsb" in schemes:
            cell = _cell_means(rows, "lsb", rate)
            add(
                f"ws-lsb-linear@{rate:g}",
                abs(cell[0] - rate) <= 0.1,
                f"mean {cell[0]:.4f} within {rate:g}+/-0.1",
            )
        if "bpi" in schemes:
            cell = _cell_means(rows, "bpi", rate)
            ok = abs(cell[0] + rate) <= 0.15 and _clamp(cell[0]) == 0.0
            add(
                f"ws-bpi-negative@{rate:g}",
                ok,
                f"mean {cell[0]:.4f} within -{rate:g}+/-0.15 and clamps to 0",
            )
        if "2lsb" in schemes:
            cell = _cell_means(rows, "2lsb", rate)
            ok = abs(cell[0] - rate / 2) <= 0.1 and abs(cell[1] - rate / 2) <= 0.1
            add(
                f"mlsbws-2lsb-half@{rate:g}",
                ok,
                f"means {cell[0]:.4f}/{cell[1]:.4f} within {rate / 2:g}+/-0.1",
            )
        if "bpi" in schemes:
            cell = _cell_means(rows, "bpi", rate)
            if math.isclose(rate, 1.0):
                add(
                    "mlsbws-bpi-plane2-full",
                    0.8 <= cell[1] <= 1.2,
                    f"mean {cell[1]:.4f} in [0.8, 1.2]",
                )
            elif rate <= 0.6:
                add(
                    f"mlsbws-bpi-plane2-low@{rate:g}",
                    cell[1] < 0.3,
                    f"mean {cell[1]:.4f} < 0.3",
                )

    if any(math.isclose(r, 1.0) for r in rates):
        if "lsb" in schemes:
            cell = _cell_means(rows, "lsb", 1.0)
            add("pov-lsb-full-high", cell[2] > 0.9, f"mean p-value {cell[2]:.4f} > 0.9")
        if "bpi" in schemes:
            cell = _cell_means(rows, "bpi", 1.0)
            add("pov-bpi-full-low", cell[2] < 0.1, f"mean p-value {cell[2]:.4f} < 0.1")
        if {"lsb", "2lsb", "bpi"} <= schemes:
            q_lsb = _cell_means(rows, "lsb", 1.0)[3]
            q_two = _cell_means(rows, "2lsb", 1.0)[3]
            q_bpi = _cell_means(rows, "bpi", 1.0)[3]
            ok = q_lsb > q_two > q_bpi and abs(q_two - q_bpi) < 1.0
            add(
                "psnr-ordering-full",
                ok,
                f"lsb {q_lsb:.2f} > 2lsb {q_two:.2f} > bpi {q_bpi:.2f} dB, gap < 1 dB",
            )
    return checks
