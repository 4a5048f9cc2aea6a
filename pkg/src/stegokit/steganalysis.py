"""Statistical attacks: PoV chi-square curve and weighted-stego estimators.

PoV tests whether histogram pairs (2k, 2k+1) are suspiciously equalized, the
signature of LSB replacement. The weighted-stego (WS) family estimates the
change rate of a bitplane by correlating the difference between the image and
its bit-flipped twin with the residual against a local cover predictor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .image import GrayImage

__all__ = [
    "DegenerateHistogramError",
    "PovCurve",
    "PlaneEstimate",
    "chi2_cdf_complement",
    "pov_statistic",
    "pov_curve",
    "ws_estimate",
    "mlsb_ws_estimate",
]

_EPS = 1e-15
_MAX_ITER = 1000


class DegenerateHistogramError(ValueError):
    """Histogram has too few populated value pairs for a chi-square test."""


@dataclass(frozen=True)
class PovCurve:
    """Embedding probability as a function of the image fraction tested."""

    fractions: tuple[float, ...]
    p_values: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.fractions) != len(self.p_values):
            raise ValueError("fractions and p_values must have equal length")
        if any(b <= a for a, b in zip(self.fractions, self.fractions[1:])):
            raise ValueError("fractions must be strictly increasing")

    @property
    def mean_p_value(self) -> float:
        return float(np.mean(self.p_values)) if self.p_values else 0.0


@dataclass(frozen=True)
class PlaneEstimate:
    """Raw change-rate estimate for one bitplane (may be negative or > 1)."""

    plane: int
    estimate: float

    @property
    def clamped(self) -> float:
        """Presentation value: negatives read as 0, values above 1 as 1."""
        return min(max(self.estimate, 0.0), 1.0)


def _lower_gamma_series(a: float, x: float) -> float:
    # Regularized lower incomplete gamma P(a, x) by power series; x < a + 1.
    term = 1.0 / a
    total = term
    k = a
    for _ in range(_MAX_ITER):
        k += 1.0
        term *= x / k
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(a * math.log(x) - x - math.lgamma(a))


def _upper_gamma_cf(a: float, x: float) -> float:
    # Regularized upper incomplete gamma Q(a, x) by continued fraction
    # (modified Lentz); x >= a + 1.
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h * math.exp(a * math.log(x) - x - math.lgamma(a))


def chi2_cdf_complement(statistic: float, df: int) -> float:
    """P(X >= statistic) for X ~ chi-square with ``df`` degrees of freedom.

    Computed as 1 - P(df/2, statistic/2) with the regularized lower
    incomplete gamma: power series below the a+1 crossover, continued
    fraction above it. Absolute error stays well under 1e-8.
    """
    if not isinstance(df, (int, np.integer)) or df < 1:
        raise ValueError(f"degrees of freedom must be a positive integer, got {df}")
    if statistic < 0 or not math.isfinite(statistic):
        raise ValueError(f"statistic must be finite and non-negative, got {statistic}")
    a = df / 2.0
    x = statistic / 2.0
    if x == 0.0:
        return 1.0
    if x < a + 1.0:
        return min(max(1.0 - _lower_gamma_series(a, x), 0.0), 1.0)
    return min(max(_upper_gamma_cf(a, x), 0.0), 1.0)


def pov_statistic(histogram) -> tuple[float, int]:
    """Pairs-of-values chi-square statistic over a 256-bin histogram.

    For each value pair (2k, 2k+1) with at least 4 combined counts, the
    observed count h(2k) is tested against the pooled expectation
    (h(2k)+h(2k+1))/2. Degrees of freedom = retained pairs - 1.
    """
    h = np.asarray(histogram, dtype=np.float64).reshape(-1)
    if h.size != 256:
        raise ValueError(f"histogram must have 256 bins, got {h.size}")
    even = h[0::2]
    total = even + h[1::2]
    keep = total >= 4
    retained = int(keep.sum())
    if retained < 2:
        raise DegenerateHistogramError(
            f"only {retained} histogram pair(s) populated, need at least 2"
        )
    expected = total[keep] / 2.0
    statistic = float(np.sum((even[keep] - expected) ** 2 / expected))
    return statistic, retained - 1


def pov_curve(img: GrayImage, steps: int = 100) -> PovCurve:
    """PoV embedding probability over growing row-major prefixes.

    Step t covers the first ceil((t/steps) * n) pixels. Prefixes whose
    histogram is degenerate record probability 0.
    """
    if steps < 1:
        raise ValueError(f"steps must be positive, got {steps}")
    flat = img.flat
    n = flat.size
    hist = np.zeros(256, dtype=np.int64)
    fractions = []
    p_values = []
    prev = 0
    for t in range(1, steps + 1):
        end = -(-t * n // steps)
        if end > prev:
            hist += np.bincount(flat[prev:end], minlength=256)
            prev = end
        try:
            statistic, df = pov_statistic(hist)
            p = chi2_cdf_complement(statistic, df)
        except DegenerateHistogramError:
            p = 0.0
        fractions.append(t / steps)
        p_values.append(p)
    return PovCurve(tuple(fractions), tuple(p_values))


def _ws_kernel(pixels: np.ndarray, flip_mask: int) -> float:
    # Least-squares unflipping estimate: the image is compared against its
    # masked-flip twin, with the mean of the 4 orthogonal neighbors as the
    # cover predictor. Only interior pixels enter the sums.
    s = pixels.astype(np.float64)
    flipped = (pixels ^ flip_mask).astype(np.float64)
    predictor = (s[:-2, 1:-1] + s[2:, 1:-1] + s[1:-1, :-2] + s[1:-1, 2:]) * 0.25
    center = s[1:-1, 1:-1]
    diff = center - flipped[1:-1, 1:-1]
    numerator = float(np.sum(diff * (center - predictor)))
    denominator = float(np.sum(diff * diff))
    return 2.0 * numerator / denominator


def _require_interior(img: GrayImage) -> None:
    if img.width < 3 or img.height < 3:
        raise ValueError(
            f"image must be at least 3x3 for neighbor prediction, got {img.width}x{img.height}"
        )


def ws_estimate(img: GrayImage) -> PlaneEstimate:
    """Weighted-stego estimate of the LSB change rate (raw, unclamped).

    For LSB replacement at rate p the estimate concentrates near p; negative
    values mean the image's LSB structure anti-correlates with flipping.
    """
    _require_interior(img)
    return PlaneEstimate(plane=0, estimate=_ws_kernel(img.pixels, 1))


def mlsb_ws_estimate(img: GrayImage, plane: int) -> PlaneEstimate:
    """Per-bitplane change-rate estimate for multi-LSB embeddings.

    The flip twin toggles bit ``plane`` together with all lower bits, and the
    correlation is normalized by the flip distance, so plane 0 reduces
    exactly to ``ws_estimate``.
    """
    if plane not in (0, 1):
        raise ValueError(f"plane must be 0 or 1, got {plane}")
    _require_interior(img)
    mask = (1 << (plane + 1)) - 1
    return PlaneEstimate(plane=plane, estimate=_ws_kernel(img.pixels, mask))
