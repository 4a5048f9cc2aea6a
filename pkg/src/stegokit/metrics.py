"""Distortion metrics between cover and stego images."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .image import GrayImage

__all__ = ["QualityReport", "psnr"]


@dataclass(frozen=True)
class QualityReport:
    """Mean squared error and the corresponding PSNR in decibels.

    ``psnr_db`` is ``math.inf`` for identical images; reports render it as
    the string ``inf`` rather than a fake large number.
    """

    mse: float
    psnr_db: float


def psnr(cover: GrayImage, stego: GrayImage) -> QualityReport:
    """Peak signal-to-noise ratio, 10*log10(255^2 / MSE).

    The squared-error sum is accumulated in exact integer arithmetic; the
    single final division is the only float operation.
    """
    if cover.width != stego.width or cover.height != stego.height:
        raise ValueError(
            f"dimension mismatch: {cover.width}x{cover.height} vs {stego.width}x{stego.height}"
        )
    diff = cover.pixels.astype(np.int64) - stego.pixels.astype(np.int64)
    sse = int(np.sum(diff * diff))
    n = cover.pixel_count
    if sse == 0:
        return QualityReport(mse=0.0, psnr_db=math.inf)
    mse = sse / n
    return QualityReport(mse=mse, psnr_db=10.0 * math.log10(255.0 * 255.0 / mse))
