"""Steganography and steganalysis toolkit for 8-bit grayscale images.

Three embedding schemes (random-position LSB, 2LSB replacement, and the
bitplane-index scheme), three statistical attacks (PoV chi-square, WS,
MLSB-WS), PSNR quality measurement, and a benchmark harness that sweeps
covers x schemes x embedding rates.
"""

from .bench import (
    ExperimentConfig,
    ResultRow,
    emit_csv,
    generate_message,
    run_grid,
    run_grid_on_covers,
    synth_cover,
    trend_checks,
)
from .image import (
    GrayImage,
    PgmError,
    get_bit,
    load_pgm,
    pack_bits,
    save_pgm,
    set_bit,
    unpack_bits,
)
from .metrics import QualityReport, psnr
from .schemes import (
    CapacityError,
    IndexVector,
    KeyFormatError,
    Scheme,
    StegoKey,
    bpi_embed_at,
    bpi_extract_at,
    capacity_bits,
    embed,
    extract,
    lsb_embed_at,
    lsb_extract_at,
    preprocess_2lsbs,
    twolsb_embed_at,
    twolsb_extract_at,
)
from .selection import select_positions, xorshift64star_next
from .steganalysis import (
    DegenerateHistogramError,
    PlaneEstimate,
    PovCurve,
    chi2_cdf_complement,
    mlsb_ws_estimate,
    pov_curve,
    pov_statistic,
    ws_estimate,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "GrayImage",
    "PgmError",
    "load_pgm",
    "save_pgm",
    "get_bit",
    "set_bit",
    "pack_bits",
    "unpack_bits",
    "select_positions",
    "xorshift64star_next",
    "Scheme",
    "IndexVector",
    "StegoKey",
    "CapacityError",
    "KeyFormatError",
    "preprocess_2lsbs",
    "bpi_embed_at",
    "bpi_extract_at",
    "lsb_embed_at",
    "lsb_extract_at",
    "twolsb_embed_at",
    "twolsb_extract_at",
    "embed",
    "extract",
    "capacity_bits",
    "DegenerateHistogramError",
    "PovCurve",
    "PlaneEstimate",
    "chi2_cdf_complement",
    "pov_statistic",
    "pov_curve",
    "ws_estimate",
    "mlsb_ws_estimate",
    "QualityReport",
    "psnr",
    "ExperimentConfig",
    "ResultRow",
    "generate_message",
    "synth_cover",
    "run_grid",
    "run_grid_on_covers",
    "emit_csv",
    "trend_checks",
]
