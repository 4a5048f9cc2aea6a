"""8-bit grayscale image model, binary PGM (P5) I/O, and bit utilities."""

from __future__ import annotations

import numpy as np

__all__ = [
    "GrayImage",
    "PgmError",
    "load_pgm",
    "save_pgm",
    "get_bit",
    "set_bit",
    "pack_bits",
    "unpack_bits",
]


class PgmError(ValueError):
    """Raised when a PGM stream cannot be parsed as binary P5 with maxval 255."""


class GrayImage:
    """An 8-bit grayscale raster.

    Pixels are stored as a (height, width) uint8 array in row-major order;
    flat pixel index j corresponds to row j // width, column j % width.
    """

    __slots__ = ("width", "height", "pixels")

    def __init__(self, width: int, height: int, pixels) -> None:
        if width < 1 or height < 1:
            raise ValueError(f"image dimensions must be positive, got {width}x{height}")
        arr = np.asarray(pixels)
        if arr.size != width * height:
            raise ValueError(
                f"pixel count {arr.size} does not match {width}x{height}={width * height}"
            )
        if arr.dtype != np.uint8:
            vals = arr.astype(np.int64)
            if vals.size and (vals.min() < 0 or vals.max() > 255):
                raise ValueError("pixel values must lie in [0, 255]")
            arr = vals.astype(np.uint8)
        self.width = width
        self.height = height
        self.pixels = np.ascontiguousarray(arr.reshape(height, width))

    @classmethod
    def from_array(cls, arr) -> "GrayImage":
        """Build from a 2-D array-like; shape gives (height, width)."""
        a = np.asarray(arr)
        if a.ndim != 2:
            raise ValueError(f"expected a 2-D array, got shape {a.shape}")
        return cls(a.shape[1], a.shape[0], a)

    @property
    def flat(self) -> np.ndarray:
        """Row-major 1-D view of the pixel data."""
        return self.pixels.reshape(-1)

    @property
    def pixel_count(self) -> int:
        return self.width * self.height

    def copy(self) -> "GrayImage":
        return GrayImage(self.width, self.height, self.pixels.copy())

    def __eq__(self, other) -> bool:
        if not isinstance(other, GrayImage):
            return NotImplemented
        return (
            self.width == other.width
            and self.height == other.height
            and bool(np.array_equal(self.pixels, other.pixels))
        )

    def __repr__(self) -> str:
        return f"GrayImage({self.width}x{self.height})"


def _next_token(data: bytes, pos: int) -> tuple[bytes, int]:
    # Skip whitespace and '#' comments (comment runs to end of line).
    n = len(data)
    while pos < n:
        c = data[pos : pos + 1]
        if c.isspace():
            pos += 1
        elif c == b"#":
            while pos < n and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
        else:
            break
    if pos >= n:
        raise PgmError("malformed header: unexpected end of stream")
    start = pos
    while pos < n and not data[pos : pos + 1].isspace() and data[pos : pos + 1] != b"#":
        pos += 1
    return data[start:pos], pos


def load_pgm(data) -> GrayImage:
    """Parse a binary PGM (P5, maxval 255) from bytes or a binary file object.

    Header comments are accepted; the payload must contain exactly
    width*height bytes.
    """
    if hasattr(data, "read"):
        data = data.read()
    if not isinstance(data, (bytes, bytearray)):
        raise TypeError("load_pgm expects bytes or a binary file object")
    data = bytes(data)

    magic, pos = _next_token(data, 0)
    if magic != b"P5":
        raise PgmError(f"malformed header: expected magic 'P5', got {magic!r}")

    fields = []
    for name in ("width", "height", "maxval"):
        tok, pos = _next_token(data, pos)
        try:
            value = int(tok)
        except ValueError:
            raise PgmError(f"malformed header: non-numeric {name} {tok!r}") from None
        fields.append(value)
    width, height, maxval = fields

    if width < 1 or height < 1:
        raise PgmError(f"malformed header: bad dimensions {width}x{height}")
    if maxval != 255:
        raise PgmError(f"unsupported maxval {maxval}, only 255 is accepted")

    # Exactly one whitespace byte separates the header from the payload.
    if pos >= len(data) or not data[pos : pos + 1].isspace():
        raise PgmError("malformed header: missing separator before payload")
    pos += 1

    payload = data[pos:]
    expected = width * height
    if len(payload) < expected:
        raise PgmError(f"truncated payload: expected {expected} bytes, got {len(payload)}")
    if len(payload) > expected:
        raise PgmError(f"trailing data: expected {expected} payload bytes, got {len(payload)}")

    pixels = np.frombuffer(payload, dtype=np.uint8)
    return GrayImage(width, height, pixels)


def save_pgm(img: GrayImage) -> bytes:
    """Serialize to canonical P5: ``P5\\n<w> <h>\\n255\\n<raw bytes>``."""
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + img.pixels.tobytes()


def get_bit(pixel: int, plane: int) -> int:
    """Bit of ``pixel`` at bitplane ``plane`` (0 = least significant)."""
    if plane not in (0, 1):
        raise ValueError(f"plane must be 0 or 1, got {plane}")
    if not 0 <= pixel <= 255:
        raise ValueError(f"pixel must lie in [0, 255], got {pixel}")
    return (pixel >> plane) & 1


def set_bit(pixel: int, plane: int, bit: int) -> int:
    """Return ``pixel`` with bitplane ``plane`` set to ``bit``; other bits unchanged."""
    if plane not in (0, 1):
        raise ValueError(f"plane must be 0 or 1, got {plane}")
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit}")
    if not 0 <= pixel <= 255:
        raise ValueError(f"pixel must lie in [0, 255], got {pixel}")
    return (pixel & ~(1 << plane)) | (bit << plane)


def pack_bits(data: bytes) -> np.ndarray:
    """Expand bytes to a bit array, most significant bit of each byte first."""
    if len(data) == 0:
        return np.zeros(0, dtype=np.uint8)
    return np.unpackbits(np.frombuffer(bytes(data), dtype=np.uint8))


def unpack_bits(bits) -> tuple[bytes, int]:
    """Pack a bit sequence into bytes (MSB-first), zero-padding the last byte.

    Returns ``(data, bit_length)`` so non-byte-aligned messages keep their
    exact length.
    """
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.ndim != 1:
        raise ValueError("bits must be a 1-D sequence")
    if arr.size and arr.max() > 1:
        raise ValueError("bits must contain only 0 and 1")
    if arr.size == 0:
        return b"", 0
    return np.packbits(arr).tobytes(), int(arr.size)
