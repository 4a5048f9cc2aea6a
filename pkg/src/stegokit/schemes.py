"""Embedding/extraction schemes: random LSB, 2LSB, and bitplane-index (BPI).

All three share one contract: ``*_embed_at`` operations write message bits
into explicitly given pixel positions, and ``embed``/``extract`` compose them
with keyed position selection plus a serializable side-channel key.

The BPI scheme first forces the two LSBs of each selected pixel into 01 or
10, then stores each bit in whichever of the two planes already matches it.
The per-bit plane index is forced to alternate (swapping the two LSBs when
needed), so the whole index vector compresses to a first index and a length.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .image import GrayImage
from .selection import select_positions

__all__ = [
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
]


class CapacityError(ValueError):
    """Message does not fit the cover under the chosen scheme."""


class KeyFormatError(ValueError):
    """A stego key line could not be parsed."""


class Scheme(enum.Enum):
    LSB = "lsb"
    TWOLSB = "2lsb"
    BPI = "bpi"

    @classmethod
    def from_token(cls, token: str) -> "Scheme":
        for member in cls:
            if member.value == token:
                return member
        raise KeyFormatError(f"unknown scheme token {token!r}")


@dataclass(frozen=True)
class IndexVector:
    """Alternating plane-index record produced by BPI embedding.

    Expands to ``first_index, 1-first_index, first_index, ...`` of ``length``
    entries. The compressed rendering is ``n(10)`` or ``n(01)`` with
    ``n = ceil(length / 2)``; odd lengths get a trailing ``-1`` marker meaning
    the final pair is truncated to its first index.
    """

    first_index: int
    length: int

    def __post_init__(self) -> None:
        if self.first_index not in (0, 1):
            raise ValueError(f"first_index must be 0 or 1, got {self.first_index}")
        if self.length < 0:
            raise ValueError(f"length must be non-negative, got {self.length}")

    def expand(self) -> np.ndarray:
        """The full alternating index sequence as a uint8 array."""
        idx = np.arange(self.length, dtype=np.int64) & 1
        return (idx ^ self.first_index).astype(np.uint8)

    @property
    def pair_count(self) -> int:
        return (self.length + 1) // 2

    def render(self) -> str:
        pattern = "10" if self.first_index == 1 else "01"
        text = f"{self.pair_count}({pattern})"
        if self.length % 2 == 1:
            text += "-1"
        return text


@dataclass(frozen=True)
class StegoKey:
    """Side-channel data the receiver needs: scheme, seed, length, first index."""

    scheme: Scheme
    seed: int
    bit_length: int
    first_index: int | None = None

    def __post_init__(self) -> None:
        if not 0 <= self.seed < (1 << 64):
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.bit_length < 0:
            raise ValueError(f"bit_length must be non-negative, got {self.bit_length}")
        if self.scheme is Scheme.BPI:
            if self.first_index not in (0, 1):
                raise ValueError("BPI keys require first_index 0 or 1")
        elif self.first_index is not None:
            raise ValueError(f"first_index is only meaningful for BPI, got {self.first_index}")

    def to_line(self) -> str:
        line = f"scheme={self.scheme.value};seed={self.seed};bits={self.bit_length}"
        if self.scheme is Scheme.BPI:
            line += f";first={self.first_index}"
        return line

    @classmethod
    def from_line(cls, line: str) -> "StegoKey":
        fields: dict[str, str] = {}
        for part in line.strip().split(";"):
            if not part:
                continue
            if "=" not in part:
                raise KeyFormatError(f"malformed key field {part!r}")
            name, _, value = part.partition("=")
            if name in fields:
                raise KeyFormatError(f"duplicate key field {name!r}")
            fields[name] = value
        try:
            scheme = Scheme.from_token(fields.pop("scheme"))
            seed = int(fields.pop("seed"))
            bits = int(fields.pop("bits"))
        except KeyError as exc:
            raise KeyFormatError(f"missing key field {exc.args[0]!r}") from None
        except ValueError as exc:
            raise KeyFormatError(f"non-numeric key field: {exc}") from None
        first: int | None = None
        if scheme is Scheme.BPI:
            if "first" not in fields:
                raise KeyFormatError("BPI key missing 'first' field")
            try:
                first = int(fields.pop("first"))
            except ValueError:
                raise KeyFormatError("non-numeric 'first' field") from None
        if fields:
            raise KeyFormatError(f"unexpected key fields {sorted(fields)}")
        try:
            return cls(scheme=scheme, seed=seed, bit_length=bits, first_index=first)
        except ValueError as exc:
            raise KeyFormatError(str(exc)) from None


def preprocess_2lsbs(pixel: int) -> int:
    """Force the two LSBs into {01, 10}: 11 -> 01, 00 -> 10, else unchanged."""
    if not 0 <= pixel <= 255:
        raise ValueError(f"pixel must lie in [0, 255], got {pixel}")
    two = pixel & 3
    if two == 3:
        return pixel - 2
    if two == 0:
        return pixel + 2
    return pixel


def _preprocess_array(px: np.ndarray) -> np.ndarray:
    # Vectorized preprocess_2lsbs; operates on a signed copy to allow +/-2.
    out = px.astype(np.int16)
    two = out & 3
    out[two == 3] -= 2
    out[two == 0] += 2
    return out


def _as_bits(bits) -> np.ndarray:
    arr = np.asarray(bits, dtype=np.uint8).reshape(-1)
    if arr.size and arr.max() > 1:
        raise ValueError("message bits must contain only 0 and 1")
    return arr


def _as_positions(positions, n: int) -> np.ndarray:
    pos = np.asarray(positions, dtype=np.int64).reshape(-1)
    if pos.size:
        lo, hi = int(pos.min()), int(pos.max())
        if lo < 0 or hi >= n:
            raise ValueError(f"position {lo if lo < 0 else hi} out of range for {n} pixels")
    return pos


def bpi_embed_at(
    cover: GrayImage, bits, positions
) -> tuple[GrayImage, IndexVector]:
    """Embed one bit per selected pixel via bitplane-index manipulation.

    Each selected pixel is preprocessed so its two LSBs differ, making
    exactly one of the two planes match the bit. The matching plane of the
    first pixel fixes the alternating index sequence; later pixels whose
    natural match falls on the wrong plane get their two LSBs swapped
    (01 <-> 10, a +/-1 change). Per-pixel change magnitude never exceeds 2.
    """
    msg = _as_bits(bits)
    pos = _as_positions(positions, cover.pixel_count)
    if msg.size != pos.size:
        raise ValueError(f"{msg.size} bits but {pos.size} positions")
    flat = cover.flat.copy()
    if msg.size == 0:
        return GrayImage(cover.width, cover.height, flat), IndexVector(0, 0)

    px = _preprocess_array(flat[pos])
    natural = ((px & 1).astype(np.uint8) != msg).astype(np.uint8)
    first = int(natural[0])
    required = ((np.arange(msg.size, dtype=np.int64) & 1) ^ first).astype(np.uint8)
    # XOR with 3 swaps 01 <-> 10 wherever the natural index breaks alternation.
    px ^= ((natural ^ required) * 3).astype(np.int16)
    flat[pos] = px.astype(np.uint8)
    return GrayImage(cover.width, cover.height, flat), IndexVector(first, int(msg.size))


def bpi_extract_at(stego: GrayImage, index_vector: IndexVector, positions) -> np.ndarray:
    """Read each bit from the plane named by the expanded alternating indices."""
    pos = _as_positions(positions, stego.pixel_count)
    if pos.size != index_vector.length:
        raise ValueError(
            f"index vector length {index_vector.length} but {pos.size} positions"
        )
    if pos.size == 0:
        return np.zeros(0, dtype=np.uint8)
    planes = index_vector.expand()
    px = stego.flat[pos]
    return ((px >> planes) & 1).astype(np.uint8)


def lsb_embed_at(cover: GrayImage, bits, positions) -> GrayImage:
    """Replace the LSB of each selected pixel with the corresponding bit."""
    msg = _as_bits(bits)
    pos = _as_positions(positions, cover.pixel_count)
    if msg.size != pos.size:
        raise ValueError(f"{msg.size} bits but {pos.size} positions")
    flat = cover.flat.copy()
    flat[pos] = (flat[pos] & 0xFE) | msg
    return GrayImage(cover.width, cover.height, flat)


def lsb_extract_at(stego: GrayImage, bit_length: int, positions) -> np.ndarray:
    """Read the LSB of each selected pixel."""
    pos = _as_positions(positions, stego.pixel_count)
    if pos.size != bit_length:
        raise ValueError(f"bit length {bit_length} but {pos.size} positions")
    return (stego.flat[pos] & 1).astype(np.uint8)


def twolsb_embed_at(cover: GrayImage, bits, positions) -> GrayImage:
    """Replace both LSBs per selected pixel with consecutive bit pairs.

    The first bit of each pair goes to plane 0, the second to plane 1; an odd
    final bit occupies plane 0 only.
    """
    msg = _as_bits(bits)
    pos = _as_positions(positions, cover.pixel_count)
    needed = (msg.size + 1) // 2
    if pos.size != needed:
        raise ValueError(f"{msg.size} bits need {needed} positions, got {pos.size}")
    flat = cover.flat.copy()
    if msg.size == 0:
        return GrayImage(cover.width, cover.height, flat)
    b0 = msg[0::2]
    b1 = msg[1::2]
    px = flat[pos]
    px = (px & 0xFE) | b0
    px[: b1.size] = (px[: b1.size] & 0xFD) | (b1 << 1)
    flat[pos] = px
    return GrayImage(cover.width, cover.height, flat)


def twolsb_extract_at(stego: GrayImage, bit_length: int, positions) -> np.ndarray:
    """Read plane 0 then plane 1 per pixel to reassemble the bit stream."""
    pos = _as_positions(positions, stego.pixel_count)
    needed = (bit_length + 1) // 2
    if pos.size != needed:
        raise ValueError(f"bit length {bit_length} needs {needed} positions, got {pos.size}")
    out = np.zeros(bit_length, dtype=np.uint8)
    if bit_length == 0:
        return out
    px = stego.flat[pos]
    out[0::2] = px & 1
    full_pairs = bit_length // 2
    out[1::2] = (px[:full_pairs] >> 1) & 1
    return out


def capacity_bits(n_pixels: int, scheme: Scheme) -> int:
    """Maximum message length in bits for an image of ``n_pixels``."""
    return 2 * n_pixels if scheme is Scheme.TWOLSB else n_pixels


def _pixels_needed(bit_length: int, scheme: Scheme) -> int:
    return (bit_length + 1) // 2 if scheme is Scheme.TWOLSB else bit_length


def embed(cover: GrayImage, message, scheme: Scheme, seed: int) -> tuple[GrayImage, StegoKey]:
    """Embed ``message`` bits at keyed pseudo-random positions.

    Returns the stego image and the key to hand to the receiver. Raises
    CapacityError when the message does not fit.
    """
    bits = _as_bits(message)
    n = cover.pixel_count
    cap = capacity_bits(n, scheme)
    if bits.size > cap:
        raise CapacityError(f"payload {bits.size} bits exceeds capacity {cap}")
    positions = select_positions(seed, n, _pixels_needed(bits.size, scheme))

    if scheme is Scheme.LSB:
        stego = lsb_embed_at(cover, bits, positions)
        key = StegoKey(scheme, seed, int(bits.size))
    elif scheme is Scheme.TWOLSB:
        stego = twolsb_embed_at(cover, bits, positions)
        key = StegoKey(scheme, seed, int(bits.size))
    elif scheme is Scheme.BPI:
        stego, ivec = bpi_embed_at(cover, bits, positions)
        key = StegoKey(scheme, seed, int(bits.size), first_index=ivec.first_index)
    else:  # pragma: no cover - closed enumeration
        raise ValueError(f"unknown scheme {scheme!r}")
    return stego, key


def extract(stego: GrayImage, key: StegoKey) -> np.ndarray:
    """Recover the message bits described by ``key`` from ``stego``."""
    n = stego.pixel_count
    cap = capacity_bits(n, key.scheme)
    if key.bit_length > cap:
        raise CapacityError(
            f"key bit length {key.bit_length} exceeds capacity {cap} of {n} pixels"
        )
    positions = select_positions(key.seed, n, _pixels_needed(key.bit_length, key.scheme))
    if key.scheme is Scheme.LSB:
        return lsb_extract_at(stego, key.bit_length, positions)
    if key.scheme is Scheme.TWOLSB:
        return twolsb_extract_at(stego, key.bit_length, positions)
    ivec = IndexVector(key.first_index if key.first_index is not None else 0, key.bit_length)
    return bpi_extract_at(stego, ivec, positions)
