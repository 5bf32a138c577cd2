"""Codeword generation and the compact on-disk codebook.

Per position the secret vector stores only the *index* of the bias output,
so a distribution with ``n`` outputs costs ``ceil(log2 n)`` bits per
position (nothing at all when ``n == 1``). The output table is stored once.

File layout (little-endian)::

    "FPCB" u16 version=1, u16 c, u32 N, u32 m, u8 bits_per_position,
    u16 output_count, output_count x (f64 p, f64 q),
    packed bias indices (m x bits_per_position bits, LSB-first),
    N rows of ceil(m/8) packed codeword bytes (LSB-first),
    u32 CRC-32 of every preceding byte.

The generation seed is not part of the file.
"""

from __future__ import annotations

import struct
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bias import BiasDistribution, sample_bias
from .rng import stream

__all__ = [
    "BiasVector",
    "CodeMatrix",
    "Codebook",
    "MemoryReport",
    "CodebookFormatError",
    "CodebookVersionError",
    "generate",
    "memory_report",
    "save",
    "load",
    "to_bytes",
    "from_bytes",
    "bits_per_position",
]

MAGIC = b"FPCB"
VERSION = 1
_HEADER = struct.Struct("<4sHHIIBH")
_PAIR = struct.Struct("<dd")
_CRC = struct.Struct("<I")


class CodebookFormatError(ValueError):
    """Malformed codebook file; ``offset`` is where parsing failed."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class CodebookVersionError(CodebookFormatError):
    pass


def bits_per_position(n_outputs: int) -> int:
    """``ceil(log2 n_outputs)``; zero for a single output."""
    return (int(n_outputs) - 1).bit_length()


@dataclass(frozen=True, eq=False)
class BiasVector:
    """Secret per-position output indices into ``dist``."""

    indices: np.ndarray
    dist: BiasDistribution

    def __post_init__(self):
        idx = np.array(self.indices, dtype=np.uint16).ravel()
        if idx.size and int(idx.max()) >= self.dist.n_outputs:
            raise ValueError("bias index out of range for the distribution")
        idx.setflags(write=False)
        object.__setattr__(self, "indices", idx)

    @property
    def m(self) -> int:
        return int(self.indices.size)

    @property
    def values(self) -> np.ndarray:
        """The biases ``p^(j)`` themselves."""
        return self.dist.p[self.indices]


@dataclass(frozen=True, eq=False)
class CodeMatrix:
    """``N x m`` bit matrix, one packed row (LSB-first) per user."""

    packed: np.ndarray
    m: int

    def __post_init__(self):
        packed = np.ascontiguousarray(self.packed, dtype=np.uint8)
        if packed.ndim != 2 or packed.shape[1] != (self.m + 7) // 8:
            raise ValueError("packed rows must have ceil(m/8) bytes")
        packed.setflags(write=False)
        object.__setattr__(self, "packed", packed)

    @classmethod
    def from_bits(cls, bits) -> "CodeMatrix":
        bits = np.asarray(bits, dtype=np.uint8)
        return cls(np.packbits(bits, axis=1, bitorder="little"), bits.shape[1])

    @property
    def N(self) -> int:
        return int(self.packed.shape[0])

    def row(self, i: int) -> np.ndarray:
        return np.unpackbits(self.packed[i], count=self.m, bitorder="little")

    def unpacked(self, rows=None) -> np.ndarray:
        block = self.packed if rows is None else self.packed[rows]
        return np.unpackbits(block, axis=-1, count=self.m, bitorder="little")


@dataclass(frozen=True, eq=False)
class Codebook:
    dist: BiasDistribution
    biases: BiasVector
    matrix: CodeMatrix
    c: int
    seed: object = None

    def __post_init__(self):
        if self.biases.m != self.matrix.m:
            raise ValueError("bias vector and code matrix lengths differ")

    @property
    def N(self) -> int:
        return self.matrix.N

    @property
    def m(self) -> int:
        return self.matrix.m

    def codewords(self, rows=None) -> np.ndarray:
        return self.matrix.unpacked(rows)

    def __eq__(self, other):
        """Value equality over everything the file format records."""
        if not isinstance(other, Codebook):
            return NotImplemented
        return bool(
            self.c == other.c
            and self.dist == other.dist
            and np.array_equal(self.biases.indices, other.biases.indices)
            and self.matrix.m == other.matrix.m
            and np.array_equal(self.matrix.packed, other.matrix.packed)
        )

    def __repr__(self):
        return f"Codebook(c={self.c}, N={self.N}, m={self.m}, outputs={self.dist.n_outputs}, seed={self.seed!r})"


def _row(seed, i: int, p: np.ndarray) -> np.ndarray:
    bits = stream(seed, "row", i).random(p.size) < p
    return np.packbits(bits, bitorder="little")


def generate(dist: BiasDistribution, m: int, N: int, seed, c: int | None = None, threads: int = 1) -> Codebook:
    """Draw the secret biases and ``N`` codewords of length ``m``.

    Position ``j`` gets bias index ``sample_bias(dist, u_j)`` with ``u``
    from stream ``(seed, "bias")``; user ``i`` draws stream
    ``(seed, "row", i)`` and sets bit ``j`` iff ``u_ij < p^(j)``. Rows are
    independent, so ``threads`` does not change the result.
    """
    if m < 1 or N < 1:
        raise ValueError(f"need m >= 1 and N >= 1, got m={m}, N={N}")
    if c is None:
        c = 2 * dist.n_outputs
    idx = sample_bias(dist, stream(seed, "bias").random(m))
    biases = BiasVector(idx, dist)
    p = biases.values
    if threads > 1 and N > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda i: _row(seed, i, p), range(N)))
    else:
        rows = [_row(seed, i, p) for i in range(N)]
    return Codebook(dist, biases, CodeMatrix(np.stack(rows), m), int(c), seed)


@dataclass(frozen=True)
class MemoryReport:
    bits_per_position: int
    total_bias_bits: int


def memory_report(cb: Codebook) -> MemoryReport:
    bpp = bits_per_position(cb.dist.n_outputs)
    return MemoryReport(bpp, bpp * cb.m)


def _pack_indices(indices: np.ndarray, bpp: int) -> bytes:
    if bpp == 0:
        return b""
    shifts = np.arange(bpp, dtype=np.uint16)
    bits = ((indices.astype(np.uint16)[:, None] >> shifts) & 1).astype(np.uint8).ravel()
    return np.packbits(bits, bitorder="little").tobytes()


def _unpack_indices(data: bytes, m: int, bpp: int) -> np.ndarray:
    if bpp == 0:
        return np.zeros(m, dtype=np.uint16)
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8), count=m * bpp, bitorder="little")
    weights = (1 << np.arange(bpp)).astype(np.uint32)
    return (bits.reshape(m, bpp).astype(np.uint32) @ weights).astype(np.uint16)


def to_bytes(cb: Codebook) -> bytes:
    n_out = cb.dist.n_outputs
    bpp = bits_per_position(n_out)
    if cb.c > 0xFFFF or n_out > 0xFFFF:
        raise ValueError("c and output count must fit in 16 bits")
    parts = [_HEADER.pack(MAGIC, VERSION, cb.c, cb.N, cb.m, bpp, n_out)]
    parts += [_PAIR.pack(float(p), float(q)) for p, q in zip(cb.dist.p, cb.dist.q)]
    parts.append(_pack_indices(cb.biases.indices, bpp))
    parts.append(cb.matrix.packed.tobytes())
    body = b"".join(parts)
    return body + _CRC.pack(zlib.crc32(body) & 0xFFFFFFFF)


def from_bytes(data: bytes) -> Codebook:
    data = bytes(data)
    if len(data) < _HEADER.size:
        raise CodebookFormatError("truncated header", len(data))
    magic, version, c, N, m, bpp, n_out = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise CodebookFormatError(f"bad magic {magic!r}", 0)
    if version != VERSION:
        raise CodebookVersionError(f"unsupported codebook version {version}", 4)
    if n_out < 1 or bpp != bits_per_position(n_out):
        raise CodebookFormatError(f"inconsistent bits_per_position {bpp} for {n_out} outputs", 16)
    off = _HEADER.size
    table_end = off + n_out * _PAIR.size
    bias_len = (m * bpp + 7) // 8
    row_len = (m + 7) // 8
    rows_start = table_end + bias_len
    body_end = rows_start + N * row_len
    if len(data) < body_end + _CRC.size:
        raise CodebookFormatError(f"file truncated: expected {body_end + _CRC.size} bytes, got {len(data)}", len(data))
    if len(data) > body_end + _CRC.size:
        raise CodebookFormatError("trailing bytes after checksum", body_end + _CRC.size)
    (crc,) = _CRC.unpack_from(data, body_end)
    if crc != zlib.crc32(data[:body_end]) & 0xFFFFFFFF:
        raise CodebookFormatError("checksum mismatch", body_end)

    pairs = [_PAIR.unpack_from(data, off + i * _PAIR.size) for i in range(n_out)]
    try:
        dist = BiasDistribution([a for a, _ in pairs], [b for _, b in pairs])
    except ValueError as exc:
        raise CodebookFormatError(f"invalid distribution table: {exc}", off) from None
    idx = _unpack_indices(data[table_end:rows_start], m, bpp)
    if m and int(idx.max()) >= n_out:
        raise CodebookFormatError("bias index out of range", table_end)
    packed = np.frombuffer(data[rows_start:body_end], dtype=np.uint8).reshape(N, row_len).copy()
    return Codebook(dist, BiasVector(idx, dist), CodeMatrix(packed, m), c)


def save(cb: Codebook, path) -> None:
    Path(path).write_bytes(to_bytes(cb))


def load(path) -> Codebook:
    return from_bytes(Path(path).read_bytes())
