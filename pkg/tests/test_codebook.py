import numpy as np
import pytest

from glfingerprint.bias import gl_distribution
from glfingerprint.codebook import (
    BiasVector,
    CodebookFormatError,
    CodebookVersionError,
    CodeMatrix,
    bits_per_position,
    from_bytes,
    generate,
    load,
    memory_report,
    save,
    to_bytes,
)


def test_c2_single_output():
    cb = generate(gl_distribution(2), 4000, 50, seed=1)
    assert np.all(cb.biases.indices == 0)
    freq = cb.codewords().mean()
    n = cb.N * cb.m
    assert abs(freq - 0.5) < 3 * np.sqrt(0.25 / n)


def test_conditional_frequency_c4():
    dist = gl_distribution(4)
    cb = generate(dist, 10**5, 1, seed=2)
    w = cb.codewords()[0]
    sel = cb.biases.indices == 0
    n = sel.sum()
    p0 = dist.p[0]
    assert abs(w[sel].mean() - p0) < 3 * np.sqrt(p0 * (1 - p0) / n)
    assert abs(p0 - 0.21132) < 5e-6


def test_column_frequencies():
    dist = gl_distribution(8)
    cb = generate(dist, 200, 2000, seed=3)
    W = cb.codewords()
    p = cb.biases.values
    z = (W.mean(axis=0) - p) / np.sqrt(p * (1 - p) / cb.N)
    # 200 positions at N = 2000 users each; allow a few 3-sigma excursions
    assert np.mean(np.abs(z) > 3) < 0.02


def test_index_frequencies_chi_square():
    from scipy.stats import chisquare

    dist = gl_distribution(10)
    cb = generate(dist, 10**5, 1, seed=4)
    counts = np.bincount(cb.biases.indices, minlength=dist.n_outputs)
    assert chisquare(counts, dist.q * counts.sum()).pvalue > 0.001


def test_determinism_and_threads():
    dist = gl_distribution(6)
    a = to_bytes(generate(dist, 1001, 37, seed=9))
    assert a == to_bytes(generate(dist, 1001, 37, seed=9))
    assert a == to_bytes(generate(dist, 1001, 37, seed=9, threads=8))
    assert a != to_bytes(generate(dist, 1001, 37, seed=10))


def test_rows_independent_of_N():
    dist = gl_distribution(4)
    small = generate(dist, 300, 5, seed=11)
    big = generate(dist, 300, 50, seed=11)
    np.testing.assert_array_equal(small.codewords(), big.codewords(slice(0, 5)))


def test_invalid_sizes():
    with pytest.raises(ValueError):
        generate(gl_distribution(4), 0, 5, seed=1)
    with pytest.raises(ValueError):
        generate(gl_distribution(4), 5, 0, seed=1)


@pytest.mark.parametrize("c, m, expected", [(2, 6278, (0, 0)), (4, 19750, (1, 19750)), (6, 10, (2, 20))])
def test_memory_report(c, m, expected):
    cb = generate(gl_distribution(c), m, 1, seed=0)
    rep = memory_report(cb)
    assert (rep.bits_per_position, rep.total_bias_bits) == expected


def test_bits_per_position():
    assert [bits_per_position(n) for n in (1, 2, 3, 4, 5, 8, 9)] == [0, 1, 2, 2, 3, 3, 4]


def test_roundtrip(tmp_path):
    for c, m in ((2, 17), (4, 19750), (10, 333), (16, 8)):
        cb = generate(gl_distribution(c), m, 7, seed=c)
        path = tmp_path / f"cb{c}.fpcb"
        save(cb, path)
        back = load(path)
        assert back == cb
        assert back.c == c
        np.testing.assert_array_equal(back.codewords(), cb.codewords())


def test_file_size():
    cb = generate(gl_distribution(4), 19750, 400, seed=5)
    row = (19750 + 7) // 8
    header = 4 + 2 + 2 + 4 + 4 + 1 + 2
    assert len(to_bytes(cb)) == header + 2 * 16 + row + 400 * row + 4


def test_layout():
    cb = generate(gl_distribution(4), 10, 2, seed=6)
    data = to_bytes(cb)
    assert data[:4] == b"FPCB"
    assert int.from_bytes(data[4:6], "little") == 1
    assert int.from_bytes(data[6:8], "little") == 4
    assert int.from_bytes(data[8:12], "little") == 2
    assert int.from_bytes(data[12:16], "little") == 10
    assert data[16] == 1
    assert int.from_bytes(data[17:19], "little") == 2
    idx_bits = np.unpackbits(np.frombuffer(data[51:53], np.uint8), bitorder="little")[:10]
    np.testing.assert_array_equal(idx_bits, cb.biases.indices)


def _with_crc(body: bytes) -> bytes:
    import zlib

    return body + (zlib.crc32(body) & 0xFFFFFFFF).to_bytes(4, "little")


class TestMalformed:
    data = to_bytes(generate(gl_distribution(4), 50, 3, seed=7))

    def test_truncated(self):
        for cut in (0, 5, 18, 30, len(self.data) - 1):
            with pytest.raises(CodebookFormatError):
                from_bytes(self.data[:cut])

    def test_trailing(self):
        with pytest.raises(CodebookFormatError):
            from_bytes(self.data + b"\0")

    def test_checksum(self):
        bad = bytearray(self.data)
        bad[-10] ^= 1
        with pytest.raises(CodebookFormatError) as err:
            from_bytes(bytes(bad))
        assert err.value.offset == len(self.data) - 4

    def test_magic(self):
        with pytest.raises(CodebookFormatError) as err:
            from_bytes(b"XXXX" + self.data[4:])
        assert err.value.offset == 0

    def test_version(self):
        body = bytearray(self.data[:-4])
        body[4] = 2
        with pytest.raises(CodebookVersionError):
            from_bytes(_with_crc(bytes(body)))

    def test_bad_table(self):
        body = bytearray(self.data[:-4])
        body[19:27] = np.float64(0.3).tobytes()
        with pytest.raises(CodebookFormatError):
            from_bytes(_with_crc(bytes(body)))


def test_types_validate():
    dist = gl_distribution(4)
    with pytest.raises(ValueError):
        BiasVector([0, 2], dist)
    with pytest.raises(ValueError):
        CodeMatrix(np.zeros((2, 3), np.uint8), 10)
