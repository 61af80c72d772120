import numpy as np
import pytest

from physec.bits import STAGE_AMPLIFIED, STAGE_QUANTIZED, BitKey
from physec.errors import KeystreamExhausted, ParameterError
from physec.keystream import (
    BitReader,
    KeystreamSeed,
    invert_permutation,
    keyed_permutation,
    keyed_subset,
    keystream,
    permutation_allocation_bits,
    subset_allocation_bits,
    xor_encrypt,
)


def _seed(seed_int=0, nonce=0, n=128):
    rng = np.random.default_rng(seed_int)
    key = BitKey(rng.integers(0, 2, size=n, dtype=np.uint8), STAGE_AMPLIFIED)
    return KeystreamSeed(key, nonce=nonce)


def test_keystream_deterministic():
    s = _seed(0)
    assert np.array_equal(keystream(s, 1000), keystream(s, 1000))
    assert not np.array_equal(keystream(s, 1000), keystream(_seed(1), 1000))


def test_keystream_seek_by_block():
    s = _seed(2)
    full = keystream(s, 512)
    assert np.array_equal(full[256:], keystream(s, 256, block_offset=1))
    assert np.array_equal(full[:256], keystream(s, 256, block_offset=0))


def test_keystream_nonce_offset_equivalence():
    key = _seed(3).key
    a = keystream(KeystreamSeed(key, nonce=5), 256)
    b = keystream(KeystreamSeed(key, nonce=0), 256, block_offset=5)
    assert np.array_equal(a, b)


def test_keystream_key_avalanche():
    rng = np.random.default_rng(4)
    base = rng.integers(0, 2, size=128, dtype=np.uint8)
    ref = keystream(KeystreamSeed(BitKey(base, STAGE_AMPLIFIED)), 10_000)
    flipped = base.copy()
    flipped[17] ^= 1
    other = keystream(KeystreamSeed(BitKey(flipped, STAGE_AMPLIFIED)), 10_000)
    assert abs(np.mean(ref != other) - 0.5) < 0.02
    assert abs(ref.mean() - 0.5) < 0.02


def test_keystream_lengths_and_validation():
    s = _seed(5)
    assert keystream(s, 0).size == 0
    assert keystream(s, 1).size == 1
    assert keystream(s, 257).size == 257
    with pytest.raises(ParameterError):
        keystream(s, -1)


def test_seed_stage_enforcement():
    rng = np.random.default_rng(6)
    raw = BitKey(rng.integers(0, 2, size=128, dtype=np.uint8), STAGE_QUANTIZED)
    with pytest.raises(ParameterError):
        KeystreamSeed(raw)
    good = BitKey(raw.bits, STAGE_AMPLIFIED)
    with pytest.raises(ParameterError):
        KeystreamSeed(good, nonce=1 << 64)
    with pytest.raises(ParameterError):
        KeystreamSeed(good, nonce=-1)
    with pytest.raises(ParameterError):
        KeystreamSeed(BitKey([], STAGE_AMPLIFIED))


def test_xor_encrypt_examples():
    out = xor_encrypt([1, 0, 1, 0], [0, 1, 1, 0])
    assert list(out) == [1, 1, 0, 0]
    plain = np.array([1, 0, 0, 1, 1, 0], dtype=np.uint8)
    ks = keystream(_seed(7), 6)
    assert np.array_equal(xor_encrypt(xor_encrypt(plain, ks), ks), plain)
    with pytest.raises(ParameterError):
        xor_encrypt(plain, ks[:4])


def test_bit_reader_words_msb_first():
    r = BitReader([1, 0, 1, 1, 1, 0])
    assert r.read_word(3) == 0b101
    assert list(r.read_bits(2)) == [1, 1]
    assert r.consumed == 5
    with pytest.raises(KeystreamExhausted):
        r.read_word(2)


def test_draw_uniform_edge_cases():
    r = BitReader([])
    assert r.draw_uniform(1) == 0
    assert r.consumed == 0
    with pytest.raises(ParameterError):
        r.draw_uniform(0)
    # width-2 draws for m = 3 reject the value 3 and redraw
    r2 = BitReader([1, 1, 0, 1])
    assert r2.draw_uniform(3) == 1
    assert r2.consumed == 4


def test_permutation_basics():
    assert list(keyed_permutation(1, [])) == [0]
    ks = keystream(_seed(8), permutation_allocation_bits(64))
    perm = keyed_permutation(64, ks)
    assert sorted(perm) == list(range(64))
    assert np.array_equal(perm[invert_permutation(perm)], np.arange(64))
    assert np.array_equal(invert_permutation(perm)[perm], np.arange(64))


def test_permutation_uniform_n4():
    s = _seed(9)
    budget = permutation_allocation_bits(4)
    counts = {}
    n_draws = 10_000
    # one long stream, chopped into per-draw slices
    blob = keystream(s, budget * n_draws)
    for i in range(n_draws):
        p = tuple(keyed_permutation(4, blob[i * budget : (i + 1) * budget]))
        counts[p] = counts.get(p, 0) + 1
    assert len(counts) == 24
    for c in counts.values():
        assert abs(c / n_draws - 1 / 24) < 0.02


def test_permutation_exhaustion():
    with pytest.raises(KeystreamExhausted):
        keyed_permutation(64, keystream(_seed(10), 8))
    with pytest.raises(ParameterError):
        keyed_permutation(0, [])


def test_allocation_bounds_suffice():
    # frozen seeds: the 4x budget never runs dry across many draws
    for n in (2, 3, 5, 16, 64):
        budget = permutation_allocation_bits(n)
        for nonce in range(50):
            ks = keystream(_seed(11, nonce=nonce), budget)
            keyed_permutation(n, ks)
    budget = subset_allocation_bits(48, 4)
    for nonce in range(200):
        keyed_subset(np.arange(48), 4, keystream(_seed(12, nonce=nonce), budget))


def test_subset_selection():
    pool = np.arange(100, 148)
    ks = keystream(_seed(13), subset_allocation_bits(48, 6))
    sub = keyed_subset(pool, 6, ks)
    assert sub.size == 6
    assert len(set(sub.tolist())) == 6
    assert set(sub.tolist()) <= set(pool.tolist())
    assert keyed_subset(pool, 0, []).size == 0
    full = keyed_subset(np.arange(5), 5, keystream(_seed(14), 200))
    assert sorted(full) == list(range(5))
    with pytest.raises(ParameterError):
        keyed_subset(pool, 49, ks)


def test_allocation_validation():
    with pytest.raises(ParameterError):
        permutation_allocation_bits(0)
    with pytest.raises(ParameterError):
        subset_allocation_bits(4, 5)
    assert permutation_allocation_bits(1) == 0
    assert subset_allocation_bits(4, 0) == 0
