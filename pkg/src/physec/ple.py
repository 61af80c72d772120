"""Keyed physical-layer encryption stages and their composition.

Six independently toggleable schemes share one hash-counter keystream:

* xor: bit-level stream cipher on the payload.
* phase: per-symbol rotation by keyed angles (2 pi v / 2^q), optionally with
  a keyed bounded perturbation the receiver subtracts exactly.
* partial_interleave: swap Re/Im on data carriers whose phase exceeds a
  public threshold.
* dummy: fill keyed decoy carriers with keyed constellation symbols.
* scramble_freq / scramble_time: keyed index permutations of the subcarrier
  grid and of the post-IFFT sample block.

Each enabled scheme owns a fixed region of keystream blocks per frame, so
budgets are deterministic, frames never reuse keystream, and the receiver
can derive any stage's bits independently of the others.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import modulation
from .errors import KeystreamExhausted, ParameterError
from .keystream import (
    BLOCK_BITS,
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
from .ofdm import (
    DOMAIN_FREQ,
    DOMAIN_TIME,
    OfdmConfig,
    SymbolFrame,
    attach_cp,
    extract_data,
    frame_from_symbols,
    ofdm_demodulate,
    strip_cp,
)

SCHEME_XOR = "xor"
SCHEME_PHASE = "phase"
SCHEME_INTERLEAVE = "partial_interleave"
SCHEME_DUMMY = "dummy"
SCHEME_SCRAMBLE_FREQ = "scramble_freq"
SCHEME_SCRAMBLE_TIME = "scramble_time"

SCHEME_ORDER = (
    SCHEME_XOR,
    SCHEME_PHASE,
    SCHEME_INTERLEAVE,
    SCHEME_DUMMY,
    SCHEME_SCRAMBLE_FREQ,
    SCHEME_SCRAMBLE_TIME,
)

# bits consumed per symbol for the keyed phase perturbation (8 radius + 8 angle)
_NOISE_BITS = 16

DEFAULT_INTERLEAVE_THRESHOLD = -math.pi / 2


@dataclass(frozen=True)
class PhaseEncryptConfig:
    """Angle resolution and optional cancellable perturbation.

    bits_per_angle q gives rotations 2 pi v / 2^q. noise_scale bounds |n_k|;
    keep it under half the mapping's minimum decision distance so a noisy
    receiver is not pushed across a decision boundary by design.
    """

    bits_per_angle: int = 2
    noise_enabled: bool = False
    noise_scale: float = 0.0

    def __post_init__(self):
        if not 1 <= self.bits_per_angle <= 16:
            raise ParameterError("bits_per_angle must be in 1..16")
        if self.noise_scale < 0:
            raise ParameterError("noise_scale must be >= 0")
        if self.noise_enabled and self.noise_scale == 0:
            raise ParameterError("enabled noise needs a positive noise_scale")

    def bits_per_symbol(self) -> int:
        return self.bits_per_angle + (_NOISE_BITS if self.noise_enabled else 0)


def _phase_terms(n_symbols: int, ks, cfg: PhaseEncryptConfig):
    """Keyed rotation angles and perturbations for n_symbols symbols.

    Layout per symbol: q angle bits, then (when noise is enabled) 8 radius
    bits and 8 perturbation-angle bits, all big-endian.
    """
    bits = np.asarray(ks, dtype=np.uint8)
    per = cfg.bits_per_symbol()
    need = per * n_symbols
    if bits.size < need:
        raise KeystreamExhausted(f"phase stage needs {need} bits, got {bits.size}")
    words = bits[:need].reshape(n_symbols, per)
    q = cfg.bits_per_angle
    v = words[:, :q] @ (1 << np.arange(q - 1, -1, -1))
    theta = 2.0 * math.pi * v / (1 << q)
    noise = np.zeros(n_symbols, dtype=complex)
    if cfg.noise_enabled:
        byte_weights = 1 << np.arange(7, -1, -1)
        radius = cfg.noise_scale * (words[:, q : q + 8] @ byte_weights) / 256.0
        angle = 2.0 * math.pi * (words[:, q + 8 : q + 16] @ byte_weights) / 256.0
        noise = radius * np.exp(1j * angle)
    return theta, noise


def phase_encrypt(symbols, ks, cfg: PhaseEncryptConfig) -> np.ndarray:
    """Rotate each symbol by its keyed angle and add the keyed perturbation."""
    sym = np.asarray(symbols, dtype=complex)
    theta, noise = _phase_terms(sym.size, ks, cfg)
    return sym * np.exp(1j * theta) + noise


def phase_decrypt(symbols, ks, cfg: PhaseEncryptConfig) -> np.ndarray:
    """Exact inverse: subtract the perturbation, then derotate."""
    sym = np.asarray(symbols, dtype=complex)
    theta, noise = _phase_terms(sym.size, ks, cfg)
    return (sym - noise) * np.exp(-1j * theta)


def _principal_angle(values: np.ndarray) -> np.ndarray:
    ang = np.angle(values)
    ang[ang == -np.pi] = np.pi
    return ang


def _swap_re_im(values: np.ndarray) -> np.ndarray:
    return values.imag + 1j * values.real


def partial_interleave(frame: SymbolFrame, threshold: float) -> SymbolFrame:
    """Swap Re/Im on data carriers whose phase exceeds the threshold.

    Phases are principal values in (-pi, pi], so threshold = pi selects
    nothing and threshold = -pi selects everything. Key-independent by
    design; its protection comes from stacking under the keyed stages.
    """
    frame.require(DOMAIN_FREQ)
    if not -math.pi <= threshold <= math.pi:
        raise ParameterError("threshold must be in [-pi, pi]")
    grid = frame.data.copy()
    idx = np.asarray(frame.cfg.data_carriers, dtype=np.intp)
    values = grid[idx]
    sel = _principal_angle(values) > threshold
    values[sel] = _swap_re_im(values[sel])
    grid[idx] = values
    return SymbolFrame(grid, DOMAIN_FREQ, frame.cfg)


def partial_deinterleave(frame: SymbolFrame, threshold: float) -> SymbolFrame:
    """Undo partial_interleave by re-testing the selection rule.

    A carrier is unswapped iff its candidate pre-swap value (Re/Im swapped
    back) satisfies the selection rule. This reconstructs the transmitter's
    selection exactly when the symbol values occurring at this stage form a
    set closed under Re/Im swap inside the selection region; that holds for
    the unit QPSK/16QAM alphabets, including quarter-turn phase-encrypted
    ones, at the default threshold -pi/2. Outside such alphabets (or over a
    noisy, imperfectly equalized link) selections can be misjudged; this
    stage is only guaranteed on noiseless or perfectly equalized links.
    """
    frame.require(DOMAIN_FREQ)
    if not -math.pi <= threshold <= math.pi:
        raise ParameterError("threshold must be in [-pi, pi]")
    grid = frame.data.copy()
    idx = np.asarray(frame.cfg.data_carriers, dtype=np.intp)
    values = grid[idx]
    candidates = _swap_re_im(values)
    sel = _principal_angle(candidates) > threshold
    values[sel] = candidates[sel]
    grid[idx] = values
    return SymbolFrame(grid, DOMAIN_FREQ, frame.cfg)


def insert_dummy(frame: SymbolFrame, ks) -> SymbolFrame:
    """Fill keyed decoy slots with keyed constellation symbols.

    Decoy values are uniform constellation draws (marginally identical to
    data symbols) and land on a keyed per-symbol choice of
    len(cfg.dummy_carriers) slots from the idle-carrier pool, so an
    observer without the key cannot tell decoys from idle carriers. Data
    carriers are never touched; an empty dummy set is a no-op.
    """
    frame.require(DOMAIN_FREQ)
    cfg = frame.cfg
    count = len(cfg.dummy_carriers)
    if count == 0:
        return frame
    reader = BitReader(ks)
    bps = modulation.bits_per_symbol(cfg.mapping)
    values = modulation.map_symbols(reader.read_bits(count * bps), cfg.mapping)
    slots = keyed_subset(cfg.idle_carriers, count, reader.read_bits(
        subset_allocation_bits(len(cfg.idle_carriers), count)
    ))
    grid = frame.data.copy()
    grid[slots] = values
    return SymbolFrame(grid, DOMAIN_FREQ, frame.cfg)


def scramble_freq(frame: SymbolFrame, perm) -> SymbolFrame:
    """Permute subcarriers: output carrier i holds input carrier perm[i]."""
    frame.require(DOMAIN_FREQ)
    p = _check_perm(perm, frame.cfg.n_fft)
    return SymbolFrame(frame.data[p], DOMAIN_FREQ, frame.cfg)


def unscramble_freq(frame: SymbolFrame, perm) -> SymbolFrame:
    frame.require(DOMAIN_FREQ)
    p = _check_perm(perm, frame.cfg.n_fft)
    return SymbolFrame(frame.data[invert_permutation(p)], DOMAIN_FREQ, frame.cfg)


def scramble_time(frame: SymbolFrame, perm) -> SymbolFrame:
    """Permute the n_fft post-IFFT samples: output i = input perm[i].

    The permutation covers only the IFFT block. Handed a frame that already
    carries a prefix, the core is permuted and the prefix refreshed from the
    permuted tail so it stays a true cyclic extension.
    """
    return _permute_time(frame, perm, inverse=False)


def unscramble_time(frame: SymbolFrame, perm) -> SymbolFrame:
    return _permute_time(frame, perm, inverse=True)


def _permute_time(frame: SymbolFrame, perm, inverse: bool) -> SymbolFrame:
    frame.require(DOMAIN_TIME)
    p = _check_perm(perm, frame.cfg.n_fft)
    if inverse:
        p = invert_permutation(p)
    had_cp = frame.has_cp
    core = strip_cp(frame) if had_cp else frame
    permuted = SymbolFrame(core.data[p], DOMAIN_TIME, frame.cfg)
    return attach_cp(permuted) if had_cp else permuted


def _check_perm(perm, n: int) -> np.ndarray:
    p = np.asarray(perm, dtype=np.intp)
    if p.shape != (n,) or not np.array_equal(np.sort(p), np.arange(n)):
        raise ParameterError(f"not a permutation of 0..{n - 1}")
    return p


def scheme_budget_bits(
    scheme: str, cfg: OfdmConfig, phase_cfg: PhaseEncryptConfig
) -> int:
    """Deterministic keystream bits one scheme is allocated per frame."""
    if scheme == SCHEME_XOR:
        return cfg.payload_bits
    if scheme == SCHEME_PHASE:
        return phase_cfg.bits_per_symbol() * cfg.n_data
    if scheme == SCHEME_INTERLEAVE:
        return 0
    if scheme == SCHEME_DUMMY:
        count = len(cfg.dummy_carriers)
        return count * modulation.bits_per_symbol(cfg.mapping) + (
            subset_allocation_bits(len(cfg.idle_carriers), count)
        )
    if scheme in (SCHEME_SCRAMBLE_FREQ, SCHEME_SCRAMBLE_TIME):
        return permutation_allocation_bits(cfg.n_fft)
    raise ParameterError(f"unknown scheme {scheme!r}")


class PleCodec:
    """Composition of the enabled schemes over one OFDM link.

    Encryption order: xor on bits, constellation mapping, phase, partial
    interleave (data carriers), dummy insertion, frequency scrambling,
    unitary IFFT, time scrambling, cyclic prefix. Decryption inverts the
    chain. frame_index advances the keystream so no two frames share
    keystream positions.
    """

    def __init__(
        self,
        cfg: OfdmConfig,
        schemes,
        seed: KeystreamSeed,
        phase_cfg: PhaseEncryptConfig | None = None,
        interleave_threshold: float = DEFAULT_INTERLEAVE_THRESHOLD,
    ):
        requested = list(schemes)
        unknown = [s for s in requested if s not in SCHEME_ORDER]
        if unknown:
            raise ParameterError(f"unknown schemes {unknown}")
        if len(set(requested)) != len(requested):
            raise ParameterError("duplicate scheme names")
        self.cfg = cfg
        self.schemes = tuple(s for s in SCHEME_ORDER if s in requested)
        self.seed = seed
        self.phase_cfg = phase_cfg or PhaseEncryptConfig()
        if not -math.pi <= interleave_threshold <= math.pi:
            raise ParameterError("interleave threshold must be in [-pi, pi]")
        self.interleave_threshold = float(interleave_threshold)
        if (
            SCHEME_PHASE in self.schemes
            and self.phase_cfg.noise_enabled
            and self.phase_cfg.noise_scale
            >= modulation.min_decision_distance(cfg.mapping) / 2
        ):
            raise ParameterError(
                "phase noise_scale must stay below half the minimum decision "
                f"distance of {cfg.mapping!r}"
            )
        self._budgets = {
            s: scheme_budget_bits(s, cfg, self.phase_cfg) for s in self.schemes
        }
        self._region_offset = {}
        offset = 0
        for s in self.schemes:
            self._region_offset[s] = offset
            offset += -(-self._budgets[s] // BLOCK_BITS)
        self._blocks_per_frame = max(offset, 1)

    def _scheme_bits(self, scheme: str, frame_index: int) -> np.ndarray:
        if frame_index < 0:
            raise ParameterError("frame_index must be >= 0")
        base = frame_index * self._blocks_per_frame + self._region_offset[scheme]
        return keystream(self.seed, self._budgets[scheme], block_offset=base)

    def key_to_data_ratio(self) -> float:
        """Keystream bits budgeted per frame over plaintext bits per frame."""
        return sum(self._budgets.values()) / self.cfg.payload_bits

    def encrypt(self, plain_bits, frame_index: int = 0) -> SymbolFrame:
        bits = np.asarray(plain_bits, dtype=np.uint8)
        if bits.shape != (self.cfg.payload_bits,):
            raise ParameterError(
                f"payload must be exactly {self.cfg.payload_bits} bits"
            )
        if SCHEME_XOR in self.schemes:
            bits = xor_encrypt(bits, self._scheme_bits(SCHEME_XOR, frame_index))
        symbols = modulation.map_symbols(bits, self.cfg.mapping)
        if SCHEME_PHASE in self.schemes:
            symbols = phase_encrypt(
                symbols, self._scheme_bits(SCHEME_PHASE, frame_index), self.phase_cfg
            )
        frame = frame_from_symbols(symbols, self.cfg)
        if SCHEME_INTERLEAVE in self.schemes:
            frame = partial_interleave(frame, self.interleave_threshold)
        if SCHEME_DUMMY in self.schemes:
            frame = insert_dummy(frame, self._scheme_bits(SCHEME_DUMMY, frame_index))
        if SCHEME_SCRAMBLE_FREQ in self.schemes:
            frame = scramble_freq(frame, self._perm(SCHEME_SCRAMBLE_FREQ, frame_index))
        core = SymbolFrame(
            np.fft.ifft(frame.data, norm="ortho"), DOMAIN_TIME, self.cfg
        )
        if SCHEME_SCRAMBLE_TIME in self.schemes:
            core = scramble_time(core, self._perm(SCHEME_SCRAMBLE_TIME, frame_index))
        return attach_cp(core)

    def decrypt(
        self, frame: SymbolFrame, frame_index: int = 0, channel_gain: complex = 1.0
    ) -> np.ndarray:
        frame.require(DOMAIN_TIME)
        core = strip_cp(frame) if frame.has_cp else frame
        if SCHEME_SCRAMBLE_TIME in self.schemes:
            core = unscramble_time(core, self._perm(SCHEME_SCRAMBLE_TIME, frame_index))
        grid = ofdm_demodulate(core, channel_gain=channel_gain)
        if SCHEME_SCRAMBLE_FREQ in self.schemes:
            grid = unscramble_freq(grid, self._perm(SCHEME_SCRAMBLE_FREQ, frame_index))
        if SCHEME_INTERLEAVE in self.schemes:
            grid = partial_deinterleave(grid, self.interleave_threshold)
        symbols = extract_data(grid)
        if SCHEME_PHASE in self.schemes:
            symbols = phase_decrypt(
                symbols, self._scheme_bits(SCHEME_PHASE, frame_index), self.phase_cfg
            )
        bits = modulation.demap_symbols(symbols, self.cfg.mapping)
        if SCHEME_XOR in self.schemes:
            bits = xor_encrypt(bits, self._scheme_bits(SCHEME_XOR, frame_index))
        return bits

    def _perm(self, scheme: str, frame_index: int) -> np.ndarray:
        return keyed_permutation(
            self.cfg.n_fft, self._scheme_bits(scheme, frame_index)
        )


def encrypt_frame(
    plain_bits,
    schemes,
    seed: KeystreamSeed,
    cfg: OfdmConfig,
    frame_index: int = 0,
    phase_cfg: PhaseEncryptConfig | None = None,
    interleave_threshold: float = DEFAULT_INTERLEAVE_THRESHOLD,
) -> SymbolFrame:
    """One-shot frame encryption; see PleCodec for the stage order."""
    codec = PleCodec(cfg, schemes, seed, phase_cfg, interleave_threshold)
    return codec.encrypt(plain_bits, frame_index)


def decrypt_frame(
    frame: SymbolFrame,
    schemes,
    seed: KeystreamSeed,
    cfg: OfdmConfig,
    frame_index: int = 0,
    phase_cfg: PhaseEncryptConfig | None = None,
    interleave_threshold: float = DEFAULT_INTERLEAVE_THRESHOLD,
    channel_gain: complex = 1.0,
) -> np.ndarray:
    """One-shot inverse of encrypt_frame."""
    codec = PleCodec(cfg, schemes, seed, phase_cfg, interleave_threshold)
    return codec.decrypt(frame, frame_index, channel_gain=channel_gain)


def key_to_data_ratio(
    schemes,
    cfg: OfdmConfig,
    phase_cfg: PhaseEncryptConfig | None = None,
) -> float:
    """Keystream bits budgeted per plaintext bit for a scheme stack."""
    unknown = [s for s in schemes if s not in SCHEME_ORDER]
    if unknown:
        raise ParameterError(f"unknown schemes {unknown}")
    pc = phase_cfg or PhaseEncryptConfig()
    total = sum(scheme_budget_bits(s, cfg, pc) for s in set(schemes))
    return total / cfg.payload_bits
