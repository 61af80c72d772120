"""Gray-labeled constellation mapping for the OFDM subcarriers.

Both mappings have exactly unit average symbol energy so per-subcarrier
SNR statements stay calibration-free. Labels are Gray: nearest neighbors
differ in one bit, per axis for 16QAM and around the circle for QPSK.
"""
from __future__ import annotations

import numpy as np

from .errors import ParameterError

QPSK = "qpsk"
QAM16 = "16qam"

_QPSK_SCALE = 1.0 / np.sqrt(2.0)
_QAM16_SCALE = 1.0 / np.sqrt(10.0)
# per-axis Gray labeling for 16QAM: 2-bit word -> amplitude level
_QAM16_LEVELS = {0b00: -3.0, 0b01: -1.0, 0b11: 1.0, 0b10: 3.0}


def bits_per_symbol(mapping: str) -> int:
    if mapping == QPSK:
        return 2
    if mapping == QAM16:
        return 4
    raise ParameterError(f"unknown mapping {mapping!r}")


def constellation(mapping: str) -> np.ndarray:
    """Points indexed by the big-endian integer value of the bit label."""
    if mapping == QPSK:
        pts = np.empty(4, dtype=complex)
        for b0 in (0, 1):
            for b1 in (0, 1):
                pts[(b0 << 1) | b1] = ((1 - 2 * b0) + 1j * (1 - 2 * b1)) * _QPSK_SCALE
        return pts
    if mapping == QAM16:
        pts = np.empty(16, dtype=complex)
        for word in range(16):
            i_lvl = _QAM16_LEVELS[word >> 2]
            q_lvl = _QAM16_LEVELS[word & 0b11]
            pts[word] = (i_lvl + 1j * q_lvl) * _QAM16_SCALE
        return pts
    raise ParameterError(f"unknown mapping {mapping!r}")


def map_symbols(bits, mapping: str) -> np.ndarray:
    """Bit vector -> complex symbols, bits grouped MSB-first per symbol."""
    arr = np.asarray(bits, dtype=np.uint8)
    bps = bits_per_symbol(mapping)
    if arr.ndim != 1 or arr.size % bps != 0:
        raise ParameterError(f"bit count must be a multiple of {bps}")
    groups = arr.reshape(-1, bps)
    idx = groups @ (1 << np.arange(bps - 1, -1, -1))
    return constellation(mapping)[idx]


def demap_symbols(symbols, mapping: str) -> np.ndarray:
    """Hard-decision demapping to the nearest constellation point."""
    sym = np.asarray(symbols, dtype=complex)
    if mapping == QPSK:
        b0 = (sym.real < 0).astype(np.uint8)
        b1 = (sym.imag < 0).astype(np.uint8)
        return np.stack([b0, b1], axis=1).ravel()
    if mapping == QAM16:
        bits = np.empty((sym.size, 4), dtype=np.uint8)
        for col, axis in ((0, sym.real), (2, sym.imag)):
            level = axis / _QAM16_SCALE
            bits[:, col] = level > 0
            bits[:, col + 1] = np.abs(level) < 2
        return bits.ravel()
    raise ParameterError(f"unknown mapping {mapping!r}")


def min_decision_distance(mapping: str) -> float:
    """Smallest distance between two constellation points."""
    pts = constellation(mapping)
    d = np.abs(pts[:, None] - pts[None, :])
    return float(d[d > 0].min())
