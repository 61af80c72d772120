"""Code-offset reconciliation, block by block.

Alice publishes k_a XOR c for a random codeword c. Bob, whose string
differs in a few places, decodes k_b XOR s back to c and repairs his copy.
The sketch is public: anyone learns at most the code redundancy, which the
amplification step later subtracts from the entropy budget.
"""
import numpy as np

from physec.bits import BitKey
from physec.blockcode import hamming74, repetition41
from physec.distill import recover, sketch, syndrome_bits_leaked
from physec.errors import ReconcileFailure

rng = np.random.default_rng(6)
code = hamming74()

k_a = BitKey(rng.integers(0, 2, size=28, dtype=np.uint8))
print(f"Alice's quantized key   {k_a.to01()}  (4 blocks of 7)")

sk = sketch(k_a, code, rng_seed=7)
print(f"public sketch           {''.join(str(b) for b in sk.s)}")
print(f"leakage budget          {syndrome_bits_leaked(code, sk.n_blocks)} bits "
      f"({code.n_code - code.k_code} per block)")

noisy = k_a.bits.copy()
flip_at = [3, 9, 22]  # at most one flip per 7-bit block
noisy[flip_at] ^= 1
k_b = BitKey(noisy)
print(f"Bob's noisy key         {k_b.to01()}  (flips at {flip_at})")

k_fixed = recover(k_b, sk, code)
print(f"after reconciliation    {k_fixed.to01()}")
print(f"matches Alice exactly:  {np.array_equal(k_fixed.bits, k_a.bits)}")

print()
print("=== what the correction radius means ===")
two_flips = k_a.bits.copy()
two_flips[[0, 5]] ^= 1  # two errors inside one block
wrong = recover(BitKey(two_flips), sk, code)
print("hamming74 never refuses (perfect code), but two errors in a block")
print(f"silently land on the wrong key: match = "
      f"{np.array_equal(wrong.bits, k_a.bits)}")

rep = repetition41()
k_rep = BitKey(rng.integers(0, 2, size=8, dtype=np.uint8))
sk_rep = sketch(k_rep, rep, rng_seed=8)
bad = k_rep.bits.copy()
bad[[0, 2]] ^= 1
try:
    recover(BitKey(bad), sk_rep, rep)
except ReconcileFailure as exc:
    print(f"rep41 fails closed instead: ReconcileFailure({exc})")
print("pick the code to match the disagreement rate the quantizer leaves")
