"""Walk through linked-loop encoding and the circular parity structure.

Builds the default 128-bit code (16 sections of 16 bits, memory depth 2),
encodes one payload, and verifies by hand that each section's parity is the
GF(2) combination of the two preceding info blocks -- including the wrap
of sections 0 and 1 onto the tail of the codeword.
"""

import numpy as np

from uace import llc_new, llc_encode, llc_parity, partition_payload, sample_payloads
from uace.gf2 import row_mul

spec = llc_new(L=16, J=16, m=8, M=2, seed=7)
print(f"code: L={spec.L} sections x J={spec.J} bits, m={spec.m} info bits each")
print(f"payload length B = {spec.B}, memory depth M = {spec.M}\n")

rng = np.random.default_rng(1)
payload = sample_payloads(1, spec.B, rng)[0]
print(f"payload: {payload.value:032x}")

chunks = partition_payload(spec, payload)
codeword = llc_encode(spec, payload)

print("\nsection   info     parity   parity rebuilt from the two predecessors")
for l, sym in enumerate(codeword.sections):
    s = str(sym)
    rebuilt = (row_mul(chunks[(l - 1) % 16], spec.G[0])
               ^ row_mul(chunks[(l - 2) % 16], spec.G[1]))
    mark = "ok" if rebuilt.value == sym.value & 0xFF else "MISMATCH"
    print(f"  {l:2d}     {s[:8]} {s[8:]}   "
          f"w({(l-1) % 16:2d})G1 + w({(l-2) % 16:2d})G2 = {rebuilt}  {mark}")

print("\nsections 0 and 1 depend on sections 14 and 15: the loop is closed,")
print("so a decoder can check the first sections once it has seen the last.")
