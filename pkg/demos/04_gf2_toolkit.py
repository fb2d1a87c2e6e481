"""The GF(2) primitives underneath the codecs: rank, inverses, row solving."""

import numpy as np

from uace.gf2 import (BitMatrix, BitRow, mat_mul, random_full_rank, rank,
                      right_inverse, row_mul, solve_row)

rng = np.random.default_rng(0)

g = random_full_rank(3, 5, rng)
print("a random full-row-rank 3x5 matrix over GF(2):")
for row in g.to_lists():
    print("   ", row)
print(f"rank = {rank(g)}")

h = right_inverse(g)
print("\nits cached right inverse (5x3) satisfies g @ h == I:")
print(f"   g @ h == I3 -> {mat_mul(g, h) == BitMatrix.identity(3)}")

x = BitRow.from_bits([1, 0, 1])
t = row_mul(x, g)
print(f"\nrow equation: x @ g = {t} has the unique solution x = {solve_row(g, t, h)}")

bad = BitRow(5, t.value ^ 1)
print(f"perturbing the target to {bad} leaves the row space: "
      f"solve returns {solve_row(g, bad, h)}")

print("\nthe decoders solve exactly this kind of equation to rebuild the")
print("info bits of an erased section from any parity block that covers it.")
