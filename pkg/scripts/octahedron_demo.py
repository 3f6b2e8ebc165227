"""Expand the octahedral 3-sum, check it kills e_2, and rewrite a random kernel element as a certificate."""

import random

from hyperoct.octagen import ek_matrix, expand, octahedron
from hyperoct.rewriter import decompose, verify
from hyperoct.subsets import FormalSum
from hyperoct.sympoly import elem_sym, phi
from hyperoct.zlattice import left_kernel

spec = octahedron()
lam = expand(spec)
print("octahedron:", spec)
for A, c in lam.items():
    print(f"  {c:+d} {set(A)}")
print("phi(lam, e_2) =", phi(lam, elem_sym((1, 2, 3), 2)))

n, m, k = 7, 3, 2
ker = left_kernel(ek_matrix(n, m, k))
rnd = random.Random(0)
vec = [0] * ker.ambient
for row in ker.basis:
    c = rnd.randint(-9, 9)
    vec = [x + c * y for x, y in zip(vec, row)]
rel = FormalSum.from_vector(vec, n, m)
cert = decompose(rel, k)
print(f"\nrandom relation among e_{k}(A), |A|={m}, n={n}: {len(rel.terms)} terms")
print(f"certificate: {len(cert.entries)} specs with {k + 1} pairs each, verified={verify(rel, cert)}")
for c, s in cert.entries[:5]:
    print(f"  {c:+d} base={s.base} pairs={s.pairs}")
if len(cert.entries) > 5:
    print("  ...")
