"""Vanishing order of the modified diagonals in each built-in model, and the relation lattices they give."""

from math import comb

from hyperoct import kunneth as K

for name in K.BUILTIN_MODELS:
    S = K.builtin_setup(name)
    zero = [l for l in range(1, 5) if not K.modified_diagonal(S, l)]
    print(f"{name}: dim {S.algebra.dim}, modified diagonal vanishes for l in {zero}")
    for m in (1, 2, 3):
        D = K.diagonal(S.algebra, m)
        k = K.vanishing_order(D, S)
        cells = []
        for n in range(m, m + 4):
            r = K.verify_mainthm(D, S, n)
            cells.append(f"n={n}:{r.kernel_rank}/{comb(n, m)}{'' if r.equal else '!'}")
        print(f"  m={m} k={k} relation ranks " + " ".join(cells))
