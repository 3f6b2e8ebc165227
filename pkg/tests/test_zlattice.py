import random
import threading
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hyperoct.octagen import ek_matrix
from hyperoct.zlattice import (
    Cancelled,
    HNFBuilder,
    Lattice,
    contains,
    hnf,
    is_sublattice,
    lattice_from_rows,
    lattices_equal,
    left_kernel,
    left_kernel_rational,
    matmul_vec,
    rank,
    xgcd,
)

from oracles import kernel_matches, rational_nullity_left, spans_equal


def is_canonical(B):
    pivots = []
    for r in B:
        nz = [j for j, x in enumerate(r) if x]
        if not nz:
            return False
        pivots.append(nz[0])
    if pivots != sorted(set(pivots)):
        return False
    for i, (r, p) in enumerate(zip(B, pivots)):
        if r[p] <= 0:
            return False
        for above in B[:i]:
            if not 0 <= above[p] < r[p]:
                return False
    return True


def test_hnf_examples():
    assert hnf([[3, 0], [0, 0]]) == [[3, 0]]
    assert hnf([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    H = hnf([[2, 4], [1, 3]])
    assert H == [[1, 1], [0, 2]]
    # oracle: row spans contain each other and |det| = 2
    assert spans_equal([[2, 4], [1, 3]], H)
    assert abs(H[0][0] * H[1][1] - H[0][1] * H[1][0]) == 2


def test_xgcd():
    for a in range(-12, 13):
        for b in range(-12, 13):
            g, s, t = xgcd(a, b)
            assert g >= 0 and s * a + t * b == g
            if a or b:
                assert a % g == 0 and b % g == 0


small_mats = st.integers(1, 5).flatmap(lambda r: st.integers(1, 5).flatmap(lambda c: st.lists(
    st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)))


@given(small_mats, st.randoms(use_true_random=False))
@settings(max_examples=150, deadline=None)
def test_hnf_canonicity(M, rnd):
    H = hnf(M)
    assert is_canonical(H)
    # same row span presented differently: shuffle, add random multiples, append combinations
    M2 = [list(r) for r in M]
    rnd.shuffle(M2)
    for _ in range(4):
        i, j = rnd.randrange(len(M2)), rnd.randrange(len(M2))
        if i != j:
            q = rnd.randint(-3, 3)
            M2[i] = [a + q * b for a, b in zip(M2[i], M2[j])]
    coeffs = [rnd.randint(-2, 2) for _ in M]
    M2.append([sum(a * r[c] for a, r in zip(coeffs, M)) for c in range(len(M[0]))])
    assert hnf(M2) == H


@given(small_mats)
@settings(max_examples=150, deadline=None)
def test_kernel_correctness(M):
    L = left_kernel(M)
    for v in L.basis:
        assert not any(matmul_vec(v, M))
    assert L.rank + (len(M) - rational_nullity_left(M, len(M))) == len(M)
    assert is_canonical([list(r) for r in L.basis]) or L.rank == 0


@given(small_mats, st.lists(st.integers(-4, 4), min_size=5, max_size=5), st.integers(2, 5))
@settings(max_examples=150, deadline=None)
def test_saturation(M, coeffs, c):
    L = left_kernel(M)
    if not L.rank:
        return
    v = [0] * len(M)
    for a, row in zip(coeffs, L.basis):
        v = [x + a * y for x, y in zip(v, row)]
    # c*v in L and v itself a kernel vector: L must contain v
    assert contains(L, [c * x for x in v])
    assert contains(L, v)


def test_left_kernel_examples():
    assert left_kernel([[1], [1]]).basis == ((1, -1),)
    assert left_kernel([[1, 0], [0, 1]]).rank == 0
    L = left_kernel(ek_matrix(4, 2, 1))
    assert L.rank == 2
    assert kernel_matches(L, ek_matrix(4, 2, 1))


def test_left_kernel_rational_examples():
    assert left_kernel_rational([[Fraction(1, 2)], [Fraction(1, 2)]]).basis == ((1, -1),)
    assert left_kernel_rational([[Fraction(1, 3), 0], [0, Fraction(1, 5)]]).rank == 0
    rnd = random.Random(5)
    for _ in range(20):
        M = [[Fraction(rnd.randint(-4, 4), rnd.randint(1, 4)) for _ in range(3)] for _ in range(4)]
        padded = [r + [0] for r in M]
        assert left_kernel_rational(M) == left_kernel_rational(padded)


def test_lattice_relations():
    a = lattice_from_rows([(2, 0), (0, 2)], 2)
    b = lattice_from_rows([(2, 2), (0, 2)], 2)
    assert lattices_equal(a, b) and a.basis == ((2, 0), (0, 2))
    assert is_sublattice(lattice_from_rows([(2, 0)], 2), lattice_from_rows([(1, 0)], 2))
    assert not is_sublattice(lattice_from_rows([(1, 0)], 2), lattice_from_rows([(2, 0)], 2))
    assert contains(lattice_from_rows([(1, -1)], 2), (3, -3))
    assert not contains(lattice_from_rows([(2, -2)], 2), (3, -3))
    assert rank(a) == 2
    with pytest.raises(ValueError):
        is_sublattice(a, lattice_from_rows([(1, 0, 0)], 3))
    with pytest.raises(ValueError):
        lattice_from_rows([(1, 0, 0)], 2)


def test_lattice_json_roundtrip():
    L = left_kernel(ek_matrix(5, 2, 1))
    assert Lattice.from_json(L.to_json()) == L


def test_big_entries_exact():
    big = 10 ** 40
    H = hnf([[big, 1], [big + 1, 1]])
    assert H == [[1, 0], [0, 1]]
    assert hnf([[2 * big, 0], [0, 3 * big]]) == [[2 * big, 0], [0, 3 * big]]


def test_cooperative_cancellation():
    ev = threading.Event()
    ev.set()
    b = HNFBuilder(3, cancel=ev)
    with pytest.raises(Cancelled):
        b.add([1, 2, 3])
    calls = []

    def stop():
        calls.append(1)
        return len(calls) > 2

    with pytest.raises(Cancelled):
        hnf([[1, 0], [0, 1], [1, 1], [2, 3]], cancel=stop)
