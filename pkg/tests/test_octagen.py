import random
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from hyperoct.octagen import (
    OctaSpec,
    ek_matrix,
    enumerate_specs,
    expand,
    g_lattice,
    octahedron,
    verify_symcor,
    verify_zkernel,
)
from hyperoct.subsets import FormalSum, enumerate_subsets
from hyperoct.sympoly import elem_sym, monomial_symmetric, phi, power_sum
from hyperoct.zlattice import is_sublattice, left_kernel

from oracles import kernel_matches

OCTA_TERMS = {
    (1, 2, 3): 1, (1, 4, 5): 1, (2, 5, 6): 1, (3, 4, 6): 1,
    (1, 2, 5): -1, (1, 3, 4): -1, (2, 3, 6): -1, (4, 5, 6): -1,
}


def test_expand_octahedron():
    assert expand(octahedron()) == FormalSum(6, 3, OCTA_TERMS)


def test_expand_small():
    assert expand(OctaSpec(3, 2, (1, 2), ())).terms == {(1, 2): 1}
    assert expand(OctaSpec(3, 2, (3,), ((1, 2),))).terms == {(1, 3): 1, (2, 3): -1}


@pytest.mark.parametrize("bad", [
    dict(n=4, m=2, base=(1,), pairs=((1, 2),)),
    dict(n=4, m=2, base=(1, 2), pairs=((3, 4),)),
    dict(n=3, m=2, base=(1,), pairs=((2, 5),)),
])
def test_spec_validation(bad):
    with pytest.raises(ValueError):
        OctaSpec(**bad)


def test_enumerate_specs_examples():
    specs = enumerate_specs(3, 2, 1)
    assert len(specs) == 3
    assert sorted(s.base for s in specs) == [(1,), (2,), (3,)]
    assert enumerate_specs(3, 2, 2) == []
    for m in range(5):
        assert enumerate_specs(m, m, 0) == [OctaSpec(m, m, tuple(range(1, m + 1)), ())]


def _count_matchings(t):
    out = 1
    for i in range(t):
        out *= 2 * (t - i) - 1
    return out


@pytest.mark.parametrize("n,m,j", [(n, m, j) for n in range(1, 8) for m in range(n + 1) for j in range(m + 1)])
def test_enumerate_specs_count_and_canonical(n, m, j):
    specs = enumerate_specs(n, m, j)
    expect = comb(n, m - j) * comb(n - m + j, 2 * j) * _count_matchings(j) if m + j <= n else 0
    assert len(specs) == expect == len(set(specs))
    assert all(s.is_canonical and s.j == j for s in specs)


def test_g_lattice_examples():
    for n, m in [(4, 2), (5, 3), (3, 3)]:
        N = comb(n, m)
        assert g_lattice(n, m, 0).rank == N
        assert g_lattice(n, m, m + 1).rank == 0
    G2 = g_lattice(4, 2, 2)
    assert G2.rank == comb(4, 2) - comb(4, 1) == 2
    assert G2 == left_kernel(ek_matrix(4, 2, 1))


def test_verify_zkernel_examples():
    r = verify_zkernel(6, 3, 2)
    assert r.equal and r.kernel_rank == 5
    assert kernel_matches(r.kernel, ek_matrix(6, 3, 2))
    for m in range(4):
        for k in range(m + 1):
            r = verify_zkernel(m + k, m, k)
            assert r.equal and r.kernel_rank == 0
    r = verify_zkernel(3, 2, 0)
    assert r.equal and r.kernel_rank == 2
    assert all(sum(v) == 0 for v in r.kernel.basis)
    with pytest.raises(ValueError):
        verify_zkernel(3, 2, 3)


def test_report_json_keys():
    d = verify_zkernel(4, 2, 1).to_json()
    assert list(d) == ["n", "m", "k", "kernel_rank", "g_rank", "equal", "elapsed_ms"]


@pytest.mark.parametrize("n", range(1, 8))
def test_membership_and_witness(n):
    for m in range(n + 1):
        for j in range(1, m + 1):
            for spec in enumerate_specs(n, m, j):
                lam = expand(spec)
                e_j = phi(lam, elem_sym(tuple(range(1, m + 1)), j), check=False)
                witness = tuple((c0, 1) for c0, _ in spec.pairs)
                assert abs(e_j.coeff(witness)) == 1
                p = phi(lam, elem_sym(tuple(range(1, m + 1)), j - 1), check=False)
                assert not p


specs_st = st.integers(2, 9).flatmap(lambda n: st.integers(1, n).flatmap(
    lambda m: st.integers(0, min(m, n - m)).flatmap(lambda j: st.builds(
        lambda perm: OctaSpec(n, m, tuple(perm[: m - j]), tuple(
            (perm[m - j + 2 * i], perm[m - j + 2 * i + 1]) for i in range(j))),
        st.permutations(list(range(1, n + 1)))))))


@given(specs_st, st.data())
@settings(max_examples=200)
def test_sign_normalization(spec, data):
    if not spec.pairs:
        return
    i = data.draw(st.integers(0, spec.j - 1))
    swapped = list(spec.pairs)
    swapped[i] = swapped[i][::-1]
    assert expand(OctaSpec(spec.n, spec.m, spec.base, tuple(swapped))) == -expand(spec)
    shuffled = list(spec.pairs)
    data.draw(st.randoms(use_true_random=False)).shuffle(shuffled)
    assert expand(OctaSpec(spec.n, spec.m, spec.base, tuple(shuffled))) == expand(spec)
    sign, canon = spec.normalized()
    assert canon.is_canonical and expand(spec) == expand(canon).scale(sign)


def splitting_holds(spec):
    *rest, (c0, c1) = spec.pairs
    a = OctaSpec(spec.n, spec.m, spec.base + (c0,), tuple(rest))
    b = OctaSpec(spec.n, spec.m, spec.base + (c1,), tuple(rest))
    return expand(spec) == expand(a) - expand(b)


@given(specs_st)
def test_splitting_identity(spec):
    if spec.pairs:
        assert splitting_holds(spec)


@pytest.mark.parametrize("n,m", [(n, m) for n in range(1, 8) for m in range(n + 1)])
def test_nesting(n, m):
    for j in range(m + 1):
        assert is_sublattice(g_lattice(n, m, j + 1), g_lattice(n, m, j))


@pytest.mark.parametrize("f,d", [
    (power_sum(3, 3), 1),
    (monomial_symmetric(3, (2, 2)), 2),
    (elem_sym((1, 2, 3), 1) * elem_sym((1, 2, 3), 2), 3),
])
@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_symcor(f, d, n):
    r = verify_symcor(f, n, 3)
    assert r.k == d and r.equal
