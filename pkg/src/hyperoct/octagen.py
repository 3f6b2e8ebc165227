"""Hyperoctahedral m-sums, the lattices G_j they generate, and kernel-vs-G checks."""

import time
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product

from .subsets import FormalSum, enumerate_subsets, make_subset, rank
from .sympoly import elem_sym, evaluation_matrix, is_symmetric, max_distinct_vars
from .zlattice import (
    full_lattice,
    lattice_from_rows,
    lattices_equal,
    left_kernel,
    left_kernel_rational,
    zero_lattice,
)


@dataclass(frozen=True)
class OctaSpec:
    """Base B (size m - j) plus j disjoint ordered pairs (c0, c1), inside {1..n}."""

    n: int
    m: int
    base: tuple
    pairs: tuple

    def __post_init__(self):
        base = tuple(sorted(self.base))
        pairs = tuple((int(a), int(b)) for a, b in self.pairs)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "pairs", pairs)
        j = len(pairs)
        if len(base) != self.m - j:
            raise ValueError(f"base has size {len(base)}, expected m - j = {self.m - j}")
        used = list(base) + [c for p in pairs for c in p]
        if len(set(used)) != len(used):
            raise ValueError(f"indices of spec are not distinct: {used}")
        if any(not 1 <= c <= self.n for c in used):
            raise ValueError(f"spec indices must lie in 1..{self.n}: {used}")

    @property
    def j(self):
        return len(self.pairs)

    def used(self):
        return set(self.base) | {c for p in self.pairs for c in p}

    @property
    def is_canonical(self):
        return all(a < b for a, b in self.pairs) and list(self.pairs) == sorted(self.pairs)

    def normalized(self):
        """(sign, canonical spec) with expand(self) == sign * expand(canonical)."""
        sign = 1
        pairs = []
        for a, b in self.pairs:
            if a > b:
                a, b = b, a
                sign = -sign
            pairs.append((a, b))
        return sign, OctaSpec(self.n, self.m, self.base, tuple(sorted(pairs)))

    def with_ambient(self, n):
        return OctaSpec(n, self.m, self.base, self.pairs)

    def to_json(self):
        return {"base": list(self.base), "pairs": [list(p) for p in self.pairs]}

    @classmethod
    def from_json(cls, obj, n, m):
        return cls(n, m, tuple(obj["base"]), tuple(tuple(p) for p in obj["pairs"]))


def expand(spec):
    terms = {}
    for eps in product((0, 1), repeat=spec.j):
        A = tuple(sorted(spec.base + tuple(p[e] for p, e in zip(spec.pairs, eps))))
        terms[A] = terms.get(A, 0) + (-1) ** sum(eps)
    return FormalSum._raw(spec.n, spec.m, {A: c for A, c in terms.items() if c})


def _matchings(elems):
    """Perfect matchings of a sorted tuple, pairs (a, b) with a < b, listed in sorted pair order."""
    if not elems:
        yield ()
        return
    a = elems[0]
    for i in range(1, len(elems)):
        b = elems[i]
        rest = elems[1:i] + elems[i + 1:]
        for m in _matchings(rest):
            yield ((a, b),) + m


def enumerate_specs(n, m, j):
    """All canonical specs with j pairs; deterministic order."""
    if j < 0 or j > m or m + j > n:
        return []
    out = []
    for B in enumerate_subsets(n, m - j):
        rest = [i for i in range(1, n + 1) if i not in B]
        for C in combinations(rest, 2 * j):
            for pairs in _matchings(C):
                out.append(OctaSpec(n, m, B, pairs))
    return out


@lru_cache(maxsize=256)
def g_lattice(n, m, j):
    """G_j inside Z^C(n,m), in colex coordinates."""
    N = len(enumerate_subsets(n, m))
    if j == 0:
        return full_lattice(N)
    if j > m:
        return zero_lattice(N)
    vecs = ({rank(A): c for A, c in expand(s).items()} for s in enumerate_specs(n, m, j))
    return lattice_from_rows(vecs, N)


def ek_matrix(n, m, k):
    """Coefficient matrix of lam -> phi(lam, e_k): rows m-subsets, columns k-subsets, both colex."""
    cols = {S: i for i, S in enumerate(enumerate_subsets(n, k))}
    mat = []
    for A in enumerate_subsets(n, m):
        row = [0] * len(cols)
        for mono in elem_sym(A, k).terms:
            row[cols[tuple(i for i, _ in mono)]] = 1
        mat.append(row)
    return mat


@dataclass
class KernelReport:
    n: int
    m: int
    k: int
    kernel_rank: int
    g_rank: int
    equal: bool
    elapsed_ms: int
    context: dict = field(default_factory=dict)
    kernel: object = field(default=None, repr=False, compare=False)
    g: object = field(default=None, repr=False, compare=False)

    def to_json(self):
        out = {
            "n": self.n,
            "m": self.m,
            "k": self.k,
            "kernel_rank": self.kernel_rank,
            "g_rank": self.g_rank,
            "equal": self.equal,
            "elapsed_ms": self.elapsed_ms,
        }
        out.update(self.context)
        return out


def verify_zkernel(n, m, k):
    if not 0 <= k <= m <= n:
        raise ValueError(f"need 0 <= k <= m <= n, got n={n}, m={m}, k={k}")
    t0 = time.perf_counter()
    ker = left_kernel(ek_matrix(n, m, k), nrows=len(enumerate_subsets(n, m)))
    g = g_lattice(n, m, k + 1)
    ms = int((time.perf_counter() - t0) * 1000)
    return KernelReport(n, m, k, ker.rank, g.rank, lattices_equal(ker, g), ms, kernel=ker, g=g)


def verify_symcor(f, n, m):
    """Direct kernel of lam -> phi(lam, f) against G_{d+1}, d the max number of distinct variables."""
    if not is_symmetric(f, m):
        raise ValueError("f must be symmetric in x_1..x_m")
    t0 = time.perf_counter()
    d = max_distinct_vars(f)
    mat, _ = evaluation_matrix(f, n, m)
    ker = left_kernel_rational(mat, nrows=len(mat))
    g = g_lattice(n, m, d + 1)
    ms = int((time.perf_counter() - t0) * 1000)
    return KernelReport(n, m, d, ker.rank, g.rank, lattices_equal(ker, g), ms, kernel=ker, g=g)


def octahedron():
    """The 3-hyperoctahedral 3-sum drawn as the two-coloured octahedron on vertices 1..6."""
    return OctaSpec(6, 3, (), ((1, 6), (2, 4), (3, 5)))


def spec_from_subsets(base, pairs, n, m):
    return OctaSpec(n, m, make_subset(base, n), tuple(tuple(p) for p in pairs))
