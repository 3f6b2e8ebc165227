"""Exact integer lattices: row-style Hermite normal form, left kernels, sublattice tests.

Canonical form: nonzero rows, strictly increasing pivot columns, positive
pivots, and every entry above a pivot reduced into [0, pivot).  Two lattices
are equal iff their canonical bases are identical.

The builder keeps its basis canonical after every insertion, so incoming
vectors only ever need one left-to-right reduction pass.  Rows are sparse
dicts ``{col: value}``.
"""

import heapq
from dataclasses import dataclass
from fractions import Fraction
from math import lcm


class Cancelled(Exception):
    pass


def xgcd(a, b):
    """(g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def _axpy(row, q, other):
    """row -= q * other, in place."""
    for c, v in other.items():
        w = row.get(c, 0) - q * v
        if w:
            row[c] = w
        else:
            row.pop(c, None)


class HNFBuilder:
    """Incrementally maintained canonical HNF basis of a sublattice of Z^N."""

    def __init__(self, ncols, cancel=None):
        self.ncols = ncols
        self.rows = {}  # pivot column -> row dict
        self._cancel = cancel

    def _check_cancel(self):
        c = self._cancel
        if c is not None and (c.is_set() if hasattr(c, "is_set") else c()):
            raise Cancelled("HNF computation cancelled")

    def _reduce_tail(self, row, start):
        """Reduce row's entries at pivot columns >= start into [0, pivot)."""
        cols = [c for c in row if c >= start and c in self.rows]
        heapq.heapify(cols)
        seen = set()
        while cols:
            c = heapq.heappop(cols)
            if c in seen:
                continue
            seen.add(c)
            v = row.get(c, 0)
            if not v:
                continue
            p = self.rows[c]
            q = v // p[c]
            if q:
                for cc in p:
                    if cc > c and cc in self.rows and cc not in row:
                        heapq.heappush(cols, cc)
                _axpy(row, q, p)

    def _fix_above(self, col):
        for c in sorted(self.rows):
            if c >= col:
                break
            row = self.rows[c]
            if any(cc >= col and cc in self.rows for cc in row):
                self._reduce_tail(row, col)

    def _install(self, col, row):
        if row[col] < 0:
            for c in row:
                row[c] = -row[c]
        self.rows[col] = row
        self._reduce_tail(row, col + 1)
        self._fix_above(col)

    def add(self, vec):
        """Insert a vector (dict or dense sequence). Returns True if the lattice grew."""
        self._check_cancel()
        if isinstance(vec, dict):
            v = {c: int(x) for c, x in vec.items() if x}
        else:
            v = {c: int(x) for c, x in enumerate(vec) if x}
        if any(not 0 <= c < self.ncols for c in v):
            raise ValueError("vector index out of range")
        grew = False
        heap = list(v)
        heapq.heapify(heap)
        done = set()
        while heap:
            c = heapq.heappop(heap)
            if c in done or not v.get(c, 0):
                continue
            done.add(c)
            b = v[c]
            p = self.rows.get(c)
            if p is None:
                self._install(c, v)
                return True
            a = p[c]
            if b % a == 0:
                q = b // a
                for cc in p:
                    if cc > c and cc not in v:
                        heapq.heappush(heap, cc)
                _axpy(v, q, p)
                continue
            # unimodular combination: new pivot gcd(a, b), residual vanishes at c
            g, s, t = xgcd(a, b)
            newp = {}
            for cc in set(p) | set(v):
                w = s * p.get(cc, 0) + t * v.get(cc, 0)
                if w:
                    newp[cc] = w
            resid = {}
            for cc in set(p) | set(v):
                w = (a // g) * v.get(cc, 0) - (b // g) * p.get(cc, 0)
                if w:
                    resid[cc] = w
            self.rows[c] = newp
            self._reduce_tail(newp, c + 1)
            self._fix_above(c)
            grew = True
            v = resid
            heap = [cc for cc in v if cc > c]
            heapq.heapify(heap)
            done = {cc for cc in done if cc <= c}
        return grew

    def reduce(self, vec):
        """Remainder of vec after exact elimination; empty dict iff vec is in the lattice."""
        v = {c: int(x) for c, x in (vec.items() if isinstance(vec, dict) else enumerate(vec)) if x}
        heap = list(v)
        heapq.heapify(heap)
        done = set()
        while heap:
            c = heapq.heappop(heap)
            if c in done or not v.get(c, 0):
                continue
            done.add(c)
            p = self.rows.get(c)
            if p is None or v[c] % p[c]:
                return v
            q = v[c] // p[c]
            for cc in p:
                if cc > c and cc not in v:
                    heapq.heappush(heap, cc)
            _axpy(v, q, p)
        return v

    def basis(self):
        out = []
        for c in sorted(self.rows):
            row = [0] * self.ncols
            for cc, x in self.rows[c].items():
                row[cc] = x
            out.append(tuple(row))
        return tuple(out)


@dataclass(frozen=True)
class Lattice:
    ambient: int
    basis: tuple

    @property
    def rank(self):
        return len(self.basis)

    def to_json(self):
        return {"ambient": self.ambient, "basis": [list(r) for r in self.basis]}

    @classmethod
    def from_json(cls, obj):
        return lattice_from_rows(obj["basis"], int(obj["ambient"]))

    def __contains__(self, v):
        return contains(self, v)

    def _builder(self):
        b = HNFBuilder(self.ambient)
        for r in self.basis:
            piv = next(i for i, x in enumerate(r) if x)
            b.rows[piv] = {i: x for i, x in enumerate(r) if x}
        return b


def _as_rows(M):
    rows = [list(r) for r in M]
    for r in rows:
        for x in r:
            if x != int(x):
                raise ValueError(f"non-integer matrix entry {x!r}")
    return rows


def hnf(M, ncols=None, cancel=None):
    """Canonical row-style HNF of the row span of M, zero rows dropped."""
    rows = _as_rows(M)
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    b = HNFBuilder(ncols, cancel)
    for r in rows:
        if len(r) != ncols:
            raise ValueError("ragged matrix")
        b.add(r)
    return [list(r) for r in b.basis()]


def lattice_from_rows(vectors, N, cancel=None):
    b = HNFBuilder(N, cancel)
    for v in vectors:
        if not isinstance(v, dict) and len(v) != N:
            raise ValueError(f"vector of length {len(v)} in ambient dimension {N}")
        b.add(v)
    return Lattice(N, b.basis())


def zero_lattice(N):
    return Lattice(N, ())


def full_lattice(N):
    return Lattice(N, tuple(tuple(int(i == j) for j in range(N)) for i in range(N)))


def left_kernel(M, nrows=None, cancel=None):
    """Lattice of integer v with v.M = 0, via the HNF of [M | I]."""
    rows = _as_rows(M)
    r = len(rows) if nrows is None else nrows
    c = len(rows[0]) if rows else 0
    b = HNFBuilder(c + r, cancel)
    for i, row in enumerate(rows):
        v = {j: int(x) for j, x in enumerate(row) if x}
        v[c + i] = 1
        b.add(v)
    kern = []
    for piv in sorted(b.rows):
        if piv >= c:
            kv = [0] * r
            for cc, x in b.rows[piv].items():
                kv[cc - c] = x
            kern.append(tuple(kv))
    # the identity block keeps these rows canonical already; re-canonicalize defensively
    return lattice_from_rows(kern, r)


def left_kernel_sparse(rows, nrows, cancel=None):
    """left_kernel for rows given as sparse dicts {column key: int}; column keys any hashable."""
    keys = sorted({k for row in rows for k in row}, key=repr)
    col = {k: j for j, k in enumerate(keys)}
    c = len(keys)
    b = HNFBuilder(c + nrows, cancel)
    for i, row in enumerate(rows):
        v = {col[k]: int(x) for k, x in row.items() if x}
        v[c + i] = 1
        b.add(v)
    kern = []
    for piv in sorted(b.rows):
        if piv >= c:
            kern.append({cc - c: x for cc, x in b.rows[piv].items()})
    return lattice_from_rows(kern, nrows)


def clear_column_denominators(M):
    """Scale each column by the lcm of its denominators; the left kernel is unchanged."""
    rows = [[Fraction(x) for x in r] for r in M]
    if not rows:
        return []
    ncols = len(rows[0])
    scale = [lcm(*(r[j].denominator for r in rows)) for j in range(ncols)]
    return [[int(r[j] * scale[j]) for j in range(ncols)] for r in rows]


def left_kernel_rational(M, nrows=None, cancel=None):
    return left_kernel(clear_column_denominators(M), nrows=nrows if nrows is not None else len(M), cancel=cancel)


def left_kernel_rational_sparse(rows, nrows, cancel=None):
    scale = {}
    for row in rows:
        for k, x in row.items():
            d = Fraction(x).denominator
            scale[k] = lcm(scale.get(k, 1), d)
    int_rows = [{k: int(Fraction(x) * scale[k]) for k, x in row.items()} for row in rows]
    return left_kernel_sparse(int_rows, nrows, cancel)


def _same_ambient(L1, L2):
    if L1.ambient != L2.ambient:
        raise ValueError(f"ambient dimensions differ: {L1.ambient} vs {L2.ambient}")


def contains(L, v):
    if len(v) != L.ambient:
        raise ValueError(f"vector of length {len(v)} in ambient dimension {L.ambient}")
    return not L._builder().reduce(v)


def is_sublattice(L1, L2):
    _same_ambient(L1, L2)
    b = L2._builder()
    return all(not b.reduce(r) for r in L1.basis)


def lattices_equal(L1, L2):
    _same_ambient(L1, L2)
    return L1.basis == L2.basis


def rank(L):
    return L.rank


def matmul_vec(v, M):
    """v . M for an integer row vector v and a dense matrix M."""
    ncols = len(M[0]) if M else 0
    out = [0] * ncols
    for vi, row in zip(v, M):
        if vi:
            for j, x in enumerate(row):
                if x:
                    out[j] += vi * x
    return out
