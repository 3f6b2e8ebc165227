"""Sparse exact multivariate polynomials and the evaluation maps A -> f(A).

A monomial is a sorted tuple of (index, exponent) pairs with positive
exponents; a polynomial maps monomials to Fractions.
"""

from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .subsets import enumerate_subsets, make_subset, rank


def _mono(exps):
    items = exps.items() if isinstance(exps, dict) else exps
    out = {}
    for i, e in items:
        i, e = int(i), int(e)
        if i < 1:
            raise ValueError(f"variable indices are 1-based, got {i}")
        if e < 0:
            raise ValueError(f"negative exponent {e} on x{i}")
        if e:
            out[i] = out.get(i, 0) + e
    return tuple(sorted(out.items()))


def _mono_key(mono):
    # graded colex: total degree, then exponent vectors compared from the highest index down
    deg = sum(e for _, e in mono)
    top = mono[-1][0] if mono else 0
    dense = [0] * (top + 1)
    for i, e in mono:
        dense[i] = e
    return (deg, top, tuple(reversed(dense)))


class Poly:
    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        acc = {}
        for mono, c in (terms.items() if isinstance(terms, dict) else terms or ()):
            mono = _mono(mono)
            acc[mono] = acc.get(mono, 0) + Fraction(c)
        self._terms = {k: v for k, v in acc.items() if v}

    @classmethod
    def _raw(cls, terms):
        obj = object.__new__(cls)
        obj._terms = terms
        return obj

    @classmethod
    def const(cls, c):
        return cls({(): c})

    @classmethod
    def var(cls, i):
        return cls({((i, 1),): 1})

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: _mono_key(kv[0]))

    def coeff(self, exps):
        return self._terms.get(_mono(exps), Fraction(0))

    def variables(self):
        return sorted({i for mono in self._terms for i, _ in mono})

    def is_integral(self):
        return all(c.denominator == 1 for c in self._terms.values())

    def assert_integral(self):
        if not self.is_integral():
            raise ValueError("polynomial has non-integer coefficients")
        return self

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        out = dict(self._terms)
        for k, v in other._terms.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Poly()
            return Poly._raw({k: v * other for k, v in self._terms.items()})
        out = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = _mono(list(m1) + list(m2))
                out[mono] = out.get(mono, 0) + c1 * c2
        return Poly._raw({k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def substitute(self, mapping):
        """Rename variables: x_i -> x_{mapping[i]} (mapping must be injective on used indices)."""
        out = {}
        for mono, c in self._terms.items():
            new = _mono([(mapping[i], e) for i, e in mono])
            out[new] = out.get(new, 0) + c
        return Poly._raw({k: v for k, v in out.items() if v})

    def diff(self, i):
        out = {}
        for mono, c in self._terms.items():
            d = dict(mono)
            e = d.get(i, 0)
            if not e:
                continue
            d[i] = e - 1
            new = _mono(d)
            out[new] = out.get(new, 0) + c * e
        return Poly._raw({k: v for k, v in out.items() if v})

    def to_json(self):
        return [{"exps": {str(i): e for i, e in mono}, "coeff": str(c)} for mono, c in self.items()]

    @classmethod
    def from_json(cls, obj):
        return cls([(t["exps"], Fraction(t["coeff"])) for t in obj])

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for mono, c in self.items():
            m = "*".join(f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in mono)
            if not m:
                parts.append(str(c))
            elif c == 1:
                parts.append(m)
            elif c == -1:
                parts.append("-" + m)
            else:
                parts.append(f"{c}*{m}")
        return " + ".join(parts).replace("+ -", "- ")


def elem_sym(A, k):
    """k-th elementary symmetric polynomial in the variables indexed by A."""
    A = make_subset(A)
    if not 0 <= k <= len(A):
        raise ValueError(f"need 0 <= k <= |A| = {len(A)}, got k={k}")
    return Poly._raw({tuple((i, 1) for i in S): Fraction(1) for S in combinations(A, k)})


def power_sum(m, d):
    return Poly({((i, d),): 1 for i in range(1, m + 1)})


def monomial_symmetric(m, exps):
    """Sum of all distinct monomials x_{i_1}^{e_1} ... x_{i_j}^{e_j} with distinct i's in 1..m."""
    exps = sorted(e for e in exps if e)
    terms = {}
    for idx in combinations(range(1, m + 1), len(exps)):
        for perm in set(_perms(exps)):
            terms[_mono(zip(idx, perm))] = Fraction(1)
    return Poly._raw(terms)


def _perms(seq):
    if len(seq) <= 1:
        yield tuple(seq)
        return
    for i in range(len(seq)):
        for rest in _perms(seq[:i] + seq[i + 1:]):
            yield (seq[i],) + rest


def apply_subset(f, A):
    """f(A): replace x_i by x_{a_i}, a_i the i-th smallest element of A."""
    A = make_subset(A)
    used = f.variables()
    if used and used[-1] > len(A):
        raise ValueError(f"polynomial uses x{used[-1]} but |A| = {len(A)}")
    return f.substitute({i: a for i, a in enumerate(A, start=1)})


def is_symmetric(f, m):
    for i in range(1, m):
        swap = {j: j for j in range(1, m + 1)}
        swap[i], swap[i + 1] = i + 1, i
        if f.substitute(swap) != f:
            return False
    return True


def phi(lam, f, check=True):
    """sum_A lam_A f(A) for a FormalSum lam of m-subsets."""
    if check:
        used = f.variables()
        if used and used[-1] > lam.m:
            raise ValueError(f"polynomial uses x{used[-1]} but subsets have size {lam.m}")
        if not is_symmetric(f, lam.m):
            raise ValueError("phi requires a symmetric polynomial")
    acc = {}
    for A, c in lam.items():
        for mono, q in apply_subset(f, A).terms.items():
            acc[mono] = acc.get(mono, 0) + q * c
    return Poly._raw({k: v for k, v in acc.items() if v})


def max_distinct_vars(f):
    if not f:
        raise ValueError("max_distinct_vars of the zero polynomial is undefined")
    return max(len(mono) for mono in f.terms)


def diff_operator(p, m, k):
    """(1/(m-k+1)) * sum_i d/dx_i, which sends e_k(A) to e_{k-1}(A) for |A| = m."""
    d = m - k + 1
    if d == 0:
        raise ValueError("m - k + 1 must be nonzero")
    out = Poly()
    for i in p.variables():
        out = out + p.diff(i)
    return out * Fraction(1, d)


class CertificateError(RuntimeError):
    """A constructed certificate failed its own verification (an implementation bug)."""


def monomial_span_certificate(S, m, k):
    """Write prod_{i in S} x_i as a Q-combination of e_k(A), A ranging over m-subsets of {1..m+k}.

    Unrolls the recursion
        (m-(k-l)) x_{i_1}..x_{i_l} e_{k-l}(B)
            = x_{i_1}..x_{i_{l-1}} [ sum_{b in B} e_{k-l+1}({i_l} + B - b) - (m-(k-l+1)) e_{k-l+1}(B) ]
    from l = k down to l = 0, starting from B = the complement of S.
    Returns (coefficient, A) pairs in colex order of A.
    """
    n = m + k
    S = make_subset(S, n)
    if len(S) != k:
        raise ValueError(f"|S| = {len(S)} but k = {k}")
    if not 0 <= k <= m:
        raise ValueError(f"need 0 <= k <= m, got m={m}, k={k}")
    B = tuple(i for i in range(1, n + 1) if i not in S)

    @lru_cache(maxsize=None)
    def span(prefix, B):
        # combination of e_k(A) equal to x_prefix * e_{k-len(prefix)}(B)
        l = len(prefix)
        if l == 0:
            return {B: Fraction(1)}
        head, last = prefix[:-1], prefix[-1]
        lead = Fraction(1, m - (k - l))
        out = {}

        def add(part, scale):
            for A, q in part.items():
                v = out.get(A, 0) + q * scale
                if v:
                    out[A] = v
                else:
                    out.pop(A, None)

        for b in B:
            add(span(head, tuple(sorted(set(B) - {b} | {last}))), lead)
        add(span(head, B), -lead * (m - (k - l + 1)))
        return out

    combo = span(S, B)
    result = sorted(((q, A) for A, q in combo.items()), key=lambda t: rank(t[1]))

    target = Poly({tuple((i, 1) for i in S): 1})
    check = Poly()
    for q, A in result:
        check = check + elem_sym(A, k) * q
    if check != target:
        raise CertificateError(f"span certificate for {S} does not re-expand to the monomial")
    return result


def evaluation_matrix(f, n, m):
    """Coefficient matrix of lam -> phi(lam, f): rows are m-subsets (colex), columns the monomials that occur."""
    rows = [apply_subset(f, A) for A in enumerate_subsets(n, m)]
    monos = sorted({mono for r in rows for mono in r.terms}, key=_mono_key)
    col = {mono: j for j, mono in enumerate(monos)}
    mat = []
    for r in rows:
        line = [Fraction(0)] * len(monos)
        for mono, c in r.terms.items():
            line[col[mono]] = c
        mat.append(line)
    return mat, monos


def nonzero_monomial(p):
    """Some monomial with nonzero coefficient (the first in canonical order), for diagnostics."""
    return p.items()[0] if p else None


def relation_to_poly(lam, k):
    """phi(lam, e_k) without the symmetry re-check."""
    return phi(lam, elem_sym(tuple(range(1, lam.m + 1)), k), check=False)

