"""m-subsets of {1..n}: colex enumeration, ranking, and subset-indexed integer vectors.

Subsets are plain sorted tuples of 1-based indices.  Colex order compares
the largest differing element, so the rank of a subset does not depend on n.
"""

from itertools import combinations
from math import comb


def make_subset(elements, n=None):
    s = tuple(sorted(elements))
    if len(set(s)) != len(s):
        raise ValueError(f"repeated element in subset {list(elements)}")
    if s and s[0] < 1:
        raise ValueError(f"subset indices are 1-based, got {list(s)}")
    if n is not None and s and s[-1] > n:
        raise ValueError(f"subset {list(s)} not contained in 1..{n}")
    return s


def enumerate_subsets(n, m):
    """All m-subsets of {1..n} in colex order."""
    if m < 0 or m > n:
        raise ValueError(f"need 0 <= m <= n, got n={n}, m={m}")
    out = [tuple(reversed(c)) for c in combinations(range(n, 0, -1), m)]
    out.reverse()
    return out


def rank(s, n=None):
    if n is not None:
        make_subset(s, n)
    return sum(comb(a - 1, i) for i, a in enumerate(s, start=1))


def unrank(r, n, m):
    if m < 0 or m > n:
        raise ValueError(f"need 0 <= m <= n, got n={n}, m={m}")
    if not 0 <= r < comb(n, m):
        raise ValueError(f"rank {r} out of range for C({n},{m})")
    out = []
    top = n
    for i in range(m, 0, -1):
        # largest a with C(a-1, i) <= r
        a = top
        while comb(a - 1, i) > r:
            a -= 1
        out.append(a)
        r -= comb(a - 1, i)
        top = a - 1
    return tuple(reversed(out))


class FormalSum:
    """An integer combination of m-subsets of {1..n}; zero coefficients are never stored."""

    __slots__ = ("n", "m", "_terms")

    def __init__(self, n, m, terms=None):
        if m < 0 or m > n:
            raise ValueError(f"need 0 <= m <= n, got n={n}, m={m}")
        self.n = n
        self.m = m
        acc = {}
        for s, c in (terms.items() if isinstance(terms, dict) else terms or ()):
            s = make_subset(s, n)
            if len(s) != m:
                raise ValueError(f"subset {list(s)} has size {len(s)}, expected {m}")
            if c != int(c):
                raise ValueError(f"non-integer coefficient {c!r}")
            acc[s] = acc.get(s, 0) + int(c)
        self._terms = {s: c for s, c in acc.items() if c}

    @classmethod
    def _raw(cls, n, m, terms):
        # trusted constructor: keys already canonical, zeros already pruned
        obj = object.__new__(cls)
        obj.n, obj.m, obj._terms = n, m, terms
        return obj

    @classmethod
    def from_vector(cls, vec, n, m):
        subs = enumerate_subsets(n, m)
        if len(vec) != len(subs):
            raise ValueError(f"vector length {len(vec)} != C({n},{m})")
        return cls._raw(n, m, {s: int(c) for s, c in zip(subs, vec) if c})

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: rank(kv[0]))

    def coeff(self, s):
        return self._terms.get(tuple(s), 0)

    def support(self):
        return [s for s, _ in self.items()]

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __iter__(self):
        return iter(self.items())

    def _check(self, other):
        if not isinstance(other, FormalSum):
            return NotImplemented
        if (self.n, self.m) != (other.n, other.m):
            raise ValueError(f"mismatched contexts (n,m)=({self.n},{self.m}) vs ({other.n},{other.m})")

    def __add__(self, other):
        self._check(other)
        out = dict(self._terms)
        for s, c in other._terms.items():
            v = out.get(s, 0) + c
            if v:
                out[s] = v
            else:
                out.pop(s, None)
        return FormalSum._raw(self.n, self.m, out)

    def __neg__(self):
        return FormalSum._raw(self.n, self.m, {s: -c for s, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = int(c)
        if c == 0:
            return FormalSum._raw(self.n, self.m, {})
        return FormalSum._raw(self.n, self.m, {s: c * v for s, v in self._terms.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, FormalSum):
            return NotImplemented
        return (self.n, self.m) == (other.n, other.m) and self._terms == other._terms

    def __hash__(self):
        return hash((self.n, self.m, frozenset(self._terms.items())))

    def to_vector(self):
        vec = [0] * comb(self.n, self.m)
        for s, c in self._terms.items():
            vec[rank(s)] = c
        return vec

    def relift(self, n):
        """The same sum viewed in a different ambient {1..n}."""
        if self._terms and max(max(s, default=0) for s in self._terms) > n:
            raise ValueError(f"support does not fit in 1..{n}")
        return FormalSum._raw(n, self.m, dict(self._terms))

    def to_json(self):
        return {
            "n": self.n,
            "m": self.m,
            "terms": [{"subset": list(s), "coeff": str(c)} for s, c in self.items()],
        }

    @classmethod
    def from_json(cls, obj):
        try:
            n, m = int(obj["n"]), int(obj["m"])
            terms = [(tuple(int(a) for a in t["subset"]), int(str(t["coeff"]))) for t in obj["terms"]]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed relation JSON: {exc}") from exc
        return cls(n, m, terms)

    def __repr__(self):
        if not self._terms:
            return f"FormalSum(n={self.n}, m={self.m}, 0)"
        body = " ".join(f"{'+' if c > 0 else '-'}{abs(c) if abs(c) != 1 else ''}{{{','.join(map(str, s))}}}"
                        for s, c in self.items())
        return f"FormalSum(n={self.n}, m={self.m}, {body})"


def fs_add(a, b):
    return a + b


def fs_scale(c, a):
    return a.scale(c)


def fs_to_vector(a):
    return a.to_vector()
