"""Constructive decomposition of relations among the e_k(A) into (k+1)-hyperoctahedral m-sums.

The recursion peels off the largest index n: the part of the relation on
subsets containing n is, after deleting n, a relation among e_{k-1} of
(m-1)-subsets; each k-pair spec in its decomposition is extended by the
pair (n, r) with r the smallest index it leaves unused.  What is left after
subtracting those (k+1)-pair sums avoids n and is handled at n - 1.
"""

from dataclasses import dataclass, field

from .octagen import OctaSpec, expand
from .subsets import FormalSum, rank
from .sympoly import elem_sym, nonzero_monomial, phi


class NotARelation(ValueError):
    def __init__(self, message, monomial=None, coeff=None):
        super().__init__(message)
        self.monomial = monomial
        self.coeff = coeff


class InvariantViolation(RuntimeError):
    """The reduction reached a state the theory forbids; never repaired silently."""


@dataclass
class Certificate:
    n: int
    m: int
    k: int
    entries: list = field(default_factory=list)  # (int coefficient, OctaSpec)

    def total(self):
        acc = {}
        for c, spec in self.entries:
            for A, s in expand(spec).items():
                acc[A] = acc.get(A, 0) + c * s
        return FormalSum._raw(self.n, self.m, {A: v for A, v in acc.items() if v})

    def __len__(self):
        return len(self.entries)

    def to_json(self):
        return {
            "n": self.n,
            "m": self.m,
            "k": self.k,
            "entries": [
                {"coeff": str(c), "base": list(s.base), "pairs": [list(p) for p in s.pairs]}
                for c, s in self.entries
            ],
        }

    @classmethod
    def from_json(cls, obj):
        try:
            n, m, k = int(obj["n"]), int(obj["m"]), int(obj["k"])
            entries = [
                (int(str(e["coeff"])), OctaSpec(n, m, tuple(e["base"]), tuple(tuple(p) for p in e["pairs"])))
                for e in obj["entries"]
            ]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed certificate JSON: {exc}") from exc
        return cls(n, m, k, entries)


def _ek_image(lam, k):
    return phi(lam, elem_sym(tuple(range(1, lam.m + 1)), k), check=False)


def _describe(mono, c):
    if not mono:
        return f"constant term {c}"
    name = "*".join(f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in mono)
    return f"monomial {name} has coefficient {c}"


def check_relation(lam, k):
    if not 0 <= k <= lam.m:
        raise ValueError(f"need 0 <= k <= m, got m={lam.m}, k={k}")
    image = _ek_image(lam, k)
    if image:
        mono, c = nonzero_monomial(image)
        raise NotARelation(f"not a relation among the e_{k}(A): {_describe(mono, c)}", mono, c)


def _add_into(acc, terms, c):
    for A, s in terms.items():
        v = acc.get(A, 0) + c * s
        if v:
            acc[A] = v
        else:
            acc.pop(A, None)


def _telescope(terms, m):
    """k = 0: walk every subset toward the anchor {1..m} along Johnson-graph edges."""
    anchor = tuple(range(1, m + 1))
    aset = set(anchor)
    lam = dict(terms)
    out = []
    while True:
        rest = [A for A in lam if A != anchor]
        if not rest:
            break
        A = max(rest, key=rank)
        c = lam.pop(A)
        outside = [a for a in A if a not in aset]
        a = max(outside)
        b = min(x for x in anchor if x not in A)
        B = tuple(x for x in A if x != a)
        A2 = tuple(sorted(B + (b,)))
        # A - A2 = expand(B; (a, b)) = -expand(B; (b, a)), and b < a
        out.append((-c, B, ((b, a),)))
        v = lam.get(A2, 0) + c
        if v:
            lam[A2] = v
        else:
            lam.pop(A2, None)
    if lam:
        raise InvariantViolation(f"k=0 telescoping left {lam[anchor]} on the anchor")
    return out


def _decompose(terms, n, m, k, depth, limit):
    if depth > limit:
        raise InvariantViolation(f"recursion depth {depth} exceeded guard {limit}")
    if not terms:
        return []
    if k == 0:
        return _telescope(terms, m)
    if n <= m + k:
        raise InvariantViolation(
            f"nonzero relation left on subsets of 1..{n} with n <= m + k = {m + k}"
        )
    top = {tuple(a for a in A if a != n): c for A, c in terms.items() if n in A}
    inner = _decompose(top, n - 1, m - 1, k - 1, depth + 1, limit)
    out = []
    rem = dict(terms)
    for c, base, pairs in inner:
        used = set(base) | {x for p in pairs for x in p}
        r = next(i for i in range(1, n) if i not in used)
        spec = OctaSpec(n, m, base, pairs + ((n, r),))
        _add_into(rem, expand(spec).terms, -c)
        sign, canon = spec.normalized()
        out.append((sign * c, canon.base, canon.pairs))
    if any(n in A for A in rem):
        raise InvariantViolation(f"remainder still involves index {n}")
    out.extend(_decompose(rem, n - 1, m, k, depth + 1, limit))
    return out


def decompose(lam, k, check=True):
    """Certificate writing the relation lam (among the e_k(A)) as an integer sum of (k+1)-pair specs."""
    n, m = lam.n, lam.m
    if not 0 <= k <= m <= n:
        raise ValueError(f"need 0 <= k <= m <= n, got n={n}, m={m}, k={k}")
    if check:
        check_relation(lam, k)
    # a call chain has at most k steps of the first kind, each widening n - m - k by one
    limit = max(n - m - k, 0) * (k + 1) + 2 * (k + 2)
    raw = _decompose(lam.terms, n, m, k, 0, limit)
    # merge repeated specs; drop cancelled ones
    merged = {}
    order = []
    for c, base, pairs in raw:
        key = (base, pairs)
        if key not in merged:
            order.append(key)
            merged[key] = 0
        merged[key] += c
    entries = [(merged[key], OctaSpec(n, m, key[0], key[1])) for key in order if merged[key]]
    cert = Certificate(n, m, k, entries)
    if cert.total() != lam:
        raise InvariantViolation("certificate does not re-expand to the input relation")
    return cert


def verify(lam, cert):
    """Independent check: every spec has k+1 pairs, the sum re-expands to lam, and each spec is a relation."""
    if (lam.n, lam.m) != (cert.n, cert.m):
        raise ValueError(f"context mismatch: relation (n,m)=({lam.n},{lam.m}), certificate ({cert.n},{cert.m})")
    k = cert.k
    if not 0 <= k <= cert.m:
        return False
    acc = {}
    ek = elem_sym(tuple(range(1, cert.m + 1)), k)
    checked = set()
    for c, spec in cert.entries:
        if not isinstance(spec, OctaSpec) or spec.j != k + 1 or (spec.n, spec.m) != (cert.n, cert.m):
            return False
        terms = expand(spec)
        _add_into(acc, terms.terms, int(c))
        key = (spec.base, spec.pairs)
        if key not in checked:
            checked.add(key)
            if phi(terms, ek, check=False):
                return False
    return acc == lam.terms
