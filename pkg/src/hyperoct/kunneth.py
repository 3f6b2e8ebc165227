"""A finite Künneth model of a rational Chow ring and the correspondence calculus on it.

Classes on X^f are f-fold tensors over a finite commutative graded algebra R
with an integration functional.  Factor positions are 1-based (like subset
indices); basis indices within R are 0-based.
"""

import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product

from .octagen import KernelReport, g_lattice
from .subsets import enumerate_subsets
from .zlattice import lattices_equal, left_kernel_rational_sparse


class ModelError(ValueError):
    """The algebra data violates a model axiom."""

    def __init__(self, axiom, detail):
        super().__init__(f"{axiom}: {detail}")
        self.axiom = axiom


def _vec(d, entries):
    return {l: Fraction(x) for l, x in enumerate(entries) if Fraction(x)}


class Algebra:
    def __init__(self, name, basis, degrees, unit, mul, integral, validate=True):
        self.name = name
        self.basis = list(basis)
        self.dim = len(self.basis)
        self.degrees = [int(x) for x in degrees]
        self.unit = int(unit)
        # mul[i][j] is a sparse coordinate dict of b_i * b_j
        self.mul = [[(_vec(self.dim, e) if not isinstance(e, dict) else {int(l): Fraction(x) for l, x in e.items() if x})
                     for e in row] for row in mul]
        self.integral = [Fraction(x) for x in integral]
        self._gram_inv = None
        if validate:
            self.validate()

    def __repr__(self):
        return f"Algebra({self.name!r}, basis={self.basis})"

    # -- vector-level arithmetic -------------------------------------------------
    def times(self, u, v):
        out = {}
        for i, a in u.items():
            for j, b in v.items():
                for l, c in self.mul[i][j].items():
                    out[l] = out.get(l, 0) + a * b * c
        return {l: c for l, c in out.items() if c}

    def integrate(self, u):
        return sum((c * self.integral[l] for l, c in u.items()), Fraction(0))

    def gram(self):
        return [[self.integrate(self.mul[i][j]) for j in range(self.dim)] for i in range(self.dim)]

    # -- axioms --------------------------------------------------------------------
    def validate(self):
        d = self.dim
        if len(self.degrees) != d or len(self.integral) != d:
            raise ModelError("shape", "degrees and integral must have one entry per basis element")
        if len(self.mul) != d or any(len(r) != d for r in self.mul):
            raise ModelError("shape", f"multiplication table must be {d}x{d}")
        if not 0 <= self.unit < d:
            raise ModelError("unit", f"unit index {self.unit} out of range")
        if any(l < 0 or l >= d for r in self.mul for e in r for l in e):
            raise ModelError("shape", "product coordinate index out of range")
        e = {i: Fraction(1) for i in [self.unit]}
        for i in range(d):
            bi = {i: Fraction(1)}
            if self.times(e, bi) != bi:
                raise ModelError("unit", f"1 * {self.basis[i]} != {self.basis[i]}")
        for i in range(d):
            for j in range(d):
                if self.mul[i][j] != self.mul[j][i]:
                    raise ModelError("commutativity", f"({self.basis[i]}, {self.basis[j]})")
                for l in self.mul[i][j]:
                    if self.degrees[l] != self.degrees[i] + self.degrees[j]:
                        raise ModelError(
                            "grading",
                            f"{self.basis[i]}*{self.basis[j]} has a component on {self.basis[l]}",
                        )
        for i, j, l in product(range(d), repeat=3):
            left = self.times(self.mul[i][j], {l: Fraction(1)})
            right = self.times({i: Fraction(1)}, self.mul[j][l])
            if left != right:
                raise ModelError(
                    "associativity",
                    f"({self.basis[i]}, {self.basis[j]}, {self.basis[l]})",
                )
        inv = _invert(self.gram())
        if inv is None:
            raise ModelError("nondegeneracy", "Gram matrix of the integration pairing is singular")
        self._gram_inv = inv

    def dual_basis(self):
        """b_i^v with integral(b_i * b_j^v) = delta_ij."""
        if self._gram_inv is None:
            inv = _invert(self.gram())
            if inv is None:
                raise ModelError("nondegeneracy", "Gram matrix of the integration pairing is singular")
            self._gram_inv = inv
        G = self._gram_inv
        return [Tensor(self, 1, {(l,): G[i][l] for l in range(self.dim)}) for i in range(self.dim)]

    def element(self, coords):
        """1-factor tensor from a dict {basis index or label: coefficient}."""
        terms = {}
        for key, c in coords.items():
            i = self.basis.index(key) if isinstance(key, str) else int(key)
            terms[(i,)] = terms.get((i,), 0) + Fraction(c)
        return Tensor(self, 1, terms)

    def one(self, f=1):
        return Tensor(self, f, {(self.unit,) * f: Fraction(1)})

    # -- serialization ---------------------------------------------------------------
    def to_json(self):
        return {
            "name": self.name,
            "basis": list(self.basis),
            "degrees": list(self.degrees),
            "unit": self.unit,
            "mul": [[[str(e.get(l, 0)) for l in range(self.dim)] for e in row] for row in self.mul],
            "integral": [str(x) for x in self.integral],
        }

    @classmethod
    def from_json(cls, obj):
        try:
            return cls(
                obj.get("name", "model"),
                obj["basis"],
                obj["degrees"],
                obj["unit"],
                [[[Fraction(str(x)) for x in e] for e in row] for row in obj["mul"]],
                [Fraction(str(x)) for x in obj["integral"]],
            )
        except (KeyError, TypeError) as exc:
            raise ModelError("shape", f"malformed model JSON: {exc}") from exc


def _invert(M):
    """Exact Gauss-Jordan inverse over Q; None if singular."""
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c]), None)
        if p is None:
            return None
        A[c], A[p] = A[p], A[c]
        piv = A[c][c]
        A[c] = [x / piv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [row[n:] for row in A]


class Tensor:
    """An element of R^{(x) f}; terms map basis-index tuples of length f to Fractions."""

    __slots__ = ("algebra", "factors", "_terms")

    def __init__(self, algebra, factors, terms=None):
        self.algebra = algebra
        self.factors = factors
        acc = {}
        for idx, c in (terms.items() if isinstance(terms, dict) else terms or ()):
            idx = tuple(int(i) for i in idx)
            if len(idx) != factors:
                raise ValueError(f"index tuple {idx} does not have {factors} entries")
            if any(not 0 <= i < algebra.dim for i in idx):
                raise ValueError(f"basis index out of range in {idx}")
            acc[idx] = acc.get(idx, 0) + Fraction(c)
        self._terms = {k: v for k, v in acc.items() if v}

    @classmethod
    def _raw(cls, algebra, factors, terms):
        obj = object.__new__(cls)
        obj.algebra, obj.factors, obj._terms = algebra, factors, terms
        return obj

    @classmethod
    def scalar(cls, algebra, c):
        return cls(algebra, 0, {(): c})

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def to_scalar(self):
        if self.factors != 0:
            raise ValueError("not a scalar")
        return self._terms.get((), Fraction(0))

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return self.factors == other.factors and self._terms == other._terms

    def __hash__(self):
        return hash((self.factors, frozenset(self._terms.items())))

    def _same(self, other):
        if self.factors != other.factors:
            raise ValueError(f"factor counts differ: {self.factors} vs {other.factors}")

    def __add__(self, other):
        self._same(other)
        out = dict(self._terms)
        for k, v in other._terms.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return Tensor._raw(self.algebra, self.factors, out)

    def __neg__(self):
        return Tensor._raw(self.algebra, self.factors, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        c = Fraction(c)
        if not c:
            return Tensor._raw(self.algebra, self.factors, {})
        return Tensor._raw(self.algebra, self.factors, {k: v * c for k, v in self._terms.items()})

    __rmul__ = __mul__

    def permute(self, perm):
        """Factor p of self becomes factor perm[p] of the result (both 0-based here)."""
        out = {}
        for idx, c in self._terms.items():
            new = [0] * self.factors
            for p, i in enumerate(idx):
                new[perm[p]] = i
            out[tuple(new)] = c
        return Tensor._raw(self.algebra, self.factors, out)

    def to_json(self):
        return {"factors": self.factors, "terms": [{"idx": list(k), "coeff": str(v)} for k, v in self.items()]}

    @classmethod
    def from_json(cls, algebra, obj):
        try:
            return cls(algebra, int(obj["factors"]),
                       [(tuple(t["idx"]), Fraction(str(t["coeff"]))) for t in obj["terms"]])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed tensor JSON: {exc}") from exc

    def __repr__(self):
        if not self._terms:
            return f"Tensor(f={self.factors}, 0)"
        names = self.algebra.basis
        parts = [f"{c}*" + "(x)".join(names[i] for i in idx) for idx, c in self.items()]
        return f"Tensor(f={self.factors}, " + " + ".join(parts) + ")"


# -- products, pullbacks, pushforwards ---------------------------------------------

def cup(a, b):
    a._same(b)
    R = a.algebra
    out = {}
    for I, c1 in a._terms.items():
        for J, c2 in b._terms.items():
            prods = [R.mul[i][j] for i, j in zip(I, J)]
            if any(not p for p in prods):
                continue
            for combo in product(*(p.items() for p in prods)):
                c = c1 * c2
                for _, x in combo:
                    c *= x
                key = tuple(l for l, _ in combo)
                out[key] = out.get(key, 0) + c
    return Tensor._raw(R, a.factors, {k: v for k, v in out.items() if v})


def _check_positions(positions, f):
    if len(set(positions)) != len(positions) or any(not 1 <= p <= f for p in positions):
        raise ValueError(f"invalid factor positions {list(positions)} for {f} factors")


def embed(a, positions, f, fill=None):
    """Place a's factors at the given 1-based positions of f factors; `fill` (default 1) elsewhere."""
    positions = list(positions)
    if len(positions) != a.factors:
        raise ValueError(f"{a.factors}-factor class needs {a.factors} positions, got {len(positions)}")
    _check_positions(positions, f)
    R = a.algebra
    if fill is None:
        fill = R.one()
    if fill.factors != 1:
        raise ValueError("fill must be a 1-factor class")
    others = [p for p in range(1, f + 1) if p not in positions]
    out = {}
    fill_terms = list(fill._terms.items())
    for idx, c in a._terms.items():
        for combo in product(fill_terms, repeat=len(others)):
            new = [0] * f
            for p, i in zip(positions, idx):
                new[p - 1] = i
            cc = c
            for p, (fi, fc) in zip(others, combo):
                new[p - 1] = fi[0]
                cc *= fc
            key = tuple(new)
            out[key] = out.get(key, 0) + cc
    return Tensor._raw(R, f, {k: v for k, v in out.items() if v})


def pullback(a, positions, f):
    return embed(a, positions, f)


def box(a, b, pos_a=None, pos_b=None):
    """a on factors pos_a, b on factors pos_b; together they must cover 1..f exactly once."""
    f = a.factors + b.factors
    pos_a = list(range(1, a.factors + 1)) if pos_a is None else list(pos_a)
    pos_b = list(range(a.factors + 1, f + 1)) if pos_b is None else list(pos_b)
    if sorted(pos_a + pos_b) != list(range(1, f + 1)):
        raise ValueError("box needs disjoint factor sets covering the target")
    out = {}
    for I, c1 in a._terms.items():
        for J, c2 in b._terms.items():
            new = [0] * f
            for p, i in zip(pos_a, I):
                new[p - 1] = i
            for p, j in zip(pos_b, J):
                new[p - 1] = j
            key = tuple(new)
            out[key] = out.get(key, 0) + c1 * c2
    return Tensor._raw(a.algebra, f, {k: v for k, v in out.items() if v})


def pushforward(a, keep):
    """Integrate out every factor not in `keep` (1-based); kept factors stay in increasing order."""
    keep = sorted(keep)
    _check_positions(keep, a.factors)
    R = a.algebra
    drop = [p for p in range(1, a.factors + 1) if p not in keep]
    out = {}
    for idx, c in a._terms.items():
        w = c
        for p in drop:
            w *= R.integral[idx[p - 1]]
            if not w:
                break
        if w:
            key = tuple(idx[p - 1] for p in keep)
            out[key] = out.get(key, 0) + w
    return Tensor._raw(R, len(keep), {k: v for k, v in out.items() if v})


def integral(a):
    return pushforward(a, []).to_scalar()


def dual_basis(algebra):
    return algebra.dual_basis()


def diagonal(algebra, m):
    """The small diagonal of X^m: the class pairing with a_1 x ... x a_m to integral(a_1...a_m)."""
    if m < 1:
        raise ValueError("diagonal needs m >= 1")
    R = algebra
    duals = R.dual_basis()
    out = {}
    for idx in product(range(R.dim), repeat=m):
        v = {idx[0]: Fraction(1)}
        for i in idx[1:]:
            v = R.times(v, {i: Fraction(1)})
            if not v:
                break
        c = R.integrate(v)
        if not c:
            continue
        for combo in product(*(duals[i]._terms.items() for i in idx)):
            w = c
            for _, x in combo:
                w *= x
            key = tuple(k[0] for k, _ in combo)
            out[key] = out.get(key, 0) + w
    delta = Tensor._raw(R, m, {k: v for k, v in out.items() if v})
    _check_diagonal(delta, R, m)
    return delta


def _check_diagonal(delta, R, m):
    G = R.gram()
    for js in product(range(R.dim), repeat=m):
        lhs = Fraction(0)
        for idx, c in delta._terms.items():
            for i, j in zip(idx, js):
                c *= G[i][j]
                if not c:
                    break
            lhs += c
        v = {js[0]: Fraction(1)}
        for j in js[1:]:
            v = R.times(v, {j: Fraction(1)})
        if lhs != R.integrate(v):
            raise ModelError("diagonal", f"characterization fails on basis tuple {js}")


# -- correspondences ---------------------------------------------------------------

def apply_corr(gamma, alpha, position):
    """Let the correspondence act on factor `position` of alpha: pull back, cup, push to the target factor."""
    if gamma.factors != 2:
        raise ValueError("a correspondence has two factors")
    f = alpha.factors
    _check_positions([position], f)
    big = cup(pullback(alpha, range(1, f + 1), f + 1), pullback(gamma, [position, f + 1], f + 1))
    keep = [p for p in range(1, f + 2) if p != position]
    pushed = pushforward(big, keep)
    # the target factor (last of `keep`) moves back into slot `position`
    perm = [p if p < position - 1 else p + 1 for p in range(f - 1)] + [position - 1]
    return pushed.permute(perm)


def compose_corr(g1, g2):
    """g2 o g1 = (pi_13)_*(pi_12^* g1  cup  pi_23^* g2)."""
    if g1.factors != 2 or g2.factors != 2:
        raise ValueError("correspondences have two factors")
    return pushforward(cup(pullback(g1, [1, 2], 3), pullback(g2, [2, 3], 3)), [1, 3])


# -- the model setup and the modified classes ---------------------------------------

@dataclass(frozen=True)
class ModelSetup:
    algebra: Algebra
    gamma: Tensor
    gamma_star: Tensor

    def __post_init__(self):
        if self.gamma.factors != 1 or self.gamma_star.factors != 1:
            raise ValueError("gamma and gamma_star must be 1-factor classes")
        c = integral(cup(self.gamma, self.gamma_star))
        if c != 1:
            raise ModelError("normalization", f"integral(gamma * gamma_star) = {c}, expected 1")

    def projector(self):
        """Gamma = gamma_star (x) gamma on X x X."""
        return box(self.gamma_star, self.gamma)


def pad_gamma(beta, positions, f, setup):
    """gamma on the complement of `positions`, beta on `positions`."""
    return embed(beta, positions, f, fill=setup.gamma)


def unpad_gamma(delta, positions, setup):
    """Inverse of pad_gamma: cup with gamma_star off `positions`, then integrate those factors out."""
    f = delta.factors
    weight = embed(delta.algebra.one(len(positions)), positions, f, fill=setup.gamma_star)
    return pushforward(cup(delta, weight), positions)


def alpha_B(alpha, setup, B):
    B = sorted(B)
    m = alpha.factors
    _check_positions(B, m)
    weight = embed(setup.algebra.one(len(B)), B, m, fill=setup.gamma_star)
    return pushforward(cup(alpha, weight), B)


def _subsets_of(k):
    for r in range(k + 1):
        yield from combinations(range(1, k + 1), r)


def alpha_prime(alpha, setup, k):
    m = alpha.factors
    if not 0 <= k <= m:
        raise ValueError(f"need 0 <= k <= m = {m}, got {k}")
    out = Tensor._raw(setup.algebra, k, {})
    for B in _subsets_of(k):
        term = pad_gamma(alpha_B(alpha, setup, B), B, k, setup)
        out = out + term * (-1) ** (k - len(B))
    return out


def modified_diagonal(setup, l):
    if l < 1:
        raise ValueError("modified_diagonal needs l >= 1")
    R = setup.algebra
    out = Tensor._raw(R, l, {})
    for B in _subsets_of(l):
        if not B:
            continue
        out = out + pad_gamma(diagonal(R, len(B)), B, l, setup) * (-1) ** (l - len(B))
    return out


def is_symmetric_tensor(a):
    f = a.factors
    for i in range(f - 1):
        perm = list(range(f))
        perm[i], perm[i + 1] = i + 1, i
        if a.permute(perm) != a:
            return False
    return True


def symmetrize(a):
    out = Tensor._raw(a.algebra, a.factors, {})
    for perm in permutations(range(a.factors)):
        out = out + a.permute(perm)
    return out


def vanishing_order(alpha, setup):
    """-1 for alpha = 0, else the largest k <= m with alpha'_k != 0."""
    if not is_symmetric_tensor(alpha):
        raise ValueError("vanishing_order requires a symmetric class")
    if not alpha:
        return -1
    for k in range(alpha.factors, -1, -1):
        if alpha_prime(alpha, setup, k):
            return k
    raise RuntimeError("nonzero class with every modified component zero")


def reconstruct(alpha, setup):
    """sum over B of gamma off B, alpha'_{|B|} on B; equals alpha for symmetric alpha."""
    m = alpha.factors
    primes = [alpha_prime(alpha, setup, k) for k in range(m + 1)]
    out = Tensor._raw(setup.algebra, m, {})
    for B in _subsets_of(m):
        out = out + pad_gamma(primes[len(B)], B, m, setup)
    return out


def projector_component(alpha, setup, B):
    """Apply Gamma on the factors off B and (Delta_2 - Gamma) on the factors in B."""
    R = setup.algebra
    G = setup.projector()
    H = diagonal(R, 2) - G
    out = alpha
    for p in range(1, alpha.factors + 1):
        out = apply_corr(H if p in B else G, out, p)
    return out


def image_class(alpha, A, n, setup):
    """alpha(A): alpha on the factors in A, gamma on the rest of 1..n."""
    return pad_gamma(alpha, A, n, setup)


def mainthm_rows(alpha, setup, n):
    return [image_class(alpha, A, n, setup).terms for A in enumerate_subsets(n, alpha.factors)]


def verify_mainthm(alpha, setup, n, label=None):
    m = alpha.factors
    if m > n:
        raise ValueError(f"need m <= n, got m={m}, n={n}")
    t0 = time.perf_counter()
    order = vanishing_order(alpha, setup)
    rows = mainthm_rows(alpha, setup, n)
    ker = left_kernel_rational_sparse(rows, len(rows))
    g = g_lattice(n, m, order + 1)
    ms = int((time.perf_counter() - t0) * 1000)
    ctx = {"model": setup.algebra.name, "order": order}
    if label:
        ctx["alpha"] = label
    return KernelReport(n, m, order, ker.rank, g.rank, lattices_equal(ker, g), ms, ctx, kernel=ker, g=g)


# -- built-in models -------------------------------------------------------------------

def _truncated_poly(name, top):
    """Q[t]/(t^{top+1}) with integral = coefficient of t^top."""
    d = top + 1
    mul = [[[1 if l == i + j else 0 for l in range(d)] for j in range(d)] for i in range(d)]
    basis = ["1"] + ["t" if i == 1 else f"t^{i}" for i in range(1, d)]
    return Algebra(name, basis, list(range(d)), 0, mul, [int(i == top) for i in range(d)])


def point_model():
    return Algebra("point", ["1"], [0], 0, [[[1]]], [1])


def p1_model():
    return _truncated_poly("p1", 1)


def p2_model():
    return _truncated_poly("p2", 2)


def p1xp1_model():
    # basis 1, u, v, uv with u^2 = v^2 = 0
    basis = ["1", "u", "v", "uv"]
    bits = [(0, 0), (1, 0), (0, 1), (1, 1)]
    mul = []
    for a in bits:
        row = []
        for b in bits:
            s = (a[0] + b[0], a[1] + b[1])
            row.append([1 if s == bits[l] else 0 for l in range(4)])
        mul.append(row)
    return Algebra("p1xp1", basis, [0, 1, 1, 2], 0, mul, [0, 0, 0, 1])


BUILTIN_MODELS = {
    "point": point_model,
    "p1": p1_model,
    "p2": p2_model,
    "p1xp1": p1xp1_model,
}


def default_setup(algebra):
    """gamma = a top-degree basis class scaled to integrate to 1, gamma_star = 1."""
    R = algebra
    cands = [i for i in range(R.dim) if R.integral[i]]
    if not cands:
        raise ModelError("normalization", "no basis element has nonzero integral")
    i = max(cands, key=lambda l: (R.degrees[l], -l))
    gamma = Tensor(R, 1, {(i,): 1 / R.integral[i]})
    return ModelSetup(R, gamma, R.one())


def builtin_setup(name):
    return default_setup(BUILTIN_MODELS[name]())
