import random
from fractions import Fraction
from itertools import combinations

from hyperoct.kunneth import Tensor, alpha_prime, pad_gamma, symmetrize


def random_tensor(R, f, rnd, nterms=4):
    terms = {}
    for _ in range(nterms):
        idx = tuple(rnd.randrange(R.dim) for _ in range(f))
        terms[idx] = terms.get(idx, 0) + Fraction(rnd.randint(-5, 5), rnd.randint(1, 3))
    return Tensor(R, f, terms)


def random_symmetric(R, f, rnd, nterms=3):
    return symmetrize(random_tensor(R, f, rnd, nterms))


def random_with_order(setup, m, target, rnd):
    """Random symmetric class whose modified components above `target` are removed."""
    alpha = random_symmetric(setup.algebra, m, rnd)
    for size in range(target + 1, m + 1):
        top = alpha_prime(alpha, setup, size)
        for B in combinations(range(1, m + 1), size):
            alpha = alpha - pad_gamma(top, B, m, setup)
    return alpha


def seeded(seed):
    return random.Random(seed)
