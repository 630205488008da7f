"""Shared samplers for exact rational points of the polytopes."""

from fractions import Fraction

from ebiortho.polytope import attach_zeta, in_P, in_P0


def random_P0_point(rng, den=4, max_tries=100000):
    """Uniform-ish rational point of P^(0) with denominator dividing den."""
    for _ in range(max_tries):
        a = [Fraction(rng.randint(-den, 2 * den), den) for _ in range(5)]
        a.append(1 - sum(a))
        if in_P0(a):
            return tuple(a)
    raise RuntimeError("rejection sampling failed")


def random_P_vector(rng, den=4, max_tries=100000):
    """Random balanced vector inside P, with its canonical zeta attached."""
    for _ in range(max_tries):
        a = random_P0_point(rng, den=den)
        v = attach_zeta(a)
        if in_P(v):
            return v
    raise RuntimeError("rejection sampling failed")
