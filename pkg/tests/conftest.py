import random
from fractions import Fraction

import pytest

from probdigits import DigitSeq, ProbVector, make_prob_vector

#: the three asymmetric vectors used across the suite
ASYM_VECTORS = {
    2: make_prob_vector([Fraction(1, 4), Fraction(3, 4)]),
    3: make_prob_vector([Fraction(1, 5), Fraction(3, 10), Fraction(1, 2)]),
    5: make_prob_vector([Fraction(1, 15), Fraction(2, 15), Fraction(1, 5), Fraction(4, 15), Fraction(1, 3)]),
}


@pytest.fixture
def uniform2():
    return ProbVector.uniform(2)


@pytest.fixture
def pv3():
    return ASYM_VECTORS[3]


@pytest.fixture
def asym2():
    return ASYM_VECTORS[2]


def random_seq(rng: random.Random, q: int, max_len: int = 12, tails=("zero", "max")) -> DigitSeq:
    digits = tuple(rng.randrange(q) for _ in range(rng.randint(0, max_len)))
    return DigitSeq(digits, q, rng.choice(tails))


def random_fraction(rng: random.Random, max_den: int = 10**6) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(0, den), den)
