"""Random generators shared by the property tests."""

import random

from nrcubic.function_field import FactoredFn, line, make_curve, twist_to_degree_zero


def random_line(rng: random.Random, bound: int = 3):
    while True:
        a, b, c = (rng.randint(-bound, bound) for _ in range(3))
        if a or b or c:
            return line(a, b, c)


def random_fn(rng: random.Random, max_factors: int = 4, exps=(-2, -1, 1, 2)) -> FactoredFn:
    """Degree-0 product of <= max_factors rational linear forms (twisted by z)."""
    factors = [(random_line(rng), rng.choice(exps)) for _ in range(rng.randint(0, max_factors))]
    return twist_to_degree_zero(FactoredFn(rng.choice([1, 2, -3]), factors))


Z = make_curve("z")
