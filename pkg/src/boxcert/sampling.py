"""Seeded exact-rational samplers for property checks and scans.

Random boxes are built from integer draws only, so every sample is an
exact rational point and runs are reproducible from the seed.  NS boxes
are convex mixtures of the 24 polytope vertices with weights of bounded
denominator (default 64), which keeps samples exactly inside the
polytope.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .box import Box, mix, convex_combination
from .chsh import beta
from .twirl import RelabelingMixture, RelabelingOp
from .vertices import ns_vertices_2x2

DEFAULT_DENOMINATOR = 64


def rng_from_seed(seed: int) -> random.Random:
    return random.Random(seed)


def rational_weights(rng: random.Random, count: int, denominator: int = DEFAULT_DENOMINATOR) -> list[Fraction]:
    """A random composition of 1 into ``count`` weights k_i/denominator."""
    cuts = sorted(rng.randint(0, denominator) for _ in range(count - 1))
    bounds = [0] + cuts + [denominator]
    return [Fraction(bounds[i + 1] - bounds[i], denominator) for i in range(count)]


def random_rational(rng: random.Random, denominator: int = DEFAULT_DENOMINATOR) -> Fraction:
    """Uniform k/denominator in [0, 1]."""
    return Fraction(rng.randint(0, denominator), denominator)


def random_box(rng: random.Random, parties: int = 2, denominator: int = DEFAULT_DENOMINATOR) -> Box:
    """General binary box: an independent random distribution per input."""
    n_out = 2**parties
    probs = []
    for _ in range(2**parties):
        probs.extend(rational_weights(rng, n_out, denominator))
    return Box((2,) * parties, (2,) * parties, tuple(probs))


def random_ns_box(rng: random.Random, denominator: int = DEFAULT_DENOMINATOR) -> Box:
    """Random fully-NS 2x2 box: mixture of the 24 extremal points."""
    names_boxes = ns_vertices_2x2()
    weights = rational_weights(rng, len(names_boxes), denominator)
    return convex_combination(weights, [b for _, b in names_boxes])


def random_ns_box_with_min_beta(
    rng: random.Random,
    r: int,
    s: int,
    t: int,
    denominator: int = DEFAULT_DENOMINATOR,
) -> Box:
    """Random fully-NS 2x2 box with beta_rst >= 2 exactly.

    Mixes a random NS box toward the apex B_rst just far enough; the
    result is still a vertex mixture, so it stays inside the polytope.
    """
    from .box import pr_box

    base = random_ns_box(rng, denominator)
    apex = pr_box(r, s, t)
    beta_base = beta(base, r, s, t)
    if beta_base >= 2:
        return base
    mu_min = (2 - beta_base) / (4 - beta_base)
    mu = mu_min + (1 - mu_min) * random_rational(rng, denominator)
    box = mix(mu, apex, base)
    assert beta(box, r, s, t) >= 2
    return box


def random_relabeling(rng: random.Random) -> RelabelingOp:
    return RelabelingOp(
        rng.randint(0, 1), rng.randint(0, 1), rng.randint(0, 1), rng.randint(0, 1), rng.randint(0, 1)
    )


def random_relabeling_mixture(
    rng: random.Random, size: int = 4, denominator: int = DEFAULT_DENOMINATOR
) -> RelabelingMixture:
    """Random locality-preserving channel: weighted mixture of relabelings."""
    ops = tuple(random_relabeling(rng) for _ in range(size))
    weights = tuple(rational_weights(rng, size, denominator))
    return RelabelingMixture(ops, weights)


def all_relabelings() -> tuple[RelabelingOp, ...]:
    """The 32 single relabelings (8 member ops for each of the 4 twirls)."""
    return tuple(
        RelabelingOp(d, g, th, r, s)
        for r, s in itertools.product((0, 1), repeat=2)
        for d, g, th in itertools.product((0, 1), repeat=3)
    )
