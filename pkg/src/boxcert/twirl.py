"""Relabeling symmetries, the four twirling channels, and line decomposition.

A relabeling flips inputs by (delta, gamma) and XORs input-dependent
corrections onto the outputs; the twirl tau_rs averages the 8 relabelings
over (delta, gamma, theta).  The twirl projects every 2x2 box onto the
line p*B_rs0 + (1-p)*B_rs1 while preserving beta_rst.

Convention: a relabeling acts as the pushforward of the event map
(a,b,x,y) -> (a + gamma*x + delta*gamma + theta + s*gamma,
              b + delta*y + theta + r*delta,  x + delta,  y + gamma)
written on pre-flip inputs; equivalently, on the transformed box,

    Q(a,b|x,y) = P(a + gamma*x + theta + s*gamma,
                   b + delta*y + delta*gamma + theta + r*delta
                   | x + delta, y + gamma)        (all sums mod 2).

This is the reading that fixes every B_rst and B_rs(1-t) member-wise;
the two members with delta = gamma = 1 square to the flip-both-outputs
relabeling rather than the identity, so ops are invertible but not all
involutive (see ``RelabelingOp.inverse``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .box import Box, WrongShape, pr_box
from .rational import as_fraction


def _require_2x2(box: Box) -> None:
    if not box.is_binary_bipartite():
        raise WrongShape(
            f"need a 2-party binary box, got arities {box.input_arity}/{box.output_arity}"
        )


@dataclass(frozen=True)
class RelabelingOp:
    """One deterministic input/output bit-flip symmetry."""

    delta: int
    gamma: int
    theta: int
    r: int
    s: int

    def __post_init__(self):
        for bit in (self.delta, self.gamma, self.theta, self.r, self.s):
            if bit not in (0, 1):
                raise WrongShape("relabeling parameters must be bits")

    def source_event(self, a: int, b: int, x: int, y: int) -> tuple[int, int, int, int]:
        """The (a,b,x,y) of the original box that feeds cell (a,b,x,y) of the image."""
        d, g, th, r, s = self.delta, self.gamma, self.theta, self.r, self.s
        a0 = a ^ (g & x) ^ th ^ (s & g)
        b0 = b ^ (d & y) ^ (d & g) ^ th ^ (r & d)
        return a0, b0, x ^ d, y ^ g

    def inverse(self) -> "RelabelingOp":
        """The member undoing this one: theta picks up delta*gamma."""
        return RelabelingOp(
            self.delta, self.gamma, self.theta ^ (self.delta & self.gamma), self.r, self.s
        )


def apply_relabeling(op: RelabelingOp, box: Box) -> Box:
    _require_2x2(box)
    probs = []
    for x, y in itertools.product((0, 1), repeat=2):
        for a, b in itertools.product((0, 1), repeat=2):
            a0, b0, x0, y0 = op.source_event(a, b, x, y)
            probs.append(box.prob((a0, b0), (x0, y0)))
    return Box((2, 2), (2, 2), tuple(probs))


@dataclass(frozen=True)
class TwirlChannel:
    """Uniform mixture of the 8 relabelings over (delta, gamma, theta)."""

    r: int
    s: int

    @property
    def members(self) -> tuple[RelabelingOp, ...]:
        return tuple(
            RelabelingOp(d, g, th, self.r, self.s)
            for d, g, th in itertools.product((0, 1), repeat=3)
        )

    def apply(self, box: Box) -> Box:
        _require_2x2(box)
        acc = [Fraction(0)] * 16
        for op in self.members:
            image = apply_relabeling(op, box)
            for i, v in enumerate(image.probs):
                acc[i] += v
        eighth = Fraction(1, 8)
        return Box((2, 2), (2, 2), tuple(v * eighth for v in acc))


def twirl(box: Box, r: int, s: int) -> Box:
    """tau_rs(box): lands on the B_rs0 -- B_rs1 line, preserving beta_rst."""
    return TwirlChannel(r, s).apply(box)


def line_decomposition(box: Box, r: int, s: int) -> Fraction | None:
    """Weight p with box = p*B_rs0 + (1-p)*B_rs1 exactly, or None if off the line."""
    _require_2x2(box)
    p = None
    for x, y in itertools.product((0, 1), repeat=2):
        target = (x & y) ^ (r & x) ^ (s & y)  # t = 0 correlation condition
        for a, b in itertools.product((0, 1), repeat=2):
            value = box.prob((a, b), (x, y))
            if (a ^ b) == target:
                if p is None:
                    p = 2 * value
                elif 2 * value != p:
                    return None
            else:
                if p is not None and 2 * value != 1 - p:
                    return None
                if p is None:
                    p = 1 - 2 * value
    return p


@dataclass(frozen=True)
class RelabelingMixture:
    """A locality-preserving channel given as a finite mixture of relabelings."""

    ops: tuple[RelabelingOp, ...]
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.ops) != len(self.weights) or not self.ops:
            raise WrongShape("ops and weights must align and be non-empty")
        if any(w < 0 for w in self.weights) or sum(self.weights) != 1:
            raise WrongShape("weights must be non-negative and sum to 1")

    def apply(self, box: Box) -> Box:
        _require_2x2(box)
        acc = [Fraction(0)] * 16
        for w, op in zip(self.weights, self.ops):
            if w == 0:
                continue
            image = apply_relabeling(op, box)
            for i, v in enumerate(image.probs):
                acc[i] += w * v
        return Box((2, 2), (2, 2), tuple(acc))


def line_transport(box: Box, r: int, s: int, t: int) -> Box:
    """Local deterministic relabeling a -> a + r*x, b -> b + s*y + t.

    Carries B_000 to B_rst and B_001 to B_rs(1-t), hence the whole
    B_000--B_001 line onto the B_rst--B_rs(1-t) line.
    """
    _require_2x2(box)
    probs = []
    for x, y in itertools.product((0, 1), repeat=2):
        for a, b in itertools.product((0, 1), repeat=2):
            probs.append(box.prob((a ^ (r & x), b ^ (s & y) ^ t), (x, y)))
    return Box((2, 2), (2, 2), tuple(probs))


def pr_line_point(r: int, s: int, p) -> Box:
    """The box p*B_rs0 + (1-p)*B_rs1."""
    p = as_fraction(p)
    from .box import mix

    return mix(p, pr_box(r, s, 0), pr_box(r, s, 1))
