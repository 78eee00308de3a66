"""CHSH correlators and the eight functionals beta_rst on 2x2 boxes.

beta_rst(P) = (-1)^t <00> + (-1)^(s+t) <01> + (-1)^(r+t) <10>
              + (-1)^(r+s+t+1) <11>,   <ij> = P(a=b|ij) - P(a!=b|ij).

|beta_rst| <= 2 for all eight (r,s,t) is a complete description of the
local polytope for two parties with binary inputs and outputs — and for
that shape only, so ``beta_table`` refuses anything else.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .box import Box, WrongShape


@dataclass(frozen=True)
class CHSHValue:
    r: int
    s: int
    t: int
    value: Fraction


def _require_2x2(box: Box) -> None:
    if not box.is_binary_bipartite():
        raise WrongShape(
            f"need a 2-party binary box, got arities {box.input_arity}/{box.output_arity}"
        )


def correlator(box: Box, i: int, j: int) -> Fraction:
    """<ij> = P(a=b|x=i,y=j) - P(a!=b|x=i,y=j)."""
    _require_2x2(box)
    value = Fraction(0)
    for a, b in itertools.product((0, 1), repeat=2):
        p = box.prob((a, b), (i, j))
        value += p if a == b else -p
    return value


def beta_signs(r: int, s: int, t: int) -> dict[tuple[int, int], int]:
    """Sign of each correlator term in beta_rst."""
    return {
        (0, 0): (-1) ** t,
        (0, 1): (-1) ** (s + t),
        (1, 0): (-1) ** (r + t),
        (1, 1): (-1) ** (r + s + t + 1),
    }


def beta(box: Box, r: int, s: int, t: int) -> Fraction:
    """The CHSH quantity beta_rst of a 2x2 box."""
    _require_2x2(box)
    signs = beta_signs(r, s, t)
    return sum(
        (signs[(i, j)] * correlator(box, i, j) for i, j in signs), Fraction(0)
    )


def beta_cell_coefficients(r: int, s: int, t: int) -> dict[tuple, Fraction]:
    """beta_rst as a functional on table cells: beta(P) = sum c[a,b,x,y] P(ab|xy)."""
    signs = beta_signs(r, s, t)
    coeffs = {}
    for x, y in itertools.product((0, 1), repeat=2):
        for a, b in itertools.product((0, 1), repeat=2):
            coeffs[(a, b, x, y)] = Fraction(signs[(x, y)] * (1 if a == b else -1))
    return coeffs


def beta_table(box: Box) -> tuple[list[CHSHValue], bool]:
    """All 8 CHSH values plus a locality flag (all within [-2, 2])."""
    _require_2x2(box)
    values = [
        CHSHValue(r, s, t, beta(box, r, s, t))
        for r, s, t in itertools.product((0, 1), repeat=3)
    ]
    local = all(-2 <= v.value <= 2 for v in values)
    return values, local


def max_beta(box: Box) -> tuple[tuple[int, int, int], Fraction]:
    """Largest beta value and the lexicographically smallest triple attaining it."""
    values, _ = beta_table(box)
    best = max(v.value for v in values)
    for v in values:
        if v.value == best:
            return (v.r, v.s, v.t), best
    raise AssertionError("unreachable")
