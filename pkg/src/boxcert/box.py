"""Multiparty conditional probability tables (boxes) with exact entries.

A box is a family of probability distributions P(a|x), one distribution
over output tuples ``a`` per input tuple ``x``.  Entries are stored flat
in canonical order: input tuples vary slowest (lexicographic), output
tuples fastest, so serialized tables are byte-stable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import prod

from .rational import as_fraction


class BoxError(Exception):
    """Base class for box construction and shape errors."""


class NegativeEntry(BoxError):
    def __init__(self, outputs, inputs, value):
        self.outputs, self.inputs, self.value = outputs, inputs, value
        super().__init__(f"negative entry P{outputs}|{inputs} = {value}")


class NotNormalized(BoxError):
    def __init__(self, inputs, actual_sum):
        self.inputs, self.actual_sum = inputs, actual_sum
        super().__init__(f"outputs at input {inputs} sum to {actual_sum}, expected 1")


class ShapeMismatch(BoxError):
    pass


class WeightOutOfRange(BoxError):
    pass


class WrongShape(BoxError):
    """Operation requires a two-party binary box."""


class MarginalIllDefined(BoxError):
    def __init__(self, cut, violations):
        self.cut, self.violations = cut, violations
        super().__init__(f"marginal ill-defined: box signals across cut {cut}")


@dataclass(frozen=True)
class Cut:
    """Bipartition of the parties into two non-empty disjoint sides."""

    left: frozenset[int]
    right: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "left", frozenset(self.left))
        object.__setattr__(self, "right", frozenset(self.right))
        if not self.left or not self.right:
            raise BoxError("cut sides must be non-empty")
        if self.left & self.right:
            raise BoxError("cut sides must be disjoint")

    def parties(self) -> frozenset[int]:
        return self.left | self.right

    def __str__(self):
        fmt = lambda side: ",".join(str(i) for i in sorted(side))
        return f"{{{fmt(self.left)}}}|{{{fmt(self.right)}}}"


@dataclass(frozen=True)
class NSViolation:
    """One failed marginal-independence check."""

    cut: Cut
    direction: str  # "to_left" / "to_right": which side's marginal moved
    inputs: tuple  # the pair of offending input tuples on the signalling side
    discrepancy: Fraction


@dataclass(frozen=True)
class NSReport:
    fully_ns: bool
    violations: tuple[NSViolation, ...]

    def __post_init__(self):
        if self.fully_ns != (len(self.violations) == 0):
            raise BoxError("fully_ns flag inconsistent with violation list")


@dataclass(frozen=True)
class Box:
    """Validated conditional probability table with Fraction entries."""

    input_arity: tuple[int, ...]
    output_arity: tuple[int, ...]
    probs: tuple[Fraction, ...]

    def __post_init__(self):
        ins, outs = tuple(self.input_arity), tuple(self.output_arity)
        object.__setattr__(self, "input_arity", ins)
        object.__setattr__(self, "output_arity", outs)
        if len(ins) != len(outs) or not ins:
            raise ShapeMismatch("input and output arity lists must be equal-length and non-empty")
        if any(k < 1 for k in ins) or any(k < 1 for k in outs):
            raise ShapeMismatch("arities must be positive")
        n_in, n_out = prod(ins), prod(outs)
        probs = tuple(self.probs)
        object.__setattr__(self, "probs", probs)
        if len(probs) != n_in * n_out:
            raise ShapeMismatch(
                f"table has {len(probs)} entries, expected {n_in * n_out}"
            )
        for x_rank, x in enumerate(itertools.product(*(range(k) for k in ins))):
            total = Fraction(0)
            base = x_rank * n_out
            for a_rank, a in enumerate(itertools.product(*(range(k) for k in outs))):
                p = probs[base + a_rank]
                if not isinstance(p, Fraction):
                    raise BoxError(f"entry P{a}|{x} is not a Fraction: {p!r}")
                if p < 0:
                    raise NegativeEntry(a, x, p)
                total += p
            if total != 1:
                raise NotNormalized(x, total)

    @property
    def party_count(self) -> int:
        return len(self.input_arity)

    @property
    def n_outputs(self) -> int:
        return prod(self.output_arity)

    def input_tuples(self):
        return itertools.product(*(range(k) for k in self.input_arity))

    def output_tuples(self):
        return itertools.product(*(range(k) for k in self.output_arity))

    def _rank(self, tup, arity) -> int:
        r = 0
        for v, k in zip(tup, arity):
            r = r * k + v
        return r

    def index(self, outputs, inputs) -> int:
        return self._rank(tuple(inputs), self.input_arity) * self.n_outputs + self._rank(
            tuple(outputs), self.output_arity
        )

    def prob(self, outputs, inputs) -> Fraction:
        """P(outputs | inputs)."""
        return self.probs[self.index(outputs, inputs)]

    def is_binary_bipartite(self) -> bool:
        return self.input_arity == (2, 2) and self.output_arity == (2, 2)


def make_box(party_count, input_arity, output_arity, entries) -> Box:
    """Build and validate a box.

    ``entries`` is either a flat sequence in canonical order or a mapping
    ``(output_tuple, input_tuple) -> value``; values may be Fractions,
    ints or 'num/den' strings.
    """
    ins, outs = tuple(input_arity), tuple(output_arity)
    if party_count != len(ins) or party_count != len(outs):
        raise ShapeMismatch(
            f"party_count {party_count} does not match arity lists of length "
            f"{len(ins)}/{len(outs)}"
        )
    n_in, n_out = prod(ins), prod(outs)
    if isinstance(entries, dict):
        flat = [Fraction(0)] * (n_in * n_out)
        for (a, x), value in entries.items():
            a, x = tuple(a), tuple(x)
            rank_x = 0
            for v, k in zip(x, ins):
                rank_x = rank_x * k + v
            rank_a = 0
            for v, k in zip(a, outs):
                rank_a = rank_a * k + v
            flat[rank_x * n_out + rank_a] = as_fraction(value)
        probs = tuple(flat)
    else:
        probs = tuple(as_fraction(v) for v in entries)
    return Box(ins, outs, probs)


def pr_box(r: int, s: int, t: int) -> Box:
    """The extremal box B_rst: P(a,b|x,y) = 1/2 iff a xor b = xy+rx+sy+t."""
    if any(bit not in (0, 1) for bit in (r, s, t)):
        raise BoxError("r, s, t must be bits")
    half = Fraction(1, 2)
    probs = []
    for x, y in itertools.product((0, 1), repeat=2):
        target = (x & y) ^ (r & x) ^ (s & y) ^ t
        for a, b in itertools.product((0, 1), repeat=2):
            probs.append(half if (a ^ b) == target else Fraction(0))
    return Box((2, 2), (2, 2), tuple(probs))


def deterministic_vertices() -> list[Box]:
    """All 16 two-party binary boxes with a = f(x), b = g(y).

    Ordered lexicographically by (f(0), f(1), g(0), g(1)).
    """
    boxes = []
    for f0, f1, g0, g1 in itertools.product((0, 1), repeat=4):
        f = (f0, f1)
        g = (g0, g1)
        probs = []
        for x, y in itertools.product((0, 1), repeat=2):
            for a, b in itertools.product((0, 1), repeat=2):
                probs.append(Fraction(1) if (a == f[x] and b == g[y]) else Fraction(0))
        boxes.append(Box((2, 2), (2, 2), tuple(probs)))
    return boxes


def uniform_box(party_count: int = 2) -> Box:
    """The maximally mixed binary box on ``party_count`` parties."""
    n_out = 2**party_count
    p = Fraction(1, n_out)
    probs = (p,) * (n_out * 2**party_count)
    return Box((2,) * party_count, (2,) * party_count, probs)


def mix(p, box_a: Box, box_b: Box) -> Box:
    """Entrywise convex combination p*A + (1-p)*B."""
    p = as_fraction(p)
    if not 0 <= p <= 1:
        raise WeightOutOfRange(f"mixing weight {p} outside [0, 1]")
    if (box_a.input_arity, box_a.output_arity) != (box_b.input_arity, box_b.output_arity):
        raise ShapeMismatch("cannot mix boxes of different shape")
    q = 1 - p
    probs = tuple(p * u + q * v for u, v in zip(box_a.probs, box_b.probs))
    return Box(box_a.input_arity, box_a.output_arity, probs)


def convex_combination(weights, boxes) -> Box:
    """Exact mixture sum(w_i * box_i); weights must sum to 1."""
    weights = [as_fraction(w) for w in weights]
    if len(weights) != len(boxes) or not boxes:
        raise ShapeMismatch("weights and boxes must align and be non-empty")
    if any(w < 0 for w in weights) or sum(weights) != 1:
        raise WeightOutOfRange("weights must be non-negative and sum to 1")
    shape = (boxes[0].input_arity, boxes[0].output_arity)
    if any((b.input_arity, b.output_arity) != shape for b in boxes):
        raise ShapeMismatch("cannot mix boxes of different shape")
    acc = [Fraction(0)] * len(boxes[0].probs)
    for w, b in zip(weights, boxes):
        if w == 0:
            continue
        for i, v in enumerate(b.probs):
            if v:
                acc[i] += w * v
    return Box(*shape, tuple(acc))


def b_alpha(alpha) -> Box:
    """Point on the line between B_000 and B_001 with weight alpha on B_000."""
    return mix(alpha, pr_box(0, 0, 0), pr_box(0, 0, 1))


def tensor(box_a: Box, box_b: Box) -> Box:
    """Product box on the concatenated party lists."""
    ins = box_a.input_arity + box_b.input_arity
    outs = box_a.output_arity + box_b.output_arity
    n_out_b = box_b.n_outputs
    probs = []
    for xa in box_a.input_tuples():
        for xb in box_b.input_tuples():
            for aa in box_a.output_tuples():
                pa = box_a.prob(aa, xa)
                if pa == 0:
                    probs.extend([Fraction(0)] * n_out_b)
                    continue
                for ab in box_b.output_tuples():
                    probs.append(pa * box_b.prob(ab, xb))
    return Box(ins, outs, tuple(probs))


def permute_parties(box: Box, new_order) -> Box:
    """Reorder parties; ``new_order[i]`` is the old index of new party i."""
    new_order = tuple(new_order)
    if sorted(new_order) != list(range(box.party_count)):
        raise ShapeMismatch(f"new_order {new_order} is not a permutation of the parties")
    ins = tuple(box.input_arity[j] for j in new_order)
    outs = tuple(box.output_arity[j] for j in new_order)
    inverse = [0] * len(new_order)
    for new_pos, old_pos in enumerate(new_order):
        inverse[old_pos] = new_pos
    probs = []
    for x_new in itertools.product(*(range(k) for k in ins)):
        x_old = tuple(x_new[inverse[j]] for j in range(box.party_count))
        for a_new in itertools.product(*(range(k) for k in outs)):
            a_old = tuple(a_new[inverse[j]] for j in range(box.party_count))
            probs.append(box.prob(a_old, x_old))
    return Box(ins, outs, tuple(probs))


def _one_sided_violations(box: Box, keep: tuple[int, ...]) -> list[NSViolation]:
    """Check that the marginal on ``keep`` ignores the other side's inputs."""
    keep = tuple(sorted(keep))
    rest = tuple(i for i in range(box.party_count) if i not in keep)
    cut = Cut(frozenset(keep), frozenset(rest))
    keep_in = [box.input_arity[i] for i in keep]
    keep_out = [box.output_arity[i] for i in keep]
    rest_in = [box.input_arity[i] for i in rest]
    rest_out = [box.output_arity[i] for i in rest]
    violations = []
    for a_keep in itertools.product(*(range(k) for k in keep_out)):
        for x_keep in itertools.product(*(range(k) for k in keep_in)):
            reference = None
            ref_inputs = None
            for x_rest in itertools.product(*(range(k) for k in rest_in)):
                x_full = [0] * box.party_count
                for i, v in zip(keep, x_keep):
                    x_full[i] = v
                for i, v in zip(rest, x_rest):
                    x_full[i] = v
                total = Fraction(0)
                for a_rest in itertools.product(*(range(k) for k in rest_out)):
                    a_full = [0] * box.party_count
                    for i, v in zip(keep, a_keep):
                        a_full[i] = v
                    for i, v in zip(rest, a_rest):
                        a_full[i] = v
                    total += box.prob(tuple(a_full), tuple(x_full))
                if reference is None:
                    reference, ref_inputs = total, x_rest
                elif total != reference:
                    violations.append(
                        NSViolation(cut, "to_left", (ref_inputs, x_rest), total - reference)
                    )
    return violations


def is_ns_in_cut(box: Box, cut: Cut) -> tuple[bool, list[NSViolation]]:
    """Both marginal-independence conditions for one cut, exactly."""
    if cut.parties() != frozenset(range(box.party_count)):
        raise ShapeMismatch(f"cut {cut} does not cover the box's parties")
    left = tuple(sorted(cut.left))
    right = tuple(sorted(cut.right))
    violations = [
        NSViolation(cut, "to_left", v.inputs, v.discrepancy)
        for v in _one_sided_violations(box, left)
    ]
    violations += [
        NSViolation(cut, "to_right", v.inputs, v.discrepancy)
        for v in _one_sided_violations(box, right)
    ]
    return (not violations), violations


def is_fully_ns(box: Box) -> NSReport:
    """Check every one-sided marginalization (all 2^n - 2 proper subsets)."""
    n = box.party_count
    violations: list[NSViolation] = []
    if n == 1:
        return NSReport(True, ())
    for mask in range(1, 2**n - 1):
        keep = tuple(i for i in range(n) if mask >> i & 1)
        violations.extend(_one_sided_violations(box, keep))
    return NSReport(not violations, tuple(violations))


def marginal(box: Box, keep) -> Box:
    """Marginal box on the ``keep`` parties.

    Requires the box to be non-signalling in the cut keep|rest (both
    directions); otherwise the marginal would depend on the discarded
    parties' inputs and MarginalIllDefined is raised.
    """
    keep = tuple(sorted(set(keep)))
    if not keep or any(i not in range(box.party_count) for i in keep):
        raise ShapeMismatch(f"keep set {keep} invalid for {box.party_count} parties")
    rest = tuple(i for i in range(box.party_count) if i not in keep)
    if not rest:
        return box
    cut = Cut(frozenset(keep), frozenset(rest))
    ok, violations = is_ns_in_cut(box, cut)
    if not ok:
        raise MarginalIllDefined(cut, violations)
    keep_in = tuple(box.input_arity[i] for i in keep)
    keep_out = tuple(box.output_arity[i] for i in keep)
    rest_out = [box.output_arity[i] for i in rest]
    probs = []
    for x_keep in itertools.product(*(range(k) for k in keep_in)):
        x_full = [0] * box.party_count
        for i, v in zip(keep, x_keep):
            x_full[i] = v
        for a_keep in itertools.product(*(range(k) for k in keep_out)):
            total = Fraction(0)
            for a_rest in itertools.product(*(range(k) for k in rest_out)):
                a_full = [0] * box.party_count
                for i, v in zip(keep, a_keep):
                    a_full[i] = v
                for i, v in zip(rest, a_rest):
                    a_full[i] = v
                total += box.prob(tuple(a_full), tuple(x_full))
            probs.append(total)
    return Box(keep_in, keep_out, tuple(probs))
