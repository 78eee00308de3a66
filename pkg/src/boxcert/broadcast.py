"""No-broadcasting certificates for the PR/anti-PR line.

A broadcast copy of b_alpha is a 4-party box (A, B, A', B') whose AB and
A'B' marginals both equal b_alpha.  Two oracles certify that none exists
for alpha above 3/4:

* ``projection_feasibility`` — the 2D argument: score each copy by the
  CHSH game indicator (C = +4 on success, -4 on failure), project onto
  the joint distribution of (C1, C2), and ask whether a local projection
  in the region S1 can dominate the scaled broadcast line S2.  The two
  sets meet only at (9/16, 3/16); dominance then forces the broadcast
  projection (3a/4, a/4, a/4, 1-5a/4), which is a valid distribution
  only for alpha <= 4/5.  The projected system is therefore infeasible
  (with an exact Farkas certificate) for alpha > 4/5 and admits the
  boundary witness for alpha in [3/4, 4/5]; it separates alpha = 3/4
  from the rest only above 4/5.
* ``full_broadcast_feasibility`` — the direct LP over full 4-party
  boxes: a fully-NS copy with both marginals b_alpha whose p_alpha
  mixture with some NS box X lands in the 576-vertex AA'|BB' local
  polytope.  Fully-NS boxes are parametrized by their subset correlators
  (normalization and no-signalling hold identically; positivity becomes
  the constraint rows), which keeps the exact tableau tractable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .box import Box, BoxError, is_fully_ns, marginal, b_alpha, uniform_box
from .polytope import anti_robustness
from .ratlp import Constraint, LinearProgram, LPOutcome, solve
from .rational import as_fraction
from .vertices import broadcast_local_vertices

F = Fraction


class RangeError(BoxError):
    pass


class WrongShape(BoxError):
    pass


@dataclass(frozen=True)
class JointDist:
    """Joint distribution of the two CHSH score signs (+4/-4 per copy)."""

    p11: Fraction
    p12: Fraction
    p21: Fraction
    p22: Fraction

    def __post_init__(self):
        values = (self.p11, self.p12, self.p21, self.p22)
        if any(v < 0 for v in values):
            raise RangeError("joint distribution has a negative component")
        if sum(values) != 1:
            raise RangeError("joint distribution must sum to 1")

    def as_tuple(self):
        return (self.p11, self.p12, self.p21, self.p22)


@dataclass(frozen=True)
class BroadcastInstance:
    alpha: Fraction

    def __post_init__(self):
        alpha = as_fraction(self.alpha)
        object.__setattr__(self, "alpha", alpha)
        if not F(3, 4) <= alpha <= 1:
            raise RangeError(f"alpha {alpha} outside [3/4, 1]")

    @property
    def p_alpha(self) -> Fraction:
        return F(3, 4) / self.alpha


@dataclass(frozen=True)
class FeasibilityVerdict:
    feasible: bool
    alpha: Fraction
    witness: dict | None
    farkas: dict | None
    lp: LinearProgram
    outcome: LPOutcome


def _require_broadcast_shape(box: Box) -> None:
    if box.input_arity != (2, 2, 2, 2) or box.output_arity != (2, 2, 2, 2):
        raise WrongShape("need a 4-party binary box (A, B, A', B')")


def c1c2_projection(box4: Box) -> JointDist:
    """Joint success/failure statistics of the per-copy CHSH games.

    Inputs are drawn uniformly and independently; copy 1 succeeds when
    a + b = x*y (mod 2), copy 2 when a' + b' = x'*y'.  The mean of C1
    equals beta_000 of the AB marginal.
    """
    _require_broadcast_shape(box4)
    report = is_fully_ns(box4)
    if not report.fully_ns:
        raise WrongShape("projection needs a fully non-signalling box")
    totals = {(1, 1): F(0), (1, 2): F(0), (2, 1): F(0), (2, 2): F(0)}
    weight = F(1, 16)
    for x, y, xp, yp in itertools.product((0, 1), repeat=4):
        for a, b, ap, bp in itertools.product((0, 1), repeat=4):
            p = box4.prob((a, b, ap, bp), (x, y, xp, yp))
            if p == 0:
                continue
            first = 1 if (a ^ b) == (x & y) else 2
            second = 1 if (ap ^ bp) == (xp & yp) else 2
            totals[(first, second)] += weight * p
    return JointDist(totals[(1, 1)], totals[(1, 2)], totals[(2, 1)], totals[(2, 2)])


def s1_check(p11, p12) -> bool:
    """The four locality inequalities on a symmetric projected distribution."""
    p11, p12 = as_fraction(p11), as_fraction(p12)
    return (
        0 <= 6 * p11 - 2 * p12
        and 2 * p11 - 6 * p12 <= 0
        and 0 <= 2 * p11 + 10 * p12 - 2
        and 6 * p11 + 14 * p12 - 6 <= 0
    )


def s2_point(instance: BroadcastInstance, t11) -> tuple[Fraction, Fraction]:
    """The scaled broadcast-line point (p_alpha*t11, 3/4 - p_alpha*t11)."""
    t11 = as_fraction(t11)
    if not 0 <= t11 <= instance.alpha:
        raise RangeError(f"t11 {t11} outside [0, {instance.alpha}]")
    scaled = instance.p_alpha * t11
    return scaled, F(3, 4) - scaled


def projection_lp(instance: BroadcastInstance) -> LinearProgram:
    alpha, p = instance.alpha, instance.p_alpha
    one_minus_p = 1 - p
    variables = [
        "L11", "L12", "L22",
        "B11", "B12", "B22",
        "X11", "X12", "X21", "X22",
    ]
    constraints = [
        Constraint({"L11": 1, "L12": 2, "L22": 1}, "=", 1, name="L-normalization"),
        Constraint({"B11": 1, "B12": 2, "B22": 1}, "=", 1, name="Bhat-normalization"),
        Constraint({"B11": 1, "B12": 1}, "=", alpha, name="Bhat-line"),
        Constraint(
            {"X11": 1, "X12": 1, "X21": 1, "X22": 1}, "=", 1, name="X-normalization"
        ),
        Constraint({"L11": 6, "L12": -2}, ">=", 0, name="s1-a"),
        Constraint({"L11": 2, "L12": -6}, "<=", 0, name="s1-b"),
        Constraint({"L11": 2, "L12": 10}, ">=", 2, name="s1-c"),
        Constraint({"L11": 6, "L12": 14}, "<=", 6, name="s1-d"),
        Constraint(
            {"L11": 1, "B11": -p, "X11": -one_minus_p}, "=", 0, name="link-11"
        ),
        Constraint(
            {"L12": 1, "B12": -p, "X12": -one_minus_p}, "=", 0, name="link-12"
        ),
        Constraint(
            {"L12": 1, "B12": -p, "X21": -one_minus_p}, "=", 0, name="link-21"
        ),
        Constraint(
            {"L22": 1, "B22": -p, "X22": -one_minus_p}, "=", 0, name="link-22"
        ),
    ]
    return LinearProgram(
        variables=variables,
        constraints=constraints,
        lower={v: F(0) for v in variables},
    )


def projection_feasibility(instance: BroadcastInstance) -> FeasibilityVerdict:
    """Exact feasibility of the projected broadcast system (fast certificate)."""
    lp = projection_lp(instance)
    outcome = solve(lp)
    if outcome.status == "optimal":
        w = outcome.witness
        witness = {
            "local": JointDist(w["L11"], w["L12"], w["L12"], w["L22"]),
            "broadcast": JointDist(w["B11"], w["B12"], w["B12"], w["B22"]),
            "admixture": JointDist(w["X11"], w["X12"], w["X21"], w["X22"]),
        }
        p = instance.p_alpha
        for lv, bv, xv in zip(
            witness["local"].as_tuple(),
            witness["broadcast"].as_tuple(),
            witness["admixture"].as_tuple(),
        ):
            assert lv - p * bv == (1 - p) * xv
        return FeasibilityVerdict(True, instance.alpha, witness, None, lp, outcome)
    return FeasibilityVerdict(False, instance.alpha, None, outcome.farkas, lp, outcome)


# ---------------------------------------------------------------------------
# Full 4-party oracle.
# ---------------------------------------------------------------------------

PARTIES = (0, 1, 2, 3)  # A, B, A', B'
_SUBSETS = tuple(
    tuple(i for i in PARTIES if mask >> i & 1) for mask in range(1, 16)
)
_WITHIN_COPY = tuple(
    S for S in _SUBSETS if set(S) <= {0, 1} or set(S) <= {2, 3}
)
_CROSS_COPY = tuple(S for S in _SUBSETS if S not in _WITHIN_COPY)


def subset_correlator(box: Box, parties: tuple[int, ...], inputs: tuple[int, ...]) -> Fraction:
    """E_S(x_S) = sum_a P(a|x) * prod_{i in S} (-1)^{a_i}; needs NS to drop x_{S^c}."""
    x_full = [0] * box.party_count
    for i, v in zip(parties, inputs):
        x_full[i] = v
    total = F(0)
    for a in box.output_tuples():
        sign = 1
        for i in parties:
            if a[i]:
                sign = -sign
        total += sign * box.prob(a, tuple(x_full))
    return total


def box_from_correlators(values: dict[tuple[tuple[int, ...], tuple[int, ...]], Fraction]) -> Box:
    """Rebuild the 4-party table from all 80 subset correlators."""
    probs = []
    for x in itertools.product((0, 1), repeat=4):
        for a in itertools.product((0, 1), repeat=4):
            total = F(1)
            for S in _SUBSETS:
                sign = 1
                for i in S:
                    if a[i]:
                        sign = -sign
                total += sign * values[(S, tuple(x[i] for i in S))]
            probs.append(total / 16)
    return Box((2, 2, 2, 2), (2, 2, 2, 2), tuple(probs))


def _swap(t: tuple) -> tuple:
    """Exchange the two copies: (A, B, A', B') -> (A', B', A, B)."""
    return (t[2], t[3], t[0], t[1])


def _swap_vertex_name(name: str) -> str:
    """Image of an extremal 2x2 box under exchanging its two systems."""
    if name.startswith("det_"):
        _, f, g = name.split("_")
        return f"det_{g}_{f}"
    r, s, t = name[3:]
    return f"pr_{s}{r}{t}"


def _swap_product_name(name: str) -> str:
    alice, bob = name.split("*")
    return f"{_swap_vertex_name(alice)}*{_swap_vertex_name(bob)}"


def _swap_eslot(S: tuple[int, ...], x_s: tuple[int, ...]) -> tuple:
    swapped = {(2, 3, 0, 1)[i]: v for i, v in zip(S, x_s)}
    new_s = tuple(sorted(swapped))
    return new_s, tuple(swapped[i] for i in new_s)


def _evar(S: tuple[int, ...], x_s: tuple[int, ...]) -> str:
    return "e:%s:%s" % ("".join(map(str, S)), "".join(map(str, x_s)))


def _eslot_orbit(S: tuple[int, ...], x_s: tuple[int, ...]) -> tuple:
    return min((S, x_s), _swap_eslot(S, x_s))


def _fixed_marginal_correlators(alpha: Fraction) -> dict:
    """Within-copy correlators forced by both marginals being b_alpha."""
    line_box = b_alpha(alpha)
    fixed = {}
    for S in _WITHIN_COPY:
        reference = tuple(i % 2 for i in S)  # party index inside the 2x2 copy
        for x_s in itertools.product((0, 1), repeat=len(S)):
            fixed[(S, x_s)] = subset_correlator(line_box, reference, x_s)
    return fixed


def _vertex_orbits() -> tuple[tuple[str, tuple[str, ...]], ...]:
    """Copy-swap orbits of the 576 product vertices, keyed by representative."""
    orbits: dict[str, tuple[str, ...]] = {}
    for name, _ in broadcast_local_vertices():
        partner = _swap_product_name(name)
        rep = min(name, partner)
        orbits.setdefault(rep, (rep,) if partner == name else (rep, max(name, partner)))
    return tuple(sorted(orbits.items()))


def full_broadcast_lp(instance: BroadcastInstance) -> LinearProgram:
    """Correlator-form LP for L = p_alpha*Bhat + (1-p_alpha)*X with L local.

    Bhat's within-copy correlators are fixed by the marginal conditions;
    its cross-copy correlators are free variables.  X is eliminated: the
    rows state entrywise 16*sum(w_i v_i) >= p_alpha*(16*Bhat) together
    with Bhat >= 0 entrywise, and X = (L - p_alpha*Bhat)/(1 - p_alpha)
    is automatically normalized and fully NS.

    The whole system is invariant under exchanging the two copies, and
    averaging any solution with its swap gives a symmetric one, so the
    LP is built over swap orbits: one weight per vertex orbit, one
    correlator per slot orbit, one row per cell orbit.  This loses no
    feasibility and shrinks the exact tableau severalfold.
    """
    p = instance.p_alpha
    fixed = _fixed_marginal_correlators(instance.alpha)
    lookup = dict(broadcast_local_vertices())
    orbits = _vertex_orbits()
    w_vars = [f"w:{rep}" for rep, _ in orbits]
    e_reps = sorted(
        {
            _eslot_orbit(S, x_s)
            for S in _CROSS_COPY
            for x_s in itertools.product((0, 1), repeat=len(S))
        }
    )
    e_vars = [_evar(S, x_s) for S, x_s in e_reps]
    constraints = [
        Constraint(
            {f"w:{rep}": F(len(members)) for rep, members in orbits},
            "=",
            1,
            name="normalization",
        )
    ]
    seen_cells = set()
    for x in itertools.product((0, 1), repeat=4):
        for a in itertools.product((0, 1), repeat=4):
            rep_cell = min((a, x), (_swap(a), _swap(x)))
            if rep_cell in seen_cells:
                continue
            seen_cells.add(rep_cell)
            a, x = rep_cell
            cell = "%s|%s" % ("".join(map(str, a)), "".join(map(str, x)))
            fixed_part = F(1)
            e_coeffs: dict[str, Fraction] = {}
            for S in _SUBSETS:
                sign = 1
                for i in S:
                    if a[i]:
                        sign = -sign
                x_s = tuple(x[i] for i in S)
                if S in _WITHIN_COPY:
                    fixed_part += sign * fixed[(S, x_s)]
                else:
                    var = _evar(*_eslot_orbit(S, x_s))
                    e_coeffs[var] = e_coeffs.get(var, F(0)) + sign
            # 16*Bhat(a|x) = fixed_part + sum(e_coeffs * e) >= 0
            constraints.append(
                Constraint(e_coeffs, ">=", -fixed_part, name=f"bhat-pos:{cell}")
            )
            # 16*L(a|x) - p*16*Bhat(a|x) >= 0  with L = sum(w_i v_i)
            coeffs: dict[str, Fraction] = {}
            for rep, members in orbits:
                value = sum((lookup[m].prob(a, x) for m in members), F(0))
                if value:
                    coeffs[f"w:{rep}"] = 16 * value
            for var, sign in e_coeffs.items():
                scaled = -p * sign
                if scaled:
                    coeffs[var] = coeffs.get(var, F(0)) + scaled
            constraints.append(
                Constraint(coeffs, ">=", p * fixed_part, name=f"x-pos:{cell}")
            )
    return LinearProgram(
        variables=w_vars + e_vars,
        constraints=constraints,
        lower={v: F(0) for v in w_vars},
    )


def full_broadcast_feasibility(instance: BroadcastInstance) -> FeasibilityVerdict:
    """Direct 4-party oracle (heavy path; opt-in from the CLI)."""
    lp = full_broadcast_lp(instance)
    outcome = solve(lp)
    if outcome.status != "optimal":
        return FeasibilityVerdict(
            False, instance.alpha, None, outcome.farkas, lp, outcome
        )
    p = instance.p_alpha
    fixed = _fixed_marginal_correlators(instance.alpha)
    correlators = dict(fixed)
    for S in _CROSS_COPY:
        for x_s in itertools.product((0, 1), repeat=len(S)):
            correlators[(S, x_s)] = outcome.witness[_evar(*_eslot_orbit(S, x_s))]
    bhat = box_from_correlators(correlators)
    weights = {}
    for rep, members in _vertex_orbits():
        value = outcome.witness[f"w:{rep}"]
        if value:
            for member in members:
                weights[member] = value
    from .box import convex_combination

    local = convex_combination(
        list(weights.values()),
        [dict(broadcast_local_vertices())[name] for name in weights],
    )
    if p == 1:
        admixture = uniform_box(4)
    else:
        admixture = Box(
            (2, 2, 2, 2),
            (2, 2, 2, 2),
            tuple(
                (lv - p * bv) / (1 - p) for lv, bv in zip(local.probs, bhat.probs)
            ),
        )
    line_box = b_alpha(instance.alpha)
    assert marginal(bhat, {0, 1}) == line_box
    assert marginal(bhat, {2, 3}) == line_box
    assert is_fully_ns(bhat).fully_ns
    assert is_fully_ns(admixture).fully_ns
    for lv, bv, xv in zip(local.probs, bhat.probs, admixture.probs):
        assert lv == p * bv + (1 - p) * xv
    witness = {
        "broadcast_copy": bhat,
        "local": local,
        "admixture": admixture,
        "weights": weights,
    }
    return FeasibilityVerdict(True, instance.alpha, witness, None, lp, outcome)


@dataclass(frozen=True)
class ScanRow:
    alpha: Fraction
    p_alpha: Fraction
    projection: FeasibilityVerdict
    full: FeasibilityVerdict | None
    anti_robustness: Fraction


SEPARATION_THRESHOLD = F(4, 5)


@dataclass(frozen=True)
class ScanRowStatus:
    certified: bool
    note: str


def classify_row(alpha: Fraction, projection_feasible: bool, full_feasible: bool | None) -> ScanRowStatus:
    """What a scan row establishes about broadcasting the line box.

    At alpha = 3/4 the box is local and the mixing system must be
    feasible.  Above 4/5 infeasibility (projected or full) certifies
    no-broadcasting.  Inside (3/4, 4/5] the mixing system is genuinely
    feasible — the obstruction argument cannot certify anything there,
    whichever oracle runs.
    """
    if alpha == F(3, 4):
        ok = projection_feasible and full_feasible in (None, True)
        return ScanRowStatus(ok, "local box, mixing system feasible" if ok else "unexpected infeasibility")
    if alpha > SEPARATION_THRESHOLD:
        ok = not projection_feasible and full_feasible in (None, False)
        return ScanRowStatus(
            ok,
            "no-broadcasting certified" if ok else "unexpected feasibility",
        )
    return ScanRowStatus(
        False,
        "inside (3/4, 4/5] the mixing system is feasible, so this argument "
        "cannot certify no-broadcasting here",
    )


@dataclass(frozen=True)
class ScanReport:
    rows: tuple[ScanRow, ...]

    def consistent_with_no_broadcasting(self) -> bool:
        """True when no row contradicts the expected oracle behavior.

        Rows inside (3/4, 4/5] are expected to be feasible (they cannot
        certify either way); rows at 3/4 must be feasible and rows above
        4/5 infeasible.
        """
        for row in self.rows:
            if row.alpha == F(3, 4):
                expected = True
            elif row.alpha > SEPARATION_THRESHOLD:
                expected = False
            else:
                expected = True  # feasible boundary witness exists in the window
            if row.projection.feasible != expected:
                return False
            if row.full is not None and row.full.feasible != expected:
                return False
        return True


def broadcast_scan(alphas, include_full: bool = False) -> ScanReport:
    """Per-alpha verdicts plus anti-robustness values, ordered by alpha."""
    rows = []
    for alpha in sorted(as_fraction(a) for a in alphas):
        instance = BroadcastInstance(alpha)
        projection = projection_feasibility(instance)
        full = full_broadcast_feasibility(instance) if include_full else None
        value = anti_robustness(b_alpha(alpha)).value
        rows.append(ScanRow(alpha, instance.p_alpha, projection, full, value))
    return ScanReport(tuple(rows))
