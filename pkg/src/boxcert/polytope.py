"""Locality membership, anti-robustness, and hyperplane/cone geometry.

Everything here reduces to exact LPs over named vertex sets:

* 2x2 locality = membership in the convex hull of the 16 deterministic
  vertices; the 4-party AA'|BB' cut uses the 576 products of extremal
  fully-NS boxes on each side.
* anti-robustness(A) = max q such that q*A + (1-q)*X is local for some
  NS box X; linearized as max q with sum(w_i v_i) - q*A >= 0 entrywise
  and sum(w_i) = 1 (the admixture (1-q)*X is the slack of those rows,
  and is automatically non-signalling and correctly normalized).
* the beta_rst = 2 hyperplane meets each segment [B_rst, vertex] in one
  ray point; all 184 ray points are local, and sampled two-sided checks
  certify that the beta >= 2 part of the NS polytope is exactly the hull
  of the apex and its 23 ray points.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .box import Box, BoxError, Cut, convex_combination, is_fully_ns, mix, uniform_box
from .chsh import CHSHValue, beta, beta_table, max_beta
from .ratlp import Constraint, LinearProgram, LPOutcome, solve
from .sampling import (
    random_ns_box_with_min_beta,
    rational_weights,
    rng_from_seed,
)
from .vertices import broadcast_local_vertices, ns_vertices_2x2

F = Fraction

BROADCAST_CUT = Cut(frozenset({0, 2}), frozenset({1, 3}))


class UnsupportedShape(BoxError):
    pass


class PreconditionNotMet(BoxError):
    pass


class DegenerateRay(BoxError):
    pass


def _cell_name(outputs, inputs) -> str:
    return "cell:%s|%s" % (
        "".join(map(str, outputs)),
        "".join(map(str, inputs)),
    )


def _local_vertex_set(box: Box, cut: Cut | None) -> tuple[tuple[str, Box], ...]:
    if box.is_binary_bipartite():
        if cut is not None and cut != Cut(frozenset({0}), frozenset({1})):
            raise UnsupportedShape(f"unsupported cut {cut} for a 2-party box")
        return tuple(ns_vertices_2x2()[:16])
    if box.input_arity == (2, 2, 2, 2) and box.output_arity == (2, 2, 2, 2):
        if cut is None or cut != BROADCAST_CUT:
            raise UnsupportedShape(
                "4-party membership needs the AA'|BB' cut declared "
                f"(parties {{0,2}}|{{1,3}}), got {cut}"
            )
        return broadcast_local_vertices()
    raise UnsupportedShape(
        f"no local polytope description for arities {box.input_arity}/{box.output_arity}"
    )


def membership_lp(box: Box, points: tuple[tuple[str, Box], ...]) -> LinearProgram:
    """Feasibility LP: box = sum of weights over ``points``, weights on the simplex."""
    var_of = {name: f"w:{name}" for name, _ in points}
    constraints = []
    for x in box.input_tuples():
        for a in box.output_tuples():
            coeffs = {}
            for name, vert in points:
                value = vert.prob(a, x)
                if value:
                    coeffs[var_of[name]] = value
            constraints.append(
                Constraint(coeffs, "=", box.prob(a, x), name=_cell_name(a, x))
            )
    constraints.append(
        Constraint({v: F(1) for v in var_of.values()}, "=", F(1), name="normalization")
    )
    return LinearProgram(
        variables=list(var_of.values()),
        constraints=constraints,
        lower={v: F(0) for v in var_of.values()},
    )


@dataclass(frozen=True)
class MembershipCertificate:
    member: bool
    weights: dict[str, Fraction] | None
    farkas: dict[tuple, Fraction] | None
    violated_facets: tuple[CHSHValue, ...]
    lp: LinearProgram
    outcome: LPOutcome

    def separating_functional(self) -> tuple[dict[str, Fraction], Fraction] | None:
        """(cell -> coefficient, threshold) with f(box) > threshold >= f(vertex)."""
        if self.member or self.farkas is None:
            return None
        functional: dict[str, Fraction] = {}
        threshold = F(0)
        for key, y in self.farkas.items():
            if key[0] != "con":
                continue
            con = self.lp.constraints[key[1]]
            if con.name == "normalization":
                threshold += y
            else:
                functional[con.name] = functional.get(con.name, F(0)) - y
        return functional, threshold


def lr_membership(box: Box, cut: Cut | None = None) -> MembershipCertificate:
    """Exact LP membership in the local polytope, with certificate."""
    points = _local_vertex_set(box, cut)
    lp = membership_lp(box, points)
    outcome = solve(lp)
    if outcome.status == "optimal":
        weights = {
            name: outcome.witness[f"w:{name}"]
            for name, _ in points
            if outcome.witness[f"w:{name}"] != 0
        }
        return MembershipCertificate(True, weights, None, (), lp, outcome)
    facets: tuple[CHSHValue, ...] = ()
    if box.is_binary_bipartite():
        values, _ = beta_table(box)
        facets = tuple(v for v in values if v.value > 2)
    return MembershipCertificate(False, None, outcome.farkas, facets, lp, outcome)


@dataclass(frozen=True)
class AntiRobustnessResult:
    value: Fraction
    local_witness: Box
    admixture_witness: Box
    weights: dict[str, Fraction]
    lp: LinearProgram
    outcome: LPOutcome


def anti_robustness_lp(box: Box, points: tuple[tuple[str, Box], ...]) -> LinearProgram:
    var_of = {name: f"w:{name}" for name, _ in points}
    constraints = []
    for x in box.input_tuples():
        for a in box.output_tuples():
            coeffs = {}
            for name, vert in points:
                value = vert.prob(a, x)
                if value:
                    coeffs[var_of[name]] = value
            target = box.prob(a, x)
            if target:
                coeffs["q"] = -target
            constraints.append(Constraint(coeffs, ">=", F(0), name=_cell_name(a, x)))
    constraints.append(
        Constraint({v: F(1) for v in var_of.values()}, "=", F(1), name="normalization")
    )
    lower = {v: F(0) for v in var_of.values()}
    lower["q"] = F(0)
    return LinearProgram(
        variables=["q"] + list(var_of.values()),
        constraints=constraints,
        objective={"q": F(1)},
        sense="max",
        lower=lower,
    )


def anti_robustness(box: Box, cut: Cut | None = None) -> AntiRobustnessResult:
    """Largest q with q*box + (1-q)*X local for some NS box X.

    The witness L = q*box + (1-q)*X is returned together with X and the
    convex weights certifying L's membership.  For local boxes q = 1 and
    X is reported as the maximally mixed box.
    """
    report = is_fully_ns(box)
    if not report.fully_ns:
        raise UnsupportedShape("anti-robustness needs a fully non-signalling box")
    points = _local_vertex_set(box, cut)
    lp = anti_robustness_lp(box, points)
    outcome = solve(lp)
    if outcome.status != "optimal":
        raise RuntimeError(f"anti-robustness LP ended {outcome.status}")
    q = outcome.witness["q"]
    weights = {
        name: outcome.witness[f"w:{name}"]
        for name, _ in points
        if outcome.witness[f"w:{name}"] != 0
    }
    local_witness = convex_combination(
        list(weights.values()), [dict(points)[name] for name in weights]
    )
    if q == 1:
        admixture = uniform_box(box.party_count)
    else:
        shape = (box.input_arity, box.output_arity)
        admixture_probs = tuple(
            (lw - q * bw) / (1 - q) for lw, bw in zip(local_witness.probs, box.probs)
        )
        admixture = Box(*shape, admixture_probs)
    return AntiRobustnessResult(q, local_witness, admixture, weights, lp, outcome)


def anti_robustness_closed_form(box: Box) -> Fraction:
    """6 / (beta* + 4) where beta* is the largest CHSH value, valid for beta* >= 2.

    Along any admixture X the local mixing weight is capped by
    (2 - beta(X)) / (beta* - beta(X)), increasing as beta(X) falls, so the
    optimum sits at beta(X) = -4.
    """
    if not box.is_binary_bipartite():
        raise UnsupportedShape("closed form defined for 2-party binary boxes")
    _, best = max_beta(box)
    if best < 2:
        raise PreconditionNotMet(f"max beta {best} < 2")
    return F(6) / (best + 4)


@dataclass(frozen=True)
class RayPoint:
    apex: tuple[int, int, int]
    vertex_name: str
    p: Fraction
    point: Box


def ray_intersection(r: int, s: int, t: int, vertex: Box) -> RayPoint:
    """Unique point of [B_rst, vertex] on the beta_rst = 2 hyperplane."""
    from .box import pr_box

    apex = pr_box(r, s, t)
    name = None
    for known, candidate in ns_vertices_2x2():
        if candidate == vertex:
            name = known
            break
    if name is None:
        raise UnsupportedShape("vertex is not one of the 24 extremal NS points")
    beta_v = beta(vertex, r, s, t)
    if beta_v == 4:
        raise DegenerateRay("vertex lies on the apex level set beta = 4")
    p = (2 - beta_v) / (4 - beta_v)
    point = mix(p, apex, vertex)
    assert beta(point, r, s, t) == 2
    return RayPoint((r, s, t), name, p, point)


@dataclass(frozen=True)
class RayPointCheck:
    ray: RayPoint
    betas: tuple[CHSHValue, ...]
    within_all_facets: bool
    membership: MembershipCertificate


@dataclass(frozen=True)
class HyperplaneReport:
    apex: tuple[int, int, int]
    checks: tuple[RayPointCheck, ...]
    all_pass: bool


def hyperplane_locality_check(r: int, s: int, t: int) -> HyperplaneReport:
    """All 23 ray points of apex B_rst satisfy all CHSH facets and are local."""
    apex_name = f"pr_{r}{s}{t}"
    checks = []
    for name, vertex in ns_vertices_2x2():
        if name == apex_name:
            continue
        ray = ray_intersection(r, s, t, vertex)
        values, local_flag = beta_table(ray.point)
        membership = lr_membership(ray.point)
        checks.append(RayPointCheck(ray, tuple(values), local_flag, membership))
    all_pass = all(c.within_all_facets and c.membership.member for c in checks)
    return HyperplaneReport((r, s, t), tuple(checks), all_pass)


def ray_points(r: int, s: int, t: int) -> tuple[tuple[str, Box], ...]:
    """Apex plus its 23 hyperplane ray points, the candidate hull of beta >= 2."""
    from .box import pr_box

    apex_name = f"pr_{r}{s}{t}"
    points = [(apex_name, pr_box(r, s, t))]
    for name, vertex in ns_vertices_2x2():
        if name == apex_name:
            continue
        points.append((f"ray:{name}", ray_intersection(r, s, t, vertex).point))
    return tuple(points)


@dataclass(frozen=True)
class HalfspaceSample:
    index: int
    ok: bool
    detail: str


@dataclass(frozen=True)
class HalfspaceReport:
    apex: tuple[int, int, int]
    samples: int
    seed: int
    hull_weights: tuple[tuple[Fraction, ...], ...]
    half_decompositions: tuple[dict[str, Fraction], ...]
    hull_side_failures: tuple[HalfspaceSample, ...]
    halfspace_side_failures: tuple[HalfspaceSample, ...]
    all_pass: bool


def halfspace_body_equality_check(
    r: int, s: int, t: int, samples: int = 500, seed: int = 0
) -> HalfspaceReport:
    """Sampled two-sided check that {beta_rst >= 2} ∩ NS equals the ray-point hull.

    Hull side: random mixtures of apex and ray points stay in the
    halfspace and fully NS.  Halfspace side: random NS boxes with
    beta_rst >= 2 admit an exact decomposition over those 24 points.
    The report keeps the per-sample weights so an independent checker
    can replay both directions by substitution alone.
    """
    points = ray_points(r, s, t)
    boxes = [b for _, b in points]
    rng = rng_from_seed(seed)
    hull_failures = []
    hull_weights = []
    for k in range(samples):
        weights = rational_weights(rng, len(points))
        hull_weights.append(tuple(weights))
        candidate = convex_combination(weights, boxes)
        if beta(candidate, r, s, t) < 2:
            hull_failures.append(HalfspaceSample(k, False, "beta below 2"))
        elif not is_fully_ns(candidate).fully_ns:
            hull_failures.append(HalfspaceSample(k, False, "not fully NS"))
    half_failures = []
    half_decompositions = []
    for k in range(samples):
        candidate = random_ns_box_with_min_beta(rng, r, s, t)
        lp = membership_lp(candidate, points)
        outcome = solve(lp)
        if outcome.status != "optimal":
            half_failures.append(HalfspaceSample(k, False, "no exact decomposition"))
            half_decompositions.append({})
        else:
            half_decompositions.append(
                {
                    name: outcome.witness[f"w:{name}"]
                    for name, _ in points
                    if outcome.witness[f"w:{name}"] != 0
                }
            )
    return HalfspaceReport(
        (r, s, t),
        samples,
        seed,
        tuple(hull_weights),
        tuple(half_decompositions),
        tuple(hull_failures),
        tuple(half_failures),
        not hull_failures and not half_failures,
    )
