"""Membership certificates, anti-robustness, ray points and hull checks."""

import itertools
from fractions import Fraction

import pytest

from boxcert.box import (
    b_alpha,
    convex_combination,
    deterministic_vertices,
    is_fully_ns,
    mix,
    pr_box,
    tensor,
    uniform_box,
)
from boxcert.chsh import beta, beta_cell_coefficients, beta_table
from boxcert.polytope import (
    BROADCAST_CUT,
    DegenerateRay,
    PreconditionNotMet,
    UnsupportedShape,
    anti_robustness,
    anti_robustness_closed_form,
    halfspace_body_equality_check,
    hyperplane_locality_check,
    lr_membership,
    membership_lp,
    ray_intersection,
    ray_points,
)
from boxcert.ratlp import check_witness, solve
from boxcert.sampling import (
    random_ns_box,
    random_ns_box_with_min_beta,
    rng_from_seed,
)
from boxcert.twirl import twirl
from boxcert.vertices import ns_vertices_2x2, vertex_by_name

F = Fraction


def reconstruct(weights):
    names = list(weights)
    return convex_combination(
        [weights[n] for n in names], [vertex_by_name(n.removeprefix("ray:")) for n in names]
    )


class TestMembership:
    def test_k_is_member_with_valid_weights(self):
        k = b_alpha(F(3, 4))
        cert = lr_membership(k)
        assert cert.member
        assert sum(cert.weights.values()) == 1
        assert all(w > 0 for w in cert.weights.values())
        assert all(name.startswith("det_") for name in cert.weights)
        assert reconstruct(cert.weights) == k
        assert check_witness(cert.lp, cert.outcome)

    def test_pr_box_is_not_member(self):
        cert = lr_membership(pr_box(0, 0, 0))
        assert not cert.member
        assert cert.farkas
        assert check_witness(cert.lp, cert.outcome)

    def test_separating_certificate_reproduces_chsh_facet(self):
        # The Farkas functional equals a positive multiple of the beta_000
        # coefficients plus per-input constants, i.e. the facet beta <= 2.
        cert = lr_membership(pr_box(0, 0, 0))
        assert [(v.r, v.s, v.t) for v in cert.violated_facets] == [(0, 0, 0)]
        assert cert.violated_facets[0].value == 4
        functional, threshold = cert.separating_functional()
        coeffs = beta_cell_coefficients(0, 0, 0)
        # solve lam = a*beta + c_xy from the (0,0|x,y) and (0,1|x,y) cells
        consts = {}
        scale = None
        for x, y in itertools.product((0, 1), repeat=2):
            lam_eq = functional[f"cell:00|{x}{y}"]
            lam_ne = functional[f"cell:01|{x}{y}"]
            beta_eq = coeffs[(0, 0, x, y)]
            beta_ne = coeffs[(0, 1, x, y)]
            a = (lam_eq - lam_ne) / (beta_eq - beta_ne)
            if scale is None:
                scale = a
            assert a == scale
            consts[(x, y)] = lam_eq - a * beta_eq
        assert scale > 0
        for x, y in itertools.product((0, 1), repeat=2):
            for a_bit, b_bit in itertools.product((0, 1), repeat=2):
                expected = scale * coeffs[(a_bit, b_bit, x, y)] + consts[(x, y)]
                assert functional[f"cell:{a_bit}{b_bit}|{x}{y}"] == expected
        # exact separation: every deterministic vertex at or below threshold
        for name, vertex in ns_vertices_2x2()[:16]:
            value = sum(
                functional[f"cell:{a}{b}|{x}{y}"] * vertex.prob((a, b), (x, y))
                for a, b, x, y in itertools.product((0, 1), repeat=4)
            )
            assert value <= threshold
        box_value = sum(
            functional[f"cell:{a}{b}|{x}{y}"] * pr_box(0, 0, 0).prob((a, b), (x, y))
            for a, b, x, y in itertools.product((0, 1), repeat=4)
        )
        assert box_value > threshold

    def test_four_party_product_membership(self):
        k = b_alpha(F(3, 4))
        cert = lr_membership(tensor(k, k), cut=BROADCAST_CUT)
        assert cert.member
        assert check_witness(cert.lp, cert.outcome)

    def test_four_party_requires_declared_cut(self):
        k = b_alpha(F(3, 4))
        with pytest.raises(UnsupportedShape):
            lr_membership(tensor(k, k))

    def test_unsupported_shape(self):
        with pytest.raises(UnsupportedShape):
            lr_membership(uniform_box(3))

    def test_deterministic_vertices_are_members(self):
        for vertex in deterministic_vertices():
            assert lr_membership(vertex).member


class TestAntiRobustness:
    def test_line_values(self):
        assert anti_robustness(b_alpha(F(7, 8))).value == F(6, 7)
        assert anti_robustness(b_alpha(F(1))).value == F(3, 4)

    def test_local_boxes_have_value_one(self):
        for vertex in deterministic_vertices():
            assert anti_robustness(vertex).value == 1
        assert anti_robustness(b_alpha(F(3, 4))).value == 1

    def test_witnesses_satisfy_decomposition(self):
        rng = rng_from_seed(40)
        for _ in range(10):
            box = random_ns_box(rng)
            res = anti_robustness(box)
            q = res.value
            mixed = mix(q, box, res.admixture_witness)
            assert mixed == res.local_witness
            assert reconstruct(res.weights) == res.local_witness
            assert is_fully_ns(res.admixture_witness).fully_ns
            assert check_witness(res.lp, res.outcome)

    def test_admixture_slack_is_normalized_and_ns(self):
        # Z = L - q*box obeys the homogeneous NS conditions and sums to
        # 1 - q per input, matching the unreduced formulation.
        rng = rng_from_seed(41)
        for _ in range(10):
            box = random_ns_box_with_min_beta(rng, 0, 0, 0)
            res = anti_robustness(box)
            q = res.value
            z = {
                (a, x): res.local_witness.prob(a, x) - q * box.prob(a, x)
                for x in box.input_tuples()
                for a in box.output_tuples()
            }
            assert all(v >= 0 for v in z.values())
            for x in box.input_tuples():
                assert sum(z[(a, x)] for a in box.output_tuples()) == 1 - q
            for a_bit in (0, 1):  # Alice marginal of Z independent of y
                for x_bit in (0, 1):
                    totals = {
                        y: sum(z[((a_bit, b), (x_bit, y))] for b in (0, 1))
                        for y in (0, 1)
                    }
                    assert totals[0] == totals[1]
            for b_bit in (0, 1):  # Bob marginal of Z independent of x
                for y_bit in (0, 1):
                    totals = {
                        x: sum(z[((a, b_bit), (x, y_bit))] for a in (0, 1))
                        for x in (0, 1)
                    }
                    assert totals[0] == totals[1]

    def test_value_one_iff_member(self):
        rng = rng_from_seed(42)
        seen_local = seen_nonlocal = 0
        for _ in range(40):
            box = random_ns_box(rng)
            member = lr_membership(box).member
            value = anti_robustness(box).value
            assert (value == 1) == member
            seen_local += member
            seen_nonlocal += not member
        for r, s, t in itertools.product((0, 1), repeat=3):
            box = random_ns_box_with_min_beta(rng, r, s, t)
            member = lr_membership(box).member
            assert (anti_robustness(box).value == 1) == member

    def test_rejects_signalling_boxes(self):
        import boxcert.box as boxmod

        entries = {}
        for x, y, a, b in itertools.product((0, 1), repeat=4):
            entries[((a, b), (x, y))] = F(1) if (a == y and b == 0) else F(0)
        signalling = boxmod.make_box(2, (2, 2), (2, 2), entries)
        with pytest.raises(UnsupportedShape):
            anti_robustness(signalling)


class TestClosedForm:
    def test_line_formula(self):
        for alpha in (F(25, 32), F(13, 16), F(7, 8), F(15, 16), F(1)):
            assert anti_robustness_closed_form(b_alpha(alpha)) == F(3) / (4 * alpha)

    def test_beta_exactly_two_gives_one(self):
        assert anti_robustness_closed_form(b_alpha(F(3, 4))) == 1

    def test_precondition(self):
        with pytest.raises(PreconditionNotMet):
            anti_robustness_closed_form(uniform_box(2))

    def test_agrees_with_lp_on_random_nonlocal_boxes(self):
        rng = rng_from_seed(43)
        count = 0
        while count < 100:
            r, s, t = (rng.randint(0, 1) for _ in range(3))
            box = random_ns_box_with_min_beta(rng, r, s, t)
            if lr_membership(box).member:
                continue
            count += 1
            assert anti_robustness_closed_form(box) == anti_robustness(box).value


class TestRayIntersection:
    def test_anti_pr_ray_gives_k(self):
        ray = ray_intersection(0, 0, 0, pr_box(0, 0, 1))
        assert ray.p == F(3, 4)
        assert ray.point == b_alpha(F(3, 4))
        assert ray.vertex_name == "pr_001"

    def test_beta_two_vertex_is_its_own_ray_point(self):
        vertex = deterministic_vertices()[0]
        assert beta(vertex, 0, 0, 0) == 2
        ray = ray_intersection(0, 0, 0, vertex)
        assert ray.p == 0
        assert ray.point == vertex

    def test_beta_zero_vertex(self):
        ray = ray_intersection(0, 0, 0, pr_box(0, 1, 0))
        assert ray.p == F(1, 2)

    def test_degenerate_ray(self):
        with pytest.raises(DegenerateRay):
            ray_intersection(0, 0, 0, pr_box(0, 0, 0))

    def test_unknown_vertex(self):
        with pytest.raises(UnsupportedShape):
            ray_intersection(0, 0, 0, uniform_box(2))


class TestHyperplane:
    def test_apex_000_all_local(self):
        report = hyperplane_locality_check(0, 0, 0)
        assert len(report.checks) == 23
        assert report.all_pass
        for check in report.checks:
            assert beta(check.ray.point, 0, 0, 0) == 2
            assert check.within_all_facets
            assert check.membership.member

    def test_ray_points_have_beta_two_every_apex(self):
        for r, s, t in itertools.product((0, 1), repeat=3):
            for name, point in ray_points(r, s, t):
                if name.startswith("ray:"):
                    assert beta(point, r, s, t) == 2


class TestHalfspace:
    def test_explicit_hull_member(self):
        box = mix(F(1, 2), pr_box(0, 0, 0), b_alpha(F(3, 4)))
        points = ray_points(0, 0, 0)
        outcome = solve(membership_lp(box, points))
        assert outcome.status == "optimal"
        apex_weight = outcome.witness["w:pr_000"]
        assert apex_weight == F(1, 2)  # forced: beta = 3 = 2 + 2*p_apex

    def test_k_decomposes_with_zero_apex_weight(self):
        k = b_alpha(F(3, 4))
        outcome = solve(membership_lp(k, ray_points(0, 0, 0)))
        assert outcome.status == "optimal"
        assert outcome.witness["w:pr_000"] == 0

    def test_sampled_equivalence_small(self):
        report = halfspace_body_equality_check(0, 0, 0, samples=50, seed=7)
        assert report.all_pass

    def test_locality_flag_matches_membership(self):
        rng = rng_from_seed(44)
        for _ in range(200):
            box = random_ns_box(rng)
            _, flag = beta_table(box)
            assert flag == lr_membership(box).member


class TestMonotonicityQuick:
    def test_twirl_cannot_decrease_anti_robustness(self):
        rng = rng_from_seed(45)
        for _ in range(10):
            box = random_ns_box(rng)
            base = anti_robustness(box).value
            for r, s in itertools.product((0, 1), repeat=2):
                assert anti_robustness(twirl(box, r, s)).value >= base

    def test_twirl_preserves_anti_robustness_above_two(self):
        rng = rng_from_seed(46)
        for r, s, t in ((0, 0, 0), (1, 1, 1)):
            for _ in range(5):
                box = random_ns_box_with_min_beta(rng, r, s, t)
                assert (
                    anti_robustness(twirl(box, r, s)).value
                    == anti_robustness(box).value
                )
