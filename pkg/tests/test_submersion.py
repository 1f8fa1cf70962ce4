"""Projectors, lifts, fundamental tensors, fiber geometry, and the
structure-transfer report for coordinate-projection submersions."""

import dataclasses

import numpy as np
import pytest

from conftest import curved_submersion
from statgeom import build_context, parse_manifest
from statgeom.expr import parse_expression
from statgeom.fixtures import flat_product_manifest, submersion_manifest
from statgeom.geometry import (
    STATUS_NOT_APPLICABLE,
    STATUS_PASS,
    ExpressionConnection,
    conjugate_connection,
    curvature_at,
    sample_points,
)
from statgeom.product import adjoint_structure, check_para_kahler_like
from statgeom.submersion import (
    CoordinateBasisField,
    ExpressionVectorField,
    HorizontalLiftField,
    StructureImageField,
    SubmersionError,
    SubmersionSpec,
    check_fundamental_tensor_identities,
    check_para_holomorphic,
    check_semi_riemannian_submersion,
    check_statistical_submersion,
    horizontal_lift_at,
    induced_fiber_connections,
    induced_fiber_manifold,
    isometric_fibers_residual,
    lie_bracket_at,
    oneill_tensors_at,
    projectors_at,
    verify_submersion_theorems,
)


def _submersion_from(data):
    return build_context(parse_manifest(data)).submersion


def warped_submersion():
    """dim-2 over dim-1 with fiber metric exp(2b): curved fibers, T ≠ 0."""
    return _submersion_from({
        "chart": {"coords": ["b", "u"], "box": [[-1.0, 1.0], [-1.0, 1.0]], "seed": 17},
        "metric": [["1", "0"], ["0", "exp(2*b)"]],
        "submersion": {"base": {
            "chart": {"coords": ["b"], "box": [[-1.0, 1.0]]},
            "metric": [["1"]],
        }},
        "checks": ["semi_riemannian_submersion"],
    })


def flat_submersion(k=1.0):
    """Trivial product of flat pair fixtures with the pair-swap structures."""
    total = flat_product_manifest(2, k, (1.0, 1.0), seed=19)
    base = flat_product_manifest(1, k, (1.0,), seed=19)
    data = {key: total[key] for key in ("chart", "params", "metric", "connection", "product")}
    data["submersion"] = {"base": {
        key: base[key] for key in ("chart", "params", "metric", "connection", "product")
    }}
    data["checks"] = ["semi_riemannian_submersion"]
    return _submersion_from(data)


class TestProjectors:
    def test_block_metric_gives_coordinate_projectors(self):
        spec = curved_submersion(k=1.0, l=2.0)
        p = sample_points(spec.total.chart, 1)[0]
        v, h = projectors_at(spec, p)
        np.testing.assert_allclose(v, np.diag([0.0, 0.0, 1.0, 1.0]), atol=1e-14)
        np.testing.assert_allclose(h, np.diag([1.0, 1.0, 0.0, 0.0]), atol=1e-14)

    def test_base_must_be_strictly_smaller(self):
        spec = curved_submersion()
        with pytest.raises(ValueError, match="smaller"):
            SubmersionSpec(total=spec.total, base=spec.total)

    def test_base_needs_at_least_one_coordinate(self):
        from statgeom.geometry import ChartError, ChartSpec

        with pytest.raises(ChartError, match="at least one"):
            ChartSpec((), ())

    def test_perturbed_metric_keeps_projector_algebra(self):
        spec = _submersion_from({
            "chart": {"coords": ["b", "u"], "box": [[-1.0, 1.0], [-1.0, 1.0]], "seed": 3},
            "metric": [["1", "0.2"], ["0.2", "-1"]],
            "submersion": {"base": {
                "chart": {"coords": ["b"], "box": [[-1.0, 1.0]]},
                "metric": [["1"]],
            }},
            "checks": ["semi_riemannian_submersion"],
        })
        for p in sample_points(spec.total.chart, 10):
            v, h = projectors_at(spec, p)
            assert abs(v[1, 0] + 0.2) <= 1e-14  # not a coordinate projector
            assert np.max(np.abs(v @ v - v)) <= 1e-12
            assert np.max(np.abs(v @ h)) <= 1e-12
            g = spec.total.metric.matrix(p)
            assert np.max(np.abs(h.T @ g @ v)) <= 1e-12

    def test_degenerate_fiber_metric_rejected(self):
        spec = _submersion_from({
            "chart": {"coords": ["b", "u1", "u2"], "box": [[-1.0, 1.0]] * 3, "seed": 3},
            "metric": [["1", "0", "0"], ["0", "1e-12", "0"], ["0", "0", "1e-12"]],
            "submersion": {"base": {
                "chart": {"coords": ["b"], "box": [[-1.0, 1.0]]},
                "metric": [["1"]],
            }},
            "checks": ["semi_riemannian_submersion"],
        })
        with pytest.raises(SubmersionError, match="degenerate"):
            projectors_at(spec, np.zeros(3))


class TestHorizontalLifts:
    def test_block_case_lift_is_coordinate_field(self):
        spec = curved_submersion(k=1.0, l=1.0)
        p = sample_points(spec.total.chart, 1)[0]
        np.testing.assert_allclose(horizontal_lift_at(spec, [1.0, 0.0], p),
                                   [1.0, 0.0, 0.0, 0.0], atol=1e-14)

    def test_linearity(self):
        spec = _submersion_from({
            "chart": {"coords": ["b", "u"], "box": [[-1.0, 1.0], [-1.0, 1.0]], "seed": 3},
            "metric": [["1", "0.3"], ["0.3", "2"]],
            "submersion": {"base": {
                "chart": {"coords": ["b"], "box": [[-1.0, 1.0]]},
                "metric": [["1"]],
            }},
            "checks": ["semi_riemannian_submersion"],
        })
        p = sample_points(spec.total.chart, 1)[0]
        left = horizontal_lift_at(spec, [2.0], p) + horizontal_lift_at(spec, [-0.5], p)
        right = horizontal_lift_at(spec, [1.5], p)
        assert np.max(np.abs(left - right)) <= 1e-12

    def test_lift_preserves_scalar_products(self):
        spec = curved_submersion(k=1.0, l=2.0)
        assert check_semi_riemannian_submersion(spec, sample_points(spec.total.chart, 25)).passed
        for p in sample_points(spec.total.chart, 5):
            g = spec.total.metric.matrix(p)
            base_g = spec.base.metric.matrix(spec.project(p))
            for a in range(2):
                for b in range(2):
                    lift_a = horizontal_lift_at(spec, np.eye(2)[a], p)
                    lift_b = horizontal_lift_at(spec, np.eye(2)[b], p)
                    assert abs(lift_a @ g @ lift_b - base_g[a, b]) <= 1e-9

    def test_ill_conditioned_solve_rejected(self):
        spec = _submersion_from({
            "chart": {"coords": ["b", "u1", "u2"], "box": [[-1.0, 1.0]] * 3, "seed": 3},
            "metric": [["1", "0", "0"], ["0", "1e4", "0"], ["0", "0", "1e-5"]],
            "submersion": {"base": {
                "chart": {"coords": ["b"], "box": [[-1.0, 1.0]]},
                "metric": [["1"]],
            }},
            "checks": ["semi_riemannian_submersion"],
        })
        with pytest.raises(SubmersionError, match="ill-conditioned"):
            horizontal_lift_at(spec, [1.0], np.zeros(3))


class TestSubmersionChecks:
    def test_curved_submersion_passes_all(self):
        for k, l in [(1.0, 1.0), (1.0, 2.0)]:
            spec = curved_submersion(k=k, l=l)
            pts = sample_points(spec.total.chart, 25)
            assert check_semi_riemannian_submersion(spec, pts).passed
            assert check_statistical_submersion(spec, pts).passed
            assert check_para_holomorphic(spec, pts).passed

    def test_scaled_base_metric_fails(self):
        data = submersion_manifest(2, 1, 1.0, 1.0, (1.0, 1.0), seed=23)
        base_metric = data["submersion"]["base"]["metric"]
        data["submersion"]["base"]["metric"] = [
            [entry if entry == "0" else f"2*({entry})" for entry in row] for row in base_metric
        ]
        spec = _submersion_from(data)
        result = check_semi_riemannian_submersion(spec, sample_points(spec.total.chart, 25))
        assert not result.passed
        assert result.residual > 10.0 * result.tolerance

    def test_dualized_base_connection_fails_when_parameters_differ(self):
        """Giving the base the conjugate coefficient family is only harmless at
        k = l; for k ≠ l the pushforward comparison must fail."""
        k, l = 1.0, 2.0
        data = submersion_manifest(2, 1, k, l, (1.0, 1.0), seed=23)
        star_y = "-2*k*k/(l*(k+l)*y1)"
        star_other = "-2*l/((k+l)*y1)"
        connection = [[["0"] * 2 for _ in range(2)] for _ in range(2)]
        connection[1][0][0] = star_y
        connection[1][1][1] = star_other
        connection[0][0][1] = star_other
        connection[0][1][0] = star_other
        data["submersion"]["base"]["connection"] = connection
        spec = _submersion_from(data)
        result = check_statistical_submersion(spec, sample_points(spec.total.chart, 25))
        assert not result.passed

    def test_trivial_flat_product_passes(self):
        spec = flat_submersion(k=2.0)
        pts = sample_points(spec.total.chart, 10)
        assert check_semi_riemannian_submersion(spec, pts).passed
        assert check_statistical_submersion(spec, pts).passed
        assert check_para_holomorphic(spec, pts).passed

    def test_negated_base_structure_fails(self):
        data = submersion_manifest(2, 1, 1.0, 1.0, (1.0, 1.0), seed=23)
        product = data["submersion"]["base"]["product"]
        data["submersion"]["base"]["product"] = [
            [entry if entry == "0" else f"-({entry})" for entry in row] for row in product
        ]
        spec = _submersion_from(data)
        result = check_para_holomorphic(spec, sample_points(spec.total.chart, 25))
        assert not result.passed
        assert result.residual > 10.0 * result.tolerance

    def test_vertical_invariance_consequence(self):
        spec = curved_submersion(k=1.0, l=2.0)
        for p in sample_points(spec.total.chart, 10):
            v, h = projectors_at(spec, p)
            m = spec.total.product.matrix(p)
            assert np.max(np.abs(h @ m @ v)) <= 1e-10


class TestFundamentalTensors:
    def test_isometric_fibers(self):
        spec = curved_submersion(k=1.0, l=2.0)
        result = isometric_fibers_residual(spec, sample_points(spec.total.chart, 25))
        assert result.passed
        assert result.residual <= 1e-9

    def test_horizontal_tensor_vanishes_on_block_fixture(self):
        spec = curved_submersion(k=1.0, l=1.0)
        lifts = [HorizontalLiftField(spec, np.eye(2)[a]) for a in range(2)]
        for p in sample_points(spec.total.chart, 5):
            for x in lifts:
                for y in lifts:
                    tensors = oneill_tensors_at(spec, x, y, p)
                    assert np.max(np.abs(tensors.a)) <= 1e-9
                    assert np.max(np.abs(tensors.a_star)) <= 1e-9

    def test_flat_product_all_tensors_vanish(self):
        spec = flat_submersion()
        fields = [CoordinateBasisField(4, i) for i in range(4)]
        p = sample_points(spec.total.chart, 1)[0]
        for e in fields:
            for f in fields:
                tensors = oneill_tensors_at(spec, e, f, p)
                for arr in (tensors.t, tensors.a, tensors.t_star, tensors.a_star):
                    assert np.max(np.abs(arr)) <= 1e-14

    def test_warped_fixture_has_second_fundamental_form(self):
        """T(∂u, ∂u) = −e^{2b} ∂b for the warped fiber metric e^{2b} du²."""
        spec = warped_submersion()
        u = CoordinateBasisField(2, 1)
        point = np.array([0.0, 0.3])
        tensors = oneill_tensors_at(spec, u, u, point)
        np.testing.assert_allclose(tensors.t, [-1.0, 0.0], atol=1e-12)

    def test_tensoriality_in_both_slots(self):
        """Rescaling a field by 1 + (b − b(p)) leaves T and A at p unchanged."""
        spec = warped_submersion()
        point = np.array([0.2, -0.4])
        u = CoordinateBasisField(2, 1)
        x = CoordinateBasisField(2, 0)
        factor_components = ["0", "(1 + (b - c))"]
        scaled_u = ExpressionVectorField([
            parse_expression(text, ("b", "u"), {"c": point[0]}) for text in factor_components
        ])
        baseline = oneill_tensors_at(spec, u, u, point)
        for e_field, f_field in [(scaled_u, u), (u, scaled_u), (scaled_u, scaled_u)]:
            varied = oneill_tensors_at(spec, e_field, f_field, point)
            assert np.max(np.abs(varied.t - baseline.t)) <= 1e-8
            assert np.max(np.abs(varied.a - baseline.a)) <= 1e-8

    def test_identities_hold_on_fixtures(self):
        for spec in (curved_submersion(k=1.0, l=2.0), flat_submersion(), warped_submersion()):
            pts = sample_points(spec.total.chart, 10)
            result = check_fundamental_tensor_identities(spec, pts)
            assert result.passed, result.details

    def test_mismatched_dual_breaks_pairings(self):
        """With anything but the true conjugate as ∇*, the duality pairing
        g(T_U V, X) = −g(V, T*_U X) fails on the warped fixture."""
        spec = warped_submersion()
        pts = sample_points(spec.total.chart, 10)
        wrong_dual = ExpressionConnection.zero(("b", "u"))
        result = check_fundamental_tensor_identities(spec, pts, dual_connection=wrong_dual)
        assert not result.passed
        assert result.details["pairing_t"] > 10.0 * result.tolerance

    def test_structure_twisted_vertical_tensor(self):
        """T(U, P̂V) = P T(U, V) on the certified curved submersion."""
        spec = curved_submersion(k=1.0, l=2.0)
        verticals = [CoordinateBasisField(4, i) for i in (2, 3)]
        for p in sample_points(spec.total.chart, 5):
            m = spec.total.product.matrix(p)
            for u in verticals:
                for w in verticals:
                    plain = oneill_tensors_at(spec, u, w, p).t
                    twisted = oneill_tensors_at(
                        spec, u, StructureImageField(spec.total.product, w), p).t
                    assert np.max(np.abs(twisted - m @ plain)) <= 1e-8

    def test_basic_lift_brackets_vanish_in_block_case(self):
        spec = curved_submersion(k=1.0, l=2.0)
        lifts = [HorizontalLiftField(spec, np.eye(2)[a]) for a in range(2)]
        for p in sample_points(spec.total.chart, 5):
            v, _ = projectors_at(spec, p)
            for x in lifts:
                for y in lifts:
                    assert np.max(np.abs(v @ lie_bracket_at(x, y, p))) <= 1e-12

    def test_expression_field_bracket(self):
        # [x ∂y, ∂x] = −∂y
        x_dy = ExpressionVectorField([
            parse_expression("0", ("x", "y")), parse_expression("x", ("x", "y"))])
        dx = CoordinateBasisField(2, 0)
        np.testing.assert_allclose(lie_bracket_at(x_dy, dx, np.array([0.7, -0.1])),
                                   [0.0, -1.0], atol=1e-15)


class TestInducedFiber:
    def test_curved_fiber_certifies(self):
        spec = curved_submersion(k=1.0, l=2.0)
        fiber = induced_fiber_manifold(spec)
        pts = sample_points(fiber.chart, 25)
        assert check_para_kahler_like(fiber.metric, fiber.connection, fiber.product, pts).passed

    def test_fiber_metric_matches_standalone_fixture(self):
        """The fiber over any base point is the one-pair curved fixture itself."""
        from conftest import curved_manifold

        spec = curved_submersion(k=1.0, l=2.0)
        fiber = induced_fiber_manifold(spec)
        standalone = curved_manifold(pairs=1, k=1.0, l=2.0, epsilons=(1.0,))
        for p in sample_points(fiber.chart, 10):
            np.testing.assert_allclose(fiber.metric.matrix(p), standalone.metric.matrix(p),
                                       atol=1e-14)
            np.testing.assert_allclose(fiber.connection.coefficients(p),
                                       standalone.connection.coefficients(p), atol=1e-12)

    def test_induced_connections_are_conjugate(self):
        spec = curved_submersion(k=1.0, l=2.0)
        fiber = induced_fiber_manifold(spec)
        induced, induced_dual = induced_fiber_connections(spec)
        dual = conjugate_connection(fiber.metric, induced)
        for p in sample_points(fiber.chart, 10):
            defect = dual.coefficients(p) - induced_dual.coefficients(p)
            assert np.max(np.abs(defect)) <= 1e-9

    def test_flat_product_fiber_is_flat(self):
        spec = flat_submersion(k=2.0)
        fiber = induced_fiber_manifold(spec)
        for p in sample_points(fiber.chart, 5):
            assert np.max(np.abs(fiber.connection.coefficients(p))) <= 1e-14
            assert np.max(np.abs(curvature_at(fiber.connection, p).components)) <= 1e-12

    def test_pair_crossing_structure_rejected(self):
        """A structure swapping the two pairs moves vertical vectors out of the
        fiber and must be flagged."""
        data = flat_product_manifest(2, 1.0, (1.0, 1.0), seed=19)
        crossing = [["0"] * 4 for _ in range(4)]
        crossing[0][2] = crossing[2][0] = "1"
        crossing[1][3] = crossing[3][1] = "1"
        data["product"] = crossing
        base = flat_product_manifest(1, 1.0, (1.0,), seed=19)
        data["submersion"] = {"base": {
            key: base[key] for key in ("chart", "params", "metric", "connection", "product")
        }}
        spec = _submersion_from(data)
        with pytest.raises(SubmersionError, match="vertical"):
            induced_fiber_manifold(spec)

    def test_derived_structure_cannot_be_restricted(self):
        spec = curved_submersion(k=1.0, l=2.0)
        derived = adjoint_structure(spec.total.metric, spec.total.product)
        total = dataclasses.replace(spec.total, product=derived)
        with pytest.raises(TypeError, match="expression-backed"):
            induced_fiber_manifold(SubmersionSpec(total=total, base=spec.base))


class TestTheoremReport:
    def test_equal_parameters_report(self):
        """Regression pins for k = l: every transfer item passes and the flat
        decomposition stays NOT-APPLICABLE (the total space is curved)."""
        spec = curved_submersion(k=1.0, l=1.0)
        report = verify_submersion_theorems(spec, sample_points(spec.total.chart, 15))
        for name in ("fiber_structure", "base_and_fiber_certified", "vertical_symmetry",
                     "horizontal_vanishing", "horizontal_integrability"):
            assert report.items[name].status == STATUS_PASS, name
        assert report.items["flat_decomposition"].status == STATUS_NOT_APPLICABLE
        assert report.passed

    def test_distinct_parameters_report(self):
        """Regression pins for k ≠ l: rank(P̂ + P̂*) stays full so the horizontal
        tensors must vanish, while self-adjointness (and with it the
        integrability shortcut) is lost."""
        spec = curved_submersion(k=1.0, l=2.0)
        report = verify_submersion_theorems(spec, sample_points(spec.total.chart, 15))
        assert report.items["horizontal_vanishing"].status == STATUS_PASS
        assert report.items["horizontal_vanishing"].data["rank"] == 2.0
        assert report.items["horizontal_integrability"].status == STATUS_NOT_APPLICABLE
        assert report.items["vertical_symmetry"].status == STATUS_PASS

    def test_flat_product_report_all_pass(self):
        spec = flat_submersion(k=1.0)
        report = verify_submersion_theorems(spec, sample_points(spec.total.chart, 15))
        for name, item in report.items.items():
            assert item.status == STATUS_PASS, (name, item.reason)
        assert report.items["flat_decomposition"].data["space_form_constant"] == pytest.approx(
            0.0, abs=1e-12)
