"""Suite execution: the check registry and the manifest-driven runner.

Checks run in declaration order; each one reduces its sampled residuals with
``max``, so results are independent of evaluation order and a fixed seed
yields byte-identical reports.  A check that raises is recorded as ERROR and
the run continues.
"""

from __future__ import annotations

import time

import numpy as np

from . import geometry as geo
from . import product as prod
from . import submersion as sub
from .expfam import AlphaConnection, exp_para_structures, fisher_metric
from .geometry import (
    STATUS_ERROR,
    STATUS_FAIL,
    STATUS_PASS,
)
from .manifest import Manifest, ManifestError, build_context
from .report import CheckOutcome, VerificationReport


def _outcome(name, result, points_used, data=None) -> CheckOutcome:
    return CheckOutcome(
        name=name,
        status=STATUS_PASS if result.passed else STATUS_FAIL,
        residual=float(result.residual),
        raw_residual=float(result.raw_residual),
        tolerance=float(result.tolerance),
        worst_point=None if result.worst_point is None else [float(x) for x in result.worst_point],
        points_used=points_used,
        data=dict(data or {}, **{k: float(v) for k, v in result.details.items()}),
    )


def _residual_outcome(name, tracker, tol, points_used, data=None) -> CheckOutcome:
    return _outcome(name, tracker.result(tol), points_used, data)


# --------------------------------------------------------------------------
# Metric-manifold checks
# --------------------------------------------------------------------------

def _check_statistical_structure(ctx, pts, tol):
    m = ctx.manifold
    result = geo.check_statistical_structure(m.metric, m.connection_or_levi_civita(), pts, tol)
    return [_outcome("statistical_structure", result, len(pts))]


def _check_conjugate_involution(ctx, pts, tol):
    m = ctx.manifold
    connection = m.connection_or_levi_civita()
    double = geo.conjugate_connection(m.metric, geo.conjugate_connection(m.metric, connection))
    tracker = geo.ResidualTracker()
    for p in pts:
        gamma = connection.coefficients(p)
        back = double.coefficients(p)
        tracker.update(float(np.max(np.abs(back - gamma))), geo._scale_of(gamma), p)
    return [_residual_outcome("conjugate_involution", tracker, tol, len(pts))]


def _check_levi_civita_average(ctx, pts, tol):
    m = ctx.manifold
    connection = m.connection_or_levi_civita()
    dual = geo.conjugate_connection(m.metric, connection)
    mid = geo.levi_civita(m.metric)
    tracker = geo.ResidualTracker()
    for p in pts:
        gamma = connection.coefficients(p)
        defect = gamma + dual.coefficients(p) - 2.0 * mid.coefficients(p)
        tracker.update(float(np.max(np.abs(defect))), geo._scale_of(gamma), p)
    return [_residual_outcome("levi_civita_average", tracker, tol, len(pts))]


def _check_dual_curvature_identity(ctx, pts, tol):
    m = ctx.manifold
    result = geo.check_dual_curvature_identity(m.metric, m.connection_or_levi_civita(), pts, tol)
    return [_outcome("dual_curvature_identity", result, len(pts))]


def _check_flatness(ctx, pts, tol):
    m = ctx.manifold
    connection = m.connection_or_levi_civita()
    tracker = geo.ResidualTracker()
    for p in pts:
        r = geo.curvature_at(connection, p).components
        tracker.update(float(np.max(np.abs(r))), geo._scale_of(m.metric.matrix(p)), p)
    return [_residual_outcome("flatness", tracker, tol, len(pts))]


def _check_kurose(ctx, pts, tol):
    m = ctx.manifold
    fit = geo.fit_kurose_constant(m.metric, m.connection_or_levi_civita(), pts, tol)
    return [CheckOutcome(
        name="kurose_constant_curvature",
        status=STATUS_PASS if fit.passed else STATUS_FAIL,
        residual=float(fit.residual),
        raw_residual=float(fit.raw_residual),
        tolerance=float(fit.tolerance),
        worst_point=None if fit.worst_point is None else [float(x) for x in fit.worst_point],
        points_used=len(pts),
        data={"constant": float(fit.constant)},
    )]


# --------------------------------------------------------------------------
# Product-structure checks
# --------------------------------------------------------------------------

def _require_product(ctx):
    if ctx.manifold is None or ctx.manifold.product is None:
        raise ManifestError("this check needs a 'product' block in the manifest")
    return ctx.manifold


def _check_almost_product(ctx, pts, tol):
    m = _require_product(ctx)
    return [_outcome("almost_product", prod.check_almost_product(m.product, pts, tol), len(pts))]


def _check_pairing_identities(ctx, pts, tol):
    m = _require_product(ctx)
    result = prod.check_pairing_identities(m.metric, m.product, pts, tol)
    return [_outcome("pairing_identities", result, len(pts))]


def _check_product_parallelism(ctx, pts, tol):
    m = _require_product(ctx)
    tracker = prod.product_parallelism_residual(m.connection_or_levi_civita(), m.product, pts)
    return [_residual_outcome("product_parallelism", tracker, tol, len(pts))]


def _check_para_kahler_like(ctx, pts, tol):
    m = _require_product(ctx)
    cert = prod.check_para_kahler_like(m.metric, m.connection_or_levi_civita(), m.product, pts, tol)
    residual = max(cert.statistical.residual, cert.almost_product.residual,
                   cert.parallelism.residual)
    return [CheckOutcome(
        name="para_kahler_like",
        status=STATUS_PASS if cert.passed else STATUS_FAIL,
        residual=float(residual),
        raw_residual=float(max(cert.statistical.raw_residual, cert.almost_product.raw_residual,
                               cert.parallelism.raw_residual)),
        tolerance=float(tol),
        worst_point=None if cert.parallelism.worst_point is None
        else [float(x) for x in cert.parallelism.worst_point],
        points_used=len(pts),
        data={
            "statistical_residual": float(cert.statistical.residual),
            "almost_product_residual": float(cert.almost_product.residual),
            "parallelism_residual": float(cert.parallelism.residual),
        },
    )]


def _check_conjugate_parallelism(ctx, pts, tol):
    m = _require_product(ctx)
    result = prod.conjugate_parallelism_check(
        m.metric, m.connection_or_levi_civita(), m.product, pts, tol
    )
    return [_outcome("conjugate_parallelism", result, len(pts))]


def _check_space_form(ctx, pts, tol):
    m = _require_product(ctx)
    connection = m.connection_or_levi_civita()
    constant = ctx.space_form_c
    if constant is None:
        constant = prod.fit_space_form_constant(m.metric, connection, m.product, pts)
    result = prod.check_space_form(m.metric, connection, m.product, constant, pts, tol)
    return [_outcome("space_form", result, len(pts), data={"constant": constant})]


def _check_flatness_theorem(ctx, pts, tol):
    m = _require_product(ctx)
    outcome = prod.verify_flatness_theorem(m.metric, m.connection_or_levi_civita(), m.product, pts, tol)
    return [CheckOutcome(
        name="flatness_theorem",
        status=outcome.status,
        residual=None if outcome.residual is None else float(outcome.residual),
        tolerance=float(tol),
        points_used=len(pts),
        reason=outcome.reason,
        data={k: float(v) for k, v in outcome.data.items()},
    )]


# --------------------------------------------------------------------------
# Model checks
# --------------------------------------------------------------------------

def _require_model(ctx):
    if ctx.model is None:
        raise ManifestError("this check needs a 'model' block in the manifest")
    return ctx.model


def _check_alpha_family(ctx, pts, tol):
    model = _require_model(ctx)
    metric = fisher_metric(model)
    outcomes = []
    for alpha in ctx.alphas:
        connection = AlphaConnection(metric, alpha)
        stat = geo.check_statistical_structure(metric, connection, pts, tol)
        outcomes.append(_outcome(f"alpha_family[{alpha:g}].statistical_structure", stat, len(pts)))
        dual = geo.conjugate_connection(metric, connection)
        mirror = AlphaConnection(metric, -alpha)
        tracker = geo.ResidualTracker()
        for p in pts:
            defect = dual.coefficients(p) - mirror.coefficients(p)
            tracker.update(float(np.max(np.abs(defect))),
                           geo._scale_of(connection.coefficients(p)), p)
        outcomes.append(
            _residual_outcome(f"alpha_family[{alpha:g}].conjugate_duality", tracker, tol, len(pts))
        )
    mid = geo.levi_civita(metric)
    zero = AlphaConnection(metric, 0.0)
    tracker = geo.ResidualTracker()
    for p in pts:
        defect = zero.coefficients(p) - mid.coefficients(p)
        tracker.update(float(np.max(np.abs(defect))), geo._scale_of(mid.coefficients(p)), p)
    outcomes.append(_residual_outcome("alpha_family.levi_civita_match", tracker, tol, len(pts)))
    one = AlphaConnection(metric, 1.0)
    tracker = geo.ResidualTracker()
    for p in pts:
        r = geo.curvature_at(one, p).components
        tracker.update(float(np.max(np.abs(r))), geo._scale_of(metric.matrix(p)), p)
    outcomes.append(_residual_outcome("alpha_family.exponential_flatness", tracker, tol, len(pts)))
    return outcomes


def _check_exp_para_certifications(ctx, pts, tol):
    model = _require_model(ctx)
    if ctx.involution is None:
        raise ManifestError("exp_para_certifications needs an 'involution' matrix in the model block")
    structure_one, structure_minus = exp_para_structures(model, ctx.involution)
    metric = fisher_metric(model)
    outcomes = []
    for label, alpha, structure in (
        ("exponential", 1.0, structure_one),
        ("mixture", -1.0, structure_minus),
    ):
        cert = prod.check_para_kahler_like(metric, AlphaConnection(metric, alpha), structure, pts, tol)
        residual = max(cert.statistical.residual, cert.almost_product.residual,
                       cert.parallelism.residual)
        outcomes.append(CheckOutcome(
            name=f"exp_para_certifications.{label}",
            status=STATUS_PASS if cert.passed else STATUS_FAIL,
            residual=float(residual),
            tolerance=float(tol),
            points_used=len(pts),
            data={"parallelism_residual": float(cert.parallelism.residual)},
        ))
    return outcomes


# --------------------------------------------------------------------------
# Submersion checks
# --------------------------------------------------------------------------

def _require_submersion(ctx):
    if ctx.submersion is None:
        raise ManifestError("this check needs a 'submersion' block in the manifest")
    return ctx.submersion


def _check_semi_riemannian_submersion(ctx, pts, tol):
    spec = _require_submersion(ctx)
    result = sub.check_semi_riemannian_submersion(spec, pts, tol)
    return [_outcome("semi_riemannian_submersion", result, len(pts))]


def _check_statistical_submersion(ctx, pts, tol):
    spec = _require_submersion(ctx)
    result = sub.check_statistical_submersion(spec, pts, tol)
    return [_outcome("statistical_submersion", result, len(pts))]


def _check_para_holomorphic(ctx, pts, tol):
    spec = _require_submersion(ctx)
    result = sub.check_para_holomorphic(spec, pts, tol)
    return [_outcome("para_holomorphic", result, len(pts))]


def _check_isometric_fibers(ctx, pts, tol):
    spec = _require_submersion(ctx)
    result = sub.isometric_fibers_residual(spec, pts, tol)
    return [_outcome("isometric_fibers", result, len(pts))]


def _check_oneill_identities(ctx, pts, tol):
    spec = _require_submersion(ctx)
    result = sub.check_fundamental_tensor_identities(spec, pts, tol)
    return [_outcome("oneill_identities", result, len(pts))]


def _check_fiber_para_kahler_like(ctx, pts, tol):
    spec = _require_submersion(ctx)
    fiber = sub.induced_fiber_manifold(spec, tol=tol)
    fiber_points = geo.sample_points(fiber.chart, len(pts))
    cert = prod.check_para_kahler_like(fiber.metric, fiber.connection, fiber.product,
                                       fiber_points, tol)
    residual = max(cert.statistical.residual, cert.almost_product.residual,
                   cert.parallelism.residual)
    return [CheckOutcome(
        name="fiber_para_kahler_like",
        status=STATUS_PASS if cert.passed else STATUS_FAIL,
        residual=float(residual),
        tolerance=float(tol),
        points_used=len(fiber_points),
        data={"parallelism_residual": float(cert.parallelism.residual)},
    )]


def _check_submersion_theorems(ctx, pts, tol):
    spec = _require_submersion(ctx)
    report = sub.verify_submersion_theorems(spec, pts, tol)
    outcomes = []
    for name, item in report.items.items():
        outcomes.append(CheckOutcome(
            name=f"submersion_theorems.{name}",
            status=item.status,
            residual=None if item.residual is None else float(item.residual),
            tolerance=float(tol),
            points_used=len(pts),
            reason=item.reason,
            data={k: float(v) for k, v in item.data.items()},
        ))
    return outcomes


# --------------------------------------------------------------------------
# Registry and runner
# --------------------------------------------------------------------------

CHECKS = {
    "statistical_structure": _check_statistical_structure,
    "conjugate_involution": _check_conjugate_involution,
    "levi_civita_average": _check_levi_civita_average,
    "dual_curvature_identity": _check_dual_curvature_identity,
    "flatness": _check_flatness,
    "kurose_constant_curvature": _check_kurose,
    "almost_product": _check_almost_product,
    "pairing_identities": _check_pairing_identities,
    "product_parallelism": _check_product_parallelism,
    "para_kahler_like": _check_para_kahler_like,
    "conjugate_parallelism": _check_conjugate_parallelism,
    "space_form": _check_space_form,
    "flatness_theorem": _check_flatness_theorem,
    "alpha_family": _check_alpha_family,
    "exp_para_certifications": _check_exp_para_certifications,
    "semi_riemannian_submersion": _check_semi_riemannian_submersion,
    "statistical_submersion": _check_statistical_submersion,
    "para_holomorphic": _check_para_holomorphic,
    "isometric_fibers": _check_isometric_fibers,
    "oneill_identities": _check_oneill_identities,
    "fiber_para_kahler_like": _check_fiber_para_kahler_like,
    "submersion_theorems": _check_submersion_theorems,
}

DEFAULT_TOLERANCES = {
    "statistical_structure": 1e-8,
    "conjugate_involution": 1e-10,
    "levi_civita_average": 1e-9,
    "dual_curvature_identity": 1e-8,
    "flatness": 1e-9,
    "kurose_constant_curvature": 1e-8,
    "almost_product": 1e-10,
    "pairing_identities": 1e-10,
    "product_parallelism": 1e-9,
    "para_kahler_like": 1e-8,
    "conjugate_parallelism": 1e-8,
    "space_form": 1e-8,
    "flatness_theorem": 1e-9,
    "alpha_family": 1e-9,
    "exp_para_certifications": 1e-8,
    "semi_riemannian_submersion": 1e-8,
    "statistical_submersion": 1e-8,
    "para_holomorphic": 1e-8,
    "isometric_fibers": 1e-9,
    "oneill_identities": 1e-8,
    "fiber_para_kahler_like": 1e-8,
    "submersion_theorems": 1e-8,
}


def _error_outcome(name: str, err: Exception) -> CheckOutcome:
    return CheckOutcome(name=name, status=STATUS_ERROR, reason=f"{type(err).__name__}: {err}")


def run_suite(manifest: Manifest, seed=None, points=None, tol=None) -> VerificationReport:
    """Execute the manifest's checks in declaration order and assemble the report."""
    start = time.perf_counter()
    effective_seed = int(seed) if seed is not None else manifest.seed
    effective_points = int(points) if points is not None else manifest.points
    outcomes: list[CheckOutcome] = []
    try:
        ctx = build_context(manifest, seed=effective_seed)
        pts = geo.sample_points(ctx.chart, effective_points)
        if ctx.manifold is not None:
            geo.validate_metric_on_chart(ctx.manifold.metric, ctx.chart, pts)
        if ctx.submersion is not None:
            base_pts = np.array([ctx.submersion.project(p) for p in pts])
            geo.validate_metric_on_chart(ctx.submersion.base.metric,
                                         ctx.submersion.base.chart, base_pts)
    except Exception as err:  # noqa: BLE001 - every failure must land in the report
        outcomes = [_error_outcome(name, err) for name in manifest.checks]
        return VerificationReport(
            fixture=manifest.name, seed=effective_seed, points=effective_points,
            checks=tuple(outcomes), wall_time_s=time.perf_counter() - start,
        )

    for name in manifest.checks:
        check_tol = tol if tol is not None else manifest.tolerances.get(
            name, DEFAULT_TOLERANCES.get(name, geo.DEFAULT_TOLERANCE)
        )
        try:
            outcomes.extend(CHECKS[name](ctx, pts, float(check_tol)))
        except Exception as err:  # noqa: BLE001
            outcomes.append(_error_outcome(name, err))
    return VerificationReport(
        fixture=manifest.name,
        seed=effective_seed,
        points=effective_points,
        checks=tuple(outcomes),
        wall_time_s=time.perf_counter() - start,
    )
