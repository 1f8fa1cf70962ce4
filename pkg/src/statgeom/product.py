"""Almost product structures and their interplay with statistical structures.

A product structure is a (1,1) tensor field P with P² = Id and P ≠ ±Id; its
matrix convention is ``M[i, j] = P^i_j`` so that P ∂_j = P^i_j ∂_i and the
matrix acts on component columns.  ``adjoint_structure`` builds the
negative-adjoint partner P* with g(PE, F) + g(E, P*F) = 0, realized as a
derived field so that structures of structures (P** and friends) compose.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import expr as ex
from .geometry import (
    DEFAULT_TOLERANCE,
    cached_by_point,
    STATUS_FAIL,
    STATUS_NOT_APPLICABLE,
    STATUS_PASS,
    CheckResult,
    MetricField,
    ResidualTracker,
    _as_points,
    _inverse_jet,
    _scale_of,
    check_statistical_structure,
    conjugate_connection,
    curvature_at,
    fit_kurose_constant,
)

_IDENTITY_WITNESS_MARGIN = 1e-6


class ExpressionProductStructure:
    """Product structure with explicitly given component fields P^i_j."""

    def __init__(self, components: Sequence[Sequence[ex.ScalarField]]):
        n = len(components)
        dim = components[0][0].arity
        for row in components:
            if len(row) != n:
                raise ValueError("component grid must be square")
            for f in row:
                if f.arity != dim:
                    raise ValueError("components disagree on chart arity")
        self._fields = tuple(tuple(row) for row in components)
        self._dim = n

    @classmethod
    def from_strings(
        cls,
        coords: Sequence[str],
        entries: Sequence[Sequence[str]],
        params: Mapping[str, float] | None = None,
    ) -> "ExpressionProductStructure":
        fields = [[ex.parse_expression(text, coords, params) for text in row] for row in entries]
        return cls(fields)

    @classmethod
    def from_constant(cls, matrix, coords: Sequence[str]) -> "ExpressionProductStructure":
        mat = np.asarray(matrix, dtype=float)
        fields = [[ex.constant_field(mat[i, j], coords) for j in range(mat.shape[1])]
                  for i in range(mat.shape[0])]
        return cls(fields)

    @property
    def dim(self) -> int:
        return self._dim

    @cached_by_point
    def matrix(self, point) -> np.ndarray:
        n = self._dim
        m = np.empty((n, n))
        for i in range(n):
            for j in range(n):
                m[i, j] = ex.eval_value(self._fields[i][j], point)
        return m

    @cached_by_point
    def jet(self, point) -> tuple[np.ndarray, np.ndarray]:
        """(M, dM) with dM[k,i,j] = ∂_k P^i_j."""
        n = self._dim
        m = np.empty((n, n))
        dm = np.empty((n, n, n))
        for i in range(n):
            for j in range(n):
                data = ex.eval2(self._fields[i][j], point)
                m[i, j] = data.value
                dm[:, i, j] = data.grad
        return m, dm


class AdjointStructure:
    """Negative adjoint of a base structure: P* = −G⁻¹ Pᵀ G pointwise."""

    def __init__(self, metric: MetricField, base):
        if metric.dim != base.dim:
            raise ValueError("metric and structure disagree on dimension")
        self._metric = metric
        self._base = base

    @property
    def dim(self) -> int:
        return self._metric.dim

    @cached_by_point
    def matrix(self, point) -> np.ndarray:
        g = self._metric.matrix(point)
        m = self._base.matrix(point)
        return -np.linalg.inv(g) @ m.T @ g

    @cached_by_point
    def jet(self, point) -> tuple[np.ndarray, np.ndarray]:
        g, dg, _ = self._metric.jet(point)
        m, dm = self._base.jet(point)
        ginv, dginv = _inverse_jet(g, dg)
        star = -ginv @ m.T @ g
        dstar = -(np.einsum("kab,cb,cd->kad", dginv, m, g)
                  + np.einsum("ab,kcb,cd->kad", ginv, dm, g)
                  + np.einsum("ab,cb,kcd->kad", ginv, m, dg))
        return star, dstar


def adjoint_structure(g: MetricField, structure) -> AdjointStructure:
    """The structure P* with g(PE, F) + g(E, P*F) = 0; an involution on fixtures."""
    return AdjointStructure(g, structure)


# --------------------------------------------------------------------------
# Checks
# --------------------------------------------------------------------------

def check_almost_product(structure, pts, tol: float = DEFAULT_TOLERANCE) -> CheckResult:
    """P² = Id at every sample, plus a witness that P is not ±Id anywhere."""
    points = _as_points(pts)
    eye = np.eye(structure.dim)
    tracker = ResidualTracker()
    plus_witness = 0.0
    minus_witness = 0.0
    for p in points:
        m = structure.matrix(p)
        tracker.update(float(np.max(np.abs(m @ m - eye))), _scale_of(m), p)
        plus_witness = max(plus_witness, float(np.max(np.abs(m - eye))))
        minus_witness = max(minus_witness, float(np.max(np.abs(m + eye))))
    details = {"identity_distance": plus_witness, "negated_identity_distance": minus_witness}
    result = tracker.result(tol, details=details)
    has_witness = plus_witness > _IDENTITY_WITNESS_MARGIN and minus_witness > _IDENTITY_WITNESS_MARGIN
    if not has_witness:
        return CheckResult(
            passed=False,
            residual=result.residual,
            raw_residual=result.raw_residual,
            tolerance=tol,
            worst_point=result.worst_point,
            details={**details, "witness_missing": 1.0},
        )
    return result


def check_pairing_identities(g: MetricField, structure, pts, tol: float = 1e-10) -> CheckResult:
    """(P*)² = Id, g(PE, P*F) = −g(E, F), and (P*)* = P at the samples."""
    points = _as_points(pts)
    star = adjoint_structure(g, structure)
    double = adjoint_structure(g, star)
    eye = np.eye(structure.dim)
    tracker = ResidualTracker()
    worst = {"square": 0.0, "pairing": 0.0, "double_adjoint": 0.0}
    for p in points:
        gm = g.matrix(p)
        m = structure.matrix(p)
        ms = star.matrix(p)
        square = float(np.max(np.abs(ms @ ms - eye)))
        # g(P ∂_i, P* ∂_j) + g(∂_i, ∂_j)
        pairing = float(np.max(np.abs(m.T @ gm @ ms + gm)))
        back = float(np.max(np.abs(double.matrix(p) - m)))
        worst["square"] = max(worst["square"], square)
        worst["pairing"] = max(worst["pairing"], pairing)
        worst["double_adjoint"] = max(worst["double_adjoint"], back)
        tracker.update(max(square, pairing, back), _scale_of(m, ms, gm), p)
    return tracker.result(tol, details=worst)


def covariant_derivative_P_at(connection, structure, point) -> np.ndarray:
    """(∇_{∂_i} P)^k_j = ∂_i P^k_j + Γ^k_im P^m_j − Γ^m_ij P^k_m, indexed [i, k, j]."""
    gamma = connection.coefficients(point)
    m, dm = structure.jet(point)
    return (np.einsum("ikj->ikj", dm)
            + np.einsum("kim,mj->ikj", gamma, m)
            - np.einsum("mij,km->ikj", gamma, m))


def product_parallelism_residual(connection, structure, pts) -> ResidualTracker:
    tracker = ResidualTracker()
    for p in _as_points(pts):
        gamma = connection.coefficients(p)
        m, _ = structure.jet(p)
        nabla_p = covariant_derivative_P_at(connection, structure, p)
        tracker.update(float(np.max(np.abs(nabla_p))), _scale_of(gamma, m), p)
    return tracker


@dataclass(frozen=True)
class Certification:
    """Aggregate para-Kähler-like certification outcome."""

    passed: bool
    statistical: CheckResult
    almost_product: CheckResult
    parallelism: CheckResult


def check_para_kahler_like(
    g: MetricField, connection, structure, pts, tol: float = DEFAULT_TOLERANCE
) -> Certification:
    """Statistical structure + almost product structure + ∇P = 0, all at the samples."""
    points = _as_points(pts)
    statistical = check_statistical_structure(g, connection, points, tol)
    almost = check_almost_product(structure, points, tol)
    parallel = product_parallelism_residual(connection, structure, points).result(tol)
    return Certification(
        passed=statistical.passed and almost.passed and parallel.passed,
        statistical=statistical,
        almost_product=almost,
        parallelism=parallel,
    )


def conjugate_parallelism_check(
    g: MetricField, connection, structure, pts, tol: float = DEFAULT_TOLERANCE
) -> CheckResult:
    """∇P = 0 and ∇*P* = 0 vanish together: PASS when both do or neither does."""
    points = _as_points(pts)
    primal = product_parallelism_residual(connection, structure, points)
    dual = product_parallelism_residual(
        conjugate_connection(g, connection), adjoint_structure(g, structure), points
    )
    both_zero = primal.residual <= tol and dual.residual <= tol
    both_nonzero = primal.residual > tol and dual.residual > tol
    worst = primal if primal.residual >= dual.residual else dual
    return CheckResult(
        passed=both_zero or both_nonzero,
        residual=worst.residual,
        raw_residual=worst.raw_residual,
        tolerance=tol,
        worst_point=worst.worst_point,
        details={"primal": primal.residual, "dual": dual.residual},
    )


def _space_form_model(gm: np.ndarray, m: np.ndarray, c: float) -> np.ndarray:
    """(c/4){g_jk δ^l_i − g_ik δ^l_j + g(P∂_j,∂_k) P∂_i − g(P∂_i,∂_k) P∂_j
    + [g(∂_i,P∂_j) − g(P∂_i,∂_j)] P∂_k} as an [l,i,j,k] array."""
    eye = np.eye(gm.shape[0])
    q = gm @ m  # q[i, j] = g(∂_i, P ∂_j)
    model = (np.einsum("jk,li->lijk", gm, eye)
             - np.einsum("ik,lj->lijk", gm, eye)
             + np.einsum("kj,li->lijk", q, m)
             - np.einsum("ki,lj->lijk", q, m)
             + np.einsum("ij,lk->lijk", q - q.T, m))
    return (c / 4.0) * model


def check_space_form(
    g: MetricField, connection, structure, c: float, pts, tol: float = DEFAULT_TOLERANCE
) -> CheckResult:
    """Curvature has the para-Kähler space-form shape with constant ``c``.

    The dual side is verified too: R* must match the same expression with P
    replaced by P*.
    """
    points = _as_points(pts)
    dual_connection = conjugate_connection(g, connection)
    dual_structure = adjoint_structure(g, structure)
    tracker = ResidualTracker()
    worst = {"primal": 0.0, "dual": 0.0}
    for p in points:
        gm = g.matrix(p)
        m = structure.matrix(p)
        r = curvature_at(connection, p).components
        primal = float(np.max(np.abs(r - _space_form_model(gm, m, c))))
        ms = dual_structure.matrix(p)
        r_star = curvature_at(dual_connection, p).components
        dual = float(np.max(np.abs(r_star - _space_form_model(gm, ms, c))))
        worst["primal"] = max(worst["primal"], primal)
        worst["dual"] = max(worst["dual"], dual)
        tracker.update(max(primal, dual), _scale_of(r, r_star, gm, m), p)
    return tracker.result(tol, details=worst)


def fit_space_form_constant(g: MetricField, connection, structure, pts) -> float:
    """Least-squares constant for the space-form shape, fitted at the best-conditioned sample.

    Reporting convenience only: verification must call :func:`check_space_form`
    with the fitted value.
    """
    points = _as_points(pts)
    best = None
    for p in points:
        gm = g.matrix(p)
        m = structure.matrix(p)
        basis = _space_form_model(gm, m, 4.0)  # model is linear in c; c=4 gives the raw bracket
        weight = float(np.einsum("lijk,lijk->", basis, basis))
        if best is None or weight > best[0]:
            best = (weight, p, basis)
    weight, p, basis = best
    if weight == 0.0:
        return 0.0
    r = curvature_at(connection, p).components
    return 4.0 * float(np.einsum("lijk,lijk->", r, basis)) / weight


@dataclass(frozen=True)
class TheoremOutcome:
    """Status of a conditional (theorem-shaped) verification."""

    status: str
    reason: str | None = None
    residual: float | None = None
    data: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == STATUS_PASS


def verify_flatness_theorem(
    g: MetricField, connection, structure, pts, tol: float = DEFAULT_TOLERANCE
) -> TheoremOutcome:
    """Certified para-Kähler-like + constant curvature (dim ≠ 2) must force R = 0.

    When either hypothesis fails the outcome is NOT-APPLICABLE, never FAIL.
    """
    if g.dim == 2:
        return TheoremOutcome(STATUS_NOT_APPLICABLE, reason="dimension 2 is excluded by hypothesis")
    points = _as_points(pts)
    certification = check_para_kahler_like(g, connection, structure, points, tol)
    if not certification.passed:
        return TheoremOutcome(
            STATUS_NOT_APPLICABLE, reason="para-Kähler-like certification failed"
        )
    fit = fit_kurose_constant(g, connection, points, tol)
    if not fit.passed:
        return TheoremOutcome(
            STATUS_NOT_APPLICABLE,
            reason="curvature is not of constant-curvature form",
            data={"constant": fit.constant, "fit_residual": fit.residual},
        )
    tracker = ResidualTracker()
    for p in points:
        r = curvature_at(connection, p).components
        tracker.update(float(np.max(np.abs(r))), _scale_of(g.matrix(p)), p)
    flat = tracker.result(tol)
    status = STATUS_PASS if flat.passed else STATUS_FAIL
    return TheoremOutcome(
        status,
        reason=None if flat.passed else "hypotheses hold but curvature does not vanish",
        residual=flat.residual,
        data={"constant": fit.constant, "max_curvature": flat.raw_residual},
    )
