"""Charts, metric and connection fields, conjugation, and curvature checks.

Conventions used throughout the package:

* metric jets: ``G[i, j]``, ``dG[k, i, j] = ∂_k g_ij``, ``d2G[k, l, i, j] = ∂_k ∂_l g_ij``
* connections: ``gamma[k, i, j]`` is the coefficient of ``∂_k`` in ``∇_{∂_i} ∂_j``,
  jets ``dgamma[l, k, i, j] = ∂_l Γ^k_ij``
* curvature: ``R[l, i, j, k]`` is the coefficient of ``∂_l`` in ``R(∂_i, ∂_j) ∂_k``
  with sign ``R(E,F)G = ∇_E ∇_F G − ∇_F ∇_E G − ∇_{[E,F]} G``

Residuals are reported twice: ``raw_residual`` is the plain max-norm of the
defect, ``residual`` is the raw value divided by one plus the largest
magnitude among the arrays entering the formula.  The scaled value is the one
compared against tolerances, which separates method error from conditioning.

Every field object is immutable and evaluation allocates fresh arrays, so
fields can be shared and evaluated concurrently; point loops reduce with
``max``, which is order-independent.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import expr as ex

DEFAULT_TOLERANCE = 1e-8
FD_ORACLE_TOLERANCE = 1e-5
DEFAULT_POINT_COUNT = 25

STATUS_PASS = "PASS"
STATUS_FAIL = "FAIL"
STATUS_NOT_APPLICABLE = "NOT-APPLICABLE"
STATUS_ERROR = "ERROR"

_DEGENERACY_CUTOFF = 1e-10
_INTERIOR_MARGIN = 0.01


def cached_by_point(method):
    """Memoize a pure point-evaluation method on the instance, keyed by point bytes.

    Results are copied on the way out, so callers can never corrupt the cache
    and the observable behaviour stays pure; a racing recompute under threads
    just produces the same value twice.
    """
    store_name = f"_cache_{method.__name__}"

    @functools.wraps(method)
    def wrapper(self, point):
        arr = np.asarray(point, dtype=float)
        store = self.__dict__.setdefault(store_name, {})
        key = arr.tobytes()
        hit = store.get(key)
        if hit is None:
            hit = store[key] = method(self, arr)
        if isinstance(hit, tuple):
            return tuple(part.copy() for part in hit)
        return hit.copy()

    return wrapper


class ChartError(ValueError):
    """Invalid chart data (empty box, mismatched names, ...)."""


class MetricError(ArithmeticError):
    """Degenerate metric or non-constant signature."""


class DegeneratePlaneError(ArithmeticError):
    """The requested tangent plane is too close to null."""


# --------------------------------------------------------------------------
# Charts and sampling
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ChartSpec:
    """A single coordinate chart with a sampling box and a sampling seed."""

    coord_names: tuple[str, ...]
    domain: tuple[tuple[float, float], ...]
    seed: int = 0

    def __post_init__(self):
        if len(self.coord_names) != len(self.domain):
            raise ChartError(
                f"{len(self.coord_names)} coordinate names but {len(self.domain)} intervals"
            )
        if len(self.coord_names) == 0:
            raise ChartError("chart must have at least one coordinate")
        for name, (lo, hi) in zip(self.coord_names, self.domain):
            if not lo < hi:
                raise ChartError(f"empty sampling interval [{lo}, {hi}] for coordinate {name!r}")

    @property
    def dim(self) -> int:
        return len(self.coord_names)

    @property
    def center(self) -> np.ndarray:
        return np.array([(lo + hi) / 2.0 for lo, hi in self.domain])


def sample_points(chart: ChartSpec, count: int) -> np.ndarray:
    """Deterministic strictly-interior samples; same chart and seed give identical bits.

    Points stay 1% of the interval width away from each face of the box.
    Returns an array of shape ``(count, dim)``.
    """
    if count < 1:
        raise ValueError(f"count must be positive, got {count}")
    rng = np.random.default_rng(int(chart.seed))
    lows = np.array([lo + _INTERIOR_MARGIN * (hi - lo) for lo, hi in chart.domain])
    highs = np.array([hi - _INTERIOR_MARGIN * (hi - lo) for lo, hi in chart.domain])
    return rng.uniform(lows, highs, size=(count, chart.dim))


def _as_points(pts) -> np.ndarray:
    arr = np.atleast_2d(np.asarray(pts, dtype=float))
    if arr.shape[0] == 0:
        raise ValueError("need at least one sample point")
    return arr


# --------------------------------------------------------------------------
# Metric fields
# --------------------------------------------------------------------------

class MetricField:
    """Symmetric grid of component fields g_ij; only i ≤ j is stored."""

    def __init__(self, components: Sequence[Sequence[ex.ScalarField]]):
        n = len(components)
        dim = components[0][0].arity
        store = {}
        for i in range(n):
            if len(components[i]) != n:
                raise ValueError("metric component grid must be square")
            for j in range(i, n):
                f = components[i][j]
                if f.arity != dim:
                    raise ValueError("metric components disagree on chart arity")
                store[(i, j)] = f
        self._components = store
        self._dim = n

    @classmethod
    def from_strings(
        cls,
        coords: Sequence[str],
        entries: Sequence[Sequence[str]],
        params: Mapping[str, float] | None = None,
    ) -> "MetricField":
        fields = [[ex.parse_expression(text, coords, params) for text in row] for row in entries]
        return cls(fields)

    @property
    def dim(self) -> int:
        return self._dim

    def component(self, i: int, j: int) -> ex.ScalarField:
        return self._components[(i, j) if i <= j else (j, i)]

    @cached_by_point
    def matrix(self, point) -> np.ndarray:
        n = self._dim
        g = np.empty((n, n))
        for i in range(n):
            for j in range(i, n):
                g[i, j] = g[j, i] = ex.eval_value(self.component(i, j), point)
        return g

    @cached_by_point
    def jet(self, point) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(G, dG, d2G) with dG[k,i,j] = ∂_k g_ij and d2G[k,l,i,j] = ∂_k ∂_l g_ij."""
        n = self._dim
        g = np.empty((n, n))
        dg = np.empty((n, n, n))
        d2g = np.empty((n, n, n, n))
        for i in range(n):
            for j in range(i, n):
                data = ex.eval2(self.component(i, j), point)
                g[i, j] = g[j, i] = data.value
                dg[:, i, j] = dg[:, j, i] = data.grad
                d2g[:, :, i, j] = d2g[:, :, j, i] = data.hess
        return g, dg, d2g


def _det_threshold(g: np.ndarray) -> float:
    scale = max(1.0, float(np.max(np.abs(g))))
    return _DEGENERACY_CUTOFF * scale ** g.shape[0]


def metric_matrices_at(g: MetricField, point) -> tuple[np.ndarray, np.ndarray]:
    """(G, G⁻¹) at a point; raises :class:`MetricError` when G is numerically singular."""
    mat = g.matrix(point)
    det = float(np.linalg.det(mat))
    if abs(det) <= _det_threshold(mat):
        raise MetricError(f"singular metric (det {det:.3e}) at point {np.asarray(point).tolist()}")
    inverse = np.linalg.inv(mat)
    return mat, inverse


def metric_signature(g: MetricField, point) -> tuple[int, int]:
    """(positive, negative) eigenvalue counts of G at a point."""
    values = np.linalg.eigvalsh(g.matrix(point))
    return int(np.sum(values > 0.0)), int(np.sum(values < 0.0))


def validate_metric_on_chart(g: MetricField, chart: ChartSpec, pts=None) -> tuple[int, int]:
    """Check nondegeneracy at the samples and signature constancy against the box center."""
    points = _as_points(pts if pts is not None else sample_points(chart, DEFAULT_POINT_COUNT))
    reference = metric_signature(g, chart.center)
    for p in points:
        metric_matrices_at(g, p)
        if metric_signature(g, p) != reference:
            raise MetricError(
                f"metric signature {metric_signature(g, p)} at {p.tolist()} differs from "
                f"{reference} at the box center"
            )
    return reference


# --------------------------------------------------------------------------
# Connection fields
# --------------------------------------------------------------------------

class ExpressionConnection:
    """Connection with explicitly given coefficient fields Γ^k_ij."""

    def __init__(self, coefficients: Sequence[Sequence[Sequence[ex.ScalarField]]]):
        n = len(coefficients)
        dim = coefficients[0][0][0].arity
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    if coefficients[k][i][j].arity != dim:
                        raise ValueError("connection coefficients disagree on chart arity")
        self._fields = tuple(tuple(tuple(row) for row in plane) for plane in coefficients)
        self._dim = n

    @classmethod
    def from_strings(
        cls,
        coords: Sequence[str],
        entries: Sequence[Sequence[Sequence[str]]],
        params: Mapping[str, float] | None = None,
    ) -> "ExpressionConnection":
        fields = [
            [[ex.parse_expression(text, coords, params) for text in row] for row in plane]
            for plane in entries
        ]
        return cls(fields)

    @classmethod
    def zero(cls, coords: Sequence[str]) -> "ExpressionConnection":
        n = len(coords)
        zero = ex.constant_field(0.0, coords)
        return cls([[[zero] * n for _ in range(n)] for _ in range(n)])

    @property
    def dim(self) -> int:
        return self._dim

    @cached_by_point
    def coefficients(self, point) -> np.ndarray:
        n = self._dim
        gamma = np.empty((n, n, n))
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    gamma[k, i, j] = ex.eval_value(self._fields[k][i][j], point)
        return gamma

    @cached_by_point
    def coefficients_jet(self, point) -> tuple[np.ndarray, np.ndarray]:
        n = self._dim
        gamma = np.empty((n, n, n))
        dgamma = np.empty((n, n, n, n))
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    data = ex.eval2(self._fields[k][i][j], point)
                    gamma[k, i, j] = data.value
                    dgamma[:, k, i, j] = data.grad
        return gamma, dgamma


def _inverse_jet(g: np.ndarray, dg: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(G⁻¹, ∂G⁻¹) from (G, ∂G) via ∂(G⁻¹) = −G⁻¹ (∂G) G⁻¹."""
    ginv = np.linalg.inv(g)
    dginv = -np.einsum("ia,kab,bj->kij", ginv, dg, ginv)
    return ginv, dginv


class LeviCivitaConnection:
    """Metric connection Γ⁰^k_ij = ½ g^km (∂_i g_mj + ∂_j g_mi − ∂_m g_ij)."""

    def __init__(self, metric: MetricField):
        self._metric = metric

    @property
    def dim(self) -> int:
        return self._metric.dim

    def coefficients(self, point) -> np.ndarray:
        return self.coefficients_jet(point)[0]

    @cached_by_point
    def coefficients_jet(self, point) -> tuple[np.ndarray, np.ndarray]:
        g, dg, d2g = self._metric.jet(point)
        det = float(np.linalg.det(g))
        if abs(det) <= _det_threshold(g):
            raise MetricError(f"singular metric (det {det:.3e}) while forming the Levi-Civita connection")
        ginv, dginv = _inverse_jet(g, dg)
        # a[m,i,j] = ∂_i g_mj + ∂_j g_mi − ∂_m g_ij
        a = np.einsum("imj->mij", dg) + np.einsum("jmi->mij", dg) - dg
        gamma = 0.5 * np.einsum("km,mij->kij", ginv, a)
        da = (np.einsum("limj->lmij", d2g) + np.einsum("ljmi->lmij", d2g)
              - np.einsum("lmij->lmij", d2g))
        dgamma = 0.5 * (np.einsum("lkm,mij->lkij", dginv, a)
                        + np.einsum("km,lmij->lkij", ginv, da))
        return gamma, dgamma


class ConjugateConnection:
    """Conjugate of a base connection: g(∂_k, ∇*_{∂_i} ∂_j) = ∂_i g_kj − Γ^m_ik g_mj."""

    def __init__(self, metric: MetricField, base):
        if metric.dim != base.dim:
            raise ValueError("metric and connection disagree on dimension")
        self._metric = metric
        self._base = base

    @property
    def dim(self) -> int:
        return self._metric.dim

    @cached_by_point
    def coefficients(self, point) -> np.ndarray:
        g, dg, _ = self._metric.jet(point)
        gamma = self._base.coefficients(point)
        ginv = np.linalg.inv(g)
        rhs = np.einsum("ikj->kij", dg) - np.einsum("mik,mj->kij", gamma, g)
        return np.einsum("tk,kij->tij", ginv, rhs)

    @cached_by_point
    def coefficients_jet(self, point) -> tuple[np.ndarray, np.ndarray]:
        g, dg, d2g = self._metric.jet(point)
        gamma, dgamma = self._base.coefficients_jet(point)
        ginv, dginv = _inverse_jet(g, dg)
        rhs = np.einsum("ikj->kij", dg) - np.einsum("mik,mj->kij", gamma, g)
        star = np.einsum("tk,kij->tij", ginv, rhs)
        drhs = (np.einsum("likj->lkij", d2g)
                - np.einsum("lmik,mj->lkij", dgamma, g)
                - np.einsum("mik,lmj->lkij", gamma, dg))
        dstar = (np.einsum("ltk,kij->ltij", dginv, rhs)
                 + np.einsum("tk,lkij->ltij", ginv, drhs))
        return star, dstar


def levi_civita(g: MetricField) -> LeviCivitaConnection:
    """The Levi-Civita connection of the metric."""
    return LeviCivitaConnection(g)


def conjugate_connection(g: MetricField, connection) -> ConjugateConnection:
    """The conjugate of ``connection`` with respect to ``g``; conjugation is an involution."""
    return ConjugateConnection(g, connection)


# --------------------------------------------------------------------------
# Check plumbing
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    """Outcome of a sampled residual check.

    ``residual`` is scaled by 1 + max |input component| and is what the
    tolerance applies to; ``raw_residual`` is the unscaled max-norm defect.
    """

    passed: bool
    residual: float
    raw_residual: float
    tolerance: float
    worst_point: np.ndarray | None
    details: dict = field(default_factory=dict)


class ResidualTracker:
    """Accumulates the max scaled residual over sampled points."""

    def __init__(self):
        self.residual = 0.0
        self.raw_residual = 0.0
        self.worst_point = None

    def update(self, raw: float, scale: float, point) -> None:
        scaled = raw / scale
        if scaled >= self.residual:
            self.residual = scaled
            self.raw_residual = raw
            self.worst_point = np.array(point, dtype=float)

    def result(self, tolerance: float, details: dict | None = None) -> CheckResult:
        return CheckResult(
            passed=self.residual <= tolerance,
            residual=self.residual,
            raw_residual=self.raw_residual,
            tolerance=tolerance,
            worst_point=self.worst_point,
            details=details or {},
        )


def _scale_of(*arrays) -> float:
    top = 0.0
    for arr in arrays:
        if arr.size:
            top = max(top, float(np.max(np.abs(arr))))
    return 1.0 + top


# --------------------------------------------------------------------------
# Statistical structure and curvature
# --------------------------------------------------------------------------

def check_statistical_structure(g: MetricField, connection, pts, tol: float = DEFAULT_TOLERANCE) -> CheckResult:
    """Torsion-freeness of the connection together with symmetry of ∇g (Codazzi)."""
    points = _as_points(pts)
    tracker = ResidualTracker()
    worst = {"torsion": 0.0, "codazzi": 0.0}
    for p in points:
        gm, dg, _ = g.jet(p)
        gamma = connection.coefficients(p)
        torsion = gamma - np.einsum("kij->kji", gamma)
        # C[i,j,k] = (∇_{∂_i} g)(∂_j, ∂_k)
        cov = dg - np.einsum("mij,mk->ijk", gamma, gm) - np.einsum("mik,jm->ijk", gamma, gm)
        codazzi = cov - np.einsum("ijk->jik", cov)
        raw = max(float(np.max(np.abs(torsion))), float(np.max(np.abs(codazzi))))
        worst["torsion"] = max(worst["torsion"], float(np.max(np.abs(torsion))))
        worst["codazzi"] = max(worst["codazzi"], float(np.max(np.abs(codazzi))))
        tracker.update(raw, _scale_of(gamma, gm, dg), p)
    return tracker.result(tol, details=worst)


@dataclass(frozen=True)
class CurvatureAtPoint:
    """Components R[l,i,j,k] of the curvature tensor at a point.

    Antisymmetry in (i, j) is exact: the tensor is assembled as B − Bᵀ over
    those slots.
    """

    components: np.ndarray
    point: np.ndarray


def curvature_tensor(gamma: np.ndarray, dgamma: np.ndarray) -> np.ndarray:
    """R[l,i,j,k] = ∂_i Γ^l_jk − ∂_j Γ^l_ik + Γ^m_jk Γ^l_im − Γ^m_ik Γ^l_jm."""
    b = np.einsum("iljk->lijk", dgamma) + np.einsum("mjk,lim->lijk", gamma, gamma)
    return b - np.einsum("lijk->ljik", b)


def curvature_at(connection, point) -> CurvatureAtPoint:
    """Curvature of the connection at a point, from exact coefficient jets."""
    gamma, dgamma = connection.coefficients_jet(point)
    return CurvatureAtPoint(curvature_tensor(gamma, dgamma), np.asarray(point, dtype=float))


def statistical_curvature_at(g: MetricField, connection, point) -> np.ndarray:
    """S = ½ (R + R*), the curvature average of the dual pair."""
    r = curvature_at(connection, point).components
    r_star = curvature_at(conjugate_connection(g, connection), point).components
    return 0.5 * (r + r_star)


def sectional_curvature(g: MetricField, connection, point, v, w) -> float:
    """g(S(v,w)w, v) / (g(v,v) g(w,w) − g(v,w)²) for a nondegenerate plane span{v, w}."""
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    gm = g.matrix(point)
    gvv = float(v @ gm @ v)
    gww = float(w @ gm @ w)
    gvw = float(v @ gm @ w)
    disc = gvv * gww - gvw * gvw
    cutoff = _DEGENERACY_CUTOFF * (1.0 + abs(gvv * gww) + gvw * gvw)
    if abs(disc) <= cutoff:
        raise DegeneratePlaneError(
            f"plane discriminant {disc:.3e} below cutoff {cutoff:.3e} at {np.asarray(point).tolist()}"
        )
    s = statistical_curvature_at(g, connection, point)
    numerator = float(np.einsum("al,lijk,i,j,k,a->", gm, s, v, w, w, v))
    return numerator / disc


@dataclass(frozen=True)
class ConstantCurvatureFit:
    """Result of fitting R = k (g_jk δ^l_i − g_ik δ^l_j) over the samples."""

    constant: float
    passed: bool
    residual: float
    raw_residual: float
    tolerance: float
    worst_point: np.ndarray | None


def _best_coordinate_plane(gm: np.ndarray) -> tuple[int, int, float]:
    n = gm.shape[0]
    best = None
    for i in range(n):
        for j in range(i + 1, n):
            disc = float(gm[i, i] * gm[j, j] - gm[i, j] ** 2)
            if best is None or abs(disc) > abs(best[2]):
                best = (i, j, disc)
    cutoff = _DEGENERACY_CUTOFF * (1.0 + float(np.max(np.abs(gm))) ** 2)
    if best is None or abs(best[2]) <= cutoff:
        raise DegeneratePlaneError("no nondegenerate coordinate plane at the first sample point")
    return best


def fit_kurose_constant(g: MetricField, connection, pts, tol: float = DEFAULT_TOLERANCE) -> ConstantCurvatureFit:
    """Estimate the constant of the constant-curvature form of R and verify it globally.

    The constant is estimated at the first sample point from the coordinate
    plane with the largest |g_ii g_jj − g_ij²| (ties to the lowest indices) by
    contracting both sides of the constant-curvature form with the metric.
    """
    points = _as_points(pts)
    first = points[0]
    gm = g.matrix(first)
    i, j, disc = _best_coordinate_plane(gm)
    r = curvature_at(connection, first).components
    # g(R(e_i, e_j) e_j, e_i) = k (g_jj g_ii − g_ij g_ij)
    k_hat = float(np.einsum("l,lm->m", r[:, i, j, j], gm)[i]) / disc
    tracker = ResidualTracker()
    eye = np.eye(g.dim)
    for p in points:
        gp = g.matrix(p)
        rp = curvature_at(connection, p).components
        model = k_hat * (np.einsum("jk,li->lijk", gp, eye) - np.einsum("ik,lj->lijk", gp, eye))
        raw = float(np.max(np.abs(rp - model)))
        tracker.update(raw, _scale_of(rp, gp), p)
    return ConstantCurvatureFit(
        constant=k_hat,
        passed=tracker.residual <= tol,
        residual=tracker.residual,
        raw_residual=tracker.raw_residual,
        tolerance=tol,
        worst_point=tracker.worst_point,
    )


def check_dual_curvature_identity(g: MetricField, connection, pts, tol: float = DEFAULT_TOLERANCE) -> CheckResult:
    """g(R(∂_i,∂_j)∂_k, ∂_l) + g(R*(∂_i,∂_j)∂_l, ∂_k) = 0 at the samples."""
    points = _as_points(pts)
    dual = conjugate_connection(g, connection)
    tracker = ResidualTracker()
    for p in points:
        gm = g.matrix(p)
        r_cov = np.einsum("lm,mijk->ijkl", gm, curvature_at(connection, p).components)
        rs_cov = np.einsum("lm,mijk->ijkl", gm, curvature_at(dual, p).components)
        defect = r_cov + np.einsum("ijlk->ijkl", rs_cov)
        tracker.update(float(np.max(np.abs(defect))), _scale_of(r_cov, rs_cov), p)
    return tracker.result(tol)


def difference_tensor_at(connection, dual_connection, point) -> np.ndarray:
    """K[k,i,j] = Γ^k_ij − Γ*^k_ij; symmetric in (i, j) for statistical pairs."""
    return connection.coefficients(point) - dual_connection.coefficients(point)


# --------------------------------------------------------------------------
# Manifold bundle
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ManifoldSpec:
    """A chart with its attached fields; the unit every verifier operates on."""

    chart: ChartSpec
    metric: MetricField
    connection: object | None = None
    product: object | None = None

    def connection_or_levi_civita(self):
        if self.connection is not None:
            return self.connection
        return levi_civita(self.metric)
