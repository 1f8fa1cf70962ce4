"""Coordinate-projection statistical submersions and their fundamental tensors.

The projection always drops the trailing coordinates, so the vertical space
is the span of the trailing coordinate directions and the pushforward matrix
is exact.  Horizontality is metric-dependent and computed, not assumed: the
vertical projector at a point is v = E (G_vv)⁻¹ G[vert, :], where E selects
the trailing directions and G_vv is the fiber block of the metric.

Vector-field arguments are field objects that expose ``vector(p)`` and
``jet(p) -> (values, jacobian)`` with ``jacobian[i, k] = ∂_i X^k``; the
fundamental tensors differentiate projected fields through these exact jets.
Tensoriality of T and A in both slots is a tested property, not an input
assumption.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import expr as ex
from .geometry import (
    DEFAULT_TOLERANCE,
    cached_by_point,
    DEFAULT_POINT_COUNT,
    STATUS_FAIL,
    STATUS_NOT_APPLICABLE,
    STATUS_PASS,
    ChartSpec,
    CheckResult,
    ManifoldSpec,
    MetricField,
    ResidualTracker,
    _as_points,
    _scale_of,
    check_statistical_structure,
    conjugate_connection,
    curvature_at,
    sample_points,
)
from .product import (
    ExpressionProductStructure,
    TheoremOutcome,
    adjoint_structure,
    check_almost_product,
    check_para_kahler_like,
    fit_space_form_constant,
    check_space_form,
)

_CONDITION_LIMIT = 1e8
_RANK_CUTOFF = 1e-8


class SubmersionError(ArithmeticError):
    """Degenerate fiber metric, ill-conditioned lift, or invariance violation."""


@dataclass(frozen=True)
class SubmersionSpec:
    """Total and base manifolds joined by the drop-trailing-coordinates projection."""

    total: ManifoldSpec
    base: ManifoldSpec

    def __post_init__(self):
        if self.base.chart.dim < 1:
            raise ValueError("base must have at least one coordinate")
        if self.base.chart.dim >= self.total.chart.dim:
            raise ValueError(
                f"base dimension {self.base.chart.dim} must be smaller than the total "
                f"dimension {self.total.chart.dim}"
            )

    @property
    def base_dim(self) -> int:
        return self.base.chart.dim

    @property
    def total_dim(self) -> int:
        return self.total.chart.dim

    @property
    def fiber_dim(self) -> int:
        return self.total.chart.dim - self.base.chart.dim

    def project(self, point) -> np.ndarray:
        return np.asarray(point, dtype=float)[: self.base_dim]


# --------------------------------------------------------------------------
# Projectors and lifts
# --------------------------------------------------------------------------

def _fiber_blocks(spec: SubmersionSpec, g: np.ndarray):
    nb = spec.base_dim
    gvv = g[nb:, nb:]
    det = float(np.linalg.det(gvv))
    scale = max(1.0, float(np.max(np.abs(gvv))))
    if abs(det) <= 1e-10 * scale ** gvv.shape[0]:
        raise SubmersionError(f"degenerate fiber metric block (det {det:.3e})")
    return gvv, g[nb:, :]


def projectors_at(spec: SubmersionSpec, point) -> tuple[np.ndarray, np.ndarray]:
    """(v, h): projection onto the vertical space along its g-orthogonal complement."""
    g = spec.total.metric.matrix(point)
    gvv, gv_rows = _fiber_blocks(spec, g)
    n, nb = spec.total_dim, spec.base_dim
    selector = np.zeros((n, spec.fiber_dim))
    selector[nb:, :] = np.eye(spec.fiber_dim)
    v = selector @ np.linalg.solve(gvv, gv_rows)
    return v, np.eye(n) - v


def _projector_jets(spec: SubmersionSpec, point):
    """(v, h, dv, dh) with dv[i] the coordinate derivative of the vertical projector."""
    g, dg, _ = spec.total.metric.jet(point)
    gvv, gv_rows = _fiber_blocks(spec, g)
    n, nb, f = spec.total_dim, spec.base_dim, spec.fiber_dim
    selector = np.zeros((n, f))
    selector[nb:, :] = np.eye(f)
    gvv_inv = np.linalg.inv(gvv)
    s = gvv_inv @ gv_rows  # f x n vertical-component extractor
    v = selector @ s
    dv = np.empty((n, n, n))
    for i in range(n):
        ds = gvv_inv @ (dg[i][nb:, :] - dg[i][nb:, nb:] @ s)
        dv[i] = selector @ ds
    return v, np.eye(n) - v, dv, -dv


def horizontal_lift_at(spec: SubmersionSpec, base_vector, point) -> np.ndarray:
    """The unique horizontal vector at ``point`` that pushes forward to ``base_vector``."""
    bv = np.asarray(base_vector, dtype=float)
    if bv.shape != (spec.base_dim,):
        raise ValueError(f"base vector of shape {bv.shape}, expected ({spec.base_dim},)")
    g = spec.total.metric.matrix(point)
    gvv, _ = _fiber_blocks(spec, g)
    if np.linalg.cond(gvv) > _CONDITION_LIMIT:
        raise SubmersionError(
            f"horizontal solve is ill-conditioned (cond {np.linalg.cond(gvv):.3e})"
        )
    nb = spec.base_dim
    w = -np.linalg.solve(gvv, g[nb:, :nb] @ bv)
    return np.concatenate([bv, w])


# --------------------------------------------------------------------------
# Vector fields
# --------------------------------------------------------------------------

class CoordinateBasisField:
    """The constant coordinate field ∂_index."""

    def __init__(self, dim: int, index: int):
        if not 0 <= index < dim:
            raise IndexError(f"index {index} out of range for dimension {dim}")
        self.dim = dim
        self.index = index

    def vector(self, point) -> np.ndarray:
        values = np.zeros(self.dim)
        values[self.index] = 1.0
        return values

    def jet(self, point) -> tuple[np.ndarray, np.ndarray]:
        return self.vector(point), np.zeros((self.dim, self.dim))


class ExpressionVectorField:
    """A vector field whose components are expression fields."""

    def __init__(self, components: Sequence[ex.ScalarField]):
        self._components = tuple(components)
        self.dim = len(self._components)
        for f in self._components:
            if f.arity != self.dim:
                raise ValueError("component arity must equal the chart dimension")

    def vector(self, point) -> np.ndarray:
        return np.array([ex.eval_value(f, point) for f in self._components])

    def jet(self, point) -> tuple[np.ndarray, np.ndarray]:
        values = np.empty(self.dim)
        jac = np.empty((self.dim, self.dim))
        for k, f in enumerate(self._components):
            data = ex.eval2(f, point)
            values[k] = data.value
            jac[:, k] = data.grad
        return values, jac


class HorizontalLiftField:
    """The basic field lifting a constant base vector; jets come from metric jets."""

    def __init__(self, spec: SubmersionSpec, base_vector):
        self._spec = spec
        self._bv = np.asarray(base_vector, dtype=float)
        if self._bv.shape != (spec.base_dim,):
            raise ValueError(f"base vector of shape {self._bv.shape}")
        self.dim = spec.total_dim

    def vector(self, point) -> np.ndarray:
        return horizontal_lift_at(self._spec, self._bv, point)

    def jet(self, point) -> tuple[np.ndarray, np.ndarray]:
        spec = self._spec
        nb = spec.base_dim
        g, dg, _ = spec.total.metric.jet(point)
        gvv, _ = _fiber_blocks(spec, g)
        gvv_inv = np.linalg.inv(gvv)
        w = -gvv_inv @ (g[nb:, :nb] @ self._bv)
        values = np.concatenate([self._bv, w])
        jac = np.zeros((self.dim, self.dim))
        for i in range(self.dim):
            dw = -gvv_inv @ (dg[i][nb:, :nb] @ self._bv + dg[i][nb:, nb:] @ w)
            jac[i, nb:] = dw
        return values, jac


class ProjectedField:
    """v·F or h·F as a field, differentiated through the projector's jets."""

    def __init__(self, spec: SubmersionSpec, kind: str, base):
        if kind not in ("v", "h"):
            raise ValueError(f"kind must be 'v' or 'h', got {kind!r}")
        self._spec = spec
        self._kind = kind
        self._base = base
        self.dim = spec.total_dim

    def vector(self, point) -> np.ndarray:
        v, h = projectors_at(self._spec, point)
        proj = v if self._kind == "v" else h
        return proj @ self._base.vector(point)

    def jet(self, point) -> tuple[np.ndarray, np.ndarray]:
        v, h, dv, dh = _projector_jets(self._spec, point)
        proj, dproj = (v, dv) if self._kind == "v" else (h, dh)
        values, jac = self._base.jet(point)
        out_jac = np.empty_like(jac)
        for i in range(self.dim):
            out_jac[i] = dproj[i] @ values + proj @ jac[i]
        return proj @ values, out_jac


class StructureImageField:
    """P·F as a field, for a product structure with jets."""

    def __init__(self, structure, base):
        self._structure = structure
        self._base = base
        self.dim = base.dim

    def vector(self, point) -> np.ndarray:
        return self._structure.matrix(point) @ self._base.vector(point)

    def jet(self, point) -> tuple[np.ndarray, np.ndarray]:
        m, dm = self._structure.jet(point)
        values, jac = self._base.jet(point)
        out_jac = np.empty_like(jac)
        for i in range(self.dim):
            out_jac[i] = dm[i] @ values + m @ jac[i]
        return m @ values, out_jac


def covariant_derivative_field(connection, direction, field_arg, point) -> np.ndarray:
    """(∇_X Y)^k = X^i ∂_i Y^k + Γ^k_im X^i Y^m for a pointwise direction X."""
    x0 = np.asarray(direction, dtype=float)
    gamma = connection.coefficients(point)
    values, jac = field_arg.jet(point)
    return x0 @ jac + np.einsum("kim,i,m->k", gamma, x0, values)


def lie_bracket_at(x_field, y_field, point) -> np.ndarray:
    """[X, Y]^k = X^i ∂_i Y^k − Y^i ∂_i X^k from exact component Jacobians."""
    x0, dx = x_field.jet(point)
    y0, dy = y_field.jet(point)
    return x0 @ dy - y0 @ dx


# --------------------------------------------------------------------------
# Fundamental tensors
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class OneillTensors:
    """T, A and the dual-connection versions, applied to a single field pair."""

    t: np.ndarray
    a: np.ndarray
    t_star: np.ndarray
    a_star: np.ndarray


def oneill_tensors_at(spec: SubmersionSpec, e_field, f_field, point,
                      dual_connection=None) -> OneillTensors:
    """T(E,F) = h ∇_{vE} vF + v ∇_{vE} hF and A(E,F) = v ∇_{hE} hF + h ∇_{hE} vF.

    The starred pair replaces the connection by its conjugate; passing an
    explicit ``dual_connection`` overrides that (used to demonstrate that the
    duality pairings fail for anything other than the true conjugate).
    """
    connection = spec.total.connection_or_levi_civita()
    dual = dual_connection
    if dual is None:
        dual = conjugate_connection(spec.total.metric, connection)
    v, h = projectors_at(spec, point)
    e0 = e_field.vector(point)
    ve, he = v @ e0, h @ e0
    vf = ProjectedField(spec, "v", f_field)
    hf = ProjectedField(spec, "h", f_field)

    def tensors(conn):
        t = h @ covariant_derivative_field(conn, ve, vf, point) \
            + v @ covariant_derivative_field(conn, ve, hf, point)
        a = v @ covariant_derivative_field(conn, he, hf, point) \
            + h @ covariant_derivative_field(conn, he, vf, point)
        return t, a

    t, a = tensors(connection)
    t_star, a_star = tensors(dual)
    return OneillTensors(t=t, a=a, t_star=t_star, a_star=a_star)


def _vertical_fields(spec: SubmersionSpec):
    return [CoordinateBasisField(spec.total_dim, i)
            for i in range(spec.base_dim, spec.total_dim)]


def _basic_lifts(spec: SubmersionSpec):
    return [HorizontalLiftField(spec, np.eye(spec.base_dim)[a]) for a in range(spec.base_dim)]


# --------------------------------------------------------------------------
# Submersion checks
# --------------------------------------------------------------------------

def check_semi_riemannian_submersion(spec: SubmersionSpec, pts, tol: float = DEFAULT_TOLERANCE) -> CheckResult:
    """Horizontal lifts of base frames have the base scalar products: g(X̃, Ỹ) = g'(X', Y')∘π."""
    points = _as_points(pts)
    tracker = ResidualTracker()
    nb = spec.base_dim
    for p in points:
        g = spec.total.metric.matrix(p)
        lifts = np.column_stack([horizontal_lift_at(spec, np.eye(nb)[a], p) for a in range(nb)])
        total_products = lifts.T @ g @ lifts
        base_products = spec.base.metric.matrix(spec.project(p))
        raw = float(np.max(np.abs(total_products - base_products)))
        tracker.update(raw, _scale_of(total_products, base_products), p)
    return tracker.result(tol)


def check_statistical_submersion(spec: SubmersionSpec, pts, tol: float = DEFAULT_TOLERANCE) -> CheckResult:
    """dπ(h ∇_X Y) matches ∇'_{X'} Y' for basic lifts of base coordinate fields."""
    if spec.total.connection is None or spec.base.connection is None:
        raise SubmersionError("statistical-submersion check needs connections on both sides")
    points = _as_points(pts)
    connection = spec.total.connection
    base_connection = spec.base.connection
    lifts = _basic_lifts(spec)
    nb = spec.base_dim
    tracker = ResidualTracker()
    for p in points:
        _, h = projectors_at(spec, p)
        base_gamma = base_connection.coefficients(spec.project(p))
        worst = 0.0
        for a in range(nb):
            xa = lifts[a].vector(p)
            for b in range(nb):
                total_side = (h @ covariant_derivative_field(connection, xa, lifts[b], p))[:nb]
                worst = max(worst, float(np.max(np.abs(total_side - base_gamma[:, a, b]))))
        tracker.update(worst, _scale_of(base_gamma), p)
    return tracker.result(tol)


def check_para_holomorphic(spec: SubmersionSpec, pts, tol: float = DEFAULT_TOLERANCE) -> CheckResult:
    """dπ ∘ P = P' ∘ dπ, with dπ the coordinate truncation matrix."""
    if spec.total.product is None or spec.base.product is None:
        raise SubmersionError("para-holomorphic check needs product structures on both sides")
    points = _as_points(pts)
    nb = spec.base_dim
    tracker = ResidualTracker()
    for p in points:
        m = spec.total.product.matrix(p)
        m_base = spec.base.product.matrix(spec.project(p))
        base_block = float(np.max(np.abs(m[:nb, :nb] - m_base)))
        leak = float(np.max(np.abs(m[:nb, nb:])))
        tracker.update(max(base_block, leak), _scale_of(m, m_base), p)
    return tracker.result(tol)


def isometric_fibers_residual(spec: SubmersionSpec, pts, tol: float = DEFAULT_TOLERANCE) -> CheckResult:
    """max |T(U, V)| over vertical coordinate fields; zero means isometric fibers."""
    points = _as_points(pts)
    verticals = _vertical_fields(spec)
    tracker = ResidualTracker()
    for p in points:
        gamma = spec.total.connection_or_levi_civita().coefficients(p)
        worst = 0.0
        for u in verticals:
            for w in verticals:
                worst = max(worst, float(np.max(np.abs(oneill_tensors_at(spec, u, w, p).t))))
        tracker.update(worst, _scale_of(gamma), p)
    return tracker.result(tol)


def check_fundamental_tensor_identities(
    spec: SubmersionSpec, pts, tol: float = DEFAULT_TOLERANCE, dual_connection=None
) -> CheckResult:
    """Structural identities of T, A and their duals over frames and basic lifts.

    Verifies symmetry of T on vertical pairs, the alternation of A against
    v[X,Y], the skew exchange A_XY = −A*_YX, and both duality pairings
    g(T_U V, X) = −g(V, T*_U X) and g(A_X Y, U) = −g(Y, A*_X U); projector
    algebra (idempotency, complementarity, g-orthogonality) is checked as
    well since the splitting decompositions hold by construction through it.
    """
    points = _as_points(pts)
    verticals = _vertical_fields(spec)
    lifts = _basic_lifts(spec)
    tracker = ResidualTracker()
    worst = {"symmetry_t": 0.0, "alternation_a": 0.0, "skew_exchange": 0.0,
             "pairing_t": 0.0, "pairing_a": 0.0, "projectors": 0.0}
    for p in points:
        g = spec.total.metric.matrix(p)
        v, h = projectors_at(spec, p)
        proj_res = max(
            float(np.max(np.abs(v @ v - v))),
            float(np.max(np.abs(v @ h))),
            float(np.max(np.abs(h.T @ g @ v))),
            float(np.max(np.abs(v + h - np.eye(spec.total_dim)))),
        )
        worst["projectors"] = max(worst["projectors"], proj_res)

        uv_tensors = {}
        for i, u in enumerate(verticals):
            for j, w in enumerate(verticals):
                uv_tensors[(i, j)] = oneill_tensors_at(spec, u, w, p, dual_connection)
        for i in range(len(verticals)):
            for j in range(len(verticals)):
                forward, backward = uv_tensors[(i, j)], uv_tensors[(j, i)]
                worst["symmetry_t"] = max(
                    worst["symmetry_t"],
                    float(np.max(np.abs(forward.t - backward.t))),
                    float(np.max(np.abs(forward.t_star - backward.t_star))),
                )

        xy_tensors = {}
        for a in range(len(lifts)):
            for b in range(len(lifts)):
                xy_tensors[(a, b)] = oneill_tensors_at(spec, lifts[a], lifts[b], p, dual_connection)
        for a in range(len(lifts)):
            for b in range(len(lifts)):
                forward, backward = xy_tensors[(a, b)], xy_tensors[(b, a)]
                bracket = v @ lie_bracket_at(lifts[a], lifts[b], p)
                worst["alternation_a"] = max(
                    worst["alternation_a"],
                    float(np.max(np.abs(forward.a - backward.a - bracket))),
                    float(np.max(np.abs(forward.a_star - backward.a_star - bracket))),
                )
                worst["skew_exchange"] = max(
                    worst["skew_exchange"],
                    float(np.max(np.abs(forward.a + backward.a_star))),
                )

        for i, u in enumerate(verticals):
            for j, w in enumerate(verticals):
                t_uv = uv_tensors[(i, j)].t
                for x in lifts:
                    x0 = x.vector(p)
                    t_star_ux = oneill_tensors_at(spec, u, x, p, dual_connection).t_star
                    w0 = w.vector(p)
                    defect = float(abs(t_uv @ g @ x0 + w0 @ g @ t_star_ux))
                    worst["pairing_t"] = max(worst["pairing_t"], defect)

        for a, x in enumerate(lifts):
            for b, y in enumerate(lifts):
                a_xy = xy_tensors[(a, b)].a
                for u in verticals:
                    u0 = u.vector(p)
                    a_star_xu = oneill_tensors_at(spec, x, u, p, dual_connection).a_star
                    y0 = y.vector(p)
                    defect = float(abs(a_xy @ g @ u0 + y0 @ g @ a_star_xu))
                    worst["pairing_a"] = max(worst["pairing_a"], defect)

        tracker.update(max(worst.values()), _scale_of(g), p)
    return tracker.result(tol, details=worst)


# --------------------------------------------------------------------------
# Induced fiber geometry
# --------------------------------------------------------------------------

def _freeze_metric(metric: MetricField, values) -> MetricField:
    n = metric.dim
    components = [
        [ex.freeze_leading_coordinates(metric.component(i, j), values)
         for j in range(len(values), n)]
        for i in range(len(values), n)
    ]
    return MetricField(components)


class FiberConnection:
    """Connection induced on a fiber: the vertical projection of ∇ (or ∇*)."""

    def __init__(self, spec: SubmersionSpec, base_point, dual: bool = False):
        self._spec = spec
        self._base_point = np.asarray(base_point, dtype=float)
        connection = spec.total.connection_or_levi_civita()
        self._connection = (
            conjugate_connection(spec.total.metric, connection) if dual else connection
        )

    @property
    def dim(self) -> int:
        return self._spec.fiber_dim

    def _embed(self, u) -> np.ndarray:
        return np.concatenate([self._base_point, np.asarray(u, dtype=float)])

    @cached_by_point
    def coefficients(self, u) -> np.ndarray:
        spec = self._spec
        nb, f = spec.base_dim, spec.fiber_dim
        q = self._embed(u)
        g = spec.total.metric.matrix(q)
        gvv, gv_rows = _fiber_blocks(spec, g)
        extractor = np.linalg.solve(gvv, gv_rows)  # f x n
        gamma = self._connection.coefficients(q)
        return np.einsum("ck,kab->cab", extractor, gamma[:, nb:, nb:])

    @cached_by_point
    def coefficients_jet(self, u) -> tuple[np.ndarray, np.ndarray]:
        spec = self._spec
        nb, f = spec.base_dim, spec.fiber_dim
        q = self._embed(u)
        g, dg, _ = spec.total.metric.jet(q)
        gvv, gv_rows = _fiber_blocks(spec, g)
        gvv_inv = np.linalg.inv(gvv)
        extractor = gvv_inv @ gv_rows
        gamma, dgamma = self._connection.coefficients_jet(q)
        block = gamma[:, nb:, nb:]
        hat = np.einsum("ck,kab->cab", extractor, block)
        dhat = np.empty((f, f, f, f))
        for d in range(f):
            i = nb + d
            dext = gvv_inv @ (dg[i][nb:, :] - dg[i][nb:, nb:] @ extractor)
            dhat[d] = (np.einsum("ck,kab->cab", dext, block)
                       + np.einsum("ck,kab->cab", extractor, dgamma[i][:, nb:, nb:]))
        return hat, dhat


def induced_fiber_manifold(
    spec: SubmersionSpec, base_point=None, tol: float = DEFAULT_TOLERANCE
) -> ManifoldSpec:
    """The fiber over a base point (default: base box center) with its induced fields.

    The fiber metric and product structure are the restrictions of the total
    ones with base coordinates frozen; the induced connection is the vertical
    projection of the total connection.  Raises :class:`SubmersionError` when
    the total structure does not keep the vertical space invariant.
    """
    if base_point is None:
        base_point = spec.base.chart.center
    frozen = np.asarray(base_point, dtype=float)
    nb = spec.base_dim
    total_chart = spec.total.chart
    fiber_chart = ChartSpec(
        coord_names=total_chart.coord_names[nb:],
        domain=total_chart.domain[nb:],
        seed=total_chart.seed,
    )
    fiber_metric = _freeze_metric(spec.total.metric, frozen)
    fiber_connection = FiberConnection(spec, frozen)
    fiber_product = None
    if spec.total.product is not None:
        structure = spec.total.product
        if not isinstance(structure, ExpressionProductStructure):
            raise TypeError("fiber restriction needs an expression-backed product structure")
        for u in sample_points(fiber_chart, DEFAULT_POINT_COUNT):
            q = np.concatenate([frozen, u])
            m = structure.matrix(q)
            leak = float(np.max(np.abs(m[:nb, nb:])))
            if leak > tol:
                raise SubmersionError(
                    f"product structure does not preserve the vertical space "
                    f"(leak {leak:.3e} at {q.tolist()})"
                )
        components = [
            [ex.freeze_leading_coordinates(structure._fields[i][j], frozen)
             for j in range(nb, spec.total_dim)]
            for i in range(nb, spec.total_dim)
        ]
        fiber_product = ExpressionProductStructure(components)
    return ManifoldSpec(
        chart=fiber_chart,
        metric=fiber_metric,
        connection=fiber_connection,
        product=fiber_product,
    )


def induced_fiber_connections(spec: SubmersionSpec, base_point=None) -> tuple[FiberConnection, FiberConnection]:
    """The induced connection and the induced dual connection on the fiber."""
    if base_point is None:
        base_point = spec.base.chart.center
    return FiberConnection(spec, base_point), FiberConnection(spec, base_point, dual=True)


# --------------------------------------------------------------------------
# Theorem-level report
# --------------------------------------------------------------------------

def _rank(matrix: np.ndarray) -> int:
    singular = np.linalg.svd(matrix, compute_uv=False)
    if singular.size == 0:
        return 0
    cutoff = _RANK_CUTOFF * max(1.0, float(singular[0]))
    return int(np.sum(singular > cutoff))


@dataclass(frozen=True)
class SubmersionTheoremReport:
    """Per-item outcomes of the structural submersion theorems."""

    items: dict

    @property
    def passed(self) -> bool:
        return all(item.status != STATUS_FAIL for item in self.items.values())


def verify_submersion_theorems(
    spec: SubmersionSpec, pts, tol: float = DEFAULT_TOLERANCE
) -> SubmersionTheoremReport:
    """Check the structure-transfer consequences of a para-product statistical submersion.

    Items (hypothesis failures yield NOT-APPLICABLE, never FAIL):

    * ``fiber_structure``: the fiber carries a statistical structure and an
      almost product structure;
    * ``base_and_fiber_certified``: base and fiber pass the full para-Kähler-like
      certification, provided the total space does and the submersion is
      statistical and para-holomorphic;
    * ``vertical_symmetry``: T(P̂U, P̂V) = T(U, V) on vertical frames;
    * ``horizontal_vanishing``: A = A* = 0 on basic lifts, provided
      rank(P̂ + P̂*) equals the fiber dimension at every sampled fiber point;
    * ``horizontal_integrability``: v[X, Y] = 0 for basic lifts when P̂ = P̂*;
    * ``flat_decomposition``: base and fiber curvature vanish when the total
      space has space-form curvature, the fibers are isometric, and the rank
      condition holds.
    """
    points = _as_points(pts)
    items: dict[str, TheoremOutcome] = {}
    missing = spec.total.product is None or spec.base.product is None
    if missing:
        reason = "total and base product structures are required"
        for name in ("fiber_structure", "base_and_fiber_certified", "vertical_symmetry",
                     "horizontal_vanishing", "horizontal_integrability", "flat_decomposition"):
            items[name] = TheoremOutcome(STATUS_NOT_APPLICABLE, reason=reason)
        return SubmersionTheoremReport(items)

    connection = spec.total.connection_or_levi_civita()
    fiber = induced_fiber_manifold(spec, tol=tol)
    fiber_points = sample_points(fiber.chart, len(points))

    fiber_statistical = check_statistical_structure(
        fiber.metric, fiber.connection, fiber_points, tol
    )
    fiber_almost = check_almost_product(fiber.product, fiber_points, tol)
    items["fiber_structure"] = TheoremOutcome(
        STATUS_PASS if fiber_statistical.passed and fiber_almost.passed else STATUS_FAIL,
        residual=max(fiber_statistical.residual, fiber_almost.residual),
    )

    total_cert = check_para_kahler_like(
        spec.total.metric, connection, spec.total.product, points, tol
    )
    statistical_sub = check_statistical_submersion(spec, points, tol)
    holomorphic = check_para_holomorphic(spec, points, tol)
    if total_cert.passed and statistical_sub.passed and holomorphic.passed:
        base_points = np.array([spec.project(p) for p in points])
        base_cert = check_para_kahler_like(
            spec.base.metric, spec.base.connection_or_levi_civita(),
            spec.base.product, base_points, tol,
        )
        fiber_cert = check_para_kahler_like(
            fiber.metric, fiber.connection, fiber.product, fiber_points, tol
        )
        items["base_and_fiber_certified"] = TheoremOutcome(
            STATUS_PASS if base_cert.passed and fiber_cert.passed else STATUS_FAIL,
            residual=max(base_cert.parallelism.residual, fiber_cert.parallelism.residual),
        )
    else:
        items["base_and_fiber_certified"] = TheoremOutcome(
            STATUS_NOT_APPLICABLE,
            reason="total space is not a certified para-product statistical submersion",
        )

    verticals = _vertical_fields(spec)
    tracker = ResidualTracker()
    for p in points:
        m = spec.total.product.matrix(p)
        worst = 0.0
        for u in verticals:
            for w in verticals:
                plain = oneill_tensors_at(spec, u, w, p).t
                twisted = oneill_tensors_at(
                    spec,
                    StructureImageField(spec.total.product, u),
                    StructureImageField(spec.total.product, w),
                    p,
                ).t
                worst = max(worst, float(np.max(np.abs(twisted - plain))))
        tracker.update(worst, _scale_of(m), p)
    vertical_symmetry = tracker.result(tol)
    items["vertical_symmetry"] = TheoremOutcome(
        STATUS_PASS if vertical_symmetry.passed else STATUS_FAIL,
        residual=vertical_symmetry.residual,
    )

    fiber_adjoint = adjoint_structure(fiber.metric, fiber.product)
    ranks = []
    parity_gap = 0.0
    for u in fiber_points:
        m_hat = fiber.product.matrix(u)
        m_hat_star = fiber_adjoint.matrix(u)
        ranks.append(_rank(m_hat + m_hat_star))
        parity_gap = max(parity_gap, float(np.max(np.abs(m_hat - m_hat_star))))
    min_rank = min(ranks)

    lifts = _basic_lifts(spec)
    a_tracker = ResidualTracker()
    bracket_tracker = ResidualTracker()
    for p in points:
        worst_a = 0.0
        worst_bracket = 0.0
        v, _ = projectors_at(spec, p)
        for x in lifts:
            for y in lifts:
                tensors = oneill_tensors_at(spec, x, y, p)
                worst_a = max(worst_a, float(np.max(np.abs(tensors.a))),
                              float(np.max(np.abs(tensors.a_star))))
                worst_bracket = max(
                    worst_bracket,
                    float(np.max(np.abs(v @ lie_bracket_at(x, y, p)))),
                )
        scale = _scale_of(spec.total.metric.matrix(p))
        a_tracker.update(worst_a, scale, p)
        bracket_tracker.update(worst_bracket, scale, p)

    if min_rank == spec.fiber_dim:
        a_result = a_tracker.result(tol)
        items["horizontal_vanishing"] = TheoremOutcome(
            STATUS_PASS if a_result.passed else STATUS_FAIL,
            residual=a_result.residual,
            data={"rank": float(min_rank)},
        )
    else:
        items["horizontal_vanishing"] = TheoremOutcome(
            STATUS_NOT_APPLICABLE,
            reason=f"rank(P̂ + P̂*) = {min_rank} is below the fiber dimension {spec.fiber_dim}",
            data={"rank": float(min_rank)},
        )

    if parity_gap <= tol:
        bracket_result = bracket_tracker.result(tol)
        items["horizontal_integrability"] = TheoremOutcome(
            STATUS_PASS if bracket_result.passed else STATUS_FAIL,
            residual=bracket_result.residual,
        )
    else:
        items["horizontal_integrability"] = TheoremOutcome(
            STATUS_NOT_APPLICABLE,
            reason=f"fiber structure is not self-adjoint (gap {parity_gap:.3e})",
        )

    isometric = isometric_fibers_residual(spec, points, tol)
    space_constant = fit_space_form_constant(
        spec.total.metric, connection, spec.total.product, points
    )
    space_form = check_space_form(
        spec.total.metric, connection, spec.total.product, space_constant, points, tol
    )
    if space_form.passed and isometric.passed and min_rank == spec.fiber_dim:
        flat_tracker = ResidualTracker()
        base_connection = spec.base.connection_or_levi_civita()
        for p in points:
            r_base = curvature_at(base_connection, spec.project(p)).components
            flat_tracker.update(float(np.max(np.abs(r_base))),
                                _scale_of(spec.base.metric.matrix(spec.project(p))), p)
        for u in fiber_points:
            r_fiber = curvature_at(fiber.connection, u).components
            flat_tracker.update(float(np.max(np.abs(r_fiber))),
                                _scale_of(fiber.metric.matrix(u)), u)
        flat = flat_tracker.result(tol)
        items["flat_decomposition"] = TheoremOutcome(
            STATUS_PASS if flat.passed else STATUS_FAIL,
            residual=flat.residual,
            data={"space_form_constant": space_constant},
        )
    else:
        reasons = []
        if not space_form.passed:
            reasons.append("total curvature is not of space-form shape")
        if not isometric.passed:
            reasons.append("fibers are not isometric")
        if min_rank != spec.fiber_dim:
            reasons.append("rank condition fails")
        items["flat_decomposition"] = TheoremOutcome(
            STATUS_NOT_APPLICABLE, reason="; ".join(reasons),
            data={"space_form_constant": space_constant},
        )
    return SubmersionTheoremReport(items)
