"""Exponential-family models: potential, Fisher metric, and the α-connection family.

The Fisher metric of a regular exponential family is the Hessian of the
log-partition potential in natural coordinates, g_ij = ∂_i ∂_j ψ.  Components
are materialized by differentiating the potential's expression tree twice, so
the metric (and its own first and second derivatives, needed for conjugation
and curvature) all evaluate exactly.  The α-connections are

    Γ^(α)t_ij = ((1 − α) / 2) (∂_s g_ij) g^st,

torsion-free by the total symmetry of ∂∂∂ψ, with ∇^(−α) conjugate to ∇^(α).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import expr as ex
from .geometry import (
    ChartSpec,
    cached_by_point,
    DEFAULT_POINT_COUNT,
    MetricField,
    MetricError,
    _inverse_jet,
    sample_points,
)

BUILTIN_MODEL_NAMES = ("poisson", "normal", "multinomial", "dirichlet")


@dataclass(frozen=True)
class ExpFamilyModel:
    """A regular exponential family in natural coordinates."""

    name: str
    psi: ex.ScalarField
    chart: ChartSpec

    @property
    def dim(self) -> int:
        return self.chart.dim


def builtin_model(name: str, **hyperparams) -> ExpFamilyModel:
    """One of the built-in families: poisson, normal, multinomial(m, trials), dirichlet(dim).

    Sampling boxes stay inside the natural-parameter domains, away from
    boundary singularities.
    """
    seed = int(hyperparams.pop("seed", 0))
    if name == "poisson":
        _reject_extras(name, hyperparams)
        chart = ChartSpec(("t1",), ((-1.0, 1.0),), seed=seed)
        psi = ex.parse_expression("exp(t1)", chart.coord_names)
    elif name == "normal":
        _reject_extras(name, hyperparams)
        chart = ChartSpec(("t1", "t2"), ((-1.0, 1.0), (-2.0, -0.2)), seed=seed)
        psi = ex.parse_expression(
            "-(t1*t1)/(4*t2) + 0.5*log(-pi/t2)", chart.coord_names, {"pi": math.pi}
        )
    elif name == "multinomial":
        m = int(hyperparams.pop("categories", 0))
        trials = int(hyperparams.pop("trials", 1))
        _reject_extras(name, hyperparams)
        if m < 2:
            raise ValueError(f"multinomial needs at least 2 categories, got {m}")
        if trials < 1:
            raise ValueError(f"multinomial needs at least 1 trial, got {trials}")
        names = tuple(f"t{i + 1}" for i in range(m - 1))
        chart = ChartSpec(names, tuple([(-1.0, 1.0)] * (m - 1)), seed=seed)
        total = " + ".join(f"exp({c})" for c in names)
        psi = ex.parse_expression(f"N*log(1 + {total})", names, {"N": float(trials)})
    elif name == "dirichlet":
        dim = int(hyperparams.pop("dim", 0))
        _reject_extras(name, hyperparams)
        if dim < 2:
            raise ValueError(f"dirichlet needs dimension at least 2, got {dim}")
        names = tuple(f"t{i + 1}" for i in range(dim))
        chart = ChartSpec(names, tuple([(0.5, 3.0)] * dim), seed=seed)
        parts = " + ".join(f"lgamma({c})" for c in names)
        total = " + ".join(names)
        psi = ex.parse_expression(f"{parts} - lgamma({total})", names)
    else:
        raise ValueError(f"unknown model {name!r}; known: {', '.join(BUILTIN_MODEL_NAMES)}")
    return ExpFamilyModel(name=name, psi=psi, chart=chart)


def _reject_extras(name: str, extras: dict) -> None:
    if extras:
        raise ValueError(f"unexpected hyperparameters for {name!r}: {sorted(extras)}")


def fisher_metric(model: ExpFamilyModel, validation_points: int = DEFAULT_POINT_COUNT) -> MetricField:
    """Hessian-of-potential metric, validated positive definite on the sampling box."""
    n = model.dim
    first = [model.psi.differentiate(i) for i in range(n)]
    components = [[first[min(i, j)].differentiate(max(i, j)) for j in range(n)] for i in range(n)]
    metric = MetricField(components)
    for p in sample_points(model.chart, validation_points):
        values = np.linalg.eigvalsh(metric.matrix(p))
        if not np.all(values > 0.0):
            raise MetricError(
                f"Fisher metric of {model.name!r} is not positive definite at {p.tolist()} "
                f"(eigenvalues {values.tolist()})"
            )
    return metric


class AlphaConnection:
    """The α-connection of a model, computed from the metric's exact jets."""

    def __init__(self, metric: MetricField, alpha: float):
        self._metric = metric
        self.alpha = float(alpha)

    @property
    def dim(self) -> int:
        return self._metric.dim

    @cached_by_point
    def coefficients(self, point) -> np.ndarray:
        factor = 0.5 * (1.0 - self.alpha)
        if factor == 0.0:
            n = self._metric.dim
            return np.zeros((n, n, n))
        g, dg, _ = self._metric.jet(point)
        ginv = np.linalg.inv(g)
        return factor * np.einsum("sij,st->tij", dg, ginv)

    @cached_by_point
    def coefficients_jet(self, point) -> tuple[np.ndarray, np.ndarray]:
        factor = 0.5 * (1.0 - self.alpha)
        n = self._metric.dim
        if factor == 0.0:
            return np.zeros((n, n, n)), np.zeros((n, n, n, n))
        g, dg, d2g = self._metric.jet(point)
        ginv, dginv = _inverse_jet(g, dg)
        gamma = factor * np.einsum("sij,st->tij", dg, ginv)
        dgamma = factor * (np.einsum("lsij,st->ltij", d2g, ginv)
                           + np.einsum("sij,lst->ltij", dg, dginv))
        return gamma, dgamma


def alpha_connection(model: ExpFamilyModel, alpha: float) -> AlphaConnection:
    """Γ^(α)t_ij = ((1 − α)/2) (∂_s g_ij) g^st for the model's Fisher metric."""
    if not math.isfinite(alpha):
        raise ValueError(f"alpha must be finite, got {alpha}")
    return AlphaConnection(fisher_metric(model), alpha)


class MetricTwistedStructure:
    """The companion structure of a constant involution ``a``: components −a_s^k g_ki g^sj.

    In matrix form (acting on component columns) this is −G⁻¹ aᵀ G pointwise;
    its relation to the negative adjoint of the constant structure is pinned
    by the regression suite rather than assumed.
    """

    def __init__(self, metric: MetricField, a: np.ndarray):
        self._metric = metric
        self._a = np.array(a, dtype=float)

    @property
    def dim(self) -> int:
        return self._metric.dim

    @cached_by_point
    def matrix(self, point) -> np.ndarray:
        g = self._metric.matrix(point)
        return -np.linalg.inv(g) @ self._a.T @ g

    @cached_by_point
    def jet(self, point) -> tuple[np.ndarray, np.ndarray]:
        g, dg, _ = self._metric.jet(point)
        ginv, dginv = _inverse_jet(g, dg)
        m = -ginv @ self._a.T @ g
        dm = -(np.einsum("kab,cb,cd->kad", dginv, self._a, g)
               + np.einsum("ab,cb,kcd->kad", ginv, self._a, dg))
        return m, dm


def exp_para_structures(model: ExpFamilyModel, a) -> tuple:
    """The constant structure with components ``a`` and its metric-twisted companion.

    ``a`` must be an involutive matrix other than ±Id (which rules out
    one-dimensional models).  The first structure pairs with the exponential
    connection (α = 1), the second with the mixture connection (α = −1).
    """
    mat = np.asarray(a, dtype=float)
    n = model.dim
    if n < 2:
        raise ValueError("no admissible involution exists in dimension 1 (only ±identity)")
    if mat.shape != (n, n):
        raise ValueError(f"involution must be {n}x{n}, got {mat.shape}")
    eye = np.eye(n)
    if not np.allclose(mat @ mat, eye, atol=1e-12):
        raise ValueError("matrix is not an involution (a @ a != identity)")
    if np.allclose(mat, eye, atol=1e-12) or np.allclose(mat, -eye, atol=1e-12):
        raise ValueError("involution must differ from plus or minus the identity")
    from .product import ExpressionProductStructure

    constant = ExpressionProductStructure.from_constant(mat, model.chart.coord_names)
    twisted = MetricTwistedStructure(fisher_metric(model), mat)
    return constant, twisted
