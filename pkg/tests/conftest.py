"""Shared fixture builders and independent finite-difference oracles.

The oracles deliberately avoid the exact-derivative path they check: they
recompute connection coefficients and curvature from central differences of
lower-order quantities.
"""

import numpy as np

from statgeom import build_context, parse_manifest
from statgeom.fixtures import (
    curved_product_manifest,
    flat_product_manifest,
    submersion_manifest,
)
from statgeom.geometry import curvature_tensor


def flat_manifold(pairs=1, k=2.0, epsilons=(1.0,), seed=7):
    """Flat para-product fixture as a ManifoldSpec."""
    data = flat_product_manifest(pairs, k, epsilons, seed=seed)
    return build_context(parse_manifest(data)).manifold


def curved_manifold(pairs=1, k=1.0, l=1.0, epsilons=(1.0,), seed=9):
    """Curved half-plane-power fixture as a ManifoldSpec."""
    data = curved_product_manifest(pairs, k, l, epsilons, seed=seed)
    return build_context(parse_manifest(data)).manifold


def curved_submersion(total_pairs=2, base_pairs=1, k=1.0, l=1.0, epsilons=(1.0, 1.0), seed=11):
    """Coordinate projection between curved fixtures as a SubmersionSpec."""
    data = submersion_manifest(total_pairs, base_pairs, k, l, epsilons, seed=seed)
    return build_context(parse_manifest(data)).submersion


# --------------------------------------------------------------------------
# Finite-difference oracles
# --------------------------------------------------------------------------

def fd_metric_gradient(metric, point, h=1e-5):
    """dG[k,i,j] = ∂_k g_ij by central differences of the metric matrix."""
    p = np.asarray(point, dtype=float)
    n = metric.dim
    out = np.empty((n, n, n))
    for k in range(n):
        e = np.zeros(n)
        e[k] = h
        out[k] = (metric.matrix(p + e) - metric.matrix(p - e)) / (2.0 * h)
    return out


def fd_levi_civita(metric, point, h=1e-5):
    """Christoffel coefficients rebuilt from finite-difference metric derivatives."""
    g = metric.matrix(point)
    dg = fd_metric_gradient(metric, point, h)
    ginv = np.linalg.inv(g)
    a = np.einsum("imj->mij", dg) + np.einsum("jmi->mij", dg) - dg
    return 0.5 * np.einsum("km,mij->kij", ginv, a)


def fd_connection_jet(connection, point, h=1e-5):
    """dgamma[l,k,i,j] = ∂_l Γ^k_ij by central differences of the coefficients."""
    p = np.asarray(point, dtype=float)
    n = connection.dim
    gamma = connection.coefficients(p)
    out = np.empty((n,) + gamma.shape)
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        out[i] = (connection.coefficients(p + e) - connection.coefficients(p - e)) / (2.0 * h)
    return out


def fd_curvature(connection, point, h=1e-5):
    """Curvature with ∂Γ replaced by the finite-difference jet."""
    gamma = connection.coefficients(point)
    return curvature_tensor(gamma, fd_connection_jet(connection, point, h))


def relative_deviation(candidate, reference):
    """max |a − b| / (1 + |b|), the oracle-agreement measure used throughout."""
    a = np.asarray(candidate, dtype=float)
    b = np.asarray(reference, dtype=float)
    return float(np.max(np.abs(a - b) / (1.0 + np.abs(b))))
