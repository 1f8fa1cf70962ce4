"""Structured manifests describing a fixture and the checks to run on it.

A manifest is a JSON object.  Metric fixtures carry a chart plus expression
grids; model fixtures name a built-in exponential family instead.  Exactly
one of the two must be present.  All expressions are parsed against the
declared coordinates while loading, so a returned manifest is fully
validated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
import numpy as np

from . import expr as ex
from .expfam import ExpFamilyModel, builtin_model
from .geometry import ChartSpec, ManifoldSpec, MetricField, ExpressionConnection
from .product import ExpressionProductStructure
from .submersion import SubmersionSpec


class ManifestError(ValueError):
    """Malformed or semantically invalid manifest data."""


_TOP_KEYS = {"name", "chart", "params", "metric", "connection", "product",
             "submersion", "model", "checks", "points", "tolerances",
             "space_form_c", "seed"}
_BASE_KEYS = {"chart", "params", "metric", "connection", "product"}
_MODEL_KEYS = {"name", "hyperparams", "alpha", "involution"}


@dataclass(frozen=True)
class Manifest:
    """A validated manifest; ``data`` is the raw JSON tree it came from."""

    name: str
    data: dict
    checks: tuple[str, ...]
    points: int
    tolerances: dict
    seed: int

    @property
    def is_model(self) -> bool:
        return "model" in self.data

    @property
    def is_submersion(self) -> bool:
        return "submersion" in self.data


@dataclass(frozen=True)
class VerificationContext:
    """Runtime objects built from a manifest."""

    kind: str  # "manifold", "submersion" or "model"
    chart: ChartSpec
    manifold: ManifoldSpec | None = None
    submersion: SubmersionSpec | None = None
    model: ExpFamilyModel | None = None
    alphas: tuple[float, ...] = ()
    involution: np.ndarray | None = None
    space_form_c: float | None = None


def load_manifest(path, known_checks=None) -> Manifest:
    """Read and fully validate a manifest file."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as err:
        raise ManifestError(f"cannot read manifest {path}: {err}") from err
    except json.JSONDecodeError as err:
        raise ManifestError(
            f"manifest {path} is not valid JSON: {err.msg} at line {err.lineno} column {err.colno}"
        ) from err
    name = data.get("name") or _stem(path)
    return parse_manifest(data, name=name, known_checks=known_checks)


def _stem(path) -> str:
    text = str(path)
    base = text.rsplit("/", 1)[-1]
    return base.rsplit(".", 1)[0]


def parse_manifest(data, name: str = "manifest", known_checks=None) -> Manifest:
    """Validate a manifest tree and force-build its runtime objects once."""
    if not isinstance(data, dict):
        raise ManifestError("manifest must be a JSON object")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ManifestError(f"unknown manifest keys: {sorted(unknown)}")

    has_metric = "metric" in data
    has_model = "model" in data
    if has_metric == has_model:
        raise ManifestError("manifest must contain exactly one of 'metric' or 'model'")

    checks = data.get("checks")
    if not isinstance(checks, list) or not all(isinstance(c, str) for c in checks) or not checks:
        raise ManifestError("'checks' must be a non-empty list of check names")
    if known_checks is not None:
        bad = [c for c in checks if c not in known_checks]
        if bad:
            raise ManifestError(f"unknown checks: {bad}; known: {sorted(known_checks)}")

    points = data.get("points", 25)
    if not isinstance(points, int) or points < 1:
        raise ManifestError(f"'points' must be a positive integer, got {points!r}")

    tolerances = data.get("tolerances", {})
    if not isinstance(tolerances, dict):
        raise ManifestError("'tolerances' must be an object")
    for key, value in tolerances.items():
        if key not in checks:
            raise ManifestError(f"tolerance override for undeclared check {key!r}")
        if not isinstance(value, (int, float)) or value <= 0:
            raise ManifestError(f"tolerance for {key!r} must be a positive number")

    manifest = Manifest(
        name=str(name),
        data=data,
        checks=tuple(checks),
        points=points,
        tolerances={k: float(v) for k, v in tolerances.items()},
        seed=_declared_seed(data),
    )
    build_context(manifest)  # force full expression validation at load time
    return manifest


def _declared_seed(data: dict) -> int:
    if "chart" in data:
        return int(data["chart"].get("seed", 0))
    return int(data.get("seed", 0))


def _parse_chart(data, where: str, seed_override=None) -> ChartSpec:
    if not isinstance(data, dict):
        raise ManifestError(f"{where}: chart must be an object")
    coords = data.get("coords")
    if not isinstance(coords, list) or not all(isinstance(c, str) for c in coords):
        raise ManifestError(f"{where}: 'coords' must be a list of names")
    box = data.get("box")
    if (not isinstance(box, list) or len(box) != len(coords)
            or not all(isinstance(iv, list) and len(iv) == 2 for iv in box)):
        raise ManifestError(f"{where}: 'box' must list one [low, high] pair per coordinate")
    if "dim" in data and data["dim"] != len(coords):
        raise ManifestError(f"{where}: declared dim {data['dim']} != {len(coords)} coordinates")
    seed = seed_override if seed_override is not None else data.get("seed", 0)
    try:
        return ChartSpec(
            coord_names=tuple(coords),
            domain=tuple((float(lo), float(hi)) for lo, hi in box),
            seed=int(seed),
        )
    except ValueError as err:
        raise ManifestError(f"{where}: {err}") from err


def _parse_field_grid(entries, coords, params, where: str, depth: int):
    n = len(coords)

    def parse_one(text, label):
        if not isinstance(text, str):
            raise ManifestError(f"{where}{label}: expected an expression string, got {text!r}")
        try:
            return ex.parse_expression(text, coords, params)
        except ex.ParseError as err:
            raise ManifestError(f"{where}{label}: {err}") from err

    def check_len(seq, label):
        if not isinstance(seq, list) or len(seq) != n:
            raise ManifestError(f"{where}{label}: expected {n} entries")

    check_len(entries, "")
    if depth == 2:
        grid = []
        for i, row in enumerate(entries):
            check_len(row, f"[{i}]")
            grid.append([parse_one(text, f"[{i}][{j}]") for j, text in enumerate(row)])
        return grid
    grid = []
    for k, plane in enumerate(entries):
        check_len(plane, f"[{k}]")
        rows = []
        for i, row in enumerate(plane):
            check_len(row, f"[{k}][{i}]")
            rows.append([parse_one(text, f"[{k}][{i}][{j}]") for j, text in enumerate(row)])
        grid.append(rows)
    return grid


def _parse_manifold(data, where: str, seed_override=None) -> ManifoldSpec:
    if "chart" not in data:
        raise ManifestError(f"{where}: missing 'chart'")
    if "metric" not in data:
        raise ManifestError(f"{where}: missing 'metric'")
    chart = _parse_chart(data["chart"], where, seed_override)
    params = data.get("params", {})
    if not isinstance(params, dict):
        raise ManifestError(f"{where}: 'params' must be an object")
    coords = chart.coord_names
    metric = MetricField(_parse_field_grid(data["metric"], coords, params, f"{where}.metric", 2))
    connection = None
    if "connection" in data:
        connection = ExpressionConnection(
            _parse_field_grid(data["connection"], coords, params, f"{where}.connection", 3)
        )
    product = None
    if "product" in data:
        product = ExpressionProductStructure(
            _parse_field_grid(data["product"], coords, params, f"{where}.product", 2)
        )
    return ManifoldSpec(chart=chart, metric=metric, connection=connection, product=product)


def build_context(manifest: Manifest, seed=None, _points=None) -> VerificationContext:
    """Materialize the runtime objects, optionally overriding the sampling seed."""
    data = manifest.data
    space_form_c = data.get("space_form_c")
    if space_form_c is not None:
        space_form_c = float(space_form_c)

    if manifest.is_model:
        block = data["model"]
        if not isinstance(block, dict):
            raise ManifestError("'model' must be an object")
        unknown = set(block) - _MODEL_KEYS
        if unknown:
            raise ManifestError(f"unknown model keys: {sorted(unknown)}")
        for key in ("chart", "connection", "product", "submersion"):
            if key in data:
                raise ManifestError(f"model manifests must not carry {key!r}")
        model_name = block.get("name")
        if not isinstance(model_name, str):
            raise ManifestError("model block needs a 'name'")
        hyper = dict(block.get("hyperparams", {}))
        effective_seed = int(seed) if seed is not None else manifest.seed
        try:
            model = builtin_model(model_name, seed=effective_seed, **hyper)
        except ValueError as err:
            raise ManifestError(str(err)) from err
        alphas = block.get("alpha", [-1.0, 0.0, 1.0])
        if not isinstance(alphas, list) or not all(isinstance(a, (int, float)) for a in alphas):
            raise ManifestError("model 'alpha' must be a list of numbers")
        involution = block.get("involution")
        if involution is not None:
            involution = np.asarray(involution, dtype=float)
            if involution.shape != (model.dim, model.dim):
                raise ManifestError(
                    f"involution must be {model.dim}x{model.dim}, got {involution.shape}"
                )
        return VerificationContext(
            kind="model",
            chart=model.chart,
            model=model,
            alphas=tuple(float(a) for a in alphas),
            involution=involution,
            space_form_c=space_form_c,
        )

    total = _parse_manifold(data, "manifest", seed_override=seed)
    if "submersion" in data:
        block = data["submersion"]
        if not isinstance(block, dict) or "base" not in block:
            raise ManifestError("'submersion' must be an object with a 'base' manifold")
        unknown = set(block) - {"base"}
        if unknown:
            raise ManifestError(f"unknown submersion keys: {sorted(unknown)}")
        base_data = block["base"]
        if not isinstance(base_data, dict):
            raise ManifestError("submersion 'base' must be an object")
        unknown = set(base_data) - _BASE_KEYS
        if unknown:
            raise ManifestError(f"unknown base keys: {sorted(unknown)}")
        base = _parse_manifold(base_data, "submersion.base")
        try:
            spec = SubmersionSpec(total=total, base=base)
        except ValueError as err:
            raise ManifestError(str(err)) from err
        return VerificationContext(
            kind="submersion",
            chart=total.chart,
            manifold=total,
            submersion=spec,
            space_form_c=space_form_c,
        )
    return VerificationContext(
        kind="manifold",
        chart=total.chart,
        manifold=total,
        space_form_c=space_form_c,
    )
