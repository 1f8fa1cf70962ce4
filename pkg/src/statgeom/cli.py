"""Command-line interface: verify manifests, list and describe fixtures.

Exit codes of ``verify``: 0 when every check is PASS or NOT-APPLICABLE,
1 when any check FAILs, 2 when any check ERRORs (or the manifest cannot be
loaded at all).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .fixtures import fixture_ids, fixture_text, load_fixture
from .manifest import ManifestError, load_manifest, parse_manifest
from .report import canonical_json, emit_report, render_report
from .suite import CHECKS, run_suite


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="statgeom",
        description="Numerical verification of statistical-manifold geometry fixtures.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser(
        "verify", help="run the checks declared by a manifest file or fixture id"
    )
    verify.add_argument("manifest", help="path to a manifest JSON file, or a built-in fixture id")
    verify.add_argument("--seed", type=int, default=None, help="override the sampling seed")
    verify.add_argument("--points", type=int, default=None, help="override the sample count")
    verify.add_argument("--tol", type=float, default=None, help="override every check tolerance")
    verify.add_argument("--report", default=None, help="write the canonical report to this path")

    commands.add_parser("list-fixtures", help="list the built-in fixture ids")

    describe = commands.add_parser("describe", help="print a built-in fixture manifest")
    describe.add_argument("fixture", help="fixture id")
    return parser


def _load(reference: str):
    if os.path.exists(reference):
        return load_manifest(reference, known_checks=set(CHECKS))
    return load_fixture(reference, known_checks=set(CHECKS))


def _summarize(report) -> str:
    lines = [f"fixture {report.fixture}  seed {report.seed}  points {report.points}"]
    for check in report.checks:
        parts = [f"{check.status:>14}  {check.name}"]
        if check.residual is not None:
            parts.append(f"residual {check.residual:.3e}")
        if check.tolerance is not None:
            parts.append(f"tol {check.tolerance:.1e}")
        if check.reason:
            parts.append(f"({check.reason})")
        lines.append("  ".join(parts))
    lines.append(f"wall time {report.wall_time_s:.3f}s")
    return "\n".join(lines)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)

    if args.command == "list-fixtures":
        for fixture_id in fixture_ids():
            print(fixture_id)
        return 0

    if args.command == "describe":
        try:
            text = fixture_text(args.fixture)
        except ManifestError as err:
            print(f"error: {err}", file=sys.stderr)
            return 2
        manifest = parse_manifest(json.loads(text), name=args.fixture, known_checks=set(CHECKS))
        print(canonical_json(manifest.data))
        return 0

    try:
        manifest = _load(args.manifest)
    except ManifestError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    report = run_suite(manifest, seed=args.seed, points=args.points, tol=args.tol)
    print(_summarize(report))
    if args.report:
        emit_report(report, args.report)
        print(f"report written to {args.report}")
    else:
        sys.stdout.write(render_report(report))
    return report.exit_code()


if __name__ == "__main__":
    raise SystemExit(main())
