#!/usr/bin/env python3
"""Manifest-driven verification: the fixture registry and canonical reports.

Fixtures are JSON manifests; the suite runs their declared checks at
deterministically sampled points and serializes a canonical report whose
bytes are identical across runs with the same inputs.
"""

import tempfile
from pathlib import Path

from statgeom import emit_report, fixture_ids, load_fixture, run_suite
from statgeom.report import render_report

print("built-in fixtures:")
for fixture_id in fixture_ids():
    print("  ", fixture_id)

manifest = load_fixture("example_5_3_k1_l2")
print("\nchecks declared by", manifest.name, ":", list(manifest.checks))

report = run_suite(manifest)
for check in report.checks:
    print(f"  {check.status:>14}  {check.name}  residual={check.residual:.3e}")
print("exit code:", report.exit_code())

# Byte-identical reports: the canonical form sorts keys, formats floats as
# %.12e and excludes wall time.
with tempfile.TemporaryDirectory() as tmp:
    first = Path(tmp) / "first.json"
    second = Path(tmp) / "second.json"
    emit_report(run_suite(manifest), first)
    emit_report(run_suite(manifest), second)
    print("\nreports byte-identical:", first.read_bytes() == second.read_bytes())

print("\nfirst 300 bytes of the canonical report:")
print(render_report(report)[:300], "...")
