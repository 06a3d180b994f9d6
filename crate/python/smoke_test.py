#!/usr/bin/env python3
"""Smoke test for the smoothext_py extension module.

Build the module first:

    cargo build --release -p smoothext-py

then run this script; it locates the cdylib in target/, stages it under a
temporary directory as an importable module, and drives the main types and
operations end to end.
"""

import json
import math
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def stage_module() -> None:
    candidates = [
        ROOT / "target" / profile / "libsmoothext_py.so"
        for profile in ("release", "debug")
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit(
            "libsmoothext_py.so not found; run `cargo build --release -p smoothext-py`"
        )
    stage = Path(tempfile.mkdtemp(prefix="smoothext_py_"))
    shutil.copy2(built, stage / "smoothext_py.so")
    sys.path.insert(0, str(stage))


stage_module()

import smoothext_py as sx  # noqa: E402

failures = []


def check(name: str, ok: bool, detail: str = "") -> None:
    status = "ok" if ok else "FAIL"
    print(f"  {name:<42} {status} {detail}")
    if not ok:
        failures.append(name)


print("smoothext_py smoke test")

# expression functions with exact jets
omega = json.dumps({"boxes": [[[-2.0, 2.0]]], "open": True})
f = sx.Function(["sin(x1)"], 1, omega)
v = f.value([0.5])[0]
check("Function.value", abs(v - math.sin(0.5)) < 1e-15, f"sin(0.5) = {v:.12f}")
d1 = f.partial([0.5], [1])[0]
check("Function.partial", abs(d1 - math.cos(0.5)) < 1e-12)

# smoothing: polynomial reproduction and convergence
window = json.dumps({"boxes": [[[-1.25, 1.25]]], "open": False})
poly = sx.Function(["1+x1-0.5*x1^2"], 1, omega)
s_poly = sx.smooth(poly, 2, 8, window)
err = max(
    abs(s_poly.value([x / 10 - 1.0])[0] - poly.value([x / 10 - 1.0])[0])
    for x in range(21)
)
check("smooth reproduces polynomials", err < 1e-10, f"max err {err:.2e}")

s = sx.smooth(f, 1, 8, window)
check("Smoothed.term_count", s.term_count() == 21, f"{s.term_count()} terms")
round_trip = sx.Smoothed.from_json(s.to_json())
check(
    "Smoothed JSON round trip",
    round_trip.value([0.3]) == s.value([0.3]),
)

rows = sx.convergence(f, 1, [4, 8, 16, 32])
errs = [r[1][1] for r in rows]
check(
    "convergence strictly decreasing",
    all(b < a for a, b in zip(errs, errs[1:])),
    " -> ".join(f"{e:.2e}" for e in errs),
)

# vector-valued rank witness
vec = sx.Function(["sin(x1)", "2*sin(x1)"], 1, omega)
s_vec = sx.smooth(vec, 1, 8, window)
check("tensor rank of rank-one input", s_vec.tensor_rank() == 1)

# extension operators
cube = json.dumps({"boxes": [[[0.0, 1.0]]], "open": False})
lin = sx.Function(["x1"], 1, cube)
ext = sx.extend_cube_op(lin, 1)
check("extension restriction identity", ext.value([0.5])[0] == 0.5)
check(
    "extension linear continuation",
    abs(ext.value([-0.05])[0] + 0.05) < 1e-12,
    f"E(x)(-0.05) = {ext.value([-0.05])[0]:.6f}",
)

sc = sx.smooth_cube(lin, 1, 16)
cube_err = max(
    abs(sc.value([k / 20])[0] - k / 20) for k in range(21)
)
check("cube smoothing reproduces degree-1", cube_err < 1e-8, f"max err {cube_err:.2e}")

# Dugundji extension off a closed set
y_set = json.dumps({"boxes": {"boxes": [[[0.0, 1.0]]], "open": False}, "points": []})
ident = sx.Function(["x1"], 1)
met = sx.metric_extension(ident, y_set)
check("metric extension restriction", met.value([0.25])[0] == 0.25)
out = met.value([2.0])[0]
check("metric extension convex hull", 0.0 <= out <= 1.0, f"E(id)(2.0) = {out:.6f}")

# partition of unity
total = sum(
    sx.partition_value([z], [0.37]) for z in (-1, 0, 1)
)
check("partition of unity", abs(total - 1.0) < 1e-12, f"sum = {total:.15f}")

# bound certificate over the built-in corpus
constant, ratios, ok = sx.bound_report(1, 1, 8)
check(
    "bound certificate",
    ok and all(g <= constant for _, g, _ in ratios),
    f"C = {constant:.3f}, max ratio {max(g for _, g, _ in ratios):.3f}",
)

print()
if failures:
    sys.exit(f"smoke test FAILED: {failures}")
print("smoke test passed")
