#!/usr/bin/env python3
"""Smoke test for the cltbound_py extension module.

Builds nothing itself: it locates the compiled cdylib under target/,
stages it under an importable name, and exercises the bindings.

    cargo build -p cltbound-py
    python3 python/smoke_test.py
"""

import math
import pathlib
import shutil
import sys
import sysconfig
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def stage_module() -> pathlib.Path:
    candidates = [
        ROOT / "target" / profile / "libcltbound_py.so"
        for profile in ("release", "debug")
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("extension not built; run `cargo build -p cltbound-py` first")
    stage = pathlib.Path(tempfile.mkdtemp(prefix="cltbound-py-"))
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    shutil.copy2(built, stage / f"cltbound_py{suffix}")
    return stage


sys.path.insert(0, str(stage_module()))

import cltbound_py as cb  # noqa: E402

checks = 0


def check(name: str, ok: bool) -> None:
    global checks
    checks += 1
    print(f"  {name}: {'ok' if ok else 'FAILED'}")
    if not ok:
        sys.exit(1)


print("cltbound_py smoke test")

check("constants", cb.NAGAEV_CONSTANT == 29.1174 and cb.T_MIN == 3.18)

r = cb.evaluate(3.20, 0.4587, 1.9650)
check("evaluate published row", r.feasible and abs(r.c_value - 28.2363) <= 5e-4)
check("tail/center split", r.b_tail < r.b_center == r.c_value)

bad = cb.evaluate(3.20, 0.46, 1.9650)
check("infeasible candidate reported", not bad.feasible and "range_tau" in bad.violations)

try:
    cb.evaluate(3.0, 0.45, 1.9)
    check("domain gate", False)
except ValueError:
    check("domain gate", True)

opt = cb.optimize(3.20)
check("optimize parity", opt.c_value <= 28.2363 + 0.01 and opt.feasible_count > 0)

rows = cb.table([4.0, 5.0])
check("table rows", len(rows) == 2 and abs(rows[0].c - 22.1853) <= 0.011)
check("nagaev column", abs(rows[1].nagaev - 29.1174 / 126.0) <= 1e-12)

check(
    "normal tail",
    abs(cb.normal_cdf_complement(5.0) - 2.866515718791939e-07) <= 1e-19
    and cb.normal_cdf_complement(0.0) == 0.5,
)

rep = cb.verify(16, 3.3, 4.0, 0.1)
check("rademacher verification", rep.max_ratio <= 1.0 and not rep.violations)

rep = cb.verify(8, 3.3, 3.5, 0.1, dist="two-atom", rho=2.5)
check("two-atom verification", not rep.violations)

rep = cb.verify(8, 3.3, 3.4, 0.1, atoms=[(-2.0, 0.2), (0.5, 0.8)])
check("explicit atoms", not rep.violations)

ci = cb.ci_bound(100, 0.5)
check("ci bound", math.isclose(ci.total, 0.025639, abs_tol=3e-5) and ci.t == 5.0)

print(f"all {checks} checks passed")
