#!/usr/bin/env python3
"""Smoke test of the `_frontlab` extension module.

Builds the cdylib with cargo (unless FRONTLAB_SKIP_BUILD is set), copies it
next to this script under the importable name, and exercises the main entry
points: classification, critical speed, wave profile, the PDE solver, and
phase-plane shooting.

Run from the repository root:

    python3 python/smoke_test.py
"""

import math
import os
import shutil
import subprocess
import sys

HERE = os.path.dirname(os.path.abspath(__file__))
ROOT = os.path.dirname(HERE)


def build_and_stage():
    if not os.environ.get("FRONTLAB_SKIP_BUILD"):
        subprocess.run(
            ["cargo", "build", "-p", "frontlab-py", "--release"],
            cwd=ROOT,
            check=True,
        )
    built = os.path.join(ROOT, "target", "release", "lib_frontlab.so")
    if sys.platform == "darwin":
        built = os.path.join(ROOT, "target", "release", "lib_frontlab.dylib")
    staged = os.path.join(HERE, "_frontlab.so")
    shutil.copyfile(built, staged)
    sys.path.insert(0, HERE)


def approx(a, b, tol):
    return abs(a - b) <= tol


def main():
    build_and_stage()
    import _frontlab as fl

    failures = []

    def check(name, ok, detail=""):
        status = "PASS" if ok else "FAIL"
        print(f"[{status}] {name} {detail}")
        if not ok:
            failures.append(name)

    # classification of the bistable catalog entry
    cls = fl.classify("bistable:0.3", 2.0, 1)
    check("bistable moment", approx(cls.hosono, 0.025, 1e-8), f"hosono={cls.hosono:.6f}")
    check("bistable sign change", approx(cls.a, 0.3, 1e-12))
    check("fujita exponent", cls.fujita_exponent == 4.0)

    # the logistic m = 2 front has speed exactly 1
    sp = fl.critical_speed("logistic", 2.0, tol=1e-4)
    check("critical speed", approx(sp.c_star, 1.0, 1e-3), f"c*={sp.c_star:.5f}")
    check("speed bound", sp.c_star <= 2.0 * math.sqrt(sp.sigma_bound) + 1e-4)

    # profile oracle: V(xi) = 1 - exp(xi/2)
    prof = fl.wave_profile("logistic", 2.0, tol=1e-4)
    v = prof.eval(-2.0)
    check("profile value", approx(v, 1.0 - math.exp(-1.0), 1e-3), f"V(-2)={v:.5f}")
    check("front is sharp", prof.eval(0.0) == 0.0 and prof.eval(5.0) == 0.0)
    check(
        "front pressure slope",
        approx(prof.front_pressure_slope(), -sp.c_star, 0.01),
        f"slope={prof.front_pressure_slope():.4f}",
    )

    # shooting outcomes bracket the critical speed
    out_lo, _ = fl.shoot("logistic", 2.0, 0.5)
    out_hi, _ = fl.shoot("logistic", 2.0, 1.2)
    check("subcritical overshoots", out_lo == "overshoot", out_lo)
    check("supercritical connects", out_hi == "connected", out_hi)

    # a spreading box: late front speed near c*
    sim = fl.simulate(
        "logistic", 2.0, "box:1,-5,5", -20.0, 60.0, 0.05, 30.0, 1.0,
        allow_contact=True,
    )
    check("positivity", min(sim.final_u) >= 0.0)
    zs = [f[1] for f in sim.fronts if f is not None]
    ts = [t for t, f in zip(sim.times, sim.fronts) if f is not None]
    n = len(ts)
    late_t, late_z = ts[n // 2 :], zs[n // 2 :]
    slope = (late_z[-1] - late_z[0]) / (late_t[-1] - late_t[0])
    check("front speed", approx(slope, 1.0, 0.03), f"speed={slope:.4f}")

    print()
    if failures:
        print(f"{len(failures)} smoke checks failed: {', '.join(failures)}")
        return 1
    print("all smoke checks passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
