#!/usr/bin/env python3
"""Smoke test for the janus_py extension module.

Builds nothing itself: expects `cargo build -p janus-py` (or --release) to
have produced target/{debug,release}/libjanus_py.so. Copies the shared
object into a temp dir under the importable name and exercises one call of
each flavor against known values.
"""

import math
import pathlib
import shutil
import sys
import tempfile


def import_janus_py():
    root = pathlib.Path(__file__).resolve().parent.parent
    candidates = [
        root / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libjanus_py.so", "janus_py.so", "libjanus_py.dylib")
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("libjanus_py not found; run `cargo build -p janus-py` first")
    stage = pathlib.Path(tempfile.mkdtemp(prefix="janus_py_"))
    shutil.copy2(built, stage / "janus_py.so")
    sys.path.insert(0, str(stage))
    import janus_py

    return janus_py


def approx(got, want, tol, label):
    if not math.isfinite(got) or abs(got - want) > tol:
        sys.exit(f"FAIL {label}: got {got!r}, want {want} ± {tol}")
    print(f"ok  {label:<34} {got:.12g}")


def main():
    jp = import_janus_py()

    # Squeezing polynomial cores are exact integers.
    assert jp.poly_coeffs(5, 5) == [0, 0, 0, 225, 600, 120], "P_(5,5) core"
    print("ok  poly_coeffs(5, 5)               [0, 0, 0, 225, 600, 120]")

    # Series and closed form agree inside the disk.
    z = 0.31 - 0.42j
    approx(abs(jp.f_series(3, 5, z) - jp.f_closed(3, 5, z)), 0.0, 1e-12, "f_series vs f_closed")

    # A coherent state is Poissonian.
    coherent = jp.JanusSpec.single(0.0, 0.0, 0.9 + 0.2j)
    approx(jp.gk(coherent, k=2), 1.0, 1e-12, "coherent g2")

    # The antipodal pair halves g2 as r -> 0 ...
    approx(jp.gk(jp.JanusSpec.antisymmetric(0.01, 0j), k=2), 0.5, 1e-5, "antisym g2, r=0.01")

    # ... and at finite r closed form and Fock oracle still agree.
    cat = jp.JanusSpec.antisymmetric(0.5, 0j)
    approx(jp.gk(cat, k=2) - jp.gk_fock(cat, k=2), 0.0, 1e-9, "g2 closed vs oracle")

    # Interference makes the cat's Wigner function genuinely negative.
    summary = jp.wigner_summary(cat)
    approx(summary["integral"], 1.0, 1e-6, "wigner integral")
    if summary["min_value"] > -0.10:
        sys.exit(f"FAIL wigner minimum: {summary['min_value']} not below -0.10")
    print(f"ok  wigner minimum                  {summary['min_value']:.12g}")
    pt = jp.wigner_point(cat, summary["min_q"], summary["min_p"])
    approx(pt - summary["min_value"], 0.0, 1e-12, "wigner point at minimum")

    # Displacement-phase QFI: 4 Var n, here ~ 4|alpha|^2 (1 + 4|alpha|^2).
    probe = jp.JanusSpec.antisymmetric(0.01, 1.0 + 0j)
    approx(jp.qfi_dphase(probe), 20.0, 0.1, "qfi dphase, cat probe")
    approx(jp.qfi_dphase_numeric(probe, dl=1e-3), jp.qfi_dphase(probe), 1e-2, "qfi numeric route")

    # Quadratic-generator QFI on vacuum is exactly 2.
    vacuum = jp.JanusSpec.single(0.0, 0.0, 0j)
    approx(jp.qfi_gsq(vacuum), 2.0, 1e-9, "qfi gsq, vacuum")

    # Weight optimization at r = 0.3: formula vs family minimum at rho = 1.
    formula, best_ratio, family_min = jp.optimized_g2(0.3)
    approx(formula, 0.5739617625, 1e-9, "optimized g2 formula")
    approx(best_ratio, 1.0, 1e-3, "optimized g2 ratio")
    approx(family_min, 0.5224182410, 1e-9, "optimized g2 family minimum")

    # JSON round trip is stable.
    text = cat.to_json()
    assert jp.JanusSpec.from_json(text).to_json() == text, "JSON round trip"
    print("ok  JSON round trip")

    print("smoke test: PASS")


if __name__ == "__main__":
    main()
