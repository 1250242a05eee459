#!/usr/bin/env python3
"""Smoke test for the gradlab Python extension.

Builds nothing itself: expects the cdylib to exist already, e.g.

    cargo build -p gradlab-py --release
    python3 python/smoke_test.py
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path


def import_gradlab():
    root = Path(__file__).resolve().parent.parent
    candidates = [
        root / "target" / "release" / "libgradlab.so",
        root / "target" / "debug" / "libgradlab.so",
        root / "target" / "release" / "libgradlab.dylib",
        root / "target" / "debug" / "libgradlab.dylib",
    ]
    lib = next((c for c in candidates if c.exists()), None)
    if lib is None:
        sys.exit("build the extension first: cargo build -p gradlab-py --release")
    staging = Path(tempfile.mkdtemp(prefix="gradlab_py_"))
    suffix = ".so" if lib.suffix == ".so" else ".so"  # CPython loads .so on mac too
    shutil.copy2(lib, staging / f"gradlab{suffix}")
    sys.path.insert(0, str(staging))
    import gradlab

    return gradlab


def close(a, b, rtol=1e-12):
    return abs(a - b) <= rtol * max(abs(a), abs(b), 1e-300)


def main():
    gl = import_gradlab()
    print(f"gradlab {gl.__version__} loaded")

    # problem construction and exact gradients
    p = gl.QuadraticProblem.from_spectrum([4.0, 1.0], [1.0, 1.0])
    assert p.dim == 2
    assert p.gradient([0.0, 0.0]) == [-4.0, -1.0]
    assert p.objective([1.0, 1.0]) == 0.0
    assert p.matvec_power([1.0, 1.0], 2.0) == [16.0, 1.0]

    # step rules on a textbook state
    s, y = [-1.0, -1.0], [-4.0, -1.0]
    assert close(gl.bb1_alpha(s, y), 2.5)
    assert close(gl.bb2_alpha(s, y), 3.4)
    assert close(gl.rbb_alpha(s, y, 1.0), 22.0 / 7.0)
    assert gl.bb1_alpha(s, y) <= gl.rbb_alpha(s, y, 1.0) <= gl.bb2_alpha(s, y)

    # reference benchmark: log-spaced spectrum, kappa = 1e3
    bench = gl.QuadraticProblem.deasmundis(5, 3.0)
    assert close(bench.condition_number(), 1e3)
    bb1 = gl.run(bench, "bb1")
    assert bb1.status == "converged", bb1.status
    assert 247 <= bb1.iterations <= 263, bb1.iterations
    rbb = gl.run(bench, "rbb", tau="ratio_mu1")
    assert rbb.status == "converged"
    assert 105 <= rbb.iterations <= 129, rbb.iterations
    print(f"benchmark counts: bb1={bb1.iterations}, rbb={rbb.iterations}")

    # diagnostics on a high-precision trace
    t = gl.run(bench, "bb1", rel_tol=1e-10, gradient_mode="recursive")
    lam = bench.condition_number()
    checked = 0
    for i in range(1, len(t.xi) - 1):
        if t.xi[i] is None or t.r[i - 1] in (None, 0.0):
            continue
        assert 0.0 < t.xi[i] < 1.0 - 1.0 / lam + 1e-12
        pred = gl.xi_formula(t.r[i - 1], t.eta[i - 1], t.eta_bar[i - 1], lam, t.taus[i] or 0.0)
        assert close(t.xi[i], pred, 1e-8)
        checked += 1
    assert checked > 50
    print(f"xi identity checked on {checked} rows")

    # trace CSV schema
    header = t.to_csv().splitlines()[0]
    assert header == "k,f,grad_norm,alpha,tau,r,xi,eta,eta_bar,h", header

    # characteristic roots
    roots = gl.char_roots(2)
    for re, im, modulus, residual in roots:
        assert close(modulus, math.sqrt(2.0), 1e-10)
        assert residual <= 1e-10
    roots3 = gl.char_roots(3)
    assert any(close(re, -1.0, 1e-9) and abs(im) < 1e-10 for re, im, _, _ in roots3)
    pair, theta = gl.rbb_char_roots()
    assert all(close(m, 1.0) for _, _, m, _ in pair)
    assert close(theta, math.acos(1.0 / math.sqrt(8.0)))

    # log recurrence: closed form vs forward simulation
    ys = gl.simulate_bb1_log(math.log(2.0), 0.0, 6)
    expected = [2.0, 1.0, 0.25, 0.25, 4.0, 64.0]
    for yk, rk in zip(ys, expected):
        assert close(math.exp(yk), rk, 1e-10)
    for k in range(41):
        scale = math.sqrt(2.0) ** k
        assert close(gl.bb1_closed_form(0.35, -1.2, k) / scale, gl.simulate_bb1_log(0.35, -1.2, 41)[k] / scale, 1e-9)

    print("smoke test: PASS")


if __name__ == "__main__":
    main()
