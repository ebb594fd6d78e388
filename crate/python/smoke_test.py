"""Smoke test for the critline_py extension.

Builds the cdylib with cargo unless CRITLINE_PY_LIB points at a built
library, copies it next to a temporary module path and imports it.

    python3 python/smoke_test.py
"""

import json
import math
import os
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load():
    lib = os.environ.get("CRITLINE_PY_LIB")
    if lib is None:
        subprocess.run(
            ["cargo", "build", "--release", "-p", "critline-py", "--features", "extension-module"],
            cwd=ROOT,
            check=True,
        )
        lib = ROOT / "target" / "release" / "libcritline_py.so"
    tmp = Path(tempfile.mkdtemp())
    shutil.copy(lib, tmp / "critline_py.so")
    sys.path.insert(0, str(tmp))
    import critline_py

    return critline_py


def main():
    cl = load()

    r = cl.Spec.rational([0.75 + 0j], [], 1.0, [0.75])
    # c(2) = h(-1)/h(2) = -1.75/1.25
    assert abs(r.c_ratio(2 + 0j) - (-1.4)) < 1e-14
    b = cl.boundary_value(r, "minus", 2 + 0j)
    assert abs(b - (-0.8)) < 1e-14, b
    p = cl.theta_pairing(r, "minus", 2 + 0j, t_max=200.0, per_panel=16)
    assert abs(p - (-0.8)) < 1e-8, p

    xi = cl.Spec.riemann_xi_2s()
    # xi(2) = pi/6
    assert abs(xi.h(1 + 0j) - math.pi / 6) < 1e-12
    assert abs(abs(xi.c_ratio(0.5 + 17.3j)) - 1.0) < 1e-10
    zeros = cl.online_zeros(xi, "plus", 0.1, 30.0)
    assert len(zeros) == 13, zeros
    assert all(abs(z.real - 0.5) < 1e-12 for z in zeros)
    located = json.loads(cl.locate_zeros(xi, "plus", (0.1, 0.9, 0.0, 15.0)))
    assert all(abs(z["w"][0] - 0.5) < 1e-8 for z in located)

    rep = json.loads(cl.check(xi, "plus"))
    assert {c["name"] for c in rep["checks"]} >= {"reality", "zero_free", "unit_modulus"}

    try:
        cl.boundary_value(xi, "sideways", 2 + 0j)
    except ValueError:
        pass
    else:
        raise AssertionError("bad eta accepted")

    print(f"ok: {len(zeros)} zeros of 1 + c for {xi.label} on 0.1 <= t <= 30, first at t = {zeros[0].imag:.9f}")


if __name__ == "__main__":
    main()
