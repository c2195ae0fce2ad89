"""Smoke test for the pydunkl extension.

Build first with `cargo build --release -p dunkl-lab-py`, then run
`python3 python/smoke_test.py` from the workspace root. The script copies the
shared library next to itself under the importable name.
"""

import csv
import io
import json
import shutil
import sys
import tempfile
from pathlib import Path

from scipy.special import beta, j0, j1

ROOT = Path(__file__).resolve().parent.parent


def load():
    for profile in ("release", "debug"):
        lib = ROOT / "target" / profile / "libpydunkl.so"
        if lib.exists():
            break
    else:
        sys.exit("libpydunkl.so not found; run cargo build --release -p dunkl-lab-py")
    tmp = Path(tempfile.mkdtemp())
    shutil.copy(lib, tmp / "pydunkl.so")
    sys.path.insert(0, str(tmp))
    import pydunkl

    return pydunkl


def main():
    pd = load()

    # E_{1/2}(iz) = J_0(z) + i J_1(z)
    for z in (-7.5, 0.0, 0.3, 12.0):
        e = pd.dunkl_kernel(0.5, z)
        assert abs(e - complex(j0(z), j1(z))) < 1e-12, (z, e)

    c, cp, m = pd.constants(0.5)
    assert c > 0 and cp > 0 and m > 0

    p, q = pd.poisson_kernels(0.5, 0.3, 1.0, -0.2)
    assert p > 0 and q == q

    # C_α acts on the homogeneous Cauchy field by α B(2λ+1, α)
    lam, alpha, x, y = 0.5, 2.0, 0.7, 0.4
    f = pd.field(lam, "kernel_cauchy", x, y)
    cf = pd.cesaro(lam, alpha, "kernel_cauchy", x, y)
    assert abs(cf / f - alpha * beta(2 * lam + 1, alpha)) < 1e-8

    value, kind = pd.bound_constant(2.0, 1.0, 2.0)
    assert kind == "exact_beta" and abs(value - 1.0) < 1e-14
    assert pd.bound_constant(0.9, 1.0, 2.0)[1] == "series_flagged"

    rows = list(csv.reader(io.StringIO(pd.kernel_table(1.0, -3.0, 3.0, 7))))
    assert rows[0] == ["lambda", "z_or_xi", "re", "im", "abs_err_vs_alt_representation"]
    assert len(rows) == 8 and max(float(r[4]) for r in rows[1:]) < 1e-12

    report = json.loads(pd.run_suite("kernels", seed=3))
    assert report["pass"] and report["seed"] == 3, report

    table = pd.run_sweep(json.dumps({
        "lambdas": [0.5], "alphas": [1.0], "ps": [1.0],
        "fields": [{"family": "kernel_p"}],
    }))
    rows = list(csv.DictReader(io.StringIO(table)))
    assert len(rows) == 1 and rows[0]["pass"] == "true"
    assert abs(float(rows[0]["ratio"]) - 0.5) < 1e-8

    for bad in (lambda: pd.dunkl_kernel(-1.0, 1.0), lambda: pd.run_suite(""),
                lambda: pd.field(0.5, "nope", 0.0, 1.0)):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print("pydunkl smoke test: ok")


if __name__ == "__main__":
    main()
