"""Builds the pybkforms extension and exercises it on the bundled fixtures."""

import json
import pathlib
import shutil
import subprocess
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"


def build():
    subprocess.run(
        ["cargo", "build", "--release", "-p", "bkforms-python", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    lib = ROOT / "target" / "release" / "libpybkforms.so"
    out = pathlib.Path(tempfile.mkdtemp())
    shutil.copy(lib, out / "pybkforms.so")
    sys.path.insert(0, str(out))


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol * max(1.0, abs(b))


def main():
    build()
    import pybkforms as bk

    unit = bk.Form.from_json((FIXTURES / "single_k2_unit.json").read_text())
    assert unit.k == 2 and unit.circles == ["Z1"]
    p = unit.volume_polynomial()
    assert close(p[0], -2.0) and close(p[1], 2.0), p
    assert close(unit.liouville_volume(), -2.0)
    assert unit.is_bk_symplectic() and unit.is_positively_oriented()

    rows = unit.asymptotic_gap([1e-1, 1e-2, 1e-3])
    assert all(a[1] >= b[1] for a, b in zip(rows, rows[1:])), rows

    again = bk.Form.from_json(unit.to_json())
    assert again.to_json() == unit.to_json()

    poly = bk.poly_pick([0.0, 1.0, 1.0])
    assert close(poly[1], 1.0) and close(poly[2], 1.0), poly
    b = bk.principal_coefficients([0.0, 1.0, 1.0], poly)
    assert all(abs(x - e) < 1e-9 for x, e in zip(b, [1.0, 0.0, 0.0])), b

    scaled = bk.Form.from_json((FIXTURES / "single_k2_unit_scaled.json").read_text())
    assert bk.bk_symplectic_verdict(unit, scaled) == "NotEquivalent"

    k1 = bk.Form.from_json((FIXTURES / "single_k1_unit.json").read_text())
    pulled = k1.pullback([0.0, 1.5, 0.2])
    assert bk.poisson_verdict(k1, pulled) == "Isomorphic"
    assert close(dict(k1.modular_periods())["Z1"], dict(pulled.modular_periods())["Z1"])

    torus = bk.Form.torus(2, [1.0], [1.0])
    assert torus.circles == ["Z1", "Z2"]

    try:
        bk.poly_pick([1.0, -1.0])
    except bk.BkFormsError:
        pass
    else:
        raise AssertionError("expected BkFormsError")

    code, out, _ = bk.run_cli(["volume", str(FIXTURES / "single_k2_unit.json"), "--format", "json"])
    assert code == 0 and json.loads(out)["liouville_volume"] == -2.0

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
