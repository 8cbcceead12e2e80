"""The eleven acceptance criteria, each at its stated tolerance and time limit."""

import json
import math
import time
from collections import Counter
from pathlib import Path

import numpy as np

from hypres import bounds
from hypres.bounds import A_profile, euclidean_constant, improvement_threshold
from hypres.cli import main
from hypres.euclid import check_ralston, euclid_ball_resonances
from hypres.geometry import HyperbolicModel
from hypres.layer import BoundarySurface, bem_resonances, multiplicity_winding
from hypres.radial_exact import ball_resonances_odd, build_outgoing_polynomial
from hypres.radial_series import ball_resonances_general
from hypres.resonance import ComplexBox

DATA = Path(__file__).parent / "data" / "regression"


def _clear_caches():
    for name in dir(bounds):
        fn = getattr(bounds, name)
        if hasattr(fn, "cache_clear"):
            fn.cache_clear()


def test_criterion_01_mu(criterion, tmp_path):
    _clear_caches()
    t = time.perf_counter()
    assert main(["bounds", "--kappa", "0", "--rho", "1", "--out-dir", str(tmp_path)]) == 0
    mu = json.loads((tmp_path / "bounds.json").read_text())["mu"]
    dt = time.perf_counter() - t
    criterion(1, abs(mu - 0.0482) <= 5e-4 and abs(mu - euclidean_constant()) <= 1e-12, f"mu = {mu:.6f}", dt, 1.0)


def test_criterion_02_threshold(criterion):
    _clear_caches()
    t = time.perf_counter()
    r = improvement_threshold()
    dt = time.perf_counter() - t
    criterion(2, abs(r - 0.1221) <= 1e-3, f"improvement threshold = {r:.6f}", dt, 1.0)


def test_criterion_03_profile(criterion):
    _clear_caches()
    t = time.perf_counter()
    grid = [k / 100 for k in range(1, 101)]
    vals = [A_profile(r) for r in grid]
    mu = euclidean_constant()
    dt = time.perf_counter() - t
    monotone = all(b >= a for a, b in zip(vals, vals[1:]))
    ok = monotone and abs(vals[0] - mu) <= 1e-3 and abs(vals[-1] - 0.5) <= 1e-6
    criterion(3, ok, f"monotone={monotone}, A(0.01)-mu = {vals[0] - mu:.2e}, A(1)-0.5 = {vals[-1] - 0.5:.1e}",
              dt, 5.0)


def test_criterion_04_exact_series(criterion):
    t = time.perf_counter()
    model = HyperbolicModel(1.0, 3)
    worst, counts_ok = 0.0, True
    for R in (0.25, 1.0):
        for ell in (1, 2, 3):
            exact = [r.lam for r in ball_resonances_odd(model, ell, R)]
            series = [r.lam for r in ball_resonances_general(model, ell, R)]
            counts_ok &= len(exact) == len(series)
            worst = max([worst] + [min(abs(z - e) for e in exact) for z in series]
                        + [min(abs(e - z) for z in series) for e in exact])
    dt = time.perf_counter() - t
    criterion(4, counts_ok and worst <= 1e-8, f"max exact/series gap = {worst:.2e}", dt, 30.0)


def test_criterion_05_ralston(criterion):
    t = time.perf_counter()
    res = [r for ell in range(13) for r in euclid_ball_resonances(3, ell, 1.0)]
    rep = check_ralston(res, 1.0)
    dt = time.perf_counter() - t
    at = rep.attained_by
    ok = rep.passed and abs(rep.min_width - 1.0) <= 1e-10 and at.ell == 1 and abs(at.lam + 1j) <= 1e-10
    criterion(5, ok, f"min width {rep.min_width:.12f} at {at.lam:.6g} (ell={at.ell})", dt, 5.0)


def test_criterion_06_disk_half_bound(criterion):
    t = time.perf_counter()
    model = HyperbolicModel(1.0, 2)
    res = [r for ell in range(16) for r in ball_resonances_general(model, ell, 1.0)]
    top = max(r.lam.imag for r in res)
    dt = time.perf_counter() - t
    ok = len(res) > 0 and all(r.lam.imag <= -0.5 + 1e-6 for r in res)
    criterion(6, ok, f"{len(res)} resonances, topmost Im = {top:.9f}", dt, 300.0)


def test_criterion_07_large_radius(criterion):
    t = time.perf_counter()
    model = HyperbolicModel(1.0, 3)
    lam = np.sort_complex(-1j * model.kappa * build_outgoing_polynomial(model, 3, 12.0).roots_beta())
    dt = time.perf_counter() - t
    targets = [-1j, -2j]
    err = max(min(abs(z - w) for z in lam) for w in targets)
    criterion(7, len(lam) == 2 and err <= 5e-3, f"roots {[complex(round(z.real, 6), round(z.imag, 6)) for z in lam]}, "
              f"max distance {err:.2e}", dt, 1.0)


def test_criterion_08_flat_limit(criterion):
    t = time.perf_counter()
    R = 0.25
    errs = {}
    for kappa in (0.1, 0.05):
        (r,) = ball_resonances_odd(HyperbolicModel(kappa, 3), 1, R)
        errs[kappa] = abs(abs(r.lam + 1j / R) - kappa ** 2 * R / 3) / (kappa ** 2 * R / 3)
    dt = time.perf_counter() - t
    ok = errs[0.1] <= 0.05 and errs[0.05] <= 0.01
    criterion(8, ok, f"relative error {errs[0.1]:.2e} at kappa=0.1, {errs[0.05]:.2e} at kappa=0.05", dt, 1.0)


def test_criterion_09_bem(criterion):
    t = time.perf_counter()
    model = HyperbolicModel(1.0, 3)
    target = -1j / math.tanh(0.25)
    S = BoundarySurface.sphere(model, 0.25, 600)
    box = ComplexBox.around(target, 0.6)
    res = bem_resonances(S, model, box)
    wind = multiplicity_winding(S, model, box)
    empty = multiplicity_winding(S, model, ComplexBox(-0.5, 0.5, -0.6, -0.05))
    dt = time.perf_counter() - t
    ok = (len(res) == 1 and abs(res[0].lam - target) <= 1e-3 and res[0].multiplicity == 3
          and abs(wind - 3.0) <= 0.1 and abs(empty) <= 0.05)
    found = ", ".join(f"{r.lam:.8f} x{r.multiplicity}" for r in res)
    criterion(9, ok, f"Beyn [{found}], winding {wind:.6f}, empty winding {empty:.1e}", dt, 600.0)


def test_criterion_10_small_disk(criterion):
    t = time.perf_counter()
    model = HyperbolicModel(1.0, 2)
    # above Im = -1.2 only; every resonance lies below -1/2, so the strip holds the topmost one
    strip = ComplexBox(-20.0, 20.0, -1.2, -0.01)
    res = [r for ell in range(4) for r in ball_resonances_general(model, ell, 0.05, box=strip)]
    top = max(res, key=lambda r: r.lam.imag)
    dt = time.perf_counter() - t
    gap = abs(top.lam + 0.5j)
    criterion(10, gap <= 0.05, f"topmost {top.lam:.6f} (ell={top.ell}), distance to -i/2 = {gap:.4f}", dt, 120.0)


FIGURES = {
    "disk": ["disk", "--kappa", "1", "--R", "1", "--Lmax", "15"],
    "euclid": ["euclid", "--R", "1", "--Lmax", "12"],
    "converge": ["converge", "--R", "0.25", "--ell", "1", "--kappas", "0.8,0.4,0.2,0.1"],
    "bounds": ["bounds", "--profile"],
}


def test_criterion_11_figures(criterion, tmp_path):
    t = time.perf_counter()
    mismatched = []
    for name, argv in FIGURES.items():
        assert main(argv + ["--out-dir", str(tmp_path)]) == 0
        for ext in ("json", "csv", "svg"):
            if (tmp_path / f"{name}.{ext}").read_bytes() != (DATA / f"{name}.{ext}").read_bytes():
                mismatched.append(f"{name}.{ext}")
    structural = True
    eu = json.loads((tmp_path / "euclid.json").read_text())["resonances"]
    per_ell = Counter(r["ell"] for r in eu)
    structural &= all(per_ell[ell] == ell for ell in range(13))
    for name in ("euclid", "disk"):
        rows = json.loads((tmp_path / f"{name}.json").read_text())["resonances"]
        keys = Counter((r["re"], r["im"], r["ell"]) for r in rows)
        structural &= all(keys[(-re if re else 0.0, im, ell)] == c for (re, im, ell), c in keys.items())
    dt = time.perf_counter() - t
    criterion(11, not mismatched and structural,
              f"byte mismatches {mismatched or 'none'}, structural checks {'hold' if structural else 'fail'}",
              dt, 600.0)
