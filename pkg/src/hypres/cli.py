"""Command-line front end.

Every command writes ``<name>.json`` (canonical), ``<name>.csv`` and
``<name>.svg`` into ``--out-dir``. The exit status is 1 when any
verification report fails and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import math
import sys
import time
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from . import artifacts
from .bounds import (A_profile, euclidean_constant, improvement_threshold, bound_profile,
                     verify_width_bounds)
from .euclid import check_ralston, euclid_ball_resonances
from .geometry import HyperbolicModel
from .radial_exact import ball_resonances_odd, ell_one_resonance
from .radial_series import ball_resonances_general
from .resonance import ComplexBox

logger = logging.getLogger("hypres")

COMMANDS = ("ball", "disk", "euclid", "bem", "bounds", "converge", "verify")
RESONANCE_COLUMNS = ("re", "im", "ell", "mult", "residual")


@dataclass
class ExperimentConfig:
    command: str
    kappa: float = 1.0
    n: int = 3
    R: float = 1.0
    shape: str = None
    box: tuple = None
    lmax: int = 12
    ell: int = 1
    kappas: tuple = ()
    nodes: int = 600
    rank: int = 8
    highlight: int = 12
    compare_euclid: bool = False
    winding: bool = False
    profile: bool = False
    rho: float = None
    verify: bool = False
    out_dir: str = field(default=".", metadata={"output": True})
    name: str = field(default=None, metadata={"output": True})

    def validate(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if not (math.isfinite(self.kappa) and self.kappa >= 0):
            raise ValueError("--kappa must be finite and >= 0")
        if self.command in ("ball", "disk", "bem", "converge") and self.kappa <= 0:
            raise ValueError("--kappa must be positive for hyperbolic obstacles")
        if self.n < 2:
            raise ValueError("--n must be >= 2")
        if not (math.isfinite(self.R) and self.R > 0):
            raise ValueError("--R must be positive")
        if self.lmax < 0 or self.ell < 0:
            raise ValueError("angular momenta must be >= 0")
        if self.command == "euclid" and (self.n < 3 or self.n % 2 == 0):
            raise ValueError("euclid needs odd n >= 3")
        if self.command == "bem":
            if self.n != 3:
                raise ValueError("bem is implemented for n = 3 only")
            if self.box is None:
                raise ValueError("bem needs --box RE_MIN RE_MAX IM_MIN IM_MAX")
            if self.nodes < 12 or self.rank < 1:
                raise ValueError("--nodes and --rank are too small")
        if self.box is not None:
            b = ComplexBox(*self.box)
            if b.im_max >= 0:
                raise ValueError("search boxes must lie in Im < 0")
        if self.command == "converge":
            if not self.kappas or any(not k > 0 for k in self.kappas):
                raise ValueError("--kappas needs positive values")
        if self.rho is not None and not self.rho > 0:
            raise ValueError("--rho must be positive")

    def digest(self) -> str:
        """Hash of the scientific parameters (output locations excluded)."""
        data = {k: v for k, v in asdict(self).items()
                if not self.__dataclass_fields__[k].metadata.get("output")}
        if self.shape is not None:
            data["shape"] = Path(self.shape).read_text()
        return hashlib.sha256(json.dumps(data, sort_keys=True, default=list).encode()).hexdigest()

    def seed(self) -> int:
        return int(self.digest()[:16], 16)


@dataclass
class RunResult:
    payload: dict
    rows: list
    columns: tuple
    svg: str
    reports: list = field(default_factory=list)  # (line, passed)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.reports)


def _box(cfg: ExperimentConfig, lmax: int, R: float):
    return ComplexBox(*cfg.box) if cfg.box is not None else None


def _resonance_svg(resonances, highlight, groups=None, hlines=(), title=""):
    groups = groups or [0] * len(resonances)
    pts = [(r.lam.real, r.lam.imag, r.ell, g) for r, g in zip(resonances, groups)]
    return artifacts.emit_svg(pts, highlights=(highlight,), hlines=hlines, title=title)


def _model_dict(kappa, n):
    return {"kappa": kappa, "n": n}


def run_ball(cfg: ExperimentConfig) -> RunResult:
    model = HyperbolicModel(cfg.kappa, cfg.n)
    res = []
    for ell in range(cfg.lmax + 1):
        if cfg.n % 2 == 1:
            res.extend(ball_resonances_odd(model, ell, cfg.R))
        else:
            res.extend(ball_resonances_general(model, ell, cfg.R, box=_box(cfg, cfg.lmax, cfg.R)))
    groups = [0] * len(res)
    payload = {"model": _model_dict(cfg.kappa, cfg.n), "obstacle": {"type": "ball", "R": cfg.R},
               "lmax": cfg.lmax, "resonances": artifacts.resonance_rows(res)}
    shown = list(res)
    if cfg.compare_euclid:
        if cfg.n % 2 == 0:
            raise ValueError("--compare-euclid needs odd n")
        eu = [r for ell in range(cfg.lmax + 1) for r in euclid_ball_resonances(cfg.n, ell, cfg.R)]
        payload["euclidean"] = artifacts.resonance_rows(eu)
        shown += eu
        groups += [1] * len(eu)
    svg = _resonance_svg(shown, cfg.highlight, groups, hlines=(("Im = -kappa/2", -0.5 * cfg.kappa),),
                         title=f"ball R={cfg.R} in H^{cfg.n}, kappa={cfg.kappa}")
    result = RunResult(payload, artifacts.resonance_rows(res), RESONANCE_COLUMNS, svg)
    if cfg.verify:
        rep = verify_width_bounds(res, model, cfg.R)
        result.reports += [(line, line.startswith("PASS")) for line in rep.lines()]
    return result


def run_disk(cfg: ExperimentConfig) -> RunResult:
    return run_ball(replace(cfg, n=2))


def run_euclid(cfg: ExperimentConfig) -> RunResult:
    res = [r for ell in range(cfg.lmax + 1) for r in euclid_ball_resonances(cfg.n, ell, cfg.R)]
    payload = {"model": _model_dict(0.0, cfg.n), "obstacle": {"type": "ball", "R": cfg.R},
               "lmax": cfg.lmax, "resonances": artifacts.resonance_rows(res)}
    svg = _resonance_svg(res, cfg.highlight, hlines=(("Im = -1/R", -1.0 / cfg.R),),
                         title=f"ball R={cfg.R} in R^{cfg.n}")
    result = RunResult(payload, artifacts.resonance_rows(res), RESONANCE_COLUMNS, svg)
    if cfg.verify:
        rep = check_ralston(res, cfg.R)
        result.reports.append((rep.summary(), rep.passed))
    return result


def run_bem(cfg: ExperimentConfig) -> RunResult:
    from .layer.eigen import bem_resonances, multiplicity_winding
    from .layer.surface import BoundarySurface, ShapeFunction, read_shape_file

    model = HyperbolicModel(cfg.kappa, 3)
    shape = read_shape_file(cfg.shape) if cfg.shape else ShapeFunction.sphere(cfg.R)
    surface = BoundarySurface.build(shape, model, cfg.nodes)
    box = ComplexBox(*cfg.box)
    details = {}
    res = bem_resonances(surface, model, box, rank_guess=cfg.rank, seed=cfg.seed(), details=details)
    beyn = details["beyn"]
    obstacle = {"type": "star-shaped", "constant": shape.constant,
                "terms": [[l, m, c] for l, m, c in shape.terms], "nodes": surface.size}
    payload = {"model": _model_dict(cfg.kappa, 3), "obstacle": obstacle, "box": list(cfg.box),
               "contour_points": beyn.contour_points, "resonances": artifacts.resonance_rows(res)}
    if cfg.winding:
        payload["winding"] = multiplicity_winding(surface, model, box)
    svg = _resonance_svg(res, cfg.highlight, hlines=(("Im = -kappa/2", -0.5 * cfg.kappa),),
                         title="boundary-element resonances")
    result = RunResult(payload, artifacts.resonance_rows(res), RESONANCE_COLUMNS, svg)
    if cfg.verify:
        rho = shape.constant + sum(abs(c) for _, _, c in shape.terms)
        rep = verify_width_bounds(res, model, rho)
        result.reports += [(line, line.startswith("PASS")) for line in rep.lines()[:1]]
    return result


PROFILE_GRID = tuple(round(0.01 * k, 2) for k in range(1, 101))


def run_bounds(cfg: ExperimentConfig) -> RunResult:
    mu = euclidean_constant()
    thr = improvement_threshold()
    if cfg.profile or cfg.rho is None:
        rows = [{"rho_tilde": t, "A": A_profile(t), "half_rho_tilde": 0.5 * t} for t in PROFILE_GRID]
        payload = {"mu": mu, "threshold": thr, "profile": rows}
        xs = [r["rho_tilde"] for r in rows]
        axes = artifacts.Axes(0.0, 1.0, 0.0, 0.55, x_label="rho_tilde", y_label="A")
        svg = artifacts.emit_svg([], axes=axes, curves=(("A", xs, [r["A"] for r in rows]),
                                                        ("rho_tilde/2", xs, [r["half_rho_tilde"] for r in rows])),
                                 hlines=(("mu", mu),), title="A profile")
        return RunResult(payload, rows, ("rho_tilde", "A", "half_rho_tilde"), svg)
    bp = bound_profile(cfg.kappa, cfg.rho)
    row = {"kappa": bp.kappa, "rho": bp.rho, "mu": bp.mu, "A": bp.A_value, "alpha": bp.alpha,
           "at_infinity": bp.supremum_at_infinity}
    axes = artifacts.Axes(0.0, 1.0, 0.0, max(1.0, 1.1 * bp.alpha), x_label="", y_label="alpha")
    svg = artifacts.emit_svg([], axes=axes, hlines=(("alpha", bp.alpha), ("kappa/2", 0.5 * bp.kappa)),
                             title="width bound")
    return RunResult({"mu": mu, "threshold": thr, "bound": row}, [row], tuple(row), svg)


def run_converge(cfg: ExperimentConfig) -> RunResult:
    """Flat-limit table of the topmost ``ell`` resonance of the H^3 ball."""
    rows = []
    for k in cfg.kappas:
        res = ball_resonances_odd(HyperbolicModel(k, 3), cfg.ell, cfg.R)
        flat = euclid_ball_resonances(3, cfg.ell, cfg.R)
        top, top_flat = res[0].lam, flat[0].lam
        dev = abs(top - top_flat)
        row = {"kappa": k, "re": top.real, "im": top.imag, "deviation": dev}
        if cfg.ell == 1:
            row["predicted"] = k * k * cfg.R / 3.0
            row["relative_error"] = abs(dev - row["predicted"]) / row["predicted"]
            row["closed_form_gap"] = abs(top - ell_one_resonance(k, cfg.R))
        rows.append(row)
    payload = {"model": {"n": 3}, "obstacle": {"type": "ball", "R": cfg.R}, "ell": cfg.ell, "table": rows}
    xs = [r["kappa"] for r in rows]
    axes = artifacts.Axes(0.0, 1.05 * max(xs), 0.0, 1.1 * max(r["deviation"] for r in rows) or 1.0,
                          x_label="kappa", y_label="|sigma(kappa) - sigma(0)|")
    curves = [("deviation", xs, [r["deviation"] for r in rows])]
    if cfg.ell == 1:
        fine = np.linspace(0.0, max(xs), 41)
        curves.append(("kappa^2 R / 3", fine, fine * fine * cfg.R / 3.0))
    svg = artifacts.emit_svg([(r["kappa"], r["deviation"], cfg.ell) for r in rows], axes=axes,
                             curves=curves, title="flat limit")
    return RunResult(payload, rows, tuple(rows[0]), svg)


def default_verifications():
    """Shipped verification suite: ``(name, callable -> list[(line, passed)])``."""
    def ralston():
        res = [r for ell in range(13) for r in euclid_ball_resonances(3, ell, 1.0)]
        rep = check_ralston(res, 1.0)
        return [(rep.summary(), rep.passed)]

    def width(model, R, lmax):
        def run():
            res = []
            for ell in range(lmax + 1):
                if model.dim % 2:
                    res += ball_resonances_odd(model, ell, R)
                else:
                    res += ball_resonances_general(model, ell, R)
            rep = verify_width_bounds(res, model, R)
            return [(f"{line} [n={model.dim}, kappa={model.kappa}, R={R}]", line.startswith("PASS"))
                    for line in rep.lines()]
        return run

    def cross():
        out = []
        for R in (0.25, 1.0):
            model = HyperbolicModel(1.0, 3)
            for ell in (1, 2, 3):
                a = [r.lam for r in ball_resonances_odd(model, ell, R)]
                b = [r.lam for r in ball_resonances_general(model, ell, R)]
                ok = len(a) == len(b) and all(min(abs(x - y) for y in b) <= 1e-8 * max(1.0, abs(x)) for x in a)
                out.append((f"{'PASS' if ok else 'FAIL'} exact/series agreement ell={ell} R={R}", ok))
        return out

    def profile():
        mu = euclidean_constant()
        thr = improvement_threshold()
        vals = [A_profile(t) for t in PROFILE_GRID]
        ok = all(b >= a - 1e-12 for a, b in zip(vals, vals[1:])) and vals[0] >= mu - 1e-12
        return [(f"{'PASS' if ok else 'FAIL'} A profile monotone from mu = {mu:.6f}; threshold {thr:.6f}", ok)]

    return [
        ("ralston", ralston),
        ("h3-ball", width(HyperbolicModel(1.0, 3), 0.25, 8)),
        ("h5-ball", width(HyperbolicModel(1.0, 5), 1.0, 6)),
        ("h2-disk", width(HyperbolicModel(1.0, 2), 1.0, 15)),
        ("cross", cross),
        ("profile", profile),
    ]


def run_verify(cfg: ExperimentConfig) -> RunResult:
    reports, rows = [], []
    for name, check in default_verifications():
        for line, ok in check():
            reports.append((line, ok))
            rows.append({"check": name, "passed": ok, "report": line})
    payload = {"passed": all(ok for _, ok in reports), "checks": rows}
    svg = artifacts.emit_svg([], axes=artifacts.Axes(0.0, 1.0, 0.0, 1.0, "", ""), title="verification")
    return RunResult(payload, rows, ("check", "passed", "report"), svg, reports)


RUNNERS = {"ball": run_ball, "disk": run_disk, "euclid": run_euclid, "bem": run_bem,
           "bounds": run_bounds, "converge": run_converge, "verify": run_verify}


def run(cfg: ExperimentConfig) -> tuple[int, RunResult]:
    """Validate, dispatch and write artifacts; returns ``(exit status, result)``."""
    cfg.validate()
    result = RUNNERS[cfg.command](cfg)
    name = cfg.name or cfg.command
    out = Path(cfg.out_dir)
    artifacts.write_text(out / f"{name}.json", artifacts.dumps_json(result.payload))
    artifacts.write_text(out / f"{name}.csv", artifacts.dumps_csv(result.rows, result.columns))
    artifacts.write_text(out / f"{name}.svg", result.svg)
    return (0 if result.passed else 1), result


def _floats(text):
    return tuple(float(v) for v in text.replace(",", " ").split())


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hypres", description="Resonances of obstacles in hyperbolic space.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, R=1.0, lmax=12):
        sp.add_argument("--out-dir", default=".")
        sp.add_argument("--name", default=None, help="artifact base name (default: the command)")
        sp.add_argument("--verify", action="store_true", help="attach width-bound reports")
        sp.add_argument("--R", type=float, default=R)
        sp.add_argument("--Lmax", dest="lmax", type=int, default=lmax)
        sp.add_argument("--highlight", type=int, default=12, help="angular momentum to highlight")
        sp.add_argument("--box", type=float, nargs=4, metavar=("RE_MIN", "RE_MAX", "IM_MIN", "IM_MAX"))
        sp.add_argument("-v", "--verbose", action="store_true")

    sp = sub.add_parser("ball", help="balls in H^n (exact for odd n, series for even n)")
    common(sp, R=0.25)
    sp.add_argument("--kappa", type=float, default=1.0)
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--compare-euclid", action="store_true")

    sp = sub.add_parser("disk", help="disks in H^2")
    common(sp, lmax=15)
    sp.add_argument("--kappa", type=float, default=1.0)

    sp = sub.add_parser("euclid", help="balls in R^n, odd n")
    common(sp)
    sp.add_argument("--n", type=int, default=3)

    sp = sub.add_parser("bem", help="star-shaped obstacles in H^3 by boundary elements")
    common(sp, R=0.25)
    sp.add_argument("--kappa", type=float, default=1.0)
    sp.add_argument("--shape", default=None, help="shape file with 'constant v' and 'ell m c' lines")
    sp.add_argument("--nodes", type=int, default=600)
    sp.add_argument("--rank", type=int, default=8)
    sp.add_argument("--winding", action="store_true", help="also report the trace winding number")

    sp = sub.add_parser("bounds", help="width bounds and the A profile")
    sp.add_argument("--profile", action="store_true")
    sp.add_argument("--kappa", type=float, default=1.0)
    sp.add_argument("--rho", type=float, default=None)
    sp.add_argument("--out-dir", default=".")
    sp.add_argument("--name", default=None)
    sp.add_argument("-v", "--verbose", action="store_true")

    sp = sub.add_parser("converge", help="flat-limit convergence table")
    sp.add_argument("--R", type=float, default=0.25)
    sp.add_argument("--ell", type=int, default=1)
    sp.add_argument("--kappas", type=_floats, default=(0.8, 0.4, 0.2, 0.1))
    sp.add_argument("--out-dir", default=".")
    sp.add_argument("--name", default=None)
    sp.add_argument("-v", "--verbose", action="store_true")

    sp = sub.add_parser("verify", help="run the shipped verification suite")
    sp.add_argument("--out-dir", default=".")
    sp.add_argument("--name", default=None)
    sp.add_argument("-v", "--verbose", action="store_true")
    return p


def config_from_args(ns: argparse.Namespace) -> ExperimentConfig:
    known = ExperimentConfig.__dataclass_fields__
    kw = {k: v for k, v in vars(ns).items() if k in known and v is not None}
    if "box" in kw:
        kw["box"] = tuple(kw["box"])
    if "kappas" in kw:
        kw["kappas"] = tuple(kw["kappas"])
    return ExperimentConfig(**kw)


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = config_from_args(ns)
        t0 = time.perf_counter()
        status, result = run(cfg)
    except (ValueError, OSError) as exc:
        print(f"hypres: error: {exc}", file=sys.stderr)
        return 2
    for line, _ in result.reports:
        print(line)
    logger.info("%s finished in %.2f s", cfg.command, time.perf_counter() - t0)
    print(f"wrote {Path(cfg.out_dir) / (cfg.name or cfg.command)}.{{json,csv,svg}}")
    return status


if __name__ == "__main__":
    sys.exit(main())
