"""Invariant suites run by ``tmqft verify``.

Each suite returns a list of :class:`Check` records plus optional tables.
The suites exercise module invariants on randomized inputs with a fixed
seed, so reports are reproducible.
"""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .boundary_conditions import BCClass, BoundaryProblem, classify_bc, expected_exponent, fit_exponent, ode_residual
from .correlators import (
    gamma_of_delta,
    hadamard_closed,
    hadamard_series,
    pj_closed,
    pj_series,
)
from .cylinder_qft import CylinderConfig, ZeroModeState, cylinder_correlators, image_sum_pj
from .geometry import (
    Chart,
    MetricProfile,
    SpacetimePoint,
    WarpConfig,
    canonicalize,
    chart_transform,
    circulation,
    is_ctc_region,
    killing_residuals,
    to_null,
)
from .rset import cylinder_rset, f_beta, rset_cylinder_chart, rset_zeta
from .series import SeriesControl
from .tm_modes import AutomorphicMode, automorphy_residual, gram_matrix, kg_residual

SUITES = ("geometry", "modes", "correlators", "rset", "boundary")
DEFAULT_SEED = 20240607


@dataclass
class Check:
    name: str
    value: float
    tol: float
    passed: bool
    detail: str = ""


@dataclass
class SuiteResult:
    suite: str
    checks: list[Check] = field(default_factory=list)
    tables: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def add(self, name, value, tol, passed=None, detail=""):
        value = float(value)
        ok = value < tol if passed is None else bool(passed)
        self.checks.append(Check(name, value, tol, ok, detail))

    def as_dict(self):
        return {
            "suite": self.suite,
            "passed": self.passed,
            "seconds": round(self.seconds, 3),
            "checks": [asdict(c) for c in self.checks],
            "tables": self.tables,
        }


def _slope(xs, ys):
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def _random_point(rng, chart, cfg):
    W = cfg.W
    if chart is Chart.TY:
        return SpacetimePoint(chart, rng.uniform(-3, 3) / W, rng.uniform(-2, 2) / W)
    if chart is Chart.POINCARE:
        return SpacetimePoint(chart, rng.uniform(-3, 3) / W, rng.uniform(0.05, 5) / W)
    if chart is Chart.NULL:
        xi = rng.uniform(0.05, 5) / W
        eta = rng.uniform(-3, 3) / W
        return SpacetimePoint(chart, xi + eta, xi - eta)
    if chart is Chart.COMPACT:
        tau = rng.uniform(0.1, math.pi - 0.1)
        rho = rng.uniform(abs(tau - math.pi / 2) + 0.02, math.pi - 0.02)
        return SpacetimePoint(chart, tau, rho)
    return SpacetimePoint(chart, rng.uniform(-1.4, 1.4), rng.uniform(-2, 2))


def geometry_suite(seed=DEFAULT_SEED, n_points=10_000):
    res = SuiteResult("geometry")
    rng = np.random.default_rng(seed)
    cfg = WarpConfig(math.e, 1.0)
    worst = 0.0
    charts = list(Chart)
    ctc_mismatch = 0
    for _ in range(n_points):
        src = charts[rng.integers(len(charts))]
        dst = charts[rng.integers(len(charts))]
        p = _random_point(rng, src, cfg)
        zp, zm = to_null(p, cfg)
        if dst is Chart.ADAPTED and not (zp > 0 and zm > 0):
            dst = Chart.POINCARE
        q = chart_transform(chart_transform(p, dst, cfg), src, cfg)
        err = max(abs(q.c1 - p.c1) / max(1.0, abs(p.c1)), abs(q.c2 - p.c2) / max(1.0, abs(p.c2)))
        worst = max(worst, err)
        ty = chart_transform(p, Chart.TY, cfg)
        if is_ctc_region(ty, cfg) != (zp * zm < 0):
            ctc_mismatch += 1
    res.add("chart_round_trip_rel", worst, 1e-12)
    res.add("ctc_sign_test_mismatches", ctc_mismatch, 0.5)

    prof = MetricProfile.canonical(2.0, 1.3)
    c, cmap = canonicalize(prof)
    ys = np.linspace(-1.3, 2.6, 41)
    res.add("canonical_L_equals_Q", abs(c.L - 1.3), 1e-10)
    res.add("canonical_omega_sup", np.max(np.abs(cmap.omega(ys) - 1.0)), 1e-10)
    res.add("canonical_x_of_y_sup", np.max(np.abs(cmap.x_of_y(ys) - ys)), 1e-8)

    I = [circulation(prof, n) for n in range(-3, 4)]
    add_err = max(abs(circulation(prof, a + b) - (circulation(prof, a) + circulation(prof, b)))
                  for a in range(-3, 4) for b in range(-3, 4))
    res.add("circulation_additive", add_err, 1e-14)
    res.add("circulation_winding_one", abs(I[4] + math.log(2.0)), 1e-12)

    W0 = 1.0
    pert = MetricProfile(lambda x: W0 * (1 + 0.1 * math.sin(2 * math.pi * x)), 1.0, math.e)
    r1 = killing_residuals(pert, 0.3, 2e-4).gradient
    r2 = killing_residuals(pert, 0.3, 1e-4).gradient
    res.add("killing_richardson_ratio", abs(r1 / r2 - 4.0), 0.5)
    res.add("killing_canonical", killing_residuals(prof, 0.4).max, 1e-8)
    return res


def modes_suite(seed=DEFAULT_SEED, amps=(1.1, math.e, 10.0), n_abs=5):
    res = SuiteResult("modes")
    rng = np.random.default_rng(seed)
    idx = list(range(-n_abs, n_abs + 1))
    table = {}
    for A in amps:
        cfg = WarpConfig(A, 1.0)
        G = gram_matrix(idx, cfg)
        dev = float(np.max(np.abs(G - np.eye(len(idx)))))
        table[f"{A:.6g}"] = dev
        res.add(f"orthonormality_A={A:.6g}", dev, 1e-7)
    res.tables["orthonormality_max_dev"] = table

    worst = 0.0
    for A in amps:
        cfg = WarpConfig(A, 1.0)
        W = cfg.W
        for n in idx:
            m = AutomorphicMode(n, cfg)
            for _ in range(10):
                p = (rng.uniform(-3, 3) / W, rng.uniform(-3, 3) / W)
                if p[0] + p[1] <= 0 or 0 in p:
                    continue
                worst = max(worst, automorphy_residual(m, p))
    res.add("automorphy_residual", worst, 1e-12)

    cfg = WarpConfig(math.e, 1.0)
    for n in (0, 1, 2):
        m = AutomorphicMode(n, cfg)
        r1, r2 = kg_residual(m, (2.0, 1.0), 2e-3), kg_residual(m, (2.0, 1.0), 1e-3)
        res.add(f"kg_richardson_n={n}", abs(r1 / r2 - 4.0), 0.5)
    res.add("kg_residual_n=0_h=1e-3", kg_residual(AutomorphicMode(0, cfg), (2.0, 1.0), 1e-3), 1e-6)

    # u_0 depends on sigma only inside the diamond
    W = cfg.W
    worst = 0.0
    m0 = AutomorphicMode(0, cfg)
    for _ in range(200):
        sigma = rng.uniform(-1.4, 1.4)
        a, b = (chart_transform(SpacetimePoint(Chart.ADAPTED, sigma, chi), Chart.NULL, cfg)
                for chi in rng.uniform(-2, 2, 2))
        worst = max(worst, abs(m0(a.c1, a.c2) - m0(b.c1, b.c2)))
    res.add("u0_sigma_only", worst, 1e-12)
    return res


def _diamond_pair(rng, W):
    return (tuple(rng.uniform(0.05, 5, 2) / W), tuple(rng.uniform(0.05, 5, 2) / W))


def correlators_suite(seed=DEFAULT_SEED, amps=(1.5, math.e, 5.0), n_pairs=1000):
    res = SuiteResult("correlators")
    rng = np.random.default_rng(seed)
    table = []
    for A in amps:
        cfg = WarpConfig(A, 1.0)
        W = cfg.W
        wp = wm = 0.0
        flagged = 0
        for _ in range(n_pairs):
            x, xp = _diamond_pair(rng, W)
            hc = hadamard_closed(x, xp, cfg)
            if not hc.ok:
                flagged += 1
                continue
            wp = max(wp, abs(hadamard_series(x, xp, cfg).total - hc.value))
            wm = max(wm, abs(pj_series(x, xp, cfg).value - pj_closed(x, xp, cfg).value))
        table.append({"A": A, "max_dCp": wp, "max_dCm": wm, "flagged": flagged})
        res.add(f"series_closed_Cp_A={A:.6g}", wp, 1e-9)
        res.add(f"series_closed_Cm_A={A:.6g}", wm, 1e-9)
    res.tables["series_vs_closed"] = table

    cfg = WarpConfig(amps[0], 1.0)
    W = cfg.W
    sym = auto = caus = 0.0
    for _ in range(200):
        x, xp = _diamond_pair(rng, W)
        a = hadamard_series(x, xp, cfg).total
        b = hadamard_series(xp, x, cfg).total
        c = pj_series(x, xp, cfg).value + pj_series(xp, x, cfg).value
        sym = max(sym, abs(a - b), abs(c))
        Ax = tuple(cfg.A * v for v in x)
        Axp = tuple(cfg.A * v for v in xp)
        auto = max(auto, abs(hadamard_series(Ax, Axp, cfg).total - a),
                   abs(pj_series(Ax, Axp, cfg).value - pj_series(x, xp, cfg).value))
        # eta = 0 slice
        xi, xip = rng.uniform(0.05, 5, 2) / W
        caus = max(caus, abs(pj_series((xi, xi), (xip, xip), cfg).value))
    res.add("symmetry_antisymmetry", sym, 1e-12)
    res.add("automorphy_of_correlators", auto, 1e-10)
    res.add("equal_eta_causality", caus, 1e-12)

    cyl = CylinderConfig(1.0)
    state = ZeroModeState(1.0)
    worst = caus = 0.0
    for _ in range(100):
        x, xp = tuple(rng.uniform(-2, 2, 2)), tuple(rng.uniform(-2, 2, 2))
        direct = cylinder_correlators(x, xp, state, cyl).c_minus.value
        worst = max(worst, abs(image_sum_pj(x, xp, cyl).value - direct))
        y, yp = rng.uniform(-2, 2, 2)
        t = rng.uniform(-2, 2)
        caus = max(caus, abs(cylinder_correlators((t, y), (t, yp), state, cyl).c_minus.value))
    res.add("image_sum_vs_direct", worst, 1e-8)
    res.add("cylinder_equal_time_causality", caus, 1e-12)
    return res


def rset_suite():
    res = SuiteResult("rset")
    deltas = np.geomspace(1e-3, 1e-1, 7)
    dev = []
    for d in deltas:
        tm = rset_cylinder_chart((0.0, 0.0), WarpConfig.from_delta(d)).T_mm
        cy = cylinder_rset(ZeroModeState(gamma_of_delta(d)), CylinderConfig(1.0)).T_mm
        dev.append(abs(tm - cy))
    res.tables["decomposition"] = [{"delta": float(d), "dev": float(v)} for d, v in zip(deltas, dev)]
    res.add("decomposition_slope", abs(_slope(deltas, dev) - 2.0), 0.2)
    res.add("T_mm_limit",
            abs(rset_cylinder_chart((0.0, 0.0), WarpConfig.from_delta(1e-7)).T_mm + math.pi / 12), 1e-6)
    drift = max(abs(f_beta(b, SeriesControl(n_max=800, tail_tol=1e-30)) - f_beta(b))
                / max(1.0, abs(f_beta(b))) for b in (0.5, 1.0, 10.0))
    res.add("f_beta_truncation_doubling", drift, 1e-14)
    cfg = WarpConfig(math.e, 1.0)
    rng = np.random.default_rng(DEFAULT_SEED)
    pos = min(rset_zeta(tuple(rng.uniform(0.01, 10, 2)), cfg).T_pm for _ in range(100))
    res.add("T_pm_positive", -pos, 0.0)
    T = rset_zeta((1.3, 0.7), cfg)
    res.add("T_mm_scaling_along_ray", abs(T.T_mm * 0.7**2 - rset_zeta((2.9, 0.7), cfg).T_mm * 0.7**2), 1e-12)
    return res


def boundary_suite(seed=DEFAULT_SEED):
    res = SuiteResult("boundary")
    expect = {1.0: BCClass.DIRICHLET_ONLY_POSITIVE, -0.1: BCClass.DIRICHLET_ONLY_NEGATIVE,
              0.0: BCClass.ALL_ROBIN}
    wrong = sum(classify_bc(m2).kind is not k for m2, k in expect.items())
    res.add("classification", wrong, 0.5)
    fits = []
    worst = 0.0
    for m2 in (1.0, -0.1, 0.0, 0.3):
        for lam in (0.0, -0.4, -math.pi / 2):
            bp = BoundaryProblem(m2, lam)
            for cp, cm in ((1.0, 0.0), (0.0, 1.0)):
                got = fit_exponent(bp, cp, cm)
                want = expected_exponent(bp.nu, lam, 1 if cp else -1)
                fits.append({"m2": m2, "lam": lam, "branch": "+" if cp else "-",
                             "fit": got, "expected": want})
                worst = max(worst, abs(got - want))
    res.tables["exponents"] = fits
    res.add("exponent_fits", worst, 0.05)
    rng = np.random.default_rng(seed)
    odr = 0.0
    for _ in range(50):
        bp = BoundaryProblem(rng.uniform(-0.2, 2.0), 0.0, rng.uniform(0.5, 2.0))
        cp, cm = rng.uniform(-1, 1, 2)
        odr = max(odr, abs(ode_residual(bp, cp, cm, rng.uniform(0.5, 2.0))))
    res.add("ode_residual", odr, 1e-8)
    return res


def run_suite(name, **kwargs):
    fn = {
        "geometry": geometry_suite,
        "modes": modes_suite,
        "correlators": correlators_suite,
        "rset": rset_suite,
        "boundary": boundary_suite,
    }[name]
    t0 = time.perf_counter()
    res = fn(**kwargs)
    res.seconds = time.perf_counter() - t0
    return res
