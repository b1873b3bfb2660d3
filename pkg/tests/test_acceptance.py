"""Acceptance suite: one test per release criterion, one PASS/FAIL line each.

Each test prints `ACCEPTANCE nn <slug>: PASS|FAIL` before asserting, so the
captured output carries a one-line verdict per criterion in addition to the
pytest result.  Tolerances are pinned here and must not be loosened to make
a failing criterion pass; a red criterion is information, not an obstacle.
"""
import json
import time

import numpy as np

from warplab.cli import main as cli_main
from warplab.curvature import Flat, PowerLaw
from warplab.cutoff import make_hessian_cutoff, certify_cutoff
from warplab.geometry import build_model
from warplab.green import build_green, superharmonicity_residual
from warplab.pde import (
    classify_stochastic_completeness,
    exterior_eigenfunction,
    li_yau_ratio,
    positivity_probe,
    solve_dirichlet_exhaustion,
)
from warplab.radial import (
    TestCorpus,
    generate_corpus,
    lp_norm,
    smooth_bump,
    smooth_plateau,
    warped_tail,
)
from warplab.specfun import log_bessel_i
from warplab.verify import density_probe, verify_cz2, verify_hardy


def _verdict(num, slug, ok):
    print(f"ACCEPTANCE {num:02d} {slug}: {'PASS' if ok else 'FAIL'}")
    return ok


def test_criterion_01_closed_form_geometry():
    start = time.perf_counter()
    M = build_model(3, PowerLaw(A=1.0, alpha=0.0), t_max=60.0, tol=1e-11)
    ts = np.geomspace(0.1, 30.0, 1500)
    w_ref = 1.0 / np.tanh(ts)
    w_err = float(np.max(np.abs(M.w_at(ts) - w_ref) / w_ref))
    logsinh = ts + np.log1p(-np.exp(-2.0 * ts)) - np.log(2.0)
    # absolute error in the log is the relative error of the underlying
    # warping value, so the floor at 1 keeps the metric meaningful where
    # log sinh crosses zero
    j_err = float(np.max(np.abs(M.logj_at(ts) - logsinh)
                         / np.maximum(np.abs(logsinh), 1.0)))
    elapsed = time.perf_counter() - start
    ok = w_err < 1e-8 and j_err < 1e-8 and elapsed < 1.0
    assert _verdict(1, "closed-form-geometry", ok), (
        f"w_err={w_err:.3e} logj_err={j_err:.3e} elapsed={elapsed:.2f}s"
    )


def test_criterion_02_bessel_cross_check():
    start = time.perf_counter()
    worst = 0.0
    for alpha in (1.0, 2.0):
        M = build_model(3, PowerLaw(A=1.0, alpha=alpha), t_max=60.0, tol=1e-11)
        nu = 1.0 / (alpha + 2.0)
        ts = np.geomspace(0.1, 30.0, 400)
        x = 2.0 * nu * ts ** (1.0 / (2.0 * nu))
        ref = 0.5 * np.log(ts) + np.array(
            [log_bessel_i(nu, xi).log_value for xi in x]
        )
        # the multiplicative normalization is fixed at one anchor node
        anchor = ref[0] - M.logj_at(ts[0])
        err = np.abs(M.logj_at(ts) + anchor - ref) / np.maximum(np.abs(ref), 1.0)
        worst = max(worst, float(np.max(err)))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-6 and elapsed < 5.0
    assert _verdict(2, "bessel-cross-check", ok), (
        f"worst rel err={worst:.3e} elapsed={elapsed:.2f}s"
    )


def test_criterion_03_asymptotic_fits():
    start = time.perf_counter()
    failures = []
    for alpha in (0.0, 1.0, 2.0):
        for n in (2, 3):
            M = build_model(n, PowerLaw(A=1.0, alpha=alpha), t_max=60.0, tol=1e-11)
            sel = M.t >= M.t_grid_max / 10.0
            ts = M.t[sel]
            scale = ts ** (0.5 * alpha)
            # fitted limit over the last decade: intercept of a linear fit
            # in the leading correction variable t^{-(1 + alpha/2)}
            corr = ts ** (-(1.0 + 0.5 * alpha))
            fit_w = float(np.polynomial.polynomial.polyfit(
                corr, M.w_at(ts) / scale, 1)[0])
            if abs(fit_w - 1.0) >= 0.02:
                failures.append(f"w fit alpha={alpha} n={n}: {fit_w:.4f}")
            for p in (1.5, 2.0, 3.0):
                G = build_green(M, p)
                m = (n - 1.0) / (p - 1.0)
                fit_g = float(np.polynomial.polynomial.polyfit(
                    corr, (1.0 / G.z_at(ts)) / (m * M.w_at(ts)), 1)[0])
                if abs(fit_g - 1.0) >= 0.01:
                    failures.append(
                        f"grad-logG fit alpha={alpha} n={n} p={p}: {fit_g:.4f}"
                    )
            # volume-ratio normalization settles to a finite positive
            # constant: < 5% drift across the last two doublings
            Ts = np.array([M.t_grid_max / 4.0, M.t_grid_max / 2.0, M.t_grid_max])
            c = M.y_at(Ts) * (n - 1.0) * Ts ** (0.5 * alpha)
            drift = np.abs(np.diff(c) / c[:-1])
            if not (np.all(np.isfinite(c)) and np.all(c > 0.0)
                    and float(np.max(drift)) < 0.05):
                failures.append(f"y fit alpha={alpha} n={n}: c={c} drift={drift}")
    elapsed = time.perf_counter() - start
    if elapsed >= 60.0:
        failures.append(f"elapsed {elapsed:.1f}s")
    assert _verdict(3, "asymptotic-fits", not failures), failures


def test_criterion_04_sharp_hardy(m_alpha0, m_alpha1, m_alpha2):
    start = time.perf_counter()
    failures = []
    models = {0.0: m_alpha0, 1.0: m_alpha1, 2.0: m_alpha2}
    for alpha, M in models.items():
        betas = sorted({0.0, alpha / (alpha + 2.0)})
        for p in (1.5, 2.0, 3.0):
            G = build_green(M, p)
            members = generate_corpus(
                TestCorpus(seed=42, size=200), M,
                max(1.0, 1.02 * G.r_K), green=G,
            )
            sharp = (p / (p - 1.0)) ** p
            for beta in betas:
                rep = verify_hardy(M, G, p, beta, members)
                tag = f"alpha={alpha} p={p} beta={beta:.3g}"
                if rep.verdict != "holds":
                    failures.append(f"{tag}: verdict {rep.verdict}")
                if rep.empirical_constant > sharp * (1.0 + 1e-6):
                    failures.append(
                        f"{tag}: max ratio {rep.empirical_constant:.6f} "
                        f"exceeds sharp {sharp:.6f}"
                    )
                extremal = max(
                    r["ratio"] for r in rep.records
                    if r["label"].startswith("extremal")
                )
                if extremal < 0.5 * sharp:
                    failures.append(
                        f"{tag}: extremal family reaches only "
                        f"{extremal:.4f} of sharp {sharp:.4f}"
                    )
    elapsed = time.perf_counter() - start
    if elapsed >= 300.0:
        failures.append(f"elapsed {elapsed:.1f}s")
    assert _verdict(4, "sharp-hardy", not failures), failures


def test_criterion_05_bochner_and_cz2_stability(m_alpha0, m_alpha1, m_alpha2):
    failures = []
    for alpha, M in ((0.0, m_alpha0), (1.0, m_alpha1), (2.0, m_alpha2)):
        base = verify_cz2(M, generate_corpus(TestCorpus(seed=42, size=200), M, 1.0))
        doubled = verify_cz2(M, generate_corpus(TestCorpus(seed=42, size=400), M, 1.0))
        worst = max(r["bochner_residual"] for r in doubled.records)
        if worst >= 1e-6:
            failures.append(f"alpha={alpha}: bochner residual {worst:.3e}")
        change = abs(doubled.empirical_constant / base.empirical_constant - 1.0)
        if change >= 0.10:
            failures.append(
                f"alpha={alpha}: constant moves {change:.2%} under doubling "
                f"({base.empirical_constant:.5f} -> {doubled.empirical_constant:.5f})"
            )
    assert _verdict(5, "bochner-cz2-stability", not failures), failures


def test_criterion_06_green_superharmonicity(m_alpha0, m_alpha1, m_alpha2):
    failures = []
    for alpha, M in ((0.0, m_alpha0), (1.0, m_alpha1), (2.0, m_alpha2)):
        for p in (1.5, 2.0, 3.0):
            resid = superharmonicity_residual(build_green(M, p))
            if resid >= 1e-7:
                failures.append(f"alpha={alpha} p={p}: residual {resid:.3e}")
    assert _verdict(6, "green-superharmonicity", not failures), failures


def test_criterion_07_exhaustion_solver(m_alpha0):
    failures = []
    psi = smooth_plateau(1.5, 5.0, 0.5, 0.5)
    sol = solve_dirichlet_exhaustion(
        m_alpha0, psi, [8.0, 16.0, 32.0], p_list=(1.0, 2.0, 4.0)
    )
    if sol.monotone_defect > 1e-10:
        failures.append(f"monotone defect {sol.monotone_defect:.3e}")
    for p in (1.0, 2.0, 4.0):
        bound = lp_norm(m_alpha0, psi, p) + 1e-8
        if max(sol.norms[p]) > bound:
            failures.append(f"p={p}: norm {max(sol.norms[p]):.6g} > {bound:.6g}")
    if max(sol.sup_norms) > sol.psi_norms["sup"] + 1e-8:
        failures.append(f"sup norm {max(sol.sup_norms):.6g}")
    bump = smooth_bump(2.0, 1.0)
    base = solve_dirichlet_exhaustion(m_alpha0, bump, [12.0])
    fine = solve_dirichlet_exhaustion(m_alpha0, bump, [12.0], mesh_points=8000)
    ts = np.linspace(0.8, 10.0, 23)
    gap = float(np.max(np.abs(base.evaluate(0, ts) - fine.evaluate(0, ts)))
                / np.max(np.abs(fine.evaluate(0, ts))))
    if gap >= 1e-6:
        failures.append(f"refined-mesh oracle gap {gap:.3e}")
    assert _verdict(7, "exhaustion-solver", not failures), failures


def test_criterion_08_stochastic_threshold():
    failures = []
    cases = [(PowerLaw(1.0, a), "incomplete") for a in (2.5, 3.0, 4.0)]
    cases += [(PowerLaw(1.0, a), "complete") for a in (0.0, 1.0, 2.0)]
    cases += [(Flat(), "complete")]
    for profile, expected in cases:
        for n in (2, 3):
            M = build_model(n, profile, t_max=200.0, tol=1e-10)
            rep = classify_stochastic_completeness(M)
            tag = f"{profile.__class__.__name__.lower()} n={n}"
            if rep.classification != expected:
                failures.append(
                    f"{tag}: classified {rep.classification}, expected {expected}"
                )
            if rep.laplacian_residual > 1e-9:
                failures.append(
                    f"{tag}: laplacian residual {rep.laplacian_residual:.3e}"
                )
    assert _verdict(8, "stochastic-threshold", not failures), failures


def test_criterion_09_cutoff_scaling():
    failures = []
    R_list = [16.0 * 2.0 ** i for i in range(7)]   # 16 .. 1024
    for beta in (0.0, 2.0, 4.0):
        M = build_model(3, PowerLaw(1.0, beta), t_max=2200.0, tol=1e-10)
        certs = [certify_cutoff(M, make_hessian_cutoff(M, R), beta)
                 for R in R_list]
        grads = [c[0] for c in certs]
        hesses = [c[1] for c in certs]
        g_spread = max(grads) / min(grads)
        h_spread = max(hesses) / min(hesses)
        if g_spread >= 2.0 or h_spread >= 2.0:
            failures.append(
                f"beta={beta}: spreads grad {g_spread:.3f}, hess {h_spread:.3f}"
            )
    assert _verdict(9, "cutoff-scaling", not failures), failures


def test_criterion_10_density_mechanism():
    M = build_model(3, PowerLaw(1.0, 1.0), t_max=132.0, tol=1e-10)
    gmax = M.t_grid_max
    probe = warped_tail(M, 2.0, 5.5, lo=2.0, hi=0.96 * gmax,
                        ramp_lo=1.0, ramp_hi=0.03 * gmax)
    radii = [8.0, 16.0, 32.0, 64.0]
    cuts = [make_hessian_cutoff(M, R) for R in radii]
    rep = density_probe(M, probe, cuts, 2.0, radii)
    failures = []
    for col in ("remainder", "first_order", "second_order"):
        vals = [r[col] for r in rep.records]
        if not all(b < a for a, b in zip(vals, vals[1:])):
            failures.append(f"{col} not strictly decreasing: {vals}")
        if vals[-1] > 1e-3 * vals[0]:
            failures.append(f"{col} ends at {vals[-1] / vals[0]:.3e} of start")
    if rep.verdict != "holds":
        failures.append(f"verdict {rep.verdict}")
    assert _verdict(10, "density-mechanism", not failures), failures


def test_criterion_11_li_yau_ratio(m_flat):
    failures = []
    M = build_model(3, PowerLaw(1.0, 2.0), t_max=132.0, tol=1e-11)
    v = exterior_eigenfunction(M, 1.0)
    ratios = [li_yau_ratio(M, v, (1.0, 0), R, 2.0)
              for R in (8.0, 16.0, 32.0, 64.0)]
    spread = max(ratios) / min(ratios)
    if spread >= 2.0:
        failures.append(f"ratio spread {spread:.3f} over {ratios}")
    vf = exterior_eigenfunction(m_flat, 1.0)
    a = 2.0
    for R in (5.0, 10.0, 20.0):
        got = li_yau_ratio(m_flat, vf, (a, 0), R, 2.0)
        ref = (1.0 + 1.0 / R) / (a * R)
        if abs(got - ref) / ref > 1e-10:
            failures.append(f"flat R={R}: {got!r} vs {ref!r}")
    assert _verdict(11, "li-yau-ratio", not failures), failures


def test_criterion_12_positivity_probe(m_alpha0, m_alpha1, m_alpha2):
    failures = []
    mu = smooth_plateau(1.25, 1.75, 0.25, 0.25)
    for alpha, M in ((0.0, m_alpha0), (1.0, m_alpha1), (2.0, m_alpha2)):
        for p in (1.5, 2.0):
            rep = positivity_probe(M, mu, p, 4.0, sweep_doublings=2)
            tag = f"alpha={alpha} p={p}"
            target = rep.extra["target"]
            if rep.extra["min_u"] < -1e-8 * rep.extra["sup_u"]:
                failures.append(f"{tag}: min u {rep.extra['min_u']:.3e}")
            last = rep.records[-1]
            for term in ("gradient_term", "laplacian_term"):
                if abs(last[term]) > 1e-3 * target:
                    failures.append(
                        f"{tag}: {term} {abs(last[term]):.3e} vs "
                        f"target {target:.3e}"
                    )
            if rep.verdict != "holds":
                failures.append(f"{tag}: verdict {rep.verdict}")
    assert _verdict(12, "positivity-probe", not failures), failures


def test_criterion_13_determinism(tmp_path):
    cfg = tmp_path / "full.json"
    cfg.write_text(json.dumps({
        "schema": "warplab-config/1",
        "command": "all",
        "t_max": 132.0,
        "count": 8,
        "radii": [8.0, 16.0, 32.0, 64.0],
        "plot": False,
    }))
    outs = []
    for name in ("run1", "run2"):
        out = tmp_path / name
        rc = cli_main(["--config", str(cfg), "--out", str(out)])
        assert rc == 0, f"full pipeline exited {rc}"
        outs.append(out)
    same_csv = (outs[0] / "records.csv").read_bytes() == \
               (outs[1] / "records.csv").read_bytes()
    same_rep = (outs[0] / "report.json").read_bytes() == \
               (outs[1] / "report.json").read_bytes()
    ok = same_csv and same_rep
    assert _verdict(13, "determinism", ok), (
        f"records identical: {same_csv}, report identical: {same_rep}"
    )
