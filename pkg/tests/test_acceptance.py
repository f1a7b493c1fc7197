"""Acceptance gate: ten end-to-end criteria over the whole package.

Each test builds one `[criterion N] PASS/FAIL - detail` line, prints it,
and hands it to the terminal-summary hook in conftest so every verdict is
replayed at the end of the run regardless of capture settings, then
asserts on it.  Criteria that cannot be met at desk scale fail here with
the measured numbers in the detail line rather than being weakened.
"""

import math
import time

import conftest
import numpy as np
import pytest
from scipy import stats as scipy_stats

from edgetail import sampler, spectral, structure, tails
from edgetail.graphs import Graph
from edgetail.ramsey import OverlapConfig, verify_lt_implication
from edgetail.rates import RegimeParams, TailSpec
from edgetail.spectral import (eigen_bounds, rayleigh_quotient, spectral_norm,
                               sum_of_squares_check, top_r_eigenvalues)
from edgetail.tails import (InsufficientDataError, enumerate_exact,
                            fit_exponent, is_estimate_planted,
                            is_estimate_tilted, mc_estimate, parse_event,
                            verify_fkg_degree, verify_tilt_bound)


def _report(num, ok, budget_s, elapsed_s, detail):
    line = (f"[criterion {num}] {'PASS' if ok else 'FAIL'} - {detail} "
            f"(elapsed {elapsed_s:.1f}s, budget {budget_s:.0f}s)")
    print(line)
    conftest.criterion_lines.append(line)
    return line


def _dense_vec(n, sparse):
    phi = np.zeros(n)
    for i, val in sparse.items():
        phi[int(i)] = val
    return phi


def _disjoint_stars(n, r, s):
    edges, vnext = [], 0
    for _ in range(r):
        c = vnext
        edges += [(c, x) for x in range(vnext + 1, vnext + 1 + s)]
        vnext += 1 + s
    return Graph(n, np.array(edges, dtype=np.int64))


def _glued_stars(n, k, b):
    block = range(k, k + b)
    edges = [(c, x) for c in range(k) for x in block]
    return Graph(n, np.array(edges, dtype=np.int64))


def test_criterion_01_estimators_match_exact_oracle():
    # three estimators vs full enumeration on every small-graph event,
    # 1e5 trials each, agreement within three standard errors
    budget = 120.0
    t0 = time.perf_counter()
    trials = 100_000
    checks = 0
    worst_z = 0.0
    failures = []
    seed = 1000
    for n in (3, 4, 5, 6):
        for p in (0.2, 0.5):
            lt_thr = max(1, math.ceil(0.5 * (n - 1) * p))
            events = [("lambda1>=2", 2), ("dmax<=1", 0), ("d2>=2", 2),
                      (f"dmax<={lt_thr}", 0)]
            for text, s_plant in events:
                pred = parse_event(text)
                exact = enumerate_exact(n, p, pred).prob
                ests = [
                    ("direct", mc_estimate(pred, n, p, trials, seed)),
                    ("tilted", is_estimate_tilted(pred, n, p, p / 2, trials,
                                                  seed + 1)),
                    ("planted", is_estimate_planted(pred, n, p, s_plant,
                                                    trials, seed + 2)),
                ]
                seed += 3
                for name, est in ests:
                    checks += 1
                    diff = abs(est.prob - exact)
                    z = diff / est.std_error if est.std_error > 0 else 0.0
                    worst_z = max(worst_z, z)
                    if diff > 3 * est.std_error + 1e-12:
                        failures.append((n, p, text, name, z))
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < budget
    line = _report(1, ok, budget, elapsed,
                   f"{checks - len(failures)}/{checks} estimator-vs-oracle "
                   f"checks within 3 SE (worst z = {worst_z:.2f})"
                   + (f"; failures {failures[:3]}" if failures else ""))
    assert ok, line


def test_criterion_02_spectral_identities():
    budget = 60.0
    t0 = time.perf_counter()
    star_bad = sum(
        abs(top_r_eigenvalues(Graph.star(s), 1).eigenvalues[0]
            - math.sqrt(s)) > 1e-10
        for s in range(1, 65))

    rng = sampler.derived_rng(202, 0)
    bracket_bad = 0
    for _ in range(500):
        n = int(rng.integers(2, 201))
        p = float(10.0 ** rng.uniform(-2.0, math.log10(0.5)))
        g = sampler.sample_gnp(n, p, int(rng.integers(0, 2 ** 32)))
        lo, hi = eigen_bounds(g)
        lam1 = top_r_eigenvalues(g, 1).eigenvalues[0]
        if not (lo - 1e-8 <= lam1 <= hi + 1e-8):
            bracket_bad += 1

    sumsq_bad = 0
    for i in range(150):
        n = int(rng.integers(2, 201))
        g = sampler.sample_gnp(n, float(rng.uniform(0.02, 0.5)),
                               int(rng.integers(0, 2 ** 32)))
        ssq = sum_of_squares_check(g)
        if abs(ssq - 2.0 * g.m) > 1e-6 * max(1.0, 2.0 * g.m):
            sumsq_bad += 1

    sym_bad = 0
    for i in range(100):
        n = int(rng.integers(5, 121))
        g = sampler.sample_gnp(n, float(rng.uniform(0.02, 0.2)),
                               int(rng.integers(0, 2 ** 32)))
        forest = structure.remove_cycles(g)[0]
        vals = np.sort(np.linalg.eigvalsh(forest.to_dense()))
        if np.max(np.abs(vals + vals[::-1])) > 1e-8:
            sym_bad += 1

    elapsed = time.perf_counter() - t0
    ok = (star_bad == 0 and bracket_bad == 0 and sumsq_bad == 0
          and sym_bad == 0 and elapsed < budget)
    line = _report(2, ok, budget, elapsed,
                   f"star eigenvalues 64/64, brackets {500 - bracket_bad}/500, "
                   f"sum-of-squares {150 - sumsq_bad}/150, "
                   f"forest symmetry {100 - sym_bad}/100")
    assert ok, line


def test_criterion_03_krylov_matches_dense():
    budget = 180.0
    t0 = time.perf_counter()
    rng = sampler.derived_rng(303, 0)
    sizes = ([int(rng.integers(100, 601)) for _ in range(60)]
             + [int(rng.integers(600, 1201)) for _ in range(30)]
             + [int(rng.integers(1200, 2001)) for _ in range(10)])
    worst = 0.0
    bad = 0
    for n in sizes:
        avg_deg = float(10.0 ** rng.uniform(math.log10(0.5), math.log10(20.0)))
        p = min(0.5, avg_deg / (n - 1))
        g = sampler.sample_gnp(n, p, int(rng.integers(0, 2 ** 32)))
        ref = np.sort(np.linalg.eigvalsh(g.to_dense()))[-5:][::-1]
        got = top_r_eigenvalues(g, 5, method="krylov").eigenvalues
        gap = float(np.max(np.abs(np.asarray(got) - ref)))
        worst = max(worst, gap)
        if gap > 1e-8:
            bad += 1
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and elapsed < budget
    line = _report(3, ok, budget, elapsed,
                   f"top-5 Krylov vs dense on {len(sizes) - bad}/{len(sizes)} "
                   f"graphs within 1e-8 (worst gap {worst:.2e})")
    assert ok, line


def test_criterion_04_typical_value_trend():
    budget = 600.0
    t0 = time.perf_counter()
    ratio_medians = []
    degree_medians = []
    for n in (2 ** 10, 2 ** 13, 2 ** 16):
        p = 1.0 / n
        rp = RegimeParams.compute(n, p)
        ratios, degs = [], []
        for i in range(50):
            g = sampler.sample_gnp(n, p, sampler.derived_seed(404, (n, i)))
            d1 = int(g.degree_sequence()[0])
            lam1 = top_r_eigenvalues(g, 1).eigenvalues[0]
            ratios.append(lam1 / math.sqrt(d1))
            degs.append(d1 / rp.lp)
        ratio_medians.append(float(np.median(ratios)))
        degree_medians.append(float(np.median(degs)))
    elapsed = time.perf_counter() - t0
    windows_ok = all(1.0 <= r <= 1.5 for r in ratio_medians)
    monotone_ok = all(ratio_medians[i + 1] <= ratio_medians[i] + 1e-12
                      for i in range(2))
    degree_ok = all(0.6 <= d <= 1.8 for d in degree_medians)
    ok = windows_ok and monotone_ok and degree_ok and elapsed < budget
    line = _report(4, ok, budget, elapsed,
                   "median lambda1/sqrt(d_(1)) = "
                   + "/".join(f"{r:.3f}" for r in ratio_medians)
                   + " (window [1.0,1.5], non-increasing), median d_(1)/Lp = "
                   + "/".join(f"{d:.3f}" for d in degree_medians)
                   + " (window [0.6,1.8])")
    assert ok, line


def test_criterion_05_degree_upper_tail_exponent():
    budget = 600.0
    t0 = time.perf_counter()
    spec = TailSpec("degree", "upper", (1.0,))
    pts = []
    details = []
    for n, trials in ((1000, 4000), (10000, 3000), (100000, 1200)):
        p = 1.0 / n
        rp = RegimeParams.compute(n, p)
        s = math.ceil(2 * rp.lp - 1e-12)
        est = is_estimate_planted(spec, n, p, spec, trials, 99)
        pts.append((n, est))
        # first-moment reference, inclusion-exclusion order 1
        ref1 = math.log(n * float(scipy_stats.binom.sf(s - 1, n - 1, p)))
        details.append(f"n={n}: logP {est.log_prob:.2f} (ref {ref1:.2f})")
    fit = fit_exponent(pts, "log_n")
    elapsed = time.perf_counter() - t0
    ok = abs(fit.slope - 1.0) <= 0.35 and elapsed < budget
    line = _report(5, ok, budget, elapsed,
                   f"fitted -logP/log n slope {fit.slope:.4f} +- "
                   f"{fit.slope_stderr:.4f} vs target 1 +- 0.35; "
                   + "; ".join(details)
                   + "; the probability is still O(1) at these n, so the "
                     "polynomial-decay exponent has not set in")
    assert ok, line


def test_criterion_06_degree_lower_tail_double_log():
    budget = 600.0
    t0 = time.perf_counter()
    spec = TailSpec("degree", "lower", (0.6,))
    trials = 20000
    hits = []
    pts_direct, pts_tilted = [], []
    for i, n in enumerate((200, 400, 800)):
        p = 1.0 / n
        est_d = mc_estimate(spec, n, p, trials, 601 + i)
        est_t = is_estimate_tilted(spec, n, p, 0.4 * p, trials, 651 + i)
        pts_direct.append((n, est_d))
        pts_tilted.append((n, est_t))
        hits.append(f"n={n}: direct hits {est_d.hits_or_ess:.0f}, "
                    f"tilted ess {est_t.hits_or_ess:.2f}")

    slopes = {}
    for name, pts in (("direct", pts_direct), ("tilted", pts_tilted)):
        try:
            slopes[name] = fit_exponent(pts, "log_log_over_log_n").slope
        except InsufficientDataError:
            slopes[name] = None

    # exact reference: the event at these (n, p) is "the graph is a
    # matching", whose probability sums over k-edge matchings exactly
    def log_prob_matching(n, p):
        npairs = n * (n - 1) // 2
        terms = [(math.lgamma(n + 1) - math.lgamma(k + 1)
                  - math.lgamma(n - 2 * k + 1) - k * math.log(2.0)
                  + k * math.log(p) + (npairs - k) * math.log1p(-p))
                 for k in range(n // 2 + 1)]
        mx = max(terms)
        return mx + math.log(math.fsum(math.exp(t - mx) for t in terms))

    truth = [(n, log_prob_matching(n, 1.0 / n)) for n in (200, 400, 800)]
    xs = [math.log(n) for n, _ in truth]
    ys = [math.log(-v) for _, v in truth]
    truth_slope = float(np.polyfit(xs, ys, 1)[0])

    elapsed = time.perf_counter() - t0
    ok = (all(s is not None and abs(s - 0.6) <= 0.35
              for s in slopes.values()) and elapsed < budget)
    line = _report(6, ok, budget, elapsed,
                   f"direct slope {slopes['direct']}, tilted slope "
                   f"{slopes['tilted']} vs target 0.6 +- 0.35; "
                   + "; ".join(hits)
                   + "; exact truth logP = "
                   + "/".join(f"{v:.1f}" for _, v in truth)
                   + f" with double-log slope {truth_slope:.3f}, itself "
                     "outside the band; the event is not MC-reachable here")
    assert ok, line


def test_criterion_07_structure_decomposition_at_scale():
    budget = 600.0
    t0 = time.perf_counter()
    n, p = 100_000, 1e-5
    rp = RegimeParams.compute(n, p)
    bound = 0.9 * math.sqrt(rp.lp)
    partition_ok = 0
    stars_ok = 0
    norm_ok = 0
    norms = []
    for i in range(100):
        g = sampler.sample_gnp(n, p, sampler.derived_seed(700, i))
        dec = structure.star_decompose(g, rp)
        e1, e2, eg = dec.f1.edge_set(), dec.f2.edge_set(), g.edge_set()
        if (e1 | e2) == eg and not (e1 & e2):
            partition_ok += 1
        if structure.star_forest_ok(dec.f1):
            stars_ok += 1
        norm = spectral_norm(dec.f2)
        norms.append(norm)
        if norm <= bound:
            norm_ok += 1
    elapsed = time.perf_counter() - t0
    ok = (partition_ok == 100 and stars_ok == 100 and norm_ok >= 95
          and elapsed < budget)
    line = _report(7, ok, budget, elapsed,
                   f"edge partition {partition_ok}/100, star components "
                   f"{stars_ok}/100, ||F2|| <= 0.9 sqrt(Lp) = {bound:.3f} in "
                   f"{norm_ok}/100 (need 95; median ||F2|| "
                   f"{float(np.median(norms)):.3f}); the second layer is not "
                   f"yet o(sqrt(Lp)) at n = 1e5")
    assert ok, line


def test_criterion_08_fkg_positive_association():
    budget = 60.0
    t0 = time.perf_counter()
    checks = 0
    violations = 0
    min_margin = float("inf")
    for n in (3, 4, 5, 6):
        for k in range(1, n - 1):
            for p in (0.2, 0.5, 0.8):
                res = verify_fkg_degree(n, p, k)
                checks += 1
                margin = res["joint"] - res["product"]
                min_margin = min(min_margin, margin)
                if margin < -1e-12:
                    violations += 1
    elapsed = time.perf_counter() - t0
    ok = violations == 0 and elapsed < budget
    line = _report(8, ok, budget, elapsed,
                   f"{checks} exact joint-vs-product degree checks, "
                   f"{violations} violations (min margin {min_margin:.3e})")
    assert ok, line


def test_criterion_09_tilting_identity_and_proxy():
    budget = 180.0
    t0 = time.perf_counter()
    try:
        res = verify_tilt_bound(200, 0.2, 0.1, 0.1, 1000, 901)
        gap = res["max_identity_gap"]
        frac = res["fraction_within_proxy"]
        detail = (f"log-likelihood identity holds to relative "
                  f"{gap:.2e} on 1000/1000 samples; fraction with "
                  f"||A - q'J|| <= {res['proxy_bound']:.3f} is {frac:.3f} "
                  f"(need >= 0.5); Cauchy-Schwarz failures "
                  f"{res['cs_failures']}")
        good = gap <= 1e-10 and frac >= 0.5
    except AssertionError as exc:
        good, detail = False, f"identity violated: {exc}"
    elapsed = time.perf_counter() - t0
    ok = good and elapsed < budget
    line = _report(9, ok, budget, elapsed, detail)
    assert ok, line


def test_criterion_10_certificate_soundness():
    budget = 300.0
    t0 = time.perf_counter()
    n, p = 2000, 0.00295
    rp = RegimeParams.compute(n, p)
    lp = rp.lp
    cfg = OverlapConfig.make(r=2, delta_r=0.5, eps=0.05, eps1=0.8,
                             K=20, L=16, relaxed=True)
    need_k = (1 - cfg.delta_r + cfg.eps) ** 2 * lp
    master = 20260822

    counts = {}
    recheck_fail = 0
    spectrum_fail = 0
    bad_counterexamples = 0
    valid = 0
    attempts = 0
    while valid < 1000 and attempts < 1100:
        i = attempts
        attempts += 1
        g = sampler.sample_gnp(n, p, sampler.derived_seed(master, i))
        rng = sampler.derived_rng(master, (1, i))
        centers = rng.choice(n, size=cfg.K, replace=False)
        for j, c in enumerate(centers):
            g, _ = sampler.plant_star(g, int(c), 12, p,
                                      sampler.derived_seed(master, (2, i, j)))
        degs = g.degree_sequence()
        if degs[cfg.K - 1] < need_k or degs[0] > lp:
            continue        # instance misses a hypothesis, draw another
        valid += 1
        v = verify_lt_implication(g, cfg, rp)
        counts[v.outcome] = counts.get(v.outcome, 0) + 1
        if v.outcome == "lambda_r_certified":
            bound = v.certificate["bound"]
            for sv in v.certificate["vectors"]:
                if rayleigh_quotient(g, _dense_vec(n, sv)) < bound - 1e-6:
                    recheck_fail += 1
            lam = top_r_eigenvalues(g, cfg.r).eigenvalues[cfg.r - 1]
            if lam < bound - 1e-6:
                spectrum_fail += 1
        elif v.outcome == "lambda1_certified":
            bound = v.certificate["bound"]
            phi = _dense_vec(n, v.certificate["vector"])
            if rayleigh_quotient(g, phi) < bound - 1e-6:
                recheck_fail += 1
            if top_r_eigenvalues(g, 1).eigenvalues[0] < bound - 1e-6:
                spectrum_fail += 1
        elif v.outcome == "counterexample":
            if not v.certificate.get("diagnostics"):
                bad_counterexamples += 1

    certified = (counts.get("lambda_r_certified", 0)
                 + counts.get("lambda1_certified", 0))

    # constructed instances with designed verdicts
    cfg3 = OverlapConfig.make(r=3, delta_r=0.5, eps=0.05, eps1=0.8,
                              K=3, L=3, relaxed=True)
    designed = []
    s_cert = math.ceil((1 - 0.5 + 0.05) ** 2 * lp)
    va = verify_lt_implication(_disjoint_stars(n, 3, s_cert), cfg3, rp)
    designed.append(va.outcome == "lambda_r_certified"
                    and va.certificate["bound"] >= va.certificate["required"])
    vb = verify_lt_implication(_disjoint_stars(n, 3, 5), cfg3, rp)
    designed.append(vb.outcome == "hypothesis_fails"
                    and "d_(K)" in vb.certificate["failed"])
    vd = verify_lt_implication(_disjoint_stars(n, 3, 40), cfg3, rp)
    designed.append(vd.outcome == "hypothesis_fails"
                    and "d_(1)" in vd.certificate["failed"])
    k_glue, b_glue = 11, math.ceil(0.85 * lp)
    cfg_glue = OverlapConfig.make(r=2, delta_r=0.5, eps=0.05, eps1=0.8,
                                  K=k_glue, L=k_glue, relaxed=True)
    vc = verify_lt_implication(_glued_stars(n, k_glue, b_glue), cfg_glue, rp)
    designed.append(vc.outcome == "lambda1_certified"
                    and vc.certificate["route"] == "high_overlap"
                    and vc.certificate["quotient"] >= 2 * math.sqrt(lp))
    ve = verify_lt_implication(_glued_stars(n, 3, 15), cfg3, rp)
    designed.append(ve.outcome == "counterexample"
                    and bool(ve.certificate["diagnostics"])
                    and any("subspace bound" in d
                            for d in ve.certificate["diagnostics"]))

    elapsed = time.perf_counter() - t0
    ok = (valid == 1000 and recheck_fail == 0 and spectrum_fail == 0
          and bad_counterexamples == 0 and certified == valid
          and all(designed) and elapsed < budget)
    line = _report(10, ok, budget, elapsed,
                   f"{valid} random planted instances ({attempts - valid} "
                   f"redrawn): verdicts {counts}, Rayleigh rechecks failed "
                   f"{recheck_fail}, spectral rechecks failed {spectrum_fail}, "
                   f"undiagnosed counterexamples {bad_counterexamples}; "
                   f"designed verdicts {sum(designed)}/5")
    assert ok, line
