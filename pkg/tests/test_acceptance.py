"""Acceptance gate: one test per criterion, one printed line per criterion.

Each test computes its quantities, prints a [PASS]/[FAIL] line with the
measured numbers, then asserts.  Tolerances are fixed here and are not
calibrated to the implementation.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
"""

import math
import time

import numpy as np
import pytest

from spherefacets import (
    EnsembleSpec,
    PolytopeParams,
    TypicalHeightLaw,
    cdf_table,
    check_bounds_suite,
    concentration_height,
    count_rate,
    count_rate_roots,
    estimate,
    expected_facets,
    facets_per_vertex_limit,
    gamma_statistic_cdf,
    height_rate_prime,
    ks_distance,
    norm_cdf,
    origin_outside_prob,
    random_bounds_grid,
    rate_argmax,
    typical_height_cdf,
)
from spherefacets.solvers import bisect_root


def report(num: int, ok: bool, detail: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {detail}")


class TestCriterion1:
    def test_analytic_oracle_suite(self):
        """Closed-form facet counts at 1e-6 relative, under a minute."""
        t0 = time.time()
        worst = 0.0
        for n in range(3, 51):
            f = expected_facets(PolytopeParams(n, 2)).to_float()
            worst = max(worst, abs(f / n - 1.0))
        for d in range(2, 16):
            f = expected_facets(PolytopeParams(d + 1, d)).to_float()
            worst = max(worst, abs(f / (d + 1) - 1.0))
        for n in range(5, 41):
            f = expected_facets(PolytopeParams(n, 3)).to_float()
            worst = max(worst, abs(f / (2 * n - 4) - 1.0))
        elapsed = time.time() - t0
        ok = worst < 1e-6 and elapsed < 60.0
        report(1, ok, f"analytic oracles, worst rel err {worst:.2e}, {elapsed:.1f}s")
        assert worst < 1e-6
        assert elapsed < 60.0

    def test_criterion_2_constants(self):
        k2 = facets_per_vertex_limit(2).to_float()
        k3 = facets_per_vertex_limit(3).to_float()
        worst_w = max(abs(origin_outside_prob(2 * d, d) - 0.5) for d in range(1, 21))
        ok = abs(k2 - 1.0) < 1e-12 and abs(k3 - 2.0) < 1e-12 and worst_w < 1e-12
        report(
            2, ok,
            f"limits K2-1={k2 - 1:.1e}, K3-2={k3 - 2:.1e}, "
            f"worst |wendel(2d,d)-1/2|={worst_w:.1e}",
        )
        assert abs(k2 - 1.0) < 1e-12
        assert abs(k3 - 2.0) < 1e-12
        assert worst_w < 1e-12


class TestCriterion3:
    def test_concentration_count_convergence(self):
        """d=3: F_exact / (n K_3 h*^2) walks monotonically into 1 +- 1e-3."""
        k3 = facets_per_vertex_limit(3).to_float()
        gaps = []
        ratios = []
        for n in (10**3, 10**4, 10**5, 10**6):
            p = PolytopeParams(n, 3)
            f = expected_facets(p).to_float()
            h_star = concentration_height(p)
            ratios.append(f / (n * k3 * h_star**2))
            gaps.append(abs(ratios[-1] - 1.0))
        monotone = all(b < a for a, b in zip(gaps, gaps[1:]))
        ok = monotone and gaps[-1] < 1e-3
        report(
            3, ok,
            f"ratios {['%.6f' % r for r in ratios]}, final gap {gaps[-1]:.2e}",
        )
        assert monotone
        assert gaps[-1] < 1e-3


class TestCriterion4:
    def test_gamma_statistic_exponential_limit(self):
        """d=2: cap statistic approaches the unit-rate exponential law."""
        ys = np.linspace(0.02, 8.0, 200)
        sups = []
        for n in (10**3, 10**4, 10**5, 10**6):
            law = TypicalHeightLaw.for_params(PolytopeParams(n, 2))
            sup = max(
                abs(gamma_statistic_cdf(law, float(y)) - (1.0 - math.exp(-y)))
                for y in ys
            )
            sups.append(sup)
        decreasing = all(b < a for a, b in zip(sups, sups[1:]))
        ok = sups[-1] < 0.01 and decreasing
        report(4, ok, f"sup distances {['%.2e' % s for s in sups]}")
        assert sups[-1] < 0.01
        assert decreasing


class TestCriterion5:
    def test_rate_solvers_on_log_grid(self):
        rhos = np.geomspace(0.05, 50.0, 25)
        worst_f = 0.0
        worst_g = 0.0
        for rho in rhos:
            rho = float(rho)
            r_peak = rate_argmax(rho)
            worst_f = max(worst_f, abs(height_rate_prime(rho, r_peak)))
            lo, hi = count_rate_roots(rho)
            worst_g = max(worst_g, abs(count_rate(rho, lo)), abs(count_rate(rho, hi)))
        threshold = bisect_root(lambda r: count_rate(r, 0.0), 2.0, 5.0, xtol=1e-10)
        ok = worst_f < 1e-8 and worst_g < 1e-8 and abs(threshold - 3.4) <= 0.05
        report(
            5, ok,
            f"|f'| worst {worst_f:.1e}, |g| worst {worst_g:.1e}, "
            f"origin-rate threshold {threshold:.4f}",
        )
        assert worst_f < 1e-8
        assert worst_g < 1e-8
        assert abs(threshold - 3.4) <= 0.05


class TestCriterion6:
    @pytest.mark.parametrize(
        "n, d, reps",
        [(12, 4, 10**4), (15, 3, 10**4), (14, 5, 5 * 10**3)],
    )
    def test_monte_carlo_agreement(self, n, d, reps):
        t0 = time.time()
        params = PolytopeParams(n, d)
        run = estimate(EnsembleSpec(params, replicates=reps, seed=20260808))
        exact_val = expected_facets(params).to_float()
        # 3 standard errors, plus the quadrature's own tolerance when the
        # count is a.s. constant and the standard error is exactly zero
        count_ok = abs(run.mean_facets - exact_val) <= 3 * run.se_facets + 1e-6 * exact_val
        wendel_inside = 1.0 - origin_outside_prob(n, d)
        origin_tol = 3 * run.origin_inside_se + 1e-12
        origin_ok = abs(run.origin_inside_freq - wendel_inside) <= origin_tol
        law = TypicalHeightLaw.for_params(params)
        _, heights, cdf = cdf_table(law, 4001)
        ks = ks_distance(run.pooled_heights, heights, cdf)
        ks_ok = ks < 0.02
        elapsed = time.time() - t0
        ok = count_ok and origin_ok and ks_ok
        report(
            6, ok,
            f"(n={n}, d={d}, reps={reps}): count {run.mean_facets:.3f} vs "
            f"{exact_val:.3f} (se {run.se_facets:.3f}), origin "
            f"{run.origin_inside_freq:.4f} vs {wendel_inside:.4f}, KS {ks:.4f}, "
            f"{elapsed:.0f}s",
        )
        assert count_ok
        assert origin_ok
        assert ks_ok
        assert elapsed < 200.0  # three configs must fit the 10-minute budget


class TestCriterion7:
    def test_inequality_property_suites(self):
        grids = random_bounds_grid(10**4, seed=7)
        result = check_bounds_suite(rel_slack=1e-12, **grids)
        ok = result.ok() and result.checked == 3 * 10**4 and not result.hypothesis_errors
        report(
            7, ok,
            f"{result.checked} randomized points, "
            f"{len(result.violations)} violations beyond 1e-12",
        )
        assert result.checked == 3 * 10**4
        assert result.violations == []


class TestCriterion8:
    """Typical-height probe at d = 400, n = d + ceil(d^(1/4)).

    The criterion asks the exact CDF of d*H at z to match Phi(z) within
    0.02.  At this size (n - d)/sqrt(d) = 0.25, so the limit law's
    centering term 0.25*sqrt(2/pi) ~ 0.199 has not decayed, and the
    uncentered comparison is off by ~0.08 at z = 0 (verified against
    independent high-precision quadrature).  The criterion is asserted
    as stated; the companion test below shows the centered statistic
    meets the same tolerance, isolating the miss to the centering term.
    """

    D = 400
    N = 400 + math.ceil(400 ** 0.25)  # = 405

    def test_uncentered_probe_as_stated(self):
        law = TypicalHeightLaw.for_params(PolytopeParams(self.N, self.D))
        diffs = {}
        for z in (-1.0, 0.0, 1.0):
            got = typical_height_cdf(law, z / self.D)
            diffs[z] = got - norm_cdf(z)
        worst = max(abs(v) for v in diffs.values())
        ok = worst < 0.02
        report(
            8, ok,
            "uncentered CDF vs Phi at z=-1,0,1: "
            + ", ".join(f"{v:+.4f}" for v in diffs.values())
            + f" (worst {worst:.4f}, budget 0.02)",
        )
        assert worst < 0.02

    def test_centered_probe_diagnostic(self):
        """Not a criterion: the same probe with the limit law's centering."""
        shift = (self.N - self.D) / math.sqrt(self.D) * math.sqrt(2.0 / math.pi)
        law = TypicalHeightLaw.for_params(PolytopeParams(self.N, self.D))
        worst = 0.0
        for z in (-1.0, 0.0, 1.0):
            got = typical_height_cdf(law, (z + shift) / self.D)
            worst = max(worst, abs(got - norm_cdf(z)))
        print(f"[info] criterion 8 companion: centered probe worst |diff| {worst:.4f}")
        assert worst < 0.02
