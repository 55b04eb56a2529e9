"""Analytic-engine tests: LT, CF, association, serving distances, coverage."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from thzgeo import analytic, mcsim
from thzgeo.analytic import (
    GilPelaezOptions,
    LtOptions,
    SeriesOptions,
    assoc_prob_thz_asymptotic,
    assoc_prob_thz_quadrature,
    assoc_prob_thz_series,
    cf_omega,
    coverage_coexisting,
    coverage_hybrid,
    coverage_rf_conditional,
    coverage_rf_only,
    coverage_thz_only,
    lt_thz_average,
    lt_thz_conditional,
    mu_correction,
    rf_pdf_raw_mass,
    serving_distance_pdf_rf,
    serving_distance_pdf_thz,
)
from thzgeo.errors import ConvergenceError, DomainError, SeriesDivergenceError
from thzgeo.mcsim import McConfig, estimate_association, estimate_coverage, estimate_lt
from thzgeo.netmodel import AntennaPattern, default_params, derive_constants

# Parameter point where RF association is common and the approximate RF
# serving-distance formula sits inside its calibrated regime.
RF_HEAVY = dict(lambda_t=1e-3, b_t=1e-3, k_a=0.2, f_t=1.8e12)

# Wider beam than the energy-conserving default so interference is strong
# enough for coverage to vary over a -10..30 dB threshold grid.
WIDE_BEAM = AntennaPattern(g_max=10**2.5, g_min=10**-3.5, beamwidth=math.radians(10.0))


def wide_beam_params(**overrides):
    return default_params(tx_pattern=WIDE_BEAM, rx_pattern=WIDE_BEAM, **overrides)


def nearest_pdf(params):
    beta = math.pi * params.lambda_t
    return lambda r: 2.0 * beta * r * np.exp(-beta * r * r)


class TestLtConditional:
    def test_zero_argument_is_exactly_one(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            p = default_params(
                lambda_t=float(rng.uniform(0.001, 0.3)),
                k_a=float(rng.uniform(0.01, 0.5)),
            )
            r = float(rng.uniform(0.05, 30.0))
            assert lt_thz_conditional(0.0, r, p) == 1.0 + 0.0j

    def test_real_s_bounds_and_monotonicity(self):
        p = default_params(lambda_t=0.032)
        r = 2.0
        s_grid = np.geomspace(1e7, 5e9, 12)
        values = np.array([lt_thz_conditional(s, r, p).real for s in s_grid])
        assert np.all(values > 0.0) and np.all(values <= 1.0)
        assert np.all(np.diff(values) < 0.0)

    def test_monotone_in_intensity_and_absorption_and_distance(self):
        s = 1e9
        base = lt_thz_conditional(s, 2.0, default_params(lambda_t=0.032)).real
        denser = lt_thz_conditional(s, 2.0, default_params(lambda_t=0.1)).real
        more_abs = lt_thz_conditional(s, 2.0, default_params(lambda_t=0.032, k_a=0.2)).real
        farther = lt_thz_conditional(s, 5.0, default_params(lambda_t=0.032)).real
        assert denser < base
        assert more_abs > base
        assert farther > base

    def test_truncation_levels_differ(self):
        p = default_params(lambda_t=0.032)
        s = 2e9
        l1 = lt_thz_conditional(s, 2.0, p, LtOptions(truncation_L=1, adaptive=False)).real
        l3 = lt_thz_conditional(s, 2.0, p, LtOptions(truncation_L=3, adaptive=False)).real
        full = lt_thz_conditional(s, 2.0, p, LtOptions(adaptive=True)).real
        assert l1 != l3
        assert abs(l3 - full) < abs(l1 - full)

    def test_rejects_zero_absorption(self):
        with pytest.raises(DomainError):
            lt_thz_conditional(1e9, 2.0, default_params(k_a=0.0))

    def test_small_absorption_continuity(self):
        # there is no k_a = 0 limit (the far-field mean interference diverges
        # logarithmically), but the LT varies smoothly in k_a near the small
        # values callers substitute for the absorption-free case
        s = 1e9
        v1 = lt_thz_conditional(s, 2.0, default_params(k_a=1e-4), LtOptions()).real
        v2 = lt_thz_conditional(s, 2.0, default_params(k_a=1.05e-4), LtOptions()).real
        assert v1 == pytest.approx(v2, abs=5e-3)

    def test_divergence_guard(self):
        p = default_params(lambda_t=0.1)
        with pytest.raises(ConvergenceError):
            lt_thz_conditional(1e16, 0.05, p)

    def test_vectorised_matches_scalar(self):
        p = default_params()
        rs = np.array([0.5, 2.0, 8.0])
        vec = lt_thz_conditional(-1j * 1e9, rs, p)
        for i, r in enumerate(rs):
            assert vec[i] == pytest.approx(lt_thz_conditional(-1j * 1e9, float(r), p), rel=1e-12)


class TestLtAverage:
    def test_matches_monte_carlo(self):
        p = default_params(lambda_t=0.032, k_a=0.05, f_t=1.0e12)
        mc = McConfig(trials=20_000, master_seed=42, association_rule="nearest_thz")
        r_med = math.sqrt(math.log(2.0) / (math.pi * p.lambda_t))
        ei = float(analytic.mean_interference_thz(r_med, p))
        for u in (0.1, 1.0, 4.0):
            s = u / ei
            value, _ = lt_thz_average(s, p)
            est = estimate_lt(s, p, mc)
            assert value == pytest.approx(est.mean, rel=0.02)

    def test_zero(self):
        assert lt_thz_average(0.0, default_params()) == (1.0, 0)


class TestCfOmega:
    def test_origin(self):
        p = default_params()
        assert cf_omega(0.0, p, nearest_pdf(p)) == 1.0 + 0.0j

    def test_modulus_bound(self):
        p = default_params()
        pdf = nearest_pdf(p)
        for w in (3e2, 1e4, 3e5):
            assert abs(cf_omega(w, p, pdf)) <= 1.0 + 1e-6

    def test_hermitian_symmetry(self):
        p = default_params()
        pdf = nearest_pdf(p)
        for w in (1e3, 5e4):
            plus = cf_omega(w, p, pdf)
            minus = cf_omega(-w, p, pdf)
            assert plus == pytest.approx(np.conj(minus), abs=1e-9)


class TestAssociation:
    def test_no_rf_tier(self):
        assert assoc_prob_thz_quadrature(default_params(lambda_r=0.0)) == 1.0

    def test_huge_bias_limit(self):
        p = default_params(b_t=1e12)
        assert assoc_prob_thz_quadrature(p) == pytest.approx(1.0, abs=1e-6)

    def test_zero_bias_short_circuit(self):
        p = default_params(b_t=0.0)
        assert assoc_prob_thz_quadrature(p) == 0.0
        assert assoc_prob_thz_series(p) == 0.0

    def test_monotone_in_lambda_t(self):
        pat = AntennaPattern.from_db(15.0)
        values = [
            assoc_prob_thz_quadrature(
                default_params(
                    lambda_t=lam, k_a=0.2, f_t=1.8e12, alpha=3.6,
                    tx_pattern=pat, rx_pattern=pat,
                )
            )
            for lam in (1e-3, 3.2e-3, 0.01, 0.032, 0.1)
        ]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_complement_identity(self):
        p = default_params(**RF_HEAVY)
        p_at = assoc_prob_thz_quadrature(p)
        assert p_at + (1.0 - p_at) == pytest.approx(1.0, abs=1e-12)

    def test_bias_power_product_invariance(self):
        base = default_params(**RF_HEAVY)
        scaled = default_params(**{**RF_HEAVY, "b_t": RF_HEAVY["b_t"] / 7.0, "p_t": 7.0})
        assert assoc_prob_thz_quadrature(base) == pytest.approx(
            assoc_prob_thz_quadrature(scaled), abs=1e-9
        )

    def test_series_j0_normalization(self):
        # with no RF tier only the j = 0 term survives and must equal the
        # serving-distance density mass, i.e. exactly 1
        p = default_params(lambda_r=0.0)
        assert assoc_prob_thz_series(p) == pytest.approx(1.0, abs=1e-8)
        assert assoc_prob_thz_asymptotic(p) == pytest.approx(1.0, abs=1e-12)

    def test_series_matches_quadrature_in_convergent_regime(self):
        for lam in (0.032, 0.1):
            p = default_params(lambda_t=lam)
            assert assoc_prob_thz_series(p) == pytest.approx(
                assoc_prob_thz_quadrature(p), abs=1e-4
            )

    def test_series_agrees_with_asymptotic_at_tiny_absorption(self):
        p = default_params(lambda_t=0.05, k_a=1e-6)
        assert assoc_prob_thz_series(p) == pytest.approx(
            assoc_prob_thz_asymptotic(p), abs=1e-3
        )

    def test_asymptotic_anchor_points(self):
        for lam in (0.01, 0.1, 1.0):
            p = default_params(lambda_t=lam, k_a=1e-6)
            assert assoc_prob_thz_asymptotic(p) == pytest.approx(
                assoc_prob_thz_quadrature(p), abs=1e-3
            )

    def test_asymptotic_outside_regime_disagrees(self):
        # strong absorption & sparse THz: the zero-argument simplification is
        # documented to break down; the gap must exceed the convergent-regime
        # tolerance
        pat = AntennaPattern.from_db(15.0)
        p = default_params(
            lambda_t=0.01, k_a=0.2, f_t=1.8e12, alpha=3.6, tx_pattern=pat, rx_pattern=pat
        )
        gap = abs(assoc_prob_thz_asymptotic(p) - assoc_prob_thz_quadrature(p))
        assert gap > 1e-3

    def test_series_divergence_guard(self):
        pat = AntennaPattern.from_db(15.0)
        p = default_params(
            lambda_t=1e-3, k_a=0.2, f_t=1.8e12, alpha=3.6, tx_pattern=pat, rx_pattern=pat
        )
        with pytest.raises(SeriesDivergenceError):
            assoc_prob_thz_series(p, SeriesOptions(truncation_J=30, divergence_guard=5.0))

    def test_matches_monte_carlo(self):
        p = default_params(lambda_t=0.01)
        mc = McConfig(trials=20_000, master_seed=3, association_rule="brsp", disc_radius=200.0)
        est = estimate_association(p, mc)
        assert assoc_prob_thz_quadrature(p) == pytest.approx(est.mean, abs=0.01)


class TestServingDistancePdfs:
    def test_thz_pdf_normalizes(self):
        p = default_params(**RF_HEAVY)
        mass, _ = quad(lambda x: serving_distance_pdf_thz(x, p), 1e-9, 400.0, limit=400)
        assert mass == pytest.approx(1.0, abs=1e-6)

    def test_rf_pdf_normalizes(self):
        p = default_params(**RF_HEAVY)
        mass, _ = quad(lambda x: serving_distance_pdf_rf(x, p), 1e-9, 4000.0, limit=400)
        assert mass == pytest.approx(1.0, abs=1e-6)

    def test_thz_pdf_reduces_to_rayleigh_without_rf(self):
        p = default_params(lambda_r=0.0)
        beta = math.pi * p.lambda_t
        for x in (0.5, 2.0, 6.0):
            expected = 2.0 * beta * x * math.exp(-beta * x * x)
            assert serving_distance_pdf_thz(x, p) == pytest.approx(expected, rel=1e-9)

    def test_rf_pdf_reduces_to_rayleigh_without_thz(self):
        p = default_params(lambda_t=1e-12, **{k: v for k, v in RF_HEAVY.items() if k != "lambda_t"})
        beta = math.pi * p.lambda_r
        for x in (10.0, 50.0, 120.0):
            expected = 2.0 * beta * x * math.exp(-beta * x * x)
            assert serving_distance_pdf_rf(x, p) == pytest.approx(expected, rel=1e-6)

    def test_raw_mass_sanity_band(self):
        for k_a, f_t in ((0.05, 1.0e12), (0.1, 1.5e12), (0.2, 1.8e12)):
            p = default_params(lambda_t=1e-3, b_t=1e-3, k_a=k_a, f_t=f_t)
            assert 0.9 <= rf_pdf_raw_mass(p) <= 1.1

    def test_mu_correction_values(self):
        assert mu_correction(0.0) == 2.0
        assert mu_correction(0.2) == pytest.approx(2.0 + 10.0 * 0.2 / 1.4, rel=1e-12)
        assert mu_correction(0.05) == pytest.approx(2.5, rel=1e-12)
        with pytest.raises(DomainError):
            mu_correction(-0.1)

    @staticmethod
    def _ks_distance(samples, cdf_grid_x, cdf_grid_y):
        samples = np.sort(samples)
        empirical = np.arange(1, len(samples) + 1) / len(samples)
        model = np.interp(samples, cdf_grid_x, cdf_grid_y)
        return float(np.max(np.abs(empirical - model)))

    def test_thz_pdf_matches_monte_carlo(self):
        p = default_params()
        mc = McConfig(trials=20_000, master_seed=17, association_rule="brsp")
        batch = mcsim.simulate_batch(p, mc)
        samples = batch.serving_distance[batch.serving_tier == 0]
        xs = np.linspace(1e-4, 30.0, 2500)
        pdf = serving_distance_pdf_thz(xs, p)
        cdf = np.cumsum(pdf) * (xs[1] - xs[0])
        assert self._ks_distance(samples, xs, cdf) <= 0.02

    def test_rf_pdf_matches_monte_carlo(self):
        p = default_params(**RF_HEAVY)
        mc = McConfig(trials=25_000, master_seed=18, association_rule="brsp")
        batch = mcsim.simulate_batch(p, mc)
        samples = batch.serving_distance[batch.serving_tier == 1]
        assert len(samples) > 15_000
        xs = np.linspace(1e-3, 400.0, 4000)
        pdf = serving_distance_pdf_rf(xs, p)
        cdf = np.cumsum(pdf) * (xs[1] - xs[0])
        assert self._ks_distance(samples, xs, cdf) <= 0.05


class TestRfCoverage:
    def test_closed_form_anchor(self):
        c = coverage_rf_only(default_params(alpha=4.0), tau_r=1.0)
        assert c.probability == pytest.approx(1.0 / (1.0 + math.pi / 4.0), abs=1e-4)

    def test_lambda_r_invariance(self):
        values = [
            coverage_rf_only(default_params(lambda_r=lr), tau_r=2.0).probability
            for lr in (1e-5, 1e-4, 1e-3)
        ]
        assert max(values) - min(values) <= 1e-6

    def test_zero_threshold(self):
        assert coverage_rf_only(default_params(), tau_r=0.0).probability == 1.0
        assert coverage_rf_conditional(default_params(**RF_HEAVY), tau_r=0.0).probability == 1.0

    def test_conditional_collapses_to_rf_only_without_thz(self):
        p = default_params(lambda_t=1e-15, b_t=1.0)
        a = coverage_rf_conditional(p, tau_r=1.0).probability
        b = coverage_rf_only(p, tau_r=1.0).probability
        assert a == pytest.approx(b, abs=1e-6)

    def test_conditional_matches_monte_carlo(self):
        # analytic RF coverage assumes the infinite plane; with alpha = 2.5
        # the far field decays too slowly to truncate, so the simulator runs
        # with far-field compensation on a 300 m disc
        p = default_params(**RF_HEAVY)
        mc = McConfig(
            trials=25_000,
            master_seed=29,
            association_rule="brsp",
            disc_radius=300.0,
            rf_far_field="compensate",
        )
        batch = mcsim.simulate_batch(p, mc)
        rf_mask = batch.serving_tier == 1
        assert rf_mask.sum() > 10_000
        empirical = float(np.mean(batch.sinr_rf[rf_mask] > 1.0))
        c = coverage_rf_conditional(p, tau_r=1.0)
        assert c.probability == pytest.approx(empirical, abs=0.02)

    def test_monotone_in_threshold(self):
        p = default_params(**RF_HEAVY)
        values = [coverage_rf_conditional(p, tau_r=t).probability for t in (0.1, 1.0, 10.0)]
        assert values[0] > values[1] > values[2]


class TestThzCoverage:
    def test_tiny_threshold_is_full_coverage(self):
        p = wide_beam_params()
        c = coverage_thz_only(p, tau_t=1e-9)
        assert c.probability == pytest.approx(1.0, abs=1e-3)

    def test_absorption_ordering(self):
        tau = 10**2.5  # 25 dB sits on the informative part of the curve
        values = {}
        for k_a, f_t in ((0.05, 1.0e12), (0.1, 1.5e12), (0.2, 1.8e12)):
            p = wide_beam_params(k_a=k_a, f_t=f_t)
            values[k_a] = coverage_thz_only(p, tau_t=tau).probability
        assert values[0.05] < values[0.1] < values[0.2]

    def test_matches_monte_carlo(self):
        p = wide_beam_params()
        mc = McConfig(trials=20_000, master_seed=31, association_rule="nearest_thz")
        for tau_db in (20.0, 25.0, 30.0):
            tau = 10.0 ** (tau_db / 10.0)
            c = coverage_thz_only(p, tau_t=tau)
            est = estimate_coverage(p, mc, tau_thz=tau)
            assert c.probability == pytest.approx(est.mean, abs=0.02)

    def test_monotone_in_threshold(self):
        p = wide_beam_params()
        taus = [10.0 ** (db / 10.0) for db in (18.0, 24.0, 30.0)]
        values = [coverage_thz_only(p, tau_t=t).probability for t in taus]
        assert values[0] > values[1] > values[2]

    def test_diagnostics_present(self):
        c = coverage_thz_only(wide_beam_params(), tau_t=10**2.5)
        assert c.diagnostics.terms_used >= 1
        assert c.diagnostics.estimated_error >= 0.0
        assert 0.0 <= c.probability <= 1.0


class TestCompositeCoverage:
    def test_huge_bias_matches_thz_only(self):
        p = wide_beam_params(lambda_t=0.01, b_t=1e10)
        tau = 10**2.2
        cx = coverage_coexisting(p, tau_t=tau, tau_r=tau)
        thz = coverage_thz_only(p, tau_t=tau)
        assert cx.probability == pytest.approx(thz.probability, abs=1e-3)

    def test_tiny_bias_matches_rf_only(self):
        p = wide_beam_params(lambda_t=0.01, b_t=1e-10)
        cx = coverage_coexisting(p, tau_t=1.0, tau_r=1.0)
        rf = coverage_rf_only(p, tau_r=1.0)
        assert cx.probability == pytest.approx(rf.probability, abs=1e-3)

    def test_unit_bias_tracks_thz_curve_at_dense_thz(self):
        p = wide_beam_params(lambda_t=0.1, b_t=1.0)
        tau = 10**2.5
        cx = coverage_coexisting(p, tau_t=tau, tau_r=tau)
        thz = coverage_thz_only(p, tau_t=tau)
        assert assoc_prob_thz_quadrature(p) > 0.99
        assert cx.probability == pytest.approx(thz.probability, abs=0.02)

    def test_matches_monte_carlo(self):
        p = wide_beam_params(lambda_t=0.01, b_t=1.0)
        mc = McConfig(trials=20_000, master_seed=37, association_rule="brsp")
        for tau_db in (20.0, 26.0):
            tau = 10.0 ** (tau_db / 10.0)
            cx = coverage_coexisting(p, tau_t=tau, tau_r=tau)
            est = estimate_coverage(p, mc, tau_thz=tau, tau_rf=tau)
            assert cx.probability == pytest.approx(est.mean, abs=0.02)

    def test_hybrid_identity_and_dominance(self):
        p = wide_beam_params(lambda_t=0.01)
        tau = 10**2.2
        hy = coverage_hybrid(p, tau_t=tau, tau_r=tau)
        thz = coverage_thz_only(p, tau_t=tau)
        rf = coverage_rf_only(p, tau_r=tau)
        expected = 1.0 - (1.0 - thz.probability) * (1.0 - rf.probability)
        assert hy.probability == pytest.approx(expected, abs=1e-9)
        assert hy.probability >= max(thz.probability, rf.probability) - 1e-12

    def test_hybrid_equals_thz_without_rf(self):
        p = wide_beam_params(lambda_r=0.0)
        tau = 10**2.5
        hy = coverage_hybrid(p, tau_t=tau)
        thz = coverage_thz_only(p, tau_t=tau)
        assert hy.probability == thz.probability

    def test_hybrid_beats_coexisting(self):
        p = wide_beam_params(lambda_t=0.01)
        tau = 10**2.2
        hy = coverage_hybrid(p, tau_t=tau, tau_r=tau)
        cx = coverage_coexisting(p, tau_t=tau, tau_r=tau)
        assert hy.probability >= cx.probability - 1e-6
