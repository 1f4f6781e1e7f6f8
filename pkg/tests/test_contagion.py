import math

import numpy as np
import pytest

from banknet import (NO_SPREAD, NoSpread, SirParams, StepSizeError,
                     build_graph, degree_view, epidemic_threshold,
                     integrate_sir, is_no_spread, simulate_sir_mc)
from banknet.graph import CountryGraph

from conftest import make_regular, make_star


class TestThreshold:
    def test_regular_graph(self):
        result = epidemic_threshold(degree_view(make_regular(20, 4)))
        assert result.lambda_c == 0.25
        assert result.mean_k == 4.0
        assert result.mean_k2 == 16.0

    def test_regular_family_exact(self):
        for k in range(2, 11):
            n = 24
            lam = epidemic_threshold(degree_view(make_regular(n, k))).lambda_c
            assert lam == 1.0 / k

    def test_star_family(self):
        for n in range(5, 51):
            lam = epidemic_threshold(degree_view(make_star(n))).lambda_c
            assert abs(lam - 2.0 / n) <= 1e-12

    def test_edgeless_no_spread(self):
        g = CountryGraph(("A", "B"), ())
        result = epidemic_threshold(degree_view(g))
        assert result.no_spread
        assert is_no_spread(result.lambda_c)

    def test_heavy_tail_below_regular(self, synth2000):
        dv = degree_view(synth2000)
        lam = epidemic_threshold(dv).lambda_c
        assert lam < 1.0 / dv.mean_k

    def test_sentinel_identity(self):
        assert NO_SPREAD == NoSpread()
        assert repr(NO_SPREAD) == "NoSpread"
        assert NO_SPREAD != 0.25


class TestSirParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            SirParams(-0.1)
        with pytest.raises(ValueError):
            SirParams(0.1, recovery_rate=0.0)
        with pytest.raises(ValueError):
            SirParams(0.1, dt=0.0)
        with pytest.raises(ValueError):
            SirParams(0.1, t_max=0.001, dt=0.01)
        with pytest.raises(ValueError):
            SirParams(0.1, i0=1.5)
        with pytest.raises(ValueError):
            SirParams(0.1, i0={2: -0.1})

    def test_initial_density_lookup(self):
        p = SirParams(0.1, i0={3: 0.2})
        assert p.initial_density(3) == 0.2
        assert p.initial_density(4) == 0.0
        assert SirParams(0.1, i0=0.05).initial_density(7) == 0.05


class TestIntegrator:
    def test_pure_decay_matches_exponential(self):
        # lam = 0 decouples the classes: I_k(t) = I0 * exp(-mu * t)
        dv = degree_view(make_regular(24, 4))
        traj = integrate_sir(dv, None, SirParams(0.0, 1.0, 0.1,
                                                 t_max=2.0, dt=0.01))
        for step in range(1, 11):
            t = 0.2 * step
            idx = int(round(t / 0.01))
            expected = 0.1 * math.exp(-t)
            assert abs(traj.i[idx, 0] - expected) <= 1e-6

    def test_disease_free_fixed_point(self):
        dv = degree_view(make_star(10))
        traj = integrate_sir(dv, None, SirParams(0.9, i0=0.0, t_max=5.0))
        assert np.all(traj.i == 0.0)
        assert np.all(traj.r == 0.0)
        assert np.all(traj.s == 1.0)
        assert traj.final_r == 0.0

    def test_conservation_random_distributions(self):
        rng = np.random.default_rng(123)
        for _ in range(20):
            classes = rng.choice(np.arange(1, 40), size=rng.integers(2, 8),
                                 replace=False)
            raw = rng.random(len(classes))
            probs = raw / raw.sum()
            dist = {int(k): float(p) for k, p in zip(classes, probs)}
            params = SirParams(float(rng.uniform(0, 0.5)),
                               float(rng.uniform(0.5, 2.0)),
                               float(rng.uniform(0, 0.05)),
                               t_max=5.0, dt=0.01)
            dv = degree_view(make_regular(10, 2))  # classes come from dist
            traj = integrate_sir(dv, dist, params)
            assert traj.conservation_error <= 1e-8

    def test_outbreak_classification_on_star(self):
        dv = degree_view(make_star(10))
        lam_c = epidemic_threshold(dv).lambda_c
        low = integrate_sir(dv, None, SirParams(0.5 * lam_c, i0=1e-3))
        high = integrate_sir(dv, None, SirParams(2.0 * lam_c, i0=1e-3))
        assert low.final_r < 10 * 1e-3
        assert high.final_r > 100 * 1e-3

    def test_halving_dt_converged(self):
        dv = degree_view(make_star(10))
        lam_c = epidemic_threshold(dv).lambda_c
        coarse = integrate_sir(dv, None, SirParams(2 * lam_c, dt=0.01))
        fine = integrate_sir(dv, None, SirParams(2 * lam_c, dt=0.005))
        rel = abs(coarse.final_r - fine.final_r) / fine.final_r
        assert rel < 1e-4

    def test_unnormalized_distribution_rejected(self):
        dv = degree_view(make_star(10))
        with pytest.raises(ValueError, match="sums to"):
            integrate_sir(dv, {1: 0.5, 2: 0.4}, SirParams(0.1))

    def test_oversized_step_raises(self):
        dv = degree_view(make_star(40))
        with pytest.raises(StepSizeError, match="smaller step"):
            integrate_sir(dv, None, SirParams(40.0, 1.0, 0.5,
                                              t_max=50.0, dt=1.0))

    def test_zero_degree_class_cannot_transmit(self):
        # half the nodes are isolated; their infections must not feed theta
        dist = {0: 0.5, 3: 0.5}
        params = SirParams(1.0, 1.0, {0: 0.5, 3: 0.0}, t_max=3.0)
        dv = degree_view(make_star(4))
        traj = integrate_sir(dv, dist, params)
        assert np.all(traj.theta == 0.0)
        k3 = traj.degree_classes.index(3)
        assert np.all(traj.i[:, k3] == 0.0)

    def test_theta_bounds_and_grid(self):
        dv = degree_view(make_star(12))
        traj = integrate_sir(dv, None, SirParams(0.5, i0=0.01, t_max=4.0))
        assert np.all(traj.theta >= 0.0)
        assert np.all(traj.theta <= 1.0)
        steps = np.diff(traj.times)
        assert np.allclose(steps, 0.01)

    def test_early_stop_below_floor(self):
        dv = degree_view(make_regular(10, 2))
        traj = integrate_sir(dv, None, SirParams(0.0, 1.0, 0.01, t_max=200.0))
        # decay reaches 1e-10 around t = ln(1e8) ~ 18.4, far before t_max
        assert traj.times[-1] < 30.0
        assert float(traj.probabilities @ traj.i[-1]) < 1e-10

    def test_final_r_recomputable(self):
        dv = degree_view(make_star(10))
        traj = integrate_sir(dv, None, SirParams(0.4, i0=0.01, t_max=10.0))
        assert traj.final_r == pytest.approx(
            float(traj.probabilities @ traj.r[-1]), abs=1e-15)


class TestMonteCarlo:
    def test_zero_rate_only_seeds_recover(self):
        g = make_regular(50, 4)
        finals = simulate_sir_mc(g, SirParams(0.0, 1.0, i0=0.1, t_max=100.0,
                                              dt=0.05), replicas=8, seed=3)
        assert np.all(finals == 5 / 50)

    def test_instant_recovery_stops_spread(self):
        g = make_regular(50, 4)
        params = SirParams(0.01, recovery_rate=500.0, i0=0.1, t_max=5.0,
                           dt=0.01)
        finals = simulate_sir_mc(g, params, replicas=6, seed=9)
        assert np.all(finals <= 10 / 50)

    def test_bit_reproducible(self, synth2000):
        params = SirParams(0.1, i0=1e-3, t_max=50.0)
        a = simulate_sir_mc(synth2000, params, replicas=5, seed=21)
        b = simulate_sir_mc(synth2000, params, replicas=5, seed=21)
        assert np.array_equal(a, b)

    def test_replica_rng_schedule_independent(self, synth2000):
        # replica r draws from rng((seed, r)): prefix runs agree
        params = SirParams(0.1, i0=1e-3, t_max=20.0)
        five = simulate_sir_mc(synth2000, params, replicas=5, seed=4)
        three = simulate_sir_mc(synth2000, params, replicas=3, seed=4)
        assert np.array_equal(five[:3], three)

    def test_mapping_i0_aggregates(self):
        g = make_star(10)
        # only the hub class is seeded: density 0.1 -> one node
        params = SirParams(0.0, i0={9: 1.0, 1: 0.0}, t_max=50.0, dt=0.05)
        finals = simulate_sir_mc(g, params, replicas=4, seed=1)
        assert np.all(finals == 1 / 10)

    def test_validation(self):
        g = make_star(5)
        with pytest.raises(ValueError):
            simulate_sir_mc(g, SirParams(0.1), replicas=0)
        with pytest.raises(ValueError):
            simulate_sir_mc(build_graph([]), SirParams(0.1), replicas=1)

    def test_above_threshold_spreads_more(self, synth2000):
        dv = degree_view(synth2000)
        lam_c = epidemic_threshold(dv).lambda_c
        hi = simulate_sir_mc(synth2000, SirParams(2 * lam_c, i0=1e-3),
                             replicas=40, seed=7)
        lo = simulate_sir_mc(synth2000, SirParams(0.2 * lam_c, i0=1e-3),
                             replicas=40, seed=7)
        assert hi.mean() >= 5 * lo.mean()
