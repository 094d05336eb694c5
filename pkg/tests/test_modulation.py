import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from semantic_som.errors import DegenerateActivationError, DimensionError, InvalidParameterError
from semantic_som.modulation import (ModulationParams, activation_profile, add_noise,
                                     excited_set, response_region, trial_rng)
from semantic_som.som import GridShape, SomNetwork


def net(weights):
    w = np.asarray(weights, float)
    return SomNetwork(GridShape(1, w.shape[1]), GridShape(1, w.shape[0]), w)


class TestParams:
    @pytest.mark.parametrize("kwargs", [dict(theta=0), dict(theta=1.01), dict(noise_p=-0.1),
                                        dict(trials=0), dict(seed=-1)])
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidParameterError):
            ModulationParams(**kwargs)


class TestNoise:
    def test_zero_noise_is_identity(self, rng):
        x = rng.random(50)
        assert np.array_equal(add_noise(x, 0.0, rng), x)

    def test_zero_components_stay_zero(self, rng):
        x = np.array([0.0, 1.0, 0.0, 0.3])
        out = add_noise(x, 2.0, rng)
        assert out[0] == 0.0 and out[2] == 0.0

    def test_negative_noise(self, rng):
        with pytest.raises(InvalidParameterError):
            add_noise(np.ones(3), -0.5, rng)

    def test_large_noise_statistics(self):
        out = add_noise(np.ones(100_000), 1.7, np.random.default_rng(0))
        assert out.min() >= -0.7 and out.max() <= 2.7
        assert abs(out.mean() - 1.0) < 0.02

    @given(st.lists(st.floats(0, 1), min_size=1, max_size=20), st.floats(0, 3),
           st.integers(0, 2**32 - 1))
    def test_bounds(self, x, p, seed):
        x = np.array(x)
        out = add_noise(x, p, np.random.default_rng(seed))
        assert np.all(out >= x * (1 - p) - 1e-12) and np.all(out <= x * (1 + p) + 1e-12)

    def test_trial_streams_are_independent_of_theta_and_p(self):
        a = trial_rng(5, 3).uniform(size=4)
        b = trial_rng(5, 3).uniform(size=4)
        c = trial_rng(5, 4).uniform(size=4)
        assert np.array_equal(a, b) and not np.array_equal(a, c)


class TestProfile:
    def test_orthogonal_rows(self):
        profile = activation_profile(net(np.eye(4)), [1, 0, 0, 0])
        assert profile.tolist() == [1.0, 0.0, 0.0, 0.0]

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_matches_brute_force(self, seed):
        r = np.random.default_rng(seed)
        W, x = r.random((7, 5)), r.random(5) + 0.01
        dots = [sum(a * b for a, b in zip(w, x)) for w in W]
        want = np.array(dots) / max(dots)
        got = activation_profile(net(W), x)
        assert got.max() == 1.0
        assert np.allclose(got, want, rtol=1e-12)

    def test_degenerate(self):
        with pytest.raises(DegenerateActivationError):
            activation_profile(net(np.eye(3)), [-1.0, 0.0, 0.0])

    def test_dimension(self):
        with pytest.raises(DimensionError):
            activation_profile(net(np.eye(3)), [1.0, 0.0])


class TestExcited:
    def test_threshold(self):
        assert excited_set([1, 0.9995, 0.99], 0.999).tolist() == [0, 1]

    def test_theta_one_is_argmax(self):
        assert excited_set([0.2, 1.0, 0.7, 1.0], 1.0).tolist() == [1, 3]

    def test_tiny_theta_is_everything(self):
        assert excited_set([0.0001, 1.0, 0.5], 1e-9).tolist() == [0, 1, 2]

    @given(st.lists(st.floats(0, 1), min_size=1, max_size=30), st.floats(1e-6, 1), st.floats(1e-6, 1))
    def test_monotone_in_theta(self, values, t1, t2):
        lo, hi = sorted((t1, t2))
        prof = np.array(values + [1.0])
        assert set(excited_set(prof, hi)) <= set(excited_set(prof, lo))
        assert len(excited_set(prof, hi)) >= 1


class TestRegion:
    def test_no_noise_repeats_clean_set(self, rng):
        W = rng.random((6, 4))
        x = rng.random(4)
        region = response_region(net(W), x, ModulationParams(theta=0.95, noise_p=0.0, trials=7))
        clean = excited_set(activation_profile(net(W), x), 0.95)
        assert region.excited.tolist() == clean.tolist()
        assert (region.frequency[clean] == 7).all()

    def test_tiny_theta_excites_all(self, rng):
        W = rng.random((5, 3))
        region = response_region(net(W), rng.random(3), ModulationParams(theta=1e-9, trials=3))
        assert region.area == 5

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.floats(0, 2), st.integers(1, 20))
    def test_frequency_invariants_and_trial_monotonicity(self, seed, p, trials):
        r = np.random.default_rng(seed)
        network, x = net(r.random((9, 4))), r.random(4) + 0.05
        params = ModulationParams(theta=0.98, noise_p=p, trials=trials, seed=seed)
        try:
            small = response_region(network, x, params)
            big = response_region(network, x, ModulationParams(0.98, p, trials + 1, seed))
        except DegenerateActivationError:
            return
        assert small.area >= 1
        assert set(np.flatnonzero(small.frequency >= 1)) == set(small.excited.tolist())
        assert small.frequency.max() <= trials
        assert set(small.excited.tolist()) <= set(big.excited.tolist())

    def test_deterministic(self, default_map, glyphs):
        network, _ = default_map
        params = ModulationParams(noise_p=1.0, trials=20, seed=4)
        a = response_region(network, glyphs.get(1), params)
        b = response_region(network, glyphs.get(1), params)
        assert np.array_equal(a.frequency, b.frequency)

    def test_trial_index_attached(self):
        # one positive component: trials where noise flips its sign are degenerate
        network = net(np.eye(2))
        with pytest.raises(DegenerateActivationError) as info:
            response_region(network, [1.0, 0.0], ModulationParams(noise_p=5.0, trials=100))
        assert info.value.trial is not None

    def test_low_noise_stays_near_probe(self, default_map, glyphs):
        network, labeling = default_map
        region = response_region(network, glyphs.get(1), ModulationParams(0.999, 0.10, 100, 0))
        assert set(labeling.labels[region.excited].tolist()) <= {1, 2}
