import numpy as np
import pytest
from hypothesis import given, strategies as st

from semantic_som import experiments as ex
from semantic_som.errors import ConfigError, DimensionError, NotFoundError
from semantic_som.experiments import RegimeLabel, RegimeThresholds, classify_regime
from semantic_som.modulation import ModulationParams, ResponseRegion
from semantic_som.som import ConceptLabeling, GridShape


def region_of(indices, size):
    freq = np.zeros(size, int)
    freq[list(indices)] = 1
    return ResponseRegion(np.array(sorted(indices), dtype=int), freq, 1)


def labeling_of(labels, rows, cols):
    return ConceptLabeling(GridShape(rows, cols), np.array(labels), np.zeros(rows * cols))


class TestAssociation:
    def test_single_label(self):
        lab = labeling_of([4, 4, 2, 1], 2, 2)
        assert ex.association_count(region_of([0, 1], 4), lab) == (1, frozenset({4}))

    def test_whole_grid(self):
        lab = labeling_of([4, 4, 2, 1, 2, 7], 2, 3)
        count, invaded = ex.association_count(region_of(range(6), 6), lab)
        assert count == 4 and invaded == {1, 2, 4, 7}

    def test_empty(self):
        assert ex.association_count(region_of([], 4), labeling_of([1, 2, 3, 4], 2, 2)) == (0, frozenset())

    def test_grid_mismatch(self):
        with pytest.raises(DimensionError):
            ex.association_count(region_of([0], 5), labeling_of([1, 2, 3, 4], 2, 2))


class TestClassify:
    def test_examples(self):
        assert classify_regime(1, 3, 10, 10) is RegimeLabel.DELUSIONAL
        assert classify_regime(2, 30, 10, 10) is RegimeLabel.NORMAL
        assert classify_regime(1, 30, 10, 10) is RegimeLabel.NORMAL
        assert classify_regime(3, 30, 10, 10) is RegimeLabel.CREATIVE
        assert classify_regime(7, 30, 10, 10) is RegimeLabel.CREATIVE
        assert classify_regime(8, 30, 10, 10) is RegimeLabel.DISORGANIZED
        assert classify_regime(10, 300, 10, 10) is RegimeLabel.DISORGANIZED

    def test_missing_baseline(self):
        with pytest.raises(ConfigError):
            classify_regime(1, 3, 10, None)

    def test_configurable(self):
        t = RegimeThresholds(creative_min_count=2, disorganized_fraction=0.5)
        assert classify_regime(2, 30, 10, 10, t) is RegimeLabel.CREATIVE
        assert classify_regime(6, 30, 10, 10, t) is RegimeLabel.DISORGANIZED

    @given(st.integers(0, 40), st.integers(0, 400), st.integers(1, 40), st.integers(1, 400))
    def test_total(self, count, area, k, base):
        assert classify_regime(count, area, k, base) in set(RegimeLabel)

    def test_bad_baseline_mode(self):
        with pytest.raises(ConfigError):
            RegimeThresholds(baseline="median")


class TestConfig:
    def test_empty_seeds(self):
        with pytest.raises(ConfigError):
            ex.ExperimentConfig(seeds=[])

    def test_unsorted_sweep(self):
        with pytest.raises(ConfigError):
            ex.ExperimentConfig(sweep_noises=[0.5, 0.1])

    def test_unknown_probe(self, default_map, glyphs):
        net, lab = default_map
        with pytest.raises(NotFoundError):
            ex.run_recall(net, lab, glyphs, ex.ExperimentConfig(probe_stimulus_id=42))


@pytest.fixture(scope="module")
def reports(default_map, glyphs):
    net, lab = default_map
    cfg = ex.ExperimentConfig()
    return {(t, p): ex.run_recall(net, lab, glyphs, cfg, theta=t, noise_p=p, seed=3)
            for t, p in [(0.999, 0.1), (0.999, 1.7), (0.999, 0.05), (0.9995, 0.05)]}


class TestRecall:

    def test_report_consistency(self, reports):
        for r in reports.values():
            assert r.association_count == len(r.invaded_labels)
            assert r.excited_area == r.region.area
            assert "config" in r.provenance

    def test_low_noise_near_probe(self, reports):
        assert reports[0.999, 0.1].invaded_labels <= {1, 2}

    def test_high_noise_reaches_further(self, reports):
        assert reports[0.999, 1.7].association_count > reports[0.999, 0.1].association_count

    def test_higher_signal_shrinks(self, reports):
        assert reports[0.9995, 0.05].excited_area < reports[0.999, 0.05].excited_area

    def test_clean_baseline_mode(self, default_map, glyphs):
        net, lab = default_map
        cfg = ex.ExperimentConfig(thresholds=RegimeThresholds(baseline="clean"))
        r = ex.run_recall(net, lab, glyphs, cfg, noise_p=0.0)
        assert r.baseline_area == r.excited_area


@pytest.fixture(scope="module")
def table(default_map, glyphs):
    net, lab = default_map
    cfg = ex.ExperimentConfig(seeds=[0, 1, 2], sweep_thetas=[0.999, 0.9995],
                              sweep_noises=[0.0, 0.1, 2.0],
                              modulation=ModulationParams(trials=30))
    return ex.run_continuum_sweep(net, lab, glyphs, cfg), cfg


class TestSweep:

    def test_rows_and_order(self, table):
        rows, _ = table
        assert len(rows) == 2 * 3 * 3
        keys = [(r.theta, r.noise_p, r.seed) for r in rows]
        assert keys == sorted(keys)

    def test_csv_format(self, table):
        text = table[0].to_csv()
        lines = text.splitlines()
        assert lines[0] == ",".join(ex.SWEEP_HEADER)
        assert lines[0] == "theta,noise_p,seed,probe_id,excited_area,association_count,invaded_labels,regime"
        assert len(lines) == 19

    def test_deterministic(self, table, default_map, glyphs):
        rows, cfg = table
        again = ex.run_continuum_sweep(*default_map, glyphs, cfg)
        assert again.to_csv() == rows.to_csv()

    def test_rows_match_single_recalls(self, table, default_map, glyphs):
        rows, cfg = table
        row = rows[-1]
        r = ex.run_recall(*default_map, glyphs, cfg, theta=row.theta, noise_p=row.noise_p,
                          seed=row.seed)
        assert (r.excited_area, r.association_count, r.regime) == (
            row.excited_area, row.association_count, row.regime)

    def test_read_back(self, table, tmp_path):
        table[0].write_csv(tmp_path / "s.csv")
        back = ex.read_sweep_csv(tmp_path / "s.csv")
        assert [int(r["excited_area"]) for r in back] == [r.excited_area for r in table[0]]


class TestGeometry:
    def test_adjacency_is_chebyshev(self):
        lab = labeling_of([1, 0, 0,
                           0, 2, 0,
                           0, 0, 3], 3, 3)
        assert ex.regions_adjacent(lab, 1, 2)
        assert not ex.regions_adjacent(lab, 1, 3)

    def test_centroid_distance(self):
        lab = labeling_of([1, 1, 0, 0, 0, 2], 2, 3)
        assert ex.centroid_distance(lab, 1, 2) == pytest.approx(np.hypot(1, 1.5))

    def test_missing_label(self):
        with pytest.raises(NotFoundError):
            ex.region_centroid(labeling_of([1, 1], 1, 2), 5)
