"""Reference map, recall experiments, the continuum sweep and regime labels."""
from __future__ import annotations

import csv
import enum
import io as _io
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import io, render
from .errors import ConfigError, DimensionError, NotFoundError
from .modulation import ModulationParams, ResponseRegion, response_region
from .som import (
    ConceptLabeling,
    GridShape,
    SomNetwork,
    TrainingSchedule,
    init_network,
    label_map,
    train,
)
from .stimuli import StimulusSet, builtin_glyph_set

REFERENCE_THETA = 0.999
DEFAULT_THETAS = (0.999, 0.9995)
DEFAULT_NOISES = (0.0, 0.05, 0.1, 0.5, 1.0, 1.1, 1.2, 1.5, 1.7, 2.0)

# The four recall settings after the reference map: (output dir, theta, p).
RECALL_SETTINGS = (
    ("fig2", 0.999, 0.10),
    ("fig3", 0.999, 1.70),
    ("fig4", 0.999, 2.00),
    ("fig5", 0.9995, 0.05),
)

SWEEP_HEADER = [
    "theta", "noise_p", "seed", "probe_id", "excited_area",
    "association_count", "invaded_labels", "regime",
]


class RegimeLabel(str, enum.Enum):
    DELUSIONAL = "delusional"
    NORMAL = "normal"
    CREATIVE = "creative"
    DISORGANIZED = "disorganized"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class RegimeThresholds:
    """Cut points for ``classify_regime``.

    ``baseline`` picks what "the clean area" means: ``"region"`` is the
    number of neurons labeled with the probe in the reference map,
    ``"clean"`` is the area excited by the noise-free probe at
    ``reference_theta``.
    """

    delusional_max_count: int = 1
    delusional_area_fraction: float = 0.5
    creative_min_count: int = 3
    disorganized_fraction: float = 0.7
    baseline: str = "region"
    reference_theta: float = REFERENCE_THETA

    def __post_init__(self):
        if self.baseline not in ("region", "clean"):
            raise ConfigError(f"baseline must be 'region' or 'clean', got {self.baseline!r}")
        if not 0 < self.disorganized_fraction <= 1:
            raise ConfigError("disorganized_fraction must lie in (0, 1]")
        if self.delusional_area_fraction < 0:
            raise ConfigError("delusional_area_fraction must be >= 0")

    def disorganized_cut(self, n_concepts: int) -> int:
        # the epsilon keeps ceil(0.7 * 10) at 7 despite 0.7 * 10 == 7.000000000000001
        return math.ceil(self.disorganized_fraction * n_concepts - 1e-9)

    def to_dict(self) -> dict:
        return {
            "delusional_max_count": self.delusional_max_count,
            "delusional_area_fraction": self.delusional_area_fraction,
            "creative_min_count": self.creative_min_count,
            "disorganized_fraction": self.disorganized_fraction,
            "baseline": self.baseline,
            "reference_theta": self.reference_theta,
        }


@dataclass(frozen=True)
class ExperimentConfig:
    schedule: TrainingSchedule = field(default_factory=TrainingSchedule)
    modulation: ModulationParams = field(default_factory=ModulationParams)
    probe_stimulus_id: int = 1
    seeds: tuple = tuple(range(10))
    sweep_thetas: tuple | None = DEFAULT_THETAS
    sweep_noises: tuple | None = DEFAULT_NOISES
    thresholds: RegimeThresholds = field(default_factory=RegimeThresholds)
    domain_shape: GridShape = field(default_factory=GridShape)
    image_shape: GridShape = field(default_factory=GridShape)

    def __post_init__(self):
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        if not self.seeds:
            raise ConfigError("at least one seed is required")
        for name in ("sweep_thetas", "sweep_noises"):
            values = getattr(self, name)
            if values is None:
                continue
            values = tuple(float(v) for v in values)
            if not values:
                raise ConfigError(f"{name} must not be empty")
            if list(values) != sorted(values):
                raise ConfigError(f"{name} must be sorted ascending")
            object.__setattr__(self, name, values)

    def check_probe(self, stimuli: StimulusSet) -> None:
        if self.probe_stimulus_id not in stimuli.ids:
            raise NotFoundError(f"probe stimulus {self.probe_stimulus_id} is not in the set")

    def to_dict(self) -> dict:
        return {
            "schedule": self.schedule.to_dict(),
            "modulation": self.modulation.to_dict(),
            "probe_stimulus_id": self.probe_stimulus_id,
            "seeds": list(self.seeds),
            "sweep_thetas": list(self.sweep_thetas) if self.sweep_thetas else None,
            "sweep_noises": list(self.sweep_noises) if self.sweep_noises else None,
            "thresholds": self.thresholds.to_dict(),
            "domain_shape": [self.domain_shape.rows, self.domain_shape.cols],
            "image_shape": [self.image_shape.rows, self.image_shape.cols],
        }


@dataclass(frozen=True, eq=False)
class ExperimentReport:
    labeling: ConceptLabeling
    region: ResponseRegion
    association_count: int
    excited_area: int
    invaded_labels: frozenset
    regime: RegimeLabel
    baseline_area: int
    provenance: dict

    def to_dict(self) -> dict:
        return {
            "association_count": self.association_count,
            "excited_area": self.excited_area,
            "invaded_labels": sorted(self.invaded_labels),
            "regime": self.regime.value,
            "baseline_area": self.baseline_area,
            "excited": self.region.excited,
            "frequency": self.region.frequency,
            "trials": self.region.trials,
            "labels": self.labeling.labels,
            "margin": self.labeling.margin,
            "grid": [self.labeling.shape.rows, self.labeling.shape.cols],
            "provenance": self.provenance,
        }


def association_count(region: ResponseRegion, labeling: ConceptLabeling) -> tuple[int, frozenset]:
    """Number of distinct concept labels among the excited neurons."""
    if region.frequency.shape != (labeling.shape.size,):
        raise DimensionError(
            f"region covers {region.frequency.size} neurons, labeling has {labeling.shape.size}"
        )
    invaded = frozenset(int(v) for v in labeling.labels[region.excited])
    return len(invaded), invaded


def classify_regime(association_count: int, excited_area: int, n_concepts: int,
                    baseline_area, thresholds: RegimeThresholds = RegimeThresholds()
                    ) -> RegimeLabel:
    """Place one recall result on the delusional..disorganized axis.

    Rules are tried in order: few associations on a shrunken area is
    delusional; more than ``ceil(disorganized_fraction * K)`` labels is
    disorganized; at least ``creative_min_count`` is creative; everything
    else (the probe, optionally with its similar partner or one other
    concept) is normal.
    """
    if baseline_area is None:
        raise ConfigError("regime classification needs a baseline area")
    if association_count < 0:
        raise ConfigError("association_count must be >= 0")
    if (association_count <= thresholds.delusional_max_count
            and excited_area < thresholds.delusional_area_fraction * baseline_area):
        return RegimeLabel.DELUSIONAL
    if association_count > thresholds.disorganized_cut(n_concepts):
        return RegimeLabel.DISORGANIZED
    if association_count >= thresholds.creative_min_count:
        return RegimeLabel.CREATIVE
    return RegimeLabel.NORMAL


def baseline_area(network: SomNetwork, labeling: ConceptLabeling, stimuli: StimulusSet,
                  probe_id: int, thresholds: RegimeThresholds = RegimeThresholds()) -> int:
    if thresholds.baseline == "region":
        return int(labeling.region(probe_id).size)
    clean = ModulationParams(theta=thresholds.reference_theta, noise_p=0.0, trials=1)
    return response_region(network, stimuli.get(probe_id), clean).area


def run_reference(config: ExperimentConfig, stimuli: StimulusSet | None = None,
                  out_dir=None) -> tuple[SomNetwork, ConceptLabeling]:
    """Train a fresh map on the stimuli and label it.

    With ``out_dir`` the network, its sidecar, the label map renders and
    ``labeling.json`` are written there.
    """
    if stimuli is None:
        stimuli = builtin_glyph_set(config.domain_shape)
    config.check_probe(stimuli)
    network = init_network(config.domain_shape, config.image_shape, config.schedule.seed)
    network = train(network, stimuli, config.schedule)
    labeling = label_map(network, stimuli)
    if out_dir is not None:
        save_reference(out_dir, network, labeling, stimuli, config)
    return network, labeling


def save_reference(out_dir, network, labeling, stimuli, config, style=None) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    style = style or render.default_style(stimuli)
    io.save_network(network, out / "map.somnet")
    io.save_meta(out / "map.somnet", config.schedule, stimuli)
    (out / "labelmap.txt").write_text(render.render_label_text(labeling, style), encoding="utf-8")
    render.render_label_image(labeling, style, out / "labelmap.pgm")
    io.dump_json(
        {"grid": [labeling.shape.rows, labeling.shape.cols],
         "labels": labeling.labels, "margin": labeling.margin},
        out / "labeling.json",
    )


def run_recall(network: SomNetwork, labeling: ConceptLabeling, stimuli: StimulusSet,
               config: ExperimentConfig, theta=None, noise_p=None, seed=None) -> ExperimentReport:
    """Probe the map once at (theta, p); defaults come from ``config.modulation``."""
    config.check_probe(stimuli)
    params = replace(
        config.modulation,
        **{k: v for k, v in (("theta", theta), ("noise_p", noise_p), ("seed", seed))
           if v is not None},
    )
    probe = config.probe_stimulus_id
    region = response_region(network, stimuli.get(probe), params)
    count, invaded = association_count(region, labeling)
    base = baseline_area(network, labeling, stimuli, probe, config.thresholds)
    regime = classify_regime(count, region.area, len(stimuli), base, config.thresholds)
    provenance = {"config": config.to_dict(), "run": params.to_dict(), "probe_id": probe}
    return ExperimentReport(labeling, region, count, region.area, invaded, regime, base,
                            provenance)


@dataclass(frozen=True)
class SweepRow:
    theta: float
    noise_p: float
    seed: int
    probe_id: int
    excited_area: int
    association_count: int
    invaded_labels: tuple
    regime: RegimeLabel

    def csv_fields(self) -> list:
        return [
            repr(self.theta), repr(self.noise_p), self.seed, self.probe_id,
            self.excited_area, self.association_count,
            "|".join(str(v) for v in self.invaded_labels), self.regime.value,
        ]


class SweepTable(list):
    """Rows of a continuum sweep in (theta, noise_p, seed) order."""

    def to_csv(self) -> str:
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(SWEEP_HEADER)
        for row in self:
            w.writerow(row.csv_fields())
        return buf.getvalue()

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.to_csv())

    def select(self, theta=None, noise_p=None) -> list[SweepRow]:
        return [r for r in self
                if (theta is None or r.theta == theta) and (noise_p is None or r.noise_p == noise_p)]

    def mean(self, attr, theta=None, noise_p=None) -> float:
        rows = self.select(theta, noise_p)
        if not rows:
            raise KeyError((theta, noise_p))
        return float(np.mean([getattr(r, attr) for r in rows]))

    def regime_counts(self, theta, noise_p) -> dict:
        counts = {label: 0 for label in RegimeLabel}
        for r in self.select(theta, noise_p):
            counts[r.regime] += 1
        return counts

    def majority_regime(self, theta, noise_p):
        """The regime held by more than half of the seeds, else ``None``."""
        counts = self.regime_counts(theta, noise_p)
        total = sum(counts.values())
        for label, n in counts.items():
            if 2 * n > total:
                return label
        return None


def run_continuum_sweep(network: SomNetwork, labeling: ConceptLabeling, stimuli: StimulusSet,
                        config: ExperimentConfig) -> SweepTable:
    """One recall per (theta, p, seed) in the cross product of the sweep lists."""
    if not config.sweep_thetas or not config.sweep_noises:
        raise ConfigError("a sweep needs both theta and noise lists")
    config.check_probe(stimuli)
    probe = config.probe_stimulus_id
    base = baseline_area(network, labeling, stimuli, probe, config.thresholds)
    table = SweepTable()
    for theta in config.sweep_thetas:
        for p in config.sweep_noises:
            for seed in sorted(config.seeds):
                params = replace(config.modulation, theta=theta, noise_p=p, seed=seed)
                region = response_region(network, stimuli.get(probe), params)
                count, invaded = association_count(region, labeling)
                regime = classify_regime(count, region.area, len(stimuli), base,
                                         config.thresholds)
                table.append(SweepRow(theta, p, seed, probe, region.area, count,
                                      tuple(sorted(invaded)), regime))
    return table


def read_sweep_csv(path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


# -- map geometry helpers --------------------------------------------------

def regions_adjacent(labeling: ConceptLabeling, a: int, b: int) -> bool:
    """True if some neuron labeled ``a`` and some labeled ``b`` are at Chebyshev distance 1."""
    grid = labeling.grid()
    ra, rb = grid == a, grid == b
    if not ra.any() or not rb.any():
        return False
    rows, cols = grid.shape
    padded = np.zeros((rows + 2, cols + 2), bool)
    padded[1:-1, 1:-1] = rb
    near_b = np.zeros_like(rb)
    for dr in (-1, 0, 1):
        for dc in (-1, 0, 1):
            near_b |= padded[1 + dr:rows + 1 + dr, 1 + dc:cols + 1 + dc]
    return bool((ra & near_b).any())


def region_centroid(labeling: ConceptLabeling, label: int) -> np.ndarray:
    idx = labeling.region(label)
    if idx.size == 0:
        raise NotFoundError(f"label {label} owns no neurons")
    return labeling.shape.coordinates()[idx].mean(axis=0)


def centroid_distance(labeling: ConceptLabeling, a: int, b: int) -> float:
    return float(np.linalg.norm(region_centroid(labeling, a) - region_centroid(labeling, b)))


# -- end-to-end reproduction -------------------------------------------------

def reproduce(out_dir, config: ExperimentConfig = ExperimentConfig(),
              stimuli: StimulusSet | None = None, style=None) -> SweepTable:
    """Reference map plus the four recall settings and the continuum sweep.

    Writes ``fig1/`` .. ``fig5/`` and ``fig6.csv`` under ``out_dir``.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if stimuli is None:
        stimuli = builtin_glyph_set(config.domain_shape)
    style = style or render.default_style(stimuli, scale=8)
    network, labeling = run_reference(config, stimuli)
    save_reference(out / "fig1", network, labeling, stimuli, config, style)
    for name, theta, p in RECALL_SETTINGS:
        report = run_recall(network, labeling, stimuli, config, theta=theta, noise_p=p)
        write_report(out / name, report, style)
    table = run_continuum_sweep(network, labeling, stimuli, config)
    table.write_csv(out / "fig6.csv")
    return table


def write_report(out_dir, report: ExperimentReport, style) -> None:
    d = Path(out_dir)
    d.mkdir(parents=True, exist_ok=True)
    io.dump_json(report.to_dict(), d / "report.json")
    render.render_region_overlay(report.labeling, report.region, style, d / "overlay")
    render.write_frequency_csv(report.labeling, report.region, d / "frequency.csv")
