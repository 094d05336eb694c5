"""Two-sheet self-organizing map: domain types and the training engine.

The image sheet holds one weight vector per neuron (row ``i`` of
``SomNetwork.weights``); the domain sheet only fixes the input dimension.
Training follows the classic Kohonen recipe::

    w_i <- w_i + rho(l) * phi(r_i, r*) * (x_k - w_i)
    rho(l)   = rho0 * beta ** (l - 1)
    sigma(l) = sigma0 * alpha ** (l - 1)
    phi      = exp(-|r_i - r*|**2 / (2 * sigma(l)**2))

with the winner ``r*`` chosen by minimal Euclidean distance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._kernels import nearest_row, pull_rows
from .errors import (
    DimensionError,
    EmptyInputError,
    InvalidInputError,
    InvalidParameterError,
    InvalidShapeError,
    InvalidStepError,
)

PRESENTATION_POLICIES = ("cyclic", "uniform-random")


@dataclass(frozen=True, order=True)
class GridPos:
    row: int
    col: int


@dataclass(frozen=True)
class GridShape:
    rows: int = 20
    cols: int = 20

    def __post_init__(self):
        if int(self.rows) < 1 or int(self.cols) < 1:
            raise InvalidShapeError(f"grid shape must be at least 1x1, got {self.rows}x{self.cols}")

    @property
    def size(self) -> int:
        return self.rows * self.cols

    def pos(self, index: int) -> GridPos:
        if not 0 <= index < self.size:
            raise IndexError(f"neuron index {index} outside grid of {self.size}")
        return GridPos(*divmod(int(index), self.cols))

    def index(self, pos: GridPos) -> int:
        if not (0 <= pos.row < self.rows and 0 <= pos.col < self.cols):
            raise IndexError(f"{pos} outside {self.rows}x{self.cols} grid")
        return pos.row * self.cols + pos.col

    def coordinates(self) -> np.ndarray:
        """(size, 2) integer array of (row, col) in row-major order."""
        r, c = np.divmod(np.arange(self.size), self.cols)
        return np.stack([r, c], axis=1)

    def __str__(self):
        return f"{self.rows}x{self.cols}"


@dataclass(frozen=True, eq=False)
class SomNetwork:
    """A trained (or freshly initialised) semantic map.

    ``weights`` has one row per image neuron and one column per domain
    neuron. The array is kept read-only; training returns a new network.
    """

    domain_shape: GridShape
    image_shape: GridShape
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64, copy=True)
        if w.shape != (self.image_shape.size, self.domain_shape.size):
            raise DimensionError(
                f"weights shape {w.shape} does not match image {self.image_shape} "
                f"x domain {self.domain_shape}"
            )
        if not np.all(np.isfinite(w)):
            raise InvalidInputError("network weights must be finite")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def n_inputs(self) -> int:
        return self.domain_shape.size

    @property
    def n_neurons(self) -> int:
        return self.image_shape.size

    def __eq__(self, other):
        if not isinstance(other, SomNetwork):
            return NotImplemented
        return (
            self.domain_shape == other.domain_shape
            and self.image_shape == other.image_shape
            and np.array_equal(self.weights, other.weights)
        )

    __hash__ = None


@dataclass(frozen=True)
class TrainingSchedule:
    rho0: float = 0.5
    beta: float = 0.9995
    sigma0: float = 10.0
    alpha: float = 0.9995
    steps: int = 10_000
    presentation: str = "uniform-random"
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.rho0 <= 1:
            raise InvalidParameterError(f"rho0 must lie in (0, 1], got {self.rho0}")
        if not 0 < self.beta < 1:
            raise InvalidParameterError(f"beta must lie in (0, 1), got {self.beta}")
        if not self.sigma0 > 0:
            raise InvalidParameterError(f"sigma0 must be positive, got {self.sigma0}")
        if not 0 < self.alpha < 1:
            raise InvalidParameterError(f"alpha must lie in (0, 1), got {self.alpha}")
        if int(self.steps) != self.steps or self.steps < 1:
            raise InvalidParameterError(f"steps must be a positive integer, got {self.steps}")
        if self.presentation not in PRESENTATION_POLICIES:
            raise InvalidParameterError(
                f"presentation must be one of {PRESENTATION_POLICIES}, got {self.presentation!r}"
            )
        if not 0 <= int(self.seed) < 2**64:
            raise InvalidParameterError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    def to_dict(self) -> dict:
        return {
            "rho0": self.rho0,
            "beta": self.beta,
            "sigma0": self.sigma0,
            "alpha": self.alpha,
            "steps": self.steps,
            "presentation": self.presentation,
            "seed": self.seed,
        }


@dataclass(frozen=True, eq=False)
class ConceptLabeling:
    """Per-neuron concept labels (row-major) plus best/second-best margins.

    A margin of ``math.inf`` means the stimulus set had a single member, so
    there was no competitor; serializers write it as null.
    """

    shape: GridShape
    labels: np.ndarray
    margin: np.ndarray

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64).copy()
        margin = np.asarray(self.margin, dtype=np.float64).copy()
        if labels.shape != (self.shape.size,) or margin.shape != (self.shape.size,):
            raise DimensionError("labeling must carry one label and one margin per neuron")
        labels.setflags(write=False)
        margin.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "margin", margin)

    def grid(self) -> np.ndarray:
        return self.labels.reshape(self.shape.rows, self.shape.cols)

    def region(self, stimulus_id: int) -> np.ndarray:
        """Row-major indices of neurons labeled ``stimulus_id``."""
        return np.flatnonzero(self.labels == stimulus_id)


def init_network(domain_shape: GridShape, image_shape: GridShape, seed: int = 0) -> SomNetwork:
    """Random initial connectivity, each weight uniform on [0, 1).

    Uses numpy's PCG64 generator seeded with ``seed``.
    """
    rng = np.random.default_rng(seed)
    weights = rng.random((image_shape.size, domain_shape.size))
    return SomNetwork(domain_shape, image_shape, weights)


def _check_vector(network: SomNetwork, vector) -> np.ndarray:
    x = np.asarray(vector, dtype=np.float64)
    if x.shape != (network.n_inputs,):
        raise DimensionError(f"input has shape {x.shape}, network expects ({network.n_inputs},)")
    if not np.all(np.isfinite(x)):
        raise InvalidInputError("input contains non-finite values")
    return x


def find_winner(network: SomNetwork, input) -> tuple[int, GridPos]:
    """Index and grid position of the best-matching image neuron."""
    x = _check_vector(network, input)
    index = int(nearest_row(network.weights, x))
    return index, network.image_shape.pos(index)


def _check_step(l):
    if l < 1:
        raise InvalidStepError(f"learning step must be >= 1, got {l}")


def learning_rate(l: int, schedule: TrainingSchedule) -> float:
    _check_step(l)
    return schedule.rho0 * schedule.beta ** (l - 1)


def sigma_at(l: int, schedule: TrainingSchedule) -> float:
    _check_step(l)
    return schedule.sigma0 * schedule.alpha ** (l - 1)


def neighborhood(r_i: GridPos, r_star: GridPos, sigma: float) -> float:
    """Gaussian neighborhood on the (non-toroidal) integer grid."""
    if not sigma > 0:
        raise InvalidParameterError(f"sigma must be positive, got {sigma}")
    d2 = (r_i.row - r_star.row) ** 2 + (r_i.col - r_star.col) ** 2
    return float(np.exp(-d2 / (2.0 * sigma**2)))


class _Trainer:
    """Holds the per-grid constants so repeated steps avoid recomputing them."""

    def __init__(self, image_shape: GridShape):
        coords = image_shape.coordinates()
        delta = coords[:, None, :] - coords[None, :, :]
        self.sq_dist = (delta**2).sum(axis=2).astype(np.float64)

    def step(self, weights: np.ndarray, x: np.ndarray, rho: float, sigma: float) -> int:
        winner = int(nearest_row(weights, x))
        # numpy's exp, not libm's: the two differ in the last bit for some inputs
        phi = np.exp(-self.sq_dist[winner] / (2.0 * sigma**2))
        pull_rows(weights, x, rho * phi)
        return winner


def train_step(network: SomNetwork, stimulus_vector, l: int, schedule: TrainingSchedule) -> SomNetwork:
    """Apply one learning step with the clean stimulus."""
    x = _check_vector(network, stimulus_vector)
    rho = learning_rate(l, schedule)
    sigma = sigma_at(l, schedule)
    weights = network.weights.copy()
    _Trainer(network.image_shape).step(weights, x, rho, sigma)
    return SomNetwork(network.domain_shape, network.image_shape, weights)


def _stimulus_matrix(stimuli) -> np.ndarray:
    matrix = getattr(stimuli, "matrix", None)
    if matrix is None:
        matrix = np.asarray(stimuli, dtype=np.float64)
        if matrix.ndim == 1 and matrix.size:
            matrix = matrix[None, :]
    if matrix.size == 0 or len(matrix) == 0:
        raise EmptyInputError("stimulus set is empty")
    return matrix


def presentation_order(n_stimuli: int, schedule: TrainingSchedule) -> np.ndarray:
    """Zero-based stimulus index presented at each learning step."""
    if n_stimuli < 1:
        raise EmptyInputError("stimulus set is empty")
    if schedule.presentation == "cyclic":
        return np.arange(schedule.steps) % n_stimuli
    # separate stream from init_network, which uses the bare seed
    rng = np.random.default_rng([schedule.seed, 1])
    return rng.integers(0, n_stimuli, size=schedule.steps)


def train(network: SomNetwork, stimuli, schedule: TrainingSchedule) -> SomNetwork:
    """Run ``schedule.steps`` learning steps and return the trained network.

    ``stimuli`` is a ``StimulusSet`` or a (K, n) array of stimulus vectors.
    """
    X = _stimulus_matrix(stimuli)
    if X.ndim != 2 or X.shape[1] != network.n_inputs:
        raise DimensionError(
            f"stimulus vectors have length {X.shape[-1]}, network expects {network.n_inputs}"
        )
    if not np.all(np.isfinite(X)):
        raise InvalidInputError("stimulus vectors contain non-finite values")
    order = presentation_order(len(X), schedule)
    trainer = _Trainer(network.image_shape)
    weights = network.weights.copy()
    rho0, beta = schedule.rho0, schedule.beta
    sigma0, alpha = schedule.sigma0, schedule.alpha
    for l in range(1, schedule.steps + 1):
        trainer.step(
            weights,
            X[order[l - 1]],
            rho0 * beta ** (l - 1),
            sigma0 * alpha ** (l - 1),
        )
    return SomNetwork(network.domain_shape, network.image_shape, weights)


def _stimulus_ids(stimuli, k):
    ids = getattr(stimuli, "ids", None)
    return list(ids) if ids is not None else list(range(1, k + 1))


def label_map(network: SomNetwork, stimuli) -> ConceptLabeling:
    """Label every image neuron with its nearest stimulus.

    Ties go to the earlier stimulus; ``margin`` is the gap between the best
    and second-best distance (``inf`` for a single-stimulus set).
    """
    X = _stimulus_matrix(stimuli)
    if X.shape[1] != network.n_inputs:
        raise DimensionError(
            f"stimulus vectors have length {X.shape[1]}, network expects {network.n_inputs}"
        )
    ids = np.asarray(_stimulus_ids(stimuli, len(X)), dtype=np.int64)
    W = network.weights
    dist = np.stack([np.linalg.norm(W - x, axis=1) for x in X], axis=1)
    best = np.argmin(dist, axis=1)
    if len(X) == 1:
        margin = np.full(network.n_neurons, math.inf)
    else:
        srt = np.sort(dist, axis=1)
        margin = srt[:, 1] - srt[:, 0]
    return ConceptLabeling(network.image_shape, ids[best], margin)


def quantization_error(network: SomNetwork, stimuli) -> float:
    """Mean distance from each stimulus to its best-matching weight vector."""
    X = _stimulus_matrix(stimuli)
    if X.shape[1] != network.n_inputs:
        raise DimensionError(
            f"stimulus vectors have length {X.shape[1]}, network expects {network.n_inputs}"
        )
    W = network.weights
    return float(np.mean([np.linalg.norm(W - x, axis=1).min() for x in X]))
