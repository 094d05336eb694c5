"""Signal-to-noise recall on a trained map.

A probe stimulus is perturbed multiplicatively (each component scaled by
``1 + u`` with ``u ~ U[-p, p]``), projected onto the image sheet as dot
products with every weight vector, and normalized by the sheet maximum.
Neurons whose relative activation reaches the threshold ``theta`` are
excited. A response region is the union over ``trials`` noisy
presentations.

Noise for trial ``t`` of a run seeded with ``seed`` comes from
``numpy.random.default_rng([seed, t])``. The stream does not depend on
``theta`` or ``p``, so runs that share a seed see the same underlying
uniform draws at every grid point.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateActivationError, DimensionError, InvalidParameterError
from .som import SomNetwork


@dataclass(frozen=True)
class ModulationParams:
    theta: float = 0.999
    noise_p: float = 0.10
    trials: int = 100
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.theta <= 1:
            raise InvalidParameterError(f"theta must lie in (0, 1], got {self.theta}")
        if not self.noise_p >= 0:
            raise InvalidParameterError(f"noise level must be >= 0, got {self.noise_p}")
        if int(self.trials) != self.trials or self.trials < 1:
            raise InvalidParameterError(f"trials must be a positive integer, got {self.trials}")
        if not 0 <= int(self.seed) < 2**64:
            raise InvalidParameterError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    def to_dict(self) -> dict:
        return {"theta": self.theta, "noise_p": self.noise_p, "trials": self.trials, "seed": self.seed}


@dataclass(frozen=True, eq=False)
class ResponseRegion:
    """Union of excited image neurons over ``trials`` presentations.

    ``excited`` holds sorted row-major indices; ``frequency[i]`` counts the
    trials in which neuron ``i`` was excited.
    """

    excited: np.ndarray
    frequency: np.ndarray
    trials: int

    @property
    def area(self) -> int:
        return int(self.excited.size)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(trial)])


def add_noise(vector, noise_p: float, rng: np.random.Generator) -> np.ndarray:
    """Return ``x * (1 + u)`` with ``u`` drawn per component from U[-p, p]."""
    if not noise_p >= 0:
        raise InvalidParameterError(f"noise level must be >= 0, got {noise_p}")
    x = np.asarray(vector, dtype=np.float64)
    u = rng.uniform(-noise_p, noise_p, size=x.shape)
    return x * (1.0 + u)


def activation_profile(network: SomNetwork, input) -> np.ndarray:
    """Dot product of every weight row with ``input``, divided by the maximum."""
    x = np.asarray(input, dtype=np.float64)
    if x.shape != (network.n_inputs,):
        raise DimensionError(f"input has shape {x.shape}, network expects ({network.n_inputs},)")
    s = network.weights @ x
    top = s.max()
    if not top > 0:
        raise DegenerateActivationError(
            f"largest total input is {top:g}; relative activation needs a positive maximum"
        )
    return s / top


def excited_set(profile, theta: float) -> np.ndarray:
    """Sorted indices ``i`` with ``profile[i] >= theta``."""
    if not 0 < theta <= 1:
        raise InvalidParameterError(f"theta must lie in (0, 1], got {theta}")
    return np.flatnonzero(np.asarray(profile) >= theta)


def response_region(network: SomNetwork, stimulus, params: ModulationParams) -> ResponseRegion:
    """Accumulate excited sets over ``params.trials`` noisy presentations.

    ``stimulus`` may be a ``Stimulus`` or a bare vector.
    """
    x = np.asarray(getattr(stimulus, "vector", stimulus), dtype=np.float64)
    freq = np.zeros(network.n_neurons, dtype=np.int64)
    for t in range(params.trials):
        noisy = add_noise(x, params.noise_p, trial_rng(params.seed, t))
        try:
            profile = activation_profile(network, noisy)
        except DegenerateActivationError as exc:
            raise DegenerateActivationError(f"trial {t}: {exc}", trial=t) from exc
        freq[excited_set(profile, params.theta)] += 1
    return ResponseRegion(np.flatnonzero(freq), freq, params.trials)
