"""
semantic_som
============

A two-sheet self-organizing semantic map and a signal-to-noise recall model
built on top of it.

Training (``semantic_som.som``) forms a topographic map of a small set of
concept glyphs (``semantic_som.stimuli``). Recall
(``semantic_som.modulation``) presents one glyph with multiplicative noise
of level ``p`` and counts an image neuron as excited when its relative
activation reaches the signal level ``theta``. ``semantic_som.experiments``
turns those regions into association counts, classifies them as delusional,
normal, creative or disorganized, and sweeps ``(theta, p)``.

>>> import semantic_som as ss
>>> glyphs = ss.builtin_glyph_set()
>>> net = ss.train(ss.init_network(ss.GridShape(), ss.GridShape(), seed=0),
...                glyphs, ss.TrainingSchedule(seed=0))          # doctest: +SKIP
"""
from .errors import SomError
from .experiments import (
    ExperimentConfig,
    ExperimentReport,
    RegimeLabel,
    RegimeThresholds,
    association_count,
    classify_regime,
    reproduce,
    run_continuum_sweep,
    run_recall,
    run_reference,
)
from .io import load_network, save_network
from .modulation import (
    ModulationParams,
    ResponseRegion,
    activation_profile,
    add_noise,
    excited_set,
    response_region,
)
from .som import (
    ConceptLabeling,
    GridPos,
    GridShape,
    SomNetwork,
    TrainingSchedule,
    find_winner,
    init_network,
    label_map,
    learning_rate,
    neighborhood,
    quantization_error,
    sigma_at,
    train,
    train_step,
)
from .stimuli import Stimulus, StimulusSet, builtin_glyph_set, load_stimuli, save_stimuli, validate

__version__ = "0.1.0"
