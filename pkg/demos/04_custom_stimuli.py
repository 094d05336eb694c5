"""Use your own stimuli instead of the builtin glyphs.

Stimuli are read from a CSV with columns ``id,marker,v0..v{n-1}``. This
script writes four random sparse patterns for a 10x10 input sheet, trains
a 10x10 map on them and prints the label map.
"""
import numpy as np

from semantic_som import GridShape, Stimulus, StimulusSet, TrainingSchedule, init_network, train
from semantic_som.render import default_style, render_label_text
from semantic_som.som import label_map
from semantic_som.stimuli import load_stimuli, save_stimuli

rng = np.random.default_rng(3)
patterns = (rng.random((4, 100)) < 0.2).astype(float)
save_stimuli(StimulusSet(tuple(Stimulus(i + 1, m, v) for i, (m, v) in
                               enumerate(zip("abcd", patterns)))), "custom.csv")

stimuli = load_stimuli("custom.csv")
shape = GridShape(10, 10)
net = train(init_network(shape, shape, 1), stimuli,
            TrainingSchedule(sigma0=5, steps=3000, seed=1))
print(render_label_text(label_map(net, stimuli), default_style(stimuli)))
