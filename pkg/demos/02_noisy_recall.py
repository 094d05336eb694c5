"""Probe a trained map with a noisy star at the four recall settings.

Low noise keeps the response inside the star's own patch, large noise
spills into many other concepts, and raising the signal level shrinks the
response below the size of the patch.
"""
from semantic_som import ExperimentConfig, builtin_glyph_set, run_recall, run_reference
from semantic_som.experiments import RECALL_SETTINGS
from semantic_som.render import default_style, render_region_overlay

config = ExperimentConfig()
glyphs = builtin_glyph_set()
net, labels = run_reference(config, glyphs)
style = default_style(glyphs)

for name, theta, p in RECALL_SETTINGS:
    report = run_recall(net, labels, glyphs, config, theta=theta, noise_p=p)
    print(f"{name}: theta={theta} p={p}  area={report.excited_area} "
          f"labels={sorted(report.invaded_labels)} -> {report.regime}")
    text, _ = render_region_overlay(labels, report.region, style)
    print(text)
