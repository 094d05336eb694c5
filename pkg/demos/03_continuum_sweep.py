"""Sweep (theta, p) over ten noise seeds and summarise the regimes.

Prints one line per grid point with the mean association count, the mean
excited area and how many seeds fell into each regime. The full table is
written to ``sweep.csv``.
"""
from semantic_som import ExperimentConfig, builtin_glyph_set, run_continuum_sweep, run_reference

config = ExperimentConfig()
glyphs = builtin_glyph_set()
net, labels = run_reference(config, glyphs)
table = run_continuum_sweep(net, labels, glyphs, config)
table.write_csv("sweep.csv")

for theta in config.sweep_thetas:
    for p in config.sweep_noises:
        counts = {str(k): v for k, v in table.regime_counts(theta, p).items() if v}
        print(f"theta={theta:<6} p={p:<4}  count={table.mean('association_count', theta, p):4.1f}"
              f"  area={table.mean('excited_area', theta, p):6.1f}  {counts}")
