"""Train the default semantic map and look at it.

Ten glyphs are drawn on a 20x20 input sheet. After 10,000 learning steps
each glyph owns a patch of the 20x20 output sheet, and the two star
variants ('*' and '%') end up next to each other.
"""
from semantic_som import GridShape, TrainingSchedule, builtin_glyph_set, init_network, train
from semantic_som.experiments import centroid_distance, regions_adjacent
from semantic_som.render import default_style, render_label_text
from semantic_som.som import label_map, quantization_error

glyphs = builtin_glyph_set(GridShape(20, 20))
for s in glyphs:
    print(f"glyph {s.id:2d} {s.marker!r}: {int(s.vector.sum())} active pixels")

start = init_network(GridShape(), GridShape(), seed=0)
net = train(start, glyphs, TrainingSchedule(seed=0))
labels = label_map(net, glyphs)

print()
print(render_label_text(labels, default_style(glyphs)))
print("quantization error before/after:",
      round(quantization_error(start, glyphs), 3), round(quantization_error(net, glyphs), 3))
print("stars adjacent:", regions_adjacent(labels, 1, 2))
print("'/' to '+' centroid distance:", round(centroid_distance(labels, 3, 4), 2))
