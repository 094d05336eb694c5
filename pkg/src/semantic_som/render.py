"""Text and PGM renderings of label maps and response regions."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, InvalidParameterError, PaletteError
from .modulation import ResponseRegion
from .som import ConceptLabeling

EXCITED_GRAY = 255


@dataclass(frozen=True)
class RenderStyle:
    """``palette`` maps stimulus id to ``(gray, marker)``."""

    palette: dict = field(default_factory=dict)
    overlay_mark: str = "@"
    scale: int = 1

    def __post_init__(self):
        grays = [g for g, _ in self.palette.values()]
        markers = [m for _, m in self.palette.values()]
        if len(set(grays)) != len(grays):
            raise InvalidParameterError("palette gray levels must be distinct")
        if any(not 0 <= g <= 255 for g in grays):
            raise InvalidParameterError("palette gray levels must lie in 0..255")
        if len(self.overlay_mark) != 1 or self.overlay_mark in markers:
            raise InvalidParameterError(
                f"overlay mark {self.overlay_mark!r} must be one character distinct from markers"
            )
        if int(self.scale) != self.scale or self.scale < 1:
            raise InvalidParameterError(f"scale must be a positive integer, got {self.scale}")


def default_style(stimuli, overlay_mark="@", scale=1) -> RenderStyle:
    """Evenly spaced grays in 0..230, leaving white for excited neurons."""
    ids = stimuli.ids
    k = len(ids)
    step = 230 // max(k - 1, 1)
    palette = {sid: (i * step, stimuli.markers[sid]) for i, sid in enumerate(ids)}
    return RenderStyle(palette, overlay_mark, scale)


def _lookup(style, label, slot):
    try:
        return style.palette[int(label)][slot]
    except KeyError:
        raise PaletteError(f"label {int(label)} has no palette entry") from None


def render_label_text(labeling: ConceptLabeling, style: RenderStyle) -> str:
    lines = []
    for row in labeling.grid():
        lines.append("".join(_lookup(style, lab, 1) for lab in row))
    return "\n".join(lines) + "\n"


def label_pixels(labeling: ConceptLabeling, style: RenderStyle) -> np.ndarray:
    """Scaled uint8 image of the label map."""
    grays = np.array([[_lookup(style, lab, 0) for lab in row] for row in labeling.grid()],
                     dtype=np.uint8)
    return np.kron(grays, np.ones((style.scale, style.scale), dtype=np.uint8))


def write_pgm(path, pixels) -> None:
    """Binary (P5) PGM with maxval 255."""
    pixels = np.asarray(pixels, dtype=np.uint8)
    h, w = pixels.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(pixels.tobytes())


def render_label_image(labeling: ConceptLabeling, style: RenderStyle, path) -> np.ndarray:
    pixels = label_pixels(labeling, style)
    write_pgm(path, pixels)
    return pixels


def _check_region(labeling, region):
    if region.frequency.shape != (labeling.shape.size,):
        raise DimensionError(
            f"region covers {region.frequency.size} neurons, labeling has {labeling.shape.size}"
        )


def render_region_overlay(labeling: ConceptLabeling, region: ResponseRegion,
                          style: RenderStyle, path=None) -> tuple[str, np.ndarray]:
    """Overlay excited neurons on the label map.

    Returns ``(text, pixels)``. With ``path`` given, writes ``<path>.txt``
    and ``<path>.pgm``.
    """
    _check_region(labeling, region)
    rows, cols = labeling.shape.rows, labeling.shape.cols
    excited = np.zeros(labeling.shape.size, bool)
    excited[region.excited] = True
    excited = excited.reshape(rows, cols)
    text_rows = []
    for r, row in enumerate(labeling.grid()):
        text_rows.append("".join(
            style.overlay_mark if excited[r, c] else _lookup(style, lab, 1)
            for c, lab in enumerate(row)
        ))
    text = "\n".join(text_rows) + "\n"
    pixels = label_pixels(labeling, style)
    mask = np.kron(excited, np.ones((style.scale, style.scale), dtype=bool))
    pixels[mask] = EXCITED_GRAY
    if path is not None:
        with open(f"{path}.txt", "w", encoding="utf-8") as fh:
            fh.write(text)
        write_pgm(f"{path}.pgm", pixels)
    return text, pixels


def write_frequency_csv(labeling: ConceptLabeling, region: ResponseRegion, path) -> None:
    _check_region(labeling, region)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["row", "col", "label", "frequency"])
        for i, (lab, f) in enumerate(zip(labeling.labels, region.frequency)):
            r, c = divmod(i, labeling.shape.cols)
            w.writerow([r, c, int(lab), int(f)])
