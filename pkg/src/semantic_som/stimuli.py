"""Concept stimuli presented to the domain sheet.

The builtin set draws ten binary glyphs on the domain grid. Every glyph
reaches into a shared 3x3 hub in the middle of the sheet: the two stars
*are* (almost) the hub, and each of the other eight glyphs covers the hub
minus a few pixels. How many hub pixels a glyph misses controls how much
sign-flipping noise it takes before a star probe spills into that
glyph's region, which is what spreads the regimes out along ``p``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionError,
    DuplicateIdError,
    DuplicateMarkerError,
    InvalidShapeError,
    LengthMismatchError,
    OutOfRangeError,
    StimulusParseError,
)
from .som import GridShape

SIMILAR_MIN = 0.6
DISSIMILAR_MAX = 0.2


@dataclass(frozen=True, eq=False)
class Stimulus:
    id: int
    marker: str
    vector: np.ndarray

    def __post_init__(self):
        v = np.array(self.vector, dtype=np.float64, copy=True)
        v.setflags(write=False)
        object.__setattr__(self, "vector", v)

    def __eq__(self, other):
        if not isinstance(other, Stimulus):
            return NotImplemented
        return (self.id, self.marker) == (other.id, other.marker) and np.array_equal(
            self.vector, other.vector
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class StimulusSet:
    stimuli: tuple
    declared_similar_pair: tuple | None = None
    declared_dissimilar_pair: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "stimuli", tuple(self.stimuli))

    def __len__(self):
        return len(self.stimuli)

    def __iter__(self):
        return iter(self.stimuli)

    def __eq__(self, other):
        if not isinstance(other, StimulusSet):
            return NotImplemented
        return (
            self.stimuli == other.stimuli
            and self.declared_similar_pair == other.declared_similar_pair
            and self.declared_dissimilar_pair == other.declared_dissimilar_pair
        )

    __hash__ = None

    @property
    def ids(self) -> list[int]:
        return [s.id for s in self.stimuli]

    @property
    def markers(self) -> dict[int, str]:
        return {s.id: s.marker for s in self.stimuli}

    @property
    def matrix(self) -> np.ndarray:
        """(K, n) array of stimulus vectors in set order."""
        if not self.stimuli:
            return np.empty((0, 0))
        return np.stack([s.vector for s in self.stimuli])

    def get(self, stimulus_id: int) -> Stimulus:
        for s in self.stimuli:
            if s.id == stimulus_id:
                return s
        raise KeyError(stimulus_id)

    def partner(self, stimulus_id: int) -> int | None:
        """The other member of the declared similar pair, if any."""
        pair = self.declared_similar_pair
        if pair and stimulus_id in pair:
            return pair[1] if pair[0] == stimulus_id else pair[0]
        return None

    def checksum(self) -> str:
        import hashlib

        h = hashlib.sha256()
        for s in self.stimuli:
            h.update(f"{s.id},{s.marker};".encode())
            h.update(np.ascontiguousarray(s.vector, dtype="<f8").tobytes())
        return h.hexdigest()


def jaccard(a, b) -> float:
    """Overlap |A & B| / |A | B| of the active (nonzero) pixels."""
    a = np.asarray(a) != 0
    b = np.asarray(b) != 0
    union = np.count_nonzero(a | b)
    return np.count_nonzero(a & b) / union if union else 0.0


# -- builtin glyphs ---------------------------------------------------------

# Hub pixels as offsets from the sheet centre, row-major over the 3x3 block.
_HUB = [(dr, dc) for dr in (-1, 0, 1) for dc in (-1, 0, 1)]

# (id, marker, name, hub offsets the glyph leaves out, block centre in units
# of the sheet size). Block centres sit on a ring around the hub.
_GLYPHS = [
    (3, "/", "slash", [(-1, -1), (0, 0)], (0.18, 0.18)),
    (4, "+", "plus", [(1, 1), (-1, 1), (1, -1)], (0.82, 0.82)),
    (5, "o", "circle", [(-1, 0), (1, -1)], (0.18, 0.50)),
    (6, "#", "square", [(0, 1), (1, 0)], (0.18, 0.82)),
    (7, "^", "triangle", [(1, 1), (0, -1), (-1, 0), (1, -1)], (0.50, 0.82)),
    (8, "x", "cross", [(-1, 1), (1, -1), (0, 0)], (0.82, 0.50)),
    (9, "=", "bar", [(1, 0), (0, -1), (-1, 1), (-1, -1), (0, 1)], (0.82, 0.18)),
    (10, ":", "dots", [(0, -1), (-1, -1), (1, 1), (-1, 1)], (0.50, 0.18)),
]


def _block(name: str, half: int) -> np.ndarray:
    """Boolean (2*half+1) square bitmap of one glyph shape."""
    size = 2 * half + 1
    r, c = np.mgrid[0:size, 0:size] - half
    if name == "slash":
        return np.abs(r + c) <= 2
    if name == "plus":
        return (np.abs(r) <= 1) | (np.abs(c) <= 1)
    if name == "circle":
        d = np.hypot(r, c)
        return (d <= half + 0.3) & (d >= half - 1.2)
    if name == "square":
        return np.ones((size, size), bool)
    if name == "triangle":
        return (r >= -half + 2 * np.abs(c) - half) & (r <= half)
    if name == "cross":
        return (np.abs(r - c) <= 1) | (np.abs(r + c) <= 1)
    if name == "bar":
        return np.abs(r) <= 1
    if name == "dots":
        return (r + c) % 2 == 0
    raise ValueError(name)


def _line(grid, r0, c0, r1, c1):
    n = max(abs(r1 - r0), abs(c1 - c0))
    for t in range(n + 1):
        rr = round(r0 + (r1 - r0) * t / n) if n else r0
        cc = round(c0 + (c1 - c0) * t / n) if n else c0
        grid[rr, cc] = True


def _render_glyphs(shape: GridShape) -> list[tuple[int, str, np.ndarray]]:
    rows, cols = shape.rows, shape.cols
    cr, cc = rows // 2, cols // 2
    half = max(1, min(rows, cols) // 6)
    out = []

    star = np.zeros((rows, cols), bool)
    for dr, dc in _HUB:
        star[cr + dr, cc + dc] = True
    out.append((1, "*", star))

    # second star: one hub corner swapped for two outer ray tips
    star2 = star.copy()
    star2[cr + 1, cc + 1] = False
    star2[cr - 2, cc] = True
    star2[cr, cc - 2] = True
    out.append((2, "%", star2))

    for gid, marker, name, missing, (fr, fc) in _GLYPHS:
        g = np.zeros((rows, cols), bool)
        br = min(max(round(fr * (rows - 1)), half), rows - 1 - half)
        bc = min(max(round(fc * (cols - 1)), half), cols - 1 - half)
        g[br - half:br + half + 1, bc - half:bc + half + 1] |= _block(name, half)
        # spoke from the block towards the hub, stopping outside it
        sr = cr + int(np.sign(br - cr)) * 2
        sc = cc + int(np.sign(bc - cc)) * 2
        _line(g, br, bc, sr, sc)
        for dr, dc in _HUB:
            g[cr + dr, cc + dc] = (dr, dc) not in missing
        out.append((gid, marker, g))
    return out


def builtin_glyph_set(domain_shape: GridShape = GridShape()) -> StimulusSet:
    """The ten builtin concept glyphs, flattened row-major.

    Stimuli 1 and 2 are the two star variants (the declared similar pair);
    3 ('/') and 4 ('+') are the declared dissimilar pair. Raises
    ``InvalidShapeError`` if the grid is too small for the glyphs to keep
    their overlap structure (Jaccard >= 0.6 for the stars, <= 0.2 for
    every other pair).
    """
    if domain_shape.rows < 8 or domain_shape.cols < 8:
        raise InvalidShapeError(f"builtin glyphs need at least 8x8, got {domain_shape}")
    glyphs = _render_glyphs(domain_shape)
    stimuli = tuple(
        Stimulus(gid, marker, g.ravel().astype(np.float64))
        for gid, marker, g in sorted(glyphs, key=lambda t: t[0])
    )
    vecs = [s.vector for s in stimuli]
    for i in range(len(vecs)):
        for j in range(i + 1, len(vecs)):
            ov = jaccard(vecs[i], vecs[j])
            similar = (i, j) == (0, 1)
            if (similar and ov < SIMILAR_MIN) or (not similar and ov > DISSIMILAR_MAX):
                raise InvalidShapeError(
                    f"{domain_shape} is too small to keep glyphs {stimuli[i].marker!r} and "
                    f"{stimuli[j].marker!r} apart (overlap {ov:.2f})"
                )
    return StimulusSet(stimuli, declared_similar_pair=(1, 2), declared_dissimilar_pair=(3, 4))


# -- validation and CSV -----------------------------------------------------

def validate(stimulus_set: StimulusSet, n: int | None = None) -> list[str]:
    """Return a list of invariant violations; an empty list means ok."""
    problems = []
    stimuli = list(stimulus_set.stimuli)
    if not stimuli:
        return ["empty set"]
    ids = [s.id for s in stimuli]
    markers = [s.marker for s in stimuli]
    for dup in sorted({i for i in ids if ids.count(i) > 1}):
        problems.append(f"duplicate id {dup}")
    for dup in sorted({m for m in markers if markers.count(m) > 1}):
        problems.append(f"duplicate marker {dup!r}")
    for m in markers:
        if len(m) != 1:
            problems.append(f"marker {m!r} is not a single character")
    lengths = {s.vector.shape for s in stimuli}
    if len(lengths) > 1:
        problems.append("vectors have different lengths")
    for s in stimuli:
        v = s.vector
        if v.ndim != 1:
            problems.append(f"stimulus {s.id}: vector is not one-dimensional")
            continue
        if n is not None and v.size != n:
            problems.append(f"stimulus {s.id}: length {v.size}, expected {n}")
        if not np.all(np.isfinite(v)):
            problems.append(f"stimulus {s.id}: non-finite component")
        elif np.any((v < 0) | (v > 1)):
            problems.append(f"stimulus {s.id}: component outside [0, 1]")
        elif not np.any(v):
            problems.append(f"stimulus {s.id}: zero norm")
    for name, pair in (("similar", stimulus_set.declared_similar_pair),
                       ("dissimilar", stimulus_set.declared_dissimilar_pair)):
        if pair is not None:
            for pid in pair:
                if pid not in ids:
                    problems.append(f"declared {name} pair references unknown id {pid}")
    return problems


def save_stimuli(stimulus_set: StimulusSet, path) -> None:
    n = len(stimulus_set.stimuli[0].vector) if stimulus_set.stimuli else 0
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "marker"] + [f"v{j}" for j in range(n)])
        for s in stimulus_set.stimuli:
            w.writerow([s.id, s.marker] + [repr(float(x)) for x in s.vector])


def load_stimuli(path, similar_pair=None, dissimilar_pair=None) -> StimulusSet:
    """Read a stimulus CSV (``id,marker,v0,...``) and validate it."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise StimulusParseError(f"{path}: empty file")
    header = rows[0]
    if len(header) < 3 or header[:2] != ["id", "marker"]:
        raise StimulusParseError(f"{path}: header must start with 'id,marker,v0'")
    expected = [f"v{j}" for j in range(len(header) - 2)]
    if header[2:] != expected:
        raise StimulusParseError(f"{path}: vector columns must be named v0..v{len(expected) - 1}")
    n = len(expected)
    stimuli, seen_ids, seen_markers = [], set(), set()
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != n + 2:
            raise LengthMismatchError(
                f"{path}:{lineno}: expected {n} components, found {len(row) - 2}"
            )
        try:
            sid = int(row[0])
        except ValueError:
            raise StimulusParseError(f"{path}:{lineno}: id {row[0]!r} is not an integer") from None
        marker = row[1]
        if len(marker) != 1:
            raise StimulusParseError(f"{path}:{lineno}: marker {marker!r} must be one character")
        try:
            vec = np.array([float(x) for x in row[2:]])
        except ValueError as exc:
            raise StimulusParseError(f"{path}:{lineno}: {exc}") from None
        if sid in seen_ids:
            raise DuplicateIdError(f"{path}:{lineno}: duplicate id {sid}")
        if marker in seen_markers:
            raise DuplicateMarkerError(f"{path}:{lineno}: duplicate marker {marker!r}")
        bad = np.flatnonzero(~np.isfinite(vec) | (vec < 0) | (vec > 1))
        if bad.size:
            j = int(bad[0])
            raise OutOfRangeError(
                f"{path}:{lineno}: component v{j} = {vec[j]} is outside [0, 1]"
            )
        seen_ids.add(sid)
        seen_markers.add(marker)
        stimuli.append(Stimulus(sid, marker, vec))
    result = StimulusSet(tuple(stimuli), similar_pair, dissimilar_pair)
    problems = validate(result)
    if problems:
        raise StimulusParseError(f"{path}: " + "; ".join(problems))
    return result


def check_dimension(stimulus_set: StimulusSet, n: int) -> None:
    for s in stimulus_set.stimuli:
        if s.vector.shape != (n,):
            raise DimensionError(f"stimulus {s.id} has length {s.vector.size}, expected {n}")


def grid_side_for(n: int) -> int | None:
    side = math.isqrt(n)
    return side if side * side == n else None
