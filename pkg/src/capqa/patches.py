"""Overlapping patch pyramids over image rectangles.

Level k slices each axis into k windows on a boundary grid at multiples of
size/(k+1), each window spanning two grid steps, so adjacent windows
overlap by half a side (within a pixel once boundaries are rounded to the
integer grid). Every pixel is covered at every level. A pyramid over
levels {1, 3, 5, 7} yields 1+9+25+49 = 84 patches.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

from .errors import BadDims, BadLevels, MalformedInput

DEFAULT_LEVELS = (1, 3, 5, 7)


@dataclass(frozen=True)
class PatchEntry:
    level: int
    row: int
    col: int
    rect: tuple  # (x0, y0, x1, y1) in pixels, end-exclusive
    pos_enc: tuple  # (x0/W, y0/H, x1/W, y1/H, level_index)


@dataclass(frozen=True)
class PatchSpec:
    image_id: int
    width: int
    height: int
    levels: tuple
    patches: tuple


def _axis_bounds(size: int, k: int):
    # shared boundary grid: b_i = round(i*size/(k+1)), exact integer math;
    # window c spans [b_c, b_c+2], so adjacent windows overlap by half a
    # side within one pixel (each boundary is within 0.5 of the real line)
    denom = k + 1
    grid = [(2 * i * size + denom) // (2 * denom) for i in range(denom + 1)]
    return [(grid[c], grid[c + 2]) for c in range(k)]


def pyramid(image_id: int, width: int, height: int, levels=None) -> PatchSpec:
    if not isinstance(width, int) or not isinstance(height, int) or width <= 0 or height <= 0:
        raise BadDims(f"image {image_id}: {width}x{height}")
    lv = tuple(levels) if levels is not None else DEFAULT_LEVELS
    if not lv:
        raise BadLevels("no levels given")
    for k in lv:
        if not isinstance(k, int) or k < 1:
            raise BadLevels(f"level {k!r} is not a positive integer")
    if any(b <= a for a, b in zip(lv, lv[1:])):
        raise BadLevels(f"levels {lv} are not strictly ascending")
    # below this, rounded grid steps can collapse to zero-width windows
    if 2 * width <= lv[-1] + 1 or 2 * height <= lv[-1] + 1:
        raise BadDims(f"image {image_id}: {width}x{height} too small for level {lv[-1]}")

    patches = []
    for li, k in enumerate(lv):
        xs = _axis_bounds(width, k)
        ys = _axis_bounds(height, k)
        for row in range(k):
            y0, y1 = ys[row]
            for col in range(k):
                x0, x1 = xs[col]
                patches.append(
                    PatchEntry(
                        level=k,
                        row=row,
                        col=col,
                        rect=(x0, y0, x1, y1),
                        pos_enc=(x0 / width, y0 / height, x1 / width, y1 / height, li),
                    )
                )
    return PatchSpec(
        image_id=image_id, width=width, height=height, levels=lv, patches=tuple(patches)
    )


def write_manifest(specs: Iterable[PatchSpec], path) -> int:
    """One JSON line per patch; returns the line count."""
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        for spec in specs:
            for p in spec.patches:
                fh.write(
                    json.dumps(
                        {
                            "image_id": spec.image_id,
                            "level": p.level,
                            "row": p.row,
                            "col": p.col,
                            "rect": list(p.rect),
                            "pos_enc": list(p.pos_enc),
                        },
                        ensure_ascii=False,
                    )
                )
                fh.write("\n")
                count += 1
    return count


def read_manifest(path) -> list[PatchSpec]:
    """Rebuild specs from a manifest. Image extents are recovered from the
    outermost patch edges (exact, since the last window on each axis ends at
    the image border)."""
    per_image: dict[int, list[PatchEntry]] = {}
    order: list[int] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                d = json.loads(line)
                entry = PatchEntry(
                    level=int(d["level"]),
                    row=int(d["row"]),
                    col=int(d["col"]),
                    rect=tuple(d["rect"]),
                    pos_enc=tuple(d["pos_enc"]),
                )
                image_id = int(d["image_id"])
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise MalformedInput(f"{path}:{lineno}: {exc}") from exc
            if image_id not in per_image:
                per_image[image_id] = []
                order.append(image_id)
            per_image[image_id].append(entry)

    specs = []
    for image_id in order:
        entries = per_image[image_id]
        width = max(e.rect[2] for e in entries)
        height = max(e.rect[3] for e in entries)
        levels = []
        for e in entries:
            if e.level not in levels:
                levels.append(e.level)
        specs.append(
            PatchSpec(
                image_id=image_id,
                width=width,
                height=height,
                levels=tuple(levels),
                patches=tuple(entries),
            )
        )
    return specs
