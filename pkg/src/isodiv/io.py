"""Versioned JSON files and CSV matrices/spectra."""
from __future__ import annotations

import csv
import io as _io
import json
import math
from pathlib import Path

import numpy as np

from . import algebra
from .errors import FormatError
from .tiling import DiV, Placement, Tile, build_div, from_placements, word_isometry

FORMAT_VERSION = 1


def _check(data: dict, kind: str) -> dict:
    if not isinstance(data, dict):
        raise FormatError("expected a JSON object")
    ver = data.get("format_version")
    if ver != FORMAT_VERSION:
        raise FormatError(f"unsupported format_version {ver!r} (expected {FORMAT_VERSION})")
    if data.get("kind", kind) != kind:
        raise FormatError(f"expected a {kind!r} file, got {data.get('kind')!r}")
    return data


def tile_to_dict(tile: Tile) -> dict:
    return {"vertices": [list(v) for v in tile.vertices],
            "side_labels": [s.value for s in tile.side_labels]}


def tile_from_dict(data: dict) -> Tile:
    try:
        return Tile(tuple(tuple(v) for v in data["vertices"]),
                    tuple(data.get("side_labels", "abc")))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad tile description: {exc}") from None


def div_to_dict(div: DiV) -> dict:
    words = div.words or tuple(p.word for p in div.placements)
    return {
        "format_version": FORMAT_VERSION,
        "kind": "div",
        "tile": tile_to_dict(div.tile),
        "words": [w or "e" for w in words],
        "copies": [p.word or "e" for p in div.placements],
        "internal_sides": [[s.i, s.j, s.label.value] for s in div.internal_sides],
        "external_sides": [[s.copy, s.label.value] for s in div.external_sides],
    }


def div_from_dict(data: dict) -> DiV:
    data = _check(data, "div")
    tile = tile_from_dict(data["tile"])
    if "copies" in data:
        # rebuild in the stored copy order so indices survive the round trip
        copies = [("" if w == "e" else w) for w in data["copies"]]
        pl = [Placement(tile, i, w, word_isometry(tile, w)) for i, w in enumerate(copies)]
        return from_placements(tile, pl, words=tuple("" if w == "e" else w for w in data["words"]))
    return build_div(tile, data["words"])


def save_json(data: dict, path) -> None:
    text = json.dumps(data, indent=2, sort_keys=False)
    if str(path) == "-":
        print(text)
    else:
        Path(path).write_text(text + "\n")


def load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from None


def save_div(div: DiV, path) -> None:
    save_json(div_to_dict(div), path)


def load_div(path) -> DiV:
    return div_from_dict(load_json(path))


def load_tile(path) -> Tile:
    """Tile from a tile file, or the tile of a DiV or census file."""
    data = load_json(path)
    kind = data.get("kind", "tile") if isinstance(data, dict) else None
    if kind in ("div", "census"):
        return tile_from_dict(_check(data, kind)["tile"])
    return tile_from_dict(_check(data, "tile"))


def save_tile(tile: Tile, path) -> None:
    save_json(dict({"format_version": FORMAT_VERSION, "kind": "tile"}, **tile_to_dict(tile)), path)


def census_to_dict(census, tile: Tile) -> dict:
    classes = []
    for c in census.classes:
        rep = c.representative
        gens = algebra.generators_of(rep)
        classes.append({
            "words": [w or "e" for w in rep.words],
            "size": c.size,
            "group_order": c.group_order,
            "is_tree": c.is_tree,
            "degrees": sorted(algebra.graph_of(rep).degrees()),
            "color_counts": list(algebra.graph_of(rep).color_counts()),
            "generators": {lab: gens.cycles(lab) for lab in "abc"},
            "spectrum": [round(float(v), 9) + 0.0 for v in c.spectrum],
        })
    return {"format_version": FORMAT_VERSION, "kind": "census", "tile": tile_to_dict(tile),
            "summary": census.summary(), "classes": classes}


def census_divs(data: dict) -> list:
    """Class representatives stored in a census file."""
    data = _check(data, "census")
    tile = tile_from_dict(data["tile"])
    return [build_div(tile, c["words"]) for c in data["classes"]]


# -- delimited output ------------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return f"{x:.12g}"


def matrix_csv(matrix, header=None) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if header is not None:
        w.writerow([str(h) for h in header])
    for row in np.atleast_2d(np.asarray(matrix)):
        w.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def spectrum_csv(values) -> str:
    return "".join(f"{float(v) + 0.0:.12g}\n" for v in values)


def write_text(text: str, path) -> None:
    if str(path) == "-":
        print(text, end="")
    else:
        Path(path).write_text(text)


def read_matrix_csv(path) -> np.ndarray:
    rows = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            try:
                rows.append([float(x) for x in row])
            except ValueError:
                if rows:
                    raise FormatError(f"non-numeric row in {path}") from None
    return np.array(rows)


def side_keys(q: algebra.StructuralMatrix) -> list:
    return [f"{i + 1}-{j + 1}:{lab.value}" for i, j, lab in q.column_keys]


def json_ready(obj):
    """Convert numpy scalars/arrays and non-finite floats for ``json.dumps``."""
    if isinstance(obj, dict):
        return {str(k): json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_ready(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return json_ready(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    return obj
