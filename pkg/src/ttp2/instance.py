"""Distance-matrix instances: parsing, emission, generation, metric checks.

An instance is an n x n symmetric matrix of nonnegative travel distances
with a zero diagonal.  Three interchange formats are supported:

* ``matrix``: whitespace separated, ``n`` followed by n*n entries.
* ``csv``: n rows of n comma-separated entries, optional name header row.
* ``json``: object with keys ``n``, ``dist`` and optional ``names``,
  ``coords``, ``rounding``.  ``dist`` may be omitted when ``coords`` is
  present, in which case pairwise Euclidean distances are used.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InstanceError

SYMMETRY_TOL = 1e-9
TRIANGLE_TOL = 1e-9
COORD_TOL = 1e-6

_FORMATS = ("matrix", "csv", "json")
_GENERATOR_KINDS = ("euclidean", "unit", "random_metric")


@dataclass(frozen=True)
class Instance:
    """An immutable distance matrix plus optional team names/coordinates."""

    n: int
    dist: np.ndarray
    names: Optional[tuple[str, ...]] = None
    coords: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        dist = np.asarray(self.dist, dtype=float)
        if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
            raise InstanceError(f"distance matrix must be square, got shape {dist.shape}")
        if dist.shape[0] != self.n:
            raise InstanceError(f"n={self.n} does not match matrix of order {dist.shape[0]}")
        if self.n < 2 or self.n % 2 != 0:
            raise InstanceError(f"team count must be even and at least 2, got {self.n}")
        if not np.all(np.isfinite(dist)):
            raise InstanceError("distance matrix contains non-finite entries")
        if np.any(dist < 0):
            i, j = np.argwhere(dist < 0)[0]
            raise InstanceError(f"negative distance at ({i}, {j}): {dist[i, j]}")
        gap = np.abs(dist - dist.T)
        if gap.max(initial=0.0) > SYMMETRY_TOL:
            i, j = np.unravel_index(np.argmax(gap), gap.shape)
            raise InstanceError(
                f"asymmetry beyond tolerance at ({i}, {j}): {dist[i, j]} vs {dist[j, i]}"
            )
        dist = (dist + dist.T) / 2.0  # symmetrize sub-tolerance noise
        if np.abs(np.diag(dist)).max(initial=0.0) > SYMMETRY_TOL:
            i = int(np.argmax(np.abs(np.diag(dist))))
            raise InstanceError(f"nonzero diagonal at ({i}, {i}): {dist[i, i]}")
        np.fill_diagonal(dist, 0.0)
        dist.flags.writeable = False
        object.__setattr__(self, "dist", dist)
        if self.names is not None:
            names = tuple(str(x) for x in self.names)
            if len(names) != self.n:
                raise InstanceError(f"expected {self.n} names, got {len(names)}")
            object.__setattr__(self, "names", names)
        if self.coords is not None:
            coords = np.asarray(self.coords, dtype=float)
            if coords.shape != (self.n, 2):
                raise InstanceError(f"coords must have shape ({self.n}, 2), got {coords.shape}")
            coords.flags.writeable = False
            object.__setattr__(self, "coords", coords)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        if self.n != other.n or self.names != other.names:
            return False
        if (self.coords is None) != (other.coords is None):
            return False
        if self.coords is not None and not np.array_equal(self.coords, other.coords):
            return False
        return np.array_equal(self.dist, other.dist)

    def __hash__(self) -> int:
        return hash((self.n, self.names, self.dist.tobytes()))


@dataclass(frozen=True)
class MetricReport:
    """Result of a symmetry/triangle-inequality scan."""

    symmetric: bool
    triangle_ok: bool
    worst_violation: Optional[tuple[int, int, int, float]] = None  # (i, j, k, magnitude)


def _coerce_number(token: str, where: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise InstanceError(f"malformed number {token!r} at {where}") from None


def _read_source(source, binary_ok: bool = True) -> str:
    """Accept a path, text, or file-like object and return its full text."""
    if isinstance(source, (str, os.PathLike)):
        text = str(source)
        if isinstance(source, os.PathLike) or os.path.exists(text):
            with open(text, "r", encoding="utf-8") as fh:
                return fh.read()
        return text  # treat as literal content
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if hasattr(source, "read"):
        data = source.read()
        if isinstance(data, bytes):
            data = data.decode("utf-8")
        return data
    raise InstanceError(f"unreadable instance source of type {type(source).__name__}")


def _parse_matrix(text: str) -> Instance:
    tokens = text.split()
    if not tokens:
        raise InstanceError("empty matrix input")
    first = tokens[0]
    try:
        n = int(first)
    except ValueError:
        raise InstanceError(f"matrix input must start with the team count, got {first!r}") from None
    if len(tokens) - 1 != n * n:
        raise InstanceError(f"expected {n * n} entries after n={n}, found {len(tokens) - 1}")
    values = [_coerce_number(tok, f"entry {idx}") for idx, tok in enumerate(tokens[1:])]
    dist = np.array(values, dtype=float).reshape(n, n)
    return Instance(n=n, dist=dist)


def _parse_csv(text: str) -> Instance:
    rows = [line for line in (ln.strip() for ln in text.splitlines()) if line]
    if not rows:
        raise InstanceError("empty csv input")
    cells = [row.split(",") for row in rows]
    names: Optional[tuple[str, ...]] = None
    try:
        float(cells[0][0])
    except ValueError:
        names = tuple(c.strip() for c in cells[0])
        cells = cells[1:]
    n = len(cells)
    if n == 0:
        raise InstanceError("csv input has a header but no data rows")
    dist = np.zeros((n, n))
    for i, row in enumerate(cells):
        if len(row) != n:
            raise InstanceError(f"csv row {i} has {len(row)} entries, expected {n}")
        for j, cell in enumerate(row):
            dist[i, j] = _coerce_number(cell.strip(), f"row {i}, column {j}")
    return Instance(n=n, dist=dist, names=names)


def _parse_json(text: str) -> Instance:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"invalid json: {exc}") from None
    if not isinstance(obj, dict) or "n" not in obj:
        raise InstanceError("json instance must be an object with an 'n' key")
    n = obj["n"]
    if not isinstance(n, int):
        raise InstanceError(f"'n' must be an integer, got {n!r}")
    coords = obj.get("coords")
    if coords is not None:
        coords = np.asarray(coords, dtype=float)
    rounding = obj.get("rounding", "exact")
    if rounding not in ("exact", "nearest_int"):
        raise InstanceError(f"unknown rounding mode {rounding!r}")
    if "dist" in obj:
        dist = np.asarray(obj["dist"], dtype=float)
    elif coords is not None:
        dist = _euclidean_matrix(coords)
        if rounding == "nearest_int":
            dist = np.round(dist)
            np.fill_diagonal(dist, 0.0)
    else:
        raise InstanceError("json instance needs 'dist' or 'coords'")
    names = obj.get("names")
    inst = Instance(n=n, dist=dist, names=tuple(names) if names else None, coords=coords)
    if coords is not None and "dist" in obj:
        _check_coords_consistent(inst, rounding)
    return inst


def _euclidean_matrix(coords: np.ndarray) -> np.ndarray:
    delta = coords[:, None, :] - coords[None, :, :]
    return np.sqrt((delta ** 2).sum(axis=2))


def _check_coords_consistent(inst: Instance, rounding: str) -> None:
    expected = _euclidean_matrix(inst.coords)
    if rounding == "nearest_int":
        expected = np.round(expected)
        np.fill_diagonal(expected, 0.0)
    elif rounding != "exact":
        raise InstanceError(f"unknown rounding mode {rounding!r}")
    gap = np.abs(inst.dist - expected)
    if gap.max(initial=0.0) > COORD_TOL:
        i, j = np.unravel_index(np.argmax(gap), gap.shape)
        raise InstanceError(
            f"dist[{i}][{j}]={inst.dist[i, j]} disagrees with coords "
            f"(expected {expected[i, j]}, rounding={rounding})"
        )


def load_instance(source, fmt: Optional[str] = None) -> Instance:
    """Parse an instance from a path, string, bytes, or file-like object.

    ``fmt`` is one of ``matrix``, ``csv``, ``json``; when omitted it is
    inferred from a path's extension, falling back to content sniffing.
    """
    text = _read_source(source)
    if fmt is None:
        fmt = _guess_format(source, text)
    if fmt not in _FORMATS:
        raise InstanceError(f"unknown instance format {fmt!r}, expected one of {_FORMATS}")
    if fmt == "matrix":
        return _parse_matrix(text)
    if fmt == "csv":
        return _parse_csv(text)
    return _parse_json(text)


def _guess_format(source, text: str) -> str:
    if isinstance(source, (str, os.PathLike)):
        ext = os.path.splitext(str(source))[1].lower()
        if ext == ".json":
            return "json"
        if ext == ".csv":
            return "csv"
        if ext in (".txt", ".mat", ".dist"):
            return "matrix"
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return "json"
    first_line = stripped.splitlines()[0] if stripped.splitlines() else ""
    if "," in first_line:
        return "csv"
    return "matrix"


def emit_instance(inst: Instance, fmt: str = "json") -> str:
    """Serialize an instance; ``load_instance`` on the result round-trips."""
    if fmt == "matrix":
        lines = [str(inst.n)]
        for row in inst.dist:
            lines.append(" ".join(repr(float(x)) for x in row))
        return "\n".join(lines) + "\n"
    if fmt == "csv":
        lines = []
        if inst.names is not None:
            lines.append(",".join(inst.names))
        for row in inst.dist:
            lines.append(",".join(repr(float(x)) for x in row))
        return "\n".join(lines) + "\n"
    if fmt == "json":
        obj: dict = {"n": inst.n, "dist": [[float(x) for x in row] for row in inst.dist]}
        if inst.names is not None:
            obj["names"] = list(inst.names)
        if inst.coords is not None:
            obj["coords"] = [[float(x), float(y)] for x, y in inst.coords]
        return json.dumps(obj, indent=2) + "\n"
    raise InstanceError(f"unknown instance format {fmt!r}, expected one of {_FORMATS}")


def save_instance(inst: Instance, path: str, fmt: Optional[str] = None) -> None:
    if fmt is None:
        ext = os.path.splitext(path)[1].lower()
        fmt = {"": "matrix", ".txt": "matrix", ".mat": "matrix", ".dist": "matrix",
               ".csv": "csv", ".json": "json"}.get(ext, "matrix")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(emit_instance(inst, fmt))


def generate_instance(n: int, kind: str = "euclidean", seed: int = 0) -> Instance:
    """Deterministically generate a test instance.

    ``euclidean``: uniform points in [0, 1000]^2, exact distances.
    ``unit``: all off-diagonal distances 1.
    ``random_metric``: perturbed Euclidean distances repaired to a metric
    by shortest-path closure.
    """
    if n < 2 or n % 2 != 0:
        raise InstanceError(f"generator needs an even n >= 2, got {n}")
    if kind not in _GENERATOR_KINDS:
        raise InstanceError(f"unknown generator kind {kind!r}, expected one of {_GENERATOR_KINDS}")
    rng = np.random.default_rng(seed)
    if kind == "unit":
        dist = np.ones((n, n)) - np.eye(n)
        return Instance(n=n, dist=dist)
    coords = rng.uniform(0.0, 1000.0, size=(n, 2))
    base = _euclidean_matrix(coords)
    if kind == "euclidean":
        return Instance(n=n, dist=base, coords=coords)
    noise = rng.uniform(0.6, 1.6, size=(n, n))
    noise = np.triu(noise, 1)
    noise = noise + noise.T
    dist = base * noise
    np.fill_diagonal(dist, 0.0)
    dist = _shortest_path_closure(dist)
    return Instance(n=n, dist=dist)


def _shortest_path_closure(dist: np.ndarray) -> np.ndarray:
    closed = dist.copy()
    n = closed.shape[0]
    for k in range(n):
        closed = np.minimum(closed, closed[:, k : k + 1] + closed[k : k + 1, :])
    return closed


def check_metric(inst: Instance, tol: float = TRIANGLE_TOL) -> MetricReport:
    """Scan all triples for triangle-inequality violations beyond ``tol``."""
    d = inst.dist
    symmetric = bool(np.abs(d - d.T).max(initial=0.0) <= SYMMETRY_TOL)
    # violation[i, j, k] = d[i, k] - d[i, j] - d[j, k]
    excess = d[:, None, :] - d[:, :, None] - d.T[None, :, :]
    worst = float(excess.max())
    if worst <= tol:
        return MetricReport(symmetric=symmetric, triangle_ok=True)
    i, j, k = np.unravel_index(int(np.argmax(excess)), excess.shape)
    return MetricReport(
        symmetric=symmetric,
        triangle_ok=False,
        worst_violation=(int(i), int(j), int(k), worst),
    )
