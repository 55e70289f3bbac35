"""Finite endofunctions: total self-maps of {0, ..., n-1}.

An endofunction is stored as a lookup table.  The module provides iteration,
preimage fibers (first and second order), and the cycle/tree decomposition of
the functional graph.  Everything here is exact, immutable and pure, so values
are safe to share across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional


class EndoFormatError(ValueError):
    """Raised when an endofunction JSON document is malformed.

    The ``field`` attribute names the offending key.
    """

    def __init__(self, message: str, field_name: str):
        super().__init__(message)
        self.field = field_name


@dataclass(frozen=True)
class Endofunction:
    """A total self-map of {0, ..., n-1}, given by its table: table[i] = f(i).

    Optional ``labels`` attach human-readable point names (used by the corpus
    files so bundled reference examples stay auditable); they never affect equality.
    """

    table: tuple[int, ...]
    labels: Optional[tuple[str, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.table) == 0:
            raise ValueError("endofunction needs at least one point")
        n = len(self.table)
        for i, v in enumerate(self.table):
            if not isinstance(v, int) or not 0 <= v < n:
                raise ValueError(f"table entry {i} = {v!r} outside [0, {n})")
        if self.labels is not None and len(self.labels) != n:
            raise ValueError("labels length must equal table length")

    @property
    def size(self) -> int:
        return len(self.table)

    def __call__(self, x: int) -> int:
        return self.table[x]

    @staticmethod
    def identity(n: int) -> "Endofunction":
        return Endofunction(tuple(range(n)))

    @staticmethod
    def constant(n: int, target: int) -> "Endofunction":
        return Endofunction((target,) * n)

    def compose(self, other: "Endofunction") -> "Endofunction":
        """self after other: x -> self(other(x))."""
        if self.size != other.size:
            raise ValueError("size mismatch in composition")
        t = self.table
        return Endofunction(tuple(t[v] for v in other.table))

    def index_of_label(self, label: str) -> int:
        if self.labels is None:
            raise ValueError("endofunction carries no labels")
        return self.labels.index(label)


@dataclass(frozen=True)
class FiberSet:
    """A preimage set: sorted, duplicate-free point indices."""

    elements: tuple[int, ...]

    def __post_init__(self):
        if list(self.elements) != sorted(set(self.elements)):
            raise ValueError("fiber elements must be sorted and distinct")

    def __contains__(self, x: int) -> bool:
        return x in self.elements

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)


def iterate(f: Endofunction, k: int) -> Endofunction:
    """k-th iterate of f; k = 0 gives the identity.

    Uses binary composition so large k stays cheap.
    """
    if k < 0:
        raise ValueError("iteration count must be nonnegative")
    result = Endofunction.identity(f.size)
    base = f
    while k:
        if k & 1:
            result = base.compose(result)
        base = base.compose(base)
        k >>= 1
    return result


def fiber(f: Endofunction, x: int) -> FiberSet:
    """The set {y : f(y) = x}."""
    if not 0 <= x < f.size:
        raise ValueError(f"point {x} outside [0, {f.size})")
    return FiberSet(tuple(y for y, v in enumerate(f.table) if v == x))


def fiber2(f: Endofunction, x: int) -> FiberSet:
    """The second-order fiber {y : f(f(y)) = x}."""
    if not 0 <= x < f.size:
        raise ValueError(f"point {x} outside [0, {f.size})")
    t = f.table
    return FiberSet(tuple(y for y in range(f.size) if t[t[y]] == x))


def fiber_sizes(f: Endofunction) -> list[int]:
    """Histogram of all first-order fibers in one pass."""
    counts = [0] * f.size
    for v in f.table:
        counts[v] += 1
    return counts


@dataclass(frozen=True)
class Decomposition:
    """Cycle/tree structure of a functional graph.

    ``cycles`` lists each cycle as a tuple of nodes in traversal order;
    ``depth[i]`` is the number of steps from node i to the first cycle node
    (0 for cycle nodes themselves).
    """

    cycles: tuple[tuple[int, ...], ...]
    depth: tuple[int, ...]

    @property
    def cycle_lengths(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.cycles)

    def on_cycle(self, x: int) -> bool:
        return self.depth[x] == 0


def decompose(f: Endofunction) -> Decomposition:
    """Split nodes into cycles plus trees hanging off them.

    Fully iterative (no recursion), so tables with millions of points are
    fine.  Every walk is O(path length); total O(n).
    """
    n = f.size
    t = f.table
    state = [0] * n          # 0 unseen, 1 on current walk, 2 finalized
    depth = [-1] * n
    walk_pos = [-1] * n      # position within the current walk
    cycles: list[tuple[int, ...]] = []

    for start in range(n):
        if state[start] != 0:
            continue
        path = []
        x = start
        while state[x] == 0:
            state[x] = 1
            walk_pos[x] = len(path)
            path.append(x)
            x = t[x]
        if state[x] == 1:
            # the walk closed a new cycle; nodes before the entry form a tail
            cstart = walk_pos[x]
            cycle = tuple(path[cstart:])
            cycles.append(cycle)
            for node in cycle:
                depth[node] = 0
            tail_end, base = cstart, 0
        else:
            # the walk ran into already-finalized territory at x
            tail_end, base = len(path), depth[x]
        for i in range(tail_end):
            depth[path[i]] = base + (tail_end - i)
        for node in path:
            state[node] = 2
            walk_pos[node] = -1

    return Decomposition(tuple(cycles), tuple(depth))


def to_json_dict(f: Endofunction) -> dict:
    doc = {"n": f.size, "map": list(f.table)}
    if f.labels is not None:
        doc["labels"] = list(f.labels)
    return doc


def from_json_dict(doc: dict) -> Endofunction:
    if not isinstance(doc, dict):
        raise EndoFormatError("endofunction document must be an object", "<root>")
    if "n" not in doc:
        raise EndoFormatError("missing required key 'n'", "n")
    if "map" not in doc:
        raise EndoFormatError("missing required key 'map'", "map")
    n = doc["n"]
    table = doc["map"]
    if not isinstance(n, int) or n <= 0:
        raise EndoFormatError("'n' must be a positive integer", "n")
    if not isinstance(table, list) or len(table) != n:
        raise EndoFormatError("'map' must be a list of length n", "map")
    for i, v in enumerate(table):
        if not isinstance(v, int) or not 0 <= v < n:
            raise EndoFormatError(f"map[{i}] = {v!r} outside [0, {n})", "map")
    labels = doc.get("labels")
    if labels is not None:
        if (not isinstance(labels, list) or len(labels) != n
                or not all(isinstance(s, str) for s in labels)):
            raise EndoFormatError("'labels' must be a list of n strings", "labels")
        labels = tuple(labels)
    return Endofunction(tuple(table), labels)


def load(path) -> Endofunction:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise EndoFormatError(f"not valid JSON: {exc}", "<document>") from exc
    return from_json_dict(doc)
