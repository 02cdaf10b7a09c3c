"""Vertex-by-vertex enumeration of tube polygons.

This is the independent oracle for the column engine.  Each polygon is
rooted at its lexicographically smallest vertex, which always lies in
the plane ``x = 0``; the walk from the root only visits larger vertices
and the two traversal directions are told apart by comparing the second
and last vertices.

The walk frontier can be serialised to a checkpoint file (magic header
``TKCHK1``) when a node budget runs out, and resumed later.
"""
from __future__ import annotations

import json
import os
import struct
import zlib
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterator

from ..errors import CheckpointError, ResourceBudgetExceeded
from ..lattice import Tube

MAGIC = b"TKCHK1"
CHECKPOINT_VERSION = 1
DIRS = ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1))

Vertex = tuple[int, int, int]


@dataclass
class CountTable:
    """Exact polygon counts ``p_n(s)`` keyed by ``(n, s)``."""

    tube: Tube
    max_n: int
    entries: dict[tuple[int, int], int] = field(default_factory=dict)

    def get(self, n: int, s: int) -> int:
        return self.entries.get((n, s), 0)

    def total(self, n: int) -> int:
        return sum(c for (m, _), c in self.entries.items() if m == n)

    def spans(self, n: int) -> dict[int, int]:
        return {s: c for (m, s), c in sorted(self.entries.items()) if m == n}

    def __eq__(self, other) -> bool:
        if not isinstance(other, CountTable):
            return NotImplemented
        mine = {k: v for k, v in self.entries.items() if v}
        theirs = {k: v for k, v in other.entries.items() if v}
        return self.tube == other.tube and self.max_n == other.max_n and mine == theirs


@dataclass
class _Frontier:
    root: int
    path: list[Vertex]
    choice: list[int]
    counts: Counter
    nodes: int


def write_checkpoint(path: str, tube: Tube, max_n: int, fr: _Frontier) -> None:
    payload = {
        "tube": [tube.L, tube.M],
        "max_n": max_n,
        "root": fr.root,
        "path": fr.path,
        "choice": fr.choice,
        "counts": [[n, s, c] for (n, s), c in fr.counts.items()],
        "nodes": fr.nodes,
    }
    blob = zlib.compress(json.dumps(payload).encode())
    tmp = path + ".tmp"
    with open(tmp, "wb") as fh:
        fh.write(MAGIC + struct.pack("<I", CHECKPOINT_VERSION) + blob)
    os.replace(tmp, path)


def read_checkpoint(path: str) -> tuple[Tube, int, _Frontier]:
    with open(path, "rb") as fh:
        raw = fh.read()
    if raw[:6] != MAGIC:
        raise CheckpointError(f"{path}: missing TKCHK1 header")
    (version,) = struct.unpack("<I", raw[6:10])
    if version != CHECKPOINT_VERSION:
        raise CheckpointError(f"{path}: unsupported checkpoint version {version}")
    try:
        d = json.loads(zlib.decompress(raw[10:]))
    except (zlib.error, ValueError) as exc:
        raise CheckpointError(f"{path}: corrupt payload") from exc
    fr = _Frontier(
        d["root"],
        [tuple(v) for v in d["path"]],
        list(d["choice"]),
        Counter({(n, s): c for n, s, c in d["counts"]}),
        d["nodes"],
    )
    return Tube(*d["tube"]), d["max_n"], fr


def _walk(tube: Tube, max_n: int, fr: _Frontier, on_polygon: Callable[[list[Vertex]], None],
          node_limit: int | None, checkpoint: str | None, root_stop: int | None = None) -> None:
    """Resume the rooted walk from ``fr`` until exhaustion."""
    L, M = tube.L, tube.M
    xmax = max_n // 2
    roots = [(0, y, z) for y in range(L + 1) for z in range(M + 1)]
    budget = None if node_limit is None else fr.nodes + node_limit
    stop = len(roots) if root_stop is None else root_stop
    while fr.root < stop:
        root = roots[fr.root]
        if not fr.path:
            fr.path, fr.choice = [root], [0]
        path, choice = fr.path, fr.choice
        onpath = set(path)
        while choice:
            if budget is not None and fr.nodes >= budget:
                if checkpoint:
                    write_checkpoint(checkpoint, tube, max_n, fr)
                raise ResourceBudgetExceeded(
                    f"node budget {node_limit} exhausted"
                    + (f"; frontier saved to {checkpoint}" if checkpoint else ""))
            k = choice[-1]
            if k == len(DIRS):
                choice.pop()
                onpath.discard(path.pop())
                continue
            choice[-1] = k + 1
            cur = path[-1]
            d = DIRS[k]
            w = (cur[0] + d[0], cur[1] + d[1], cur[2] + d[2])
            if not (0 <= w[0] <= xmax and 0 <= w[1] <= L and 0 <= w[2] <= M):
                continue
            steps = len(path)
            if w == root:
                if steps >= 4 and path[1] < path[-1]:
                    on_polygon(path)
                continue
            if w in onpath or w < root:
                continue
            dist = abs(w[0] - root[0]) + abs(w[1] - root[1]) + abs(w[2] - root[2])
            if steps + dist > max_n:
                continue
            fr.nodes += 1
            path.append(w)
            onpath.add(w)
            choice.append(0)
        fr.root += 1
        fr.path, fr.choice = [], []


def dfs_count_polygons(tube: Tube, max_n: int, node_limit: int | None = None,
                       checkpoint: str | None = None, resume: str | None = None) -> CountTable:
    """Count polygons with at most ``max_n`` edges by direct search.

    Parameters
    ----------
    node_limit : int, optional
        Abort with :class:`ResourceBudgetExceeded` after this many walk
        extensions (counted from the start, or from the resume point).
    checkpoint : str, optional
        Where to save the frontier when the budget runs out.
    resume : str, optional
        Continue from a checkpoint written for the same tube and ``max_n``.
    """
    if resume:
        t2, n2, fr = read_checkpoint(resume)
        if t2 != tube or n2 != max_n:
            raise CheckpointError("checkpoint was written for a different run")
    else:
        fr = _Frontier(0, [], [], Counter(), 0)

    def visit(path):
        fr.counts[(len(path), max(v[0] for v in path))] += 1

    _walk(tube, max_n, fr, visit, node_limit, checkpoint)
    return CountTable(tube, max_n, dict(fr.counts))


def dfs_polygons(tube: Tube, max_n: int) -> Iterator[list[Vertex]]:
    """Yield every polygon with at most ``max_n`` edges as a vertex list."""
    for r in range((tube.L + 1) * (tube.M + 1)):
        found: list = []
        _walk(tube, max_n, _Frontier(r, [], [], Counter(), 0), lambda p: found.append(list(p)),
              None, None, root_stop=r + 1)
        yield from found
