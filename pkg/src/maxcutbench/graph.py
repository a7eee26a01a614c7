"""Weighted simple graphs, cut evaluation and Laplacians.

Vertices are 0-indexed. Spin assignments are int64 arrays with entries in
{-1, +1}; ``x[i] == -1`` puts vertex ``i`` on the first side of the cut.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np


class DimensionError(ValueError):
    """Raised when an assignment or matrix does not match the instance size."""


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple undirected graph with integer edge weights.

    Edges are stored canonically (``i < j``, sorted, no zero weights) together
    with a CSR adjacency (``indptr``/``nbr``/``nbr_w``) for O(deg) scans.
    """

    n: int
    src: np.ndarray
    dst: np.ndarray
    weight: np.ndarray
    indptr: np.ndarray = field(repr=False)
    nbr: np.ndarray = field(repr=False)
    nbr_w: np.ndarray = field(repr=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int, int]]) -> "Graph":
        """Build a graph from ``(i, j, w)`` triples in either orientation.

        Zero-weight edges are dropped. Self-loops, duplicate pairs and
        out-of-range indices raise ``ValueError``.
        """
        n = int(n)
        if n < 0:
            raise ValueError(f"vertex count must be non-negative, got {n}")
        rows = [(int(i), int(j), int(w)) for i, j, w in edges]
        seen: set[tuple[int, int]] = set()
        canon = []
        for i, j, w in rows:
            if i == j:
                raise ValueError(f"self-loop on vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) out of range for n={n}")
            a, b = (i, j) if i < j else (j, i)
            if (a, b) in seen:
                raise ValueError(f"duplicate edge ({a}, {b})")
            seen.add((a, b))
            if w != 0:
                canon.append((a, b, w))
        canon.sort()
        arr = np.array(canon, dtype=np.int64).reshape(-1, 3)
        return cls._from_arrays(n, arr[:, 0], arr[:, 1], arr[:, 2])

    @classmethod
    def from_dense(cls, a: np.ndarray) -> "Graph":
        """Build a graph from a symmetric integer weight matrix (diagonal ignored)."""
        a = np.asarray(a)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionError(f"expected a square matrix, got shape {a.shape}")
        if not np.array_equal(a, a.T):
            raise ValueError("weight matrix is not symmetric")
        i, j = np.nonzero(np.triu(a, k=1))
        return cls._from_arrays(a.shape[0], i, j, a[i, j])

    @classmethod
    def _from_arrays(cls, n, src, dst, weight) -> "Graph":
        src = np.ascontiguousarray(src, dtype=np.int64)
        dst = np.ascontiguousarray(dst, dtype=np.int64)
        weight = np.ascontiguousarray(weight, dtype=np.int64)
        # both directions, grouped by source vertex
        heads = np.concatenate([src, dst])
        tails = np.concatenate([dst, src])
        ws = np.concatenate([weight, weight])
        order = np.lexsort((tails, heads))
        counts = np.bincount(heads, minlength=n) if n else np.zeros(0, np.int64)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        for arr in (src, dst, weight):
            arr.setflags(write=False)
        nbr = np.ascontiguousarray(tails[order])
        nbr_w = np.ascontiguousarray(ws[order])
        for arr in (indptr, nbr, nbr_w):
            arr.setflags(write=False)
        return cls(n, src, dst, weight, indptr, nbr, nbr_w)

    @property
    def m(self) -> int:
        return int(self.src.shape[0])

    def edges(self) -> list[tuple[int, int, int]]:
        return list(zip(self.src.tolist(), self.dst.tolist(), self.weight.tolist()))

    def neighbors(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self.indptr[i], self.indptr[i + 1]
        return self.nbr[lo:hi], self.nbr_w[lo:hi]

    def total_weight(self) -> int:
        return int(self.weight.sum())

    def positive_weight(self) -> int:
        return int(self.weight[self.weight > 0].sum())

    def weighted_degree(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        np.add.at(deg, self.src, self.weight)
        np.add.at(deg, self.dst, self.weight)
        return deg

    def adjacency(self) -> np.ndarray:
        """Dense weight matrix; meant for small graphs and tests."""
        a = np.zeros((self.n, self.n), dtype=np.int64)
        a[self.src, self.dst] = self.weight
        a[self.dst, self.src] = self.weight
        return a

    def scaled(self, factor: int) -> "Graph":
        return Graph._from_arrays(self.n, self.src, self.dst, self.weight * int(factor))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.src, other.src)
            and np.array_equal(self.dst, other.dst)
            and np.array_equal(self.weight, other.weight)
        )

    __hash__ = None  # type: ignore[assignment]


def as_assignment(x, n: int | None = None) -> np.ndarray:
    """Validate a spin vector and return it as an int64 array."""
    arr = np.asarray(x)
    if arr.ndim != 1:
        raise DimensionError(f"assignment must be one-dimensional, got shape {arr.shape}")
    if n is not None and arr.shape[0] != n:
        raise DimensionError(f"assignment has length {arr.shape[0]}, expected {n}")
    arr = arr.astype(np.int64)
    if not np.all(np.abs(arr) == 1):
        raise ValueError("assignment entries must be -1 or +1")
    return arr


def flip(x: np.ndarray, i: int) -> np.ndarray:
    y = np.array(x, dtype=np.int64, copy=True)
    y[i] = -y[i]
    return y


def cut_value(g: Graph, x) -> int:
    """Total weight of edges whose endpoints lie on opposite sides."""
    x = as_assignment(x, g.n)
    crossing = x[g.src] != x[g.dst]
    return int(g.weight[crossing].sum(dtype=np.int64))


def cut_delta(g: Graph, x, i: int) -> int:
    """Change in cut value if vertex ``i`` is flipped, in O(deg(i))."""
    x = np.asarray(x)
    if x.shape[0] != g.n:
        raise DimensionError(f"assignment has length {x.shape[0]}, expected {g.n}")
    if not 0 <= i < g.n:
        raise IndexError(f"vertex {i} out of range for n={g.n}")
    nb, w = g.neighbors(i)
    return int(x[i]) * int(np.dot(w, x[nb]))


def laplacian(g: Graph) -> np.ndarray:
    """Dense Laplacian ``Diag(A e) - A`` as an int64 matrix."""
    lap = -g.adjacency()
    lap[np.diag_indices(g.n)] = g.weighted_degree()
    return lap


def quad_form(lap: np.ndarray, x) -> int:
    """Exact ``x^T L x`` for an integer matrix and spin vector."""
    lap = np.asarray(lap, dtype=np.int64)
    if lap.ndim != 2 or lap.shape[0] != lap.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {lap.shape}")
    x = as_assignment(x, lap.shape[0])
    return int(x @ (lap @ x))


def random_graph(
    n: int,
    rng: np.random.Generator,
    density: float = 0.5,
    low: int = -10,
    high: int = 10,
) -> Graph:
    """Erdos-Renyi style graph with uniform integer weights in ``[low, high]``."""
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.shape[0]) < density
    w = rng.integers(low, high + 1, size=int(keep.sum()))
    return Graph._from_arrays(n, iu[keep][w != 0], ju[keep][w != 0], w[w != 0])
