"""Exact conversions between Max-Cut, Ising and QUBO.

Every conversion returns a :class:`TransformResult` whose objective identity
is::

    scale * source_objective(s) == offset + factor * target_objective(to_target(s))

for every source assignment ``s``. The homogenizing (gauge) vertex of a
generated graph is always vertex 0 and is pinned to spin ``+1``.

Binary variables follow ``x_i = 1`` iff the matching vertex sits on the
opposite side of the gauge vertex, which makes ``x^T Q x == -cut`` with
``Q`` the negated Laplacian minor.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from .graph import DimensionError, Graph, as_assignment, cut_value, laplacian


@dataclass(frozen=True, eq=False)
class QuboInstance:
    """Minimize ``x^T Q x`` over ``x in {0,1}^n``; ``Q`` symmetric integer."""

    Q: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.Q, dtype=np.int64)
        if q.ndim != 2 or q.shape[0] != q.shape[1]:
            raise DimensionError(f"Q must be square, got shape {q.shape}")
        if not np.array_equal(q, q.T):
            raise ValueError("Q must be symmetric")
        object.__setattr__(self, "Q", q)

    @property
    def n(self) -> int:
        return self.Q.shape[0]

    def energy(self, x) -> int:
        return qubo_value(self, x)


@dataclass(frozen=True, eq=False)
class IsingInstance:
    """``H = 1/2 sum_ij J_ij s_i s_j + sum_i h_i s_i`` with symmetric, hollow ``J``."""

    J: np.ndarray
    h: np.ndarray

    def __post_init__(self):
        J = np.asarray(self.J, dtype=np.int64)
        h = np.asarray(self.h, dtype=np.int64)
        if J.ndim != 2 or J.shape[0] != J.shape[1]:
            raise DimensionError(f"J must be square, got shape {J.shape}")
        if h.shape != (J.shape[0],):
            raise DimensionError(f"h has shape {h.shape}, expected ({J.shape[0]},)")
        if not np.array_equal(J, J.T):
            raise ValueError("J must be symmetric")
        if np.any(np.diag(J) != 0):
            raise ValueError("J must have a zero diagonal")
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "h", h)

    @property
    def n(self) -> int:
        return self.J.shape[0]

    def energy(self, s) -> int:
        return ising_energy(self, s)


@dataclass(frozen=True, eq=False)
class TransformResult:
    instance: Any
    offset: int
    factor: int
    scale: int
    to_target: Callable[[np.ndarray], np.ndarray]
    to_source: Callable[[np.ndarray], np.ndarray]

    @property
    def sense_flip(self) -> bool:
        """True when minimizing the source means maximizing the target."""
        return self.factor < 0

    def source_value(self, target_value: int) -> int:
        num = self.offset + self.factor * int(target_value)
        if num % self.scale:
            raise ArithmeticError(f"{num} is not divisible by scale {self.scale}")
        return num // self.scale


def qubo_value(q: QuboInstance, x) -> int:
    x = np.asarray(x, dtype=np.int64)
    if x.shape != (q.n,):
        raise DimensionError(f"x has shape {x.shape}, expected ({q.n},)")
    if np.any((x != 0) & (x != 1)):
        raise ValueError("QUBO variables must be 0 or 1")
    return int(x @ (q.Q @ x))


def ising_energy(inst: IsingInstance, s) -> int:
    """Exact integer energy.

    With ``J`` symmetric and hollow the double sum counts each pair twice, so
    the ``1/2`` cancels exactly against the upper triangle.
    """
    s = as_assignment(s, inst.n)
    return int(s @ (np.triu(inst.J, k=1) @ s)) + int(inst.h @ s)


def ising_to_maxcut(inst: IsingInstance) -> TransformResult:
    """Homogenize the field through a gauge vertex 0.

    Vertex ``k+1`` carries spin ``k``; the field ``h_k`` becomes the weight
    of edge ``(0, k+1)``. With ``W`` the total edge weight,
    ``H(s) == W - 2 * cut(g, (1, s))``.
    """
    n = inst.n
    a = np.zeros((n + 1, n + 1), dtype=np.int64)
    a[1:, 1:] = inst.J
    a[0, 1:] = inst.h
    a[1:, 0] = inst.h
    g = Graph.from_dense(a)

    def to_target(s):
        s = as_assignment(s, n)
        return np.concatenate([[1], s]).astype(np.int64)

    def to_source(y):
        y = as_assignment(y, n + 1)
        return y[0] * y[1:]

    return TransformResult(g, offset=g.total_weight(), factor=-2, scale=1,
                           to_target=to_target, to_source=to_source)


def maxcut_to_ising(g: Graph) -> TransformResult:
    """``J = A``, ``h = 0``; ``2 * cut(x) == W - H(x)`` on identical spins."""
    inst = IsingInstance(g.adjacency(), np.zeros(g.n, dtype=np.int64))

    def same(x):
        return as_assignment(x, g.n).copy()

    return TransformResult(inst, offset=g.total_weight(), factor=-1, scale=2,
                           to_target=same, to_source=same)


def qubo_to_maxcut(q: QuboInstance, scale: int = 1) -> TransformResult:
    """Graph on ``n + 1`` vertices with ``scale * x^T Q x == -cut``.

    Substituting ``x_k = (1 - y_0 y_{k+1}) / 2`` gives edge weights
    ``Q_kl`` between variable vertices and ``-rowsum_k(Q)`` to the gauge
    vertex; ``scale`` multiplies every weight (e.g. 4 keeps a quarter
    Laplacian integral).
    """
    if scale < 1:
        raise ValueError(f"scale must be a positive integer, got {scale}")
    n = q.n
    a = np.zeros((n + 1, n + 1), dtype=np.int64)
    off = q.Q.copy()
    np.fill_diagonal(off, 0)
    a[1:, 1:] = off
    a[0, 1:] = -q.Q.sum(axis=1)
    a[1:, 0] = a[0, 1:]
    g = Graph.from_dense(a * scale)

    def to_target(x):
        x = np.asarray(x, dtype=np.int64)
        if x.shape != (n,):
            raise DimensionError(f"x has shape {x.shape}, expected ({n},)")
        return np.concatenate([[1], 1 - 2 * x]).astype(np.int64)

    def to_source(y):
        y = as_assignment(y, n + 1)
        return (1 - y[0] * y[1:]) // 2

    return TransformResult(g, offset=0, factor=-1, scale=scale,
                           to_target=to_target, to_source=to_source)


def maxcut_to_qubo(g: Graph, fixed: int = 0) -> TransformResult:
    """Pin vertex ``fixed`` to ``+1`` and binary-encode the others.

    ``Q`` is the negated Laplacian with row and column ``fixed`` removed, so
    ``cut(y) == -x^T Q x`` where ``x_k = 1`` iff the k-th remaining vertex is
    on the other side from ``fixed``.
    """
    if g.n < 2:
        raise ValueError(f"need at least 2 vertices, got {g.n}")
    if not 0 <= fixed < g.n:
        raise IndexError(f"fixed vertex {fixed} out of range for n={g.n}")
    keep = np.array([v for v in range(g.n) if v != fixed], dtype=np.int64)
    lap = laplacian(g)
    q = QuboInstance(-lap[np.ix_(keep, keep)])

    def to_target(y):
        y = as_assignment(y, g.n)
        return (1 - y[fixed] * y[keep]) // 2

    def to_source(x):
        x = np.asarray(x, dtype=np.int64)
        if x.shape != (g.n - 1,):
            raise DimensionError(f"x has shape {x.shape}, expected ({g.n - 1},)")
        y = np.ones(g.n, dtype=np.int64)
        y[keep] = 1 - 2 * x
        return y

    return TransformResult(q, offset=0, factor=-1, scale=1,
                           to_target=to_target, to_source=to_source)


def objective(instance, assignment) -> int:
    """Evaluate the native objective of any supported instance type."""
    if isinstance(instance, Graph):
        return cut_value(instance, assignment)
    if isinstance(instance, IsingInstance):
        return ising_energy(instance, assignment)
    if isinstance(instance, QuboInstance):
        return qubo_value(instance, assignment)
    raise TypeError(f"unsupported instance type {type(instance).__name__}")
