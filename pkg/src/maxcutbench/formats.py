"""Readers and writers for the benchmark text formats.

* edge list (``.mc``, G-set): header ``n m``, then ``i j w`` with 1-indexed
  vertices
* Laplacian: dense whitespace-separated integer matrix, either ``L`` or
  ``L / 4``
* coupling dictionary: ``(i, j): w`` per line, 0-indexed lower triangle of
  a negated Laplacian (``-L/4`` with diagonal for be/bqp, ``-L`` without
  diagonal for G-set)
* cut vector: one spin per line, ``+-1`` or ``0/1``
* optimum value: a single integer
* sparse QUBO: header ``n m``, then ``i j q`` with 1-indexed ``i <= j``

All writers emit UTF-8 with LF line endings.
"""
from __future__ import annotations

import ast
import os
import re
from pathlib import Path
from typing import Iterator

import numpy as np

from .graph import Graph, laplacian
from .transforms import QuboInstance

PathLike = str | os.PathLike

SCALES = ("L", "quarter-L")
CONVENTIONS = ("be-bqp", "gset")


class FormatError(ValueError):
    """Malformed input; carries the source name and 1-based line/column."""

    def __init__(self, message: str, source: str = "<string>", line: int | None = None,
                 column: int | None = None):
        self.source = source
        self.line = line
        self.column = column
        where = source
        if line is not None:
            where += f":{line}"
            if column is not None:
                where += f":{column}"
        super().__init__(f"{where}: {message}")


def _read(path: PathLike) -> str:
    return Path(path).read_text(encoding="utf-8")


def _write(path: PathLike, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _records(text: str) -> Iterator[tuple[int, list[str]]]:
    for lineno, line in enumerate(text.splitlines(), start=1):
        toks = line.split()
        if toks:
            yield lineno, toks


def _int(tok: str, source: str, lineno: int, line_text: str | None = None) -> int:
    try:
        return int(tok)
    except ValueError:
        col = None
        if line_text is not None and tok in line_text:
            col = line_text.index(tok) + 1
        raise FormatError(f"expected an integer, got {tok!r}", source, lineno, col) from None


# -- edge lists ---------------------------------------------------------------

def _parse_header_and_triples(text: str, source: str, what: str):
    recs = list(_records(text))
    lines = text.splitlines()
    if not recs:
        raise FormatError(f"empty {what} file", source, 1)
    lineno, head = recs[0]
    if len(head) != 2:
        raise FormatError(f"header must be 'n m', got {len(head)} fields", source, lineno)
    n, m = (_int(t, source, lineno, lines[lineno - 1]) for t in head)
    if n < 0 or m < 0:
        raise FormatError("negative count in header", source, lineno)
    body = recs[1:]
    if len(body) != m:
        at = body[-1][0] if body else lineno
        raise FormatError(f"header declares {m} records, found {len(body)}", source, at)
    triples = []
    for lineno, toks in body:
        if len(toks) != 3:
            raise FormatError(f"expected 3 fields, got {len(toks)}", source, lineno)
        triples.append((lineno, [_int(t, source, lineno, lines[lineno - 1]) for t in toks]))
    return n, triples


def parse_edge_list(text: str, source: str = "<string>") -> Graph:
    n, triples = _parse_header_and_triples(text, source, "edge list")
    seen: set[tuple[int, int]] = set()
    edges = []
    for lineno, (i, j, w) in triples:
        if not (1 <= i <= n and 1 <= j <= n):
            raise FormatError(f"vertex index out of range [1, {n}]", source, lineno)
        if i == j:
            raise FormatError(f"self-loop on vertex {i}", source, lineno)
        key = (min(i, j), max(i, j))
        if key in seen:
            raise FormatError(f"duplicate edge {key[0]} {key[1]}", source, lineno)
        seen.add(key)
        edges.append((i - 1, j - 1, w))
    return Graph.from_edges(n, edges)


def read_edge_list(path: PathLike) -> Graph:
    return parse_edge_list(_read(path), str(path))


def format_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines += [f"{i + 1} {j + 1} {w}" for i, j, w in g.edges()]
    return "\n".join(lines) + "\n"


def write_edge_list(g: Graph, path: PathLike) -> None:
    _write(path, format_edge_list(g))


# -- Laplacian matrices -------------------------------------------------------

def laplacian_matrix(g: Graph, scale: str = "L") -> np.ndarray:
    if scale not in SCALES:
        raise ValueError(f"scale must be one of {SCALES}, got {scale!r}")
    lap = laplacian(g)
    if scale == "quarter-L":
        if np.any(lap % 4):
            raise ValueError("quarter-L needs every Laplacian entry divisible by 4")
        lap = lap // 4
    return lap


def format_matrix(a: np.ndarray) -> str:
    return "".join(" ".join(str(int(v)) for v in row) + "\n" for row in a)


def write_laplacian(g: Graph, path: PathLike, scale: str = "L") -> None:
    _write(path, format_matrix(laplacian_matrix(g, scale)))


def parse_laplacian(text: str, source: str = "<string>") -> np.ndarray:
    rows = []
    lines = text.splitlines()
    for lineno, toks in _records(text):
        rows.append([_int(t, source, lineno, lines[lineno - 1]) for t in toks])
    n = len(rows)
    for k, row in enumerate(rows):
        if len(row) != n:
            raise FormatError(f"row has {len(row)} entries, expected {n}", source, k + 1)
    lap = np.array(rows, dtype=np.int64).reshape(n, n)
    if not np.array_equal(lap, lap.T):
        i, j = np.argwhere(lap != lap.T)[0]
        raise FormatError(f"matrix is not symmetric at ({i}, {j})", source, int(i) + 1)
    sums = lap.sum(axis=1)
    if np.any(sums):
        i = int(np.flatnonzero(sums)[0])
        raise FormatError(f"row sums to {int(sums[i])}, expected 0", source, i + 1)
    return lap


def read_laplacian(path: PathLike) -> np.ndarray:
    return parse_laplacian(_read(path), str(path))


def graph_from_laplacian(lap: np.ndarray, scale: str = "L") -> Graph:
    lap = np.asarray(lap, dtype=np.int64)
    factor = 4 if scale == "quarter-L" else 1
    return Graph.from_dense(-lap * factor)


# -- coupling dictionaries ----------------------------------------------------

def coupling_dict(g: Graph, convention: str) -> dict[tuple[int, int], int]:
    """Lower triangle of the minimization matrix for ``convention``.

    ``be-bqp`` gives ``-L/4`` including every diagonal entry; ``gset`` gives
    the nonzero strict lower triangle of ``-L``.
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")
    if convention == "be-bqp":
        mat = -laplacian_matrix(g, "quarter-L")
    else:
        mat = -laplacian(g)
    out = {}
    for i in range(g.n):
        if convention == "be-bqp":
            out[(i, i)] = int(mat[i, i])
        for j in range(i):
            if mat[i, j]:
                out[(i, j)] = int(mat[i, j])
    return dict(sorted(out.items()))


def format_coupling_dict(d: dict[tuple[int, int], int]) -> str:
    return "".join(f"({i}, {j}): {w}\n" for (i, j), w in sorted(d.items()))


def write_coupling_dict(g: Graph, path: PathLike, convention: str) -> None:
    _write(path, format_coupling_dict(coupling_dict(g, convention)))


_ENTRY = re.compile(r"^\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*:\s*(-?\d+)\s*,?\s*$")


def parse_coupling_dict(text: str, convention: str,
                        source: str = "<string>") -> dict[tuple[int, int], int]:
    """Parse ``(i, j): w`` lines, or one brace-wrapped Python dict literal."""
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")
    stripped = text.strip()
    items: list[tuple[int, tuple[int, int], int]] = []
    if stripped.startswith("{"):
        try:
            literal = ast.literal_eval(stripped)
        except (ValueError, SyntaxError) as exc:
            raise FormatError(f"bad dictionary literal: {exc}", source, 1) from None
        if not isinstance(literal, dict):
            raise FormatError("expected a dictionary literal", source, 1)
        for key, w in literal.items():
            if (not isinstance(key, tuple) or len(key) != 2
                    or not all(isinstance(k, int) for k in key) or not isinstance(w, int)):
                raise FormatError(f"bad entry {key!r}: {w!r}", source, 1)
            items.append((1, key, w))
    else:
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            mt = _ENTRY.match(line.strip())
            if mt is None:
                col = len(line) - len(line.lstrip()) + 1
                raise FormatError("expected '(i, j): w'", source, lineno, col)
            i, j, w = (int(v) for v in mt.groups())
            items.append((lineno, (i, j), w))
    out: dict[tuple[int, int], int] = {}
    for lineno, (i, j), w in items:
        if i < 0 or j < 0:
            raise FormatError(f"negative index in key ({i}, {j})", source, lineno)
        if i < j:
            raise FormatError(f"upper-triangular key ({i}, {j})", source, lineno)
        if i == j and convention == "gset":
            raise FormatError(f"diagonal key ({i}, {j}) under gset convention", source, lineno)
        if (i, j) in out:
            raise FormatError(f"duplicate key ({i}, {j})", source, lineno)
        out[(i, j)] = w
    return dict(sorted(out.items()))


def read_coupling_dict(path: PathLike, convention: str) -> dict[tuple[int, int], int]:
    return parse_coupling_dict(_read(path), convention, str(path))


def graph_from_coupling_dict(d: dict[tuple[int, int], int], convention: str,
                             n: int | None = None) -> Graph:
    """Invert :func:`coupling_dict`; ``n`` pads trailing isolated vertices."""
    size = 1 + max((max(k) for k in d), default=-1)
    n = size if n is None else n
    if n < size:
        raise ValueError(f"n={n} too small for index {size - 1}")
    factor = 4 if convention == "be-bqp" else 1
    edges = [(i, j, w * factor) for (i, j), w in d.items() if i != j]
    return Graph.from_edges(n, edges)


# -- cut vectors and values ---------------------------------------------------

def parse_cut_vector(text: str, n: int | None = None, source: str = "<string>") -> np.ndarray:
    vals = []
    lines = text.splitlines()
    for lineno, toks in _records(text):
        for t in toks:
            v = _int(t, source, lineno, lines[lineno - 1])
            if v not in (-1, 0, 1):
                raise FormatError(f"cut entry must be -1, 0 or 1, got {v}", source, lineno)
            vals.append(v)
    x = np.array(vals, dtype=np.int64)
    if np.any(x == 0):
        if np.any(x == -1):
            raise FormatError("cut vector mixes 0 and -1 entries", source)
        x = 2 * x - 1
    if n is not None and x.shape[0] != n:
        raise FormatError(f"cut vector has {x.shape[0]} entries, expected {n}", source)
    return x


def read_cut_vector(path: PathLike, n: int | None = None) -> np.ndarray:
    return parse_cut_vector(_read(path), n, str(path))


def write_cut_vector(x, path: PathLike) -> None:
    _write(path, "".join(f"{int(v)}\n" for v in x))


def parse_opt_value(text: str, source: str = "<string>") -> int:
    recs = list(_records(text))
    if len(recs) != 1 or len(recs[0][1]) != 1:
        raise FormatError("expected a single integer", source, recs[0][0] if recs else 1)
    lineno, (tok,) = recs[0]
    return _int(tok, source, lineno)


def read_opt_value(path: PathLike) -> int:
    return parse_opt_value(_read(path), str(path))


def write_opt_value(value: int, path: PathLike) -> None:
    _write(path, f"{int(value)}\n")


# -- sparse QUBO --------------------------------------------------------------

def parse_qubo_sparse(text: str, source: str = "<string>") -> QuboInstance:
    """``n m`` header then ``i j q`` entries setting ``Q_ij = Q_ji = q``."""
    n, triples = _parse_header_and_triples(text, source, "QUBO")
    q = np.zeros((n, n), dtype=np.int64)
    seen: set[tuple[int, int]] = set()
    for lineno, (i, j, w) in triples:
        if not (1 <= i <= n and 1 <= j <= n):
            raise FormatError(f"index out of range [1, {n}]", source, lineno)
        key = (min(i, j), max(i, j))
        if key in seen:
            raise FormatError(f"duplicate entry {key[0]} {key[1]}", source, lineno)
        seen.add(key)
        q[i - 1, j - 1] = w
        q[j - 1, i - 1] = w
    return QuboInstance(q)


def read_qubo_sparse(path: PathLike) -> QuboInstance:
    return parse_qubo_sparse(_read(path), str(path))


def format_qubo_sparse(q: QuboInstance) -> str:
    iu, ju = np.nonzero(np.triu(q.Q))
    lines = [f"{q.n} {iu.shape[0]}"]
    lines += [f"{i + 1} {j + 1} {q.Q[i, j]}" for i, j in zip(iu.tolist(), ju.tolist())]
    return "\n".join(lines) + "\n"


def write_qubo_sparse(q: QuboInstance, path: PathLike) -> None:
    _write(path, format_qubo_sparse(q))
