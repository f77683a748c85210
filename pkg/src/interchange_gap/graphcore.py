"""Weighted graphs, Laplacians, Kron (Schur) reduction and second eigenvalues."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from .exactla import RationalMatrix, cluster_sorted, fraction_to_str, solve, sym_eig
from .permgroup import TranspositionSum

DEFAULT_TOL = 1e-9


class GraphError(ValueError):
    pass


class GraphParseError(GraphError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


class WeightedGraph:
    """Vertices 1..n with symmetric nonnegative rational edge weights.

    Only pairs i < j with positive weight are stored; ``weight(i, j)`` returns
    0 for absent pairs.
    """

    __slots__ = ("n", "_w")

    def __init__(self, n: int, weights: Mapping[tuple[int, int], object] | None = None):
        if not isinstance(n, int) or n < 2:
            raise GraphError(f"vertex count must be an integer >= 2, got {n!r}")
        w: dict[tuple[int, int], Fraction] = {}
        for (i, j), c in (weights or {}).items():
            if i == j:
                raise GraphError(f"self-loop at vertex {i}")
            if not (1 <= i <= n and 1 <= j <= n):
                raise GraphError(f"edge ({i},{j}) outside 1..{n}")
            key = (min(i, j), max(i, j))
            if key in w:
                raise GraphError(f"duplicate edge {key}")
            c = _as_fraction(c)
            if c < 0:
                raise GraphError(f"negative weight {c} on edge {key}")
            w[key] = c
        self.n = n
        self._w = {k: c for k, c in sorted(w.items()) if c}

    @property
    def weights(self) -> dict[tuple[int, int], Fraction]:
        return dict(self._w)

    def weight(self, i: int, j: int) -> Fraction:
        if i == j:
            raise GraphError("c_ii is undefined")
        return self._w.get((min(i, j), max(i, j)), Fraction(0))

    def edges(self) -> list[tuple[int, int]]:
        return list(self._w)

    def degree(self, v: int) -> Fraction:
        return sum((c for (i, j), c in self._w.items() if v in (i, j)), Fraction(0))

    def neighbors(self, v: int) -> list[int]:
        return sorted(j if i == v else i for (i, j) in self._w if v in (i, j))

    def total_weight(self) -> Fraction:
        return sum(self._w.values(), Fraction(0))

    def scaled(self, k) -> "WeightedGraph":
        k = _as_fraction(k)
        return WeightedGraph(self.n, {e: k * c for e, c in self._w.items()})

    def relabel(self, mapping: Mapping[int, int]) -> "WeightedGraph":
        """Graph with vertex i renamed mapping[i] (mapping must be a bijection of 1..n)."""
        return WeightedGraph(self.n, {(mapping[i], mapping[j]): c for (i, j), c in self._w.items()})

    def interchange_operator(self) -> TranspositionSum:
        return TranspositionSum(self.n, self._w)

    def __eq__(self, other) -> bool:
        return isinstance(other, WeightedGraph) and self.n == other.n and self._w == other._w

    def __hash__(self):
        return hash((self.n, tuple(self._w.items())))

    def __repr__(self) -> str:
        body = ", ".join(f"{i}-{j}:{fraction_to_str(c)}" for (i, j), c in self._w.items())
        return f"WeightedGraph(n={self.n}, {{{body}}})"

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [[i, j, fraction_to_str(c)] for (i, j), c in self._w.items()]}


def is_connected(g: WeightedGraph) -> bool:
    adj: dict[int, list[int]] = {v: [] for v in range(1, g.n + 1)}
    for i, j in g.edges():
        adj[i].append(j)
        adj[j].append(i)
    seen = {1}
    stack = [1]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == g.n


def laplacian_from_weights(n: int, weights: Mapping[tuple[int, int], object]) -> RationalMatrix:
    """Laplacian of an arbitrary symmetric weight table (signs are not checked)."""
    rows = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), c in weights.items():
        c = _as_fraction(c)
        a, b = i - 1, j - 1
        rows[a][b] -= c
        rows[b][a] -= c
        rows[a][a] += c
        rows[b][b] += c
    return RationalMatrix(rows, n)


def laplacian(g: WeightedGraph) -> RationalMatrix:
    return laplacian_from_weights(g.n, g.weights)


def schur_complement(m: RationalMatrix, k: int) -> RationalMatrix:
    """Schur complement of the (k,k) entry (0-based) of a square matrix."""
    piv = m[k, k]
    if not piv:
        raise GraphError("zero pivot in Schur complement")
    keep = [i for i in range(m.rows) if i != k]
    return RationalMatrix(
        ([m[i, j] - m[i, k] * m[k, j] / piv for j in keep] for i in keep), len(keep)
    )


@dataclass(frozen=True)
class Reduction:
    """Result of eliminating vertex ``removed``; ``index_map[old] = new``."""

    graph: WeightedGraph
    removed: int
    index_map: dict[int, int]


def schur_reduce_with_map(g: WeightedGraph, v: int) -> Reduction:
    if not 1 <= v <= g.n:
        raise GraphError(f"vertex {v} outside 1..{g.n}")
    if g.n < 3:
        raise GraphError("reduction needs at least 3 vertices")
    s = g.degree(v)
    if s == 0:
        raise GraphError(f"vertex {v} has zero total incident weight")
    others = [i for i in range(1, g.n + 1) if i != v]
    index_map = {old: new for new, old in enumerate(others, start=1)}
    new_w: dict[tuple[int, int], Fraction] = {}
    for a in range(len(others)):
        for b in range(a + 1, len(others)):
            i, j = others[a], others[b]
            c = g.weight(i, j) + g.weight(i, v) * g.weight(j, v) / s
            if c:
                new_w[(a + 1, b + 1)] = c
    h = WeightedGraph(g.n - 1, new_w)
    if laplacian(h) != schur_complement(laplacian(g), v - 1):
        raise AssertionError("reduced Laplacian differs from the Schur complement")
    return Reduction(h, v, index_map)


def schur_reduce(g: WeightedGraph, v: int) -> WeightedGraph:
    """Kron reduction at v: c~_ij = c_ij + c_iv c_jv / s with s the weighted degree of v."""
    return schur_reduce_with_map(g, v).graph


def effective_conductance(g: WeightedGraph, i: int, j: int) -> Fraction:
    """Exact 1/R_ij from the grounded Laplacian (vertex j grounded)."""
    lap = laplacian(g)
    keep = [k for k in range(g.n) if k != j - 1]
    red = lap.submatrix(keep, keep)
    rhs = [Fraction(int(k == i - 1)) for k in keep]
    x = solve(red, rhs)
    r = x[keep.index(i - 1)]
    return 1 / r


@dataclass(frozen=True)
class Lambda2:
    value: float
    eigvectors: np.ndarray  # orthonormal columns spanning the eigenspace
    multiplicity: int
    spectrum: np.ndarray


def lambda2(g: WeightedGraph, tol: float = DEFAULT_TOL) -> Lambda2:
    if not is_connected(g):
        raise GraphError("graph is disconnected; the second eigenvalue is 0 and the gap is undefined")
    spec = sym_eig(laplacian(g), tol)
    vals = spec.eigenvalues
    clusters = cluster_sorted(vals, tol, float(vals[-1] - vals[0]))
    # the zero eigenvalue is simple for a connected graph; lambda_2 sits at index 1
    lo, hi = next((a, b) for a, b in clusters if a <= 1 < b)
    lo = max(lo, 1)
    vecs = spec.eigenvectors[:, lo:hi]
    return Lambda2(float(np.mean(vals[lo:hi])), vecs, hi - lo, vals)


@dataclass(frozen=True)
class EigcompReport:
    lambda2_reduced: float
    lambda2_original: float
    agree: bool
    certificate: np.ndarray | None  # columns: 2nd eigenvectors of L_G vanishing at v, restricted to H
    index_map: dict[int, int]
    tol: float

    def to_json(self) -> dict:
        return {
            "lambda2_reduced": self.lambda2_reduced,
            "lambda2_original": self.lambda2_original,
            "agree": self.agree,
            "certificate": None if self.certificate is None else self.certificate.T.tolist(),
            "index_map": {str(k): v for k, v in self.index_map.items()},
            "tol": self.tol,
        }


def eigcomp_check(g: WeightedGraph, v: int, tol: float = DEFAULT_TOL) -> EigcompReport:
    """Compare the second eigenvalues of G and of its Kron reduction at v.

    The reduced value is never smaller (up to tol).  When the two agree the
    report carries every second eigenvector of L_G that vanishes at v, given
    as vectors on the remaining vertices.
    """
    red = schur_reduce_with_map(g, v)
    lg = lambda2(g, tol)
    lh = lambda2(red.graph, tol)
    scale = max(1.0, abs(lg.value))
    if lh.value < lg.value - tol * scale:
        raise AssertionError(f"reduced gap {lh.value} below original gap {lg.value}")
    agree = abs(lh.value - lg.value) <= tol * scale
    cert = None
    if agree:
        q = lg.eigvectors
        row = q[v - 1, :]
        # combinations of the eigenbasis with zero entry at v: null space of one row
        _, sv, vt = np.linalg.svd(row.reshape(1, -1))
        rank = int(np.sum(sv > 1e-9))
        comb = vt[rank:].T
        vecs = q @ comb
        keep = [i for i in range(g.n) if i != v - 1]
        cert = vecs[keep, :]
        weights = np.array([float(g.weight(i + 1, v)) for i in keep])
        for k in range(cert.shape[1]):
            w = cert[:, k]
            if abs(w.sum()) > 1e-7 or abs(weights @ w) > 1e-7 * max(1.0, float(weights.sum())):
                raise AssertionError("certificate fails the orthogonality conditions")
    return EigcompReport(lh.value, lg.value, agree, cert, red.index_map, tol)


# ------------------------------------------------------------ text format

_HEADER = re.compile(r"^n\s*=\s*(\d+)$")
_NUMBER = re.compile(r"^(\d+(/\d+)?|\d*\.\d+|\d+\.\d*)$")


def parse_weight(token: str) -> Fraction:
    if not _NUMBER.match(token):
        raise ValueError(f"not a nonnegative rational: {token!r}")
    f = Fraction(token)
    return f


def parse_graph(text: str) -> WeightedGraph:
    """Read ``n=<int>`` followed by ``i j w`` lines; ``#`` starts a comment."""
    n = None
    weights: dict[tuple[int, int], Fraction] = {}
    header_line = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            m = _HEADER.match(line)
            if not m:
                raise GraphParseError(f"expected 'n=<int>' header, got {line!r}", lineno)
            n = int(m.group(1))
            header_line = lineno
            if n < 2:
                raise GraphParseError("vertex count must be >= 2", lineno)
            continue
        parts = line.split()
        if len(parts) != 3:
            raise GraphParseError(f"expected '<i> <j> <w>', got {line!r}", lineno)
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError(f"vertex indices must be integers: {line!r}", lineno) from None
        if not (1 <= i < j <= n):
            raise GraphParseError(f"need 1 <= i < j <= {n}, got i={i}, j={j}", lineno)
        try:
            w = parse_weight(parts[2])
        except (ValueError, ZeroDivisionError) as exc:
            raise GraphParseError(str(exc), lineno) from None
        if (i, j) in weights:
            raise GraphParseError(f"duplicate pair ({i},{j})", lineno)
        weights[(i, j)] = w
    if n is None:
        raise GraphParseError("missing 'n=<int>' header", header_line)
    return WeightedGraph(n, weights)


def read_graph(path: str) -> WeightedGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def format_graph(g: WeightedGraph) -> str:
    lines = [f"n={g.n}"]
    for (i, j), c in g.weights.items():
        lines.append(f"{i} {j} {fraction_to_str(c)}")
    return "\n".join(lines) + "\n"

