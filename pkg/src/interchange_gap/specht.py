"""Partitions, tableaux, tabloids and the polytabloid bases of Specht modules.

Standard polytabloids are ordered by the column reading word of their
tableaux (read each column top to bottom, columns left to right) compared
lexicographically.  Expressing a vector of the Specht module in that basis
("straightening") is done by an exact linear solve: the standard tabloids
{s} give a square nonsingular minor of the coordinate matrix, and the full
residual is checked afterwards.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import factorial
from typing import Iterable, Mapping, Sequence

import numpy as np

from .exactla import RationalMatrix, inverse
from .permgroup import Permutation, TranspositionSum

MAX_N = 9
MAX_DIM = 3000


class SpechtError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(self.parts)
        if not parts or any(p < 1 for p in parts) or any(a < b for a, b in zip(parts, parts[1:])):
            raise SpechtError(f"not a partition: {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def n(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __str__(self) -> str:
        return "(" + ",".join(str(p) for p in self.parts) + ")"

    def __repr__(self) -> str:
        return f"Partition{self}"

    def dominates(self, other: "Partition") -> bool:
        """Prefix sums of self are all at least those of other (same n)."""
        if self.n != other.n:
            raise SpechtError("dominance compares partitions of the same n")
        a = b = 0
        for k in range(max(len(self), len(other))):
            a += self.parts[k] if k < len(self) else 0
            b += other.parts[k] if k < len(other) else 0
            if a < b:
                return False
        return True

    def conjugate(self) -> "Partition":
        return Partition(tuple(sum(1 for p in self.parts if p > k) for k in range(self.parts[0])))

    def removable_rows(self) -> list[int]:
        """0-based rows whose last box is a corner."""
        return [r for r in range(len(self)) if r == len(self) - 1 or self.parts[r] > self.parts[r + 1]]

    def remove_box(self, row: int) -> "Partition":
        parts = list(self.parts)
        parts[row] -= 1
        if row + 1 < len(parts) and parts[row] < parts[row + 1]:
            raise SpechtError(f"row {row} of {self} has no removable box")
        return Partition(tuple(p for p in parts if p))

    def hook_dimension(self) -> int:
        conj = self.conjugate().parts
        prod = 1
        for r, length in enumerate(self.parts):
            for c in range(length):
                prod *= (length - c - 1) + (conj[c] - r - 1) + 1
        return factorial(self.n) // prod


def as_partition(mu) -> Partition:
    if isinstance(mu, Partition):
        return mu
    if isinstance(mu, str):
        text = mu.strip().strip("()[]")
        if not text:
            raise SpechtError(f"cannot parse partition {mu!r}")
        try:
            if re.fullmatch(r"\d+", text) and len(text) > 1 and "," not in text:
                parts = tuple(int(ch) for ch in text)
            else:
                parts = tuple(int(x) for x in re.split(r"[,\s]+", text) if x)
        except ValueError:
            raise SpechtError(f"cannot parse partition {mu!r}") from None
        return Partition(parts)
    return Partition(tuple(mu))


def partitions(n: int) -> list[Partition]:
    """All partitions of n in decreasing lexicographic order, e.g. (4), (3,1), (2,2), ..."""
    if not 1 <= n <= 12:
        raise SpechtError(f"partitions limited to 1 <= n <= 12, got {n}")

    def gen(rest: int, cap: int):
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in gen(rest - first, first):
                yield (first,) + tail

    return [Partition(p) for p in gen(n, n)]


def dominates(a, b) -> bool:
    return as_partition(a).dominates(as_partition(b))


def _format_rows(rows: Sequence[Sequence[int]]) -> str:
    return "[" + ",".join("[" + ",".join(str(x) for x in r) + "]" for r in rows) + "]"


@dataclass(frozen=True)
class Tableau:
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        Partition(tuple(len(r) for r in rows))
        entries = sorted(x for r in rows for x in r)
        if entries != list(range(1, len(entries) + 1)):
            raise SpechtError(f"tableau entries must be 1..n exactly once: {rows}")

    @classmethod
    def parse(cls, text: str) -> "Tableau":
        """Read the bracketed row format ``[[1,3],[2,4]]``."""
        rows = re.findall(r"\[([^\[\]]*)\]", text)
        if not rows:
            raise SpechtError(f"cannot parse tableau {text!r}")
        return cls(tuple(tuple(int(x) for x in re.split(r"[,\s]+", r.strip()) if x) for r in rows))

    @property
    def shape(self) -> Partition:
        return Partition(tuple(len(r) for r in self.rows))

    @property
    def n(self) -> int:
        return sum(len(r) for r in self.rows)

    def columns(self) -> list[tuple[int, ...]]:
        return [tuple(r[c] for r in self.rows if len(r) > c) for c in range(len(self.rows[0]))]

    def column_word(self) -> tuple[int, ...]:
        return tuple(x for col in self.columns() for x in col)

    def is_standard(self) -> bool:
        rows_ok = all(a < b for r in self.rows for a, b in zip(r, r[1:]))
        cols_ok = all(a < b for col in self.columns() for a, b in zip(col, col[1:]))
        return rows_ok and cols_ok

    def row_of(self, x: int) -> int:
        for k, r in enumerate(self.rows):
            if x in r:
                return k
        raise SpechtError(f"{x} not in tableau")

    def act(self, g: Permutation) -> "Tableau":
        """Apply g to every entry."""
        img = g.images
        return Tableau(tuple(tuple(img[x - 1] for x in r) for r in self.rows))

    def tabloid(self) -> "Tabloid":
        return Tabloid(self.rows)

    def remove_largest(self) -> "Tableau":
        """The tableau t minus the box holding n (the box must be a corner)."""
        n = self.n
        rows = [tuple(x for x in r if x != n) for r in self.rows]
        return Tableau(tuple(r for r in rows if r))

    def __str__(self) -> str:
        return _format_rows(self.rows)


@dataclass(frozen=True, order=True)
class Tabloid:
    """Row contents of a tableau with the order inside each row forgotten."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(tuple(sorted(r)) for r in self.rows))

    @property
    def shape(self) -> Partition:
        return Partition(tuple(len(r) for r in self.rows))

    @property
    def n(self) -> int:
        return sum(len(r) for r in self.rows)

    def __str__(self) -> str:
        return "{" + _format_rows(self.rows) + "}"


def act_tabloid(g: Permutation, x: Tabloid) -> Tabloid:
    img = g.images
    return Tabloid(tuple(tuple(img[k - 1] for k in r) for r in x.rows))


def swap_entries(rows: tuple[tuple[int, ...], ...], i: int, j: int) -> tuple[tuple[int, ...], ...]:
    out = []
    for r in rows:
        if i in r or j in r:
            r = tuple(sorted(j if k == i else i if k == j else k for k in r))
        out.append(r)
    return tuple(out)


class TabloidVector:
    """Sparse exact combination of tabloids of a common shape."""

    __slots__ = ("shape", "coords")

    def __init__(self, shape: Partition, coords: Mapping[Tabloid, object] | None = None):
        self.shape = shape
        clean = {}
        for x, c in (coords or {}).items():
            c = c if isinstance(c, Fraction) else Fraction(c)
            if c:
                clean[x] = c
        self.coords = clean

    def __getitem__(self, x: Tabloid) -> Fraction:
        return self.coords.get(x, Fraction(0))

    def __len__(self) -> int:
        return len(self.coords)

    def _combine(self, other: "TabloidVector", sign: int) -> "TabloidVector":
        if self.shape != other.shape:
            raise SpechtError("shape mismatch")
        out = dict(self.coords)
        for x, c in other.coords.items():
            out[x] = out.get(x, Fraction(0)) + sign * c
        return TabloidVector(self.shape, out)

    def __add__(self, other: "TabloidVector") -> "TabloidVector":
        return self._combine(other, 1)

    def __sub__(self, other: "TabloidVector") -> "TabloidVector":
        return self._combine(other, -1)

    def __neg__(self) -> "TabloidVector":
        return self.scale(-1)

    def scale(self, k) -> "TabloidVector":
        k = Fraction(k)
        return TabloidVector(self.shape, {x: k * c for x, c in self.coords.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, TabloidVector) and self.shape == other.shape and self.coords == other.coords

    def act(self, g: Permutation) -> "TabloidVector":
        return TabloidVector(self.shape, {act_tabloid(g, x): c for x, c in self.coords.items()})

    def transpose_entries(self, i: int, j: int) -> "TabloidVector":
        return TabloidVector(self.shape, {Tabloid(swap_entries(x.rows, i, j)): c for x, c in self.coords.items()})

    def apply(self, op: TranspositionSum) -> "TabloidVector":
        """op = sum w_ij (Id - (i,j)) acting by relabeling entries."""
        out: dict[Tabloid, Fraction] = {}
        for (i, j), w in op.terms.items():
            for x, c in self.coords.items():
                y = Tabloid(swap_entries(x.rows, i, j))
                if y == x:
                    continue
                out[x] = out.get(x, Fraction(0)) + w * c
                out[y] = out.get(y, Fraction(0)) - w * c
        return TabloidVector(self.shape, out)

    def dot(self, other: "TabloidVector") -> Fraction:
        small, big = (self, other) if len(self) <= len(other) else (other, self)
        return sum((c * big[x] for x, c in small.coords.items()), Fraction(0))

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*{x}" for x, c in sorted(self.coords.items()))
        return f"TabloidVector({body or '0'})"


def _column_group(t: Tableau):
    """Yield (sign, relabeling dict) for every element of the column stabilizer."""
    cols = [c for c in t.columns() if len(c) > 1]
    per_col = []
    for col in cols:
        options = []
        for img in itertools.permutations(col):
            pos = {x: k for k, x in enumerate(col)}
            perm = [pos[x] + 1 for x in img]
            sign = Permutation(perm).sign()
            options.append((sign, dict(zip(col, img))))
        per_col.append(options)
    for combo in itertools.product(*per_col):
        sign = 1
        mapping: dict[int, int] = {}
        for s, m in combo:
            sign *= s
            mapping.update(m)
        yield sign, mapping


def polytabloid(t: Tableau) -> TabloidVector:
    """e_t = sum over the column group of sgn(sigma) {sigma t}."""
    coords: dict[Tabloid, Fraction] = {}
    count = 0
    for sign, mapping in _column_group(t):
        x = Tabloid(tuple(tuple(mapping.get(k, k) for k in r) for r in t.rows))
        if x in coords:
            raise AssertionError("column group acted non-injectively on tabloids")
        coords[x] = Fraction(sign)
        count += 1
    return TabloidVector(t.shape, coords)


def _check_size(mu: Partition) -> None:
    if mu.n > MAX_N:
        raise SpechtError(f"n = {mu.n} exceeds the size guard n <= {MAX_N}")


def _enumerate_standard(mu: Partition) -> list[Tableau]:
    n = mu.n
    out = []
    rows: list[list[int]] = [[] for _ in mu.parts]

    def place(k: int):
        if k > n:
            out.append(Tableau(tuple(tuple(r) for r in rows)))
            return
        for r in range(len(mu.parts)):
            if len(rows[r]) < mu.parts[r] and (r == 0 or len(rows[r - 1]) > len(rows[r])):
                rows[r].append(k)
                place(k + 1)
                rows[r].pop()

    place(1)
    out.sort(key=Tableau.column_word)
    return out


@dataclass(frozen=True)
class StandardTableauBasis:
    shape: Partition
    tableaux: tuple[Tableau, ...]

    def __len__(self) -> int:
        return len(self.tableaux)

    def __iter__(self):
        return iter(self.tableaux)

    def __getitem__(self, k: int) -> Tableau:
        return self.tableaux[k]

    def index(self, t: Tableau) -> int:
        return self.tableaux.index(t)


def standard_tableaux(mu) -> StandardTableauBasis:
    mu = as_partition(mu)
    _check_size(mu)
    return specht_module(mu).basis


class SpechtModule:
    """Standard polytabloid basis of S^mu with cached straightening data."""

    def __init__(self, mu: Partition):
        _check_size(mu)
        self.shape = mu
        tabs = _enumerate_standard(mu)
        if len(tabs) > MAX_DIM:
            raise SpechtError(f"dim S^{mu} = {len(tabs)} exceeds the size guard {MAX_DIM}")
        self.basis = StandardTableauBasis(mu, tuple(tabs))
        self.dim = len(tabs)
        self.polytabloids = [polytabloid(t) for t in tabs]
        self._index = {t: k for k, t in enumerate(tabs)}
        self._anchors = [t.tabloid() for t in tabs]
        minor = RationalMatrix([[e[x] for e in self.polytabloids] for x in self._anchors], self.dim)
        self._minor_inv = inverse(minor)
        self._tmat: dict[tuple[int, int], RationalMatrix] = {}
        self._tmat_float: dict[tuple[int, int], np.ndarray] = {}

    def index(self, t: Tableau) -> int:
        return self._index[t]

    def coordinate_matrix(self) -> tuple[list[Tabloid], RationalMatrix]:
        """Tabloid coordinates of the standard polytabloids (rows: sorted tabloids)."""
        support = sorted({x for e in self.polytabloids for x in e.coords})
        return support, RationalMatrix([[e[x] for e in self.polytabloids] for x in support], self.dim)

    @cached_property
    def gram(self) -> RationalMatrix:
        es = self.polytabloids
        return RationalMatrix([[a.dot(b) for b in es] for a in es], self.dim)

    @cached_property
    def gram_float(self) -> np.ndarray:
        return self.gram.to_numpy()

    def combination(self, coeffs: Sequence[Fraction]) -> TabloidVector:
        out: dict[Tabloid, Fraction] = {}
        for c, e in zip(coeffs, self.polytabloids):
            if c:
                for x, a in e.coords.items():
                    out[x] = out.get(x, Fraction(0)) + c * a
        return TabloidVector(self.shape, out)

    def coordinates(self, v: TabloidVector, check: bool = True) -> tuple[Fraction, ...]:
        if v.shape != self.shape:
            raise SpechtError(f"vector of shape {v.shape} given to S^{self.shape}")
        gamma = self._minor_inv @ [v[x] for x in self._anchors]
        if check and self.combination(gamma) != v:
            raise SpechtError("vector is not in the span of the standard polytabloids")
        return gamma

    def transposition_matrix(self, i: int, j: int) -> RationalMatrix:
        """Matrix of (i,j) in the standard basis: column t holds the coordinates of (i,j) e_t."""
        key = (min(i, j), max(i, j))
        if key not in self._tmat:
            cols = [self.coordinates(e.transpose_entries(*key)) for e in self.polytabloids]
            self._tmat[key] = RationalMatrix.from_columns(cols, self.dim)
        return self._tmat[key]

    def transposition_matrix_float(self, i: int, j: int) -> np.ndarray:
        key = (min(i, j), max(i, j))
        if key not in self._tmat_float:
            self._tmat_float[key] = self.transposition_matrix(*key).to_numpy()
        return self._tmat_float[key]

    def operator_matrix(self, op: TranspositionSum) -> RationalMatrix:
        if op.n != self.shape.n:
            raise SpechtError(f"operator on n={op.n} applied to S^{self.shape}")
        d = self.dim
        acc = [[Fraction(0)] * d for _ in range(d)]
        for (i, j), w in op.terms.items():
            t = self.transposition_matrix(i, j)
            for r in range(d):
                row = acc[r]
                trow = t.row(r)
                row[r] += w
                for c in range(d):
                    if trow[c]:
                        row[c] -= w * trow[c]
        return RationalMatrix(acc, d)

    def operator_matrix_float(self, op: TranspositionSum) -> np.ndarray:
        if op.n != self.shape.n:
            raise SpechtError(f"operator on n={op.n} applied to S^{self.shape}")
        x = np.zeros((self.dim, self.dim))
        for (i, j), w in op.terms.items():
            x -= float(w) * self.transposition_matrix_float(i, j)
        x += float(op.constant) * np.eye(self.dim)
        return x


@lru_cache(maxsize=None)
def specht_module(mu: Partition) -> SpechtModule:
    return SpechtModule(as_partition(mu))


def to_standard_coords(v: TabloidVector) -> dict[Tableau, Fraction]:
    """Coefficients gamma with sum gamma_t e_t = v over the standard basis (nonzero entries)."""
    module = specht_module(v.shape)
    gamma = module.coordinates(v)
    return {t: c for t, c in zip(module.basis, gamma) if c}


def operator_matrix(op: TranspositionSum, mu) -> RationalMatrix:
    """X with op e_t = sum_{t'} X[t', t] e_{t'} in the standard polytabloid basis."""
    return specht_module(as_partition(mu)).operator_matrix(op)


def restrict_branching(coeffs: Mapping[Tableau, object], mu) -> dict[Partition, dict[Tableau, Fraction]]:
    """Group coefficients by the shape left after deleting the box holding n."""
    mu = as_partition(mu)
    out: dict[Partition, dict[Tableau, Fraction]] = {}
    for t, c in coeffs.items():
        if t.shape != mu:
            raise SpechtError(f"tableau {t} does not have shape {mu}")
        if not t.is_standard():
            raise SpechtError(f"tableau {t} is not standard")
        s = t.remove_largest()
        out.setdefault(s.shape, {})[s] = Fraction(c)
    return dict(sorted(out.items(), reverse=True))
