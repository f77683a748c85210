"""Exact rational linear algebra and a Jacobi eigensolver for symmetric matrices.

Kernels, ranks and determinants use fraction-free elimination over the
integers after clearing row denominators.  Floating point only enters
through :func:`sym_eig`, a cyclic Jacobi solver that rotates disjoint index
pairs simultaneously (round-robin ordering) so each step is one vectorized
update.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

Vector = tuple[Fraction, ...]

CHAR_POLY_MAX_DIM = 12


class LinearAlgebraError(ValueError):
    pass


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def fraction_to_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class RationalMatrix:
    """Dense matrix of exact rationals.

    Rows are stored as tuples of :class:`fractions.Fraction`.  The object is
    treated as immutable; all operations return new matrices.
    """

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable], cols: int | None = None):
        rows = tuple(tuple(_frac(x) for x in row) for row in data)
        if cols is None:
            if not rows:
                raise LinearAlgebraError("cannot infer column count of an empty matrix")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise LinearAlgebraError("ragged rows")
        self._data = rows
        self.rows = len(rows)
        self.cols = cols

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        z = Fraction(0)
        return cls(((z,) * cols for _ in range(rows)), cols)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(([Fraction(int(i == j)) for j in range(n)] for i in range(n)), n)

    @classmethod
    def from_sparse(cls, rows: int, cols: int, entries: dict[tuple[int, int], Fraction]) -> "RationalMatrix":
        data = [[Fraction(0)] * cols for _ in range(rows)]
        for (i, j), x in entries.items():
            data[i][j] = _frac(x)
        return cls(data, cols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int | None = None) -> "RationalMatrix":
        if not columns:
            if rows is None:
                raise LinearAlgebraError("cannot infer row count")
            return cls([[] for _ in range(rows)], 0)
        return cls(zip(*columns), len(columns))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, idx):
        i, j = idx
        return self._data[i][j]

    def row(self, i: int) -> Vector:
        return self._data[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self._data)

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def __iter__(self):
        return iter(self._data)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash(self._data)

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(fraction_to_str(x) for x in r) + "]" for r in self._data)
        return f"RationalMatrix([{body}])"

    def transpose(self) -> "RationalMatrix":
        if self.rows == 0:
            return RationalMatrix([], 0) if self.cols == 0 else RationalMatrix.zeros(self.cols, 0)
        return RationalMatrix(zip(*self._data), self.rows)

    T = property(transpose)

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._same_shape(other)
        return RationalMatrix(
            (tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)), self.cols
        )

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._same_shape(other)
        return RationalMatrix(
            (tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)), self.cols
        )

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix((tuple(-a for a in r) for r in self._data), self.cols)

    def scale(self, k) -> "RationalMatrix":
        k = _frac(k)
        return RationalMatrix((tuple(k * a for a in r) for r in self._data), self.cols)

    def __mul__(self, k) -> "RationalMatrix":
        return self.scale(k)

    __rmul__ = __mul__

    def _same_shape(self, other: "RationalMatrix") -> None:
        if self.shape != other.shape:
            raise LinearAlgebraError(f"shape mismatch {self.shape} vs {other.shape}")

    def __matmul__(self, other):
        if isinstance(other, RationalMatrix):
            if self.cols != other.rows:
                raise LinearAlgebraError(f"shape mismatch {self.shape} @ {other.shape}")
            # sparse-aware: skip zero entries of the left factor
            out = []
            other_rows = other._data
            zero = Fraction(0)
            for r in self._data:
                acc = [zero] * other.cols
                for k, a in enumerate(r):
                    if a:
                        for j, b in enumerate(other_rows[k]):
                            if b:
                                acc[j] += a * b
                out.append(acc)
            return RationalMatrix(out, other.cols)
        vec = tuple(_frac(x) for x in other)
        if len(vec) != self.cols:
            raise LinearAlgebraError("vector length mismatch")
        return tuple(sum((a * b for a, b in zip(r, vec) if a and b), Fraction(0)) for r in self._data)

    def is_zero(self) -> bool:
        return all(not x for r in self._data for x in r)

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self._data[i][j] == self._data[j][i] for i in range(self.rows) for j in range(i)
        )

    def trace(self) -> Fraction:
        self._require_square()
        return sum((self._data[i][i] for i in range(self.rows)), Fraction(0))

    def _require_square(self) -> None:
        if self.rows != self.cols:
            raise LinearAlgebraError("matrix is not square")

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RationalMatrix":
        return RationalMatrix(([self._data[i][j] for j in cols] for i in rows), len(cols))

    def hstack(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.rows != other.rows:
            raise LinearAlgebraError("row count mismatch")
        return RationalMatrix((a + b for a, b in zip(self._data, other._data)), self.cols + other.cols)

    def vstack(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.cols:
            raise LinearAlgebraError("column count mismatch")
        return RationalMatrix(self._data + other._data, self.cols)

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(x) for x in r] for r in self._data], dtype=float).reshape(self.rows, self.cols)

    def to_json(self) -> list[list[str]]:
        return [[fraction_to_str(x) for x in r] for r in self._data]

    # exact algorithms
    def rank(self) -> int:
        return rank(self)

    def nullspace(self) -> list[Vector]:
        return nullspace(self)

    def det(self) -> Fraction:
        return det(self)

    def inverse(self) -> "RationalMatrix":
        return inverse(self)

    def char_poly(self) -> list[Fraction]:
        return char_poly(self)


def _integer_rows(m: RationalMatrix | Sequence[Sequence]) -> list[dict[int, int]]:
    """Sparse integer rows spanning the same row space (each row scaled by its lcm)."""
    out = []
    for r in m:
        den = 1
        for x in r:
            x = _frac(x)
            if x:
                den = den * x.denominator // math.gcd(den, x.denominator)
        row = {}
        for j, x in enumerate(r):
            x = _frac(x)
            if x:
                row[j] = x.numerator * (den // x.denominator)
        out.append(row)
    return out


def _fraction_free_gauss_jordan(rows: list[dict[int, int]], ncols: int):
    """Fraction-free Gauss-Jordan elimination on sparse integer rows.

    Returns (reduced rows, pivot columns, common pivot value, number of row
    swaps).  Every pivot row has the same pivot value ``d`` and all other
    entries in pivot columns are zero, so the result is ``d`` times the
    reduced row echelon form.  Divisions by the previous pivot are exact
    (Bareiss).
    """
    rows = [dict(r) for r in rows]
    prev = 1
    pivots: list[int] = []
    r = 0
    swaps = 0
    m = len(rows)
    for c in range(ncols):
        if r == m:
            break
        p = next((i for i in range(r, m) if rows[i].get(c)), None)
        if p is None:
            continue
        if p != r:
            rows[p], rows[r] = rows[r], rows[p]
            swaps += 1
        prow = rows[r]
        piv = prow[c]
        for i in range(m):
            if i == r:
                continue
            row = rows[i]
            a = row.get(c, 0)
            if a:
                new = {}
                for j in set(row) | set(prow):
                    if j == c:
                        continue
                    val = piv * row.get(j, 0) - a * prow.get(j, 0)
                    if val:
                        new[j] = val // prev
                rows[i] = new
            elif piv != prev:
                rows[i] = {j: piv * v // prev for j, v in row.items()}
        prev = piv
        pivots.append(c)
        r += 1
    return rows, pivots, prev, swaps


def rank(m: RationalMatrix | Sequence[Sequence]) -> int:
    if not isinstance(m, RationalMatrix):
        m = RationalMatrix(m) if len(m) else RationalMatrix([], 0)
    if m.rows == 0 or m.cols == 0:
        return 0
    _, pivots, _, _ = _fraction_free_gauss_jordan(_integer_rows(m), m.cols)
    return len(pivots)


def _primitive(vec: list[Fraction]) -> Vector:
    """Scale a nonzero rational vector to coprime integers with positive leading entry."""
    den = 1
    for x in vec:
        if x:
            den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in vec]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    lead = next(x for x in ints if x)
    if lead < 0:
        g = -g
    return tuple(Fraction(x // g) for x in ints)


def nullspace(m: RationalMatrix | Sequence[Sequence], cols: int | None = None) -> list[Vector]:
    """Exact basis of {x : m x = 0}, one primitive integer vector per free column."""
    if not isinstance(m, RationalMatrix):
        m = RationalMatrix(m, cols) if len(m) else RationalMatrix.zeros(0, cols or 0)
    ncols = m.cols
    if m.rows == 0:
        return [tuple(Fraction(int(i == j)) for i in range(ncols)) for j in range(ncols)]
    rows, pivots, d, _ = _fraction_free_gauss_jordan(_integer_rows(m), ncols)
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(d)
        for r, pc in enumerate(pivots):
            a = rows[r].get(f, 0)
            if a:
                vec[pc] = Fraction(-a)
        basis.append(_primitive(vec))
    return basis


def det(m: RationalMatrix) -> Fraction:
    m._require_square()
    n = m.rows
    if n == 0:
        return Fraction(1)
    scale = Fraction(1)
    for r in m:
        den = 1
        for x in r:
            if x:
                den = den * x.denominator // math.gcd(den, x.denominator)
        scale *= den
    rows, pivots, d, swaps = _fraction_free_gauss_jordan(_integer_rows(m), n)
    if len(pivots) < n:
        return Fraction(0)
    sign = -1 if swaps % 2 else 1
    return Fraction(sign * d) / scale


def solve(m: RationalMatrix, b: Sequence) -> Vector:
    """Unique solution of m x = b for square nonsingular m."""
    m._require_square()
    aug = m.hstack(RationalMatrix([[x] for x in b], 1))
    return inverse_apply(aug, m.rows)


def inverse_apply(aug: RationalMatrix, n: int) -> Vector:
    rows, pivots, d, _ = _fraction_free_gauss_jordan(_integer_rows(aug), n)
    if pivots != list(range(n)):
        raise LinearAlgebraError("singular matrix")
    # row i reads d*x_i*s_i = rhs_i after scaling; recover with the scaled rhs
    out = []
    for i in range(n):
        out.append(Fraction(rows[i].get(n, 0), d))
    return tuple(out)


def inverse(m: RationalMatrix) -> RationalMatrix:
    m._require_square()
    n = m.rows
    # scaling rows of [m | I] by D gives [Dm | D]; reducing the left block to I
    # leaves (Dm)^{-1} D = m^{-1} on the right
    aug = m.hstack(RationalMatrix.identity(n))
    rows, pivots, d, _ = _fraction_free_gauss_jordan(_integer_rows(aug), 2 * n)
    if pivots[:n] != list(range(n)):
        raise LinearAlgebraError("singular matrix")
    return RationalMatrix(([Fraction(rows[i].get(n + j, 0), d) for j in range(n)] for i in range(n)), n)


def char_poly(m: RationalMatrix) -> list[Fraction]:
    """Coefficients of det(xI - m), highest degree first (Faddeev-LeVerrier)."""
    m._require_square()
    n = m.rows
    if n > CHAR_POLY_MAX_DIM:
        raise LinearAlgebraError(f"char_poly limited to dimension {CHAR_POLY_MAX_DIM}, got {n}")
    coeffs = [Fraction(1)]
    ident = RationalMatrix.identity(n)
    mk = RationalMatrix.zeros(n, n)
    c = Fraction(1)
    for k in range(1, n + 1):
        mk = m @ (mk + ident.scale(c))
        c = -mk.trace() / k
        coeffs.append(c)
    return coeffs


def poly_eval(coeffs: Sequence[Fraction], x) -> Fraction:
    acc = Fraction(0)
    for c in coeffs:
        acc = acc * x + c
    return acc


def poly_mul(a: Sequence, b: Sequence) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += _frac(x) * _frac(y)
    return out


def span_equal(a: Sequence[Sequence], b: Sequence[Sequence], dim: int) -> bool:
    """True iff the two lists of vectors span the same subspace of Q^dim."""
    ra = rank(list(a)) if a else 0
    rb = rank(list(b)) if b else 0
    if ra != rb:
        return False
    if ra == 0:
        return True
    return rank(list(a) + list(b)) == ra


def in_span(v: Sequence, basis: Sequence[Sequence]) -> bool:
    if not basis:
        return all(not x for x in v)
    return rank(list(basis) + [list(v)]) == rank(list(basis))


# ---------------------------------------------------------------- floating


JACOBI_MAX_SWEEPS = 100
JACOBI_OFF_TOL = 1e-12
DEFAULT_CLUSTER_RTOL = 1e-7


@dataclass(frozen=True)
class RealSymmetricSpectrum:
    """Ascending eigenvalues, orthonormal eigenvector columns, and tie clusters."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    tol: float
    clusters: tuple[tuple[int, int], ...] = field(default=())
    sweeps: int = 0

    def __len__(self) -> int:
        return len(self.eigenvalues)

    def cluster_of(self, index: int) -> tuple[int, int]:
        for lo, hi in self.clusters:
            if lo <= index < hi:
                return lo, hi
        raise IndexError(index)

    def multiplicity(self, index: int) -> int:
        lo, hi = self.cluster_of(index)
        return hi - lo

    def cluster_values(self) -> list[tuple[float, int]]:
        return [(float(np.mean(self.eigenvalues[lo:hi])), hi - lo) for lo, hi in self.clusters]

    def eigenspace(self, index: int) -> np.ndarray:
        lo, hi = self.cluster_of(index)
        return self.eigenvectors[:, lo:hi]


def cluster_sorted(values: Sequence[float], rtol: float, scale: float | None = None) -> tuple[tuple[int, int], ...]:
    """Split ascending values into runs whose consecutive gaps are at most rtol*scale."""
    vals = np.asarray(values, dtype=float)
    if len(vals) == 0:
        return ()
    if scale is None:
        scale = max(float(vals[-1] - vals[0]), float(np.max(np.abs(vals))))
    thresh = rtol * scale
    out = []
    lo = 0
    for i in range(1, len(vals)):
        if vals[i] - vals[i - 1] > thresh:
            out.append((lo, i))
            lo = i
    out.append((lo, len(vals)))
    return tuple(out)


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    players = list(range(n)) + ([-1] if n % 2 else [])
    m = len(players)
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for k in range(m // 2):
            a, b = players[k], players[m - 1 - k]
            if a < 0 or b < 0:
                continue
            ps.append(min(a, b))
            qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=int), np.array(qs, dtype=int)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def sym_eig(m, tol: float = DEFAULT_CLUSTER_RTOL, max_sweeps: int = JACOBI_MAX_SWEEPS) -> RealSymmetricSpectrum:
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations."""
    a = m.to_numpy() if isinstance(m, RationalMatrix) else np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise LinearAlgebraError("sym_eig needs a square matrix")
    n = a.shape[0]
    norm = float(np.linalg.norm(a))
    if n and float(np.max(np.abs(a - a.T))) > 1e-12 * max(1.0, norm):
        raise LinearAlgebraError("matrix is not symmetric")
    a = (a + a.T) / 2
    vt = np.eye(n)  # eigenvectors stored as rows while iterating
    sweeps = 0
    rounds = _round_robin(n) if n > 1 else []
    while True:
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off <= JACOBI_OFF_TOL * norm or n <= 1:
            break
        if sweeps >= max_sweeps:
            raise LinearAlgebraError(f"Jacobi did not converge in {max_sweeps} sweeps")
        sweeps += 1
        for p, q in rounds:
            apq = a[p, q]
            active = apq != 0.0
            if not np.any(active):
                continue
            p, q, apq = p[active], q[active], apq[active]
            with np.errstate(over="ignore"):
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (np.abs(theta) + np.hypot(theta, 1.0))
            t[theta == 0.0] = 1.0
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            # A <- J^t A J as two row rotations around a transpose (A stays symmetric)
            for _ in range(2):
                rp = a[p]
                rq = a[q]
                a[p] = c[:, None] * rp - s[:, None] * rq
                a[q] = s[:, None] * rp + c[:, None] * rq
                a = np.ascontiguousarray(a.T)
            a[p, q] = 0.0
            a[q, p] = 0.0
            vp = vt[p]
            vq = vt[q]
            vt[p] = c[:, None] * vp - s[:, None] * vq
            vt[q] = s[:, None] * vp + c[:, None] * vq
    v = vt.T
    vals = np.diag(a).copy()
    order = np.argsort(vals, kind="stable")
    vals = vals[order]
    v = v[:, order]
    if n:
        resid = float(np.linalg.norm(v @ np.diag(vals) @ v.T - (m.to_numpy() if isinstance(m, RationalMatrix) else np.asarray(m, dtype=float))))
        if resid > 1e-8 * max(norm, 1e-300) and norm > 0:
            raise LinearAlgebraError(f"Jacobi reconstruction residual {resid:.3e} too large")
    return RealSymmetricSpectrum(vals, v, tol, cluster_sorted(vals, tol), sweeps)


# ------------------------------------------------------- Specht eigenvalues


@dataclass(frozen=True)
class SpechtEigen:
    value: float
    multiplicity: int
    vectors: np.ndarray  # columns are standard-basis coefficient vectors
    spectrum: RealSymmetricSpectrum


def symmetrized_spectrum(x: np.ndarray, gram: np.ndarray, tol: float = DEFAULT_CLUSTER_RTOL):
    """Spectrum of an operator with matrix x that is self-adjoint for the Gram form.

    With gram = R^t R (Cholesky), R x R^{-1} is symmetric.  Returns the
    spectrum together with R^{-1}, which maps its eigenvectors back to
    coefficient vectors in the original basis.
    """
    try:
        lower = np.linalg.cholesky(gram)
    except np.linalg.LinAlgError as exc:
        raise LinearAlgebraError("Gram matrix is not positive definite") from exc
    r = lower.T
    r_inv = np.linalg.inv(r)
    sym = r @ x @ r_inv
    asym = float(np.max(np.abs(sym - sym.T))) if sym.size else 0.0
    if asym > 1e-8 * max(1.0, float(np.linalg.norm(sym))):
        raise LinearAlgebraError(f"operator is not self-adjoint (asymmetry {asym:.2e})")
    return sym_eig((sym + sym.T) / 2, tol), r_inv


def min_specht_eigenvalue(op, mu, tol: float = DEFAULT_CLUSTER_RTOL) -> SpechtEigen:
    """Smallest eigenvalue of a transposition sum acting on the Specht module S^mu.

    Uses the tabloid inner product: with B the tabloid coordinates of the
    standard polytabloids and X the operator matrix in that basis, the
    congruence B^t S B = G X (G = B^t B) is symmetrized through the Cholesky
    factor of G.
    """
    from . import specht

    module = specht.specht_module(specht.as_partition(mu))
    x = module.operator_matrix_float(op)
    spec, r_inv = symmetrized_spectrum(x, module.gram_float, tol)
    lo, hi = spec.clusters[0]
    vectors = r_inv @ spec.eigenvectors[:, lo:hi]
    return SpechtEigen(float(np.mean(spec.eigenvalues[lo:hi])), hi - lo, vectors, spec)
