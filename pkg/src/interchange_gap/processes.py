"""Generators of the exclusion, colored exclusion and interchange processes.

Index orders are fixed and reported: k-subsets in lexicographic order
(``itertools.combinations``), tabloids in lexicographic order of their row
contents, permutations in lexicographic order of their images.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

import numpy as np

from .exactla import RationalMatrix, rank, sym_eig, symmetrized_spectrum
from .graphcore import WeightedGraph
from .permgroup import TranspositionSum, enumerate_group
from .specht import Partition, Tabloid, swap_entries, as_partition, partitions, specht_module

MAX_SUBSETS = 5000
MAX_TABLOIDS = 5000
MAX_FULL_N = 6
MAX_DECOMP_N = 5


class ProcessError(ValueError):
    pass


def k_subsets(n: int, k: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations(range(1, n + 1), k))


@dataclass(frozen=True)
class ExclusionGenerator:
    n: int
    k: int
    index: tuple[tuple[int, ...], ...]
    matrix: RationalMatrix


def exclusion_generator(g: WeightedGraph, k: int) -> ExclusionGenerator:
    """k-particle exclusion generator: a particle at i jumps to empty j at rate c_ij."""
    n = g.n
    if not 1 <= k <= n // 2:
        raise ProcessError(f"need 1 <= k <= {n // 2}, got k={k}")
    if comb(n, k) > MAX_SUBSETS:
        raise ProcessError(f"C({n},{k}) = {comb(n, k)} subsets exceeds {MAX_SUBSETS}")
    index = k_subsets(n, k)
    pos = {s: a for a, s in enumerate(index)}
    entries: dict[tuple[int, int], Fraction] = {}
    for a, omega in enumerate(index):
        inside = set(omega)
        diag = Fraction(0)
        for (i, j), c in g.weights.items():
            if (i in inside) != (j in inside):
                diag += c
                src, dst = (i, j) if i in inside else (j, i)
                target = tuple(sorted((inside - {src}) | {dst}))
                entries[(a, pos[target])] = -c
        entries[(a, a)] = diag
    return ExclusionGenerator(n, k, tuple(index), RationalMatrix.from_sparse(len(index), len(index), entries))


def lift(u: Sequence, n: int, k: int) -> tuple[Fraction, ...]:
    """Vector over (k+1)-subsets with entry sum_{i in Omega} u[Omega - i]."""
    if not 1 <= k <= n // 2 - 1:
        raise ProcessError(f"lift needs 1 <= k <= {n // 2 - 1}, got k={k}")
    small = k_subsets(n, k)
    if len(u) != len(small):
        raise ProcessError(f"vector of length {len(u)} does not index the {len(small)} {k}-subsets of [{n}]")
    val = {s: Fraction(x) for s, x in zip(small, u)}
    out = []
    for omega in k_subsets(n, k + 1):
        out.append(sum((val[tuple(x for x in omega if x != i)] for i in omega), Fraction(0)))
    return tuple(out)


@dataclass
class EigrecEntry:
    eigenvalue: float
    residual: float
    lift_norm: float
    vanished: bool


@dataclass
class EigrecReport:
    n: int
    k: int
    tol: float
    entries: list[EigrecEntry] = field(default_factory=list)
    exact_checked: int = 0

    @property
    def ok(self) -> bool:
        return all(e.vanished or e.residual <= self.tol * max(e.lift_norm, 1.0) for e in self.entries)


def _lift_matrix(n: int, k: int) -> np.ndarray:
    small = {s: a for a, s in enumerate(k_subsets(n, k))}
    big = k_subsets(n, k + 1)
    m = np.zeros((len(big), len(small)))
    for b, omega in enumerate(big):
        for i in omega:
            m[b, small[tuple(x for x in omega if x != i)]] += 1
    return m


def verify_eigrec(g: WeightedGraph, k: int, tol: float = 1e-8, pairs=None) -> EigrecReport:
    """Check that lifts of eigenvectors of the k-particle generator are eigenvectors one level up.

    Every floating eigenpair of the k-particle generator is lifted; lifts of
    negligible norm are flagged as vanished.  ``pairs`` may supply exact
    (eigenvalue, vector) pairs, which are checked with rational arithmetic.
    """
    n = g.n
    lower = exclusion_generator(g, k)
    upper = exclusion_generator(g, k + 1)
    report = EigrecReport(n, k, tol)
    spec = sym_eig(lower.matrix)
    up = upper.matrix.to_numpy()
    lm = _lift_matrix(n, k)
    for idx in range(len(spec)):
        lam = float(spec.eigenvalues[idx])
        u = spec.eigenvectors[:, idx]
        w = lm @ u
        norm = float(np.linalg.norm(w))
        vanished = norm <= 1e-9
        resid = float(np.linalg.norm(up @ w - lam * w))
        report.entries.append(EigrecEntry(lam, resid, norm, vanished))
    for lam, u in pairs or ():
        lam = Fraction(lam)
        if tuple(lower.matrix @ u) != tuple(lam * Fraction(x) for x in u):
            raise ProcessError("supplied pair is not an exact eigenpair")
        w = lift(u, n, k)
        if tuple(upper.matrix @ w) != tuple(lam * x for x in w):
            raise AssertionError("exact lift is not an eigenvector")
        report.exact_checked += 1
    return report


def full_operator_matrix(op: TranspositionSum) -> RationalMatrix:
    """Matrix of op on R[S_n]: entry (g, g(i,j)) is -w_ij, diagonal the sum of weights."""
    n = op.n
    if n > MAX_FULL_N:
        raise ProcessError(f"full group algebra matrices limited to n <= {MAX_FULL_N}")
    perms = enumerate_group(n)
    pos = {p.images: a for a, p in enumerate(perms)}
    size = len(perms)
    zero = Fraction(0)
    const = op.constant
    terms = list(op.terms.items())
    rows = []
    for a, p in enumerate(perms):
        row = [zero] * size
        row[a] = const
        img = p.images
        for (i, j), w in terms:
            swapped = list(img)
            swapped[i - 1], swapped[j - 1] = img[j - 1], img[i - 1]
            row[pos[tuple(swapped)]] -= w
        rows.append(row)
    return RationalMatrix(rows, size)


def tabloids_of_shape(mu: Partition) -> list[Tabloid]:
    n = mu.n

    def fill(rest: tuple[int, ...], parts: tuple[int, ...]):
        if not parts:
            yield ()
            return
        for row in itertools.combinations(rest, parts[0]):
            left = tuple(x for x in rest if x not in row)
            for tail in fill(left, parts[1:]):
                yield (row,) + tail

    return sorted(Tabloid(rows) for rows in fill(tuple(range(1, n + 1)), mu.parts))


@dataclass(frozen=True)
class PermutationModuleGenerator:
    mu: Partition
    index: tuple[Tabloid, ...]
    matrix: RationalMatrix


def permutation_module_generator(g: WeightedGraph, mu) -> PermutationModuleGenerator:
    """Matrix of L_G on M^mu: relabeling by (i,j) moves tabloid x to (i,j)x at rate c_ij."""
    mu = as_partition(mu)
    if mu.n != g.n:
        raise ProcessError(f"partition {mu} does not match n={g.n}")
    count = factorial(mu.n)
    for p in mu.parts:
        count //= factorial(p)
    if count > MAX_TABLOIDS:
        raise ProcessError(f"{count} tabloids exceeds {MAX_TABLOIDS}")
    index = tabloids_of_shape(mu)
    pos = {x: a for a, x in enumerate(index)}
    entries: dict[tuple[int, int], Fraction] = {}
    for a, x in enumerate(index):
        diag = Fraction(0)
        for (i, j), c in g.weights.items():
            y = Tabloid(swap_entries(x.rows, i, j))
            if y != x:
                diag += c
                entries[(a, pos[y])] = entries.get((a, pos[y]), Fraction(0)) - c
        entries[(a, a)] = diag
    return PermutationModuleGenerator(mu, tuple(index), RationalMatrix.from_sparse(len(index), len(index), entries))


def specht_spectrum(op: TranspositionSum, mu, tol: float = 1e-9) -> np.ndarray:
    """Eigenvalues of op on S^mu via the Gram-symmetrized operator matrix."""
    module = specht_module(as_partition(mu))
    spec, _ = symmetrized_spectrum(module.operator_matrix_float(op), module.gram_float, tol)
    return spec.eigenvalues


@dataclass
class DecompositionReport:
    n: int
    tol: float
    full: np.ndarray
    blocks: dict[str, np.ndarray]
    max_deviation: float

    @property
    def ok(self) -> bool:
        return len(self.full) == sum(len(v) ** 2 for v in self.blocks.values()) and self.max_deviation <= self.tol


def spectrum_decomposition_check(g: WeightedGraph, tol: float = 1e-7) -> DecompositionReport:
    """Compare the spectrum on R[S_n] with dim(S^mu) copies of each Specht block spectrum."""
    n = g.n
    if n > MAX_DECOMP_N:
        raise ProcessError(f"decomposition check limited to n <= {MAX_DECOMP_N}")
    op = g.interchange_operator()
    full = sym_eig(full_operator_matrix(op)).eigenvalues
    blocks = {}
    combined = []
    for mu in partitions(n):
        vals = specht_spectrum(op, mu)
        dim = len(vals)
        blocks[str(mu)] = vals
        combined.extend(list(vals) * dim)
    combined = np.sort(np.array(combined))
    if len(combined) != len(full):
        dev = float("inf")
    else:
        scale = max(1.0, float(np.max(np.abs(full))))
        dev = float(np.max(np.abs(combined - full))) / scale
    return DecompositionReport(n, tol, full, blocks, dev)


def zero_eigenspace_dimension(m: RationalMatrix) -> int:
    return m.cols - rank(m)


__all__ = [
    "ExclusionGenerator",
    "PermutationModuleGenerator",
    "DecompositionReport",
    "EigrecReport",
    "exclusion_generator",
    "full_operator_matrix",
    "k_subsets",
    "lift",
    "permutation_module_generator",
    "spectrum_decomposition_check",
    "specht_spectrum",
    "tabloids_of_shape",
    "verify_eigrec",
    "zero_eigenspace_dimension",
]
