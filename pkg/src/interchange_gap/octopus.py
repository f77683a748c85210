"""The octopus operator, its correction matrix on even permutations, and kernels.

For a vertex v with incident weights c_i = c_iv and s = sum_i c_i, the
octopus operator is L_G - L_{H + v} where H is the Kron reduction at v.
Multiplying by s gives the integer-friendly form

    s * Delta = -sum_{i<j} c_i c_j (Id - (i,j)),    c_v := -s,

over all pairs of vertices, which is the form used internally.  On the
group algebra, listing even permutations first puts Delta in block form
[[c I, X^t], [X, c I]] and the correction matrix is C' = c^2 I - X^t X.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence

import numpy as np

from .exactla import RationalMatrix, nullspace, rank, span_equal, sym_eig
from .graphcore import WeightedGraph, schur_reduce_with_map
from .permgroup import (
    GroupAlgebraElement,
    Permutation,
    TranspositionSum,
    compose,
    coset_reps,
    enumerate_group,
    klein_group,
    klein_three_cycle,
)
from .processes import full_operator_matrix
from .specht import Partition, Tableau, as_partition, partitions, specht_module, standard_tableaux

MAX_CORRECTION_N = 6
MAX_KLEIN_N = 7
MAX_SYMMETRIZER_N = 6


class OctopusError(ValueError):
    pass


def star_weights(g: WeightedGraph, v: int) -> dict[int, Fraction]:
    return {i: g.weight(i, v) for i in range(1, g.n + 1) if i != v}


def octopus(g: WeightedGraph, v: int, scaled: bool = True) -> TranspositionSum:
    """Octopus operator at v; ``scaled`` multiplies by the weighted degree of v."""
    s = g.degree(v)
    if s == 0:
        raise OctopusError(f"vertex {v} has zero incident weight")
    c = star_weights(g, v)
    terms: dict[tuple[int, int], Fraction] = {}
    if scaled:
        for i, ci in c.items():
            terms[(i, v)] = s * ci
        for i, j in itertools.combinations(sorted(c), 2):
            terms[(i, j)] = -c[i] * c[j]
    else:
        for i, ci in c.items():
            terms[(i, v)] = ci
        for i, j in itertools.combinations(sorted(c), 2):
            terms[(i, j)] = -c[i] * c[j] / s
    return TranspositionSum(g.n, terms)


def octopus_by_difference(g: WeightedGraph, v: int) -> TranspositionSum:
    """Unscaled octopus computed literally as L_G minus the reduced graph's operator."""
    red = schur_reduce_with_map(g, v)
    back = {new: old for old, new in red.index_map.items()}
    h_terms = {(back[i], back[j]): w for (i, j), w in red.graph.weights.items()}
    return g.interchange_operator() - TranspositionSum(g.n, h_terms)


def octopus_constant(g: WeightedGraph, v: int) -> Fraction:
    """Coefficient c of Id in the scaled octopus: sum c_i^2 + sum_{i<j} c_i c_j."""
    c = list(star_weights(g, v).values())
    return sum((x * x for x in c), Fraction(0)) + sum(
        (a * b for a, b in itertools.combinations(c, 2)), Fraction(0)
    )


def operator_min_eigenvalue(op: TranspositionSum) -> tuple[float, float]:
    """(smallest eigenvalue, Frobenius norm) of op on the full group algebra."""
    m = full_operator_matrix(op)
    spec = sym_eig(m)
    return float(spec.eigenvalues[0]), float(np.linalg.norm(m.to_numpy()))


def octopus_psd_check(g: WeightedGraph, v: int, tol: float = 1e-9) -> bool:
    if g.n > MAX_CORRECTION_N:
        raise OctopusError(f"full group algebra limited to n <= {MAX_CORRECTION_N}")
    lam, norm = operator_min_eigenvalue(octopus(g, v, scaled=True))
    return lam >= -tol * norm


# ----------------------------------------------------------- correction


def _classify(p: Permutation, J: frozenset[int]) -> int:
    """Entry of A^J for g^{-1} g' = p."""
    supp = p.support()
    if not supp:
        return 2
    if not supp <= J:
        return 0
    cyc = sorted(len(c) for c in p.cycles())
    if cyc == [2, 2]:
        return 2
    if cyc == [3]:
        return -1
    return 0


def a_matrix(n: int, J: Iterable[int]) -> RationalMatrix:
    """A^J(n) on the even permutations (enumeration order)."""
    J = frozenset(J)
    if len(J) != 4:
        raise OctopusError("A^J needs a 4-subset")
    evens = enumerate_group(n, "even")
    pos = {p: a for a, p in enumerate(evens)}
    entries: dict[tuple[int, int], Fraction] = {}
    alt = [p for p in evens if p.support() <= J]
    for a, g in enumerate(evens):
        for k in alt:
            val = _classify(k, J)
            if val:
                entries[(a, pos[compose(g, k)])] = Fraction(val)
    return RationalMatrix.from_sparse(len(evens), len(evens), entries)


@dataclass(frozen=True)
class CorrectionMatrix:
    n: int
    vertex: int
    omega_plus: tuple[int, ...]
    constant: Fraction
    index: tuple[Permutation, ...]
    matrix: RationalMatrix


def _check_vertex(g: WeightedGraph, v: int) -> None:
    if not 1 <= v <= g.n:
        raise OctopusError(f"vertex {v} outside 1..{g.n}")
    if g.degree(v) == 0:
        raise OctopusError(f"vertex {v} has zero incident weight")


def omega_plus(g: WeightedGraph, v: int) -> tuple[int, ...]:
    return tuple(i for i, c in star_weights(g, v).items() if c > 0)


def even_odd_blocks(n: int) -> tuple[list[int], list[int]]:
    perms = enumerate_group(n)
    even = [a for a, p in enumerate(perms) if p.is_even()]
    odd = [a for a, p in enumerate(perms) if not p.is_even()]
    return even, odd


def correction_matrix_definitional(g: WeightedGraph, v: int) -> RationalMatrix:
    """c^2 I - X^t X from the even/odd blocks of the full scaled octopus matrix."""
    _check_vertex(g, v)
    if g.n > MAX_CORRECTION_N:
        raise OctopusError(f"correction matrix limited to n <= {MAX_CORRECTION_N}")
    op = octopus(g, v, scaled=True)
    full = full_operator_matrix(op)
    even, odd = even_odd_blocks(g.n)
    x = full.submatrix(odd, even)
    c = op.constant
    for a, b in zip(even, even):
        if full[a, b] != c:
            raise AssertionError("diagonal of the octopus is not constant")
    return RationalMatrix.identity(len(even)).scale(c * c) - x.transpose() @ x


def correction_matrix(g: WeightedGraph, v: int, cross_check: bool = True) -> CorrectionMatrix:
    """C'(n) = sum over 4-sets J of Omega_+ with v of -c_J A^J(n), where c_v = -s."""
    _check_vertex(g, v)
    n = g.n
    if n > MAX_CORRECTION_N:
        raise OctopusError(f"correction matrix limited to n <= {MAX_CORRECTION_N}")
    cw = star_weights(g, v)
    cw[v] = -g.degree(v)
    plus = omega_plus(g, v)
    evens = tuple(enumerate_group(n, "even"))
    total = RationalMatrix.zeros(len(evens), len(evens))
    for J in itertools.combinations(sorted(plus + (v,)), 4):
        cj = Fraction(1)
        for j in J:
            cj *= cw[j]
        total = total + a_matrix(n, J).scale(-cj)
    if cross_check and total != correction_matrix_definitional(g, v):
        raise AssertionError("correction matrix decomposition disagrees with c^2 I - X^t X")
    return CorrectionMatrix(n, v, plus, octopus_constant(g, v), evens, total)


# --------------------------------------------------------- Klein sums


def klein_sums(u: GroupAlgebraElement, J: Sequence[int], g: Permutation) -> tuple[Fraction, Fraction, Fraction]:
    n = u.n
    K = klein_group(J, n)
    alpha = klein_three_cycle(J, n)
    alpha2 = compose(alpha, alpha)
    out = []
    for a in (Permutation.identity(n), alpha, alpha2):
        ga = compose(g, a)
        out.append(sum((u[compose(ga, h)] for h in K), Fraction(0)))
    return tuple(out)  # type: ignore[return-value]


def _klein_sets(n: int, omega: Iterable[int], v: int | None) -> list[tuple[int, ...]]:
    v = n if v is None else v
    labels = sorted(set(omega) | {v})
    return list(itertools.combinations(labels, 4))


def klein_criterion(u_even: GroupAlgebraElement, omega_plus: Iterable[int], v: int | None = None) -> bool:
    """Equal Klein sums over every 4-set J of Omega_+ with v and every coset of A_J."""
    n = u_even.n
    omega = set(omega_plus)
    if len(omega) < 3:
        raise OctopusError("criterion needs |Omega_+| >= 3")
    if n > MAX_KLEIN_N:
        raise OctopusError(f"criterion limited to n <= {MAX_KLEIN_N}")
    if any(not g.is_even() for g in u_even.coeffs):
        raise OctopusError("criterion applies to elements supported on even permutations")
    for J in _klein_sets(n, omega, v):
        for g in coset_reps(n, J):
            a, b, c = klein_sums(u_even, J, g)
            if not a == b == c:
                return False
    return True


def klein_constraint_matrix(n: int, omega: Iterable[int], v: int | None = None) -> RationalMatrix:
    """Linear conditions (two per J and coset) on R[A_n] whose kernel the criterion describes."""
    evens = enumerate_group(n, "even")
    pos = {p: a for a, p in enumerate(evens)}
    rows = []
    for J in _klein_sets(n, omega, v):
        K = klein_group(J, n)
        alpha = klein_three_cycle(J, n)
        alpha2 = compose(alpha, alpha)
        for g in coset_reps(n, J):
            blocks = []
            for a in (Permutation.identity(n), alpha, alpha2):
                ga = compose(g, a)
                blocks.append([pos[compose(ga, h)] for h in K])
            for other in blocks[1:]:
                row = [Fraction(0)] * len(evens)
                for k in blocks[0]:
                    row[k] += 1
                for k in other:
                    row[k] -= 1
                rows.append(row)
    if not rows:
        return RationalMatrix.zeros(0, len(evens))
    return RationalMatrix(rows, len(evens))


@dataclass
class FullKernelReport:
    n: int
    vertex: int
    omega_plus: tuple[int, ...]
    direct_dim: int
    characterized_dim: int
    equal: bool
    direct_basis: list[tuple[Fraction, ...]] = field(repr=False, default_factory=list)


def full_kernel_direct(g: WeightedGraph, v: int) -> list[tuple[Fraction, ...]]:
    """Exact nullspace of the scaled octopus on R[S_n] (enumeration order)."""
    return nullspace(full_operator_matrix(octopus(g, v, scaled=True)))


def full_kernel_characterized(g: WeightedGraph, v: int) -> list[tuple[Fraction, ...]]:
    """Kernel built from the Klein-sum conditions on the even part and u_o = -X u_e / c."""
    n = g.n
    op = octopus(g, v, scaled=True)
    c = op.constant
    perms = enumerate_group(n)
    even, odd = even_odd_blocks(n)
    plus = omega_plus(g, v)
    if len(plus) >= 3:
        ue_basis = nullspace(klein_constraint_matrix(n, plus, v))
    else:
        ue_basis = [tuple(Fraction(int(i == j)) for i in range(len(even))) for j in range(len(even))]
    full = full_operator_matrix(op)
    x = full.submatrix(odd, even)
    out = []
    for ue in ue_basis:
        uo = [-y / c for y in x @ ue]
        vec = [Fraction(0)] * len(perms)
        for a, val in zip(even, ue):
            vec[a] = val
        for a, val in zip(odd, uo):
            vec[a] = val
        out.append(tuple(vec))
    return out


def full_kernel_check(g: WeightedGraph, v: int) -> FullKernelReport:
    direct = full_kernel_direct(g, v)
    char = full_kernel_characterized(g, v)
    size = factorial(g.n)
    return FullKernelReport(g.n, v, omega_plus(g, v), len(direct), len(char), span_equal(direct, char, size), direct)


# ------------------------------------------------ kernels on Specht modules


def octopus_kernel_on_specht(g: WeightedGraph, v: int, mu) -> list[tuple[Fraction, ...]]:
    """Exact nullspace of X(Delta | S^mu) in the standard polytabloid basis."""
    mu = as_partition(mu)
    module = specht_module(mu)
    scaled = nullspace(module.operator_matrix(octopus(g, v, scaled=True)))
    unscaled = nullspace(module.operator_matrix(octopus(g, v, scaled=False)))
    if not span_equal(scaled, unscaled, module.dim):
        raise AssertionError("scaling changed the kernel")
    return scaled


def _move_vertex_last(g: WeightedGraph, v: int) -> WeightedGraph:
    if v == g.n:
        return g
    mapping = {i: i for i in range(1, g.n + 1)}
    mapping[v], mapping[g.n] = g.n, v
    return g.relabel(mapping)


def induced_slice(mu: Partition) -> list[Tableau]:
    """Standard tableaux with n in the last row, in basis order."""
    n = mu.n
    return [t for t in standard_tableaux(mu) if n in t.rows[-1]]


def kernel_intersection_with_induced(g: WeightedGraph, v: int, mu) -> list[tuple[Fraction, ...]]:
    """Kernel vectors of X(Delta | S^mu) supported on tableaux with n in the last row.

    Coordinates are listed over :func:`induced_slice`.  When v is not n the
    graph is relabeled by swapping v and n first.
    """
    mu = as_partition(mu)
    n = g.n
    if mu.n != n or mu not in (Partition((n - 2, 2)), Partition((n - 2, 1, 1))):
        raise OctopusError(f"shape must be (n-2,2) or (n-2,1,1) for n={n}, got {mu}")
    h = _move_vertex_last(g, v)
    module = specht_module(mu)
    x = module.operator_matrix(octopus(h, n, scaled=True))
    cols = [module.index(t) for t in induced_slice(mu)]
    return nullspace(x.submatrix(list(range(module.dim)), cols))


# ------------------------------------------------------- Young symmetrizers


def _row_group(t: Tableau) -> list[Permutation]:
    n = t.n
    perms = []
    per_row = [list(itertools.permutations(r)) for r in t.rows]
    for combo in itertools.product(*per_row):
        img = list(range(1, n + 1))
        for row, new in zip(t.rows, combo):
            for a, b in zip(row, new):
                img[a - 1] = b
        perms.append(Permutation(img))
    return perms


def row_symmetrizer(t: Tableau) -> GroupAlgebraElement:
    return GroupAlgebraElement.group_sum(_row_group(t), t.n)


def column_antisymmetrizer(t: Tableau) -> GroupAlgebraElement:
    conj = Tableau(tuple(t.columns()))
    return GroupAlgebraElement.group_sum(_row_group(conj), t.n, signed=True)


def young_symmetrizer(t: Tableau) -> GroupAlgebraElement:
    """Row symmetrizer times column antisymmetrizer."""
    if t.n > MAX_SYMMETRIZER_N:
        raise OctopusError(f"symmetrizers limited to n <= {MAX_SYMMETRIZER_N}")
    return row_symmetrizer(t) * column_antisymmetrizer(t)


def relabeling(s: Tableau, t: Tableau) -> Permutation:
    """The permutation sigma with sigma t = s (same shape)."""
    img = [0] * t.n
    for rs, rt in zip(s.rows, t.rows):
        for a, b in zip(rs, rt):
            img[b - 1] = a
    return Permutation(img)


@dataclass
class ShapeSymmetrizerResult:
    shape: Partition
    dim: int
    scalar: int
    square_ok: bool
    nonorthogonal_pairs: list[tuple[str, str]]
    span_rank: int

    @property
    def ok(self) -> bool:
        return self.square_ok and not self.nonorthogonal_pairs and self.span_rank == self.dim


@dataclass
class SymmetrizerReport:
    n: int
    shapes: list[ShapeSymmetrizerResult]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.shapes)

    @property
    def squares_ok(self) -> bool:
        return all(r.square_ok for r in self.shapes)

    @property
    def orthogonality_ok(self) -> bool:
        return all(not r.nonorthogonal_pairs for r in self.shapes)

    @property
    def spans_ok(self) -> bool:
        return all(r.span_rank == r.dim for r in self.shapes)


def symmetrizer_identity_suite(n: int) -> SymmetrizerReport:
    """Check Y_t^2 = (n!/dim) Y_t, Y_s Y_t = 0 (s != t) and the span of sigma_{s,t} Y_t."""
    if not 1 <= n <= 5:
        raise OctopusError("symmetrizer suite limited to n <= 5")
    perms = enumerate_group(n)
    out = []
    for mu in partitions(n):
        tabs = list(standard_tableaux(mu))
        dim = len(tabs)
        scalar = factorial(n) // dim
        ys = {t: young_symmetrizer(t) for t in tabs}
        square_ok = all(ys[t] * ys[t] == ys[t].scale(scalar) for t in tabs)
        bad = []
        for s, t in itertools.permutations(tabs, 2):
            if not (ys[s] * ys[t]).is_zero():
                bad.append((str(s), str(t)))
        t0 = tabs[0]
        vecs = [(GroupAlgebraElement.of(relabeling(s, t0)) * ys[t0]).to_vector(perms) for s in tabs]
        out.append(ShapeSymmetrizerResult(mu, dim, scalar, square_ok, bad, rank(vecs)))
    return SymmetrizerReport(n, out)
