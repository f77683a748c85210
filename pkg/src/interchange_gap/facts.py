"""Fixed suite of exact checks on small graphs, used by ``paper-facts``.

Every fact is computed with rational arithmetic except where noted, and
produces a :class:`Fact` row.  Random parameters come from a seeded
:class:`random.Random` so that runs are reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

from .exactla import RationalMatrix, char_poly, in_span, nullspace, poly_eval, poly_mul, rank, span_equal
from .graphcore import WeightedGraph, laplacian_from_weights, schur_complement
from .octopus import (
    octopus,
    symmetrizer_identity_suite,
    young_symmetrizer,
)
from .permgroup import GroupAlgebraElement, Permutation, klein_group
from .processes import exclusion_generator, full_operator_matrix, lift, permutation_module_generator
from .specht import Partition, Tableau, specht_module

F = Fraction


@dataclass(frozen=True)
class Fact:
    group: str
    name: str
    ok: bool
    detail: str = ""


def four_cycle(perturb: Fraction = F(0)) -> WeightedGraph:
    """The 4-cycle 1-3-2-4-1 with unit weights (c13 optionally perturbed)."""
    return WeightedGraph(4, {(1, 3): 1 + perturb, (2, 3): 1, (1, 4): 1, (2, 4): 1})


def _poly(*roots_and_leading) -> list[Fraction]:
    p = [F(1)]
    for r in roots_and_leading:
        p = poly_mul(p, [F(1), -F(r)])
    return p


def _nullity(m: RationalMatrix) -> int:
    return m.cols - rank(m)


def _shifted(m: RationalMatrix, lam) -> RationalMatrix:
    return m - RationalMatrix.identity(m.rows).scale(lam)


def _rand_pos(rng: random.Random, denom: int = 16, top: int = 32) -> Fraction:
    return F(rng.randint(1, top), denom)


# ------------------------------------------------------------------ facts


def four_cycle_facts(perturb: Fraction) -> Iterator[Fact]:
    g = four_cycle(perturb)
    a1 = laplacian_from_weights(4, g.weights)
    yield Fact("four-cycle", "walk spectrum is 0,2,2,4", char_poly(a1) == _poly(0, 2, 2, 4))
    a2 = exclusion_generator(g, 2).matrix
    yield Fact("four-cycle", "two-particle spectrum is 0,2,2,2,4,6", char_poly(a2) == _poly(0, 2, 2, 2, 4, 6))
    u1, u2 = (1, -1, 0, 0), (0, 0, 1, -1)
    eig = all(tuple(a1 @ u) == tuple(F(2 * x) for x in u) for u in (u1, u2))
    yield Fact("four-cycle", "walk eigenvectors for eigenvalue 2", eig)
    lifts = [lift(u1, 4, 1), lift(u2, 4, 1)]
    expected = [tuple(map(F, (0, 1, 1, -1, -1, 0))), tuple(map(F, (0, 1, -1, 1, -1, 0)))]
    yield Fact("four-cycle", "lifted eigenvectors", lifts == expected)
    extra = tuple(map(F, (0, 1, -1, -1, 1, 0)))
    in_eig = tuple(a2 @ extra) == tuple(2 * x for x in extra)
    yield Fact(
        "four-cycle",
        "extra eigenvector lies outside the lifted span",
        in_eig and not in_span(extra, lifts),
    )


def multiplicity_facts(perturb: Fraction) -> Iterator[Fact]:
    g = four_cycle(perturb)
    op = g.interchange_operator()
    cases = [
        ("interchange on all permutations", full_operator_matrix(op), 8),
        ("colored exclusion of type (2,1,1)", permutation_module_generator(g, "2,1,1").matrix, 5),
        ("colored exclusion of type (2,2)", permutation_module_generator(g, "2,2").matrix, 3),
    ]
    for label, m, expected in cases:
        got = _nullity(_shifted(m, 2))
        yield Fact("multiplicity", f"{label}: eigenvalue 2 has multiplicity {expected}", got == expected, f"got {got}")


def verdict_facts(perturb: Fraction) -> Iterator[Fact]:
    from .cli import verify_main

    report = verify_main(four_cycle(perturb))
    yield Fact("four-cycle-verdict", "uniform 4-cycle is the exception", report["verdict"] == "four-cycle-exception", report["verdict"])
    rows = {r["mu"]: r for r in report["table"]}
    ok = (
        abs(rows["(3,1)"]["lambda_min"] - 2) < 1e-8
        and rows["(3,1)"]["multiplicity"] == 2
        and abs(rows["(2,2)"]["lambda_min"] - 2) < 1e-8
        and rows["(2,2)"]["multiplicity"] == 1
        and rows["(2,1,1)"]["lambda_min"] > 2 + 1e-6
        and rows["(1,1,1,1)"]["lambda_min"] > 2 + 1e-6
    )
    yield Fact("four-cycle-verdict", "minimum eigenvalues per shape", ok)


def star_at_four(c1, c2, c3) -> WeightedGraph:
    return WeightedGraph(4, {(1, 4): c1, (2, 4): c2, (3, 4): c3, (1, 2): 1})


def _reorder(m: RationalMatrix, order: list[int]) -> RationalMatrix:
    return m.submatrix(order, order)


def det_trace_facts(rng: random.Random, samples: int = 50) -> Iterator[Fact]:
    mod = specht_module(Partition((2, 2)))
    ok_det = ok_tr = ok_mat = True
    for _ in range(samples):
        c1, c2, c3 = (_rand_pos(rng) for _ in range(3))
        s = c1 + c2 + c3
        x = mod.operator_matrix(octopus(star_at_four(c1, c2, c3), 4, scaled=False))
        ok_det &= x.det() == 12 * c1 * c2 * c3 / s
        ok_tr &= x.trace() == 2 * (c1 * c1 + c2 * c2 + c3 * c3 + c1 * c2 + c2 * c3 + c3 * c1) / s
        closed = RationalMatrix(
            [
                [c1 * c1 + 3 * c1 * c3 - c1 * c2 + 2 * c3 * c3 + c2 * c3, -c1 * c1 - 2 * c1 * c2 + 2 * c2 * c3 + c3 * c3],
                [-c1 * c1 - 2 * c1 * c3 + 2 * c2 * c3 + c2 * c2, c1 * c1 + 3 * c1 * c2 - c1 * c3 + 2 * c2 * c2 + c2 * c3],
            ]
        ).scale(1 / s)
        ok_mat &= x == closed
    yield Fact("det-trace", "determinant of the octopus on S^(2,2)", ok_det)
    yield Fact("det-trace", "trace of the octopus on S^(2,2)", ok_tr)
    yield Fact("det-trace", "closed-form matrix of the octopus on S^(2,2)", ok_mat)


def hook_kernel_facts(rng: random.Random, samples: int = 20) -> Iterator[Fact]:
    mod = specht_module(Partition((2, 1, 1)))
    t2, t3, t23 = (Tableau.parse(s) for s in ("[[1,3],[2],[4]]", "[[1,2],[3],[4]]", "[[1,4],[2],[3]]"))
    order = [mod.index(t) for t in (t2, t3, t23)]
    ok_ker = ok_mat = True
    for _ in range(samples):
        c1, c2, c3 = (_rand_pos(rng) for _ in range(3))
        s = c1 + c2 + c3
        g = star_at_four(c1, c2, c3)
        x = _reorder(mod.operator_matrix(octopus(g, 4, scaled=False)), order)
        closed = RationalMatrix(
            [
                [(c1 + c3) * (2 * s - c3) + 2 * c2 * c2, c2 * (c3 - c1), -s * (c3 - c1)],
                [-c3 * (c1 - c2), (c1 + c2) * (2 * s - c2) + 2 * c3 * c3, -s * (c1 - c2)],
                [-c3 * (2 * c1 + c2 + c3), c2 * (2 * c1 + c2 + c3), -c1 * (c2 + c3) + c2 * c2 + c3 * c3],
            ]
        ).scale(1 / s)
        ok_mat &= x == closed
        ker = nullspace(x)
        ok_ker &= span_equal(ker, [(c3 - c1, c1 - c2, s + c1)], 3)
    yield Fact("hook-kernel", "kernel of the octopus on S^(2,1,1)", ok_ker)
    yield Fact("hook-kernel", "closed-form matrix of the octopus on S^(2,1,1)", ok_mat)


def two_row_tableau(n: int, i: int, j: int) -> Tableau:
    """[[1, rest...], [i, j]] for 2 <= i < j <= n."""
    rest = [k for k in range(2, n + 1) if k not in (i, j)]
    return Tableau(((1, *rest), (i, j)))


def hook_tableau(n: int, i: int, j: int) -> Tableau:
    """[[1, rest...], [i], [j]] for distinct i, j in 2..n (standard only when i < j)."""
    rest = [k for k in range(2, n + 1) if k not in (i, j)]
    return Tableau(((1, *rest), (i,), (j,)))


def rank_one_facts(rng: random.Random, n_values=(4, 5, 6, 7), samples: int = 4) -> Iterator[Fact]:
    ok = True
    for n in n_values:
        mod = specht_module(Partition((n - 2, 2)))
        t2, t3 = two_row_tableau(n, 2, n), two_row_tableau(n, 3, n)
        idx = [mod.index(t2), mod.index(t3)]
        for _ in range(samples):
            c1, c2 = _rand_pos(rng), _rand_pos(rng)
            g = two_neighbor_graph(rng, n, c1, c2)
            x = mod.operator_matrix(octopus(g, n, scaled=True))
            block = x.submatrix(idx, idx)
            left = RationalMatrix([[c1], [-(c1 + c2)]])
            right = RationalMatrix([[c1 - c2, -(c1 + 2 * c2)]])
            others = [k for k in range(mod.dim) if k not in idx]
            ok &= block == left @ right and x.submatrix(others, idx).is_zero()
    yield Fact("rank-one", "octopus restricted to e_t2, e_t3 is a rank-one product", ok)


def two_neighbor_graph(rng: random.Random, n: int, c1: Fraction, c2: Fraction) -> WeightedGraph:
    """Connected graph where vertex n touches only 1 and 2, with a random path-plus-extras on 1..n-1."""
    w: dict[tuple[int, int], Fraction] = {(1, n): c1, (2, n): c2}
    for k in range(1, n - 1):
        w[(k, k + 1)] = _rand_pos(rng)
    for i in range(1, n - 1):
        for j in range(i + 2, n):
            if rng.random() < 0.4:
                w[(i, j)] = _rand_pos(rng)
    return WeightedGraph(n, w)


def _reduced_cycle_weights(q: Fraction, r: Fraction) -> dict[tuple[int, int], Fraction]:
    return {(1, 2): F(1), (2, 3): F(1), (1, 4): F(1), (3, 4): 1 - q * r / (q + r), (3, 5): q, (4, 5): r}


def reduced_cycle_facts(rng: random.Random, samples: int = 20) -> Iterator[Fact]:
    ok_fac = ok_sign = ok_h = True
    for _ in range(samples):
        q, r = _rand_pos(rng), _rand_pos(rng)
        lg = laplacian_from_weights(5, _reduced_cycle_weights(q, r))
        p = [F(1), -2 * (q * q + q * r + r * r + 3 * q + 3 * r) / (q + r),
             2 * (5 * q * q + 7 * q * r + 5 * r * r + 4 * q + 4 * r) / (q + r), -10 * (q + r)]
        ok_fac &= char_poly(lg) == poly_mul(_poly(0, 2), p)
        ok_sign &= poly_eval(p, 0) < 0 < poly_eval(p, 2)
        ok_h &= schur_complement(lg, 4) == laplacian_from_weights(4, {(1, 2): 1, (2, 3): 1, (3, 4): 1, (1, 4): 1})
    yield Fact("reduced-cycle", "reduction at 5 is the uniform 4-cycle", ok_h)
    yield Fact("reduced-cycle", "characteristic polynomial factors as l(l-2)P(l)", ok_fac)
    yield Fact("reduced-cycle", "P(0) < 0 < P(2)", ok_sign)


def _k3_reduction_weights(d: Fraction) -> dict[tuple[int, int], Fraction]:
    return {(1, 3): F(1), (2, 3): F(1), (1, 4): d / (d - 1), (2, 4): d}


def k3_reduction_facts(rng: random.Random, samples: int = 20) -> Iterator[Fact]:
    ok_fac = ok_sign = ok_h = True
    for _ in range(samples):
        d = F(1)
        while d in (0, 1):
            d = F(rng.randint(1, 64), 16)
        lg = laplacian_from_weights(4, _k3_reduction_weights(d))
        qpoly = [F(1), (-2 * d * d - d + 1) / (d - 1), 4 * d * d / (d - 1)]
        ok_fac &= char_poly(lg) == poly_mul(_poly(0, 3), qpoly)
        ok_sign &= poly_eval(qpoly, 0) * poly_eval(qpoly, 3) < 0
        ok_sign &= poly_eval(qpoly, 0) == 4 * d * d / (d - 1)
        ok_h &= schur_complement(lg, 3) == laplacian_from_weights(3, {(1, 2): 1, (1, 3): 1, (2, 3): 1})
    yield Fact("k3-reduction", "reduction at 4 is the uniform triangle", ok_h)
    yield Fact("k3-reduction", "characteristic polynomial factors as l(l-3)Q(l)", ok_fac)
    yield Fact("k3-reduction", "Q(0) Q(3) < 0", ok_sign)


def _five_cycle_weights(a: Fraction) -> dict[tuple[int, int], Fraction]:
    return {(1, 4): F(1), (2, 3): F(1), (1, 5): a, (2, 5): 2 * a / (3 * a - 1), (3, 4): 2 * a / (a - 1)}


def five_cycle_quartic(a: Fraction) -> list[Fraction]:
    """A candidate quartic P(l, a) with the right sign pattern that is not the characteristic polynomial."""
    return [
        3 * a * a - 4 * a + 1,
        -(44 * a * a - 28 * a + 4),
        184 * a * a - 84 * a + 12,
        -(288 * a * a - 96 * a + 16),
        128 * a * a,
    ]


def five_cycle_cubic(a: Fraction) -> list[Fraction]:
    """R(l, a) with (a-1)(3a-1) det(l I - L_G) = l (l-2) R(l, a)."""
    return [
        3 * a * a - 4 * a + 1,
        -(6 * a**3 + 14 * a * a - 14 * a + 2),
        39 * a**3 + 8 * a * a - 7 * a,
        -40 * a**3,
    ]


def five_cycle_facts(rng: random.Random, samples: int = 10) -> Iterator[Fact]:
    ok_g = ok_h = ok_sign = ok_candidate = True
    candidate_is_charpoly = False
    for _ in range(samples):
        a = 1 + F(rng.randint(1, 64), 16)
        lg = laplacian_from_weights(5, _five_cycle_weights(a))
        cp = [x * (a - 1) * (3 * a - 1) for x in char_poly(lg)]
        r = five_cycle_cubic(a)
        ok_g &= cp == poly_mul(_poly(0, 2), r)
        # a sign change of R on (0, 2) puts a root of L_G strictly below 2
        ok_sign &= poly_eval(r, 0) < 0 < poly_eval(r, 2)
        p = five_cycle_quartic(a)
        ok_candidate &= poly_eval(p, 0) == 128 * a * a and poly_eval(p, 0) > 0 > poly_eval(p, 2)
        candidate_is_charpoly |= cp == poly_mul([F(1), F(0)], p)
        top = 16 * a * a / ((a - 1) * (3 * a + 1))
        ok_h &= char_poly(schur_complement(lg, 4)) == _poly(0, 2, 2, top) and top > 2
    yield Fact("five-cycle", "reduced graph has second eigenvalue 2", ok_h)
    yield Fact("five-cycle", "characteristic polynomial is l (l-2) R(l, a) / ((a-1)(3a-1))", ok_g)
    yield Fact("five-cycle", "R(0, a) < 0 < R(2, a), so the second eigenvalue of G is below 2", ok_sign)
    yield Fact("five-cycle", "candidate quartic: P(0, a) = 128 a^2 > 0 > P(2, a)", ok_candidate)
    yield Fact("five-cycle", "candidate quartic differs from the characteristic polynomial", not candidate_is_charpoly)


def klein_factor_facts() -> Iterator[Fact]:
    n = 4
    t = Tableau.parse("[[1,2],[3,4]]")
    e = GroupAlgebraElement.identity(n)
    left = e + GroupAlgebraElement.of(Permutation.from_cycles(n, [(1, 2)]))
    mid = e - GroupAlgebraElement.of(Permutation.from_cycles(n, [(1, 3, 2)]))
    k = GroupAlgebraElement.group_sum(klein_group((1, 2, 3, 4)), n)
    y = young_symmetrizer(t)
    yield Fact("klein-factor", "Y_t = (Id+(1,2))(Id-(1,3,2)) K+ for t=[[1,2],[3,4]]", y == left * mid * k)
    yield Fact("klein-factor", "even part of Y_t is (Id-(1,3,2)) K+", y.even_part() == mid * k)


def symmetrizer_facts(n_values=(4, 5)) -> Iterator[Fact]:
    for n in n_values:
        rep = symmetrizer_identity_suite(n)
        yield Fact("symmetrizers", f"n={n}: Y_t^2 = (n!/dim) Y_t", rep.squares_ok)
        bad = [f"{s} {t}" for r in rep.shapes for s, t in r.nonorthogonal_pairs]
        yield Fact("symmetrizers", f"n={n}: Y_s Y_t = 0 for distinct standard s, t", rep.orthogonality_ok, "; ".join(bad))
        yield Fact("symmetrizers", f"n={n}: sigma_(s,t) Y_t independent", rep.spans_ok)


GROUPS: dict[str, Callable[..., Iterator[Fact]]] = {
    "four-cycle": lambda rng, p: four_cycle_facts(p),
    "multiplicity": lambda rng, p: multiplicity_facts(p),
    "four-cycle-verdict": lambda rng, p: verdict_facts(p),
    "det-trace": lambda rng, p: det_trace_facts(rng),
    "hook-kernel": lambda rng, p: hook_kernel_facts(rng),
    "rank-one": lambda rng, p: rank_one_facts(rng),
    "reduced-cycle": lambda rng, p: reduced_cycle_facts(rng),
    "k3-reduction": lambda rng, p: k3_reduction_facts(rng),
    "five-cycle": lambda rng, p: five_cycle_facts(rng),
    "klein-factor": lambda rng, p: klein_factor_facts(),
    "symmetrizers": lambda rng, p: symmetrizer_facts(),
}


def run_facts(only: list[str] | None = None, seed: int = 0, perturb: Fraction = F(0)) -> list[Fact]:
    """Run the selected groups (all by default); each group gets its own seeded RNG."""
    names = list(GROUPS) if not only else [g for g in GROUPS if any(o in g for o in only)]
    out: list[Fact] = []
    for name in names:
        rng = random.Random(f"{seed}:{name}")
        out.extend(GROUPS[name](rng, perturb))
    return out
