import random
from fractions import Fraction as F
from math import factorial

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from interchange_gap.exactla import RationalMatrix, nullspace, span_equal, sym_eig
from interchange_gap.graphcore import WeightedGraph, schur_reduce
from interchange_gap.octopus import (
    OctopusError,
    a_matrix,
    column_antisymmetrizer,
    correction_matrix,
    correction_matrix_definitional,
    full_kernel_check,
    kernel_intersection_with_induced,
    klein_criterion,
    klein_sums,
    octopus,
    octopus_by_difference,
    octopus_kernel_on_specht,
    octopus_psd_check,
    row_symmetrizer,
    symmetrizer_identity_suite,
    young_symmetrizer,
)
from interchange_gap.permgroup import GroupAlgebraElement, Permutation, enumerate_group
from interchange_gap.processes import full_operator_matrix
from interchange_gap.specht import Partition, Tableau, operator_matrix

from strategies import connected_graphs, small_rational

FOUR_CYCLE = WeightedGraph(4, {(1, 3): 1, (2, 3): 1, (1, 4): 1, (2, 4): 1})
tab = Tableau.parse


def star(*cs, extra=None):
    """Vertex n = len(cs) + 1 joined to 1..n-1 with weights cs, plus optional edges among the rest."""
    n = len(cs) + 1
    w = {(i, n): c for i, c in enumerate(cs, start=1) if c}
    w.update(extra or {})
    return WeightedGraph(n, w)


def evens_element(n, vec):
    return GroupAlgebraElement(n, dict(zip(enumerate_group(n, "even"), vec)))


# ---------------------------------------------------------------- oracles


def test_octopus_four_cycle():
    op = octopus(FOUR_CYCLE, 4, scaled=True)
    # c = 3; c0 c1 (0,1) with c0 = -2 gives weight 2 on (1,4)
    assert op.terms == {(1, 4): 2, (2, 4): 2, (1, 2): -1}
    assert op.constant == 3


@given(connected_graphs(min_n=3, max_n=6), st.data())
def test_octopus_equals_operator_difference(g, data):
    v = data.draw(st.integers(1, g.n))
    unscaled = octopus(g, v, scaled=False)
    assert octopus_by_difference(g, v).terms == unscaled.terms
    s = g.degree(v)
    assert {k: w * s for k, w in unscaled.terms.items()} == octopus(g, v, scaled=True).terms


def test_octopus_pendant_vertex_spectrum():
    c = F(3, 2)
    g = WeightedGraph(4, {(1, 4): c, (1, 2): 1, (2, 3): 1})
    vals = sym_eig(full_operator_matrix(octopus(g, 4, scaled=False))).eigenvalues
    assert np.allclose(sorted(set(np.round(vals, 9))), [0, 2 * float(c)])


def test_octopus_rejects_isolated_vertex():
    with pytest.raises(OctopusError):
        octopus(WeightedGraph(3, {(1, 2): 1}), 3)


@pytest.mark.parametrize("seed", range(5))
def test_octopus_psd_random(seed):
    rng = random.Random(seed)
    for n in (4, 5):
        w = {(i, j): F(rng.randint(0, 8), rng.randint(1, 4)) for i in range(1, n + 1) for j in range(i + 1, n + 1)}
        w[(1, n)] = F(1)
        assert octopus_psd_check(WeightedGraph(n, w), n)


def test_correction_matrix_small_cases():
    g3 = WeightedGraph(3, {(1, 3): F(2), (2, 3): F(5, 3), (1, 2): 1})
    assert correction_matrix(g3, 3).matrix.is_zero()
    two_arms = star(F(1, 2), 3, 0, extra={(1, 3): 1, (2, 3): 1})
    assert correction_matrix(two_arms, 4).matrix.is_zero()


def test_correction_matrix_uniform_four():
    cm = correction_matrix(star(1, 1, 1), 4)
    a = a_matrix(4, (1, 2, 3, 4))
    assert cm.matrix == a.scale(3)
    vals = sym_eig(a).eigenvalues
    assert np.allclose(vals, [0] * 10 + [12, 12], atol=1e-9)


def test_klein_criterion_examples():
    evens = enumerate_group(4, "even")
    const = GroupAlgebraElement(4, {g: 1 for g in evens})
    assert klein_criterion(const, (1, 2, 3))
    y = young_symmetrizer(tab("[[1,2],[3,4]]")).even_part()
    assert klein_sums(y, (1, 2, 3, 4), Permutation.identity(4)) == (4, 0, -4)
    assert not klein_criterion(y, (1, 2, 3))
    with pytest.raises(OctopusError):
        klein_criterion(const, (1, 2))


@pytest.mark.parametrize("n,cs", [(4, (1, 2, 3)), (5, (1, F(1, 2), 2, 0)), (5, (1, 1, 1, 1))])
def test_klein_criterion_on_correction_kernel(n, cs):
    g = star(*cs, extra={(1, 2): 1})
    cm = correction_matrix(g, n)
    ker = nullspace(cm.matrix)
    rng = random.Random(n)
    for _ in range(3):
        coeffs = [F(rng.randint(-3, 3)) for _ in ker]
        vec = [sum((a * k[i] for a, k in zip(coeffs, ker)), F(0)) for i in range(len(cm.index))]
        assert klein_criterion(evens_element(n, vec), cm.omega_plus, n)


def test_specht_kernels():
    for c1, c2, c3 in [(1, 2, 3), (F(1, 2), 5, F(7, 3)), (2, 2, 2)]:
        c1, c2, c3 = F(c1), F(c2), F(c3)
        s = c1 + c2 + c3
        ker = octopus_kernel_on_specht(star(c1, c2, c3), 4, (2, 1, 1))
        # basis order: [[1,4],[2],[3]], [[1,3],[2],[4]], [[1,2],[3],[4]]
        assert span_equal(ker, [(s + c1, c3 - c1, c1 - c2)], 3)
        assert octopus_kernel_on_specht(star(c1, c2, c3), 4, (2, 2)) == []


def test_two_row_kernel_trivial_at_six():
    g = star(1, F(1, 2), 2, F(3, 4), 5, extra={(3, 4): 1})
    assert octopus_kernel_on_specht(g, 6, (4, 2)) == []


@pytest.mark.parametrize("n,expected", [(5, 2), (6, 5)])
def test_two_row_kernel_when_vertex_misses_some_labels(n, expected):
    """Degree 3 with n >= 5: the octopus lives in the group algebra of the four star labels.

    Restricting S^(n-2,2) to that S_4 (times the symmetric group on the rest):
    n = 5 gives S^(3,1) + S^(2,2); n = 6 gives S^(4)xS^(2) + S^(3,1)x(S^(2) + S^(1,1)) + S^(2,2)xS^(2).
    The octopus is zero on S^(4), has rank one on S^(3,1) and is invertible on S^(2,2),
    so the kernel has dimension 2 and 1 + 2*2 = 5 respectively.
    """
    g = star(1, F(1, 2), 2, *([0] * (n - 4)), extra={(i, i + 1): 1 for i in range(1, n - 1)})
    assert len(octopus_kernel_on_specht(g, n, (n - 2, 2))) == expected


def test_kernel_intersection_examples():
    g = star(1, 1, 0, 0, extra={(1, 3): 1, (3, 4): 1})
    assert span_equal(kernel_intersection_with_induced(g, 5, (3, 2)), [(3, 0, 0)], 3)
    g = star(1, 2, 0, extra={(1, 3): 1})
    assert span_equal(kernel_intersection_with_induced(g, 4, (2, 2)), [(5, -1)], 2)
    g = star(1, 2, 3, F(1, 2), extra={(1, 2): 1})
    assert kernel_intersection_with_induced(g, 5, (3, 1, 1)) == []


def test_young_symmetrizer_examples():
    t = tab("[[1,2],[3,4]]")
    e = GroupAlgebraElement.identity(4)
    k = GroupAlgebraElement.group_sum(
        [Permutation.identity(4)] + [Permutation.from_cycles(4, c) for c in ([(1, 2), (3, 4)], [(1, 3), (2, 4)], [(1, 4), (2, 3)])], 4
    )
    factored = (e + GroupAlgebraElement.of(Permutation.from_cycles(4, [(1, 2)]))) * (
        e - GroupAlgebraElement.of(Permutation.from_cycles(4, [(1, 3, 2)]))
    ) * k
    assert young_symmetrizer(t) == factored
    assert young_symmetrizer(t) == row_symmetrizer(t) * column_antisymmetrizer(t)

    everything = enumerate_group(4)
    assert young_symmetrizer(tab("[[1,2,3,4]]")) == GroupAlgebraElement(4, {g: 1 for g in everything})
    assert young_symmetrizer(tab("[[1],[2],[3],[4]]")) == GroupAlgebraElement(4, {g: g.sign() for g in everything})


def test_symmetrizer_scalars():
    scalars = {str(r.shape): r.scalar for r in symmetrizer_identity_suite(4).shapes}
    assert scalars["(2,2)"] == 12
    assert {str(r.shape): r.scalar for r in symmetrizer_identity_suite(3).shapes}["(2,1)"] == 3
    rep5 = symmetrizer_identity_suite(5)
    assert {str(r.shape): r.scalar for r in rep5.shapes}["(3,2)"] == 24


@pytest.mark.parametrize("n", [2, 3, 4])
def test_symmetrizer_suite_small(n):
    assert symmetrizer_identity_suite(n).ok


def test_symmetrizer_suite_five_squares_and_spans():
    rep = symmetrizer_identity_suite(5)
    assert rep.squares_ok and rep.spans_ok


# ---------------------------------------------------------------- properties


@st.composite
def vertex_weights(draw, n):
    cs = draw(st.lists(st.one_of(st.just(F(0)), small_rational), min_size=n - 1, max_size=n - 1))
    if not any(cs):
        cs[0] = F(1)
    return cs


@given(st.integers(3, 5).flatmap(lambda n: vertex_weights(n)))
@settings(max_examples=10)
def test_correction_matrix_decomposition(cs):
    g = star(*cs, extra={(1, 2): 1})
    n = g.n
    assert correction_matrix(g, n, cross_check=False).matrix == correction_matrix_definitional(g, n)


@given(vertex_weights(4))
@settings(max_examples=10)
def test_full_kernel_routes_agree_n4(cs):
    rep = full_kernel_check(star(*cs), 4)
    assert rep.equal and rep.direct_dim == rep.characterized_dim


@given(st.integers(4, 5).flatmap(lambda n: vertex_weights(n)), st.data())
@settings(max_examples=15)
def test_scaling_keeps_specht_kernels(cs, data):
    g = star(*cs, extra={(1, 2): 1})
    from interchange_gap.specht import partitions

    mu = data.draw(st.sampled_from(partitions(g.n)))
    a = operator_matrix(octopus(g, g.n, scaled=True), mu)
    b = operator_matrix(octopus(g, g.n, scaled=False), mu)
    assert span_equal(nullspace(a), nullspace(b), a.cols)


@given(st.integers(4, 6), st.data())
@settings(max_examples=12)
def test_two_row_kernel_trivial_when_vertex_sees_everything(n, data):
    cs = [c or F(1) for c in data.draw(vertex_weights(n))]
    g = star(*cs, extra={(i, i + 1): 1 for i in range(1, n - 1)})
    assert octopus_kernel_on_specht(g, n, (n - 2, 2)) == []


@pytest.mark.xfail(strict=True, reason="degree >= 3 alone does not force a trivial kernel once n >= 5")
def test_two_row_kernel_trivial_for_any_degree_three_vertex():
    for n in (5, 6, 7):
        g = star(1, F(1, 2), 2, *([0] * (n - 4)), extra={(i, i + 1): 1 for i in range(1, n - 1)})
        assert octopus_kernel_on_specht(g, n, (n - 2, 2)) == []


def _sympy_symmetrizer(rows, n):
    """Row symmetrizer times column antisymmetrizer, built from sympy permutations (0-based)."""
    import itertools as it

    from sympy.combinatorics import Permutation as SP

    def group(blocks):
        out = []
        for choice in it.product(*(it.permutations(b) for b in blocks)):
            img = list(range(n))
            for b, p in zip(blocks, choice):
                for x, y in zip(b, p):
                    img[x - 1] = y - 1
            out.append(SP(img))
        return out

    cols = [tuple(r[c] for r in rows if len(r) > c) for c in range(len(rows[0]))]
    rsym = {p: 1 for p in group(rows)}
    csym = {p: p.signature() for p in group(cols)}
    return _sympy_mult(rsym, csym)


def _sympy_mult(a, b):
    out = {}
    for p, x in a.items():
        for q, y in b.items():
            r = q * p  # sympy applies q first, so this is p after q
            out[r] = out.get(r, 0) + x * y
    return {k: v for k, v in out.items() if v}


@pytest.mark.parametrize(
    "s,t",
    [
        (((1, 2, 3), (4, 5)), ((1, 3, 5), (2, 4))),
        (((1, 2), (3, 4), (5,)), ((1, 4), (2, 5), (3,))),
    ],
)
def test_symmetrizer_products_at_five_independent(s, t):
    """Independent sympy computation: for these standard pairs Y_s Y_t is nonzero while Y_t Y_s vanishes."""
    ys, yt = _sympy_symmetrizer(s, 5), _sympy_symmetrizer(t, 5)
    assert _sympy_mult(ys, yt) and not _sympy_mult(yt, ys)
    ours_s, ours_t = young_symmetrizer(Tableau(s)), young_symmetrizer(Tableau(t))
    assert not (ours_s * ours_t).is_zero() and (ours_t * ours_s).is_zero()
    assert len(_sympy_mult(ys, yt)) == len((ours_s * ours_t).coeffs)
