"""Hand-derived transposition actions on the (n-2,2) and (n-2,1,1) Specht bases.

Tableaux used below:
  two-row  t_{i,j} = [[1, rest], [i, j]],  t_j = t_{j,n}
  hook     h_{i,j} = [[1, rest], [i], [j]], h_j = h_{j,n}, with h_{i,j} = -h_{j,i}
Each checker returns a list of (case description, passed) pairs.
"""

from __future__ import annotations

from fractions import Fraction

from interchange_gap.facts import hook_tableau, two_row_tableau
from interchange_gap.specht import Partition, specht_module


def _vector(module, terms):
    out = [Fraction(0)] * module.dim
    for coeff, tab in terms:
        out[module.index(tab)] += coeff
    return tuple(out)


def _image(module, i, j, tab):
    m = module.transposition_matrix(i, j)
    return tuple(m.column(module.index(tab)))


def two_row_cases(n: int) -> list[tuple[str, bool]]:
    mod = specht_module(Partition((n - 2, 2)))
    t = {j: two_row_tableau(n, j, n) for j in range(2, n)}
    t2j = {j: two_row_tableau(n, 2, j) for j in range(4, n)}
    expected = {
        ((1, 2), 2): [(-1, t[2])],
        ((1, n), 2): [(1, t[3])],
        ((2, n), 2): [(1, t[2]), (-1, t[3])],
        ((1, 2), 3): [(1, t[3]), (-1, t[2])],
        ((1, n), 3): [(1, t[2])],
    }
    for j in range(3, n):
        expected[((2, n), j)] = [(-1, t[j])]
    for j in range(4, n):
        expected[((1, 2), j)] = [(1, t[j]), (-1, t[2]), (1, t2j[j])]
        expected[((1, n), j)] = [(1, t[2]), (-1, t2j[j])]
    return [
        (f"n={n} {pair} e_t{j}", _image(mod, *pair, t[j]) == _vector(mod, terms))
        for (pair, j), terms in sorted(expected.items(), key=lambda kv: (kv[0][1], kv[0][0]))
    ]


def _hook(n: int, i: int, j: int):
    """Signed standard form of h_{i,j}."""
    return (1, hook_tableau(n, i, j)) if i < j else (-1, hook_tableau(n, j, i))


def hook_cases(n: int) -> list[tuple[str, bool]]:
    mod = specht_module(Partition((n - 2, 1, 1)))
    cases = []
    for j in range(2, n):
        tj = hook_tableau(n, j, n)
        for k in range(1, n + 1):
            for l in range(k + 1, n + 1):
                pair = {k, l}
                if pair in ({1, j}, {1, n}, {j, n}):
                    terms = [(-1, tj)]
                elif not pair & {1, j, n}:
                    terms = [(1, tj)]
                else:
                    other = (pair - {1, j, n}).pop()
                    fixed = (pair & {1, j, n}).pop()
                    s, hjl = _hook(n, j, other)
                    if fixed == j:
                        terms = [(1, hook_tableau(n, other, n))]
                    elif fixed == n:
                        terms = [(s, hjl)]
                    else:
                        terms = [(1, tj), (-1, hook_tableau(n, other, n)), (-s, hjl)]
                cases.append((f"n={n} ({k},{l}) e_h{j}", _image(mod, k, l, tj) == _vector(mod, terms)))
    return cases
