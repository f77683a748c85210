"""Permutations of {1..n}, group enumeration, Klein cosets and the group algebra.

Permutations are image tuples: ``p.images[i-1]`` is the image of ``i``.
Products compose right to left, ``(a * b)(x) = a(b(x))``, which is also the
multiplication of the group algebra.
"""

from __future__ import annotations

import itertools
import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

MAX_ENUM_N = 8


class PermutationError(ValueError):
    pass


class Permutation:
    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int]):
        images = tuple(images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise PermutationError(f"not a bijection of 1..{len(images)}: {images}")
        self.images = images
        self._hash = hash(images)

    @classmethod
    def _trusted(cls, images: tuple[int, ...]) -> "Permutation":
        p = object.__new__(cls)
        p.images = images
        p._hash = hash(images)
        return p

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls._trusted(tuple(range(1, n + 1)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Iterable[int]]) -> "Permutation":
        img = list(range(1, n + 1))
        seen: set[int] = set()
        for cyc in cycles:
            cyc = list(cyc)
            for x in cyc:
                if not 1 <= x <= n or x in seen:
                    raise PermutationError(f"bad cycle entry {x}")
                seen.add(x)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a - 1] = b
        return cls._trusted(tuple(img))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> "Permutation":
        if i == j:
            raise PermutationError("transposition needs distinct points")
        return cls.from_cycles(n, [(i, j)])

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, x in enumerate(self.images, start=1):
            inv[x - 1] = i
        return Permutation._trusted(tuple(inv))

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __repr__(self) -> str:
        return f"Permutation({format_cycles(self)})"

    def is_identity(self) -> bool:
        return all(x == i for i, x in enumerate(self.images, start=1))

    def cycles(self, include_fixed: bool = False) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for start in range(1, self.n + 1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            x = self(start)
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = self(x)
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles(include_fixed=True)), reverse=True))

    def support(self) -> frozenset[int]:
        return frozenset(i for i, x in enumerate(self.images, start=1) if i != x)

    def parity(self) -> int:
        """0 for even, 1 for odd."""
        return sum(len(c) - 1 for c in self.cycles()) % 2

    def is_even(self) -> bool:
        return self.parity() == 0

    def sign(self) -> int:
        return -1 if self.parity() else 1

    def lehmer_code(self) -> tuple[int, ...]:
        imgs = self.images
        return tuple(sum(1 for b in imgs[i + 1:] if b < a) for i, a in enumerate(imgs))

    def rank(self) -> int:
        """Position in the lexicographic enumeration of the full group."""
        code = self.lehmer_code()
        n = len(code)
        return sum(c * math.factorial(n - 1 - i) for i, c in enumerate(code))


def compose(a: Permutation, b: Permutation) -> Permutation:
    if a.n != b.n:
        raise PermutationError(f"degree mismatch {a.n} vs {b.n}")
    ai = a.images
    return Permutation._trusted(tuple(ai[x - 1] for x in b.images))


def format_cycles(p: Permutation) -> str:
    cyc = p.cycles()
    if not cyc:
        return "()"
    return "".join("(" + " ".join(str(x) for x in c) + ")" for c in cyc)


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, n: int) -> Permutation:
    """Parse cycle notation such as ``(1 3 2)(4 5)``; commas are also accepted."""
    stripped = text.strip()
    if not stripped or stripped in ("()", "Id", "id"):
        return Permutation.identity(n)
    if _CYCLE_RE.sub("", stripped).strip():
        raise PermutationError(f"cannot parse cycle notation {text!r}")
    cycles = []
    for body in _CYCLE_RE.findall(stripped):
        parts = [x for x in re.split(r"[,\s]+", body.strip()) if x]
        if not parts:
            continue
        try:
            cycles.append([int(x) for x in parts])
        except ValueError as exc:
            raise PermutationError(f"cannot parse cycle notation {text!r}") from exc
    return Permutation.from_cycles(n, cycles)


def _check_enum(n: int) -> None:
    if not 1 <= n <= MAX_ENUM_N:
        raise PermutationError(f"group enumeration limited to 1 <= n <= {MAX_ENUM_N}, got {n}")


@lru_cache(maxsize=None)
def _enumerate(n: int, even: bool) -> tuple[Permutation, ...]:
    perms = (Permutation._trusted(p) for p in itertools.permutations(range(1, n + 1)))
    if even:
        return tuple(p for p in perms if p.is_even())
    return tuple(perms)


def enumerate_group(n: int, parity_filter: str = "all") -> list[Permutation]:
    """All (or all even) permutations of 1..n in lexicographic order of images."""
    _check_enum(n)
    if parity_filter not in ("all", "even"):
        raise PermutationError(f"parity_filter must be 'all' or 'even', got {parity_filter!r}")
    return list(_enumerate(n, parity_filter == "even"))


def _check_four_set(J: Iterable[int]) -> tuple[int, int, int, int]:
    js = tuple(sorted(set(J)))
    if len(js) != 4:
        raise PermutationError(f"expected a 4-subset, got {sorted(J)}")
    return js  # type: ignore[return-value]


def klein_group(J: Iterable[int], n: int | None = None) -> list[Permutation]:
    """Identity and the three double transpositions on the sorted 4-set J."""
    j1, j2, j3, j4 = _check_four_set(J)
    n = n if n is not None else j4
    return [
        Permutation.identity(n),
        Permutation.from_cycles(n, [(j1, j2), (j3, j4)]),
        Permutation.from_cycles(n, [(j1, j3), (j2, j4)]),
        Permutation.from_cycles(n, [(j1, j4), (j2, j3)]),
    ]


def klein_three_cycle(J: Iterable[int], n: int) -> Permutation:
    """The fixed 3-cycle (j1 j2 j3) on the sorted 4-set J."""
    j1, j2, j3, _ = _check_four_set(J)
    return Permutation.from_cycles(n, [(j1, j2, j3)])


def alternating_on(J: Iterable[int], n: int) -> list[Permutation]:
    js = _check_four_set(J)
    out = []
    for img in itertools.permutations(js):
        mapping = dict(zip(js, img))
        p = Permutation._trusted(tuple(mapping.get(i, i) for i in range(1, n + 1)))
        if p.is_even():
            out.append(p)
    return out


@lru_cache(maxsize=None)
def _coset_reps(n: int, js: tuple[int, ...]) -> tuple[Permutation, ...]:
    sub = alternating_on(js, n)
    reps = []
    covered: set[Permutation] = set()
    for g in _enumerate(n, True):  # lexicographic, so the first hit is the least element
        if g in covered:
            continue
        reps.append(g)
        covered.update(compose(g, h) for h in sub)
    return tuple(reps)


def coset_reps(n: int, J: Iterable[int]) -> list[Permutation]:
    """Least even element of each left coset g A_J of the alternating group on J."""
    _check_enum(n)
    js = _check_four_set(J)
    if js[-1] > n or js[0] < 1:
        raise PermutationError(f"4-subset {js} not inside 1..{n}")
    return list(_coset_reps(n, js))


class GroupAlgebraElement:
    """Finite formal sum of permutations with exact rational coefficients."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Mapping[Permutation, object] | None = None):
        self.n = n
        clean: dict[Permutation, Fraction] = {}
        for g, c in (coeffs or {}).items():
            if g.n != n:
                raise PermutationError("permutation degree mismatch")
            c = c if isinstance(c, Fraction) else Fraction(c)
            if c:
                clean[g] = clean.get(g, Fraction(0)) + c
        self.coeffs = {g: c for g, c in clean.items() if c}

    @classmethod
    def of(cls, g: Permutation, c=1) -> "GroupAlgebraElement":
        return cls(g.n, {g: c})

    @classmethod
    def identity(cls, n: int) -> "GroupAlgebraElement":
        return cls.of(Permutation.identity(n))

    @classmethod
    def group_sum(cls, perms: Iterable[Permutation], n: int, signed: bool = False) -> "GroupAlgebraElement":
        return cls(n, {g: (g.sign() if signed else 1) for g in perms})

    def __getitem__(self, g: Permutation) -> Fraction:
        return self.coeffs.get(g, Fraction(0))

    def __call__(self, g: Permutation) -> Fraction:
        return self[g]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self) -> Iterator[tuple[Permutation, Fraction]]:
        return iter(sorted(self.coeffs.items()))

    def _check(self, other: "GroupAlgebraElement") -> None:
        if self.n != other.n:
            raise PermutationError(f"degree mismatch {self.n} vs {other.n}")

    def __add__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        self._check(other)
        out = dict(self.coeffs)
        for g, c in other.coeffs.items():
            out[g] = out.get(g, Fraction(0)) + c
        return GroupAlgebraElement(self.n, out)

    def __neg__(self) -> "GroupAlgebraElement":
        return GroupAlgebraElement(self.n, {g: -c for g, c in self.coeffs.items()})

    def __sub__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        return self + (-other)

    def scale(self, k) -> "GroupAlgebraElement":
        k = Fraction(k)
        return GroupAlgebraElement(self.n, {g: k * c for g, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, GroupAlgebraElement):
            return algebra_multiply(self, other)
        if isinstance(other, Permutation):
            return algebra_multiply(self, GroupAlgebraElement.of(other))
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, Permutation):
            return algebra_multiply(GroupAlgebraElement.of(other), self)
        return self.scale(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupAlgebraElement):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, frozenset(self.coeffs.items())))

    def is_zero(self) -> bool:
        return not self.coeffs

    def even_part(self) -> "GroupAlgebraElement":
        return GroupAlgebraElement(self.n, {g: c for g, c in self.coeffs.items() if g.is_even()})

    def odd_part(self) -> "GroupAlgebraElement":
        return GroupAlgebraElement(self.n, {g: c for g, c in self.coeffs.items() if not g.is_even()})

    def to_vector(self, basis: list[Permutation]) -> list[Fraction]:
        return [self[g] for g in basis]

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for g, c in self:
            terms.append(f"{c}*{format_cycles(g)}")
        return " + ".join(terms)


def algebra_multiply(a: GroupAlgebraElement, b: GroupAlgebraElement) -> GroupAlgebraElement:
    """Convolution product: the coefficient of g*h collects a(g) b(h)."""
    a._check(b)
    out: dict[Permutation, Fraction] = {}
    for g, x in a.coeffs.items():
        gi = g.images
        for h, y in b.coeffs.items():
            gh = Permutation._trusted(tuple(gi[k - 1] for k in h.images))
            out[gh] = out.get(gh, Fraction(0)) + x * y
    return GroupAlgebraElement(a.n, out)


class TranspositionSum:
    """The operator sum_{i<j} w_ij (Id - (i,j)) on anything S_n acts on.

    ``terms`` maps pairs (i, j) with i < j to rational weights; zero weights
    are dropped.  The coefficient of Id is the sum of the weights.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[tuple[int, int], object]):
        self.n = n
        clean: dict[tuple[int, int], Fraction] = {}
        for (i, j), w in terms.items():
            if i == j or not (1 <= i <= n and 1 <= j <= n):
                raise PermutationError(f"bad transposition ({i},{j}) for n={n}")
            key = (min(i, j), max(i, j))
            w = w if isinstance(w, Fraction) else Fraction(w)
            clean[key] = clean.get(key, Fraction(0)) + w
        self.terms = {k: w for k, w in sorted(clean.items()) if w}

    @property
    def constant(self) -> Fraction:
        return sum(self.terms.values(), Fraction(0))

    def weight(self, i: int, j: int) -> Fraction:
        return self.terms.get((min(i, j), max(i, j)), Fraction(0))

    def scale(self, k) -> "TranspositionSum":
        k = Fraction(k)
        return TranspositionSum(self.n, {p: k * w for p, w in self.terms.items()})

    def __add__(self, other: "TranspositionSum") -> "TranspositionSum":
        if self.n != other.n:
            raise PermutationError("degree mismatch")
        out = dict(self.terms)
        for p, w in other.terms.items():
            out[p] = out.get(p, Fraction(0)) + w
        return TranspositionSum(self.n, out)

    def __sub__(self, other: "TranspositionSum") -> "TranspositionSum":
        return self + other.scale(-1)

    def __eq__(self, other) -> bool:
        return isinstance(other, TranspositionSum) and self.n == other.n and self.terms == other.terms

    def __repr__(self) -> str:
        body = ", ".join(f"({i},{j}): {w}" for (i, j), w in self.terms.items())
        return f"TranspositionSum(n={self.n}, {{{body}}})"

    def relabel(self, sigma: Permutation) -> "TranspositionSum":
        return TranspositionSum(self.n, {(sigma(i), sigma(j)): w for (i, j), w in self.terms.items()})

    def to_group_algebra(self) -> GroupAlgebraElement:
        out = {Permutation.identity(self.n): self.constant}
        for (i, j), w in self.terms.items():
            out[Permutation.transposition(self.n, i, j)] = -w
        return GroupAlgebraElement(self.n, out)
