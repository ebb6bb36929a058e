"""Finite group engine and word-ball sections of free groups.

Groups are Cayley tables over elements ``0..n-1`` with ``0`` the identity;
construction validates closure, associativity, identity and inverses
exactly.  Haar measure is counting measure throughout (no ``1/|G|``
normalization in convolutions) and the modular function is identically 1.

Free-group sections are balls of reduced words in the word metric.  A word
is a tuple of nonzero ints, letter ``g`` for a generator and ``-g`` for its
inverse; the section stores the reduced product ``s * t^-1`` for every pair
of section elements even when it falls outside the ball.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "FiniteGroup",
    "GroupHomomorphism",
    "FiniteSection",
    "Word",
    "cyclic",
    "dihedral",
    "symmetric",
    "quaternion",
    "direct_product",
    "from_cayley_table",
    "quotient",
    "subgroup_closure",
    "subgroup_group",
    "left_regular_matrix",
    "convolve",
    "involution",
    "hom_from_map",
    "identity_hom",
    "compose_homs",
    "reduce_word",
    "mul_words",
    "inv_word",
    "free_group_section",
    "group_from_spec",
]

Word = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """Cayley-table group; element 0 is the identity."""

    cayley: np.ndarray
    inverse: np.ndarray
    name: str = "group"

    @property
    def order(self) -> int:
        return int(self.cayley.shape[0])

    def mul(self, a: int, b: int) -> int:
        return int(self.cayley[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def elements(self) -> range:
        return range(self.order)

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.cayley, self.cayley.T))

    def nonabelian_witness(self) -> tuple[int, int] | None:
        """A pair (a, b) with ab != ba, or None for abelian groups."""
        diff = np.argwhere(self.cayley != self.cayley.T)
        if diff.size == 0:
            return None
        a, b = diff[0]
        return int(a), int(b)

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return f"FiniteGroup({self.name}, order={self.order})"


def _validated(table: np.ndarray, name: str) -> FiniteGroup:
    t = np.asarray(table, dtype=np.intp)
    if t.ndim != 2 or t.shape[0] != t.shape[1]:
        raise ValueError(f"Cayley table must be square, got shape {t.shape}")
    n = t.shape[0]
    if n < 1:
        raise ValueError("group order must be >= 1")
    if np.any(t < 0) or np.any(t >= n):
        bad = np.argwhere((t < 0) | (t >= n))[0]
        raise ValueError(
            f"closure fails: entry at ({bad[0]},{bad[1]}) is outside 0..{n-1}"
        )
    if not np.array_equal(t[0], np.arange(n)) or not np.array_equal(t[:, 0], np.arange(n)):
        raise ValueError("element 0 is not the identity")
    inverse = np.full(n, -1, dtype=np.intp)
    for a in range(n):
        hits = np.flatnonzero(t[a] == 0)
        if hits.size != 1 or t[hits[0], a] != 0:
            raise ValueError(f"no inverse for element {a}")
        inverse[a] = hits[0]
    left = t[t, :]
    right = t[:, t]
    if not np.array_equal(left, right):
        a, b, c = np.argwhere(left != right)[0]
        raise ValueError(f"associativity fails at ({a},{b},{c})")
    t.setflags(write=False)
    inverse.setflags(write=False)
    return FiniteGroup(cayley=t, inverse=inverse, name=name)


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("cyclic group order must be >= 1")
    idx = np.arange(n)
    return _validated((idx[:, None] + idx[None, :]) % n, f"C{n}")


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n: rotations 0..n-1, reflections n..2n-1."""
    if n < 1:
        raise ValueError("dihedral parameter must be >= 1")
    table = np.zeros((2 * n, 2 * n), dtype=np.intp)
    for a1 in range(n):
        for b1 in range(2):
            for a2 in range(n):
                for b2 in range(2):
                    # (r^a1 s^b1)(r^a2 s^b2) = r^(a1 + (-1)^b1 a2) s^(b1+b2)
                    a = (a1 + (a2 if b1 == 0 else -a2)) % n
                    b = (b1 + b2) % 2
                    table[a1 + n * b1, a2 + n * b2] = a + n * b
    return _validated(table, f"D{n}")


def symmetric(n: int) -> FiniteGroup:
    """Symmetric group S_n (n <= 5), permutations in lexicographic order."""
    if not 1 <= n <= 5:
        raise ValueError("symmetric(n) supports 1 <= n <= 5")
    from itertools import permutations

    perms = list(permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    size = len(perms)
    table = np.zeros((size, size), dtype=np.intp)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            table[i, j] = index[tuple(p[q[x]] for x in range(n))]
    return _validated(table, f"S{n}")


def quaternion() -> FiniteGroup:
    """The quaternion group of order 8: 1, i, j, k, -1, -i, -j, -k."""
    # axis products on (1, i, j, k): result axis and sign
    prod = {
        (0, 0): (0, 1), (0, 1): (1, 1), (0, 2): (2, 1), (0, 3): (3, 1),
        (1, 0): (1, 1), (1, 1): (0, -1), (1, 2): (3, 1), (1, 3): (2, -1),
        (2, 0): (2, 1), (2, 1): (3, -1), (2, 2): (0, -1), (2, 3): (1, 1),
        (3, 0): (3, 1), (3, 1): (2, 1), (3, 2): (1, -1), (3, 3): (0, -1),
    }
    table = np.zeros((8, 8), dtype=np.intp)
    for x in range(8):
        for y in range(8):
            ax, sx = x % 4, 1 - 2 * (x // 4)
            ay, sy = y % 4, 1 - 2 * (y // 4)
            az, sz = prod[(ax, ay)]
            s = sx * sy * sz
            table[x, y] = az + (0 if s == 1 else 4)
    return _validated(table, "Q8")


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    """Direct product with element (a, b) encoded as a*|H| + b."""
    nh = h.order
    a = np.arange(g.order)[:, None, None, None]
    b = np.arange(nh)[None, :, None, None]
    c = np.arange(g.order)[None, None, :, None]
    d = np.arange(nh)[None, None, None, :]
    table = (g.cayley[a, c] * nh + h.cayley[b, d]).reshape(g.order * nh, g.order * nh)
    return _validated(table, f"{g.name}x{h.name}")


def from_cayley_table(table: Sequence[Sequence[int]], name: str = "table") -> FiniteGroup:
    t = np.asarray(table)
    return _validated(t, f"{name}({t.shape[0] if t.ndim == 2 else '?'})")


@dataclass(frozen=True, eq=False)
class GroupHomomorphism:
    """Validated homomorphism given by its full element map."""

    source: FiniteGroup
    target: FiniteGroup
    map: np.ndarray

    def __call__(self, a: int) -> int:
        return int(self.map[a])

    def is_surjective(self) -> bool:
        return len(set(int(x) for x in self.map)) == self.target.order


def hom_from_map(source: FiniteGroup, target: FiniteGroup,
                 mapping: Sequence[int]) -> GroupHomomorphism:
    m = np.asarray(mapping, dtype=np.intp)
    if m.shape != (source.order,):
        raise ValueError(f"map must list all {source.order} images")
    if np.any(m < 0) or np.any(m >= target.order):
        raise ValueError("map image out of range")
    if m[0] != 0:
        raise ValueError("homomorphism must send identity to identity")
    lhs = m[source.cayley]
    rhs = target.cayley[m[:, None], m[None, :]]
    if not np.array_equal(lhs, rhs):
        a, b = np.argwhere(lhs != rhs)[0]
        raise ValueError(f"not a homomorphism: fails at pair ({a},{b})")
    m.setflags(write=False)
    return GroupHomomorphism(source=source, target=target, map=m)


def identity_hom(g: FiniteGroup) -> GroupHomomorphism:
    return hom_from_map(g, g, np.arange(g.order))


def compose_homs(outer: GroupHomomorphism, inner: GroupHomomorphism) -> GroupHomomorphism:
    """outer o inner (inner applied first)."""
    if inner.target is not outer.source and inner.target.order != outer.source.order:
        raise ValueError("homomorphisms do not compose")
    return hom_from_map(inner.source, outer.target, outer.map[inner.map])


def _check_subgroup(g: FiniteGroup, elements: Iterable[int]) -> list[int]:
    elems = sorted(set(int(x) for x in elements))
    if not elems:
        raise ValueError("subgroup must be nonempty")
    inside = set(elems)
    if 0 not in inside:
        raise ValueError("subgroup does not contain the identity")
    for a in elems:
        if g.inv(a) not in inside:
            raise ValueError(f"subgroup not closed under inverse at element {a}")
        for b in elems:
            if g.mul(a, b) not in inside:
                raise ValueError(f"subgroup not closed under product at ({a},{b})")
    return elems


def quotient(g: FiniteGroup, normal: Iterable[int]) -> tuple[FiniteGroup, GroupHomomorphism]:
    """Quotient by a normal subgroup, with the canonical projection."""
    n_elems = _check_subgroup(g, normal)
    n_set = set(n_elems)
    for s in g.elements():
        for x in n_elems:
            conj = g.mul(g.mul(s, x), g.inv(s))
            if conj not in n_set:
                raise ValueError(
                    f"subgroup is not normal: {s}*{x}*{s}^-1 = {conj} escapes it"
                )
    # left cosets, represented by their least element; identity coset is first
    coset_of = np.full(g.order, -1, dtype=np.intp)
    reps: list[int] = []
    for a in g.elements():
        if coset_of[a] >= 0:
            continue
        members = sorted(int(g.mul(a, x)) for x in n_elems)
        rep_index = len(reps)
        reps.append(members[0])
        for mbr in members:
            coset_of[mbr] = rep_index
    order = len(reps)
    table = np.zeros((order, order), dtype=np.intp)
    for i, r in enumerate(reps):
        for j, s in enumerate(reps):
            table[i, j] = coset_of[g.mul(r, s)]
    q_group = _validated(table, f"{g.name}/N{len(n_elems)}")
    q_hom = hom_from_map(g, q_group, coset_of)
    return q_group, q_hom


def coset_representatives(q_hom: GroupHomomorphism) -> list[int]:
    """Least source element in each fiber of a quotient projection."""
    reps = [-1] * q_hom.target.order
    for a in range(q_hom.source.order - 1, -1, -1):
        reps[q_hom(a)] = a
    return reps


def subgroup_closure(g: FiniteGroup, gens: Iterable[int]) -> list[int]:
    """Smallest subgroup containing ``gens`` (breadth-first closure)."""
    seen = {0}
    frontier = [0]
    gen_list = sorted(set(int(x) for x in gens))
    for x in gen_list:
        if not 0 <= x < g.order:
            raise ValueError(f"generator {x} out of range")
    while frontier:
        nxt = []
        for a in frontier:
            for x in gen_list:
                for b in (g.mul(a, x), g.mul(a, g.inv(x))):
                    if b not in seen:
                        seen.add(b)
                        nxt.append(b)
        frontier = nxt
    return sorted(seen)


def subgroup_group(g: FiniteGroup, elements: Iterable[int]) -> tuple[FiniteGroup, list[int]]:
    """Realize a subgroup as its own FiniteGroup plus the embedding list."""
    elems = _check_subgroup(g, elements)
    index = {e: i for i, e in enumerate(elems)}
    size = len(elems)
    table = np.zeros((size, size), dtype=np.intp)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            table[i, j] = index[g.mul(a, b)]
    return _validated(table, f"{g.name}|H{size}"), elems


def left_regular_matrix(g: FiniteGroup, f: Sequence[complex]) -> np.ndarray:
    """Matrix of convolution by ``f`` on l2(G): M[x, y] = f(x * y^-1)."""
    fv = np.asarray(f, dtype=complex)
    if fv.shape != (g.order,):
        raise ValueError(f"function length {fv.shape} does not match order {g.order}")
    return fv[g.cayley[:, g.inverse]]


def convolve(g: FiniteGroup, f: Sequence[complex], h: Sequence[complex]) -> np.ndarray:
    """(f * h)(t) = sum_s f(s) h(s^-1 t), counting-measure normalization."""
    fv = np.asarray(f, dtype=complex)
    hv = np.asarray(h, dtype=complex)
    return fv @ hv[g.cayley[g.inverse, :]]


def involution(g: FiniteGroup, f: Sequence[complex]) -> np.ndarray:
    """f^*(t) = conj(f(t^-1)); the modular function is 1 on finite groups."""
    fv = np.asarray(f, dtype=complex)
    return np.conj(fv[g.inverse])


# -- free-group word balls -------------------------------------------------


def reduce_word(word: Sequence[int]) -> Word:
    """Cancel adjacent x, -x pairs until no cancellation is left."""
    out: list[int] = []
    for letter in word:
        if letter == 0:
            raise ValueError("0 is not a letter")
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(int(letter))
    return tuple(out)


def mul_words(a: Sequence[int], b: Sequence[int]) -> Word:
    return reduce_word(tuple(a) + tuple(b))


def inv_word(a: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(tuple(a)))


@dataclass(frozen=True, eq=False)
class FiniteSection:
    """Ball of reduced words with the products s * t^-1 precomputed."""

    generators: int
    radius: int
    words: tuple[Word, ...]
    index: dict[Word, int] = field(repr=False)
    mul_inv: tuple[tuple[Word, ...], ...] = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.words)

    def product_words(self) -> set[Word]:
        """All words s * t^-1 over section pairs (may leave the ball)."""
        return {w for row in self.mul_inv for w in row}


def _ball_count(m: int, k: int) -> int:
    if m == 1:
        return 2 * k + 1
    total = 1
    width = 2 * m
    for _ in range(k):
        total += width
        width *= 2 * m - 1
    return total


def free_group_section(generators: int, radius: int) -> FiniteSection:
    """All reduced words of length <= radius over ``generators`` letters."""
    if generators < 1 or radius < 0:
        raise ValueError("need generators >= 1 and radius >= 0")
    count = _ball_count(generators, radius)
    if count > 500:
        raise ValueError(
            f"section would have {count} elements; the supported bound is 500"
        )
    letters = [s * g for g in range(1, generators + 1) for s in (1, -1)]
    words: list[Word] = [()]
    frontier: list[Word] = [()]
    for _ in range(radius):
        nxt: list[Word] = []
        for w in frontier:
            for letter in letters:
                if w and w[-1] == -letter:
                    continue
                nxt.append(w + (letter,))
        words.extend(nxt)
        frontier = nxt
    index = {w: i for i, w in enumerate(words)}
    mul_inv = tuple(
        tuple(mul_words(s, inv_word(t)) for t in words) for s in words
    )
    return FiniteSection(
        generators=generators,
        radius=radius,
        words=tuple(words),
        index=index,
        mul_inv=mul_inv,
    )


# -- group spec mini-language ----------------------------------------------


def group_from_spec(spec: dict) -> FiniteGroup | FiniteSection:
    """Build a carrier from the JSON mini-language.

    Supported kinds: ``cyclic``, ``dihedral``, ``symmetric``, ``product``,
    ``table``, ``quaternion``, ``free_section``.
    """
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValueError("group spec must be an object with a 'kind' field")
    kind = spec["kind"]
    try:
        if kind == "cyclic":
            return cyclic(int(spec["n"]))
        if kind == "dihedral":
            return dihedral(int(spec["n"]))
        if kind == "symmetric":
            return symmetric(int(spec["n"]))
        if kind == "quaternion":
            return quaternion()
        if kind == "product":
            parts = [group_from_spec(sub) for sub in spec["of"]]
            if len(parts) < 2 or not all(isinstance(p, FiniteGroup) for p in parts):
                raise ValueError("product needs at least two finite groups")
            out = parts[0]
            for nxt in parts[1:]:
                out = direct_product(out, nxt)
            return out
        if kind == "table":
            return from_cayley_table(spec["cayley"])
        if kind == "free_section":
            return free_group_section(int(spec["gens"]), int(spec["radius"]))
    except KeyError as exc:
        raise ValueError(f"group spec is missing field {exc}") from exc
    raise ValueError(f"unknown group kind {kind!r}")
