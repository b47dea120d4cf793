"""Marked groups: an ordered generating tuple plus element arithmetic.

Elements of every oracle built here are hashable values whose structural
equality coincides with equality in the group, so ball construction can
deduplicate with plain dictionaries.  Oracles are immutable after
construction and all element operations are pure.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Callable

from . import words as W
from .perms import (
    Perm,
    SparsePerm,
    sparse_alpha,
    sparse_beta,
    sparse_compose,
    sparse_identity,
    sparse_inv,
    sparse_str,
)
from .util import BudgetExceeded


@dataclass
class MarkedGroup:
    """A group presented as an ordered tuple of generators.

    relators is None when no presentation is carried, and a (possibly empty)
    tuple of words when the generators are known to present the group.  The
    empty tuple means "free on these generators".
    """

    name: str
    generators: tuple
    identity: Any
    mul: Callable[[Any, Any], Any]
    inv: Callable[[Any], Any]
    relators: tuple[tuple[int, ...], ...] | None = None
    order: int | None = None
    describe: Callable[[Any], str] = field(default=repr)
    meta: dict = field(default_factory=dict)

    @property
    def d(self) -> int:
        return len(self.generators)

    def eq(self, a, b) -> bool:
        return a == b

    def __post_init__(self):
        if self.relators is not None:
            self.relators = tuple(W.as_letters(r, self.d) for r in self.relators)
            for r in self.relators:
                if eval_word(self, r) != self.identity:
                    raise ValueError(f"relator {W.format_word(r)} does not hold in {self.name}")


def eval_word(G: MarkedGroup, word) -> Any:
    """Left-to-right product of generator images along a word."""
    letters = W.as_letters(word, G.d)
    out = G.identity
    for x in letters:
        g = G.generators[x - 1] if x > 0 else G.inv(G.generators[-x - 1])
        out = G.mul(out, g)
    return out


def elements(G: MarkedGroup, cap: int = 1_000_000) -> list:
    """All elements of a finite oracle, in BFS discovery order."""
    seen = {G.identity: 0}
    order = [G.identity]
    frontier = [G.identity]
    gens = list(G.generators) + [G.inv(g) for g in G.generators]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.mul(x, g)
                if y not in seen:
                    if len(seen) >= cap:
                        raise BudgetExceeded(f"{G.name} has more than {cap} elements")
                    seen[y] = len(order)
                    order.append(y)
                    nxt.append(y)
        frontier = nxt
    return order


def center_is_trivial(G: MarkedGroup, cap: int = 100_000) -> bool:
    elems = elements(G, cap)
    for z in elems:
        if z == G.identity:
            continue
        if all(G.mul(z, g) == G.mul(g, z) for g in G.generators):
            return False
    return True


def covering_radius(G: MarkedGroup, cap: int = 100_000) -> int:
    """Smallest r with the radius-r ball equal to the whole (finite) group."""
    total = len(elements(G, cap))
    seen = {G.identity}
    frontier = [G.identity]
    gens = list(G.generators) + [G.inv(g) for g in G.generators]
    r = 0
    while len(seen) < total:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
        r += 1
        if not nxt:
            raise AssertionError("generators do not generate")
    return r


# --- concrete families --------------------------------------------------------


def make_free_abelian(k: int) -> MarkedGroup:
    if k < 1:
        raise ValueError("rank must be positive")
    gens = tuple(tuple(1 if i == j else 0 for j in range(k)) for i in range(k))
    relators = tuple(
        (i + 1, j + 1, -(i + 1), -(j + 1)) for i in range(k) for j in range(i + 1, k)
    )
    return MarkedGroup(
        name=f"Z^{k}",
        generators=gens,
        identity=tuple(0 for _ in range(k)),
        mul=lambda a, b: tuple(x + y for x, y in zip(a, b)),
        inv=lambda a: tuple(-x for x in a),
        relators=relators,
        describe=lambda a: "(" + ",".join(map(str, a)) + ")",
    )


def make_cyclic(m: int, marks: tuple[int, ...] = (1,)) -> MarkedGroup:
    if m < 1:
        raise ValueError("modulus must be positive")
    marks = tuple(x % m for x in marks)
    relators = ((1,) * m,) if marks == (1 % m,) else None
    return MarkedGroup(
        name=f"Z/{m}" + ("" if marks == (1 % m,) else f" marked {marks}"),
        generators=marks,
        identity=0,
        mul=lambda a, b: (a + b) % m,
        inv=lambda a: (-a) % m,
        relators=relators,
        order=m,
        describe=str,
    )


def make_free_group(rank: int) -> MarkedGroup:
    """Free group oracle: elements are freely reduced words."""
    if not 1 <= rank <= 26:
        raise ValueError("rank must be between 1 and 26")
    gens = tuple((i + 1,) for i in range(rank))
    return MarkedGroup(
        name=f"F_{rank}",
        generators=gens,
        identity=(),
        mul=lambda a, b: W.free_reduce(a + b),
        inv=lambda a: tuple(-x for x in reversed(a)),
        relators=(),
        describe=lambda a: W.format_word(a) or "e",
    )


def make_perm_group(gens: list[Perm], name: str = "", order: int | None = None) -> MarkedGroup:
    if not gens:
        raise ValueError("need at least one generator")
    n = gens[0].degree
    for g in gens:
        if g.degree != n:
            raise ValueError("generators must share a degree")
    return MarkedGroup(
        name=name or f"perm<{', '.join(str(g) for g in gens)}>",
        generators=tuple(gens),
        identity=Perm.identity(n),
        mul=lambda a, b: a * b,
        inv=lambda a: a.inv(),
        order=order,
        describe=str,
    )


def make_direct_product(G: MarkedGroup, H: MarkedGroup) -> MarkedGroup:
    gens = tuple((g, H.identity) for g in G.generators) + tuple(
        (G.identity, h) for h in H.generators
    )
    relators = None
    if G.relators is not None and H.relators is not None:
        shifted = tuple(
            tuple(x + G.d if x > 0 else x - G.d for x in r) for r in H.relators
        )
        cross = tuple(
            (i, j + G.d, -i, -(j + G.d))
            for i in range(1, G.d + 1)
            for j in range(1, H.d + 1)
        )
        relators = G.relators + shifted + cross
    order = None
    if G.order is not None and H.order is not None:
        order = G.order * H.order
    return MarkedGroup(
        name=f"{G.name} x {H.name}",
        generators=gens,
        identity=(G.identity, H.identity),
        mul=lambda a, b: (G.mul(a[0], b[0]), H.mul(a[1], b[1])),
        inv=lambda a: (G.inv(a[0]), H.inv(a[1])),
        relators=relators,
        order=order,
        describe=lambda a: f"({G.describe(a[0])}, {H.describe(a[1])})",
        meta={"factors": (G, H)},
    )


# --- integer matrix groups ----------------------------------------------------


def _mat_mul(a, b):
    k = len(a)
    return tuple(
        tuple(sum(a[i][t] * b[t][j] for t in range(k)) for j in range(k))
        for i in range(k)
    )


def _mat_det(m) -> int:
    k = len(m)
    if k == 1:
        return m[0][0]
    det = 0
    for j in range(k):
        minor = tuple(row[:j] + row[j + 1:] for row in m[1:])
        det += (-1) ** j * m[0][j] * _mat_det(minor)
    return det


def _mat_adjugate(m):
    k = len(m)
    if k == 1:
        return ((1,),)
    cof = [[0] * k for _ in range(k)]
    for i in range(k):
        for j in range(k):
            minor = tuple(
                tuple(m[r][c] for c in range(k) if c != j) for r in range(k) if r != i
            )
            cof[i][j] = (-1) ** (i + j) * _mat_det(minor)
    return tuple(tuple(cof[j][i] for j in range(k)) for i in range(k))  # transpose


def make_int_matrix_group(gens, name: str = "") -> MarkedGroup:
    """Subgroup of GL_k(Z) given by unimodular integer matrices."""
    mats = tuple(tuple(tuple(int(x) for x in row) for row in g) for g in gens)
    if not mats:
        raise ValueError("need at least one generator")
    k = len(mats[0])
    for m in mats:
        if len(m) != k or any(len(row) != k for row in m):
            raise ValueError("generators must be square matrices of equal size")
        if _mat_det(m) not in (1, -1):
            raise ValueError("matrix is not invertible over the integers")
    ident = tuple(tuple(1 if i == j else 0 for j in range(k)) for i in range(k))

    def inv(m):
        det = _mat_det(m)
        adj = _mat_adjugate(m)
        return tuple(tuple(x * det for x in row) for row in adj)

    return MarkedGroup(
        name=name or f"GL{k}Z subgroup",
        generators=mats,
        identity=ident,
        mul=_mat_mul,
        inv=inv,
        describe=lambda m: "[" + "; ".join(" ".join(map(str, row)) for row in m) + "]",
        meta={"dim": k},
    )


def sl2_generators():
    return (((1, 1), (0, 1)), ((1, 0), (1, 1)))


# --- wreath products ----------------------------------------------------------


@dataclass(frozen=True)
class WreathElement:
    """Element of a restricted wreath product: finite support plus top move.

    support pairs (position in the top group, nonidentity base element).
    """

    support: frozenset
    top: Any

    def items(self):
        return dict(self.support)


def make_wreath(delta: MarkedGroup, gamma: MarkedGroup, elements_cap: int = 100_000) -> MarkedGroup:
    """Restricted wreath product of a finite group delta by gamma.

    Generators: gamma's generators as pure top moves, then delta's generators
    supported at the identity position.
    """
    delta_elems = elements(delta, elements_cap)  # validates finiteness

    def mul(a: WreathElement, b: WreathElement) -> WreathElement:
        out = dict(a.items())
        for h, v in b.items().items():
            k = gamma.mul(h, a.top)  # position h of b contributes at h * top(a)
            merged = delta.mul(out.get(k, delta.identity), v)
            if merged == delta.identity:
                out.pop(k, None)
            else:
                out[k] = merged
        return WreathElement(frozenset(out.items()), gamma.mul(a.top, b.top))

    def inv(a: WreathElement) -> WreathElement:
        gi = gamma.inv(a.top)
        out = {}
        for h, v in a.items().items():
            out[gamma.mul(h, gi)] = delta.inv(v)
        return WreathElement(frozenset(out.items()), gi)

    ident = WreathElement(frozenset(), gamma.identity)
    gens = tuple(
        WreathElement(frozenset(), g) for g in gamma.generators
    ) + tuple(
        WreathElement(frozenset({(gamma.identity, t)}), gamma.identity)
        for t in delta.generators
    )
    order = None
    if gamma.order is not None:
        order = len(delta_elems) ** gamma.order * gamma.order

    def describe(a: WreathElement) -> str:
        items = sorted(a.items().items(), key=lambda kv: str(kv[0]))
        sup = ", ".join(f"{gamma.describe(h)}:{delta.describe(v)}" for h, v in items)
        return f"[{sup} | {gamma.describe(a.top)}]"

    return MarkedGroup(
        name=f"{delta.name} wr {gamma.name}",
        generators=gens,
        identity=ident,
        mul=mul,
        inv=inv,
        order=order,
        describe=describe,
        meta={"delta": delta, "gamma": gamma, "delta_elements": delta_elems},
    )


# --- Neumann-style subgroups of products of alternating groups -----------------


@dataclass(frozen=True)
class NeumannSpec:
    """Finite description of a two-generator subgroup of a product of
    alternating groups, tracked at finitely many coordinates.

    p, q, d are the sequence prefixes; window lists the 1-based coordinate
    indices evaluated explicitly; tail holds (d, q) pairs of level-generic
    coordinates standing in for the rest of the sequence.  level is the word
    length the tail coordinates are generic for.
    """

    p: tuple[int, ...]
    q: tuple[int, ...]
    d: tuple[int, ...]
    f_table: tuple[int, ...]
    window: tuple[int, ...]
    tail: tuple[tuple[int, int], ...]
    level: int

    def coordinates(self) -> tuple[tuple[str, int, int], ...]:
        """(label, d, q) for every tracked coordinate, window then tail."""
        out = []
        for k in self.window:
            out.append((str(k), self.d[k - 1], self.q[k - 1]))
        for i, (dk, qk) in enumerate(self.tail):
            out.append((f"tail{i + 1}", dk, qk))
        return tuple(out)

    def f(self, n: int) -> int:
        if not 1 <= n <= len(self.f_table):
            raise ValueError(f"f is only tabulated up to {len(self.f_table)}; asked for {n}")
        return self.f_table[n - 1]


def is_level_generic(d: int, q: int, level: int) -> bool:
    """No word of length <= level can make the shift-by-q coordinate collide
    with the three special points: j*q stays away from 0, +-1, +-2 mod d for
    all 0 < j <= 2*level."""
    bad = {0, 1, 2, d - 1, d - 2}
    return all((j * q) % d not in bad for j in range(1, 2 * level + 1))


def make_neumann(spec: NeumannSpec) -> MarkedGroup:
    """Two-generator oracle for the tracked coordinates of a NeumannSpec.

    Elements are tuples of SparsePerm, one per tracked coordinate; equality
    is coordinate-wise.
    """
    coords = spec.coordinates()
    if not coords:
        raise ValueError("window is empty")
    for label, dk, qk in coords:
        if math.gcd(dk, qk) != 1:
            raise ValueError(f"coordinate {label}: gcd(d, q) != 1")
    s = tuple(sparse_alpha(dk, qk) for _, dk, qk in coords)
    t = tuple(sparse_beta(dk) for _, dk, _ in coords)
    ident = tuple(sparse_identity(dk) for _, dk, _ in coords)

    def mul(a, b):
        return tuple(sparse_compose(x, y) for x, y in zip(a, b))

    def inv(a):
        return tuple(sparse_inv(x) for x in a)

    def describe(a):
        return "(" + "; ".join(sparse_str(x) for x in a) + ")"

    return MarkedGroup(
        name=f"N(d,q) window {spec.window}",
        generators=(s, t),
        identity=ident,
        mul=mul,
        inv=inv,
        describe=describe,
        meta={"spec": spec, "coords": coords},
    )


# --- JSON descriptions ----------------------------------------------------------


def group_from_json(obj: dict) -> MarkedGroup:
    """Build an oracle from the JSON group-definition format."""
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError("group definition must be an object with a 'kind'")
    kind = obj["kind"]
    relators = obj.get("relators")
    G = None
    if kind == "zk":
        G = make_free_abelian(int(obj["k"]))
    elif kind == "cyclic":
        G = make_cyclic(int(obj["m"]), tuple(obj.get("marks", [1])))
    elif kind == "free":
        G = make_free_group(int(obj["rank"]))
    elif kind == "perm":
        degree = int(obj.get("degree", 0))
        gens = [Perm.from_cycles(s, degree) for s in obj["gens"]]
        degree = max([degree] + [g.degree for g in gens])
        gens = [
            Perm(tuple(list(g.images) + list(range(g.degree, degree)))) for g in gens
        ]
        G = make_perm_group(gens, name=obj.get("name", ""))
    elif kind == "matrix":
        G = make_int_matrix_group(obj["gens"], name=obj.get("name", ""))
    elif kind == "product":
        factors = [group_from_json(x) for x in obj["factors"]]
        if len(factors) < 2:
            raise ValueError("product needs at least two factors")
        G = factors[0]
        for H in factors[1:]:
            G = make_direct_product(G, H)
    elif kind == "wreath":
        G = make_wreath(group_from_json(obj["base"]), group_from_json(obj["top"]))
    elif kind == "neumann":
        from .constructions import neumann_spec_for  # local import: no cycle at module load

        spec = neumann_spec_for(
            tuple(obj["f"]),
            int(obj["terms"]),
            level=int(obj.get("level", 8)),
            ntails=int(obj.get("tails", 1)),
        )
        G = make_neumann(spec)
    else:
        raise ValueError(f"unknown group kind {kind!r}")
    if relators is not None:
        G.relators = tuple(W.as_letters(r, G.d) for r in relators)
        for r in G.relators:
            if eval_word(G, r) != G.identity:
                raise ValueError(f"relator {W.format_word(r)} does not hold")
    return G
