"""Complete catalogs of finite groups up to isomorphism, as multiplication
tables with permutation realizations.

Groups of order n are enumerated as extensions of catalogued groups of order
n/p by a cyclic group of prime order p; every group of order <= 32 is
solvable and therefore has a normal subgroup of prime index, so the sweep is
complete up to the stated bound.  Every produced table is re-validated from
scratch (identity, Latin property, associativity) and duplicates are removed
by invariant screening followed by an explicit generator-mapping isomorphism
search, so the catalog is certified sound; completeness rests on the normal
subgroup fact above.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

from .groups import MarkedGroup
from .perms import Perm
from .util import Budget, BudgetExceeded

MAX_SUPPORTED_ORDER = 32


@dataclass(frozen=True)
class CatalogGroup:
    """A finite group as a multiplication table on 0..order-1 with 0 = e."""

    gid: str
    order: int
    table: tuple[tuple[int, ...], ...]

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]


def validate_table(table) -> None:
    """Raise if table is not a group table with identity 0."""
    n = len(table)
    pts = list(range(n))
    if any(len(row) != n for row in table):
        raise ValueError("table is not square")
    if list(table[0]) != pts or [row[0] for row in table] != pts:
        raise ValueError("0 is not a two-sided identity")
    for row in table:
        if sorted(row) != pts:
            raise ValueError("a row is not a bijection")
    for j in range(n):
        if sorted(row[j] for row in table) != pts:
            raise ValueError("a column is not a bijection")
    for a in range(n):
        for b in range(n):
            ab = table[a][b]
            for c in range(n):
                if table[ab][c] != table[a][table[b][c]]:
                    raise ValueError(f"associativity fails at ({a},{b},{c})")


@lru_cache(maxsize=None)
def inverses(cg: CatalogGroup) -> tuple[int, ...]:
    inv = [0] * cg.order
    for a in range(cg.order):
        for b in range(cg.order):
            if cg.table[a][b] == 0:
                inv[a] = b
                break
    return tuple(inv)


@lru_cache(maxsize=None)
def element_orders(cg: CatalogGroup) -> tuple[int, ...]:
    out = []
    for a in range(cg.order):
        x, k = a, 1
        while x != 0:
            x = cg.table[x][a]
            k += 1
        out.append(k)
    return tuple(out)


@lru_cache(maxsize=None)
def conjugacy_classes(cg: CatalogGroup) -> tuple[tuple[int, ...], ...]:
    inv = inverses(cg)
    seen = [False] * cg.order
    classes = []
    for a in range(cg.order):
        if seen[a]:
            continue
        cls = set()
        for g in range(cg.order):
            cls.add(cg.table[cg.table[inv[g]][a]][g])
        for x in cls:
            seen[x] = True
        classes.append(tuple(sorted(cls)))
    return tuple(classes)


@lru_cache(maxsize=None)
def center_size(cg: CatalogGroup) -> int:
    return sum(1 for cls in conjugacy_classes(cg) if len(cls) == 1)


@lru_cache(maxsize=None)
def is_abelian(cg: CatalogGroup) -> bool:
    t = cg.table
    return all(t[a][b] == t[b][a] for a in range(cg.order) for b in range(a))


@lru_cache(maxsize=None)
def invariant_key(cg: CatalogGroup):
    """Cheap isomorphism invariants used to screen candidate pairs."""
    return (
        cg.order,
        tuple(sorted(element_orders(cg))),
        is_abelian(cg),
        center_size(cg),
        tuple(sorted(len(c) for c in conjugacy_classes(cg))),
    )


def closure(cg: CatalogGroup, seeds) -> set[int]:
    out = {0}
    frontier = [0]
    seeds = list(seeds)
    while frontier:
        x = frontier.pop()
        for s in seeds:
            y = cg.table[x][s]
            if y not in out:
                out.add(y)
                frontier.append(y)
    return out


@lru_cache(maxsize=None)
def generating_sequence(cg: CatalogGroup) -> tuple[int, ...]:
    """Greedy irredundant generating sequence (smallest new element first)."""
    gens: list[int] = []
    have = {0}
    for x in range(1, cg.order):
        if x not in have:
            gens.append(x)
            have = closure(cg, gens)
    return tuple(gens)


def _extend_map_by_words(src: CatalogGroup, dst_table, gens, images) -> list[int] | None:
    """Total map src -> dst determined by generator images, or None.

    Walks the closure of the generators, defining the map along products and
    failing on any inconsistency or non-injectivity.
    """
    n = src.order
    img = [-1] * n
    img[0] = 0
    frontier = [0]
    used = {0}
    while frontier:
        x = frontier.pop()
        for g, ig in zip(gens, images):
            y = src.table[x][g]
            iy = dst_table[img[x]][ig]
            if img[y] == -1:
                if iy in used:
                    return None
                img[y] = iy
                used.add(iy)
                frontier.append(y)
            elif img[y] != iy:
                return None
    if any(v == -1 for v in img):
        return None
    return img


def _is_homomorphic_image(src: CatalogGroup, dst_table, img) -> bool:
    n = src.order
    for a in range(n):
        for b in range(n):
            if img[src.table[a][b]] != dst_table[img[a]][img[b]]:
                return False
    return True


def _partial_consistent(src: CatalogGroup, dst_table, gens, images) -> bool:
    """Can the assigned generator-image prefix still extend injectively?

    The closure walk fails fast on collisions or contradictions; a prefix
    whose generated subgroup maps consistently may still die later, which the
    final full check catches.
    """
    n = src.order
    img = [-1] * n
    img[0] = 0
    frontier = [0]
    used = {0}
    while frontier:
        x = frontier.pop()
        for g, ig in zip(gens, images):
            y = src.table[x][g]
            iy = dst_table[img[x]][ig]
            if img[y] == -1:
                if iy in used:
                    return False
                img[y] = iy
                used.add(iy)
                frontier.append(y)
            elif img[y] != iy:
                return False
    return True


def isomorphic(a: CatalogGroup, b: CatalogGroup) -> bool:
    if a.order != b.order:
        return False
    if invariant_key(a) != invariant_key(b):
        return False
    gens = generating_sequence(a)
    ords_a = element_orders(a)
    ords_b = element_orders(b)
    candidates = [
        [y for y in range(b.order) if ords_b[y] == ords_a[g]] for g in gens
    ]

    def backtrack(i, images):
        if i == len(gens):
            img = _extend_map_by_words(a, b.table, gens, images)
            return img is not None and _is_homomorphic_image(a, b.table, img)
        for y in candidates[i]:
            images.append(y)
            if _partial_consistent(a, b.table, gens[: i + 1], images) and backtrack(i + 1, images):
                return True
            images.pop()
        return False

    return backtrack(0, [])


def automorphisms(cg: CatalogGroup) -> list[tuple[int, ...]]:
    """All automorphisms, as image tuples, in a deterministic order."""
    gens = generating_sequence(cg)
    ords = element_orders(cg)
    candidates = [[y for y in range(cg.order) if ords[y] == ords[g]] for g in gens]
    out = []

    def backtrack(i, images):
        if i == len(gens):
            img = _extend_map_by_words(cg, cg.table, gens, images)
            if img is not None and _is_homomorphic_image(cg, cg.table, img):
                out.append(tuple(img))
            return
        for y in candidates[i]:
            images.append(y)
            if _partial_consistent(cg, cg.table, gens[: i + 1], images):
                backtrack(i + 1, images)
            images.pop()

    backtrack(0, [])
    return out


def _extension_tables(N: CatalogGroup, p: int):
    """All group tables of order |N|*p with N normal of index p.

    Indexed so that element x*t^i has index i*|N| + x; the conjugation action
    of t on N ranges over automorphisms phi with phi^p equal to conjugation by
    z = t^p, and phi(z) = z.
    """
    m = N.order
    inv = inverses(N)
    for phi in automorphisms(N):
        # phi^p as a map
        powers = [tuple(range(m))]
        for _ in range(p):
            powers.append(tuple(phi[x] for x in powers[-1]))
        phi_p = powers[p]
        for z in range(m):
            if phi[z] != z:
                continue
            conj_z = tuple(N.table[N.table[z][x]][inv[z]] for x in range(m))
            if phi_p != conj_z:
                continue
            n = m * p
            table = [[0] * n for _ in range(n)]
            for i in range(p):
                phi_i = powers[i]
                for x in range(m):
                    xi = i * m + x
                    for j in range(p):
                        for y in range(m):
                            # (x t^i)(y t^j) = x phi^i(y) t^(i+j), with t^p = z
                            w = N.table[x][phi_i[y]]
                            if i + j >= p:
                                w = N.table[w][z]
                            table[xi][j * m + y] = ((i + j) % p) * m + w
            yield tuple(tuple(row) for row in table)


@dataclass(frozen=True)
class GroupCatalog:
    max_order: int
    groups: tuple[CatalogGroup, ...]

    def by_order(self, n: int) -> list[CatalogGroup]:
        return [g for g in self.groups if g.order == n]

    def counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for g in self.groups:
            out[g.order] = out.get(g.order, 0) + 1
        return out


def _primes_dividing(n: int) -> list[int]:
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        else:
            p += 1
    if m > 1:
        out.append(m)
    return out


def build_catalog(max_order: int = 16, budget: Budget | None = None) -> GroupCatalog:
    """Complete isomorph-rejected catalog of groups of order <= max_order."""
    if max_order < 1:
        raise ValueError("max_order must be positive")
    if max_order > MAX_SUPPORTED_ORDER:
        raise ValueError(f"orders above {MAX_SUPPORTED_ORDER} are outside the supported budget")
    budget = budget or Budget(None)
    groups: list[CatalogGroup] = [CatalogGroup("1.1", 1, ((0,),))]
    per_order: dict[int, list[CatalogGroup]] = {1: [groups[0]]}
    for n in range(2, max_order + 1):
        budget.check("catalog build")
        kept: list[CatalogGroup] = []
        for p in _primes_dividing(n):
            for N in per_order[n // p]:
                for table in _extension_tables(N, p):
                    budget.check("catalog build")
                    cand = CatalogGroup(f"{n}.{len(kept) + 1}", n, table)
                    validate_table(table)
                    if any(isomorphic(cand, k) for k in kept):
                        continue
                    kept.append(cand)
        per_order[n] = [
            CatalogGroup(f"{n}.{i + 1}", n, g.table) for i, g in enumerate(kept)
        ]
        groups.extend(per_order[n])
    return GroupCatalog(max_order, tuple(groups))


# --- realizations -------------------------------------------------------------


def regular_perm(cg: CatalogGroup, g: int) -> Perm:
    """Right-regular action of g: x -> x*g."""
    return Perm(tuple(cg.table[x][g] for x in range(cg.order)))


def perm_generators(cg: CatalogGroup) -> list[Perm]:
    gens = generating_sequence(cg)
    if not gens:
        return [Perm.identity(1)]
    return [regular_perm(cg, g) for g in gens]


def marked_group(cg: CatalogGroup, marks: tuple[int, ...]) -> MarkedGroup:
    """The catalog group as a marked-group oracle on the given tuple."""
    inv = inverses(cg)
    return MarkedGroup(
        name=f"{cg.gid} marked {marks}",
        generators=marks,
        identity=0,
        mul=cg.mul,
        inv=lambda a: inv[a],
        order=cg.order,
        describe=str,
        meta={"catalog_group": cg},
    )


def generating_tuples(cg: CatalogGroup, d: int):
    """All d-tuples of elements that generate the group, in lex order."""
    n = cg.order

    def rec(prefix):
        if len(prefix) == d:
            if len(closure(cg, prefix)) == n:
                yield tuple(prefix)
            return
        for x in range(n):
            prefix.append(x)
            yield from rec(prefix)
            prefix.pop()

    yield from rec([])


# --- import/export --------------------------------------------------------------


def catalog_to_json(cat: GroupCatalog) -> str:
    obj = {
        "max_order": cat.max_order,
        "groups": [
            {"id": g.gid, "order": g.order, "table": [list(r) for r in g.table]}
            for g in cat.groups
        ],
    }
    return json.dumps(obj, sort_keys=True, indent=1)


def catalog_from_json(text: str) -> GroupCatalog:
    obj = json.loads(text)
    groups = []
    for item in obj["groups"]:
        table = tuple(tuple(int(x) for x in row) for row in item["table"])
        validate_table(table)
        groups.append(CatalogGroup(item["id"], int(item["order"]), table))
    for i, a in enumerate(groups):
        for b in groups[i + 1:]:
            if a.order == b.order and isomorphic(a, b):
                raise ValueError(f"catalog contains isomorphic entries {a.gid} and {b.gid}")
    return GroupCatalog(int(obj["max_order"]), tuple(groups))
