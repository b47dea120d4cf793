"""Permutation arithmetic in two representations.

Dense permutations act on 0..m-1 (displayed 1..m in cycle notation).  Sparse
permutations act on Z/d for potentially huge d as a global shift plus a
finite set of exceptions; all arithmetic on them costs time proportional to
the exception sets, never to d.

All actions are on the right: point ** (a * b) == (point ** a) ** b.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .util import DEFAULT_SEED


@dataclass(frozen=True)
class Perm:
    """Dense permutation of {0, ..., degree-1}."""

    images: tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        seen = [False] * n
        for i in self.images:
            if not 0 <= i < n or seen[i]:
                raise ValueError("images is not a bijection of 0..%d" % (n - 1))
            seen[i] = True

    @property
    def degree(self) -> int:
        return len(self.images)

    @staticmethod
    def identity(n: int) -> "Perm":
        return Perm(tuple(range(n)))

    @staticmethod
    def cycle(n: int, points: tuple[int, ...]) -> "Perm":
        """The cycle mapping points[0] -> points[1] -> ... -> points[0], 0-indexed."""
        images = list(range(n))
        for a, b in zip(points, points[1:]):
            images[a] = b
        if points:
            images[points[-1]] = points[0]
        return Perm(tuple(images))

    @staticmethod
    def from_cycles(text: str, degree: int = 0) -> "Perm":
        """Parse 1-indexed cycle notation like "(1 2 3)(4 5)"."""
        cycles = []
        maxpt = degree
        for chunk in text.replace(",", " ").split(")"):
            chunk = chunk.strip()
            if not chunk:
                continue
            if not chunk.startswith("("):
                raise ValueError(f"bad cycle notation: {text!r}")
            pts = [int(tok) - 1 for tok in chunk[1:].split()]
            if any(p < 0 for p in pts):
                raise ValueError("points are 1-indexed in cycle notation")
            if len(set(pts)) != len(pts):
                raise ValueError(f"repeated point in cycle: {chunk!r})")
            if pts:
                maxpt = max(maxpt, max(pts) + 1)
                cycles.append(pts)
        images = list(range(maxpt))
        for pts in cycles:
            for a, b in zip(pts, pts[1:]):
                images[a] = b
            images[pts[-1]] = pts[0]
        return Perm(tuple(images))

    def __mul__(self, other: "Perm") -> "Perm":
        if self.degree != other.degree:
            raise ValueError("degree mismatch: %d vs %d" % (self.degree, other.degree))
        o = other.images
        return Perm(tuple(o[i] for i in self.images))

    def inv(self) -> "Perm":
        images = [0] * self.degree
        for i, j in enumerate(self.images):
            images[j] = i
        return Perm(tuple(images))

    def __pow__(self, k: int) -> "Perm":
        if k < 0:
            return self.inv() ** (-k)
        result = Perm.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def apply(self, point: int) -> int:
        return self.images[point]

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list[list[int]]:
        """Nontrivial cycles, 0-indexed, each starting at its least point."""
        seen = [False] * self.degree
        out = []
        for i in range(self.degree):
            if seen[i] or self.images[i] == i:
                seen[i] = True
                continue
            cyc = [i]
            seen[i] = True
            j = self.images[i]
            while j != i:
                cyc.append(j)
                seen[j] = True
                j = self.images[j]
            out.append(cyc)
        return out

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles()), 1)

    def __str__(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + " ".join(str(p + 1) for p in c) + ")" for c in cycs)


def compose(a: Perm, b: Perm) -> Perm:
    """Right-action product: point ** compose(a, b) == (point ** a) ** b."""
    return a * b


def alpha(d: int, q: int = 1) -> Perm:
    """The standard d-cycle raised to the q-th power, on d points."""
    return Perm(tuple((i + q) % d for i in range(d)))


def beta(d: int) -> Perm:
    """The 3-cycle on the first three of d points."""
    if d < 3:
        raise ValueError("need degree >= 3")
    return Perm.cycle(d, (0, 1, 2))


# --- stabilizer chains -------------------------------------------------------


class _Level:
    __slots__ = ("basepoint", "gens", "transversal")

    def __init__(self, basepoint: int):
        self.basepoint = basepoint
        self.gens: list[Perm] = []
        self.transversal: dict[int, Perm] = {}

    def rebuild(self, degree: int, gens: list[Perm]):
        """Recompute the orbit transversal of basepoint under gens."""
        ident = Perm.identity(degree)
        trans = {self.basepoint: ident}
        frontier = [self.basepoint]
        while frontier:
            nxt = []
            for p in frontier:
                u = trans[p]
                for g in gens:
                    q = g.images[p]
                    if q not in trans:
                        trans[q] = u * g
                        nxt.append(q)
            frontier = nxt
        self.transversal = trans


class StabChain:
    """Base, strong generators and transversals for a permutation group.

    Built by a seeded randomized pass and then certified by a deterministic
    verification sweep over all Schreier generators, so order() is exact.
    """

    def __init__(self, degree: int):
        self.degree = degree
        self.levels: list[_Level] = []
        self.verified = False

    def order(self) -> int:
        n = 1
        for lv in self.levels:
            n *= len(lv.transversal)
        return n

    def sift(self, p: Perm, start: int = 0) -> Perm:
        """Strip p through transversals; identity result means membership."""
        for lv in self.levels[start:]:
            q = p.images[lv.basepoint]
            u = lv.transversal.get(q)
            if u is None:
                return p
            p = p * u.inv()
        return p

    def contains(self, p: Perm) -> bool:
        return self.sift(p).is_identity()

    def _extend_base(self, p: Perm):
        for i, j in enumerate(p.images):
            if i != j:
                self.levels.append(_Level(i))
                return
        raise AssertionError("identity cannot extend the base")

    def _level_gens(self, i: int) -> list[Perm]:
        """Generators of the i-th group in the chain: all gens resting at >= i."""
        out: list[Perm] = []
        for lv in self.levels[i:]:
            out.extend(lv.gens)
        return out

    def add(self, p: Perm) -> bool:
        """Sift p and incorporate the residue; True if the group grew."""
        level = 0
        for lv in self.levels:
            q = p.images[lv.basepoint]
            u = lv.transversal.get(q)
            if u is None:
                break
            p = p * u.inv()
            level += 1
        if p.is_identity():
            return False
        if level == len(self.levels):
            self._extend_base(p)
        self.levels[level].gens.append(p)
        # the new generator fixes earlier basepoints but can still enlarge
        # earlier orbits, so rebuild every level down to the resting place
        for i in range(level + 1):
            self.levels[i].rebuild(self.degree, self._level_gens(i))
        return True

    def _schreier_violation(self) -> Perm | None:
        """First Schreier generator that fails membership one level down."""
        for i, lv in enumerate(self.levels):
            gens = self._level_gens(i)
            for point in sorted(lv.transversal):
                u = lv.transversal[point]
                for g in gens:
                    s = (u * g) * lv.transversal[g.images[point]].inv()
                    if not self.sift(s, i + 1).is_identity():
                        return s
        return None


def stab_chain(gens: list[Perm], seed: int = DEFAULT_SEED) -> StabChain:
    """Certified stabilizer chain for the group generated by gens."""
    if not gens:
        raise ValueError("need at least one generator")
    degree = gens[0].degree
    for g in gens:
        if g.degree != degree:
            raise ValueError("generators must share a degree")
    chain = StabChain(degree)
    for g in gens:
        chain.add(g)
    # seeded randomized warm start: random subproducts tend to complete the
    # chain long before the verification sweep runs
    rng = random.Random(seed)
    pool = [g for g in gens]
    stale = 0
    while stale < 8 and pool:
        w = Perm.identity(degree)
        for g in pool:
            if rng.random() < 0.5:
                w = w * g
        if rng.random() < 0.5 and chain.levels:
            lv = rng.choice(chain.levels)
            if lv.gens:
                w = w * rng.choice(lv.gens)
        stale = 0 if chain.add(w) else stale + 1
    # deterministic certification: every Schreier generator must sift
    while True:
        witness = chain._schreier_violation()
        if witness is None:
            break
        chain.add(witness)
    chain.verified = True
    return chain


def group_order(gens: list[Perm], seed: int = DEFAULT_SEED) -> int:
    """Exact order of <gens> via a certified stabilizer chain."""
    return stab_chain(gens, seed=seed).order()


# --- transitivity and block systems ------------------------------------------


def orbit(gens: list[Perm], point: int) -> set[int]:
    seen = {point}
    frontier = [point]
    while frontier:
        p = frontier.pop()
        for g in gens:
            q = g.images[p]
            if q not in seen:
                seen.add(q)
                frontier.append(q)
    return seen


def is_transitive(gens: list[Perm]) -> bool:
    if not gens:
        raise ValueError("need at least one generator")
    return len(orbit(gens, 0)) == gens[0].degree


def _minimal_block_partition(gens: list[Perm], a: int, b: int, n: int) -> list[list[int]]:
    """Finest block partition whose block containing a also contains b."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx == ry:
            return None
        if rx > ry:
            rx, ry = ry, rx
        parent[ry] = rx
        return (rx, ry)

    queue = [(a, b)]
    union(a, b)
    while queue:
        x, y = queue.pop()
        for g in gens:
            merged = union(g.images[x], g.images[y])
            if merged is not None:
                queue.append(merged)
    blocks: dict[int, list[int]] = {}
    for x in range(n):
        blocks.setdefault(find(x), []).append(x)
    return sorted(blocks.values())


def block_system(gens: list[Perm]) -> tuple[bool, list[list[int]] | None]:
    """(primitive flag, minimal nontrivial block partition or None).

    Requires a transitive action.  Among all nontrivial systems the one with
    the smallest block size is returned; blocks are sorted lists of points.
    """
    if not is_transitive(gens):
        raise ValueError("block systems are only defined for transitive actions")
    n = gens[0].degree
    best = None
    for b in range(1, n):
        part = _minimal_block_partition(gens, 0, b, n)
        size = len(part[0])
        if size == n:
            continue
        if best is None or size < len(best[0]):
            best = part
    if best is None:
        return True, None
    return False, best


# --- sparse permutations of Z/d ----------------------------------------------


@dataclass(frozen=True)
class SparsePerm:
    """Translation-with-exceptions permutation of Z/modulus.

    Maps x to exceptions[x] when present, else to (x + shift) mod modulus.
    Normalized so no exception agrees with the shift; equality is plain field
    comparison.  Exceptions are stored as a tuple sorted by source point.
    """

    modulus: int
    shift: int
    exc: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        d = self.modulus
        if d <= 0:
            raise ValueError("modulus must be positive")
        if not 0 <= self.shift < d:
            raise ValueError("shift must be reduced mod modulus")
        keys = [k for k, _ in self.exc]
        vals = [v for _, v in self.exc]
        if any(not 0 <= x < d for x in keys + vals):
            raise ValueError("exception points out of range")
        if len(set(keys)) != len(keys):
            raise ValueError("duplicate exception source")
        if any(v == (k + self.shift) % d for k, v in self.exc):
            raise ValueError("exception equal to shift action; not normalized")
        if set(vals) != {(k + self.shift) % d for k in keys}:
            raise ValueError("exceptions do not define a bijection")
        if list(self.exc) != sorted(self.exc):
            raise ValueError("exceptions must be sorted by source point")


def sparse(modulus: int, shift: int, exceptions: dict[int, int] | None = None) -> SparsePerm:
    """Normalizing constructor for SparsePerm."""
    d = modulus
    if d <= 0:
        raise ValueError("modulus must be positive")
    s = shift % d
    exc = {}
    for k, v in (exceptions or {}).items():
        k %= d
        v %= d
        if v != (k + s) % d:
            exc[k] = v
    return SparsePerm(d, s, tuple(sorted(exc.items())))


def sparse_identity(modulus: int) -> SparsePerm:
    return SparsePerm(modulus, 0, ())


def sparse_alpha(d: int, q: int = 1) -> SparsePerm:
    """Shift by q on Z/d: the standard d-cycle to the q-th power."""
    return sparse(d, q)


def sparse_beta(d: int) -> SparsePerm:
    """3-cycle 0 -> 1 -> 2 -> 0 with everything else fixed."""
    if d < 3:
        raise ValueError("need modulus >= 3")
    return sparse(d, 0, {0: 1, 1: 2, 2: 0})


def sparse_apply(p: SparsePerm, x: int) -> int:
    for k, v in p.exc:
        if k == x:
            return v
    return (x + p.shift) % p.modulus


def sparse_compose(a: SparsePerm, b: SparsePerm) -> SparsePerm:
    """Right-action product: x -> b(a(x)).  Cost independent of modulus."""
    if a.modulus != b.modulus:
        raise ValueError("modulus mismatch: %d vs %d" % (a.modulus, b.modulus))
    d = a.modulus
    bmap = dict(b.exc)
    candidates = {k for k, _ in a.exc}
    # points that a sends into b's exception set by plain shift
    for k in bmap:
        candidates.add((k - a.shift) % d)
    exc = {}
    s = (a.shift + b.shift) % d
    for x in sorted(candidates):
        y = sparse_apply(a, x)
        z = bmap.get(y, (y + b.shift) % d)
        if z != (x + s) % d:
            exc[x] = z
    return SparsePerm(d, s, tuple(sorted(exc.items())))


def sparse_inv(p: SparsePerm) -> SparsePerm:
    d = p.modulus
    s = (-p.shift) % d
    exc = {}
    for k, v in p.exc:
        if k != (v + s) % d:
            exc[v] = k
    return SparsePerm(d, s, tuple(sorted(exc.items())))


def sparse_eq(a: SparsePerm, b: SparsePerm) -> bool:
    if a.modulus != b.modulus:
        raise ValueError("modulus mismatch")
    return a == b


def sparse_is_identity(p: SparsePerm) -> bool:
    return p.shift == 0 and not p.exc


def sparse_order(p: SparsePerm) -> int:
    """Order of p in Sym(Z/modulus), computed arithmetically.

    Cycle lengths through the exception set are found by solving shift
    congruences between consecutive exception points, so the cost depends on
    the exception count, not the modulus.
    """
    d = p.modulus
    s = p.shift
    if not p.exc:
        return d // math.gcd(d, s) if s else 1
    g = math.gcd(s, d) if s else d
    period = d // g
    sg_inv = pow(s // g, -1, period) if s else 0
    keys = [k for k, _ in p.exc]
    emap = dict(p.exc)

    def steps_to_next_key(v: int) -> tuple[int, int]:
        """Minimal u >= 0 with v + u*s an exception key, and that key."""
        best = None
        for k in keys:
            if (k - v) % g:
                continue
            u = ((k - v) // g * sg_inv) % period if s else 0
            if s == 0 and k != v:
                continue
            if best is None or u < best[0]:
                best = (u, k)
        if best is None:
            raise AssertionError("walk escaped the exception structure")
        return best

    lengths = []
    seen = set()
    for start in keys:
        if start in seen:
            continue
        length = 0
        k = start
        while True:
            seen.add(k)
            v = emap[k]
            length += 1
            if s == 0 and v not in emap:
                raise AssertionError("walk escaped the exception structure")
            u, k = steps_to_next_key(v)
            length += u
            if k == start:
                break
        lengths.append(length)
    # pure-shift cycles that avoid every exception key entirely
    key_residues = {k % g for k in keys}
    if len(key_residues) < g:
        lengths.append(period)
    return math.lcm(*lengths)


def sparse_to_dense(p: SparsePerm, cap: int = 100_000) -> Perm:
    if p.modulus > cap:
        raise ValueError("modulus too large to densify")
    emap = dict(p.exc)
    d = p.modulus
    return Perm(tuple(emap.get(x, (x + p.shift) % d) for x in range(d)))


def sparse_str(p: SparsePerm) -> str:
    body = f"shift+{p.shift} mod {p.modulus}"
    if p.exc:
        body += " with {" + ", ".join(f"{k}→{v}" for k, v in p.exc) + "}"
    return body
