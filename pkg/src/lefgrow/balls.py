"""Balls in word metrics, canonical codes, agreement radii, local embeddings,
and Schreier graphs.

A ball is stored with every induced edge, including edges joining two
boundary vertices.  Because each letter move is deterministic (at most one
edge of each color leaves and enters a vertex), a based isomorphism between
two balls is unique when it exists, and the BFS traversal with a fixed letter
order yields a canonical code: equal codes if and only if based
color-isomorphic.  No isomorphism search happens anywhere.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Any

from .groups import MarkedGroup, eval_word
from .perms import Perm
from .util import BudgetExceeded, ordered_map

DEFAULT_BALL_CAP = 2_000_000


@dataclass(frozen=True)
class ColoredBall:
    """Based edge-colored graph induced on a radius-n ball.

    succ[v] has 2*nletters entries: targets under letters 1..d then their
    inverses, None where the move leaves the ball.  Vertex 0 is the base.
    words[v] is the BFS discovery word of v (signed letters).
    """

    nletters: int
    radius: int
    vertices: tuple
    depth: tuple[int, ...]
    succ: tuple[tuple[int | None, ...], ...]
    words: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.vertices)

    def index_of(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}


@dataclass(frozen=True)
class BallCode:
    """Canonical byte encoding of a ColoredBall."""

    data: bytes

    def hex(self) -> str:
        return self.data.hex()

    @staticmethod
    def fromhex(s: str) -> "BallCode":
        return BallCode(bytes.fromhex(s))


def _bfs_ball(nletters: int, radius: int, base, step, max_vertices: int) -> ColoredBall:
    """Generic deterministic ball builder.

    step(payload, move) returns the payload one move away (never None); moves
    are 0..d-1 for letters, d..2d-1 for inverse letters.  Dedup is by payload
    equality, which the callers guarantee matches the intended equality.
    """
    nmoves = 2 * nletters
    index = {base: 0}
    vertices = [base]
    depth = [0]
    words = [()]
    frontier = [0]
    for dist in range(1, radius + 1):
        nxt = []
        for vi in frontier:
            v = vertices[vi]
            for mv in range(nmoves):
                w = step(v, mv)
                if w not in index:
                    if len(vertices) >= max_vertices:
                        raise BudgetExceeded(
                            f"ball exceeded the {max_vertices}-vertex cap at radius {dist}"
                        )
                    index[w] = len(vertices)
                    letter = mv + 1 if mv < nletters else -(mv - nletters + 1)
                    words.append(words[vi] + (letter,))
                    vertices.append(w)
                    depth.append(dist)
                    nxt.append(index[w])
        frontier = nxt
    succ = []
    for v in vertices:
        succ.append(tuple(index.get(step(v, mv)) for mv in range(nmoves)))
    return ColoredBall(
        nletters=nletters,
        radius=radius,
        vertices=tuple(vertices),
        depth=tuple(depth),
        succ=tuple(succ),
        words=tuple(words),
    )


def build_ball(G: MarkedGroup, n: int, max_vertices: int = DEFAULT_BALL_CAP) -> ColoredBall:
    """Radius-n ball of the marked Cayley graph of G, all induced edges."""
    if n < 0:
        raise ValueError("radius must be nonnegative")
    gens = list(G.generators)
    invs = [G.inv(g) for g in G.generators]
    d = G.d

    def step(x, mv):
        return G.mul(x, gens[mv]) if mv < d else G.mul(x, invs[mv - d])

    return _bfs_ball(d, n, G.identity, step, max_vertices)


def _canonical_order(ball: ColoredBall, succ) -> list[int]:
    """BFS order from the base with the fixed letter order; canonical because
    letter moves are deterministic."""
    seen = {0}
    order = [0]
    head = 0
    while head < len(order):
        v = order[head]
        head += 1
        for w in succ[v]:
            if w is not None and w not in seen:
                seen.add(w)
                order.append(w)
    if len(order) != len(ball.vertices):
        raise AssertionError("ball graph is not connected from its base")
    return order


def _masked_succ(ball: ColoredBall, boundary_edges: bool):
    if boundary_edges:
        return ball.succ
    r = ball.radius
    return tuple(
        tuple(
            (None if (w is not None and ball.depth[v] == r and ball.depth[w] == r) else w)
            for w in row
        )
        for v, row in enumerate(ball.succ)
    )


def ball_code(ball: ColoredBall, boundary_edges: bool = True) -> BallCode:
    """Canonical code; equal codes iff based color-isomorphic ball graphs.

    With boundary_edges False, edges joining two radius-n vertices are
    dropped before coding (the boundary-insensitive variant).
    """
    succ = _masked_succ(ball, boundary_edges)
    order = _canonical_order(ball, succ)
    pos = {v: i for i, v in enumerate(order)}
    width = max(4, (len(order).bit_length() + 7) // 8)
    out = bytearray()
    out += b"BC"
    out += ball.nletters.to_bytes(2, "big")
    out += len(order).to_bytes(width, "big")
    for v in order:
        for w in succ[v]:
            out += (0 if w is None else pos[w] + 1).to_bytes(width, "big")
    return BallCode(bytes(out))


def agreement_radius(
    G: MarkedGroup,
    H: MarkedGroup,
    max_n: int,
    boundary_edges: bool = True,
    max_vertices: int = DEFAULT_BALL_CAP,
) -> int:
    """Largest n <= max_n with equal radius-n ball codes; -1 if none agree.

    This is the marked-groups agreement radius, capped at max_n.
    """
    if G.d != H.d:
        raise ValueError("marked groups must have the same number of generators")
    best = -1
    for n in range(max_n + 1):
        cg = ball_code(build_ball(G, n, max_vertices), boundary_edges)
        ch = ball_code(build_ball(H, n, max_vertices), boundary_edges)
        if cg != ch:
            break
        best = n
    return best


# --- local embeddings -----------------------------------------------------------


@dataclass
class LocalEmbeddingMap:
    """An explicit map from the vertices of a ball into a target group."""

    source: MarkedGroup
    target: MarkedGroup
    ball: ColoredBall
    images: tuple
    verified: bool = False
    note: str = ""


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    kind: str = "ok"  # ok | injectivity | multiplicativity
    witness: tuple = ()
    message: str = ""


def verify_local_embedding(m: LocalEmbeddingMap) -> VerifyResult:
    """Exhaustively check injectivity and in-ball multiplicativity.

    Returns the first violated pair or triple on failure; also stamps
    m.verified.  Failure is a value, not an exception.
    """
    ball = m.ball
    G, H = m.source, m.target
    seen: dict[Any, int] = {}
    for i, img in enumerate(m.images):
        j = seen.get(img)
        if j is not None:
            m.verified = False
            return VerifyResult(
                False,
                "injectivity",
                (j, i),
                f"vertices {j} and {i} share the image {H.describe(img)}",
            )
        seen[img] = i
    index = ball.index_of()
    for i, gi in enumerate(ball.vertices):
        for j, gj in enumerate(ball.vertices):
            k = index.get(G.mul(gi, gj))
            if k is None:
                continue
            if H.mul(m.images[i], m.images[j]) != m.images[k]:
                m.verified = False
                return VerifyResult(
                    False,
                    "multiplicativity",
                    (i, j, k),
                    f"images of vertices {i},{j} do not multiply to the image of {k}",
                )
    m.verified = True
    return VerifyResult(True)


class AgreementError(ValueError):
    """Ball codes disagree at the radius needed to transport an embedding."""


def embedding_from_agreement(
    G: MarkedGroup,
    H: MarkedGroup,
    n: int,
    slack: int = 1,
    max_vertices: int = DEFAULT_BALL_CAP,
) -> LocalEmbeddingMap:
    """Local embedding of the radius-n ball obtained from code agreement at
    radius ceil(3n/2) + slack, by matching canonical BFS positions.

    The produced map is verified exhaustively before being returned.
    """
    if G.d != H.d:
        raise ValueError("marked groups must have the same number of generators")
    r = math.ceil(3 * n / 2) + slack
    bg = build_ball(G, r, max_vertices)
    bh = build_ball(H, r, max_vertices)
    if ball_code(bg) != ball_code(bh):
        raise AgreementError(f"radius-{r} codes disagree; cannot transport a radius-{n} ball")
    og = _canonical_order(bg, bg.succ)
    oh = _canonical_order(bh, bh.succ)
    to_target = {bg.vertices[v]: bh.vertices[w] for v, w in zip(og, oh)}
    bn = build_ball(G, n, max_vertices)
    images = tuple(to_target[v] for v in bn.vertices)
    m = LocalEmbeddingMap(
        source=G,
        target=H,
        ball=bn,
        images=images,
        note=f"matched BFS positions at radius {r}",
    )
    result = verify_local_embedding(m)
    if not result.ok:
        raise AgreementError(f"transported map failed verification: {result.message}")
    return m


def restrict_embedding(m: LocalEmbeddingMap, n: int, max_vertices: int = DEFAULT_BALL_CAP) -> LocalEmbeddingMap:
    """Restriction of a local embedding to a smaller ball."""
    if n > m.ball.radius:
        raise ValueError("can only restrict to a smaller radius")
    lookup = dict(zip(m.ball.vertices, m.images))
    bn = build_ball(m.source, n, max_vertices)
    return LocalEmbeddingMap(
        source=m.source,
        target=m.target,
        ball=bn,
        images=tuple(lookup[v] for v in bn.vertices),
        note=f"restriction of: {m.note}",
    )


def embedding_from_words(
    G: MarkedGroup, H: MarkedGroup, n: int, max_vertices: int = DEFAULT_BALL_CAP
) -> LocalEmbeddingMap:
    """Map each ball vertex to its BFS word evaluated in the target.

    Unverified on return; callers decide whether failure is an error.
    """
    if G.d != H.d:
        raise ValueError("marked groups must have the same number of generators")
    ball = build_ball(G, n, max_vertices)
    images = tuple(eval_word(H, w) for w in ball.words)
    return LocalEmbeddingMap(source=G, target=H, ball=ball, images=images, note="word transport")


# --- Schreier graphs --------------------------------------------------------------


@dataclass(frozen=True)
class SchreierGraph:
    """Action graph: one successor array per generator, each a bijection."""

    succ: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        npts = len(self.succ[0]) if self.succ else 0
        for arr in self.succ:
            if len(arr) != npts or sorted(arr) != list(range(npts)):
                raise ValueError("each color must be a bijection of the point set")

    @property
    def nletters(self) -> int:
        return len(self.succ)

    @property
    def npoints(self) -> int:
        return len(self.succ[0]) if self.succ else 0

    @staticmethod
    def from_perms(perms: list[Perm]) -> "SchreierGraph":
        if not perms:
            raise ValueError("need at least one permutation")
        n = perms[0].degree
        for p in perms:
            if p.degree != n:
                raise ValueError("permutations must share a degree")
        return SchreierGraph(tuple(p.images for p in perms))

    def preds(self) -> tuple[tuple[int, ...], ...]:
        out = []
        for arr in self.succ:
            inv = [0] * len(arr)
            for i, j in enumerate(arr):
                inv[j] = i
            out.append(tuple(inv))
        return tuple(out)


def schreier_ball(S: SchreierGraph, base: int, l: int) -> ColoredBall:
    """Based radius-l ball in the path metric of the Schreier graph.

    Loops appear as colored self-edges; all induced edges are kept.
    """
    preds = S.preds()
    d = S.nletters

    def step(x, mv):
        return S.succ[mv][x] if mv < d else preds[mv - d][x]

    return _bfs_ball(d, l, base, step, max_vertices=S.npoints + 1)


def schreier_ball_codes(S: SchreierGraph, l: int, threads: int = 1) -> Counter:
    """Multiset of based radius-l ball codes over all basepoints."""
    codes = ordered_map(
        lambda v: ball_code(schreier_ball(S, v, l)), range(S.npoints), threads
    )
    return Counter(codes)


def locally_isomorphic_at(S1: SchreierGraph, S2: SchreierGraph, l: int, threads: int = 1) -> bool:
    """True iff the *sets* of radius-l ball isomorphism types coincide."""
    if S1.nletters != S2.nletters:
        raise ValueError("graphs must have the same number of colors")
    return set(schreier_ball_codes(S1, l, threads)) == set(schreier_ball_codes(S2, l, threads))


# --- DOT export --------------------------------------------------------------------

_DOT_COLORS = ["red", "blue", "forestgreen", "orange", "purple", "brown", "cyan4", "magenta"]


def ball_to_dot(ball: ColoredBall, label_vertices: bool = False) -> str:
    lines = ["digraph ball {", '  node [shape=circle, width=0.25, label=""];']
    if label_vertices:
        lines[1] = "  node [shape=circle];"
    lines.append('  0 [shape=doublecircle, label="e"];')
    for v in range(len(ball.vertices)):
        if label_vertices and v:
            lines.append(f'  {v} [label="{v}"];')
    for v, row in enumerate(ball.succ):
        for mv, w in enumerate(row[: ball.nletters]):
            if w is not None:
                color = _DOT_COLORS[mv % len(_DOT_COLORS)]
                lines.append(f"  {v} -> {w} [color={color}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def schreier_to_dot(S: SchreierGraph) -> str:
    lines = ["digraph schreier {", "  node [shape=circle];"]
    for c, arr in enumerate(S.succ):
        color = _DOT_COLORS[c % len(_DOT_COLORS)]
        for i, j in enumerate(arr):
            lines.append(f"  {i} -> {j} [color={color}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
