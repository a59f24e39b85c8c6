"""Blossom trees with particles.

A blossom tree is stored *planted*: a root terminal (normally a leaf) hangs
above the top inner vertex, and every inner vertex lists its two other
neighbours as ``children`` in counterclockwise order after the parent side.
A tree "rooted at one of its unmatched leaves" is simply a tree planted at a
leaf that stays unmatched in the closing; see :func:`BlossomTree.is_rooted`.

Text form (stable, used for golden files and deduplication)::

    tree     := terminal node
    node     := terminal | vertex "(" node node ")"
    terminal := "+"  (leaf, charge +1)  |  "-"  (bud, charge -1)
    vertex   := "w" | "W" | "k" | "K"
                (white empty, white occupied, black empty, black occupied)

so the single white vertex with three leaves is ``+w(++)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterator, Union

WHITE = "white"
BLACK = "black"


@dataclass(frozen=True, slots=True)
class Terminal:
    kind: str  # "leaf" | "bud"

    @property
    def charge(self) -> int:
        return 1 if self.kind == "leaf" else -1


LEAF = Terminal("leaf")
BUD = Terminal("bud")


@dataclass(frozen=True, slots=True)
class Inner:
    color: str
    occupied: bool
    children: tuple["Node", "Node"]


Node = Union[Inner, Terminal]

_VERTEX_CHAR = {(WHITE, False): "w", (WHITE, True): "W", (BLACK, False): "k", (BLACK, True): "K"}
_CHAR_VERTEX = {v: k for k, v in _VERTEX_CHAR.items()}


@dataclass(frozen=True)
class EdgeType:
    q_white: int
    q_black: int

    @property
    def regular(self) -> bool:
        return self.q_white >= 0 and self.q_black <= 1

    def __str__(self) -> str:
        return f"({self.q_white}:{self.q_black})"


@dataclass
class Layout:
    """Flat arrays describing a planted tree.

    Inner vertices are numbered in preorder (children in counterclockwise
    order); the edge joining vertex ``i > 0`` to its parent has id ``i``.
    Terminals are numbered in contour order, the root terminal being 0.
    """

    color: list[str] = field(default_factory=list)
    occupied: list[bool] = field(default_factory=list)
    parent: list[int] = field(default_factory=list)
    # per vertex, three slots: slot 0 faces the parent (or the root terminal),
    # slots 1-2 are the children; entries ("v", i) or ("t", j)
    slots: list[list[tuple[str, int]]] = field(default_factory=list)
    terminal_kind: list[str] = field(default_factory=list)
    terminal_at: list[tuple[int, int]] = field(default_factory=list)  # (vertex, slot)
    subtree_charge: list[int] = field(default_factory=list)

    @property
    def n_inner(self) -> int:
        return len(self.color)


def _build_layout(root: Terminal, top: Inner) -> Layout:
    lay = Layout()
    lay.terminal_kind.append(root.kind)
    lay.terminal_at.append((0, 0))

    def visit(node: Inner, parent: int) -> int:
        i = len(lay.color)
        lay.color.append(node.color)
        lay.occupied.append(node.occupied)
        lay.parent.append(parent)
        lay.subtree_charge.append(0)
        slots: list[tuple[str, int]] = [("t", 0) if parent < 0 else ("v", parent)]
        lay.slots.append(slots)
        charge = 0
        for slot, child in enumerate(node.children, 1):
            if isinstance(child, Terminal):
                j = len(lay.terminal_kind)
                lay.terminal_kind.append(child.kind)
                lay.terminal_at.append((i, slot))
                slots.append(("t", j))
                charge += child.charge
            else:
                k = visit(child, i)
                slots.append(("v", k))
                charge += lay.subtree_charge[k]
        lay.subtree_charge[i] = charge
        return i

    visit(top, -1)
    return lay


@dataclass(frozen=True)
class BlossomTree:
    top: Inner
    root: Terminal = LEAF

    @cached_property
    def layout(self) -> Layout:
        return _build_layout(self.root, self.top)

    @cached_property
    def serialized(self) -> str:
        return serialize(self)

    def __str__(self) -> str:
        return self.serialized

    @property
    def n_inner(self) -> int:
        return self.layout.n_inner

    @property
    def total_charge(self) -> int:
        return self.root.charge + self.layout.subtree_charge[0]

    @property
    def n_particles(self) -> int:
        return sum(self.layout.occupied)

    def inner_edges(self) -> list[int]:
        return list(range(1, self.n_inner))

    def edge_endpoints(self, e: int) -> tuple[int, int]:
        return self.layout.parent[e], e

    def is_nhp(self, e: int) -> bool:
        occ = self.layout.occupied
        return occ[e] and occ[self.layout.parent[e]]

    def nhp_edges(self) -> list[int]:
        return [e for e in self.inner_edges() if self.is_nhp(e)]

    @cached_property
    def matching(self) -> "Matching":
        return match_terminals(self.layout.terminal_kind)

    def is_rooted(self) -> bool:
        """Planted at a leaf that remains unmatched in the closing."""
        return self.root.kind == "leaf" and 0 in self.matching.unmatched

    def with_occupation(self, occupied: list[bool]) -> "BlossomTree":
        it = iter(occupied)

        def rebuild(node: Node) -> Node:
            if isinstance(node, Terminal):
                return node
            occ = next(it)
            return Inner(node.color, occ, (rebuild(node.children[0]), rebuild(node.children[1])))

        return BlossomTree(rebuild(self.top), self.root)


# -- serialization ----------------------------------------------------------

def serialize(tree: BlossomTree) -> str:
    out: list[str] = ["+" if tree.root.kind == "leaf" else "-"]

    def emit(node: Node) -> None:
        if isinstance(node, Terminal):
            out.append("+" if node.kind == "leaf" else "-")
            return
        out.append(_VERTEX_CHAR[(node.color, node.occupied)])
        out.append("(")
        emit(node.children[0])
        emit(node.children[1])
        out.append(")")

    emit(tree.top)
    return "".join(out)


def parse_tree(text: str) -> BlossomTree:
    text = "".join(text.split())
    pos = 0

    def terminal(ch: str) -> Terminal:
        return LEAF if ch == "+" else BUD

    def node() -> Node:
        nonlocal pos
        if pos >= len(text):
            raise ValueError("unexpected end of tree text")
        ch = text[pos]
        pos += 1
        if ch in "+-":
            return terminal(ch)
        if ch not in _CHAR_VERTEX:
            raise ValueError(f"unexpected {ch!r} at {pos - 1}")
        color, occ = _CHAR_VERTEX[ch]
        if text[pos:pos + 1] != "(":
            raise ValueError(f"expected '(' at {pos}")
        pos += 1
        a = node()
        b = node()
        if text[pos:pos + 1] != ")":
            raise ValueError(f"expected ')' at {pos}")
        pos += 1
        return Inner(color, occ, (a, b))

    if not text or text[0] not in "+-":
        raise ValueError("tree text must start with the root terminal")
    pos = 1
    root = terminal(text[0])
    top = node()
    if isinstance(top, Terminal):
        raise ValueError("tree has no inner vertex")
    if pos != len(text):
        raise ValueError(f"trailing characters at {pos}")
    return BlossomTree(top, root)


# -- charges and admissibility ----------------------------------------------

def edge_charges(tree: BlossomTree) -> dict[int, EdgeType]:
    """Type ``(q_white : q_black)`` of every inner edge, from one post-order pass."""
    lay = tree.layout
    total = tree.total_charge
    out = {}
    for e in range(1, lay.n_inner):
        below = lay.subtree_charge[e]
        if lay.color[e] == WHITE:
            out[e] = EdgeType(below, total - below)
        else:
            out[e] = EdgeType(total - below, below)
    return out


def edge_charges_bruteforce(tree: BlossomTree) -> dict[int, EdgeType]:
    """Same as :func:`edge_charges` by counting terminals on each side afresh."""
    lay = tree.layout
    out = {}
    for e in range(1, lay.n_inner):
        side = set()
        stack = [e]
        while stack:
            v = stack.pop()
            side.add(v)
            stack.extend(k for kind, k in lay.slots[v][1:] if kind == "v")
        q_child = sum(1 if lay.terminal_kind[j] == "leaf" else -1
                      for j, (v, _) in enumerate(lay.terminal_at) if v in side and j != 0)
        q_other = sum(1 if lay.terminal_kind[j] == "leaf" else -1
                      for j, (v, _) in enumerate(lay.terminal_at) if v not in side or j == 0)
        if lay.color[e] == WHITE:
            out[e] = EdgeType(q_child, q_other)
        else:
            out[e] = EdgeType(q_other, q_child)
    return out


class StructureError(ValueError):
    """A tree violating the blossom-tree properties (1)-(4)."""


def structural_violations(tree: BlossomTree) -> list[tuple[int, str]]:
    lay = tree.layout
    bad = []
    for v in range(lay.n_inner):
        p = lay.parent[v]
        if p >= 0 and lay.color[p] == lay.color[v]:
            bad.append((v, "structural: edge joins two vertices of the same color"))
    for j, (v, _) in enumerate(lay.terminal_at):
        want = "bud" if lay.color[v] == BLACK else "leaf"
        if lay.terminal_kind[j] != want:
            bad.append((-1 - j, f"structural: {lay.terminal_kind[j]} on a {lay.color[v]} vertex"))
    if tree.total_charge != 3:
        bad.append((0, f"structural: total charge {tree.total_charge} != 3"))
    return bad


@dataclass(frozen=True)
class AdmissibilityReport:
    admissible: bool
    violations: tuple[tuple[int, str], ...] = ()


def check_admissible(tree: BlossomTree) -> AdmissibilityReport:
    bad = structural_violations(tree)
    if not bad:
        for e, t in edge_charges(tree).items():
            nhp = tree.is_nhp(e)
            if not nhp and not t.regular:
                bad.append((e, "HP-but-nonregular"))
            elif nhp and t.regular:
                bad.append((e, "NHP-but-regular"))
    return AdmissibilityReport(not bad, tuple(bad))


def environment_violations(tree: BlossomTree) -> list[tuple[int, str]]:
    """Local neighbourhood rules every admissible tree must obey.

    * an edge at a white-empty vertex has type (2:1);
    * an NHP edge has type (-1:4); its black end has two white-empty
      neighbours, its white end has one black-empty neighbour carrying two
      buds plus either a leaf or another black-empty neighbour;
    * an edge at a black-empty vertex has type (2:1), or type (5:-2) when that
      vertex carries two buds and the white end is occupied with exactly one
      NHP edge.
    """
    lay = tree.layout
    types = edge_charges(tree)
    bad = []

    def neighbours(v: int) -> list[tuple[str, int]]:
        return lay.slots[v]

    def n_buds(v: int) -> int:
        return sum(1 for kind, j in lay.slots[v] if kind == "t" and lay.terminal_kind[j] == "bud")

    def nhp_degree(v: int) -> int:
        return sum(1 for kind, k in lay.slots[v]
                   if kind == "v" and lay.occupied[v] and lay.occupied[k])

    for e, t in types.items():
        p = lay.parent[e]
        w, b = (e, p) if lay.color[e] == WHITE else (p, e)
        if not lay.occupied[w] and (t.q_white, t.q_black) != (2, 1):
            bad.append((e, f"edge at white-empty vertex has type {t}"))
        if lay.occupied[w] and lay.occupied[b]:
            if (t.q_white, t.q_black) != (-1, 4):
                bad.append((e, f"NHP edge has type {t}"))
                continue
            others_b = [s for s in neighbours(b) if s != ("v", w)]
            if not all(kind == "v" and not lay.occupied[k] for kind, k in others_b):
                bad.append((e, "black end of NHP edge lacks two white-empty neighbours"))
            others_w = [s for s in neighbours(w) if s != ("v", b)]
            two_bud = [k for kind, k in others_w
                       if kind == "v" and not lay.occupied[k] and n_buds(k) == 2]
            if not two_bud:
                bad.append((e, "white end of NHP edge lacks a two-bud black-empty neighbour"))
                continue
            rest = [s for s in others_w if s != ("v", two_bud[0])]
            kind, k = rest[0]
            ok = (kind == "t" and lay.terminal_kind[k] == "leaf") or (
                kind == "v" and not lay.occupied[k])
            if not ok:
                bad.append((e, "white end of NHP edge has a bad third neighbour"))
        elif not lay.occupied[b]:
            pair = (t.q_white, t.q_black)
            if pair == (5, -2):
                if n_buds(b) != 2 or not lay.occupied[w] or nhp_degree(w) != 1:
                    bad.append((e, "(5:-2) edge without its required environment"))
            elif pair != (2, 1):
                bad.append((e, f"edge at black-empty vertex has type {t}"))
    return bad


def validate_environments(tree: BlossomTree) -> bool:
    return not environment_violations(tree)


# -- closing matcher ----------------------------------------------------------

@dataclass(frozen=True)
class Matching:
    partner: dict[int, int]  # bud <-> leaf, both directions
    unmatched: tuple[int, ...]  # unmatched leaves in contour order


def match_terminals(kinds: list[str]) -> Matching:
    """Cyclic parenthesis matching: a bud opens, the next free leaf closes it."""
    partner: dict[int, int] = {}
    stack: list[int] = []
    for i, k in enumerate(kinds):
        if k == "bud":
            stack.append(i)
        elif stack:
            b = stack.pop()
            partner[b] = i
            partner[i] = b
    for i, k in enumerate(kinds):
        if not stack:
            break
        if k == "leaf" and i not in partner:
            b = stack.pop()
            partner[b] = i
            partner[i] = b
    if stack:
        raise StructureError("more buds than leaves: matching failed")
    unmatched = tuple(i for i, k in enumerate(kinds) if k == "leaf" and i not in partner)
    return Matching(partner, unmatched)


def match_terminals_naive(kinds: list[str]) -> Matching:
    """Repeatedly glue a bud immediately followed (cyclically) by a leaf."""
    alive = list(range(len(kinds)))
    partner: dict[int, int] = {}
    changed = True
    while changed and len(alive) > 1:
        changed = False
        for pos in range(len(alive)):
            a, b = alive[pos], alive[(pos + 1) % len(alive)]
            if kinds[a] == "bud" and kinds[b] == "leaf":
                partner[a], partner[b] = b, a
                alive = [x for x in alive if x not in (a, b)]
                changed = True
                break
    return Matching(partner, tuple(i for i in alive if kinds[i] == "leaf"))


# -- generation ---------------------------------------------------------------

@lru_cache(maxsize=None)
def _shapes(color: str, n: int) -> tuple[Inner, ...]:
    """All subtrees hanging from a parent edge, topped by a ``color`` vertex,
    with ``n`` inner vertices and no particles."""
    if n < 1:
        return ()
    other = BLACK if color == WHITE else WHITE
    term = LEAF if color == WHITE else BUD

    def options(k: int) -> tuple[Node, ...]:
        return (term,) if k == 0 else _shapes(other, k)

    out = []
    for k in range(n):
        for a in options(k):
            for b in options(n - 1 - k):
                out.append(Inner(color, False, (a, b)))
    return tuple(out)


def _count_colors(node: Node) -> tuple[int, int]:
    if isinstance(node, Terminal):
        return 0, 0
    w, b = (1, 0) if node.color == WHITE else (0, 1)
    for c in node.children:
        cw, cb = _count_colors(c)
        w += cw
        b += cb
    return w, b


def blossom_shapes(n_inner: int) -> list[BlossomTree]:
    """Particle-free blossom trees planted at a leaf, in a fixed order."""
    if n_inner < 1 or n_inner % 2 == 0:
        raise ValueError("n_inner must be a positive odd integer")
    out = []
    for top in _shapes(WHITE, n_inner):
        w, b = _count_colors(top)
        if w == b + 1:
            out.append(BlossomTree(top, LEAF))
    return out


def generate_blossom_trees(n_inner: int, with_particles: bool = False) -> Iterator[BlossomTree]:
    """Every leaf-planted blossom tree with ``n_inner`` inner vertices, once each.

    With particles, every occupation pattern of every shape is produced
    (patterns enumerated in preorder, empty before occupied).
    """
    for shape in blossom_shapes(n_inner):
        if not with_particles:
            yield shape
            continue
        for occ in itertools.product((False, True), repeat=n_inner):
            yield shape.with_occupation(list(occ))


def admissible_occupations(shape: BlossomTree) -> Iterator[list[bool]]:
    """Occupation patterns making ``shape`` admissible, by backtracking.

    A regular edge forbids both ends occupied; a non-regular edge requires it.
    """
    lay = shape.layout
    types = edge_charges(shape)
    regular = [True] + [types[e].regular for e in range(1, lay.n_inner)]
    occ = [False] * lay.n_inner

    def go(v: int) -> Iterator[list[bool]]:
        if v == lay.n_inner:
            yield list(occ)
            return
        p = lay.parent[v]
        for choice in (False, True):
            if p >= 0:
                if regular[v] and choice and occ[p]:
                    continue
                if not regular[v] and not (choice and occ[p]):
                    continue
            occ[v] = choice
            yield from go(v + 1)
        occ[v] = False

    yield from go(0)


def admissible_trees(n_inner: int) -> Iterator[BlossomTree]:
    """Leaf-planted admissible trees (same set and order as filtering
    :func:`generate_blossom_trees` through :func:`check_admissible`)."""
    for shape in blossom_shapes(n_inner):
        for occ in admissible_occupations(shape):
            yield shape.with_occupation(occ)


def rooted_admissible_trees(n_inner: int) -> Iterator[BlossomTree]:
    for t in admissible_trees(n_inner):
        if t.is_rooted():
            yield t
