"""Dart-based planar maps with coloured, possibly occupied vertices.

Darts are ``0 .. 2E-1``.  ``alpha`` pairs the two darts of an edge and
``sigma`` sends a dart to the next one counterclockwise around its vertex.
The face lying on the left of a dart ``d`` is traced by
``d -> sigma^{-1}(alpha(d))``; the external face is the one on the left of
the root dart.  An edge is named by the smaller of its two darts.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable

from .trees import BLACK, WHITE, BlossomTree, StructureError

RootedMapCode = tuple[int, ...]


@dataclass(frozen=True)
class PlanarMap:
    alpha: tuple[int, ...]
    sigma: tuple[int, ...]
    vertex: tuple[int, ...]  # dart -> vertex id
    color: tuple[str, ...]  # per vertex
    occupied: tuple[bool, ...]  # per vertex
    root: int
    special: frozenset[int] = field(default_factory=frozenset)

    @classmethod
    def from_permutations(cls, alpha: Iterable[int], sigma: Iterable[int],
                          color_of_dart: Iterable[str], occupied_of_dart: Iterable[bool],
                          root: int, special: Iterable[int] = ()) -> "PlanarMap":
        """Build from permutations plus per-dart attributes of the origin vertex."""
        alpha, sigma = tuple(alpha), tuple(sigma)
        colors, occs = list(color_of_dart), list(occupied_of_dart)
        vertex = [-1] * len(sigma)
        vcolor, vocc = [], []
        for d in range(len(sigma)):
            if vertex[d] >= 0:
                continue
            v = len(vcolor)
            vcolor.append(colors[d])
            vocc.append(occs[d])
            e = d
            while vertex[e] < 0:
                vertex[e] = v
                e = sigma[e]
        m = cls(alpha, sigma, tuple(vertex), tuple(vcolor), tuple(vocc), root)
        return m.with_special(special)

    @property
    def n_darts(self) -> int:
        return len(self.alpha)

    @property
    def n_edges(self) -> int:
        return len(self.alpha) // 2

    @property
    def n_vertices(self) -> int:
        return len(self.color)

    @cached_property
    def sigma_inv(self) -> tuple[int, ...]:
        inv = [0] * len(self.sigma)
        for d, e in enumerate(self.sigma):
            inv[e] = d
        return tuple(inv)

    def edge_of(self, d: int) -> int:
        return min(d, self.alpha[d])

    def edges(self) -> list[int]:
        return [d for d in range(self.n_darts) if d < self.alpha[d]]

    def dart_color(self, d: int) -> str:
        return self.color[self.vertex[d]]

    def dart_occupied(self, d: int) -> bool:
        return self.occupied[self.vertex[d]]

    def with_special(self, special: Iterable[int]) -> "PlanarMap":
        return replace(self, special=frozenset(self.edge_of(d) for d in special))

    def vertex_darts(self, v: int) -> list[int]:
        start = self.vertex.index(v)
        out = [start]
        d = self.sigma[start]
        while d != start:
            out.append(d)
            d = self.sigma[d]
        return out

    @property
    def n_particles(self) -> int:
        return sum(self.occupied)

    @cached_property
    def faces(self) -> list[list[int]]:
        return trace_faces(self)

    @property
    def genus(self) -> int:
        chi = self.n_vertices - self.n_edges + len(self.faces)
        return (2 - chi) // 2

    def relabel(self, perm: list[int]) -> "PlanarMap":
        """The same map with dart ``d`` renamed ``perm[d]``."""
        n = self.n_darts
        inv = [0] * n
        for d, p in enumerate(perm):
            inv[p] = d
        alpha = [perm[self.alpha[inv[p]]] for p in range(n)]
        sigma = [perm[self.sigma[inv[p]]] for p in range(n)]
        colors = [self.dart_color(inv[p]) for p in range(n)]
        occs = [self.dart_occupied(inv[p]) for p in range(n)]
        special = [perm[e] for e in self.special]
        return PlanarMap.from_permutations(alpha, sigma, colors, occs, perm[self.root], special)


def check_map(m: PlanarMap, trivalent: bool = True) -> list[str]:
    """Structural invariants; returns a list of problems (empty when fine)."""
    problems = []
    n = m.n_darts
    if sorted(m.sigma) != list(range(n)):
        problems.append("sigma is not a permutation")
    for d in range(n):
        a = m.alpha[d]
        if a == d or m.alpha[a] != d:
            problems.append(f"alpha is not a fixed-point-free involution at {d}")
            break
    if problems:
        return problems
    seen = {m.root}
    stack = [m.root]
    while stack:
        d = stack.pop()
        for e in (m.sigma[d], m.alpha[d]):
            if e not in seen:
                seen.add(e)
                stack.append(e)
    if len(seen) != n:
        problems.append("map is not connected")
    if trivalent and any(len(m.vertex_darts(v)) != 3 for v in range(m.n_vertices)):
        problems.append("a vertex is not trivalent")
    for e in m.edges():
        if m.dart_color(e) == m.dart_color(m.alpha[e]):
            problems.append(f"edge {e} joins two {m.dart_color(e)} vertices")
    if m.genus != 0:
        problems.append(f"genus {m.genus} != 0")
    return problems


def trace_faces(m: PlanarMap) -> list[list[int]]:
    """Face cycles (face on the left of each dart); the external face first."""
    seen = [False] * m.n_darts
    faces = []
    for start in [m.root] + list(range(m.n_darts)):
        if seen[start]:
            continue
        cycle = []
        d = start
        while not seen[d]:
            seen[d] = True
            cycle.append(d)
            d = m.sigma_inv[m.alpha[d]]
        faces.append(cycle)
    return faces


def nhp_edges(m: PlanarMap) -> list[int]:
    return [e for e in m.edges() if m.dart_occupied(e) and m.dart_occupied(m.alpha[e])]


def canonical_code(m: PlanarMap, with_special: bool = False) -> RootedMapCode:
    """Breadth-first relabelling from the root, exploring sigma then alpha.

    Per dart (in new order): new label of its sigma image, new label of its
    alpha image, and an attribute word ``2*black + occupied`` (plus 4 when the
    edge is special and ``with_special`` is set).
    """
    label = {m.root: 0}
    order = [m.root]
    i = 0
    while i < len(order):
        d = order[i]
        for e in (m.sigma[d], m.alpha[d]):
            if e not in label:
                label[e] = len(order)
                order.append(e)
        i += 1
    code = [m.n_darts]
    for d in order:
        attr = 2 * (m.dart_color(d) == BLACK) + m.dart_occupied(d)
        if with_special and m.edge_of(d) in m.special:
            attr += 4
        code += (label[m.sigma[d]], label[m.alpha[d]], attr)
    return tuple(code)


def random_relabel(m: PlanarMap, rng: random.Random) -> PlanarMap:
    perm = list(range(m.n_darts))
    rng.shuffle(perm)
    return m.relabel(perm)


# -- closing --------------------------------------------------------------------

@dataclass(frozen=True)
class Closing:
    map: PlanarMap
    edge_of_tree_edge: dict[int, int]  # tree edge id -> map edge id
    arcs: tuple[int, ...]  # map edges created by bud-leaf gluing


def close_tree_labeled(tree: BlossomTree, special: Iterable[int] = ()) -> Closing:
    """Close ``tree`` and report which map edge each tree edge became.

    Tree vertex ``v`` owns darts ``3v .. 3v+2`` (slot 0 towards the parent or
    root terminal, then the two children counterclockwise).  The extra black
    vertex gets darts ``3V .. 3V+2``.
    """
    lay = tree.layout
    if tree.total_charge != 3:
        raise StructureError(f"total charge {tree.total_charge} != 3")
    V = lay.n_inner
    n = 3 * (V + 1)
    alpha = [-1] * n
    sigma = [0] * n
    colors = [BLACK] * n
    occs = [False] * n
    for v in range(V):
        for s in range(3):
            d = 3 * v + s
            sigma[d] = 3 * v + (s + 1) % 3
            colors[d] = lay.color[v]
            occs[d] = lay.occupied[v]
    edge_of_tree_edge = {}
    for v in range(1, V):
        p = lay.parent[v]
        slot = lay.slots[p].index(("v", v))
        a, b = 3 * p + slot, 3 * v
        alpha[a], alpha[b] = b, a
        edge_of_tree_edge[v] = min(a, b)

    def dart_of_terminal(j: int) -> int:
        v, s = lay.terminal_at[j]
        return 3 * v + s

    match = tree.matching
    arcs = []
    for j, k in match.partner.items():
        if j < k:
            a, b = dart_of_terminal(j), dart_of_terminal(k)
            alpha[a], alpha[b] = b, a
            arcs.append(min(a, b))
    u = match.unmatched
    if len(u) != 3:
        raise StructureError(f"{len(u)} unmatched leaves, expected 3")
    # seen from the new vertex in the outer face the contour order reverses
    base = 3 * V
    around = (u[0], u[2], u[1])
    root = -1
    for s, j in enumerate(around):
        d = base + s
        sigma[d] = base + (s + 1) % 3
        t = dart_of_terminal(j)
        alpha[d], alpha[t] = t, d
        if j == 0:
            root = d
    if root < 0:
        raise StructureError("tree is not planted at an unmatched leaf")
    m = PlanarMap.from_permutations(alpha, sigma, colors, occs, root)
    special_edges = [edge_of_tree_edge[e] for e in special]
    return Closing(m.with_special(special_edges), edge_of_tree_edge, tuple(sorted(arcs)))


def close_tree(tree: BlossomTree, special: Iterable[int] = ()) -> PlanarMap:
    return close_tree_labeled(tree, special).map


# -- text exports -----------------------------------------------------------------

def map_to_text(m: PlanarMap) -> str:
    """Line-oriented dart table.

    Header ``map darts=<2E> vertices=<V> root=<dart>``, then one line per dart::

        <dart> <alpha> <sigma> <vertex> <color w|b> <occupied 0|1> <special 0|1>
    """
    lines = [f"map darts={m.n_darts} vertices={m.n_vertices} root={m.root}"]
    for d in range(m.n_darts):
        lines.append(" ".join(str(x) for x in (
            d, m.alpha[d], m.sigma[d], m.vertex[d], "w" if m.dart_color(d) == WHITE else "b",
            int(m.dart_occupied(d)), int(m.edge_of(d) in m.special))))
    return "\n".join(lines) + "\n"


def map_from_text(text: str) -> PlanarMap:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = dict(kv.split("=") for kv in lines[0].split()[1:])
    n = int(header["darts"])
    alpha, sigma = [0] * n, [0] * n
    colors, occs, special = [""] * n, [False] * n, []
    for ln in lines[1:]:
        d, a, s, _v, c, o, sp = ln.split()
        d = int(d)
        alpha[d], sigma[d] = int(a), int(s)
        colors[d] = WHITE if c == "w" else BLACK
        occs[d] = o == "1"
        if sp == "1":
            special.append(d)
    return PlanarMap.from_permutations(alpha, sigma, colors, occs, int(header["root"]), special)


def map_to_dot(m: PlanarMap) -> str:
    """Graphviz description (no embedding information) for quick inspection."""
    out = ["graph map {"]
    for v in range(m.n_vertices):
        fill = "white" if m.color[v] == WHITE else "black"
        shape = "doublecircle" if m.occupied[v] else "circle"
        font = "black" if fill == "white" else "white"
        out.append(f'  v{v} [shape={shape}, style=filled, fillcolor={fill}, fontcolor={font}];')
    for e in m.edges():
        attrs = []
        if e in m.special:
            attrs.append("color=grey, penwidth=3")
        if m.root in (e, m.alpha[e]):
            attrs.append("label=root")
        tail = f" [{', '.join(attrs)}]" if attrs else ""
        out.append(f"  v{m.vertex[e]} -- v{m.vertex[m.alpha[e]]}{tail};")
    out.append("}")
    return "\n".join(out) + "\n"
