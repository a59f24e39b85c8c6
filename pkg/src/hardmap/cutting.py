"""Cutting a rooted bicubic map back into a blossom tree.

The root vertex is erased and its three edges become leaves.  The contour of
the external face is then walked from the root leaf, and an edge is cut into
a bud (black side) and a leaf (white side) when it is walked from its black
end, is not special, and separates the external face from an inner face.
Passes repeat until one makes no cut.

Each pass first takes a snapshot of the contour and only visits edges on it,
so faces are opened in order of their distance from the external face
(``strategy="layered"``).  Cutting as soon as a face opens and walking on
into it (``"greedy"``) is kept for comparison; it does not invert closing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .maps import PlanarMap, canonical_code, close_tree_labeled
from .trees import BLACK, BUD, LEAF, BlossomTree, Inner, Terminal, edge_charges

STRATEGIES = ("layered", "greedy")


class NotAcceptable(Exception):
    """The special edges block the cutting before the map has become a tree."""

    def __init__(self, message: str, n_cut: int = 0):
        super().__init__(message)
        self.n_cut = n_cut


@dataclass
class CutResult:
    tree: BlossomTree
    cut_edge_log: list[int]  # map edges in the order they were cut
    tree_edge_to_map_edge: dict[int, int]
    special_tree_edges: frozenset[int]
    n_nonregular: int
    r_regular_special: int
    trace: list[str] = field(default_factory=list)

    @property
    def nonregular_edges(self) -> list[int]:
        types = edge_charges(self.tree)
        return sorted(e for e, t in types.items() if not t.regular)


class _Cutter:
    def __init__(self, m: PlanarMap, special: frozenset[int], trace: list[str] | None):
        self.m = m
        self.special = special
        self.trace = trace
        n = m.n_darts
        self.alpha: list[int | None] = list(m.alpha)
        self.kind: list[str | None] = [None] * n
        root_vertex = m.vertex[m.root]
        self.dead = set(m.vertex_darts(root_vertex))
        for d in self.dead:
            a = m.alpha[d]
            self.alpha[a] = None
            self.kind[a] = "leaf"
        self.start = m.alpha[m.root]
        self.ext = [False] * n
        d = self.start
        while True:
            self.ext[d] = True
            d = self._next(d)
            if d == self.start:
                break
        self.log: list[int] = []

    def _next(self, d: int) -> int:
        """Next dart counterclockwise around the outside of the current graph.

        From the far end of ``d`` the walk leaves by the next dart
        counterclockwise; a dangling dart is turned around at its tip.
        """
        a = self.alpha[d]
        return self.m.sigma[d] if a is None else self.m.sigma[a]

    def _note(self, d: int, what: str) -> None:
        if self.trace is not None:
            self.trace.append(f"{self.m.edge_of(d)} {d}->{self.m.alpha[d]} {what}")

    def _try(self, d: int) -> bool:
        a = self.alpha[d]
        if a is None:
            return False
        if self.ext[a]:
            self._note(d, "bridge-skip")
            return False
        if self.m.edge_of(d) in self.special:
            self._note(d, "special-skip")
            return False
        if self.m.dart_color(d) != BLACK:
            self._note(d, "wrong-direction-skip")
            return False
        self._note(d, "cut")
        # the inner face behind the edge joins the external one
        e = a
        while not self.ext[e]:
            self.ext[e] = True
            e = self._next(e)
        self.alpha[d] = self.alpha[a] = None
        self.kind[d], self.kind[a] = "bud", "leaf"
        self.log.append(self.m.edge_of(d))
        return True

    def contour(self) -> list[int]:
        out = [self.start]
        d = self._next(self.start)
        while d != self.start:
            out.append(d)
            d = self._next(d)
        return out

    def layered_pass(self) -> int:
        before = len(self.log)
        for d in self.contour():
            self._try(d)
        return len(self.log) - before

    def greedy_pass(self) -> int:
        before = len(self.log)
        d = self.start
        while True:
            self._try(d)
            d = self._next(d)
            if d == self.start:
                break
        return len(self.log) - before

    def run(self, strategy: str) -> None:
        step = self.layered_pass if strategy == "layered" else self.greedy_pass
        while step():
            pass
        if not all(self.ext[d] for d in range(self.m.n_darts) if d not in self.dead):
            raise NotAcceptable("a face cannot be reached without crossing special edges",
                                len(self.log))

    def to_tree(self) -> tuple[BlossomTree, dict[int, int]]:
        m, alpha, kind = self.m, self.alpha, self.kind
        edge_map: dict[int, int] = {}
        counter = [0]

        def build(entry: int) -> Inner:
            v_id = counter[0]
            counter[0] += 1
            if v_id > 0:
                edge_map[v_id] = m.edge_of(entry)
            kids: list[Terminal | Inner] = []
            c = m.sigma[entry]
            for _ in range(2):
                a = alpha[c]
                if a is None:
                    kids.append(LEAF if kind[c] == "leaf" else BUD)
                else:
                    kids.append(build(a))
                c = m.sigma[c]
            v = m.vertex[entry]
            return Inner(m.color[v], m.occupied[v], (kids[0], kids[1]))

        top = build(self.start)
        return BlossomTree(top, LEAF), edge_map


def _edges(m: PlanarMap, darts: Iterable[int] | None) -> frozenset[int]:
    if darts is None:
        return m.special
    out = set()
    for d in darts:
        if not 0 <= d < m.n_darts:
            raise ValueError(f"dart {d} is not in the map")
        out.add(m.edge_of(d))
    return frozenset(out)


def _check_preconditions(m: PlanarMap, special: frozenset[int]) -> None:
    rv = m.vertex[m.root]
    if m.color[rv] != BLACK or m.occupied[rv]:
        raise ValueError("the root vertex must be black and empty")
    if len(m.vertex_darts(rv)) != 3:
        raise ValueError("the root vertex must be trivalent")
    for d in m.vertex_darts(rv):
        if m.edge_of(d) in special:
            raise ValueError("a special edge touches the root vertex")
    unknown = special - set(m.edges())
    if unknown:
        raise ValueError(f"special edges {sorted(unknown)} are not edges of the map")


def cut_map(m: PlanarMap, special: Iterable[int] | None = None,
            trace: list[str] | None = None, strategy: str = "layered") -> CutResult:
    """Cut ``m`` into a blossom tree without cutting any edge of ``special``.

    ``special`` defaults to the map's own special set; edges may be given by
    either of their darts.  Raises :class:`NotAcceptable` when the marking
    keeps some face closed.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    special = _edges(m, special)
    _check_preconditions(m, special)
    cutter = _Cutter(m, special, trace)
    cutter.run(strategy)
    tree, edge_map = cutter.to_tree()
    special_tree = frozenset(e for e, me in edge_map.items() if me in special)
    types = edge_charges(tree)
    nonregular = [e for e, t in types.items() if not t.regular]
    r = sum(1 for e in special_tree if types[e].regular)
    return CutResult(tree, cutter.log, edge_map, special_tree, len(nonregular), r,
                     trace if trace is not None else [])


def verify_prop_c1(result: CutResult) -> bool:
    """Every non-regular edge of the cut tree is special."""
    return set(result.nonregular_edges) <= result.special_tree_edges


def roundtrip_tree(tree: BlossomTree, strategy: str = "layered") -> bool:
    """Closing with the non-regular edges marked, then cutting, gives ``tree`` back."""
    types = edge_charges(tree)
    special = [e for e, t in types.items() if not t.regular]
    closing = close_tree_labeled(tree, special)
    try:
        res = cut_map(closing.map, strategy=strategy)
    except NotAcceptable:
        return False
    return res.tree == tree


def roundtrip_map(m: PlanarMap, special: Iterable[int] | None = None,
                  strategy: str = "layered") -> bool:
    """Cutting then closing gives ``m`` back, special flags included."""
    special = _edges(m, special)
    m = m.with_special(special)
    try:
        res = cut_map(m, strategy=strategy)
    except NotAcceptable:
        return False
    back = close_tree_labeled(res.tree, res.special_tree_edges).map
    return canonical_code(back, with_special=True) == canonical_code(m, with_special=True)


def verify_prop_c3(m: PlanarMap, special: Iterable[int] | None = None,
                   strategy: str = "layered") -> bool:
    """Unmarking any subset of the regular special edges leaves the cut tree unchanged."""
    special = _edges(m, special)
    res = cut_map(m, special, strategy=strategy)
    types = edge_charges(res.tree)
    regular_special = [res.tree_edge_to_map_edge[e] for e in sorted(res.special_tree_edges)
                       if types[e].regular]
    for k in range(1, len(regular_special) + 1):
        for drop in combinations(regular_special, k):
            try:
                other = cut_map(m, special - set(drop), strategy=strategy)
            except NotAcceptable:
                return False
            if other.tree != res.tree:
                return False
    return True


def acceptable(m: PlanarMap, special: Iterable[int]) -> bool:
    try:
        cut_map(m, special)
    except NotAcceptable:
        return False
    return True

