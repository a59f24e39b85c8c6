"""Exhaustive censuses of rooted bicubic maps with hard particles.

Three counts of the same numbers: signed admissible trees, good trees, and
distinct maps obtained by closing.  Also the per-map verification of the
signed sum over markings of NHP edges.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator

from .cutting import NotAcceptable, cut_map, roundtrip_map, roundtrip_tree, verify_prop_c1, \
    verify_prop_c3
from .maps import PlanarMap, RootedMapCode, canonical_code, close_tree, nhp_edges
from .series import ZPoly
from .trees import BlossomTree, admissible_occupations, blossom_shapes, check_admissible, \
    edge_charges

MODES = ("signed-admissible", "good", "maps")
DEFAULT_MAX_VERTICES = 10
DEFAULT_MAX_MARKED = 12
SCHEMA = "hardmap-census/1"


class CensusLimitError(ValueError):
    """Requested size is above the configured cap."""


@dataclass(frozen=True)
class CensusRecord:
    vertices: int
    mode: str
    per_particle: ZPoly

    @property
    def coefficients(self) -> list[int]:
        return self.per_particle.int_coeffs()

    def to_json(self) -> dict:
        return {"schema": SCHEMA, "vertices": self.vertices, "mode": self.mode,
                "coefficients": self.coefficients}


def _check_size(two_n: int, max_vertices: int | None) -> int:
    if two_n < 2 or two_n % 2:
        raise ValueError(f"number of vertices must be even and >= 2, got {two_n}")
    cap = DEFAULT_MAX_VERTICES if max_vertices is None else max_vertices
    if two_n > cap:
        raise CensusLimitError(f"{two_n} vertices exceeds the cap of {cap}")
    return two_n - 1


def rooted_admissible(n_inner: int, shard: int = 0, n_shards: int = 1) -> Iterator[BlossomTree]:
    """Rooted admissible trees of the given shard of shapes (rootedness depends on shape only)."""
    for shape in blossom_shapes(n_inner)[shard::n_shards]:
        if not shape.is_rooted():
            continue
        for occ in admissible_occupations(shape):
            yield shape.with_occupation(occ)


def _work(args: tuple[str, int, int, int]) -> dict:
    mode, n_inner, shard, n_shards = args
    out: dict = {}
    for t in rooted_admissible(n_inner, shard, n_shards):
        if mode == "signed-admissible":
            key = t.n_particles
            out[key] = out.get(key, 0) + (-1) ** len(t.nhp_edges())
        elif mode == "good":
            if not t.nhp_edges() and not nhp_edges(close_tree(t)):
                out[t.n_particles] = out.get(t.n_particles, 0) + 1
        else:
            m = close_tree(t)
            if not nhp_edges(m):
                out[canonical_code(m)] = m.n_particles
    return out


def _run(mode: str, n_inner: int, threads: int) -> list[dict]:
    jobs = [(mode, n_inner, k, max(threads, 1)) for k in range(max(threads, 1))]
    if threads <= 1:
        return [_work(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(_work, jobs))


def census(two_n: int, mode: str, threads: int = 1,
           max_vertices: int | None = None) -> CensusRecord:
    if mode not in MODES:
        raise ValueError(f"unknown census mode {mode!r}")
    n_inner = _check_size(two_n, max_vertices)
    parts = _run(mode, n_inner, threads)
    counts: Counter[int] = Counter()
    if mode == "maps":
        merged: dict[RootedMapCode, int] = {}
        for part in parts:
            merged.update(part)
        counts.update(merged.values())
    else:
        for part in parts:
            for k, v in part.items():
                counts[k] += v
    top = max(counts, default=0)
    return CensusRecord(two_n, mode, ZPoly.from_coeffs([counts.get(j, 0) for j in range(top + 1)]))


def signed_admissible_census(two_n: int, threads: int = 1,
                             max_vertices: int | None = None) -> CensusRecord:
    """Sum of ``(-1)^{#NHP} z^{#particles}`` over rooted admissible trees."""
    return census(two_n, "signed-admissible", threads, max_vertices)


def good_tree_census(two_n: int, threads: int = 1,
                     max_vertices: int | None = None) -> CensusRecord:
    """Rooted trees with no NHP edge, all edges regular, whose closing has no NHP edge."""
    return census(two_n, "good", threads, max_vertices)


def map_census(two_n: int, threads: int = 1, max_vertices: int | None = None) -> CensusRecord:
    """Distinct rooted maps (by canonical code) with no NHP edge among closings."""
    return census(two_n, "maps", threads, max_vertices)


# -- equivalence classes --------------------------------------------------------

@dataclass(frozen=True)
class MarkingOutcome:
    marking: tuple[int, ...]
    tree: str
    n_nonregular: int
    r_nhp_regular: int


@dataclass
class ClassVerification:
    map_code: RootedMapCode
    m: int
    outcomes: list[MarkingOutcome] = field(default_factory=list)
    signed_sum: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def distinct_trees(self) -> dict[str, tuple[int, int, int]]:
        """tree -> (number of markings reaching it, n, r)."""
        out: dict[str, tuple[int, int, int]] = {}
        for o in self.outcomes:
            k = out.get(o.tree, (0, o.n_nonregular, o.r_nhp_regular))[0]
            out[o.tree] = (k + 1, o.n_nonregular, o.r_nhp_regular)
        return out


def verify_class(m: PlanarMap, max_marked: int = DEFAULT_MAX_MARKED,
                 expected_trees: set[str] | None = None) -> ClassVerification:
    """Cut ``m`` under every marking of its NHP edges and check the sum rule.

    ``expected_trees`` (serialized rooted admissible trees whose closing is
    ``m``) adds a cross-check against an independent census.
    """
    nhp = nhp_edges(m)
    result = ClassVerification(canonical_code(m), len(nhp))
    if len(nhp) > max_marked:
        result.failures.append(f"m = {len(nhp)} exceeds the marking cap {max_marked}")
        return result
    for k in range(len(nhp) + 1):
        for marking in combinations(nhp, k):
            try:
                res = cut_map(m, marking)
            except NotAcceptable as exc:
                result.failures.append(f"marking {marking} not acceptable: {exc}")
                continue
            tree = res.tree
            types = edge_charges(tree)
            nhp_tree = tree.nhp_edges()
            r = sum(1 for e in nhp_tree if types[e].regular)
            n = sum(1 for t in types.values() if not t.regular)
            result.outcomes.append(MarkingOutcome(marking, tree.serialized, n, r))
            if (r == 0) != check_admissible(tree).admissible:
                result.failures.append(f"tree {tree} has r = {r} but admissibility disagrees")
            if r == 0 and n != len(marking):
                result.failures.append(f"admissible tree {tree} has n = {n} from {len(marking)} marks")
    if result.failures:
        return result
    for tree, (count, n, r) in sorted(result.distinct_trees.items()):
        if count != 2 ** r:
            result.failures.append(f"tree {tree} reached by {count} markings, expected 2^{r}")
        if r == 0:
            result.signed_sum += (-1) ** n
    want = 1 if not nhp else 0
    if result.signed_sum != want:
        result.failures.append(f"signed sum {result.signed_sum} != {want}")
    if expected_trees is not None:
        got = {t for t, (_, _, r) in result.distinct_trees.items() if r == 0}
        if got != expected_trees:
            result.failures.append("admissible trees of the class differ from the census")
    return result


def admissible_classes(n_inner: int) -> dict[RootedMapCode, tuple[PlanarMap, set[str]]]:
    """Admissible maps with ``n_inner + 1`` vertices and the rooted admissible trees closing to each."""
    out: dict[RootedMapCode, tuple[PlanarMap, set[str]]] = {}
    for t in rooted_admissible(n_inner):
        m = close_tree(t)
        code = canonical_code(m)
        if code not in out:
            out[code] = (m, set())
        out[code][1].add(t.serialized)
    return out


# -- exhaustive sweeps -----------------------------------------------------------

@dataclass
class SweepReport:
    checked: Counter = field(default_factory=Counter)
    failed: Counter = field(default_factory=Counter)
    examples: dict[str, str] = field(default_factory=dict)

    def record(self, check: str, ok: bool, detail: str = "") -> None:
        self.checked[check] += 1
        if not ok:
            self.failed[check] += 1
            self.examples.setdefault(check, detail)

    @property
    def ok(self) -> bool:
        return not sum(self.failed.values())

    def lines(self) -> list[str]:
        return [f"{'PASS' if not self.failed[c] else 'FAIL'} {c}: "
                f"{self.checked[c] - self.failed[c]}/{self.checked[c]}"
                for c in sorted(self.checked)]


def sweep_tree_roundtrips(max_inner: int, report: SweepReport | None = None) -> SweepReport:
    report = report or SweepReport()
    for n in range(1, max_inner + 1, 2):
        for t in rooted_admissible(n):
            report.record("roundtrip_tree", roundtrip_tree(t), t.serialized)
    return report


def sweep_map_markings_at(n_inner: int, report: SweepReport | None = None,
                          with_classes: bool = True) -> SweepReport:
    """Every admissible map with ``n_inner + 1`` vertices under every marking of its NHP edges.

    ``with_classes`` also runs :func:`verify_class` on each map.
    """
    report = report or SweepReport()
    for code, (m, trees) in sorted(admissible_classes(n_inner).items()):
        nhp = nhp_edges(m)
        for k in range(len(nhp) + 1):
            for marking in combinations(nhp, k):
                tag = f"{sorted(trees)[0]} marking {marking}"
                try:
                    res = cut_map(m, marking)
                except NotAcceptable:
                    report.record("acceptable", False, tag)
                    continue
                report.record("acceptable", True)
                report.record("prop_c1", verify_prop_c1(res), tag)
                report.record("roundtrip_map", roundtrip_map(m, marking), tag)
                report.record("prop_c3", verify_prop_c3(m, marking), tag)
        if with_classes:
            cls = verify_class(m, expected_trees=trees)
            report.record("sum_rule", cls.ok, "; ".join(cls.failures))
    return report


def sweep_map_markings(max_vertices: int, report: SweepReport | None = None) -> SweepReport:
    report = report or SweepReport()
    for n in range(1, max_vertices, 2):
        sweep_map_markings_at(n, report)
    return report
