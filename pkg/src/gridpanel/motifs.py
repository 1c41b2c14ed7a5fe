"""Counts of small recurring subgraphs: triangles, 4-cycles and stars.

All counters work from sorted-neighbor intersections, so cost scales
with wedges rather than with dense node-triple or node-quadruple
enumeration. Cycle counting defaults to chordless 4-cycles, meaning the
four nodes induce exactly the cycle and nothing more; with
``chordless_only=False`` every distinct 4-cycle subgraph is counted,
chords or not. Star counting has two variants: ``subgraph`` takes any
choice of center plus k neighbors, ``induced`` additionally requires the
leaves to be pairwise unlinked.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import ParameterError
from .graph import AnnualSnapshot, Graph, as_graph

MOTIF_NAMES = ("triangle", "four_cycle", "three_star", "four_star")
STAR_VARIANTS = ("subgraph", "induced")


@dataclass(frozen=True)
class MotifCounts:
    """Raw motif counts for one snapshot year."""

    year: int
    triangles: int
    four_cycles: int
    three_stars: int
    four_stars: int
    variant: str
    chordless_only: bool

    @property
    def total(self) -> int:
        return self.triangles + self.four_cycles + self.three_stars + self.four_stars

    def as_dict(self) -> dict[str, int]:
        return {
            "triangle": self.triangles,
            "four_cycle": self.four_cycles,
            "three_star": self.three_stars,
            "four_star": self.four_stars,
        }


@dataclass(frozen=True)
class MotifShares:
    """Counts normalized by the total over the four tracked motifs.

    ``total`` is kept so that an all-zero year (flagged by total 0) can
    be told apart from a year where one motif genuinely dominates.
    """

    year: int
    triangle: float
    four_cycle: float
    three_star: float
    four_star: float
    total: int

    def as_dict(self) -> dict[str, float]:
        return {
            "triangle": self.triangle,
            "four_cycle": self.four_cycle,
            "three_star": self.three_star,
            "four_star": self.four_star,
        }


def count_triangles(g: Graph | AnnualSnapshot) -> int:
    """Number of triangles, via common neighbors of each edge."""
    graph = as_graph(g)
    sets = graph.neighbor_sets()
    acc = 0
    for u, v in graph.edges():
        acc += len(sets[u] & sets[v])
    # each triangle is seen once per edge
    return acc // 3


def count_four_cycles(g: Graph | AnnualSnapshot, *, chordless_only: bool = True) -> int:
    """Number of 4-cycles, via wedge counts between diagonal pairs.

    A pair of nodes with w common neighbors closes ``w choose 2``
    cycles; summing over pairs counts every cycle twice, once per
    diagonal. The chordless variant restricts to diagonals that are
    themselves unlinked and to common-neighbor pairs that are unlinked,
    which is exactly the induced-cycle condition.
    """
    graph = as_graph(g)
    sets = graph.neighbor_sets()
    wedges: Counter[tuple] = Counter()
    for center in graph.nodes:
        nbrs = graph.neighbors(center)
        for i in range(len(nbrs)):
            for j in range(i + 1, len(nbrs)):
                wedges[(nbrs[i], nbrs[j])] += 1

    if not chordless_only:
        doubled = sum(comb(w, 2) for w in wedges.values())
        return doubled // 2

    doubled = 0
    for (u, v), w in wedges.items():
        if w < 2 or v in sets[u]:
            continue
        common = sets[u] & sets[v]
        linked_pairs = sum(len(sets[x] & common) for x in common) // 2
        doubled += comb(w, 2) - linked_pairs
    return doubled // 2


def count_stars(g: Graph | AnnualSnapshot, leaves: int, *, variant: str = "subgraph") -> int:
    """Number of stars with ``leaves`` leaves around any center.

    The subgraph variant counts every way to pick the leaves among a
    center's neighbors. The induced variant keeps only leaf sets with no
    internal links.
    """
    if leaves < 1:
        raise ParameterError(f"a star needs at least one leaf, got {leaves}")
    if variant not in STAR_VARIANTS:
        raise ParameterError(f"variant must be one of {', '.join(STAR_VARIANTS)}, got {variant!r}")
    graph = as_graph(g)
    if variant == "subgraph":
        return sum(comb(graph.degree(v), leaves) for v in graph.nodes)

    sets = graph.neighbor_sets()
    acc = 0
    for center in graph.nodes:
        nbrs = graph.neighbors(center)
        if len(nbrs) < leaves:
            continue
        acc += _independent_subsets(nbrs, sets, leaves)
    return acc


def _independent_subsets(candidates: tuple, sets: dict, size: int) -> int:
    # Depth-first choice of pairwise-unlinked members from a sorted pool.
    def extend(start: int, chosen: list) -> int:
        if len(chosen) == size:
            return 1
        found = 0
        for idx in range(start, len(candidates)):
            cand = candidates[idx]
            if all(cand not in sets[prev] for prev in chosen):
                chosen.append(cand)
                found += extend(idx + 1, chosen)
                chosen.pop()
        return found

    return extend(0, [])


def motif_counts(
    g: Graph | AnnualSnapshot,
    *,
    chordless_only: bool = True,
    variant: str = "subgraph",
) -> MotifCounts:
    """All four motif counts for one graph or snapshot."""
    year = g.year if isinstance(g, AnnualSnapshot) else 0
    return MotifCounts(
        year=year,
        triangles=count_triangles(g),
        four_cycles=count_four_cycles(g, chordless_only=chordless_only),
        three_stars=count_stars(g, 3, variant=variant),
        four_stars=count_stars(g, 4, variant=variant),
        variant=variant,
        chordless_only=chordless_only,
    )


def motif_shares(counts: MotifCounts) -> MotifShares:
    """Normalize one year's counts; an all-zero year keeps zero shares."""
    total = counts.total
    if total == 0:
        return MotifShares(counts.year, 0.0, 0.0, 0.0, 0.0, 0)
    raw = counts.as_dict()
    shares = {name: float(Fraction(raw[name], total)) for name in MOTIF_NAMES}
    return MotifShares(counts.year, shares["triangle"], shares["four_cycle"], shares["three_star"], shares["four_star"], total)


def motif_share_series(
    snapshots: list[AnnualSnapshot],
    *,
    chordless_only: bool = True,
    variant: str = "subgraph",
) -> list[MotifShares]:
    """Per-year motif shares across a panel of snapshots."""
    return [
        motif_shares(motif_counts(snap, chordless_only=chordless_only, variant=variant))
        for snap in snapshots
    ]
