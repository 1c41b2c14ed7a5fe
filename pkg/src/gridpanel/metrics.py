"""Whole-graph structure metrics and small-world diagnostics.

Conventions used throughout:

* Path statistics are taken over ordered reachable pairs only, and the
  fraction of reachable pairs is reported alongside so that values from
  fragmented years are never mistaken for connected ones.
* Efficiency treats unreachable pairs as contributing zero.
* Ratios of small integers are accumulated as exact rationals and
  converted to float once at the end. Results are therefore independent
  of node labelling and of summation order.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Mapping, NamedTuple

from .errors import MetricUndefinedError, ParameterError
from .graph import AnnualSnapshot, Graph, as_graph, ring_lattice

# Truncated Euler-Mascheroni constant; the reference-path formula is
# conventionally quoted at four decimals, so keep it that way.
RANDOM_PATH_CONSTANT = 0.5772

# |omega| below this counts as small-world-compatible.
OMEGA_BAND = 0.7

METRIC_NAMES = (
    "n_nodes",
    "n_edges",
    "density",
    "avg_degree",
    "avg_path_length",
    "diameter",
    "clustering",
    "modularity",
    "efficiency",
    "clustering_random",
    "path_length_random",
    "clustering_lattice",
    "sigma",
    "omega",
    "omega_raw",
    "reachable_pair_fraction",
)


class PathSummary(NamedTuple):
    """Shortest-path statistics from one full breadth-first sweep."""

    avg_path_length: float | None
    diameter: int | None
    efficiency: float
    reachable_pair_fraction: float


class RandomBaselines(NamedTuple):
    """Expected clustering and path length of a random graph with the
    same node count and average degree."""

    clustering_random: float
    path_length_random: float


class Omega(NamedTuple):
    """Lattice-and-random small-world coefficient, clamped and raw."""

    value: float
    raw: float


@dataclass(frozen=True)
class CommunityPartition:
    """A node-to-community assignment with its achieved modularity.

    The detection is greedy, so ``modularity`` is a lower bound on the
    graph's optimum, not the optimum itself.
    """

    assignment: Mapping[Hashable, int]
    gamma: float
    seed: int
    modularity: float

    @property
    def n_communities(self) -> int:
        return len(set(self.assignment.values()))

    def communities(self) -> tuple[frozenset, ...]:
        """Member sets, ordered by community label."""
        groups: dict[int, set] = {}
        for node, label in self.assignment.items():
            groups.setdefault(label, set()).add(node)
        return tuple(frozenset(groups[label]) for label in sorted(groups))


@dataclass(frozen=True)
class MetricRow:
    """All per-year metrics, with reason codes for the undefined ones.

    ``reasons`` maps a metric name to a short code explaining why its
    value is None; metrics with values never appear in it.
    """

    year: int
    n_nodes: int
    n_edges: int
    density: float | None
    avg_degree: float | None
    avg_path_length: float | None
    diameter: int | None
    clustering: float | None
    modularity: float | None
    efficiency: float | None
    clustering_random: float | None
    path_length_random: float | None
    clustering_lattice: float | None
    sigma: float | None
    omega: float | None
    omega_raw: float | None
    reachable_pair_fraction: float | None
    reasons: Mapping[str, str]

    def as_dict(self) -> dict[str, float | int | None]:
        return {name: getattr(self, name) for name in METRIC_NAMES}


def link_density(g: Graph | AnnualSnapshot) -> float:
    """Fraction of possible links present: ``2E / (N (N - 1))``."""
    graph = as_graph(g)
    n = graph.n_nodes
    if n < 2:
        raise MetricUndefinedError("link density needs at least two nodes")
    return 2 * graph.n_edges / (n * (n - 1))


def average_degree(g: Graph | AnnualSnapshot) -> float:
    """Mean node degree: ``2E / N``."""
    graph = as_graph(g)
    if graph.n_nodes == 0:
        raise MetricUndefinedError("average degree needs at least one node")
    return 2 * graph.n_edges / graph.n_nodes


def apsp_summary(g: Graph | AnnualSnapshot) -> PathSummary:
    """Average shortest path, diameter, efficiency and pair coverage.

    One breadth-first sweep per source node feeds a histogram of finite
    distances; every statistic is read off that histogram, so partial
    results could be merged in any order without changing the outcome.

    Averages run over ordered reachable pairs. With no reachable pair at
    all the path length and diameter are None while efficiency is 0.
    """
    graph = as_graph(g)
    n = graph.n_nodes
    if n < 2:
        raise MetricUndefinedError("path summary needs at least two nodes")
    hist: Counter[int] = Counter()
    for src in graph.nodes:
        dist = {src: 0}
        frontier = [src]
        d = 0
        while frontier:
            d += 1
            nxt = []
            for v in frontier:
                for w in graph.neighbors(v):
                    if w not in dist:
                        dist[w] = d
                        nxt.append(w)
            frontier = nxt
        for dv in dist.values():
            if dv:
                hist[dv] += 1

    total = n * (n - 1)
    reachable = sum(hist.values())
    if reachable == 0:
        return PathSummary(None, None, 0.0, 0.0)
    avg = float(Fraction(sum(d * c for d, c in hist.items()), reachable))
    eff = float(sum(Fraction(c, d) for d, c in hist.items()) / total)
    return PathSummary(avg, max(hist), eff, float(Fraction(reachable, total)))


def clustering_coefficient(g: Graph | AnnualSnapshot, *, skip_low_degree: bool = False) -> float:
    """Mean local clustering.

    A node's local coefficient is the fraction of its neighbor pairs
    that are themselves linked. Nodes with degree below two contribute
    zero by default; ``skip_low_degree=True`` drops them from the mean
    instead (0.0 if nothing is left).
    """
    graph = as_graph(g)
    n = graph.n_nodes
    if n == 0:
        raise MetricUndefinedError("clustering needs at least one node")
    sets = graph.neighbor_sets()
    total = Fraction(0)
    eligible = 0
    for v in graph.nodes:
        kv = graph.degree(v)
        if kv < 2:
            continue
        eligible += 1
        sv = sets[v]
        linked_twice = sum(len(sets[u] & sv) for u in sv)
        total += Fraction(linked_twice, kv * (kv - 1))
    if skip_low_degree:
        return float(total / eligible) if eligible else 0.0
    return float(total / n)


def modularity_of(
    g: Graph | AnnualSnapshot,
    assignment: Mapping[Hashable, int],
    gamma: float = 1.0,
) -> float:
    """Modularity of a given partition at resolution ``gamma``.

    Evaluated per community as (internal edge share) minus gamma times
    (degree share squared), which sums exactly the usual pairwise form
    including diagonal terms. Exact rational arithmetic keeps the result
    independent of community iteration order; the all-in-one partition
    yields exactly 0.0 at gamma 1.
    """
    graph = as_graph(g)
    if graph.n_edges == 0:
        raise MetricUndefinedError("modularity needs at least one edge")
    missing = [v for v in graph.nodes if v not in assignment]
    if missing:
        raise ParameterError(f"assignment misses {len(missing)} nodes, e.g. {missing[0]!r}")
    two_e = 2 * graph.n_edges
    intra: Counter = Counter()
    ktot: Counter = Counter()
    for u, v in graph.edges():
        if assignment[u] == assignment[v]:
            intra[assignment[u]] += 2
    for v in graph.nodes:
        ktot[assignment[v]] += graph.degree(v)
    gamma_exact = Fraction(gamma)
    q = Fraction(0)
    for label, k_sum in ktot.items():
        q += Fraction(intra.get(label, 0), two_e) - gamma_exact * Fraction(k_sum, two_e) ** 2
    return float(q)


def _local_moving(
    adj: dict[int, dict[int, float]],
    order: list[int],
    gamma: float,
) -> tuple[dict[int, int], bool]:
    # Weighted one-level pass: each node joins the candidate community with
    # the best strictly-improving gain; equal gains go to the lowest label.
    k = {u: sum(nbrs.values()) for u, nbrs in adj.items()}
    two_m = sum(k.values())
    comm = {u: u for u in adj}
    tot = dict(k)
    moved_any = False
    for _ in range(64):  # converges in a handful of passes; cap is defensive
        improved = False
        for u in order:
            a = comm[u]
            ku = k[u]
            tot[a] -= ku
            weights: dict[int, float] = {}
            for v, w in adj[u].items():
                if v != u:
                    c = comm[v]
                    weights[c] = weights.get(c, 0.0) + w
            weights.setdefault(a, 0.0)
            best_c = a
            best_gain = weights[a] - gamma * ku * tot[a] / two_m
            for c in sorted(weights):
                if c == a:
                    continue
                gain = weights[c] - gamma * ku * tot[c] / two_m
                if gain > best_gain or (gain == best_gain and c < best_c):
                    best_gain, best_c = gain, c
            comm[u] = best_c
            tot[best_c] += ku
            if best_c != a:
                improved = True
                moved_any = True
        if not improved:
            break
    return comm, moved_any


def modularity_detect(
    g: Graph | AnnualSnapshot,
    gamma: float = 1.0,
    seed: int = 42,
) -> CommunityPartition:
    """Greedy multi-level community detection.

    Repeats local moving and community aggregation until no merge
    happens. The node visiting order is shuffled once per level from the
    seed, and all remaining choices break ties toward the lowest label,
    so a given (graph, gamma, seed) always yields the same partition.
    """
    graph = as_graph(g)
    if graph.n_edges == 0:
        raise MetricUndefinedError("community detection needs at least one edge")
    n = graph.n_nodes
    adj: dict[int, dict[int, float]] = {i: {} for i in range(n)}
    for u, v in graph.edges():
        iu, iv = graph.index(u), graph.index(v)
        adj[iu][iv] = 1.0
        adj[iv][iu] = 1.0

    rng = random.Random(seed)
    membership = list(range(n))
    while True:
        order = sorted(adj)
        rng.shuffle(order)
        comm, _moved = _local_moving(adj, order, gamma)
        groups: dict[int, list[int]] = {}
        for node, label in comm.items():
            groups.setdefault(label, []).append(node)
        # Relabel communities 0..k-1 by their smallest member, which keeps
        # labels anchored to the lowest original node id through levels.
        ordered = sorted(groups.items(), key=lambda kv: min(kv[1]))
        to_new = {label: i for i, (label, _members) in enumerate(ordered)}
        membership = [to_new[comm[s]] for s in membership]
        if len(groups) == len(adj):
            break
        new_adj: dict[int, dict[int, float]] = {i: {} for i in range(len(ordered))}
        for u, nbrs in adj.items():
            cu = to_new[comm[u]]
            row = new_adj[cu]
            for v, w in nbrs.items():
                cv = to_new[comm[v]]
                row[cv] = row.get(cv, 0.0) + w
        adj = new_adj

    assignment = {graph.nodes[i]: membership[i] for i in range(n)}
    return CommunityPartition(
        assignment=assignment,
        gamma=gamma,
        seed=seed,
        modularity=modularity_of(graph, assignment, gamma),
    )


def random_baselines(n_nodes: int, avg_degree: float) -> RandomBaselines:
    """Closed-form random-graph references for clustering and path length.

    Clustering: ``k / N``. Path length: ``(ln N - 0.5772) / ln k + 0.5``.
    Defined for at least two nodes and average degree above one.
    """
    if n_nodes < 2:
        raise MetricUndefinedError("random-graph baselines need at least two nodes")
    if avg_degree <= 1.0:
        raise MetricUndefinedError("random-graph baselines need average degree above one")
    c_r = avg_degree / n_nodes
    l_r = (math.log(n_nodes) - RANDOM_PATH_CONSTANT) / math.log(avg_degree) + 0.5
    return RandomBaselines(c_r, l_r)


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def lattice_clustering(n_nodes: int, avg_degree: float) -> float:
    """Clustering of a ring lattice matched to ``n_nodes`` and degree.

    The coordination number is the average degree rounded to the nearest
    even integer, floored at 2 and capped at what a ring of ``n_nodes``
    can host. The lattice is built explicitly and measured with
    :func:`clustering_coefficient` rather than approximated.
    """
    if n_nodes < 3:
        raise MetricUndefinedError("lattice reference needs at least three nodes")
    m = max(2, 2 * _round_half_up(avg_degree / 2))
    m_max = n_nodes - 1 if n_nodes % 2 else n_nodes - 2
    return clustering_coefficient(ring_lattice(n_nodes, min(m, m_max)))


def small_world_sigma(g: Graph | AnnualSnapshot) -> float:
    """Clustering-over-path-length ratio against random references:
    ``(C / C_rand) / (L / L_rand)``. Values above one indicate
    small-world structure."""
    graph = as_graph(g)
    paths = apsp_summary(graph)
    if paths.avg_path_length is None:
        raise MetricUndefinedError("sigma needs at least one reachable pair")
    base = random_baselines(graph.n_nodes, average_degree(graph))
    c = clustering_coefficient(graph)
    return (c / base.clustering_random) / (paths.avg_path_length / base.path_length_random)


def is_small_world(sigma: float) -> bool:
    return sigma > 1.0


def small_world_omega(g: Graph | AnnualSnapshot) -> Omega:
    """Position between lattice (-1) and random (+1) structure:
    ``L_rand / L - C / C_lattice``.

    The raw value is clamped to [-1, 1]; both are returned. When the
    matched lattice has zero clustering the ratio is taken as zero if the
    graph's clustering is also zero, and undefined otherwise.
    """
    graph = as_graph(g)
    paths = apsp_summary(graph)
    if paths.avg_path_length is None:
        raise MetricUndefinedError("omega needs at least one reachable pair")
    k = average_degree(graph)
    base = random_baselines(graph.n_nodes, k)
    c = clustering_coefficient(graph)
    c_lattice = lattice_clustering(graph.n_nodes, k)
    if c_lattice == 0.0:
        if c > 0.0:
            raise MetricUndefinedError("matched lattice clustering is zero, cannot normalize")
        ratio = 0.0
    else:
        ratio = c / c_lattice
    raw = base.path_length_random / paths.avg_path_length - ratio
    return Omega(min(1.0, max(-1.0, raw)), raw)


def omega_class(omega_value: float, band: float = OMEGA_BAND) -> str:
    """Classify an omega value: below -band lattice_like, above +band
    random_like, small_world in between."""
    if omega_value >= band:
        return "random_like"
    if omega_value <= -band:
        return "lattice_like"
    return "small_world"


def metric_row(snapshot: AnnualSnapshot, gamma: float = 1.0, seed: int = 42) -> MetricRow:
    """Evaluate every metric on one snapshot, recording why any is None."""
    graph = snapshot.graph
    n, e = graph.n_nodes, graph.n_edges
    reasons: dict[str, str] = {}
    values: dict[str, float | int | None] = {name: None for name in METRIC_NAMES}
    values["n_nodes"] = n
    values["n_edges"] = e

    def undefined(reason: str, *names: str) -> None:
        for name in names:
            reasons[name] = reason

    if n == 0:
        undefined("empty_graph", *[m for m in METRIC_NAMES if m not in ("n_nodes", "n_edges")])
        return MetricRow(year=snapshot.year, reasons=reasons, **values)

    values["avg_degree"] = k = average_degree(graph)
    values["clustering"] = c = clustering_coefficient(graph)

    if e == 0:
        undefined("no_edges", "modularity")
    else:
        values["modularity"] = modularity_detect(graph, gamma, seed).modularity

    paths = None
    if n < 2:
        undefined(
            "too_few_nodes",
            "density",
            "avg_path_length",
            "diameter",
            "efficiency",
            "reachable_pair_fraction",
        )
    else:
        values["density"] = link_density(graph)
        paths = apsp_summary(graph)
        values["efficiency"] = paths.efficiency
        values["reachable_pair_fraction"] = paths.reachable_pair_fraction
        if paths.avg_path_length is None:
            undefined("no_reachable_pairs", "avg_path_length", "diameter")
        else:
            values["avg_path_length"] = paths.avg_path_length
            values["diameter"] = paths.diameter

    if n < 3:
        undefined("too_few_nodes", "clustering_lattice")
    else:
        values["clustering_lattice"] = lattice_clustering(n, k)

    if n < 2:
        undefined("too_few_nodes", "clustering_random", "path_length_random", "sigma", "omega", "omega_raw")
        return MetricRow(year=snapshot.year, reasons=reasons, **values)
    if k <= 1.0:
        undefined("avg_degree_not_above_one", "clustering_random", "path_length_random", "sigma", "omega", "omega_raw")
        return MetricRow(year=snapshot.year, reasons=reasons, **values)

    base = random_baselines(n, k)
    values["clustering_random"] = base.clustering_random
    values["path_length_random"] = base.path_length_random

    if paths is None or paths.avg_path_length is None:
        undefined("no_reachable_pairs", "sigma", "omega", "omega_raw")
    else:
        values["sigma"] = (c / base.clustering_random) / (paths.avg_path_length / base.path_length_random)
        c_lattice = values["clustering_lattice"]
        if c_lattice is None:
            undefined("too_few_nodes", "omega", "omega_raw")
        elif c_lattice == 0.0 and c > 0.0:
            undefined("lattice_clustering_zero", "omega", "omega_raw")
        else:
            ratio = 0.0 if c_lattice == 0.0 else c / c_lattice
            raw = base.path_length_random / paths.avg_path_length - ratio
            values["omega_raw"] = raw
            values["omega"] = min(1.0, max(-1.0, raw))

    return MetricRow(year=snapshot.year, reasons=reasons, **values)


def metric_panel(
    snapshots: list[AnnualSnapshot],
    gamma: float = 1.0,
    seed: int = 42,
) -> list[MetricRow]:
    """Metric rows for a run of snapshots, one per year, in input order."""
    if not snapshots:
        raise ParameterError("metric panel needs at least one snapshot")
    return [metric_row(snap, gamma=gamma, seed=seed) for snap in snapshots]
