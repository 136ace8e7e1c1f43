"""Time-step engines for the link-removal model and the Albert-Barabasi model."""

from __future__ import annotations

from array import array
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from .distribution import DegreeDistribution
from .errors import InvalidParameter
from .graph import (
    EvolvingGraph,
    RngStream,
    add_node_with_links,
    degree_histogram,
    make_rng,
    new_complete,
    new_isolated,
    prune_isolated,
    remove_one_link,
    sample_preferential,
)

REWIRE_ATTEMPTS = 32


@dataclass(frozen=True)
class EvolveParams:
    n0: int
    m: int
    c: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.m < 1:
            raise InvalidParameter(f"m must be >= 1, got {self.m}")
        if self.n0 < 2:
            raise InvalidParameter(f"n0 must be >= 2, got {self.n0}")
        if self.m > self.n0:
            raise InvalidParameter(f"m={self.m} exceeds n0={self.n0}")
        if self.c < 0:
            raise InvalidParameter(f"c must be >= 0, got {self.c}")

    @property
    def feasible(self) -> bool:
        """Mean-field sufficient condition m > 2c."""
        return self.m > 2 * self.c


@dataclass(frozen=True)
class AbParams:
    n0: int
    m: int
    p: float
    q: float
    seed: int = 0

    def __post_init__(self):
        if self.m < 1:
            raise InvalidParameter(f"m must be >= 1, got {self.m}")
        if self.n0 < 1 or self.m > self.n0:
            raise InvalidParameter(f"need 1 <= m <= n0, got m={self.m}, n0={self.n0}")
        if self.p < 0 or self.q < 0:
            raise InvalidParameter("p and q must be nonnegative")
        if self.p + self.q >= 1:
            raise InvalidParameter(f"p + q must be < 1, got {self.p + self.q}")

    @property
    def r(self) -> float:
        return 1.0 - self.p - self.q


@dataclass(frozen=True)
class StepReport:
    t: int
    action: str
    links_removed: int = 0
    links_added: int = 0
    nodes_pruned: int = 0
    alive_count: int = 0


@dataclass
class RunResult:
    graph: EvolvingGraph
    reports: list[StepReport]
    alive: array = field(default_factory=lambda: array("q"))
    snapshots: dict[int, DegreeDistribution] = field(default_factory=dict)


def evolve_step(g: EvolvingGraph, params: EvolveParams, rng: RngStream, t: int) -> StepReport:
    removed = 0
    for _ in range(params.c):
        if remove_one_link(g, rng) is not None:
            removed += 1
    pruned = prune_isolated(g)
    add_node_with_links(g, params.m, rng)
    return StepReport(t, "grow", removed, params.m, pruned, g.n_alive)


def _ab_add_links(g: EvolvingGraph, m: int, rng: RngStream) -> int:
    added = 0
    for _ in range(m):
        a = g.uniform_node(rng)
        nbrs = g.adj[a]
        if len(nbrs) + 1 >= g.n_alive:
            continue
        b = sample_preferential(g, rng, nbrs | {a})
        g.add_edge(a, b)
        added += 1
    return added


def _ab_rewire(g: EvolvingGraph, m: int, rng: RngStream) -> int:
    done = 0
    for _ in range(m):
        for _ in range(REWIRE_ATTEMPTS):
            i = g.uniform_node(rng)
            if g.adj[i]:
                break
        else:
            continue
        nbrs = tuple(g.adj[i])
        j = nbrs[int(rng.random() * len(nbrs))]
        g.remove_edge(i, j)
        new_j = sample_preferential(g, rng, g.adj[i] | {i})
        g.add_edge(i, new_j)
        done += 1
    return done


def ab_step(g: EvolvingGraph, params: AbParams, rng: RngStream, t: int = 0) -> StepReport:
    u = rng.random()
    if u < params.p:
        added = _ab_add_links(g, params.m, rng)
        return StepReport(t, "add-links", links_added=added, alive_count=g.n_alive)
    if u < params.p + params.q:
        n = _ab_rewire(g, params.m, rng)
        return StepReport(t, "rewire", links_removed=n, links_added=n, alive_count=g.n_alive)
    add_node_with_links(g, params.m, rng)
    return StepReport(t, "add-node", links_added=params.m, alive_count=g.n_alive)


def _run(g, step, params, t_end, rng, snapshot_at, keep_reports) -> RunResult:
    if t_end < 0:
        raise InvalidParameter(f"t_end must be >= 0, got {t_end}")
    want = set(snapshot_at)
    res = RunResult(g, [])
    res.alive.append(g.n_alive)
    if 0 in want:
        res.snapshots[0] = degree_histogram(g, t=0)
    for t in range(1, t_end + 1):
        rep = step(g, params, rng, t)
        res.alive.append(rep.alive_count)
        if keep_reports:
            res.reports.append(rep)
        if t in want:
            res.snapshots[t] = degree_histogram(g, t=t)
    return res


def run_evolving(
    params: EvolveParams,
    t_end: int,
    rng: RngStream | None = None,
    snapshot_at=(),
    keep_reports: bool = True,
) -> RunResult:
    """Run the link-removal model from a complete graph on ``n0`` nodes.

    ``result.alive[t]`` is the alive-node count after step ``t`` (index 0 is
    the start graph).
    """
    rng = make_rng(params.seed) if rng is None else rng
    return _run(new_complete(params.n0), evolve_step, params, t_end, rng, snapshot_at, keep_reports)


def run_ab(
    params: AbParams,
    t_end: int,
    rng: RngStream | None = None,
    snapshot_at=(),
    keep_reports: bool = True,
) -> RunResult:
    rng = make_rng(params.seed) if rng is None else rng
    return _run(new_isolated(params.n0), ab_step, params, t_end, rng, snapshot_at, keep_reports)


@dataclass
class RunSummary:
    """Picklable digest of one run, used for ensembles."""

    seed: int
    final: DegreeDistribution
    snapshots: dict[int, DegreeDistribution]
    alive: array
    edges: list[tuple[int, int]] | None = None


def _summarize(params, t_end: int, snapshot_at, keep_edges: bool) -> RunSummary:
    runner = run_ab if isinstance(params, AbParams) else run_evolving
    res = runner(params, t_end, snapshot_at=snapshot_at, keep_reports=False)
    final = degree_histogram(res.graph, t=t_end, seed=params.seed)
    return RunSummary(params.seed, final, res.snapshots, res.alive, res.graph.edges() if keep_edges else None)


def run_ensemble(params, t_end: int, runs: int, snapshot_at=(), workers: int = 1, keep_edges_first: bool = False):
    """Run ``runs`` replicas with seeds ``params.seed + i``; results come back in seed order."""
    snaps = tuple(snapshot_at)
    jobs = [
        (replace(params, seed=params.seed + i), t_end, snaps, keep_edges_first and i == 0)
        for i in range(runs)
    ]
    if workers <= 1 or runs == 1:
        return [_summarize(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_summarize, *zip(*jobs)))
