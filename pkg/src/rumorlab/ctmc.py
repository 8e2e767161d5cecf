"""Event-driven simulation of the Maki-Thompson dynamics on lazy trees.

Each spreader of degree g contacts a uniformly chosen neighbor after an
Exponential(g) waiting time.  Contacting an ignorant flips it to spreader
with probability p (stifler otherwise); contacting a non-ignorant flips the
contacting spreader to stifler.  On a tree this per-spreader contact scheme
is distributionally identical to the global transition rates (ignorants flip
at rate p*n1 / (1-p)*n1, spreaders stifle at rate n1+n2).

The engine materializes only informed vertices.  When a vertex becomes a
spreader its whole contact race is generated at once and only the resulting
child-infection events enter the priority queue; this preserves the exact
joint law of the process while keeping the queue small.  Child subtrees on a
tree are exchangeable, so child roles are drawn i.i.d. at first contact.
"""

from __future__ import annotations

import heapq
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from ._seeds import substream, substream_random
from .gw import EstimateCI, wilson_interval
from .laws import Pmf, pmf_from_counts
from .treegen import TreeTopology

IGNORANT, SPREADER, STIFLER = 0, 1, 2

#: role codes carried inside event tuples
_HUB, _PATH, _LEAF = 0, 1, 2

DEFAULT_EVENT_CAP = 10 ** 8

#: default level targets for survival runs
DEFAULT_LEVEL_CAYLEY = 30
DEFAULT_LEVEL_HUB = 20

_CHUNK = 1 << 16


@dataclass(frozen=True)
class SimOutcome:
    """Summary of one dynamics run."""

    reached_level: int
    active_spreaders_at_stop: int
    events_processed: int
    informed_total: int
    stop_reason: str  # 'absorbed' | 'level_reached' | 'event_cap'
    level_unit: str  # 'graph' | 'hub'


@dataclass(frozen=True)
class SurvivalEstimate(EstimateCI):
    """Level-reach estimate; cap-hit replicas are counted as reaching."""

    cap_hits: int = 0
    target_level: int = 0
    level_unit: str = "graph"


def _resolve_level_unit(topology: TreeTopology, level_unit: str | None) -> str:
    if level_unit is None:
        return "hub" if topology.kind == "hub_path" else "graph"
    if level_unit not in ("graph", "hub"):
        raise ValueError(f"level_unit must be 'graph' or 'hub', got {level_unit!r}")
    return level_unit


def simulate_mt(
    topology: TreeTopology,
    p: float,
    target_level: int,
    event_cap: int = DEFAULT_EVENT_CAP,
    seed: int = 0,
    level_unit: str | None = None,
) -> SimOutcome:
    """Run the dynamics from a single root spreader until absorption, the
    first spreader at ``target_level``, or ``event_cap`` contacts.

    ``level_unit`` 'graph' counts edges from the root; 'hub' counts hub
    generations (the branching process of the hub analysis lives on hubs)
    and is the default for hub_path topologies.
    """
    if not 0 < p <= 1:
        raise ValueError(f"p must lie in (0, 1], got {p}")
    if target_level < 1:
        raise ValueError(f"target_level must be at least 1, got {target_level}")
    unit = _resolve_level_unit(topology, level_unit)
    rng = substream_random(seed, "mt")
    rand = rng.random
    log = math.log

    d = topology.d
    is_hub_path = topology.kind == "hub_path"
    k = topology.k if is_hub_path else 0
    alpha = topology.alpha if is_hub_path else 1.0
    h = topology.h if is_hub_path else 1

    # inform events: (time, seq, depth, hub_gen, role, path_pos)
    heap = [(0.0, 0, 0, 0, _HUB, 0)]
    seq = 1
    events = 0
    informed = 1
    max_level = 0
    stifle_times: list[float] = []

    def active_at(t: float, include_current: bool) -> int:
        return int(include_current) + sum(1 for st in stifle_times if st > t)

    while heap:
        t, _, depth, hgen, role, pos = heapq.heappop(heap)
        level = hgen if unit == "hub" else depth
        countable = role == _HUB or unit == "graph"
        if countable and level > max_level:
            max_level = level
        if countable and level >= target_level:
            return SimOutcome(
                reached_level=max_level,
                active_spreaders_at_stop=active_at(t, True),
                events_processed=events,
                informed_total=informed,
                stop_reason="level_reached",
                level_unit=unit,
            )

        if role == _HUB:
            deg = d + 1
            free = d + 1 if depth == 0 else d
        elif role == _PATH:
            deg = k
            free = k - 1
        else:
            deg = 1
            free = 0
        onward_fresh = role == _PATH  # the path slot toward the next hub

        tt = t
        while True:
            events += 1
            if events >= event_cap:
                return SimOutcome(
                    reached_level=max_level,
                    active_spreaders_at_stop=active_at(tt, True),
                    events_processed=events,
                    informed_total=informed,
                    stop_reason="event_cap",
                    level_unit=unit,
                )
            tt -= log(1.0 - rand()) / deg
            u = rand() * deg
            if u >= free:
                # contacted the informer or an already-informed neighbor
                stifle_times.append(tt)
                break
            informed += 1
            if role == _HUB:
                if is_hub_path:
                    if rand() < alpha:
                        if h == 1:
                            c_role, c_pos, c_hgen = _HUB, 0, hgen + 1
                        else:
                            c_role, c_pos, c_hgen = _PATH, 1, hgen
                    else:
                        c_role, c_pos, c_hgen = _LEAF, 0, hgen
                else:
                    c_role, c_pos, c_hgen = _HUB, 0, hgen + 1
            elif role == _PATH:
                if onward_fresh and u < 1.0:
                    onward_fresh = False
                    if pos == h - 1:
                        c_role, c_pos, c_hgen = _HUB, 0, hgen + 1
                    else:
                        c_role, c_pos, c_hgen = _PATH, pos + 1, hgen
                else:
                    c_role, c_pos, c_hgen = _LEAF, 0, hgen
            else:  # pragma: no cover - leaves have free == 0
                raise AssertionError("leaf spreaders have no ignorant neighbors")
            free -= 1
            if rand() < p:
                heapq.heappush(heap, (tt, seq, depth + 1, c_hgen, c_role, c_pos))
                seq += 1

    return SimOutcome(
        reached_level=max_level,
        active_spreaders_at_stop=0,
        events_processed=events,
        informed_total=informed,
        stop_reason="absorbed",
        level_unit=unit,
    )


def offspring_empirical(d: int, p: float, replicas: int, seed: int = 0) -> Pmf:
    """Empirical law of the spreaders generated by one non-root spreader.

    Harness: a single spreader with one non-ignorant neighbor (its informer)
    and d ignorant neighbors, run until it stifles.  Only contact order
    matters for the count, so no clocks are drawn.
    """
    if d < 2:
        raise ValueError(f"d must be at least 2, got {d}")
    if not 0 < p <= 1:
        raise ValueError(f"p must lie in (0, 1], got {p}")
    if replicas < 1:
        raise ValueError("replicas must be at least 1")
    counts = [0] * (d + 1)
    deg = d + 1
    for chunk_start in range(0, replicas, _CHUNK):
        rng = substream_random(seed, "offspring", chunk_start)
        rand = rng.random
        for _ in range(chunk_start, min(chunk_start + _CHUNK, replicas)):
            free = d
            made = 0
            while rand() * deg < free:
                free -= 1
                if rand() < p:
                    made += 1
            counts[made] += 1
    return pmf_from_counts(counts)


def path_traversal_empirical(k: int, replicas: int, seed: int = 0) -> EstimateCI:
    """Probability that a degree-k spreader contacts one designated ignorant
    neighbor before stifling (1 informer, k-1 ignorants, p = 1).

    This is the empirical decision procedure for the two closed forms of the
    traversal probability evaluated at k-1.
    """
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    if replicas < 1:
        raise ValueError("replicas must be at least 1")
    hits = 0
    for chunk_start in range(0, replicas, _CHUNK):
        rng = substream_random(seed, "traversal", chunk_start)
        rand = rng.random
        for _ in range(chunk_start, min(chunk_start + _CHUNK, replicas)):
            free = k - 1
            while True:
                u = rand() * k
                if u >= free:
                    break  # stifled before touching the designated neighbor
                if u < 1.0:
                    hits += 1  # the designated neighbor occupies slot [0, 1)
                    break
                free -= 1
    low, high = wilson_interval(hits, replicas)
    return EstimateCI(hits / replicas, low, high, replicas, seed)


def _survival_chunk(args) -> tuple[int, int]:
    (topology, p, target_level, event_cap, seed, lo, hi, unit) = args
    reached = 0
    cap_hits = 0
    for r in range(lo, hi):
        out = simulate_mt(
            topology,
            p,
            target_level,
            event_cap=event_cap,
            seed=substream(seed, "survival", r),
            level_unit=unit,
        )
        if out.stop_reason == "event_cap":
            cap_hits += 1
            reached += 1  # conservative: cap hits counted as reaching
        elif out.stop_reason == "level_reached":
            reached += 1
    return reached, cap_hits


def estimate_survival_ctmc(
    topology: TreeTopology,
    p: float,
    target_level: int | None = None,
    replicas: int = 10_000,
    event_cap: int = DEFAULT_EVENT_CAP,
    seed: int = 0,
    workers: int = 1,
    level_unit: str | None = None,
) -> SurvivalEstimate:
    """Wilson 95% CI on P(the rumor reaches ``target_level``).

    The reach event upper-bounds survival and decreases to it as the level
    grows.  Replica r runs from the substream (seed, 'survival', r), so the
    estimate is independent of worker scheduling.
    """
    if replicas < 1:
        raise ValueError("replicas must be at least 1")
    unit = _resolve_level_unit(topology, level_unit)
    if target_level is None:
        target_level = DEFAULT_LEVEL_HUB if unit == "hub" else DEFAULT_LEVEL_CAYLEY
    if topology.kind == "hub_path" and topology.alpha * (topology.d + 1) <= 1:
        raise ValueError(
            "hub_path survival experiments require alpha > 1/(d+1); "
            f"got alpha={topology.alpha}, d={topology.d}"
        )
    if workers <= 1:
        reached, cap_hits = _survival_chunk(
            (topology, p, target_level, event_cap, seed, 0, replicas, unit)
        )
    else:
        bounds = [replicas * i // workers for i in range(workers + 1)]
        jobs = [
            (topology, p, target_level, event_cap, seed, lo, hi, unit)
            for lo, hi in zip(bounds[:-1], bounds[1:])
            if hi > lo
        ]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_survival_chunk, jobs))
        reached = sum(r for r, _ in parts)
        cap_hits = sum(c for _, c in parts)
    low, high = wilson_interval(reached, replicas)
    return SurvivalEstimate(
        estimate=reached / replicas,
        ci_low=low,
        ci_high=high,
        replicas=replicas,
        seed=seed,
        cap_hits=cap_hits,
        target_level=target_level,
        level_unit=unit,
    )
