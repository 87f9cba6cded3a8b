"""Brute-force reference for tiny volumes.

Computes, for every voxel, the smallest achievable bottleneck (maximum arc
weight) over all paths to each marker class. Shares no code with the
propagation engine: the default method grows components by union-find while
raising a weight threshold, and ``method="paths"`` enumerates simple paths
outright (only usable on a handful of voxels).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product

from .errors import OracleMismatchError, OracleTooLargeError

MAX_VOXELS = 64
MAX_VOXELS_PATHS = 12

IN, OUT, TIE = "IN", "OUT", "TIE"


@dataclass
class OracleResult:
    best_in_cost: list
    best_out_cost: list
    decided_label: list[str]


def _edges(vol) -> list[tuple[int, int, int]]:
    x, y, z = vol.dims
    vals = [int(v) for v in vol.values]
    out = []
    for iz, iy, ix in product(range(z), range(y), range(x)):
        p = ix + x * (iy + y * iz)
        for dx, dy, dz in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
            jx, jy, jz = ix + dx, iy + dy, iz + dz
            if jx < x and jy < y and jz < z:
                q = jx + x * (jy + y * jz)
                out.append((abs(vals[p] - vals[q]), p, q))
    return out


def _threshold_costs(n: int, edges, sources) -> list:
    best = [math.inf] * n
    if not sources:
        return best
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    edges = sorted(edges)
    levels = sorted({0} | {w for w, _, _ in edges})
    i = 0
    for t in levels:
        while i < len(edges) and edges[i][0] <= t:
            _, a, b = edges[i]
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
            i += 1
        seeded = {find(s) for s in sources}
        for p in range(n):
            if best[p] == math.inf and find(p) in seeded:
                best[p] = t
    return best


def _path_costs(n: int, edges, sources) -> list:
    adj: dict[int, list[tuple[int, int]]] = {p: [] for p in range(n)}
    for w, a, b in edges:
        adj[a].append((b, w))
        adj[b].append((a, w))
    best = [math.inf] * n

    def walk(p, bottleneck, visited):
        if bottleneck < best[p]:
            best[p] = bottleneck
        for q, w in adj[p]:
            if q not in visited:
                visited.add(q)
                walk(q, max(bottleneck, w), visited)
                visited.discard(q)

    for s in set(sources):
        walk(s, 0, {s})
    return best


def brute_force_costs(vol, markers, method: str = "threshold") -> OracleResult:
    n = vol.n
    cap = MAX_VOXELS if method == "threshold" else MAX_VOXELS_PATHS
    if n > cap:
        raise OracleTooLargeError(f"oracle limited to {cap} voxels, volume has {n}")
    if method not in ("threshold", "paths"):
        raise ValueError(f"unknown oracle method {method!r}")
    solve = _threshold_costs if method == "threshold" else _path_costs
    edges = _edges(vol)
    best_in = solve(n, edges, list(markers.in_markers))
    best_out = solve(n, edges, list(markers.out_markers))
    decided = [IN if a < b else OUT if b < a else TIE for a, b in zip(best_in, best_out)]
    return OracleResult(best_in, best_out, decided)


@dataclass
class OracleReport:
    cost_mismatches: list[tuple[int, int, float]] = field(default_factory=list)
    label_mismatches: list[tuple[int, str, str]] = field(default_factory=list)
    ties: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.cost_mismatches and not self.label_mismatches

    def describe(self) -> str:
        lines = [f"ties={len(self.ties)}"]
        for v, got, want in self.cost_mismatches:
            lines.append(f"voxel {v}: engine cost {got}, oracle {want}")
        for v, got, want in self.label_mismatches:
            lines.append(f"voxel {v}: engine label {got}, oracle {want}")
        return "\n".join(lines)

    def raise_for_mismatch(self) -> None:
        if not self.ok:
            raise OracleMismatchError(self.describe())


def check_against_engine(vol, markers, engine_labels, engine_costs, oracle=None) -> OracleReport:
    """Compare an engine run with the oracle.

    Costs must match everywhere. Labels are compared only where one class is
    strictly cheaper; TIE voxels are listed but left to cross-variant checks.
    """
    res = oracle or brute_force_costs(vol, markers)
    rep = OracleReport()
    for v in range(vol.n):
        want = min(res.best_in_cost[v], res.best_out_cost[v])
        got = int(engine_costs[v])
        if got != want:
            rep.cost_mismatches.append((v, got, want))
        decided = res.decided_label[v]
        if decided == TIE:
            rep.ties.append(v)
            continue
        got_label = IN if int(engine_labels[v]) == 1 else OUT
        if got_label != decided:
            rep.label_mismatches.append((v, got_label, decided))
    return rep
