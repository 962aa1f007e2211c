"""Trajectory map matching: Viterbi over per-fix edge candidates.

Emission favors edges close to the fix (Gaussian, sigma set by fix
quality: plain GPS ~4.9 m, RTK fixed centimeters). Transition penalizes
disagreement between the network travel distance of a candidate pair and
the great-circle advance between the fixes, which rewards connected,
direction-consistent paths.

Same-edge backward moves up to a small tolerance count as zero advance
(GPS wobble while stopped); larger backward moves must route around,
which is what suppresses reverse-direction edges on two-way roads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..config import Config
from ..errors import NoCandidates
from ..geo import haversine_arrays
from ..records import FixQuality
from .network import RoadNetwork
from .routing import DistanceCache, shortest_path
from .spatial import SpatialIndex, batch_candidates


@dataclass
class FixAssignment:
    fix_index: int
    edge_id: int
    offset_m: float
    lateral_m: float
    dist_m: float


@dataclass
class MatchedPath:
    assignments: list[FixAssignment]
    edge_sequence: list[int] = field(default_factory=list)
    off_network: list[int] = field(default_factory=list)
    unpositioned: list[int] = field(default_factory=list)


def _sigma_for(quality: int, cfg: Config) -> float:
    if quality == FixQuality.RTK_FIXED:
        return cfg.match_sigma_rtk_fixed_m
    if quality == FixQuality.RTK_FLOAT:
        return cfg.match_sigma_rtk_float_m
    if quality == FixQuality.DGPS:
        return cfg.match_sigma_dgps_m
    return cfg.match_sigma_gps_m


class _NetArrays:
    """Dense per-edge lookups for the Viterbi inner loop."""

    def __init__(self, network: RoadNetwork, cache: DistanceCache):
        max_eid = max(network.edges) + 1
        self.length = np.zeros(max_eid)
        self.frm_idx = np.zeros(max_eid, dtype=np.int64)
        self.to_node = np.zeros(max_eid, dtype=np.int64)
        for e in network.edges.values():
            self.length[e.id] = e.length_m
            self.frm_idx[e.id] = cache.node_index[e.frm]
            self.to_node[e.id] = e.to


def _viterbi_run(run, net: _NetArrays, cache: DistanceCache, cfg: Config):
    """run: list of (fix_index, fix, edges, dists, offs, lats) per step."""
    beta = cfg.match_beta_m
    sigmas = np.array([_sigma_for(item[1].fix_quality, cfg) for item in run])
    backtols = np.maximum(3.0 * sigmas, 5.0)

    lat_arr = np.array([item[1].lat for item in run])
    lon_arr = np.array([item[1].lon for item in run])
    d_gc = haversine_arrays(lat_arr[:-1], lon_arr[:-1], lat_arr[1:], lon_arr[1:])

    logps = []
    backptrs = [None]
    e_p = run[0][2]
    o_p = run[0][4]
    logps.append(-0.5 * (run[0][3] / sigmas[0]) ** 2)
    for r in range(1, len(run)):
        e_c, d_c, o_c = run[r][2], run[r][3], run[r][4]
        emis = -0.5 * (d_c / sigmas[r]) ** 2
        len_p = net.length[e_p]
        to_nodes = net.to_node[e_p]
        frm_c = net.frm_idx[e_c]
        rows = np.stack([cache.distances_from(int(nd)) for nd in to_nodes])
        via = (len_p - o_p)[:, None] + rows[:, frm_c] + o_c[None, :]

        same = e_p[:, None] == e_c[None, :]
        delta = o_c[None, :] - o_p[:, None]
        d_net = via
        fwd = same & (delta >= 0)
        back_ok = same & (delta < 0) & (-delta <= backtols[r])
        d_net[fwd] = np.minimum(delta[fwd], via[fwd])
        d_net[back_ok] = np.minimum(0.0, via[back_ok])

        scores = logps[-1][:, None] - np.abs(d_net - d_gc[r - 1]) / beta
        best_prev = np.argmax(scores, axis=0)
        new_logp = scores[best_prev, np.arange(scores.shape[1])] + emis
        if not np.isfinite(new_logp).any():
            new_logp = emis.copy()
            best_prev = None  # restart boundary
        backptrs.append(best_prev)
        logps.append(new_logp - new_logp.max())
        e_p, o_p = e_c, o_c

    picks = [0] * len(run)
    r = len(run) - 1
    picks[r] = int(np.argmax(logps[r]))
    while r > 0:
        bp = backptrs[r]
        picks[r - 1] = int(np.argmax(logps[r - 1])) if bp is None else int(bp[picks[r]])
        r -= 1

    out = []
    for (fi, _fix, edges, dists, offs, lats), pick in zip(run, picks):
        out.append(
            FixAssignment(fi, int(edges[pick]), float(offs[pick]), float(lats[pick]), float(dists[pick]))
        )
    return out


def _stitch(assignments, network: RoadNetwork) -> list[int]:
    """Connected edge sequence through the assigned edges (shortest-path
    infill between non-adjacent consecutive assignments)."""
    seq: list[int] = []
    for a in assignments:
        if not seq:
            seq.append(a.edge_id)
            continue
        prev = network.edges[seq[-1]]
        if a.edge_id == prev.id:
            continue
        if network.edges[a.edge_id].frm == prev.to:
            seq.append(a.edge_id)
            continue
        try:
            infill, _ = shortest_path(network, prev.to, network.edges[a.edge_id].frm)
        except Exception:
            infill = []
        for eid in infill:
            if eid != seq[-1]:
                seq.append(eid)
        if seq[-1] != a.edge_id:
            seq.append(a.edge_id)
    return seq


def match_trajectory(
    fixes, network: RoadNetwork, index: SpatialIndex, cfg: Config | None = None
) -> MatchedPath:
    """Match a synchronized fix sequence onto the network.

    Fixes farther than the off-network threshold from every edge are
    flagged and skipped; the Viterbi chain restarts after such gaps.
    """
    cfg = cfg or Config()
    positioned = [(i, f) for i, f in enumerate(fixes) if f.has_position]
    unpositioned = [i for i, f in enumerate(fixes) if not f.has_position]
    if len(positioned) < 2:
        raise NoCandidates(f"need >= 2 positioned fixes, got {len(positioned)}")

    points = [(f.lat, f.lon) for _, f in positioned]
    E, D, O, L, counts = batch_candidates(index, points, cfg.match_k, cfg.match_offnetwork_m)

    off_network = [positioned[j][0] for j in range(len(positioned)) if counts[j] == 0]
    if len(off_network) == len(positioned):
        raise NoCandidates("every fix is farther than the off-network threshold from all edges")

    cache = DistanceCache(network)
    net = _NetArrays(network, cache)
    assignments: list[FixAssignment] = []
    run = []
    for j, (fi, fix) in enumerate(positioned):
        c = counts[j]
        if c > 0:
            run.append((fi, fix, E[j, :c], D[j, :c], O[j, :c], L[j, :c]))
        elif run:
            assignments.extend(_viterbi_run(run, net, cache, cfg))
            run = []
    if run:
        assignments.extend(_viterbi_run(run, net, cache, cfg))

    return MatchedPath(
        assignments=assignments,
        edge_sequence=_stitch(assignments, network),
        off_network=off_network,
        unpositioned=unpositioned,
    )
