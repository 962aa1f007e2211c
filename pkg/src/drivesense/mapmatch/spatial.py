"""Uniform-grid spatial index over edge polylines.

The index only prunes: nearest-edge queries are exact. Each grid cell
lists the polyline segments whose bounding box intersects it. Queries
expand cell rings outward until the k-th best distance beats the ring
lower bound, falling back to an exhaustive scan when the grid yields
too few candidates (e.g. query far outside the network bbox).

All point-to-segment geometry runs in a single local tangent plane
shared by index construction and queries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import EmptyNetwork
from ..geo import LocalProjection, haversine_arrays, point_segment_distance
from .network import RoadNetwork


@dataclass
class EdgeHit:
    edge_id: int
    dist_m: float
    offset_m: float   # along-edge offset of the closest point, in [0, length_m]
    lateral_m: float  # signed perpendicular offset; positive left of travel


class SpatialIndex:
    def __init__(self, network: RoadNetwork, cell_m: float = 250.0):
        if not network.edges:
            raise EmptyNetwork("network has no edges")
        if cell_m <= 0:
            raise ValueError("cell_m must be positive")
        self.network = network
        self.cell_m = float(cell_m)
        self.proj = LocalProjection(*network.center())

        xs1, ys1, xs2, ys2, seg_edge, seg_off0, seg_len = [], [], [], [], [], [], []
        for e in sorted(network.edges.values(), key=lambda e: e.id):
            pts = np.asarray(e.polyline, dtype=float)
            x, y = self.proj.to_xy(pts[:, 0], pts[:, 1])
            # haversine segment lengths keep offsets consistent with length_m
            hav = haversine_arrays(pts[:-1, 0], pts[:-1, 1], pts[1:, 0], pts[1:, 1])
            cum = np.concatenate([[0.0], np.cumsum(hav)])
            for i in range(len(pts) - 1):
                xs1.append(x[i])
                ys1.append(y[i])
                xs2.append(x[i + 1])
                ys2.append(y[i + 1])
                seg_edge.append(e.id)
                seg_off0.append(cum[i])
                seg_len.append(hav[i])
        self.sx1 = np.array(xs1)
        self.sy1 = np.array(ys1)
        self.sx2 = np.array(xs2)
        self.sy2 = np.array(ys2)
        self.seg_edge = np.array(seg_edge, dtype=np.int64)
        self.seg_off0 = np.array(seg_off0)
        self.seg_len = np.array(seg_len)

        self.x0 = float(min(self.sx1.min(), self.sx2.min()))
        self.y0 = float(min(self.sy1.min(), self.sy2.min()))
        x1 = float(max(self.sx1.max(), self.sx2.max()))
        y1 = float(max(self.sy1.max(), self.sy2.max()))
        self.nx = max(1, int(np.ceil((x1 - self.x0) / self.cell_m)))
        self.ny = max(1, int(np.ceil((y1 - self.y0) / self.cell_m)))

        cells: dict[tuple[int, int], list[int]] = {}
        for s in range(len(self.seg_edge)):
            ci0 = int((min(self.sx1[s], self.sx2[s]) - self.x0) // self.cell_m)
            ci1 = int((max(self.sx1[s], self.sx2[s]) - self.x0) // self.cell_m)
            cj0 = int((min(self.sy1[s], self.sy2[s]) - self.y0) // self.cell_m)
            cj1 = int((max(self.sy1[s], self.sy2[s]) - self.y0) // self.cell_m)
            for ci in range(max(0, ci0), min(self.nx - 1, ci1) + 1):
                for cj in range(max(0, cj0), min(self.ny - 1, cj1) + 1):
                    cells.setdefault((ci, cj), []).append(s)
        self.cells = {k: np.array(v, dtype=np.int64) for k, v in cells.items()}

    def __len__(self):
        return len(self.seg_edge)

    def cell_of(self, x: float, y: float) -> tuple[int, int]:
        return int((x - self.x0) // self.cell_m), int((y - self.y0) // self.cell_m)

    def ring_segments(self, ci: int, cj: int, r: int) -> np.ndarray:
        """Segment indices in the Chebyshev ring of radius r around (ci, cj)."""
        chunks = []
        if r == 0:
            hit = self.cells.get((ci, cj))
            if hit is not None:
                chunks.append(hit)
        else:
            for di in range(-r, r + 1):
                for dj in (-r, r):
                    hit = self.cells.get((ci + di, cj + dj))
                    if hit is not None:
                        chunks.append(hit)
            for dj in range(-r + 1, r):
                for di in (-r, r):
                    hit = self.cells.get((ci + di, cj + dj))
                    if hit is not None:
                        chunks.append(hit)
        if not chunks:
            return np.empty(0, dtype=np.int64)
        return np.concatenate(chunks)

    def max_ring(self, ci: int, cj: int) -> int:
        return max(
            abs(ci - 0), abs(ci - (self.nx - 1)), abs(cj - 0), abs(cj - (self.ny - 1))
        )


def _score_segments(index: SpatialIndex, seg_idx: np.ndarray, x: float, y: float):
    """Per-edge best hit among the given segments: (edge_ids, dists, offsets, laterals)."""
    d, t = point_segment_distance(
        x, y, index.sx1[seg_idx], index.sy1[seg_idx], index.sx2[seg_idx], index.sy2[seg_idx]
    )
    edges = index.seg_edge[seg_idx]
    order = np.lexsort((edges, d))  # by distance, then edge id
    d, t, edges, seg_idx = d[order], t[order], edges[order], seg_idx[order]
    _, first = np.unique(edges, return_index=True)
    first.sort()
    best_edges = edges[first]
    best_d = d[first]
    best_t = t[first]
    best_seg = seg_idx[first]
    offs = index.seg_off0[best_seg] + best_t * index.seg_len[best_seg]
    dx = index.sx2[best_seg] - index.sx1[best_seg]
    dy = index.sy2[best_seg] - index.sy1[best_seg]
    px = x - (index.sx1[best_seg] + best_t * dx)
    py = y - (index.sy1[best_seg] + best_t * dy)
    norm = np.hypot(dx, dy)
    norm[norm == 0] = 1.0
    lateral = (dx * py - dy * px) / norm  # positive left of travel direction
    return best_edges, best_d, offs, lateral


def _take_k(edges, dists, offs, lats, k: int) -> list[EdgeHit]:
    order = np.lexsort((edges, dists))
    hits = []
    for i in order[:k]:
        hits.append(EdgeHit(int(edges[i]), float(dists[i]), float(offs[i]), float(lats[i])))
    return hits


def nearest_edges(index: SpatialIndex, p, k: int = 1) -> list[EdgeHit]:
    """The k edges nearest to p=(lat, lon); exact, ties broken by lower edge id."""
    if k < 1:
        raise ValueError("k must be >= 1")
    x, y = index.proj.to_xy(p[0], p[1])
    x, y = float(x), float(y)
    ci, cj = index.cell_of(x, y)
    gathered: list[np.ndarray] = []
    best: list[EdgeHit] = []
    max_r = index.max_ring(ci, cj)
    for r in range(max_r + 1):
        segs = index.ring_segments(ci, cj, r)
        if len(segs):
            gathered.append(segs)
        if gathered:
            cand = np.concatenate(gathered)
            edges, dists, offs, lats = _score_segments(index, cand, x, y)
            best = _take_k(edges, dists, offs, lats, k)
            # unexplored cells lie beyond Chebyshev radius r: any such segment
            # is at least r*cell_m away from anywhere in the center cell
            if len(best) >= k and best[k - 1].dist_m <= r * index.cell_m:
                return best
    if len(best) < k or not gathered:
        # exhaustive fallback (also covers queries far outside the bbox)
        all_segs = np.arange(len(index.seg_edge), dtype=np.int64)
        edges, dists, offs, lats = _score_segments(index, all_segs, x, y)
        return _take_k(edges, dists, offs, lats, k)
    return best


def batch_candidates(index: SpatialIndex, points, k: int, max_dist_m: float):
    """Vectorized k-nearest-edge candidates for many (lat, lon) points.

    Returns (edge_ids, dists, offs, lats, counts): arrays of shape (P, k)
    with counts[i] valid leading entries per point (same results as
    nearest_edges, entries beyond max_dist_m dropped).
    """
    pts = np.asarray(points, dtype=float)
    P = len(pts)
    n_segs = len(index.seg_edge)
    out_e = np.full((P, k), -1, dtype=np.int64)
    out_d = np.full((P, k), np.inf)
    out_o = np.zeros((P, k))
    out_l = np.zeros((P, k))
    counts = np.zeros(P, dtype=np.int64)
    if P == 0:
        return out_e, out_d, out_o, out_l, counts

    if P * n_segs <= 8_000_000:
        x, y = index.proj.to_xy(pts[:, 0], pts[:, 1])
        x = x[:, None]
        y = y[:, None]
        d, tpar = point_segment_distance(
            x, y, index.sx1[None, :], index.sy1[None, :], index.sx2[None, :], index.sy2[None, :]
        )
        # segments are stored grouped by edge; reduce seg -> edge per row
        edge_change = np.nonzero(np.diff(index.seg_edge))[0] + 1
        starts = np.concatenate([[0], edge_change])
        edge_ids_grouped = index.seg_edge[starts]
        d_edge = np.minimum.reduceat(d, starts, axis=1)  # (P, E)
        n_edges = d_edge.shape[1]
        kk = min(k, n_edges)
        rows_ix = np.arange(P)[:, None]
        # exact (distance, edge id) order per row, then take k
        ids_b = np.broadcast_to(edge_ids_grouped, d_edge.shape)
        order = np.lexsort((ids_b, d_edge), axis=1)[:, :kk]
        top = order
        top_d = d_edge[rows_ix, top]
        top_e = edge_ids_grouped[top]

        # argmin segment within each (row, edge-group): first segment
        # achieving the group's min distance
        group_of_seg = np.repeat(np.arange(n_edges), np.diff(np.append(starts, n_segs)))
        d_min_per_seg = d_edge[:, group_of_seg]  # (P, S)
        is_min = d <= d_min_per_seg
        seg_pos = np.where(is_min, np.arange(n_segs)[None, :], n_segs)
        argmin_seg = np.minimum.reduceat(seg_pos, starts, axis=1)  # (P, E)

        s_loc = argmin_seg[rows_ix, top]  # (P, kk)
        tt = tpar[rows_ix, s_loc]
        dx = index.sx2 - index.sx1
        dy = index.sy2 - index.sy1
        norm = np.hypot(dx, dy)
        norm[norm == 0] = 1.0
        offs = index.seg_off0[s_loc] + tt * index.seg_len[s_loc]
        px = x - (index.sx1[s_loc] + tt * dx[s_loc])
        py = y - (index.sy1[s_loc] + tt * dy[s_loc])
        lats = (dx[s_loc] * py - dy[s_loc] * px) / norm[s_loc]

        valid = top_d <= max_dist_m
        counts = valid.sum(axis=1).astype(np.int64)
        # valid entries are a prefix per row (sorted by distance)
        out_e[:, :kk] = np.where(valid, top_e, -1)
        out_d[:, :kk] = np.where(valid, top_d, np.inf)
        out_o[:, :kk] = np.where(valid, offs, 0.0)
        out_l[:, :kk] = np.where(valid, lats, 0.0)
        return out_e, out_d, out_o, out_l, counts

    for i, p in enumerate(pts):
        hits = [h for h in nearest_edges(index, p, k) if h.dist_m <= max_dist_m]
        counts[i] = len(hits)
        for m, h in enumerate(hits):
            out_e[i, m] = h.edge_id
            out_d[i, m] = h.dist_m
            out_o[i, m] = h.offset_m
            out_l[i, m] = h.lateral_m
    return out_e, out_d, out_o, out_l, counts


def nearest_edges_batch(index: SpatialIndex, points, k: int, max_dist_m: float | None = None):
    """nearest_edges for many (lat, lon) points; list of EdgeHit lists."""
    limit = max_dist_m if max_dist_m is not None else np.inf
    out_e, out_d, out_o, out_l, counts = batch_candidates(index, points, k, limit)
    out = []
    for i in range(len(counts)):
        out.append(
            [
                EdgeHit(int(out_e[i, m]), float(out_d[i, m]), float(out_o[i, m]), float(out_l[i, m]))
                for m in range(counts[i])
            ]
        )
    return out
