"""Shortest-path engine behind the betweenness and solver modules.

Holds one immutable graph snapshot in CSR form (node ids 1..n, slot 0
unused) and computes per-source Brandes dependencies with numba kernels.
The key optimization is ``probe_edit``: betweenness after changing a single
edge is obtained by recomputing only the sources whose shortest-path DAG can
involve that edge, which is what makes the greedy solver usable on networks
with thousands of nodes.

Two path lengths are considered equal when |d1 - d2| <= TIE_REL_TOL *
max(1, d1); the affected-source test uses the wider AFFECT_REL_TOL so that
rounding can only over-include sources (recomputing an unchanged source is a
no-op, skipping a changed one would be wrong).
"""

from __future__ import annotations

import threading
from collections import deque
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from numba import njit

from .graph import DistanceTransform, Network

TIE_REL_TOL = 1e-12
AFFECT_REL_TOL = 1e-11

# contrib/dist caches are capped so NET-3-sized runs stay within memory
_CACHE_BYTES = 512 * 1024 * 1024

# all-pairs D/S matrices (the fast probe path) are built only up to this size;
# larger graphs fall back to per-source recomputation
PAIR_STATE_MAX_NODES = 4096


@njit(cache=True, nogil=True)
def _heap_push(heap_d, heap_v, size, d, v):
    heap_d[size] = d
    heap_v[size] = v
    i = size
    while i > 0:
        p = (i - 1) >> 1
        if heap_d[p] > heap_d[i]:
            heap_d[p], heap_d[i] = heap_d[i], heap_d[p]
            heap_v[p], heap_v[i] = heap_v[i], heap_v[p]
            i = p
        else:
            break
    return size + 1


@njit(cache=True, nogil=True)
def _heap_pop(heap_d, heap_v, size):
    d = heap_d[0]
    v = heap_v[0]
    size -= 1
    if size > 0:
        heap_d[0] = heap_d[size]
        heap_v[0] = heap_v[size]
        i = 0
        while True:
            l = 2 * i + 1
            r = l + 1
            m = i
            if l < size and heap_d[l] < heap_d[m]:
                m = l
            if r < size and heap_d[r] < heap_d[m]:
                m = r
            if m == i:
                break
            heap_d[m], heap_d[i] = heap_d[i], heap_d[m]
            heap_v[m], heap_v[i] = heap_v[i], heap_v[m]
            i = m
    return d, v, size


@njit(cache=True, nogil=True)
def _relax(dist, sigma, pred_start, pred_flat, pred_count, heap_d, heap_v, heap_size, v, w, nd):
    sw = dist[w]
    tol = TIE_REL_TOL * (nd if nd > 1.0 else 1.0)
    if nd < sw - tol:
        dist[w] = nd
        sigma[w] = sigma[v]
        pred_flat[pred_start[w]] = v
        pred_count[w] = 1
        heap_size = _heap_push(heap_d, heap_v, heap_size, nd, w)
    elif abs(nd - sw) <= tol:
        sigma[w] += sigma[v]
        pred_flat[pred_start[w] + pred_count[w]] = v
        pred_count[w] += 1
    return heap_size


@njit(cache=True, nogil=True)
def _sssp(indptr, indices, lengths, s, xa, xb, xlen):
    """Dijkstra with path counting and predecessor DAG from source s.

    (xa, xb, xlen) injects one undirected edge that is absent from the CSR;
    xa = -1 disables the injection. Returns (dist, sigma, order, n_settled,
    pred_start, pred_flat, pred_count).
    """
    n = indptr.shape[0] - 2
    m_dir = indices.shape[0]

    dist = np.full(n + 1, np.inf)
    sigma = np.zeros(n + 1)
    settled = np.zeros(n + 1, dtype=np.uint8)
    order = np.empty(n + 1, dtype=np.int64)
    pred_count = np.zeros(n + 1, dtype=np.int64)

    pred_start = np.empty(n + 2, dtype=np.int64)
    pred_start[0] = 0
    pred_start[1] = 0
    for i in range(1, n + 1):
        cap = indptr[i + 1] - indptr[i]
        if i == xa or i == xb:
            cap += 1
        pred_start[i + 1] = pred_start[i] + cap
    pred_flat = np.empty(pred_start[n + 1] + 1, dtype=np.int64)

    heap_d = np.empty(m_dir + n + 8)
    heap_v = np.empty(m_dir + n + 8, dtype=np.int64)
    heap_size = 0

    dist[s] = 0.0
    sigma[s] = 1.0
    heap_size = _heap_push(heap_d, heap_v, heap_size, 0.0, s)

    n_settled = 0
    while heap_size > 0:
        _, v, heap_size = _heap_pop(heap_d, heap_v, heap_size)
        if settled[v] == 1:
            continue
        settled[v] = 1
        order[n_settled] = v
        n_settled += 1
        dv = dist[v]
        for k in range(indptr[v], indptr[v + 1]):
            w = indices[k]
            if settled[w] == 0:
                heap_size = _relax(
                    dist, sigma, pred_start, pred_flat, pred_count,
                    heap_d, heap_v, heap_size, v, w, dv + lengths[k],
                )
        if v == xa or v == xb:
            w = xb if v == xa else xa
            if settled[w] == 0:
                heap_size = _relax(
                    dist, sigma, pred_start, pred_flat, pred_count,
                    heap_d, heap_v, heap_size, v, w, dv + xlen,
                )

    return dist, sigma, order, n_settled, pred_start, pred_flat, pred_count


@njit(cache=True, nogil=True)
def _accumulate(order, n_settled, sigma, pred_start, pred_flat, pred_count, s, n):
    delta = np.zeros(n + 1)
    for idx in range(n_settled - 1, -1, -1):
        w = order[idx]
        coeff = (1.0 + delta[w]) / sigma[w]
        for k in range(pred_count[w]):
            p = pred_flat[pred_start[w] + k]
            delta[p] += sigma[p] * coeff
    delta[s] = 0.0
    return delta


@njit(cache=True, nogil=True)
def _source_dependency(indptr, indices, lengths, s, xa, xb, xlen):
    """Ordered-pair Brandes dependency of source s on every node."""
    n = indptr.shape[0] - 2
    dist, sigma, order, n_settled, ps, pf, pc = _sssp(indptr, indices, lengths, s, xa, xb, xlen)
    return _accumulate(order, n_settled, sigma, ps, pf, pc, s, n)


@njit(cache=True, nogil=True)
def _eq(d1, d2):
    if not (np.isfinite(d1) and np.isfinite(d2)):
        return d1 == d2  # unreachable ties only with itself
    return abs(d1 - d2) <= TIE_REL_TOL * max(1.0, d1)


@njit(cache=True, nogil=True)
def _pair_delta(d0, c0, c0v, a1, c1, a2, c2, old_ratio):
    """Change in one pair's through-v fraction given the competing lengths:
    old avoiders (d0, count c0, through-v c0v) vs the two single-crossing
    routes (a1, c1) and (a2, c2), which always contain v."""
    dmin = np.inf
    if c0 > 0.0 and d0 < dmin:
        dmin = d0
    if c1 > 0.0 and a1 < dmin:
        dmin = a1
    if c2 > 0.0 and a2 < dmin:
        dmin = a2
    if not np.isfinite(dmin):
        return 0.0
    sig = 0.0
    sigv = 0.0
    if c0 > 0.0 and _eq(d0, dmin):
        sig += c0
        sigv += c0v
    if c1 > 0.0 and _eq(a1, dmin):
        sig += c1
        sigv += c1
    if c2 > 0.0 and _eq(a2, dmin):
        sig += c2
        sigv += c2
    return sigv / sig - old_ratio


@njit(cache=True, nogil=True)
def _probe_bv_pairs(D, S, v, u, lo, lns, bv_base):
    """Exact new betweenness of v for each candidate length of edge {v,u}.

    D and S are the symmetric all-pairs distance and shortest-path-count
    matrices of the CURRENT graph; ``lo`` is the current length of {v,u}
    (inf when absent) and every entry of ``lns`` must be <= lo (lengths
    never grow here; weight increments only shorten reciprocal lengths).

    Per unordered pair (s,t), the new shortest paths are exactly: old paths
    avoiding the edge (length d0), plus single-crossing routes s~v-e-u~t and
    s~u-e-v~t at the new length, whose segment counts must exclude old paths
    that themselves used the edge. Crossing routes always contain v, so the
    through-v fraction needs no extra bookkeeping.
    """
    n = D.shape[0] - 1
    k = lns.shape[0]
    out = np.zeros(k)
    ln_min = lns[0]
    for j in range(1, k):
        if lns[j] < ln_min:
            ln_min = lns[j]

    Dv = D[v]
    Du = D[u]
    Sv = S[v]
    Su = S[u]

    # per-node avoid-counts of the t-side segments (independent of s)
    sav_vt = np.empty(n + 1)
    sav_ut = np.empty(n + 1)
    for t in range(1, n + 1):
        users_vt = Su[t] if _eq(lo + Du[t], Dv[t]) else 0.0
        users_ut = Sv[t] if _eq(lo + Dv[t], Du[t]) else 0.0
        sav_vt[t] = Sv[t] - users_vt
        sav_ut[t] = Su[t] - users_ut

    for s in range(1, n + 1):
        if s == v:
            continue
        dsv = Dv[s]
        dsu = Du[s]
        # source-level skip: the edge (at its shortest probed length) cannot
        # lie on or tie with any shortest path from s
        rel = False
        if np.isfinite(dsv) or np.isfinite(dsu):
            if dsv + ln_min <= dsu + AFFECT_REL_TOL * max(1.0, dsu):
                rel = True
            elif dsu + ln_min <= dsv + AFFECT_REL_TOL * max(1.0, dsv):
                rel = True
        if not rel:
            continue

        sav_sv = sav_vt[s]
        sav_su = sav_ut[s]
        Ds = D[s]
        Ss = S[s]
        for t in range(s + 1, n + 1):
            if t == v:
                continue
            d0 = Ds[t]
            s0 = Ss[t]
            dvt = Dv[t]
            dut = Du[t]
            c1 = sav_sv * sav_ut[t]  # s~v -e- u~t crossings
            c2 = sav_su * sav_vt[t]  # s~u -e- v~t crossings
            if c1 <= 0.0 and c2 <= 0.0 and s0 <= 0.0:
                continue
            # old paths through the edge (they all pass v)
            users = 0.0
            if c1 > 0.0 and _eq(dsv + lo + dut, d0):
                users += c1
            if c2 > 0.0 and _eq(dsu + lo + dvt, d0):
                users += c2
            c0 = s0 - users
            if s0 > 0.0:
                thru_v = Sv[s] * Sv[t] if _eq(dsv + dvt, d0) else 0.0
                old_ratio = thru_v / s0
                c0v = thru_v - users
            else:
                old_ratio = 0.0
                c0v = 0.0
            a1b = dsv + dut
            a2b = dsu + dvt
            for j in range(k):
                ln = lns[j]
                out[j] += _pair_delta(d0, c0, c0v, a1b + ln, c1, a2b + ln, c2, old_ratio)
    return bv_base + out


@njit(cache=True, nogil=True)
def _probe_bv_range(D, S, v, u, lo, w_now, w_max, bv_base):
    """New betweenness of v for EVERY increment 1..w_max on edge {v,u} in a
    single pair pass (reciprocal lengths only: ln(w) = 1/(w_now + w)).

    Per pair the contribution is a step function of the increment: zero
    until the crossing routes reach the old distance, a tie value on the
    boundary, then constant (crossing routes all contain v, so the fraction
    is exactly 1). The transition increment comes from inverting the
    reciprocal length; boundary increments are evaluated directly so tie
    tolerance semantics match the per-increment kernel exactly.
    """
    n = D.shape[0] - 1
    diff = np.zeros(w_max + 2)
    lns = np.empty(w_max + 1)
    for w in range(1, w_max + 1):
        lns[w] = 1.0 / (w_now + w)
    ln_min = lns[w_max]

    Dv = D[v]
    Du = D[u]
    Sv = S[v]
    Su = S[u]

    sav_vt = np.empty(n + 1)
    sav_ut = np.empty(n + 1)
    for t in range(1, n + 1):
        users_vt = Su[t] if _eq(lo + Du[t], Dv[t]) else 0.0
        users_ut = Sv[t] if _eq(lo + Dv[t], Du[t]) else 0.0
        sav_vt[t] = Sv[t] - users_vt
        sav_ut[t] = Su[t] - users_ut

    for s in range(1, n + 1):
        if s == v:
            continue
        dsv = Dv[s]
        dsu = Du[s]
        rel = False
        if np.isfinite(dsv) or np.isfinite(dsu):
            if dsv + ln_min <= dsu + AFFECT_REL_TOL * max(1.0, dsu):
                rel = True
            elif dsu + ln_min <= dsv + AFFECT_REL_TOL * max(1.0, dsv):
                rel = True
        if not rel:
            continue

        sav_sv = sav_vt[s]
        sav_su = sav_ut[s]
        Ds = D[s]
        Ss = S[s]
        for t in range(s + 1, n + 1):
            if t == v:
                continue
            d0 = Ds[t]
            s0 = Ss[t]
            dvt = Dv[t]
            dut = Du[t]
            c1 = sav_sv * sav_ut[t]
            c2 = sav_su * sav_vt[t]
            a1b = dsv + dut if c1 > 0.0 else np.inf
            a2b = dsu + dvt if c2 > 0.0 else np.inf
            a_eff = min(a1b, a2b)
            if not np.isfinite(a_eff):
                continue  # the edge creates no crossing route for this pair
            if s0 <= 0.0:
                # previously disconnected: every increment connects them via v
                diff[1] += 1.0
                diff[w_max + 1] -= 1.0
                continue
            users = 0.0
            if c1 > 0.0 and _eq(dsv + lo + dut, d0):
                users += c1
            if c2 > 0.0 and _eq(dsu + lo + dvt, d0):
                users += c2
            c0 = s0 - users
            thru_v = Sv[s] * Sv[t] if _eq(dsv + dvt, d0) else 0.0
            old_ratio = thru_v / s0
            c0v = thru_v - users
            cval = 1.0 - old_ratio
            if users > 0.0:
                # the edge was already on shortest paths; any shortening puts
                # the crossing routes strictly in front for every increment
                diff[1] += cval
                diff[w_max + 1] -= cval
                continue
            g = d0 - a_eff
            if g <= 0.0:
                # crossing routes stay at or above d0 for every increment;
                # only a hairline tolerance tie is possible, and only near
                # the largest increment
                if a_eff + ln_min < d0 or _eq(a_eff + ln_min, d0):
                    w_start = 1
                else:
                    continue
            else:
                w_raw = 1.0 / g - w_now
                if w_raw > w_max + 3.0:
                    if _eq(a_eff + ln_min, d0):
                        w_start = 1  # hairline tolerance tie near the top
                    else:
                        continue  # transition beyond the probed range
                else:
                    w_start = int(np.floor(w_raw)) - 2
                    if w_start < 1:
                        w_start = 1
            # walk increments from the transition window, then range-fill the
            # constant tail once the direct value settles on cval
            w = w_start
            while w <= w_max:
                ln = lns[w]
                dcur = _pair_delta(d0, c0, c0v, a1b + ln, c1, a2b + ln, c2, old_ratio)
                diff[w] += dcur
                diff[w + 1] -= dcur
                w += 1
                if dcur == cval and w <= w_max:
                    diff[w] += cval
                    diff[w_max + 1] -= cval
                    break

    out = np.empty(w_max + 1)
    acc = 0.0
    out[0] = bv_base
    for w in range(1, w_max + 1):
        acc += diff[w]
        out[w] = bv_base + acc
    return out


@njit(cache=True, nogil=True)
def _sssp_dist(indptr, indices, lengths, s, xa, xb, xlen):
    """Distance-only Dijkstra (no counting), used for affected-source tests."""
    n = indptr.shape[0] - 2
    m_dir = indices.shape[0]
    dist = np.full(n + 1, np.inf)
    settled = np.zeros(n + 1, dtype=np.uint8)
    heap_d = np.empty(m_dir + n + 8)
    heap_v = np.empty(m_dir + n + 8, dtype=np.int64)
    heap_size = 0
    dist[s] = 0.0
    heap_size = _heap_push(heap_d, heap_v, heap_size, 0.0, s)
    while heap_size > 0:
        _, v, heap_size = _heap_pop(heap_d, heap_v, heap_size)
        if settled[v] == 1:
            continue
        settled[v] = 1
        dv = dist[v]
        for k in range(indptr[v], indptr[v + 1]):
            w = indices[k]
            if settled[w] == 0:
                nd = dv + lengths[k]
                if nd < dist[w]:
                    dist[w] = nd
                    heap_size = _heap_push(heap_d, heap_v, heap_size, nd, w)
        if v == xa or v == xb:
            w = xb if v == xa else xa
            if settled[w] == 0:
                nd = dv + xlen
                if nd < dist[w]:
                    dist[w] = nd
                    heap_size = _heap_push(heap_d, heap_v, heap_size, nd, w)
    return dist


class CentralityEngine:
    """Betweenness state for one immutable network snapshot.

    ``ordered_scores`` are raw Brandes accumulations over ordered (s, t)
    pairs; public scores halve them once at the boundary. Per-source
    distance and dependency vectors are cached because solver rounds probe
    many candidate edits against the same snapshot.
    """

    def __init__(
        self,
        net: Network,
        transform: DistanceTransform,
        threads: int = 1,
        seed_ordered_scores: np.ndarray | None = None,
        seed_pair: tuple[np.ndarray, np.ndarray] | None = None,
    ):
        self.net = net
        self.transform = transform
        self.threads = max(1, int(threads))
        n = net.n_nodes
        self.n = n

        indptr = np.zeros(n + 2, dtype=np.int64)
        for i in range(1, n + 1):
            indptr[i + 1] = indptr[i] + len(net._adj[i])
        m_dir = int(indptr[n + 1])
        indices = np.empty(m_dir, dtype=np.int64)
        lengths = np.empty(m_dir)
        edge_pos: dict[tuple[int, int], tuple[int, int]] = {}
        pos_of: dict[tuple[int, int], int] = {}
        for i in range(1, n + 1):
            base = int(indptr[i])
            for j, nbr in enumerate(sorted(net._adj[i])):
                indices[base + j] = nbr
                lengths[base + j] = transform.length(net._adj[i][nbr])
                pos_of[(i, nbr)] = base + j
        for u, v, _ in net.edges():
            edge_pos[(u, v)] = (pos_of[(u, v)], pos_of[(v, u)])

        self.indptr = indptr
        self.indices = indices
        self.lengths = lengths
        self._edge_pos = edge_pos
        self._lock = threading.Lock()
        self._dist_cache: dict[int, np.ndarray] = {}
        self._contrib_cache: dict[int, np.ndarray] = {}
        self._cache_cap = max(64, _CACHE_BYTES // (8 * (n + 1)))
        self._ordered: np.ndarray | None = None
        if seed_ordered_scores is not None:
            self._ordered = np.asarray(seed_ordered_scores, dtype=np.float64)
        self._D: np.ndarray | None = None
        self._S: np.ndarray | None = None
        if seed_pair is not None:
            self._D, self._S = seed_pair
        self._pair_lock = threading.Lock()

    # -- full computation ---------------------------------------------------

    def ordered_scores(self) -> np.ndarray:
        if self._ordered is None:
            self._ordered = self._compute_ordered()
        return self._ordered

    def _compute_ordered(self) -> np.ndarray:
        n = self.n
        bc = np.zeros(n + 1)
        if n == 0:
            return bc
        if self.threads == 1 or n < 64:
            for s in range(1, n + 1):
                bc += _source_dependency(self.indptr, self.indices, self.lengths, s, -1, -1, 0.0)
            return bc
        # parallel per-source phases, reduced strictly in source order so the
        # result is bitwise-identical for any thread count
        with ThreadPoolExecutor(max_workers=self.threads) as ex:
            window: deque = deque()
            next_s = 1
            while next_s <= n or window:
                while next_s <= n and len(window) < self.threads * 4:
                    window.append(
                        ex.submit(_source_dependency, self.indptr, self.indices, self.lengths, next_s, -1, -1, 0.0)
                    )
                    next_s += 1
                bc += window.popleft().result()
        return bc

    # -- all-pairs state for fast target-only probes ---------------------------

    def pair_capable(self) -> bool:
        return self.n <= PAIR_STATE_MAX_NODES

    def ensure_pair_state(self) -> None:
        """Build the symmetric all-pairs distance/count matrices (and the
        full scores, which come out of the same pass)."""
        if self._D is not None or not self.pair_capable():
            return
        with self._pair_lock:
            if self._D is not None:
                return
            n = self.n
            D = np.full((n + 1, n + 1), np.inf)
            S = np.zeros((n + 1, n + 1))
            bc = np.zeros(n + 1)
            np.fill_diagonal(D, 0.0)
            D[0, 0] = np.inf
            for s in range(1, n + 1):
                dist, sigma, order, n_settled, ps, pf, pc = _sssp(
                    self.indptr, self.indices, self.lengths, s, -1, -1, 0.0
                )
                D[s, 1:] = dist[1:]
                S[s, 1:] = sigma[1:]
                bc += _accumulate(order, n_settled, sigma, ps, pf, pc, s, n)
            S[0, 0] = 0.0
            self._D, self._S = D, S
            if self._ordered is None:
                self._ordered = bc

    def probe_bv(self, v: int, u: int, increments) -> list[float] | None:
        """New (unordered) betweenness of v for each increment on edge {v,u},
        via exact pair counting on the all-pairs matrices.

        Returns None when the fast path does not apply (graph too large, or
        an increment would LENGTHEN the edge, which the pair formula cannot
        handle).
        """
        if not self.pair_capable():
            return None
        w_now = self.net.weight(v, u)
        lo = self.transform.length(w_now) if w_now > 0 else np.inf
        lns = np.array([self.transform.length(w_now + int(i)) for i in increments])
        if np.any(lns > lo):
            return None
        self.ensure_pair_state()
        bv_base = float(self.ordered_scores()[v]) / 2.0
        res = _probe_bv_pairs(self._D, self._S, v, u, lo, lns, bv_base)
        return [float(x) for x in res]

    def probe_bv_all_increments(self, v: int, u: int, max_increment: int) -> list[float] | None:
        """New (unordered) betweenness of v for every increment 1..max_increment
        on edge {v,u}, computed in one pair pass.

        Only for reciprocal lengths (increments must shorten the edge);
        returns None when the fast path does not apply. Values are exactly
        those of per-increment probes.
        """
        if not self.pair_capable() or self.transform is not DistanceTransform.RECIPROCAL:
            return None
        w_now = self.net.weight(v, u)
        lo = 1.0 / w_now if w_now > 0 else np.inf
        self.ensure_pair_state()
        bv_base = float(self.ordered_scores()[v]) / 2.0
        res = _probe_bv_range(self._D, self._S, v, u, lo, w_now, max_increment, bv_base)
        return [float(res[w]) for w in range(1, max_increment + 1)]

    def commit_probe(self, a: int, b: int, new_weight: int):
        """Ordered scores after setting {a,b} to new_weight, plus patched
        all-pairs matrices when this engine carries them.

        Returns (ordered_scores, pair_or_None); meant for solver commits so
        the next snapshot's engine can be seeded without a full rebuild.
        """
        if self._D is None:
            return self.probe_edit(a, b, new_weight), None
        base = self.ordered_scores()
        sources = self.affected_sources(a, b, new_weight)
        D2 = self._D.copy()
        S2 = self._S.copy()
        if sources.size == 0:
            return base.copy(), (D2, S2)
        indptr2, indices2, lengths2, xa, xb, xlen = self._edited_csr(a, b, new_weight)
        bc = base.copy()
        n = self.n
        for s in sources:
            s = int(s)
            bc -= self.contrib_from(s)
            dist, sigma, order, n_settled, ps, pf, pc = _sssp(indptr2, indices2, lengths2, s, xa, xb, xlen)
            bc += _accumulate(order, n_settled, sigma, ps, pf, pc, s, n)
            D2[s, 1:] = dist[1:]
            D2[1:, s] = dist[1:]
            S2[s, 1:] = sigma[1:]
            S2[1:, s] = sigma[1:]
        return bc, (D2, S2)

    def _edited_csr(self, a: int, b: int, new_weight: int):
        """CSR view of the graph with {a,b} set to new_weight; absent edges
        are injected via the kernels' extra-edge channel."""
        w_old = self.net.weight(a, b)
        l_new = self.transform.length(new_weight)
        if w_old > 0:
            lengths2 = self.lengths.copy()
            key = (a, b) if a < b else (b, a)
            k1, k2 = self._edge_pos[key]
            lengths2[k1] = l_new
            lengths2[k2] = l_new
            return self.indptr, self.indices, lengths2, -1, -1, 0.0
        return self.indptr, self.indices, self.lengths, a, b, l_new

    # -- cached per-source data ----------------------------------------------

    def dist_from(self, s: int) -> np.ndarray:
        if self._D is not None:
            return self._D[s]
        with self._lock:
            arr = self._dist_cache.get(s)
        if arr is None:
            arr = _sssp_dist(self.indptr, self.indices, self.lengths, s, -1, -1, 0.0)
            with self._lock:
                if len(self._dist_cache) < self._cache_cap:
                    self._dist_cache[s] = arr
        return arr

    def contrib_from(self, s: int) -> np.ndarray:
        with self._lock:
            arr = self._contrib_cache.get(s)
        if arr is None:
            arr = _source_dependency(self.indptr, self.indices, self.lengths, s, -1, -1, 0.0)
            with self._lock:
                if len(self._contrib_cache) < self._cache_cap:
                    self._contrib_cache[s] = arr
        return arr

    def sssp_with_paths(self, s: int):
        """(dist, sigma, pred_start, pred_flat, pred_count) from source s."""
        dist, sigma, _, _, ps, pf, pc = _sssp(self.indptr, self.indices, self.lengths, s, -1, -1, 0.0)
        return dist, sigma, ps, pf, pc

    # -- incremental probes ----------------------------------------------------

    def affected_sources(self, a: int, b: int, new_weight: int) -> np.ndarray:
        """Sources whose shortest-path DAG may change when {a,b} is set to
        new_weight. Over-inclusion is harmless; the test is monotone in edge
        length so probing at the shorter of old/new length covers both."""
        w_old = self.net.weight(a, b)
        l_new = self.transform.length(new_weight)
        l_old = self.transform.length(w_old) if w_old > 0 else np.inf
        lmin = min(l_old, l_new)
        da = self.dist_from(a)
        db = self.dist_from(b)
        hit = (da + lmin <= db + AFFECT_REL_TOL * np.maximum(1.0, db)) | (
            db + lmin <= da + AFFECT_REL_TOL * np.maximum(1.0, da)
        )
        hit &= np.isfinite(da) | np.isfinite(db)
        hit[0] = False
        return np.nonzero(hit)[0]

    def probe_edit(self, a: int, b: int, new_weight: int) -> np.ndarray:
        """Ordered scores of the graph with edge {a,b} set to new_weight >= 1.

        Only the affected sources are recomputed; the rest of the baseline
        accumulation is reused unchanged.
        """
        if new_weight < 1:
            raise ValueError("probe_edit requires new_weight >= 1")
        base = self.ordered_scores()
        sources = self.affected_sources(a, b, new_weight)
        if sources.size == 0:
            return base.copy()
        indptr2, indices2, lengths2, xa, xb, xlen = self._edited_csr(a, b, new_weight)
        bc = base.copy()
        for s in sources:
            s = int(s)
            bc -= self.contrib_from(s)
            bc += _source_dependency(indptr2, indices2, lengths2, s, xa, xb, xlen)
        return bc


def warm_up_kernels() -> None:
    """Force numba compilation on a 2-node graph (cached across processes)."""
    indptr = np.array([0, 0, 1, 2], dtype=np.int64)
    indices = np.array([2, 1], dtype=np.int64)
    lengths = np.array([1.0, 1.0])
    _source_dependency(indptr, indices, lengths, 1, -1, -1, 0.0)
    _sssp_dist(indptr, indices, lengths, 1, -1, -1, 0.0)
