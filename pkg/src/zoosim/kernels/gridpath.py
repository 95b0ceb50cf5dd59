"""Weighted 4-connected grid Dijkstra.

One source function, executed either numba-compiled or as plain Python over
the same numpy arrays (ZOOSIM_BACKEND). Tie-breaking is part of the
contract: candidates compare by (cost, off-priority-cells, hops, flat cell
index), neighbors are relaxed in ascending flat-index order (-ny, -1, +1,
+ny). A step onto cell b costs mult[b] * cell_size; an edge exists when
mult[b] is finite and |elev[b] - elev[a]| <= step_h, or either endpoint is
climbable and climbing is allowed for the planner group.
"""

import numpy as np

from . import maybe_njit

UNREACHED = np.inf


def _dijkstra_impl(mult, offpref, elev, climb, ny, cell_size, step_h,
                   allow_climb, src):
    n = mult.shape[0]
    big = np.int64(2) ** 62
    dist = np.full(n, np.inf)
    offp = np.full(n, big, dtype=np.int64)
    hops = np.full(n, big, dtype=np.int64)
    parent = np.full(n, -1, dtype=np.int64)
    done = np.zeros(n, dtype=np.uint8)

    cap = 8 * n + 16
    hc = np.empty(cap)
    ho = np.empty(cap, dtype=np.int64)
    hh = np.empty(cap, dtype=np.int64)
    hn = np.empty(cap, dtype=np.int64)
    size = 0

    dist[src] = 0.0
    offp[src] = 0
    hops[src] = 0
    hc[0] = 0.0
    ho[0] = 0
    hh[0] = 0
    hn[0] = src
    size = 1

    while size > 0:
        # pop min
        c = hc[0]
        o = ho[0]
        h = hh[0]
        node = hn[0]
        size -= 1
        hc[0] = hc[size]
        ho[0] = ho[size]
        hh[0] = hh[size]
        hn[0] = hn[size]
        i = 0
        while True:
            l = 2 * i + 1
            r = l + 1
            m = i
            if l < size and (hc[l] < hc[m] or (hc[l] == hc[m] and (
                    ho[l] < ho[m] or (ho[l] == ho[m] and (
                        hh[l] < hh[m] or (hh[l] == hh[m] and hn[l] < hn[m])))))):
                m = l
            if r < size and (hc[r] < hc[m] or (hc[r] == hc[m] and (
                    ho[r] < ho[m] or (ho[r] == ho[m] and (
                        hh[r] < hh[m] or (hh[r] == hh[m] and hn[r] < hn[m])))))):
                m = r
            if m == i:
                break
            hc[i], hc[m] = hc[m], hc[i]
            ho[i], ho[m] = ho[m], ho[i]
            hh[i], hh[m] = hh[m], hh[i]
            hn[i], hn[m] = hn[m], hn[i]
            i = m

        if done[node]:
            continue
        if c > dist[node] or (c == dist[node] and (o > offp[node] or (
                o == offp[node] and h > hops[node]))):
            continue
        done[node] = 1

        iy = node % ny
        for k in range(4):
            if k == 0:
                nb = node - ny
                if nb < 0:
                    continue
            elif k == 1:
                if iy == 0:
                    continue
                nb = node - 1
            elif k == 2:
                if iy == ny - 1:
                    continue
                nb = node + 1
            else:
                nb = node + ny
                if nb >= n:
                    continue
            if done[nb]:
                continue
            m_nb = mult[nb]
            if not np.isfinite(m_nb):
                continue
            dz = elev[nb] - elev[node]
            if dz < 0.0:
                dz = -dz
            if dz > step_h and not (allow_climb and
                                    (climb[nb] != 0 or climb[node] != 0)):
                continue
            nc = dist[node] + m_nb * cell_size
            no = offp[node] + offpref[nb]
            nh = hops[node] + 1
            better = False
            if nc < dist[nb]:
                better = True
            elif nc == dist[nb]:
                if no < offp[nb]:
                    better = True
                elif no == offp[nb] and nh < hops[nb]:
                    better = True
            if better:
                dist[nb] = nc
                offp[nb] = no
                hops[nb] = nh
                parent[nb] = node
                hc[size] = nc
                ho[size] = no
                hh[size] = nh
                hn[size] = nb
                j = size
                size += 1
                while j > 0:
                    p = (j - 1) // 2
                    if hc[j] < hc[p] or (hc[j] == hc[p] and (
                            ho[j] < ho[p] or (ho[j] == ho[p] and (
                                hh[j] < hh[p] or (hh[j] == hh[p] and hn[j] < hn[p]))))):
                        hc[j], hc[p] = hc[p], hc[j]
                        ho[j], ho[p] = ho[p], ho[j]
                        hh[j], hh[p] = hh[p], hh[j]
                        hn[j], hn[p] = hn[p], hn[j]
                        j = p
                    else:
                        break

    return dist, hops, parent


dijkstra_grid = maybe_njit(_dijkstra_impl)
dijkstra_grid_py = _dijkstra_impl
