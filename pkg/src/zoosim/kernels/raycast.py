"""Primary-ray casting against heightfield columns, boxes and cylinders.

Normative sampling semantics (shared by the scalar numba kernel, the
vectorized numpy fallback and the brute-force test oracle):

  rays      : pinhole; u = (i+0.5)/W*2-1 (right+), v = 1-(j+0.5)/H*2 (up+),
              dir = (F + (u*tan_h)*R + (v*tan_v)*U) * (1/sqrt(dot)) in
              float64 (reciprocal multiply, not division — pixel-exact
              reproduction requires the same rounding).
  boxes     : slab intersection; a hit needs entry t > 0 (camera inside a
              box sees through it).
  cylinders : vertical axis; side via quadratic, caps at z0/z1.
  terrain   : a cell is solid below ground[ix,iy] and, where clearance is
              finite, above ground+clearance. March at t = k*step with
              step = cell_size/4 starting at k=1; on the first solid sample
              bisect 24 times; the refined hi endpoint is the hit.
  winner    : smallest t; processing order boxes (ascending index), then
              cylinders (ascending index), then terrain, each replacing
              only on strict t <; the terrain march is capped at the best
              exact hit.

Normals: box face from the entry slab; cylinder radial or cap; terrain by
nearest face of the hit cell column (top, -x, +x, -y, +y order on ties),
ceiling hits point -z. Pixels with no hit keep t = far and normal (0,0,1).

out_kind: -1 none, 0 terrain, 1 box, 2 cylinder. out_idx: primitive index,
or the flat cell index for terrain hits.
"""

import math

import numpy as np

from . import maybe_njit

BISECT_ITERS = 24
KIND_NONE = -1
KIND_TERRAIN = 0
KIND_BOX = 1
KIND_CYL = 2


def _render_scalar_impl(ox, oy, oz, F, R, U, W, H, tan_h, tan_v, far,
                        ground, clearance, cs, has_ceiling, z_top,
                        boxes, cyls, out_t, out_kind, out_idx, out_n):
    nx = ground.shape[0]
    ny = ground.shape[1]
    step = cs * 0.25
    gx_hi = nx * cs
    gy_hi = ny * cs
    nb = boxes.shape[0]
    ne = cyls.shape[0]

    for j in range(H):
        v = 1.0 - (j + 0.5) / H * 2.0
        for i in range(W):
            u = (i + 0.5) / W * 2.0 - 1.0
            dx = F[0] + (u * tan_h) * R[0] + (v * tan_v) * U[0]
            dy = F[1] + (u * tan_h) * R[1] + (v * tan_v) * U[1]
            dz = F[2] + (u * tan_h) * R[2] + (v * tan_v) * U[2]
            inv = 1.0 / math.sqrt(dx * dx + dy * dy + dz * dz)
            dx *= inv
            dy *= inv
            dz *= inv

            best_t = far
            kind = KIND_NONE
            idx = -1
            nxv = 0.0
            nyv = 0.0
            nzv = 1.0

            for b in range(nb):
                x0 = boxes[b, 0]
                x1 = boxes[b, 1]
                y0 = boxes[b, 2]
                y1 = boxes[b, 3]
                z0 = boxes[b, 4]
                z1 = boxes[b, 5]
                tmin = -1e300
                tmax = 1e300
                ax = -1
                sgn = 0.0
                ok = True
                # x slab
                if dx != 0.0:
                    ta = (x0 - ox) / dx
                    tb = (x1 - ox) / dx
                    s = -1.0
                    if ta > tb:
                        ta, tb = tb, ta
                        s = 1.0
                    if ta > tmin:
                        tmin = ta
                        ax = 0
                        sgn = s
                    if tb < tmax:
                        tmax = tb
                elif ox < x0 or ox > x1:
                    ok = False
                if ok and dy != 0.0:
                    ta = (y0 - oy) / dy
                    tb = (y1 - oy) / dy
                    s = -1.0
                    if ta > tb:
                        ta, tb = tb, ta
                        s = 1.0
                    if ta > tmin:
                        tmin = ta
                        ax = 1
                        sgn = s
                    if tb < tmax:
                        tmax = tb
                elif ok and (oy < y0 or oy > y1):
                    ok = False
                if ok and dz != 0.0:
                    ta = (z0 - oz) / dz
                    tb = (z1 - oz) / dz
                    s = -1.0
                    if ta > tb:
                        ta, tb = tb, ta
                        s = 1.0
                    if ta > tmin:
                        tmin = ta
                        ax = 2
                        sgn = s
                    if tb < tmax:
                        tmax = tb
                elif ok and (oz < z0 or oz > z1):
                    ok = False
                if ok and tmin <= tmax and tmin > 0.0 and tmin < best_t and ax >= 0:
                    best_t = tmin
                    kind = KIND_BOX
                    idx = b
                    nxv = 0.0
                    nyv = 0.0
                    nzv = 0.0
                    if ax == 0:
                        nxv = sgn
                    elif ax == 1:
                        nyv = sgn
                    else:
                        nzv = sgn

            for e in range(ne):
                cx = cyls[e, 0]
                cy = cyls[e, 1]
                z0 = cyls[e, 2]
                z1 = cyls[e, 3]
                r = cyls[e, 4]
                fx = ox - cx
                fy = oy - cy
                a = dx * dx + dy * dy
                t_hit = -1.0
                n0 = 0.0
                n1 = 0.0
                n2 = 0.0
                if a > 0.0:
                    bq = fx * dx + fy * dy
                    cq = fx * fx + fy * fy - r * r
                    disc = bq * bq - a * cq
                    if disc >= 0.0:
                        sq = math.sqrt(disc)
                        t1 = (-bq - sq) / a
                        if t1 > 0.0:
                            zz = oz + t1 * dz
                            if z0 <= zz <= z1:
                                t_hit = t1
                                n0 = (ox + t1 * dx - cx) / r
                                n1 = (oy + t1 * dy - cy) / r
                                n2 = 0.0
                if dz != 0.0:
                    for cap in range(2):
                        zc = z1 if cap == 0 else z0
                        tc = (zc - oz) / dz
                        if tc > 0.0 and (t_hit < 0.0 or tc < t_hit):
                            px = ox + tc * dx - cx
                            py = oy + tc * dy - cy
                            if px * px + py * py <= r * r:
                                t_hit = tc
                                n0 = 0.0
                                n1 = 0.0
                                n2 = 1.0 if cap == 0 else -1.0
                if t_hit > 0.0 and t_hit < best_t:
                    best_t = t_hit
                    kind = KIND_CYL
                    idx = e
                    nxv = n0
                    nyv = n1
                    nzv = n2

            # terrain march, capped by the current best exact hit
            t_cap = best_t
            k = 1
            hit_lo = -1.0
            hit_hi = -1.0
            while True:
                t = k * step
                if t > t_cap:
                    break
                px = ox + t * dx
                py = oy + t * dy
                pz = oz + t * dz
                if not has_ceiling and dz >= 0.0 and pz > z_top:
                    break
                if (px < 0.0 and dx <= 0.0) or (px > gx_hi and dx >= 0.0):
                    break
                if (py < 0.0 and dy <= 0.0) or (py > gy_hi and dy >= 0.0):
                    break
                solid = False
                if 0.0 <= px < gx_hi and 0.0 <= py < gy_hi:
                    ix = int(px / cs)
                    iy = int(py / cs)
                    if ix >= nx:
                        ix = nx - 1
                    if iy >= ny:
                        iy = ny - 1
                    g = ground[ix, iy]
                    if pz < g:
                        solid = True
                    else:
                        c = clearance[ix, iy]
                        if np.isfinite(c) and pz > g + c:
                            solid = True
                if solid:
                    hit_lo = (k - 1) * step
                    hit_hi = t
                    break
                k += 1

            if hit_hi > 0.0:
                lo = hit_lo
                hi = hit_hi
                for _ in range(BISECT_ITERS):
                    mid = 0.5 * (lo + hi)
                    px = ox + mid * dx
                    py = oy + mid * dy
                    pz = oz + mid * dz
                    solid = False
                    if 0.0 <= px < gx_hi and 0.0 <= py < gy_hi:
                        ix = int(px / cs)
                        iy = int(py / cs)
                        if ix >= nx:
                            ix = nx - 1
                        if iy >= ny:
                            iy = ny - 1
                        g = ground[ix, iy]
                        if pz < g:
                            solid = True
                        else:
                            c = clearance[ix, iy]
                            if np.isfinite(c) and pz > g + c:
                                solid = True
                    if solid:
                        hi = mid
                    else:
                        lo = mid
                if hi < best_t:
                    best_t = hi
                    kind = KIND_TERRAIN
                    px = ox + hi * dx
                    py = oy + hi * dy
                    pz = oz + hi * dz
                    ix = int(px / cs)
                    iy = int(py / cs)
                    if ix < 0:
                        ix = 0
                    if iy < 0:
                        iy = 0
                    if ix >= nx:
                        ix = nx - 1
                    if iy >= ny:
                        iy = ny - 1
                    idx = ix * ny + iy
                    g = ground[ix, iy]
                    c = clearance[ix, iy]
                    if np.isfinite(c) and pz > g + c * 0.5 and pz > g:
                        # ceiling face
                        nxv = 0.0
                        nyv = 0.0
                        nzv = -1.0
                    else:
                        d_top = g - pz
                        if d_top < 0.0:
                            d_top = 0.0
                        d_xlo = px - ix * cs
                        d_xhi = (ix + 1) * cs - px
                        d_ylo = py - iy * cs
                        d_yhi = (iy + 1) * cs - py
                        best_d = d_top
                        face = 0
                        if d_xlo < best_d:
                            best_d = d_xlo
                            face = 1
                        if d_xhi < best_d:
                            best_d = d_xhi
                            face = 2
                        if d_ylo < best_d:
                            best_d = d_ylo
                            face = 3
                        if d_yhi < best_d:
                            best_d = d_yhi
                            face = 4
                        nxv = 0.0
                        nyv = 0.0
                        nzv = 0.0
                        if face == 0:
                            nzv = 1.0
                        elif face == 1:
                            nxv = -1.0
                        elif face == 2:
                            nxv = 1.0
                        elif face == 3:
                            nyv = -1.0
                        else:
                            nyv = 1.0

            out_t[j, i] = best_t
            out_kind[j, i] = kind
            out_idx[j, i] = idx
            out_n[j, i, 0] = nxv
            out_n[j, i, 1] = nyv
            out_n[j, i, 2] = nzv


render_scalar = maybe_njit(_render_scalar_impl)


def render_vectorized(ox, oy, oz, F, R, U, W, H, tan_h, tan_v, far,
                      ground, clearance, cs, has_ceiling, z_top,
                      boxes, cyls, out_t, out_kind, out_idx, out_n):
    """Pure-numpy fallback; mirrors _render_scalar_impl op-for-op."""
    nx, ny = ground.shape
    step = cs * 0.25
    gx_hi = nx * cs
    gy_hi = ny * cs

    jj, ii = np.meshgrid(np.arange(H), np.arange(W), indexing="ij")
    v = 1.0 - (jj + 0.5) / H * 2.0
    u = (ii + 0.5) / W * 2.0 - 1.0
    dx = F[0] + (u * tan_h) * R[0] + (v * tan_v) * U[0]
    dy = F[1] + (u * tan_h) * R[1] + (v * tan_v) * U[1]
    dz = F[2] + (u * tan_h) * R[2] + (v * tan_v) * U[2]
    inv = 1.0 / np.sqrt(dx * dx + dy * dy + dz * dz)
    dx = dx * inv
    dy = dy * inv
    dz = dz * inv

    best_t = np.full((H, W), far)
    kind = np.full((H, W), KIND_NONE, dtype=np.int16)
    idx = np.full((H, W), -1, dtype=np.int64)
    nrm = np.zeros((H, W, 3))
    nrm[:, :, 2] = 1.0

    with np.errstate(divide="ignore", invalid="ignore"):
        for b in range(boxes.shape[0]):
            x0, x1, y0, y1, z0, z1 = boxes[b]
            tmin = np.full((H, W), -1e300)
            tmax = np.full((H, W), 1e300)
            axis = np.full((H, W), -1, dtype=np.int8)
            sgn = np.zeros((H, W))
            ok = np.ones((H, W), dtype=bool)
            for a_i, (d, o, lo, hi) in enumerate(
                    ((dx, ox, x0, x1), (dy, oy, y0, y1), (dz, oz, z0, z1))):
                nz_ = d != 0.0
                ta = np.where(nz_, (lo - o) / np.where(nz_, d, 1.0), 0.0)
                tb = np.where(nz_, (hi - o) / np.where(nz_, d, 1.0), 0.0)
                s = np.where(ta > tb, 1.0, -1.0)
                ta2 = np.minimum(ta, tb)
                tb2 = np.maximum(ta, tb)
                upd = nz_ & (ta2 > tmin)
                tmin = np.where(upd, ta2, tmin)
                axis = np.where(upd, a_i, axis)
                sgn = np.where(upd, s, sgn)
                tmax = np.where(nz_ & (tb2 < tmax), tb2, tmax)
                ok &= nz_ | ((o >= lo) & (o <= hi))
            hit = ok & (tmin <= tmax) & (tmin > 0.0) & (tmin < best_t) & (axis >= 0)
            best_t = np.where(hit, tmin, best_t)
            kind = np.where(hit, KIND_BOX, kind)
            idx = np.where(hit, b, idx)
            for a_i in range(3):
                comp = np.where(axis == a_i, sgn, 0.0)
                nrm[:, :, a_i] = np.where(hit, comp, nrm[:, :, a_i])

        for e in range(cyls.shape[0]):
            cx, cy, z0, z1, r = cyls[e]
            fx = ox - cx
            fy = oy - cy
            a = dx * dx + dy * dy
            t_hit = np.full((H, W), -1.0)
            n0 = np.zeros((H, W))
            n1 = np.zeros((H, W))
            n2 = np.zeros((H, W))
            apos = a > 0.0
            bq = fx * dx + fy * dy
            cq = fx * fx + fy * fy - r * r
            disc = bq * bq - a * cq
            dpos = apos & (disc >= 0.0)
            sq = np.sqrt(np.where(dpos, disc, 0.0))
            a_safe = np.where(apos, a, 1.0)
            t1 = (-bq - sq) / a_safe
            zz = oz + t1 * dz
            side = dpos & (t1 > 0.0) & (z0 <= zz) & (zz <= z1)
            t_hit = np.where(side, t1, t_hit)
            n0 = np.where(side, (ox + t1 * dx - cx) / r, n0)
            n1 = np.where(side, (oy + t1 * dy - cy) / r, n1)
            dznz = dz != 0.0
            for cap in range(2):
                zc = z1 if cap == 0 else z0
                tc = np.where(dznz, (zc - oz) / np.where(dznz, dz, 1.0), -1.0)
                px = ox + tc * dx - cx
                py = oy + tc * dy - cy
                ch = dznz & (tc > 0.0) & ((t_hit < 0.0) | (tc < t_hit)) & \
                    (px * px + py * py <= r * r)
                t_hit = np.where(ch, tc, t_hit)
                n0 = np.where(ch, 0.0, n0)
                n1 = np.where(ch, 0.0, n1)
                n2 = np.where(ch, 1.0 if cap == 0 else -1.0, n2)
            hit = (t_hit > 0.0) & (t_hit < best_t)
            best_t = np.where(hit, t_hit, best_t)
            kind = np.where(hit, KIND_CYL, kind)
            idx = np.where(hit, e, idx)
            nrm[:, :, 0] = np.where(hit, n0, nrm[:, :, 0])
            nrm[:, :, 1] = np.where(hit, n1, nrm[:, :, 1])
            nrm[:, :, 2] = np.where(hit, n2, nrm[:, :, 2])

    # terrain march
    def solid_at(t):
        px = ox + t * dx
        py = oy + t * dy
        pz = oz + t * dz
        inb = (px >= 0.0) & (px < gx_hi) & (py >= 0.0) & (py < gy_hi)
        ix = np.clip((px / cs).astype(np.int64), 0, nx - 1)
        iy = np.clip((py / cs).astype(np.int64), 0, ny - 1)
        g = ground[ix, iy]
        c = clearance[ix, iy]
        return inb & ((pz < g) | (np.isfinite(c) & (pz > g + c))), px, py, pz

    active = np.ones((H, W), dtype=bool)
    hit_k = np.zeros((H, W), dtype=np.int64)
    k = 1
    while active.any():
        t = k * step
        t_arr = np.full((H, W), t)
        active &= t_arr <= best_t
        solid, px, py, pz = solid_at(t_arr)
        if not has_ceiling:
            active &= ~((dz >= 0.0) & (pz > z_top))
        active &= ~(((px < 0.0) & (dx <= 0.0)) | ((px > gx_hi) & (dx >= 0.0)))
        active &= ~(((py < 0.0) & (dy <= 0.0)) | ((py > gy_hi) & (dy >= 0.0)))
        newly = active & solid
        hit_k = np.where(newly, k, hit_k)
        active &= ~solid
        k += 1

    marched = hit_k > 0
    if marched.any():
        # (k-1)*step / k*step exactly as the scalar path computes them
        lo = (hit_k - 1) * step
        hi = hit_k * step
        for _ in range(BISECT_ITERS):
            mid = 0.5 * (lo + hi)
            solid, _, _, _ = solid_at(mid)
            hi = np.where(marched & solid, mid, hi)
            lo = np.where(marched & ~solid, mid, lo)
        tw = marched & (hi < best_t)
        best_t = np.where(tw, hi, best_t)
        kind = np.where(tw, KIND_TERRAIN, kind)
        px = ox + hi * dx
        py = oy + hi * dy
        pz = oz + hi * dz
        ix = np.clip((px / cs).astype(np.int64), 0, nx - 1)
        iy = np.clip((py / cs).astype(np.int64), 0, ny - 1)
        idx = np.where(tw, ix * ny + iy, idx)
        g = ground[ix, iy]
        c = clearance[ix, iy]
        ceilhit = np.isfinite(c) & (pz > g + c * 0.5) & (pz > g)
        d_top = np.maximum(g - pz, 0.0)
        d_xlo = px - ix * cs
        d_xhi = (ix + 1) * cs - px
        d_ylo = py - iy * cs
        d_yhi = (iy + 1) * cs - py
        stack = np.stack([d_top, d_xlo, d_xhi, d_ylo, d_yhi])
        face = np.argmin(stack, axis=0)
        face_n = np.array([[0.0, 0.0, 1.0], [-1.0, 0.0, 0.0], [1.0, 0.0, 0.0],
                           [0.0, -1.0, 0.0], [0.0, 1.0, 0.0]])
        fn = face_n[face]
        ceil_n = np.array([0.0, 0.0, -1.0])
        tn = np.where(ceilhit[..., None], ceil_n, fn)
        nrm = np.where(tw[..., None], tn, nrm)

    out_t[:] = best_t
    out_kind[:] = kind.astype(out_kind.dtype)
    out_idx[:] = idx
    out_n[:] = nrm
