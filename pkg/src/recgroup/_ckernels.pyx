# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_pykernels`` for the reference semantics."""
import numpy as np
cimport numpy as cnp

ctypedef cnp.int64_t i64

BACKEND = "cython"


cdef inline i64 translate(const i64[:, ::1] rep, const i64[:, ::1] off, const i64[::1] moduli,
                          const i64[::1] strides, const i64[::1] proj, i64 x, Py_ssize_t j) noexcept nogil:
    cdef Py_ssize_t i
    cdef i64 c, idx = 0
    for i in range(rep.shape[1]):
        c = (rep[x, i] + off[j, i]) % moduli[i]
        if c < 0:
            c += moduli[i]
        idx += c * strides[i]
    return proj[idx]


def successor_table(fmap, rep, off, moduli, strides, proj):
    cdef const i64[::1] f = np.ascontiguousarray(fmap, dtype=np.int64)
    cdef const i64[:, ::1] r = np.ascontiguousarray(rep, dtype=np.int64)
    cdef const i64[:, ::1] o = np.ascontiguousarray(off, dtype=np.int64).reshape(-1, r.shape[1])
    cdef const i64[::1] m = np.ascontiguousarray(moduli, dtype=np.int64)
    cdef const i64[::1] s = np.ascontiguousarray(strides, dtype=np.int64)
    cdef const i64[::1] p = np.ascontiguousarray(proj, dtype=np.int64)
    cdef Py_ssize_t n = f.shape[0], b = o.shape[0], x, j
    out = np.empty((n, b), dtype=np.int64)
    cdef i64[:, ::1] succ = out
    with nogil:
        for x in range(n):
            for j in range(b):
                succ[x, j] = translate(r, o, m, s, p, f[x], j)
    return out


def strongly_connected(fmap, rep, off, moduli, strides, proj):
    """Iterative Tarjan on ``x -> fmap[x] + off[j]``, successors generated on the fly."""
    cdef const i64[::1] f = np.ascontiguousarray(fmap, dtype=np.int64)
    cdef const i64[:, ::1] r = np.ascontiguousarray(rep, dtype=np.int64)
    cdef const i64[:, ::1] o = np.ascontiguousarray(off, dtype=np.int64).reshape(-1, r.shape[1])
    cdef const i64[::1] m = np.ascontiguousarray(moduli, dtype=np.int64)
    cdef const i64[::1] s = np.ascontiguousarray(strides, dtype=np.int64)
    cdef const i64[::1] p = np.ascontiguousarray(proj, dtype=np.int64)
    cdef Py_ssize_t n = f.shape[0], b = o.shape[0]

    labels_arr = np.full(n, -1, dtype=np.int64)
    cyclic_arr = np.zeros(n, dtype=np.uint8)
    cdef i64[::1] labels = labels_arr
    cdef cnp.uint8_t[::1] cyclic = cyclic_arr
    cdef i64[::1] index = np.full(n, -1, dtype=np.int64)
    cdef i64[::1] low = np.zeros(n, dtype=np.int64)
    cdef cnp.uint8_t[::1] on_stack = np.zeros(n, dtype=np.uint8)
    cdef i64[::1] stack = np.empty(n, dtype=np.int64)
    cdef i64[::1] work_v = np.empty(n, dtype=np.int64)
    cdef i64[::1] work_pos = np.empty(n, dtype=np.int64)

    cdef Py_ssize_t sp = 0, wp = 0, root, j
    cdef i64 counter = 0, ncomp = 0, v, w, u, pos, size
    cdef bint selfloop

    with nogil:
        for root in range(n):
            if index[root] >= 0:
                continue
            index[root] = counter
            low[root] = counter
            counter += 1
            stack[sp] = root
            sp += 1
            on_stack[root] = 1
            work_v[0] = root
            work_pos[0] = 0
            wp = 1
            while wp > 0:
                v = work_v[wp - 1]
                pos = work_pos[wp - 1]
                if pos < b:
                    work_pos[wp - 1] = pos + 1
                    w = translate(r, o, m, s, p, f[v], pos)
                    if index[w] < 0:
                        index[w] = counter
                        low[w] = counter
                        counter += 1
                        stack[sp] = w
                        sp += 1
                        on_stack[w] = 1
                        work_v[wp] = w
                        work_pos[wp] = 0
                        wp += 1
                    elif on_stack[w] and index[w] < low[v]:
                        low[v] = index[w]
                    continue
                wp -= 1
                if wp > 0:
                    u = work_v[wp - 1]
                    if low[v] < low[u]:
                        low[u] = low[v]
                if low[v] == index[v]:
                    size = 0
                    while True:
                        sp -= 1
                        w = stack[sp]
                        on_stack[w] = 0
                        labels[w] = ncomp
                        size += 1
                        if w == v:
                            break
                    selfloop = False
                    if size == 1:
                        for j in range(b):
                            if translate(r, o, m, s, p, f[v], j) == v:
                                selfloop = True
                                break
                    cyclic[ncomp] = 1 if (size > 1 or selfloop) else 0
                    ncomp += 1
    return labels_arr, cyclic_arr[:ncomp].copy()


def greedy_separated(rep, off, moduli, strides, proj, candidates, seeds):
    cdef const i64[:, ::1] r = np.ascontiguousarray(rep, dtype=np.int64)
    cdef const i64[:, ::1] o = np.ascontiguousarray(off, dtype=np.int64).reshape(-1, r.shape[1])
    cdef const i64[::1] m = np.ascontiguousarray(moduli, dtype=np.int64)
    cdef const i64[::1] s = np.ascontiguousarray(strides, dtype=np.int64)
    cdef const i64[::1] p = np.ascontiguousarray(proj, dtype=np.int64)
    cdef const i64[::1] cand = np.ascontiguousarray(candidates, dtype=np.int64)
    cdef const i64[::1] seed = np.ascontiguousarray(seeds, dtype=np.int64)
    cdef Py_ssize_t size = r.shape[0], b = o.shape[0], i, j, nchosen = 0
    cdef cnp.uint8_t[::1] blocked = np.zeros(size, dtype=np.uint8)
    chosen_arr = np.empty(seed.shape[0] + cand.shape[0], dtype=np.int64)
    cdef i64[::1] chosen = chosen_arr
    cdef i64 x
    with nogil:
        for i in range(seed.shape[0]):
            x = seed[i]
            chosen[nchosen] = x
            nchosen += 1
            for j in range(b):
                blocked[translate(r, o, m, s, p, x, j)] = 1
        for i in range(cand.shape[0]):
            x = cand[i]
            if blocked[x]:
                continue
            chosen[nchosen] = x
            nchosen += 1
            for j in range(b):
                blocked[translate(r, o, m, s, p, x, j)] = 1
    return np.sort(chosen_arr[:nchosen])


def greedy_cover(rep, off, moduli, strides, proj, candidates):
    cdef const i64[:, ::1] r = np.ascontiguousarray(rep, dtype=np.int64)
    cdef const i64[:, ::1] o = np.ascontiguousarray(off, dtype=np.int64).reshape(-1, r.shape[1])
    cdef const i64[::1] m = np.ascontiguousarray(moduli, dtype=np.int64)
    cdef const i64[::1] s = np.ascontiguousarray(strides, dtype=np.int64)
    cdef const i64[::1] p = np.ascontiguousarray(proj, dtype=np.int64)
    cdef const i64[::1] cand = np.ascontiguousarray(candidates, dtype=np.int64)
    cdef Py_ssize_t size = r.shape[0], b = o.shape[0], nk = cand.shape[0], i, j, jj
    cdef cnp.uint8_t[::1] in_k = np.zeros(size, dtype=np.uint8)
    cdef cnp.uint8_t[::1] covered = np.zeros(size, dtype=np.uint8)
    cdef i64[::1] gain = np.zeros(size, dtype=np.int64)
    centers_arr = np.empty(nk, dtype=np.int64)
    cdef i64[::1] centers = centers_arr
    cdef Py_ssize_t ncent = 0
    cdef i64 remaining = nk, a, y, z, best
    with nogil:
        for i in range(nk):
            in_k[cand[i]] = 1
        for i in range(nk):
            for j in range(b):
                if in_k[translate(r, o, m, s, p, cand[i], j)]:
                    gain[cand[i]] += 1
        while remaining > 0:
            a = -1
            best = -1
            for i in range(nk):
                if gain[cand[i]] > best or (gain[cand[i]] == best and cand[i] < a):
                    best = gain[cand[i]]
                    a = cand[i]
            centers[ncent] = a
            ncent += 1
            for j in range(b):
                y = translate(r, o, m, s, p, a, j)
                if not in_k[y] or covered[y]:
                    continue
                covered[y] = 1
                remaining -= 1
                for jj in range(b):
                    z = translate(r, o, m, s, p, y, jj)
                    if in_k[z]:
                        gain[z] -= 1
    return centers_arr[:ncent].copy()
