"""Pure-Python/numpy implementations of the hot kernels.

Same signatures and results as the compiled ``_ckernels`` module.  Translation
of element ``x`` by offset row ``o`` is ``proj[((rep[x] + o) % moduli) @ strides]``.
"""
import numpy as np

BACKEND = "python"


def _translate(rep, o, moduli, strides, proj, xs):
    return proj[((rep[xs] + o) % moduli) @ strides]


def successor_table(fmap, rep, off, moduli, strides, proj):
    n = len(fmap)
    succ = np.empty((n, len(off)), dtype=np.int64)
    for j in range(len(off)):
        succ[:, j] = _translate(rep, off[j], moduli, strides, proj, fmap)
    return succ


def strongly_connected(fmap, rep, off, moduli, strides, proj):
    """Tarjan SCC on the graph ``x -> fmap[x] + off[j]``.

    Returns ``(labels, cyclic)``: component id per node (in order of
    completion) and, per component, whether it carries an edge.
    """
    succ = successor_table(fmap, rep, off, moduli, strides, proj).tolist()
    n = len(succ)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    labels = [-1] * n
    cyclic = []
    stack = []
    counter = 0
    for root in range(n):
        if index[root] >= 0:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, pos = work[-1]
            nbrs = succ[v]
            if pos < len(nbrs):
                work[-1] = (v, pos + 1)
                w = nbrs[pos]
                if index[w] < 0:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == index[v]:
                comp = len(cyclic)
                size = 0
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    labels[w] = comp
                    size += 1
                    if w == v:
                        break
                cyclic.append(size > 1 or v in nbrs)
    return np.asarray(labels, dtype=np.int64), np.asarray(cyclic, dtype=np.uint8)


def greedy_separated(rep, off, moduli, strides, proj, candidates, seeds):
    """Lexicographic greedy maximal independent set, extending ``seeds``.

    Two elements conflict when their difference lies in the offset set.
    """
    blocked = np.zeros(len(rep), dtype=bool)
    chosen = []
    for s in np.asarray(seeds, dtype=np.int64).tolist():
        chosen.append(s)
        blocked[_translate(rep, off, moduli, strides, proj, s)] = True
    for x in np.asarray(candidates, dtype=np.int64).tolist():
        if blocked[x]:
            continue
        chosen.append(x)
        blocked[_translate(rep, off, moduli, strides, proj, x)] = True
    return np.sort(np.asarray(chosen, dtype=np.int64))


def greedy_cover(rep, off, moduli, strides, proj, candidates):
    """Greedy set cover of ``candidates`` by translates ``a + off`` with ``a`` a candidate.

    Ties go to the smallest index.  Returns centers in selection order.
    """
    size = len(rep)
    cand = np.asarray(candidates, dtype=np.int64)
    in_k = np.zeros(size, dtype=bool)
    in_k[cand] = True
    gain = np.full(size, -1, dtype=np.int64)
    gain[cand] = 0
    for j in range(len(off)):
        y = _translate(rep, off[j], moduli, strides, proj, cand)
        gain[cand] += in_k[y]
    covered = np.zeros(size, dtype=bool)
    remaining = len(cand)
    centers = []
    while remaining:
        a = int(np.argmax(gain))
        centers.append(a)
        ball = _translate(rep, off, moduli, strides, proj, a)
        fresh = np.unique(ball[in_k[ball] & ~covered[ball]])
        covered[fresh] = True
        remaining -= len(fresh)
        for j in range(len(off)):
            nb = _translate(rep, off[j], moduli, strides, proj, fresh)
            np.subtract.at(gain, nb[in_k[nb]], 1)
    return np.asarray(centers, dtype=np.int64)
