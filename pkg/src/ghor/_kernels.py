"""Hot loops: exact cover, strong connectivity, cycle walks, membership.

Every kernel is written in the subset of Python that numba compiles.  With
``GHOR_NO_JIT=1`` in the environment the very same functions run as plain
numpy code, which is what the benchmark compares against.
"""

from __future__ import annotations

import os

import numpy as np

JIT_DISABLED = os.environ.get("GHOR_NO_JIT", "").strip().lower() not in ("", "0", "false", "no")

if JIT_DISABLED:
    HAVE_NUMBA = False
else:
    # the bundled TBB is often too old; OpenMP or the builtin queue are fine
    os.environ.setdefault("NUMBA_THREADING_LAYER", "omp")
    try:
        import numba
        HAVE_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        HAVE_NUMBA = False

if HAVE_NUMBA:
    njit = numba.njit(cache=True, nogil=True)
    njit_par = numba.njit(cache=True, nogil=True, parallel=True)
    prange = numba.prange
else:
    def njit(f):
        return f

    njit_par = njit
    prange = range


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"


def set_threads(n: int | None) -> None:
    if HAVE_NUMBA and n:
        numba.set_num_threads(max(1, min(int(n), numba.config.NUMBA_NUM_THREADS)))


def threads_from_env() -> int | None:
    raw = os.environ.get("GHOR_THREADS", "").strip()
    if not raw:
        return None
    try:
        return max(1, int(raw))
    except ValueError:
        return None


set_threads(threads_from_env())


# exact cover -----------------------------------------------------------------

@njit
def exact_cover(face_ptr, face_arrows, arrow_faces, n_faces, n_arrows, limit):
    """All arrow sets meeting every face exactly once.

    Depth-first over faces, always branching on the uncovered face with the
    fewest usable arrows.  Returns a (count, n_arrows) uint8 matrix.
    """
    cap = 64
    out = np.zeros((cap, n_arrows), dtype=np.uint8)
    count = 0
    covered = np.zeros(n_faces, dtype=np.uint8)
    chosen = np.zeros(n_faces + 1, dtype=np.int64)
    lvl_face = np.zeros(n_faces + 1, dtype=np.int64)
    lvl_pos = np.zeros(n_faces + 1, dtype=np.int64)
    depth = 0
    need_pick = True
    while True:
        if need_pick:
            best = -1
            best_n = 1 << 30
            for f in range(n_faces):
                if covered[f]:
                    continue
                c = 0
                for j in range(face_ptr[f], face_ptr[f + 1]):
                    a = face_arrows[j]
                    f0 = arrow_faces[a, 0]
                    f1 = arrow_faces[a, 1]
                    if f0 != f1 and covered[f0] == 0 and covered[f1] == 0:
                        c += 1
                if c < best_n:
                    best_n = c
                    best = f
                    if c == 0:
                        break
            if best == -1:
                # every face covered: record the matching
                if count == cap:
                    bigger = np.zeros((cap * 2, n_arrows), dtype=np.uint8)
                    bigger[:cap] = out
                    out = bigger
                    cap *= 2
                for d in range(depth):
                    out[count, chosen[d]] = 1
                count += 1
                if limit > 0 and count >= limit:
                    return out[:count]
                if depth == 0:
                    return out[:count]
                depth -= 1
                a = chosen[depth]
                covered[arrow_faces[a, 0]] = 0
                covered[arrow_faces[a, 1]] = 0
                need_pick = False
            else:
                lvl_face[depth] = best
                lvl_pos[depth] = face_ptr[best]
                need_pick = False
                if best_n == 0:
                    # dead end, fall through to backtrack
                    lvl_pos[depth] = face_ptr[best + 1]
        # advance at current depth
        f = lvl_face[depth]
        advanced = False
        while lvl_pos[depth] < face_ptr[f + 1]:
            a = face_arrows[lvl_pos[depth]]
            lvl_pos[depth] += 1
            f0 = arrow_faces[a, 0]
            f1 = arrow_faces[a, 1]
            if f0 != f1 and covered[f0] == 0 and covered[f1] == 0:
                covered[f0] = 1
                covered[f1] = 1
                chosen[depth] = a
                depth += 1
                advanced = True
                break
        if advanced:
            need_pick = True
            continue
        if depth == 0:
            return out[:count]
        depth -= 1
        a = chosen[depth]
        covered[arrow_faces[a, 0]] = 0
        covered[arrow_faces[a, 1]] = 0


# strong connectivity -----------------------------------------------------------

@njit
def _reach(start, ptr, nbr, arrow_of, removed, n_vertices):
    seen = np.zeros(n_vertices, dtype=np.uint8)
    stack = np.empty(n_vertices, dtype=np.int64)
    seen[start] = 1
    stack[0] = start
    top = 1
    cnt = 1
    while top > 0:
        top -= 1
        v = stack[top]
        for j in range(ptr[v], ptr[v + 1]):
            if removed[arrow_of[j]]:
                continue
            w = nbr[j]
            if seen[w] == 0:
                seen[w] = 1
                stack[top] = w
                top += 1
                cnt += 1
    return cnt


@njit_par
def strongly_connected_batch(tails, heads, n_vertices, removed_rows):
    """For each row of removed arrows, is Q minus those arrows strongly connected?"""
    n_arrows = tails.shape[0]
    fptr = np.zeros(n_vertices + 1, dtype=np.int64)
    bptr = np.zeros(n_vertices + 1, dtype=np.int64)
    for a in range(n_arrows):
        fptr[tails[a] + 1] += 1
        bptr[heads[a] + 1] += 1
    for v in range(n_vertices):
        fptr[v + 1] += fptr[v]
        bptr[v + 1] += bptr[v]
    fn = np.empty(n_arrows, dtype=np.int64)
    fa = np.empty(n_arrows, dtype=np.int64)
    bn = np.empty(n_arrows, dtype=np.int64)
    ba = np.empty(n_arrows, dtype=np.int64)
    fpos = fptr[:-1].copy()
    bpos = bptr[:-1].copy()
    for a in range(n_arrows):
        t = tails[a]
        h = heads[a]
        fn[fpos[t]] = h
        fa[fpos[t]] = a
        fpos[t] += 1
        bn[bpos[h]] = t
        ba[bpos[h]] = a
        bpos[h] += 1
    m = removed_rows.shape[0]
    res = np.zeros(m, dtype=np.uint8)
    for i in prange(m):
        row = removed_rows[i]
        if _reach(0, fptr, fn, fa, row, n_vertices) == n_vertices:
            if _reach(0, bptr, bn, ba, row, n_vertices) == n_vertices:
                res[i] = 1
    return res


# cycle enumeration ---------------------------------------------------------------

@njit
def _is_min_rotation(word, n):
    # word[0] is already the minimal letter; compare against rotations
    for r in range(1, n):
        if word[r] != word[0]:
            continue
        for k in range(n):
            x = word[(r + k) % n]
            y = word[k]
            if x < y:
                return False
            if x > y:
                break
    return True


@njit
def canonical_cycles(tails, heads, n_vertices, max_len, limit):
    """Closed walks of length <= max_len, one per rotation class.

    A walk is kept when it is the lexicographically least rotation of itself
    (comparing arrow indices).  Returns (flat arrow array, offsets).
    """
    n_arrows = tails.shape[0]
    ptr = np.zeros(n_vertices + 1, dtype=np.int64)
    for a in range(n_arrows):
        ptr[tails[a] + 1] += 1
    for v in range(n_vertices):
        ptr[v + 1] += ptr[v]
    outs = np.empty(n_arrows, dtype=np.int64)
    pos = ptr[:-1].copy()
    for a in range(n_arrows):
        outs[pos[tails[a]]] = a
        pos[tails[a]] += 1

    cap = 1024
    flat = np.empty(cap, dtype=np.int64)
    offs = np.zeros(1, dtype=np.int64)
    offs_cap = 256
    offs = np.zeros(offs_cap, dtype=np.int64)
    n_cyc = 0
    used = 0
    word = np.empty(max_len + 1, dtype=np.int64)
    it = np.empty(max_len + 1, dtype=np.int64)
    for a0 in range(n_arrows):
        start = tails[a0]
        word[0] = a0
        depth = 1
        it[1] = ptr[heads[a0]]
        # check the single arrow
        if heads[a0] == start:
            if n_cyc + 1 >= offs_cap:
                o2 = np.zeros(offs_cap * 2, dtype=np.int64)
                o2[:offs_cap] = offs
                offs = o2
                offs_cap *= 2
            if used + 1 > cap:
                f2 = np.empty(cap * 2, dtype=np.int64)
                f2[:cap] = flat
                flat = f2
                cap *= 2
            flat[used] = a0
            used += 1
            n_cyc += 1
            offs[n_cyc] = used
        if max_len <= 1:
            continue
        while depth >= 1:
            v = heads[word[depth - 1]]
            if it[depth] >= ptr[v + 1] or depth >= max_len:
                depth -= 1
                continue
            a = outs[it[depth]]
            it[depth] += 1
            if a < a0:
                continue
            word[depth] = a
            n = depth + 1
            if heads[a] == start and _is_min_rotation(word, n):
                if n_cyc + 1 >= offs_cap:
                    o2 = np.zeros(offs_cap * 2, dtype=np.int64)
                    o2[:offs_cap] = offs
                    offs = o2
                    offs_cap *= 2
                while used + n > cap:
                    f2 = np.empty(cap * 2, dtype=np.int64)
                    f2[:cap] = flat
                    flat = f2
                    cap *= 2
                for k in range(n):
                    flat[used + k] = word[k]
                used += n
                n_cyc += 1
                offs[n_cyc] = used
                if limit > 0 and n_cyc >= limit:
                    return flat[:used], offs[:n_cyc + 1]
            if n < max_len:
                depth += 1
                it[depth] = ptr[heads[a]]
    return flat[:used], offs[:n_cyc + 1]


# semigroup membership -----------------------------------------------------------

@njit
def member_one(target, gens):
    """Is target a nonnegative integer combination of the rows of gens?

    Generators are tried in row order with the largest count first; each
    count is bounded by componentwise dominance and a branch dies as soon as
    some coordinate can no longer be reached by the generators that remain.
    """
    k, d = gens.shape
    supp = np.zeros((k + 1, d), dtype=np.uint8)
    for j in range(k - 1, -1, -1):
        for i in range(d):
            supp[j, i] = supp[j + 1, i] | (gens[j, i] > 0)
    rem = target.copy()
    for i in range(d):
        if rem[i] < 0:
            return False
    cnt = np.zeros(k, dtype=np.int64)
    j = 0
    enter = True
    while True:
        if enter:
            if j == k:
                done = True
                for i in range(d):
                    if rem[i] != 0:
                        done = False
                        break
                if done:
                    return True
                enter = False
                j -= 1
                continue
            dead = False
            for i in range(d):
                if rem[i] > 0 and supp[j, i] == 0:
                    dead = True
                    break
            if dead:
                enter = False
                j -= 1
                continue
            c = -1
            for i in range(d):
                g = gens[j, i]
                if g > 0:
                    q = rem[i] // g
                    if c < 0 or q < c:
                        c = q
            if c < 0:
                c = 0
            cnt[j] = c
            for i in range(d):
                rem[i] -= c * gens[j, i]
            j += 1
        else:
            if j < 0:
                return False
            if cnt[j] > 0:
                cnt[j] -= 1
                for i in range(d):
                    rem[i] += gens[j, i]
                j += 1
                enter = True
            else:
                j -= 1


@njit_par
def member_batch(targets, gens):
    out = np.zeros(targets.shape[0], dtype=np.uint8)
    for i in prange(targets.shape[0]):
        if member_one(targets[i], gens):
            out[i] = 1
    return out
