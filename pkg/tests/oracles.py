"""Slow, obviously-correct reference implementations used by the tests."""

import itertools
import random

import numpy as np

from ghor.surface import make_polygon, reduce_word


def brute_perfect(q):
    """Every arrow subset meeting each face exactly once (2^|Q1| sweep)."""
    ids = [a.id for a in q.arrows]
    faces = [set(f.arrows) for f in q.faces]
    out = []
    for bits in itertools.product((0, 1), repeat=len(ids)):
        s = {a for a, b in zip(ids, bits) if b}
        if all(len(f & s) == 1 for f in faces):
            out.append(frozenset(s))
    return sorted(out, key=sorted)


def brute_strong(q, removed):
    adj = {v: set() for v in q.vertices}
    radj = {v: set() for v in q.vertices}
    for a in q.arrows:
        if a.id not in removed:
            adj[a.tail].add(a.head)
            radj[a.head].add(a.tail)

    def reach(g):
        seen = {q.vertices[0]}
        stack = [q.vertices[0]]
        while stack:
            for w in g[stack.pop()] - seen:
                seen.add(w)
                stack.append(w)
        return len(seen) == len(q.vertices)
    return reach(adj) and reach(radj)


def brute_member(target, gens):
    """Dynamic programming over all vectors below target."""
    target = tuple(int(x) for x in target)
    if any(x < 0 for x in target):
        return False
    gens = [tuple(int(x) for x in g) for g in gens if any(g)]
    reach = {tuple(0 for _ in target)}
    frontier = list(reach)
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                w = tuple(a + b for a, b in zip(v, g))
                if all(a <= t for a, t in zip(w, target)) and w not in reach:
                    reach.add(w)
                    nxt.append(w)
        frontier = nxt
    return target in reach


def z2_oracle(w):
    """Torus copy reached by a crossing word: side 1 (3) is right (left), 2 (4) up (down)."""
    x = y = 0
    for c in w:
        k = abs(c)
        s = 1 if c > 0 else -1
        if k in (1, 3):
            x += s if k == 1 else -s
        else:
            y += s if k == 2 else -s
    return x, y


def reduce_word_agrees(n_words=1000, seed=7):
    """reduce_word on the torus is a bijection onto Z^2 copies and idempotent."""
    p = make_polygon(2)
    rng = random.Random(seed)
    seen = {}
    for _ in range(n_words):
        w = tuple(rng.choice([1, 2, 3, 4]) * rng.choice([1, -1])
                  for _ in range(rng.randint(0, 20)))
        r = reduce_word(w, p)
        xy = z2_oracle(w)
        if xy in seen:
            if seen[xy] != r:
                return False
        else:
            if r in seen.values():
                return False
            seen[xy] = r
        if reduce_word(r, p) != r:
            return False
    return True


def random_semigroup_instance(rng, dim=None):
    dim = dim or rng.randint(2, 4)
    k = rng.randint(1, 4)
    gens = [tuple(rng.randint(0, 3) for _ in range(dim)) for _ in range(k)]
    gens = [g for g in gens if any(g)] or [(1,) * dim]
    if rng.random() < 0.5:
        coeffs = [rng.randint(0, 3) for _ in gens]
        target = tuple(int(x) for x in np.array(gens).T @ np.array(coeffs))
    else:
        target = tuple(rng.randint(0, 8) for _ in range(dim))
    return target, gens
