"""Random dimer quivers from pairs of permutations, for oracle tests.

Arrows are 0..n-1; the black faces are the cycles of one permutation, the
white faces the cycles of another, and the head of an arrow is the cycle of
white^-1 o black containing it.  Any such pair is an embedded dimer quiver on
some closed surface; the geometry is irrelevant for matching counts.
"""

import random

from ghor.quiver import Arrow, DimerQuiver, Face
from ghor.surface import make_polygon


def _cycles(p):
    seen = set()
    out = []
    for i in range(len(p)):
        if i in seen:
            continue
        c = []
        j = i
        while j not in seen:
            seen.add(j)
            c.append(j)
            j = p[j]
        out.append(c)
    return out


def random_quiver(rng: random.Random, n: int) -> DimerQuiver:
    while True:
        black = list(range(n))
        white = list(range(n))
        rng.shuffle(black)
        rng.shuffle(white)
        if any(black[i] == i or white[i] == i for i in range(n)):
            continue
        break
    winv = [0] * n
    for i, j in enumerate(white):
        winv[j] = i
    pi = [winv[black[a]] for a in range(n)]
    head = {}
    for k, c in enumerate(_cycles(pi)):
        for a in c:
            head[a] = f"v{k}"
    binv = [0] * n
    for i, j in enumerate(black):
        binv[j] = i
    arrows = [Arrow(f"a{a}", head[binv[a]], head[a]) for a in range(n)]
    faces = [Face(f"b{k}", tuple(f"a{a}" for a in c)) for k, c in enumerate(_cycles(black))]
    faces += [Face(f"w{k}", tuple(f"a{a}" for a in c)) for k, c in enumerate(_cycles(white))]
    verts = sorted({a.tail for a in arrows} | {a.head for a in arrows}, key=lambda s: int(s[1:]))
    return DimerQuiver(make_polygon(2), verts, arrows, faces)
