import random

from stabglue import oracle
from stabglue.linalg import QQ, Mat, det, inverse
from stabglue.quiverrep import Rep


def random_invertible(field, n, rnd):
    while True:
        m = Mat.from_rows(field, [[rnd.randint(-2, 2) for _ in range(n)] for _ in range(n)], n)
        if n == 0 or det(m) != 0:
            return m


def conjugate(m: Rep, rnd) -> Rep:
    """An isomorphic copy of m in a random basis."""
    ts = [random_invertible(m.field, d, rnd) for d in m.dims]
    arrows = []
    for (s, t), a in zip(m.quiver.arrows, m.arrows):
        ti = ts[s] if m.dims[s] == 0 else inverse(ts[s])
        arrows.append(ts[t] @ a @ ti)
    return Rep(m.quiver, m.dims, arrows, m.field)


def universe(qname, max_dim, field=QQ):
    return oracle.rep_universe(qname, field, max_dim)


def rng(seed):
    return random.Random(seed)
