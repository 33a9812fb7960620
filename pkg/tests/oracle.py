"""Independent high-precision reference for Frenet and equiform curvatures.

Uses only mpmath: numerical derivatives of the raw parametrisation,
Lorentzian Gram-Schmidt for t, n, b1, a determinant functional for b2
(oriented so det[t, n, b1, b2] > 0) and numerical derivatives of the frame.
Nothing from the package is imported.  Run as a script to print the values
frozen in the test modules.
"""

import itertools

import mpmath as mp

mp.mp.dps = 40
G = (-1, 1, 1, 1)


def dot(x, y):
    return sum(G[i] * x[i] * y[i] for i in range(4))


def det(rows):
    """Leibniz formula (mpmath's LU det trips on exactly singular input)."""
    total = 0
    for perm in itertools.permutations(range(4)):
        inv = sum(1 for i in range(4) for j in range(i + 1, 4) if perm[i] > perm[j])
        term = -1 if inv % 2 else 1
        for i in range(4):
            term = term * rows[i][perm[i]]
        total += term
    return total


def _unit(x):
    return [c / mp.sqrt(abs(dot(x, x))) for c in x]


def _frame_t(f, t):
    d = [[mp.diff(lambda u: f(u)[i], t, k) for i in range(4)] for k in (1, 2, 3)]
    out = []
    for v in d:
        w = list(v)
        for e in out:
            c = dot(w, e) / dot(e, e)
            w = [w[i] - c * e[i] for i in range(4)]
        out.append(_unit(w))
    # b2: pseudo-dual of the functional x -> det[t, n, b1, x]
    rows = out
    c = []
    for j in range(4):
        ej = [1 if i == j else 0 for i in range(4)]
        c.append(det(rows + [ej]))
    b2 = _unit([G[j] * c[j] for j in range(4)])
    if det(rows + [b2]) < 0:
        b2 = [-x for x in b2]
    return out + [b2]


def speed(f, t):
    v = [mp.diff(lambda u: f(u)[i], t) for i in range(4)]
    return mp.sqrt(abs(dot(v, v)))


def invariants(f, t):
    """(k1, k2, k3, K1, K2, K3) and the metric signs of the frame at parameter t."""
    t = mp.mpf(t)
    F = _frame_t(f, t)
    eps = [int(mp.nint(dot(e, e))) for e in F]
    h = mp.mpf("1e-12")
    Fp, Fm = _frame_t(f, t + h), _frame_t(f, t - h)
    v = speed(f, t)
    dF = [[(a - b) / (2 * h) / v for a, b in zip(x, y)] for x, y in zip(Fp, Fm)]
    k1 = eps[1] * dot(dF[0], F[1])
    k2 = eps[2] * dot(dF[1], F[2])
    k3 = eps[3] * dot(dF[2], F[3])

    def rho(u):
        Fu = _frame_t(f, u)
        Fup, Fum = _frame_t(f, u + h), _frame_t(f, u - h)
        tp = [(a - b) / (2 * h) / speed(f, u) for a, b in zip(Fup[0], Fum[0])]
        return 1 / mp.sqrt(abs(dot(tp, tp)))

    H = mp.mpf("1e-6")
    K1 = (rho(t + H) - rho(t - H)) / (2 * H) / v
    vals = (k1, k2, k3, K1, k2 / k1, k3 / k1)
    return tuple(float(x) for x in vals), eps


CURVES = {
    "spacelike_w": lambda u: [mp.sinh(u), mp.cosh(u), mp.sqrt(2) * mp.cos(u), mp.sqrt(2) * mp.sin(u)],
    "timelike_w": lambda u: [mp.sqrt(2) * mp.sinh(u), mp.sqrt(2) * mp.cosh(u), mp.cos(u), mp.sin(u)],
    "hyperplanar_spacelike": lambda u: [mp.sinh(u), mp.cosh(u), mp.sqrt(2) * u, 0 * u],
    "nonhelix_control": lambda u: [u**2 / 2, u, mp.cos(u), mp.sin(u)],
    "hyperplane_timelike": lambda u: [mp.sqrt(2) * mp.sinh(u), mp.sqrt(2) * mp.cosh(u), 0 * u, u],
    "hyperplane_cubic": lambda u: [0 * u, u, u**2, u**3],
}

POINTS = {
    "spacelike_w": (0.3, 1.1),
    "timelike_w": (0.3, 1.1),
    "hyperplanar_spacelike": (0.7,),
    "nonhelix_control": (0.5, 0.8, 1.0, 1.2),
    "hyperplane_timelike": (0.9,),
    "hyperplane_cubic": (0.5, 1.0),
}


if __name__ == "__main__":
    for name, pts in POINTS.items():
        for t in pts:
            vals, eps = invariants(CURVES[name], t)
            print(f'("{name}", {t}, ({", ".join(repr(v) for v in vals)}), {tuple(eps)}),')
