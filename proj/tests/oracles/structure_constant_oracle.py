#!/usr/bin/env python3
"""Brute-force curvature constants for left-invariant foliation frames.

Works purely from structure constants [E_a, E_b] = c_ab^c E_c of an
orthonormal adapted frame (first n horizontal, rest vertical). Everything is
algebraic because left-invariant frames have constant inner products and
constant structure functions. The output values are frozen into the C++
tests; rerun this script if a catalog model changes.
"""
import itertools
import sympy as sp


def constants(c, n, m):
    D = n + m
    H = range(n)
    V = range(n, D)

    def lc(a, b, e):
        return sp.Rational(1, 2) * (c[a][b][e] - c[a][e][b] - c[b][e][a])

    def bott(a, b, e):
        ah, bh, eh = a < n, b < n, e < n
        if ah and bh:
            return lc(a, b, e) if eh else 0
        if not ah and bh:
            return c[a][b][e] if eh else 0
        if ah and not bh:
            return c[a][b][e] if not eh else 0
        return lc(a, b, e) if not eh else 0

    G = [[[sp.simplify(bott(a, b, e)) for e in range(D)] for b in range(D)] for a in range(D)]
    T = [[[G[a][b][e] - G[b][a][e] - c[a][b][e] for e in range(D)] for b in range(D)] for a in range(D)]

    def R(a, b, cc, e):
        s = 0
        for d in range(D):
            s += G[b][cc][d] * G[a][d][e] - G[a][cc][d] * G[b][d][e] - c[a][b][d] * G[d][cc][e]
        return s

    ric = sp.Matrix(n, n, lambda b, cc: sum(R(i, b, cc, i) for i in H))
    ric = (ric + ric.T) / 2
    J = [sp.Matrix(n, n, lambda j, i: T[i][j][l]) for l in V]
    J2 = sum((Jl * Jl for Jl in J), sp.zeros(n, n))
    Q = sp.Matrix(m, m, lambda k, l: -sp.Rational(1, 4) * (J[k] * J[l]).trace())
    rho1 = min(ric.eigenvals())
    kappa = max((-J2).eigenvals())
    rho2 = min(((Q + Q.T) / 2).eigenvals())
    return sp.simplify(rho1), sp.simplify(kappa), sp.simplify(rho2)


def heisenberg():
    c = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    c[0][1][2], c[1][0][2] = 1, -1
    return c


def su2(lam):
    # X1 = e1, X2 = e2, Z = e3 / lam with [e1,e2]=e3 cyclic.
    c = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    c[0][1][2], c[1][0][2] = lam, -lam          # [X1,X2] = lam Z
    c[1][2][0], c[2][1][0] = 1 / lam, -1 / lam  # [X2,Z] = X1 / lam
    c[2][0][1], c[0][2][1] = 1 / lam, -1 / lam  # [Z,X1] = X2 / lam
    return c


def free_step2():
    # X1, X2, X3 horizontal; Z12, Z13, Z23 vertical with [Xi,Xj] = Zij.
    c = [[[0] * 6 for _ in range(6)] for _ in range(6)]
    for (i, j), z in zip([(0, 1), (0, 2), (1, 2)], range(3, 6)):
        c[i][j][z], c[j][i][z] = 1, -1
    return c


if __name__ == "__main__":
    lam = sp.Symbol("lambda", positive=True)
    print("heisenberg(1): rho1, kappa, rho2 =", constants(heisenberg(), 2, 1))
    print("su2(1):        rho1, kappa, rho2 =", constants(su2(sp.Integer(1)), 2, 1))
    print("su2(lambda):   rho1, kappa, rho2 =", constants(su2(lam), 2, 1))
    print("free step 2:   rho1, kappa, rho2 =", constants(free_step2(), 3, 3))
