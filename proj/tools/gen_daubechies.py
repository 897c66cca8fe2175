#!/usr/bin/env python3
"""Regenerate the extremal-phase Daubechies lowpass tables in src/daubechies_table.cpp.

Spectral factorisation in 60-digit arithmetic: the roots of the Daubechies
polynomial inside the unit circle are kept (minimum phase), giving the
coefficients in the same order as wavethresh's "DaubExPhase" family.
"""
import mpmath as mp

mp.mp.dps = 60


def daubechies(n):
    if n == 1:
        return [1 / mp.sqrt(2), 1 / mp.sqrt(2)]
    # P(y) = sum_{k<n} C(n-1+k, k) y^k with y = (1 - cos w)/2 = -(z - 2 + 1/z)/4
    p = [mp.binomial(n - 1 + k, k) for k in range(n)]
    y_roots = mp.polyroots(list(reversed(p)), maxsteps=400, extraprec=400)
    z_roots = []
    for y in y_roots:
        # z^2 - (2 - 4y) z + 1 = 0
        b = 2 - 4 * y
        disc = mp.sqrt(b * b - 4)
        r1, r2 = (b + disc) / 2, (b - disc) / 2
        z_roots.append(r1 if abs(r1) < 1 else r2)
    poly = [mp.mpc(1)]
    for _ in range(n):
        poly = mp_polymul(poly, [mp.mpc(1), mp.mpc(1)])
    for r in z_roots:
        poly = mp_polymul(poly, [mp.mpc(1), -r])
    coeffs = [mp.re(c) for c in poly]
    s = sum(coeffs)
    return [c * mp.sqrt(2) / s for c in coeffs]


def mp_polymul(a, b):
    out = [mp.mpc(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


if __name__ == "__main__":
    for n in range(1, 11):
        h = daubechies(n)
        print(f"    // {n} vanishing moment{'s' if n > 1 else ''}")
        print("    {" + ",\n     ".join(mp.nstr(c, 25, min_fixed=-1, max_fixed=1) for c in h) + "},")
