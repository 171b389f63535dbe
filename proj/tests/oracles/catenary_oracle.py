#!/usr/bin/env python3
"""Reference values for the catenary geometry tests.

Solves for the cosh scale of a symmetric catenary from span/sag with
scipy's root finder and prints sample points for an asymmetric span,
using only the defining equation z = a cosh(x/a) + c through both
endpoints.
"""
import numpy as np
from scipy.optimize import brentq

def sag_to_parameter(span, sag):
    f = lambda a: a * (np.cosh(span / (2 * a)) - 1) - sag
    return brentq(f, 1e-3, 1e9, xtol=1e-15, rtol=1e-15)

def catenary_points(span, a, h0, h1, n):
    # z(x) = a cosh((x - x0)/a) + c with z(0)=h0, z(span)=h1.
    # h1 - h0 = 2 a sinh(span/2a) sinh((span/2 - x0)/a)  =>
    x0 = span / 2 - a * np.arcsinh((h1 - h0) / (2 * a * np.sinh(span / (2 * a))))
    c = h0 - a * np.cosh(-x0 / a)
    xs = np.linspace(0, span, n)
    return np.stack([xs, np.zeros(n), a * np.cosh((xs - x0) / a) + c], axis=1)

if __name__ == "__main__":
    a = sag_to_parameter(185.0, 5.0)
    print(f"a(185, 5)      = {a:.12f}")
    a2 = sag_to_parameter(10.0, 0.5)
    print(f"a(10, 0.5)     = {a2:.12f}")
    pts = catenary_points(12.0, a2, 3.0, 4.0, 7)
    for p in pts:
        print(f"pt {p[0]:7.3f} {p[2]:.12f}")
    # midspan height of the symmetric 185 m line hung at z = 0
    mid = catenary_points(185.0, a, 0.0, 0.0, 3)[1]
    print(f"mid(185)       = {mid[2]:.12f}")
