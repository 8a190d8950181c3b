"""Closed-form circumconics of the triangle (0,0), (1,0), (u,v).

Coefficients follow ``c0 + c1 x + c2 y + c3 xy + c4 x^2 + c5 y^2``.
"""
import math

import numpy as np


def _sides(u, v):
    return math.hypot(u - 1, v), math.hypot(u, v)


def E9(u, v):
    s1, s2 = _sides(u, v)
    return np.array([0, -v * v, v * (u - s2), -v * (s1 - s2 - 1 + 2 * u), v * v,
                     (s1 - s2 - 1) * u + u * u + s2])


def E2(u, v):
    return np.array([0, -v * v, v * (u - 1), v * (1 - 2 * u), v * v, u * u - u + 1])


def E1(u, v):
    s1, s2 = _sides(u, v)
    L = s1 + s2 + 1
    return np.array([
        0,
        -(L - 2) * v * v,
        -v * (L * s2 - u * L - 2 * s2 ** 2 + 2 * u),
        (L - 2 * s2 - 2 * u) * (L - 2) * v,
        (L - 2) * v * v,
        -L * L * u + (2 * u + 1) * L * s2 + (u * u + 2 * u) * L - 2 * s2 ** 2 - 4 * u * s2 - 2 * u * u,
    ])


def F(u, v):
    """Circumhyperbola centered on X11 (through X1 and the orthocenter)."""
    s1, s2 = _sides(u, v)
    return np.array([
        0,
        v ** 3 * (1 - 2 * u),
        s1 ** 2 * u ** 2 * s2 + (-u * s2 ** 3 - u * (u - 1) * s2 ** 2 + s2 * u ** 2) * s1
        + u * s2 ** 4 - v * v * s2 ** 2 - u ** 3 * (2 * u - 1),
        (s2 ** 3 + (u - 1) * s2 ** 2 - u * s2) * s1 + (2 * u - 1) * s2 ** 2 - u * s1 ** 2 * s2
        - u ** 4 - 4 * u * u * v * v + v ** 4 + 2 * u * v * v,
        v ** 3 * (2 * u - 1),
        -v ** 3 * (2 * u - 1),
    ])


def axis_quadratic(name, u, v):
    """Quadratic forms whose zeros are the principal directions."""
    s1, s2 = _sides(u, v)
    L = s1 + s2 + 1
    if name == "q9":
        return (v * (s1 - s2 + 2 * u - 1), 2 * ((s2 - s1) * u - s2 - u * u + u + v * v),
                v * (1 - 2 * u - s1 + s2))
    if name == "q1":
        k = v * (L - 2) * (L - 2 * s2 - 2 * u)
        return (-k, 2 * (L * L * u - (2 * u + 1) * L * s2 + (v * v - u * u - 2 * u) * L
                         + 4 * s2 * u + 4 * u * u), k)
    if name == "q2":
        return v * (2 * u - 1), 2 * (-u * u + v * v + u - 1), v * (1 - 2 * u)
    raise KeyError(name)
