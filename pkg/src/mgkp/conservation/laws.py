"""Multipliers Q and conservation-law triples (T, X, Y) of the scaled potential equation.

Triples are indexed by conservation-law id; the multiplier paired with
triple i is ``MULTIPLIER_OF[i]`` (ids 8 and 9 are crossed). Where a printed
flux fails the off-shell identity, ``corrected=True`` selects the repaired
expression; ``corrected=False`` evaluates the printed one verbatim.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..params import OutsideEquationDomain, ParameterError, ScaledParams, equation_lhs

APPLICABILITY_TOL = 1e-12

IDS = tuple(range(1, 16))
F_FAMILIES = frozenset({2, 11, 12, 13, 14, 15})
TYPO_IDS = frozenset({9, 10, 13, 14, 15})
MULTIPLIER_OF = {i: i for i in IDS} | {8: 9, 9: 8}


class InapplicableError(ParameterError):
    pass


class _Vars:
    """Attribute view of a jet: ``v.wxxy`` is w_xxy, ``v.t`` the t coordinate."""

    __slots__ = ("_jet",)

    def __init__(self, jet):
        self._jet = jet

    def __getattr__(self, name):
        if name in ("t", "x", "y"):
            return getattr(self._jet, name)
        if name == "w":
            return self._jet[(0, 0, 0)]
        if name.startswith("w"):
            return self._jet[name[1:]]
        raise AttributeError(name)


def _close(u: float, v: float) -> bool:
    return abs(u - v) <= APPLICABILITY_TOL * max(1.0, abs(u), abs(v))


def condition(id_: int, sp: ScaledParams) -> bool:
    """Case condition of conservation law ``id_`` (exact on rational q)."""
    q, a, b, s1, s2 = sp.q, sp.a, sp.b, sp.sigma1, sp.sigma2
    if id_ in (1, 2):
        return True
    if id_ in (3, 4):
        return _close(a, b * float(q) / 2)
    if id_ == 5:
        return q == 0.5 and _close(a, b / 4)
    if id_ == 6:
        return q == 0.5 and _close(a, 0.0)
    if id_ == 7:
        return q == 1 and _close(a, b / 2)
    if id_ == 8:
        return q == 1 and a != 0 and _close(b, a / 2 + s1 * s2 / a)
    if id_ == 9:
        return q == 1 and _close(b * b, a * a + 2 * s1 * s2)
    if id_ == 10:
        return q == -2 and _close(a, -b)
    if id_ == 11:
        return _close(a, b * float(q))
    if id_ == 12:
        return q == 1
    if id_ == 13:
        return q == 1 and s1 * s2 == -1 and _close(a, b / 2) and _close(b * b, 8 / 3)
    if id_ in (14, 15):
        return q == 1 and s1 * s2 == -1 and _close(b, 0.0) and _close(a * a, 2.0)
    raise ValueError(f"conservation-law id must be 1..15 (got {id_})")


def applicability(id_: int, sp: ScaledParams) -> bool:
    """True when the case condition holds. The q = -2 case (id 10) is
    applicable for identity checking although it lies outside q > 0."""
    return condition(id_, sp)


def multiplier_applicability(mid: int, sp: ScaledParams) -> bool:
    return condition(MULTIPLIER_OF[mid], sp)


def _p(v, e):
    return v ** e


# multipliers --------------------------------------------------------------

def multiplier(mid: int, sp: ScaledParams, jet, F, printed: bool = False):
    """Q_(mid) at a jet. F = (f, f', f'', f''')."""
    v = _Vars(jet)
    a, b, s1, s2 = sp.a, sp.b, sp.sigma1, sp.sigma2
    f, f1, f2, f3 = F
    x, y, t = v.x, v.y, v.t
    if mid == 1:
        return v.wx
    if mid == 2:
        return f + 0 * v.wx
    if mid == 3:
        return v.wt
    if mid == 4:
        return v.wy
    if mid == 5:
        return 3 * t * v.wt + x * v.wx + 2 * y * v.wy + v.w
    if mid == 6:
        return x - s1 * t * v.wx
    if mid == 7:
        return b * x - 4 / 3 * s1 * y * v.wx + (8 / 3 * s1 * s2 - b * b) * t * v.wy
    if mid == 8:
        return ((a + b) * v.wt + 2 / 3 * (2 * a - b) * s1 * v.wx ** 3
                + (a * a + a * b - 2 * s1 * s2) * v.wx * v.wy + 2 * (2 * a - b) * v.wxxx)
    if mid == 9:
        return x - a * s2 * y * v.wx
    if mid == 10:
        return y * v.wx - 2 * s2 * t * v.wy
    if mid == 11:
        return f * y + 0 * v.wx
    if mid == 12:
        return f1 * y + (a - b) * v.wx * f
    if mid == 13:
        return (v.wy * f + (3 / 16 * s1 * s2 * b * x - 0.25 * s2 * v.wx * y) * f1
                - 3 / 32 * s1 * b * y * y * f2)
    if mid == 14:
        return (y * v.wx + 0.5 * s1 * a * x) * f - 0.25 * s1 * s2 * a * y * y * f1
    if mid == 15:
        lead = 0.75 * s1 * v.wt + 1.5 * s1 * a * v.wx * v.wy + v.wx ** 3 + 3 * s1 * v.wxxx
        xcoef = a if printed else s1
        return (lead * f - 0.75 * xcoef * x * v.wx * f1
                + 3 / 8 * s2 * (s1 * y * y * v.wx + a * x * y) * f2 - y ** 3 * a / 16 * f3)
    raise ValueError(f"multiplier id must be 1..15 (got {mid})")


# triples ------------------------------------------------------------------

def _t1(sp, v, F, corrected):
    q, a, b, s1, s2 = sp.qf, sp.a, sp.b, sp.sigma1, sp.sigma2
    wx, wy = v.wx, v.wy
    T = 0.5 * wx ** 2
    X = (wx * v.wxxx - 0.5 * v.wxx ** 2 + 0.5 * s1 / (q + 1) * _p(wx, 2 * q + 2)
         + a / (q + 1) * _p(wx, q + 1) * wy - 0.5 * s2 * wy ** 2)
    Y = s2 * wx * wy - (a - b - b * q) / ((q + 1) * (q + 2)) * _p(wx, q + 2)
    return T, X, Y


def _t2(sp, v, F, corrected):
    q, a, b, s1, s2 = sp.qf, sp.a, sp.b, sp.sigma1, sp.sigma2
    f, f1 = F[0], F[1]
    wx, wy = v.wx, v.wy
    T = wx * f
    X = (v.wxxx + a / q * _p(wx, q) * wy + s1 / (2 * q + 1) * _p(wx, 2 * q + 1)) * f - v.w * f1
    Y = (s2 * wy - (a - b * q) / (q * (q + 1)) * _p(wx, q + 1)) * f
    return T, X, Y


def _t3(sp, v, F, corrected):
    q, b, s1, s2 = sp.qf, sp.b, sp.sigma1, sp.sigma2
    wx, wy, wt = v.wx, v.wy, v.wt
    T = (0.5 * v.wxx ** 2 - 0.5 * s2 * wy ** 2 - 0.5 * b / (q + 1) * _p(wx, q + 1) * wy
         - 0.5 * s1 / ((q + 1) * (2 * q + 1)) * _p(wx, 2 * q + 2))
    X = (wt * v.wxxx - v.wtx * v.wxx + 0.5 * wt ** 2 + s1 / (2 * q + 1) * _p(wx, 2 * q + 1) * wt
         + 0.5 * b * _p(wx, q) * wt * wy)
    Y = s2 * wt * wy + 0.5 * b / (q + 1) * _p(wx, q + 1) * wt
    return T, X, Y


def _t4(sp, v, F, corrected):
    q, b, s1, s2 = sp.qf, sp.b, sp.sigma1, sp.sigma2
    wx, wy, wt = v.wx, v.wy, v.wt
    T = 0.5 * wx * wy
    X = (wy * v.wxxx - v.wxy * v.wxx + 0.5 * b * _p(wx, q) * wy ** 2
         + s1 / (2 * q + 1) * _p(wx, 2 * q + 1) * wy + 0.5 * wt * wy)
    Y = (0.5 * v.wxx ** 2 + 0.5 * s2 * wy ** 2 - 0.5 * s1 / ((q + 1) * (2 * q + 1)) * _p(wx, 2 * q + 2)
         - 0.5 * wt * wx)
    return T, X, Y


def _t5(sp, v, F, corrected):
    b, s1, s2 = sp.b, sp.sigma1, sp.sigma2
    t, x, y, w = v.t, v.x, v.y, v.w
    wx, wy, wt, wxx, wxxx = v.wx, v.wy, v.wt, v.wxx, v.wxxx
    sq = _p(wx, 0.5)
    T = ((1.5 * wxx ** 2 - 0.5 * s1 * wx ** 3 - b * _p(wx, 1.5) * wy - 1.5 * s2 * wy ** 2) * t
         + 0.5 * x * wx ** 2 + y * wx * wy)
    X = ((3 * wt * wxxx - 3 * v.wtx * wxx + 1.5 * wt ** 2 + 1.5 * b * sq * wt * wy
          + 1.5 * s1 * wx ** 2 * wt) * t
         + (wx * wxxx - 0.5 * wxx ** 2 + s1 / 3 * wx ** 3 + b / 6 * _p(wx, 1.5) * wy
            - 0.5 * s2 * wy ** 2) * x
         + (b * sq * wy ** 2 + s1 * wx ** 2 * wy + wt * wy + 2 * wy * wxxx - 2 * v.wxy * wxx) * y
         + w * wxxx - 2 * wx * wxx + 0.5 * s1 * w * wx ** 2 + 0.5 * b * sq * wy * w + w * wt)
    Y = ((b * wt * _p(wx, 1.5) + 3 * s2 * wt * wy) * t + (b / 3 * _p(wx, 2.5) + s2 * wx * wy) * x
         + (wxx ** 2 - s1 / 3 * wx ** 3 + s2 * wy ** 2 - wt * wx) * y
         + b / 3 * w * _p(wx, 1.5) + s2 * w * wy)
    return T, X, Y


def _t6(sp, v, F, corrected):
    b, s1, s2 = sp.b, sp.sigma1, sp.sigma2
    t, x = v.t, v.x
    wx, wy = v.wx, v.wy
    T = -0.5 * s1 * t * wx ** 2 + x * wx
    X = ((0.5 * s1 * v.wxx ** 2 - wx ** 3 / 3 + 0.5 * s1 * s2 * wy ** 2 - s1 * wx * v.wxxx) * t
         + (0.5 * s1 * wx ** 2 + v.wxxx) * x - v.wxx)
    Y = -(s1 * s2 * wx * wy + 0.4 * s1 * b * _p(wx, 2.5)) * t + (s2 * wy + 2 / 3 * b * _p(wx, 1.5)) * x
    return T, X, Y


def _t7(sp, v, F, corrected):
    b, s1, s2 = sp.b, sp.sigma1, sp.sigma2
    t, x, y = v.t, v.x, v.y
    wx, wy, wt, wxx, wxxx = v.wx, v.wy, v.wt, v.wxx, v.wxxx
    K = 8 / 3 * s1 * s2 - b * b
    T = (4 / 3 * s1 * s2 - 0.5 * b * b) * t * wx * wy + b * x * wx - 2 / 3 * s1 * y * wx ** 2
    X = (K * (wy * wxxx - v.wxy * wxx + 0.5 * wt * wy + s1 / 3 * wx ** 3 * wy + 0.5 * b * wx * wy ** 2) * t
         + (2 / 3 * s1 * wxx ** 2 + 2 / 3 * s1 * s2 * wy ** 2 - wx ** 4 / 3 - s1 * b / 3 * wx ** 2 * wy
            - 4 / 3 * s1 * wx * wxxx) * y
         + b * (wxxx + s1 / 3 * wx ** 3 + 0.5 * b * wx * wy) * x - b * wxx)
    Y = (K * (0.5 * wxx ** 2 - 0.5 * wt * wx - s1 / 12 * wx ** 4 + 0.5 * s2 * wy ** 2) * t
         + b * (s2 * wy + 0.25 * b * wx ** 2) * x - (4 / 3 * s1 * s2 * wx * wy + b * s1 / 3 * wx ** 3) * y)
    return T, X, Y


def _t8(sp, v, F, corrected):
    a, s1, s2 = sp.a, sp.sigma1, sp.sigma2
    x, y = v.x, v.y
    wx, wy, wxx = v.wx, v.wy, v.wxx
    T = -0.5 * a * s2 * y * wx ** 2 + x * wx
    X = ((0.5 * s2 * a * wxx ** 2 - 0.25 * s1 * s2 * a * wx ** 4 - 0.5 * s2 * a * a * wx ** 2 * wy
          + 0.5 * a * wy ** 2 - s2 * a * wx * v.wxxx) * y
         + (s1 / 3 * wx ** 3 + a * wx * wy + v.wxxx) * x - wxx)
    Y = (s2 * wy - 0.25 * (a - 2 * s1 * s2 / a) * wx ** 2) * x - (s1 / 3 * wx ** 3 + a * wx * wy) * y
    return T, X, Y


def _t9(sp, v, F, corrected):
    a, b, s1, s2 = sp.a, sp.b, sp.sigma1, sp.sigma2
    wx, wy, wt, wxx, wxy, wxxx = v.wx, v.wy, v.wt, v.wxx, v.wxy, v.wxxx
    mixed = 1.0 if corrected else 2.0
    T = (1.5 * (b - a) * wxx ** 2 + 0.25 * s1 * (a - b) * wx ** 4 - 0.5 * s2 * (a + b) * wy ** 2
         - s1 * s2 * wx ** 2 * wy)
    X = ((2 * a - b) * (wxxx ** 2 + 2 / 3 * s1 * wx ** 3 * wxxx + (a + b) * wx * wy * wxxx
                        + 2 * s2 * wxx * v.wyy + s2 * wxy ** 2
                        + (a - b) * (0.5 * wy * wxx ** 2 - mixed * wx * wxy * wxx)
                        + wx ** 6 / 9 + 0.5 * a * (a + b) * wx ** 2 * wy ** 2)
         + (a + b) * (wt * wxxx + 0.5 * wt ** 2 + s1 / 3 * wt * wx ** 3 + a * wt * wx * wy)
         + 3 * (a - b) * v.wtx * wxx + (a * (7 * a + b) * s1 - 6 * s2) / 12 * wx ** 4 * wy
         + (2 * s1 - a * (a + b) * s2) / 6 * wy ** 3)
    Y = ((2 * a - b) * (0.5 * (a - b) * wx * wxx ** 2 - 2 * s2 * wxy * wxx
                        - (a * a - b * b) / 3 * wx ** 3 * wy)
         - 0.5 * (a * a - b * b) * wt * wx ** 2 + s2 * (a + b) * wt * wy
         + (3 * a * (b - a) * s1 - 2 * s2) / 12 * wx ** 5 + 0.5 * (a * (a + b) * s2 - 2 * s1) * wx * wy ** 2)
    return T, X, Y


def _t10(sp, v, F, corrected):
    b, s1, s2 = sp.b, sp.sigma1, sp.sigma2
    t, y = v.t, v.y
    wx, wy, wt, wxx, wxxx = v.wx, v.wy, v.wt, v.wxx, v.wxxx
    wyp = wy ** 2 if corrected else wy
    T = 0.5 * y * wx ** 2 - s2 * t * wx * wy
    X = ((2 / 3 * s1 * s2 * wy * wx ** -3
          - s2 * (2 * wy * wxxx - 2 * v.wxy * wxx + wt * wy + b * wyp * wx ** -2)) * t
         + (wx * wxxx - 0.5 * wxx ** 2 - 0.5 * s2 * wy ** 2 + b * wy / wx - 0.5 * s1 * wx ** -2) * y)
    Y = (s2 * (wt * wx - wxx ** 2) - wy ** 2 + s1 * s2 / 3 * wx ** -2) * t + s2 * y * wx * wy
    return T, X, Y


def _t11(sp, v, F, corrected):
    q, b, s1, s2 = sp.qf, sp.b, sp.sigma1, sp.sigma2
    f, f1 = F[0], F[1]
    y, wx, wy, w = v.y, v.wx, v.wy, v.w
    T = y * wx * f
    X = (v.wxxx + b * _p(wx, q) * wy + s1 / (2 * q + 1) * _p(wx, 2 * q + 1)) * y * f - w * y * f1
    Y = s2 * (y * wy - w) * f
    return T, X, Y


def _t12(sp, v, F, corrected):
    a, b, s1, s2 = sp.a, sp.b, sp.sigma1, sp.sigma2
    f, f1 = F[0], F[1]
    y, w = v.y, v.w
    wx, wy, wxx, wxxx = v.wx, v.wy, v.wxx, v.wxxx
    T = 0.5 * (a - b) * wx ** 2 * f
    X = ((a - b) * (wx * wxxx - 0.5 * wxx ** 2 + 0.25 * s1 * wx ** 4 + 0.5 * a * wx ** 2 * wy
                    - 0.5 * s2 * wy ** 2) * f
         + (wxxx + s1 / 3 * wx ** 3 + a * wx * wy + v.wt) * y * f1)
    Y = ((a - b) * (2 * b - a) / 6 * wx ** 3 + s2 * (a - b) * wx * wy) * f \
        + ((0.5 * (b - a) * wx ** 2 + s2 * wy) * y - s2 * w) * f1
    return T, X, Y


def _t13(sp, v, F, corrected):
    b, s1, s2 = sp.b, sp.sigma1, sp.sigma2
    f, f1, f2 = F[0], F[1], F[2]
    x, y, w = v.x, v.y, v.w
    wx, wy, wt, wxx, wxxx = v.wx, v.wy, v.wt, v.wxx, v.wxxx
    T = 0.5 * wy * wx * f + s2 * (3 / 16 * s1 * b * wx * x - 0.125 * wx ** 2 * y) * f1
    X = ((wy * wxxx - v.wxy * wxx + 0.5 * b * wy ** 2 * wx + s1 / 3 * wy * wx ** 3 + 0.5 * wt * wy) * f
         + (-3 / 16 * s1 * s2 * b * wxx
            + (3 / 16 * s1 * s2 * b * wxxx + s2 * b / 16 * wx ** 3 - 0.25 * wx * wy) * x
            + (0.125 * s2 * wxx ** 2 - s2 * s1 / 16 * wx ** 4 - s2 * b / 16 * wx ** 2 * wy
               + 0.125 * wy ** 2 - 0.25 * s2 * wx * wxxx) * y) * f1
         + (-3 / 32 * s1 * b * (wt + wxxx) - b / 32 * wx ** 3 + 0.125 * s2 * wy * wx) * y ** 2 * f2)
    if corrected:
        X = X - 3 / 16 * s1 * s2 * b * x * w * f2
    Y = ((0.5 * wxx ** 2 + 0.5 * s2 * wy ** 2 - s1 / 12 * wx ** 4 - 0.5 * wt * wx) * f
         + ((3 / 16 * s1 * b * wy - 0.125 * wx ** 2) * x + (-0.25 * wx * wy - s2 * b / 16 * wx ** 3) * y) * f1
         + (3 / 16 * s1 * s2 * b * w * y - (3 / 32 * s1 * s2 * b * wy - s2 / 16 * wx ** 2) * y ** 2) * f2)
    return T, X, Y


def _t14(sp, v, F, corrected):
    a, s1, s2 = sp.a, sp.sigma1, sp.sigma2
    f, f1 = F[0], F[1]
    x, y, w = v.x, v.y, v.w
    wx, wy, wt, wxx, wxxx = v.wx, v.wy, v.wt, v.wxx, v.wxxx
    T = (0.5 * wx ** 2 * y + 0.5 * s1 * a * wx * x) * f
    X = ((-0.5 * a * s1 * wxx + (a / 6 * wx ** 3 - s2 * wx * wy + 0.5 * s1 * a * wxxx) * x
          + (wx * wxxx - 0.5 * wxx ** 2 + 0.25 * s1 * wx ** 4 + 0.5 * a * wx ** 2 * wy
             - 0.5 * s2 * wy ** 2) * y) * f
         - (0.25 * s2 * s1 * a * wt + s2 * a / 12 * wx ** 3 - 0.5 * wx * wy
            + 0.25 * s2 * s1 * a * wxxx) * y ** 2 * f1)
    if corrected:
        X = X - 0.5 * s1 * a * x * w * f1
    Y = ((0.5 * s2 * (s1 * a * wy + wx ** 2) * x + (s2 * wx * wy - a / 6 * wx ** 3) * y) * f
         + (0.5 * s1 * a * w * y - 0.25 * (s1 * a * wy + wx ** 2) * y ** 2) * f1)
    return T, X, Y


def _t15(sp, v, F, corrected):
    a, s1, s2 = sp.a, sp.sigma1, sp.sigma2
    f, f1, f2, f3 = F
    x, y, w = v.x, v.y, v.w
    wx, wy, wt, wxx, wxy, wxxx = v.wx, v.wy, v.wt, v.wxx, v.wxy, v.wxxx
    tx = s1 if corrected else 1.0
    T = ((-9 / 8 * s1 * wxx ** 2 + 3 / 16 * wx ** 4 + 3 / 8 * s1 * (a * wx ** 2 * wy - s2 * wy ** 2)) * f
         - 3 / 8 * tx * wx ** 2 * x * f1
         + (3 / 16 * s1 * s2 * wx ** 2 * y ** 2 - 3 / 8 * s2 * a * w * y) * f2)
    if corrected:
        xf1 = 0.75 * s1 * (wx * wxx + (0.5 * wxx ** 2 - wx * wxxx) * x)
    else:
        xf1 = 0.75 * s1 * (-wx * wxxx + 2 * wxx ** 2 + wx * wxx)
    X = ((1.5 * s1 * wxxx ** 2 + (0.75 * s1 * wt + wx ** 3 + 1.5 * a * s1 * wy * wx) * wxxx
          + 0.75 * s1 * a * wxx ** 2 * wy + 1.5 * s1 * s2 * wxy ** 2 + 3 / 8 * s1 * wt ** 2
          + (3 * s1 * s2 * v.wyy - 1.5 * a * s1 * wx * wxy + 9 / 4 * s1 * v.wtx) * wxx
          + (0.75 * s1 * a * wy * wx + 0.25 * wx ** 3) * wt
          - 0.25 * s1 * s2 * a * wy ** 3 + s1 / 6 * wx ** 6 + 5 / 8 * a * wx ** 4 * wy
          - 1.5 * s2 * wy ** 2 * wx ** 2) * f
         + (xf1 + (3 / 8 * s1 * s2 * wy ** 2 - 3 / 8 * s1 * a * wx ** 2 * wy - 3 / 16 * wx ** 4) * x) * f1
         + (-3 / 8 * s2 * a * wxx * y
            + (s1 * s2 * a / 8 * wx ** 3 + 3 / 8 * s2 * a * (wxxx + wt) - 0.75 * s1 * wx * wy) * y * x
            + (3 / 16 * s1 * s2 * (2 * wx * wxxx - wxx ** 2 + a * wx ** 2 * wy) - 3 / 16 * s1 * wy ** 2
               + 3 / 32 * s2 * wx ** 4) * y ** 2) * f2
         + (-s1 * a / 48 * wx ** 3 + s1 * s2 / 8 * wx * wy - a / 16 * (wxxx + wt)) * y ** 3 * f3)
    Y = ((0.75 * s1 * a * wx * wxx ** 2 - 3 * s1 * s2 * wxx * wxy + 0.75 * s1 * s2 * a * wx * wy ** 2
          + s2 * wx ** 3 * wy - a / 8 * wx ** 5 + (0.75 * s1 * s2 * wy - 3 / 8 * s1 * a * wx ** 2) * wt) * f
         + (-0.75 * s1 * s2 * wx * wy + s1 * a / 8 * wx ** 3) * x * f1
         + (-3 / 8 * a * w * x + (3 / 8 * a * wy + 3 / 8 * s1 * wx ** 2) * x * y
            + (3 / 8 * s1 * wx * wy - s1 * s2 * a / 16 * wx ** 3) * y ** 2) * f2
         + (3 / 16 * s2 * a * w * y ** 2 - (s2 * a / 16 * wy + s1 * s2 / 16 * wx ** 2) * y ** 3) * f3)
    return T, X, Y


_TRIPLES: dict[int, Callable] = {1: _t1, 2: _t2, 3: _t3, 4: _t4, 5: _t5, 6: _t6, 7: _t7, 8: _t8,
                                 9: _t9, 10: _t10, 11: _t11, 12: _t12, 13: _t13, 14: _t14,
                                 15: _t15}

CASE_LABELS = {
    1: "all", 2: "all, f(t)", 3: "a = bq/2", 4: "a = bq/2", 5: "q = 1/2, a = b/4",
    6: "q = 1/2, a = 0", 7: "q = 1, a = b/2", 8: "q = 1, b = a/2 + s1 s2/a",
    9: "q = 1, b^2 = a^2 + 2 s1 s2", 10: "q = -2, a = -b", 11: "a = bq, f(t)",
    12: "q = 1, f(t)", 13: "q = 1, a = b/2, b^2 = -8 s1 s2/3, f(t)",
    14: "q = 1, b = 0, a^2 = -2 s1 s2, f(t)", 15: "q = 1, b = 0, a^2 = -2 s1 s2, f(t)",
}


def triple(id_: int, sp: ScaledParams, jet, F=(1.0, 0.0, 0.0, 0.0), corrected: bool = True):
    """(T, X, Y) of conservation law ``id_`` at a jet (values may be arrays)."""
    if id_ not in _TRIPLES:
        raise ValueError(f"conservation-law id must be 1..15 (got {id_})")
    return _TRIPLES[id_](sp, _Vars(jet), F, corrected)


@dataclass(frozen=True)
class CLawTriple:
    id: int
    corrected: bool = True

    def applicable(self, sp: ScaledParams) -> bool:
        return applicability(self.id, sp)

    def __call__(self, sp, jet, F=(1.0, 0.0, 0.0, 0.0)):
        return triple(self.id, sp, jet, F, self.corrected)

    @property
    def uses_f(self) -> bool:
        return self.id in F_FAMILIES


@dataclass(frozen=True)
class Multiplier:
    id: int
    printed: bool = False

    def applicable(self, sp: ScaledParams) -> bool:
        return multiplier_applicability(self.id, sp)

    def __call__(self, sp, jet, F=(1.0, 0.0, 0.0, 0.0)):
        return multiplier(self.id, sp, jet, F, self.printed)


def equation_lhs_G(sp: ScaledParams, jet):
    """G at a jet. Raises when the w_x^{q-1} term is singular."""
    if sp.q < 1 and sp.a != 0:
        wx = np.asarray(jet["x"])
        if np.any(wx == 0):
            raise ParameterError("w_x = 0 makes the a-term singular for q < 1")
    return equation_lhs(sp, jet)


def require_applicable(id_: int, sp: ScaledParams):
    if not applicability(id_, sp):
        raise InapplicableError(f"conservation law {id_} needs {CASE_LABELS[id_]}")
    if id_ != 10:
        sp.require_domain()


def params_for(id_: int, sigma1: int = 1, sigma2: int = -1, a: float = 0.3,
               b: float = 0.7, q=None) -> ScaledParams:
    """A representative applicable parameter set for each id (for checks)."""
    s1, s2 = sigma1, sigma2
    from fractions import Fraction as Fr
    qq = Fr(q) if q is not None else Fr(3, 2)
    if id_ in (1, 2):
        return ScaledParams(s1, s2, a, b, qq)
    if id_ in (3, 4):
        return ScaledParams(s1, s2, b * float(qq) / 2, b, qq)
    if id_ == 5:
        return ScaledParams(s1, s2, b / 4, b, Fr(1, 2))
    if id_ == 6:
        return ScaledParams(s1, s2, 0.0, b, Fr(1, 2))
    if id_ == 7:
        return ScaledParams(s1, s2, b / 2, b, 1)
    if id_ == 8:
        aa = a if a != 0 else 1.3
        return ScaledParams(s1, s2, aa, aa / 2 + s1 * s2 / aa, 1)
    if id_ == 9:
        bb = math.sqrt(a * a + 2 * s1 * s2) if a * a + 2 * s1 * s2 >= 0 else None
        if bb is None:
            raise ParameterError("b^2 = a^2 + 2 s1 s2 has no real solution for this a")
        return ScaledParams(s1, s2, a, bb, 1)
    if id_ == 10:
        return ScaledParams(s1, s2, -b, b, -2)
    if id_ == 11:
        return ScaledParams(s1, s2, b * float(qq), b, qq)
    if id_ == 12:
        return ScaledParams(s1, s2, a, b, 1)
    if s1 * s2 != -1:
        raise ParameterError(f"id {id_} needs sigma1 sigma2 = -1")
    if id_ == 13:
        bb = math.sqrt(8 / 3) * (1 if b >= 0 else -1)
        return ScaledParams(s1, s2, bb / 2, bb, 1)
    return ScaledParams(s1, s2, math.sqrt(2) * (1 if a >= 0 else -1), 0.0, 1)
