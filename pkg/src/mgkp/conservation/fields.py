"""Closed-form test fields with exact derivatives of every order."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ..params import JetPoint

MAX_ORDER = 6


def multi_indices(max_order: int = MAX_ORDER):
    return [idx for n in range(max_order + 1)
            for idx in itertools.product(range(n + 1), repeat=3) if sum(idx) == n]


@dataclass(frozen=True)
class AnalyticField:
    """w(t,x,y) = base + g . (t,x,y) + Re sum_m c_m exp(lam_m . (t,x,y)).

    ``lam`` is an (M, 3) complex array, so sines, cosines, exponentials and
    their products are all covered.
    """

    coeffs: np.ndarray
    lam: np.ndarray
    grad: tuple[float, float, float] = (0.0, 0.0, 0.0)
    base: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=complex).reshape(-1))
        object.__setattr__(self, "lam", np.asarray(self.lam, dtype=complex).reshape(-1, 3))
        if self.coeffs.shape[0] != self.lam.shape[0]:
            raise ValueError("one coefficient per exponent vector")

    @classmethod
    def zero(cls) -> "AnalyticField":
        return cls(np.zeros(0), np.zeros((0, 3)))

    @classmethod
    def random(cls, rng: np.random.Generator, n_terms: int = 2,
               amplitude: float = 0.12) -> "AnalyticField":
        """w = x + small oscillatory terms, so that w_x stays in (0.4, 1.6)
        on the unit cube around the origin."""
        lam = rng.uniform(-0.3, 0.3, (n_terms, 3)) + 1j * rng.uniform(-2.0, 2.0, (n_terms, 3))
        phase = np.exp(1j * rng.uniform(0, 2 * math.pi, n_terms))
        # bound |c lam_x| * growth <= amplitude per term
        growth = np.exp(np.abs(lam.real).sum(axis=1))
        mag = amplitude * rng.uniform(0.5, 1.0, n_terms) / (np.maximum(np.abs(lam[:, 1]), 0.5) * growth)
        grad = (float(rng.uniform(-0.5, 0.5)), 1.0, float(rng.uniform(-0.5, 0.5)))
        return cls(mag * phase, lam, grad, float(rng.uniform(-0.5, 0.5)))

    def derivative(self, idx, t, x, y):
        """d^{i+j+k} w / dt^i dx^j dy^k at arrays of points."""
        i, j, k = idx
        t, x, y = np.broadcast_arrays(np.asarray(t, float), np.asarray(x, float),
                                      np.asarray(y, float))
        out = np.zeros(t.shape)
        if self.coeffs.size:
            lt, lx, ly = self.lam[:, 0], self.lam[:, 1], self.lam[:, 2]
            amp = self.coeffs * lt ** i * lx ** j * ly ** k
            ph = (np.multiply.outer(t, lt) + np.multiply.outer(x, lx)
                  + np.multiply.outer(y, ly))
            out = (np.exp(ph) @ amp).real
        n = i + j + k
        if n == 0:
            out = out + self.base + self.grad[0] * t + self.grad[1] * x + self.grad[2] * y
        elif n == 1:
            out = out + self.grad[(i, j, k).index(1)]
        return out

    def jet(self, t, x, y, max_order: int = MAX_ORDER) -> JetPoint:
        vals = {idx: self.derivative(idx, t, x, y) for idx in multi_indices(max_order)}
        return JetPoint(vals, t=np.asarray(t, float), x=np.asarray(x, float),
                        y=np.asarray(y, float))


@dataclass(frozen=True)
class FChoice:
    """f(t) with hard-coded derivatives up to the third."""

    name: str

    def __call__(self, t, order: int = 0):
        t = np.asarray(t, dtype=float)
        if self.name == "1":
            return np.ones_like(t) if order == 0 else np.zeros_like(t)
        if self.name == "t":
            return [t, np.ones_like(t), np.zeros_like(t), np.zeros_like(t)][order]
        if self.name == "t2":
            return [t * t, 2 * t, 2 * np.ones_like(t), np.zeros_like(t)][order]
        if self.name == "sin":
            return [np.sin(t), np.cos(t), -np.sin(t), -np.cos(t)][order]
        raise ValueError(f"unknown f choice {self.name!r}")

    def derivs(self, t):
        return tuple(self(t, n) for n in range(4))


F_CHOICES = (FChoice("1"), FChoice("t"), FChoice("t2"), FChoice("sin"))


def f_choice(name: str) -> FChoice:
    for fc in F_CHOICES:
        if fc.name == name:
            return fc
    raise ValueError(f"unknown f choice {name!r}; use one of 1, t, t2, sin")
