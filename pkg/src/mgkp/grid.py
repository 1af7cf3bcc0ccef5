"""Doubly periodic grids, spectral derivatives and the zero-mean x-antiderivative."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .params import ParameterError


@dataclass(frozen=True)
class Grid2D:
    """Cell-centred periodic grid on [-Lx/2, Lx/2) x [-Ly/2, Ly/2).

    Arrays are indexed [iy, ix].
    """

    Lx: float
    Ly: float
    Nx: int
    Ny: int

    def __post_init__(self):
        if self.Lx <= 0 or self.Ly <= 0:
            raise ParameterError("box lengths must be positive")
        for n in (self.Nx, self.Ny):
            if n < 8 or n & (n - 1):
                raise ParameterError(f"grid sizes must be powers of two >= 8 (got {n})")

    @property
    def dx(self) -> float:
        return self.Lx / self.Nx

    @property
    def dy(self) -> float:
        return self.Ly / self.Ny

    @property
    def x(self) -> np.ndarray:
        return -self.Lx / 2 + self.dx * np.arange(self.Nx)

    @property
    def y(self) -> np.ndarray:
        return -self.Ly / 2 + self.dy * np.arange(self.Ny)

    def mesh(self):
        return np.meshgrid(self.x, self.y)

    @property
    def kx(self) -> np.ndarray:
        return 2 * math.pi * np.fft.fftfreq(self.Nx, d=self.dx)

    @property
    def ky(self) -> np.ndarray:
        return 2 * math.pi * np.fft.fftfreq(self.Ny, d=self.dy)

    def kmesh(self):
        return np.meshgrid(self.kx, self.ky)

    @property
    def cell_area(self) -> float:
        return self.dx * self.dy


def dx_spec(u: np.ndarray, grid: Grid2D, order: int = 1) -> np.ndarray:
    KX, _ = grid.kmesh()
    return np.real(np.fft.ifft2((1j * KX) ** order * np.fft.fft2(u)))


def dy_spec(u: np.ndarray, grid: Grid2D, order: int = 1) -> np.ndarray:
    _, KY = grid.kmesh()
    return np.real(np.fft.ifft2((1j * KY) ** order * np.fft.fft2(u)))


def inv_dx(u: np.ndarray, grid: Grid2D, strict: bool = True, tol: float = 1e-10) -> np.ndarray:
    """Zero-mean x-antiderivative (kx = 0 modes set to zero).

    With ``strict`` a row mean larger than ``tol`` times max|u| is an error,
    since the antiderivative of a nonzero mean is not periodic.
    """
    if strict:
        mean = np.abs(u.mean(axis=1)).max()
        if mean > tol * max(1.0, float(np.abs(u).max())):
            raise ParameterError(f"x-mean {mean:.3g} is not zero: d_x^-1 is undefined")
    KX, _ = grid.kmesh()
    U = np.fft.fft2(u)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(KX != 0, U / (1j * KX), 0.0)
    return np.real(np.fft.ifft2(out))


@dataclass
class Field2D:
    """Samples of u (and optionally its potential w and u_t) on a grid."""

    grid: Grid2D
    u: np.ndarray
    t: float = 0.0
    w: Optional[np.ndarray] = None
    ut: Optional[np.ndarray] = None

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=float)
        if self.u.shape != (self.grid.Ny, self.grid.Nx):
            raise ParameterError(f"field shape {self.u.shape} does not match grid "
                                 f"({self.grid.Ny}, {self.grid.Nx})")

    def integral(self, values: np.ndarray) -> float:
        return float(values.sum() * self.grid.cell_area)

    def row_means(self) -> np.ndarray:
        return self.u.mean(axis=1)

    def zero_mean(self) -> "Field2D":
        return Field2D(self.grid, self.u - self.row_means()[:, None], self.t)
