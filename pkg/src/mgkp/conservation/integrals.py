"""Conserved integrals, moment relations, the mass charge and Cauchy-data
constraints on periodic grid fields."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..grid import Field2D, Grid2D, dx_spec, inv_dx
from ..params import OutsideEquationDomain, ParameterError, ScaledParams
from .laws import condition

NONLOCAL_KINDS = frozenset({"E_var", "E_var_printed", "Py_var", "E", "E_T9", "E_constraint", "Y_uv"})
KINDS = ("P", "M", "E_var", "E_var_printed", "Py_var", "E", "E_T9", "E_constraint",
         "X", "X_u2", "Y_u2", "Y_uv")


def _pow(u, e):
    e = float(e)
    if e == int(e):
        return u ** int(e)
    if np.any(u < 0):
        raise ParameterError("negative u under a fractional power")
    return u ** e


def potential_v(sp: ScaledParams, fld: Field2D) -> np.ndarray:
    """v = d_x^{-1} u_y in the zero-mean gauge."""
    g = fld.grid
    KX, KY = g.kmesh()
    m = fld.u.mean(axis=1)
    if np.max(np.abs(m - m.mean())) > 1e-10 * max(1.0, float(np.abs(fld.u).max())):
        raise ParameterError("nonzero x-mean variation across rows: d_x^-1 u_y is undefined")
    U = np.fft.fft2(fld.u)
    with np.errstate(divide="ignore", invalid="ignore"):
        V = np.where(KX != 0, KY / KX * U, 0.0)
    return np.real(np.fft.ifft2(V))


def first_moment(values: np.ndarray, grid: Grid2D, axis: str) -> float:
    """Integral of coordinate * values over the box, exact for the
    trigonometric interpolant of the samples.

    Trapezoid sums of x * f pick up the Gibbs oscillations of the periodic
    sawtooth, which spoils moment relations at the 1e-3 level.
    """
    if axis == "x":
        vals, L, n, d_other = values, grid.Lx, grid.Nx, grid.dy
    elif axis == "y":
        vals, L, n, d_other = values.T, grid.Ly, grid.Ny, grid.dx
    else:
        raise ValueError("axis must be 'x' or 'y'")
    c = np.fft.fft(vals, axis=1) / n
    k = 2 * math.pi * np.fft.fftfreq(n, d=L / n)
    keep = k != 0
    if n % 2 == 0:
        keep[n // 2] = False
    # on [-L/2, L/2): int x e^{ik(x + L/2)} dx = L/(ik); the mean mode integrates to 0
    row = np.real((c[:, keep] * (L / (1j * k[keep]))).sum(axis=1))
    return float(row.sum() * d_other)


def conserved_integral(kind: str, sp: ScaledParams, fld: Field2D) -> float:
    """Grid quadrature (trapezoid = spectral for periodic data) of a density."""
    u = fld.u
    g = fld.grid
    q = sp.qf
    s1, s2, a, b = sp.sigma1, sp.sigma2, sp.a, sp.b
    if kind == "P":
        return fld.integral(0.5 * u * u)
    if kind == "M":
        return fld.integral(u)
    if kind == "X":
        return 0.5 * first_moment(u, g, "x")
    if kind == "X_u2":
        return 0.5 * first_moment(u * u, g, "x")
    if kind == "Y_u2":
        return 0.5 * first_moment(u * u, g, "y")
    if kind not in NONLOCAL_KINDS:
        raise ValueError(f"unknown integral kind {kind!r}")
    v = potential_v(sp, fld)
    if kind == "Py_var":
        return fld.integral(0.5 * u * v)
    if kind == "Y_uv":
        return 0.5 * first_moment(u * v, g, "y")
    ux = dx_spec(u, g)
    if kind == "E_var":
        dens = 0.5 * ux ** 2 - 0.5 * s2 * v ** 2 - 0.5 * s1 / ((q + 1) * (2 * q + 1)) * _pow(u, 2 * q + 2)
        if b != 0:
            dens = dens - 0.5 * b / (q + 1) * _pow(u, q + 1) * v
        return fld.integral(dens)
    if kind == "E_var_printed":
        c = 2 * q + 1
        up1 = _pow(u, q + 1)
        dens = 0.5 * (ux ** 2 - s1 / ((q + 1) * c) * (up1 + 0.5 * b * c * v) ** 2
                      - (s2 + 0.25 * b * b * c * c) * v ** 2)
        return fld.integral(dens)
    if q != 1:
        raise ParameterError(f"{kind} is defined for q = 1 only")
    if kind == "E":
        return (b - a) * fld.integral(1.5 * ux ** 2 - 0.25 * s1 * (u * u - (a + b) * v) ** 2)
    if kind == "E_T9":
        return fld.integral(1.5 * (b - a) * ux ** 2 + 0.25 * s1 * (a - b) * u ** 4
                            - 0.5 * s2 * (a + b) * v ** 2 - s1 * s2 * u * u * v)
    # E_constraint
    return fld.integral(1.5 * ux ** 2 + 0.25 * s2 * (u * u - (a + b) * v) ** 2)


# moment relations -----------------------------------------------------------

def _moment_terms(kind: str, sp: ScaledParams, I: dict, printed: bool):
    """(moment series whose derivative is taken, right-hand side series)."""
    s1, s2, a, b = sp.sigma1, sp.sigma2, sp.a, sp.b
    zero = np.zeros_like(I["P"])
    if kind == "x-L1":
        rhs = s1 * I["P"] if printed else 0.5 * s1 * I["P"]
        return I["X"], rhs
    if kind == "x-L2":
        return I["X_u2"] + 2 * I["Y_uv"], -3 * I["E_var"]
    if kind == "y-L2":
        if printed:
            return I["Y_u2"], s1 * s2 * I["P"] / a
        return 2 * I["X"] - a * s2 * I["Y_u2"], zero
    if kind == "y-L2-var":
        if printed:
            return I["Y_u2"], 1.5 * b * I["P"] - (2 * s2 - 0.75 * s1 * b * b) * I["Py_var"]
        K = 4 / 3 * s1 * s2 - 0.5 * b * b
        return 2 * b * I["X"] - 4 / 3 * s1 * I["Y_u2"], -2 * K * I["Py_var"]
    raise ValueError(f"unknown moment relation {kind!r}")


MOMENT_REQUIRES = {
    "x-L1": ("P", "X"),
    "x-L2": ("P", "X_u2", "Y_uv", "E_var"),
    "y-L2": ("P", "X", "Y_u2"),
    "y-L2-var": ("P", "X", "Y_u2", "Py_var"),
    "y-L2-neg": ("P",),
}

_MOMENT_CONDITION = {"x-L1": 6, "x-L2": 5, "y-L2": 8, "y-L2-var": 7, "y-L2-neg": 10}


def moment_relation_residual(kind: str, sp: ScaledParams, trace, printed: bool = False) -> float:
    """max |d/dt(moment) - rhs| over the trace, derivative by second-order
    finite differences of the sampled series."""
    law = _MOMENT_CONDITION.get(kind)
    if law is None:
        raise ValueError(f"unknown moment relation {kind!r}")
    if kind == "y-L2-neg" or sp.outside_domain:
        raise OutsideEquationDomain("q = -2 relation lies outside the equation's domain")
    if not condition(law, sp):
        raise ParameterError(f"relation {kind} does not hold for these parameters")
    t = np.asarray(trace.times, dtype=float)
    if t.size < 3:
        raise ParameterError("trace too short: need at least 3 samples")
    I = {k: np.asarray(trace.integrals[k], dtype=float) for k in MOMENT_REQUIRES[kind]}
    mom, rhs = _moment_terms(kind, sp, I, printed)
    d = np.gradient(mom, t, edge_order=2)
    return float(np.max(np.abs(d - rhs)))


# topological charge ---------------------------------------------------------

def _segment_integral(values: np.ndarray, period: float, origin: float, s0: float, s1: float) -> float:
    """Exact integral from s0 to s1 of the trigonometric interpolant of
    periodic samples values[j] at origin + j*period/N."""
    n = values.size
    c = np.fft.fft(values) / n
    k = 2 * math.pi * np.fft.fftfreq(n, d=period / n)
    total = c[0].real * (s1 - s0)
    a0, a1 = s0 - origin, s1 - origin
    nz = k != 0
    if n % 2 == 0:
        nyq = n // 2
        nz[nyq] = False
        kn = abs(k[nyq])
        total += c[nyq].real * (math.sin(kn * a1) - math.sin(kn * a0)) / kn
    kk = k[nz]
    total += float(np.real(np.sum(c[nz] * (np.exp(1j * kk * a1) - np.exp(1j * kk * a0)) / (1j * kk))))
    return float(total)


@dataclass
class ChargeResult:
    value: float
    tolerance: float
    length: float
    scale: float
    curve: list

    @property
    def passed(self) -> bool:
        return abs(self.value) <= self.tolerance

    def as_dict(self) -> dict:
        return {"curve": [list(map(float, p)) for p in self.curve], "value": self.value,
                "tolerance": self.tolerance, "pass": self.passed}


CHARGE_RTOL = 1e-4


def mass_charge_fluxes(sp: ScaledParams, fld: Field2D, ut: np.ndarray | None = None):
    """(-Y, X + w_t) of the mass law with f = 1, in the gauge where the
    potential equation holds pointwise on the periodic grid.

    The zero-mean d_x^{-1} u_y is shifted by a y-dependent constant that
    absorbs the row mean of b u^q u_y (which the solver projects out).
    """
    if sp.a != 0:
        raise ParameterError("mass charge on the periodic grid is implemented for a = 0")
    from ..solver import rhs as solver_rhs
    g = fld.grid
    q = sp.qf
    u = fld.u
    if ut is None:
        ut = solver_rhs(sp, fld).u
    up1 = _pow(u, q + 1)
    v = potential_v(sp, fld) - sp.sigma2 * sp.b / (q + 1) * up1.mean(axis=1, keepdims=True)
    wt = inv_dx(ut, g, strict=True, tol=1e-8)
    Xf = dx_spec(u, g, 2) + sp.sigma1 / (2 * q + 1) * _pow(u, 2 * q + 1) + wt
    mY = -sp.b / (q + 1) * up1 - sp.sigma2 * v
    return mY, Xf


def _validate_curve(curve, grid: Grid2D):
    pts = [tuple(map(float, p)) for p in curve]
    if len(pts) < 4 or pts[0] != pts[-1]:
        raise ParameterError("curve is not closed (first vertex must equal the last)")
    for (x0, y0), (x1, y1) in zip(pts[:-1], pts[1:]):
        if x0 != x1 and y0 != y1:
            raise ParameterError("curve segments must be axis-aligned")
    for x, y in pts:
        for c, orig, d in ((x, -grid.Lx / 2, grid.dx), (y, -grid.Ly / 2, grid.dy)):
            r = (c - orig) / d
            if abs(r - round(r)) > 1e-9:
                raise ParameterError(f"vertex ({x:g}, {y:g}) is not on a grid line")
    return pts


def rectangle(grid: Grid2D, ix0: int, ix1: int, iy0: int, iy1: int) -> list:
    """Counter-clockwise rectangle through grid-line indices."""
    x, y = grid.x, grid.y
    X0, X1, Y0, Y1 = x[ix0], x[ix1], y[iy0], y[iy1]
    return [(X0, Y0), (X1, Y0), (X1, Y1), (X0, Y1), (X0, Y0)]


def topological_charge(id_: int, sp: ScaledParams, fld: Field2D, curve: Sequence,
                       ut: np.ndarray | None = None) -> ChargeResult:
    """Closed line integral of -Y dx + X dy along an axis-aligned polygon on
    grid lines; edge integrals are exact for the Fourier interpolant."""
    if id_ != 2:
        raise ParameterError("only the mass charge (id 2) is implemented on grids")
    g = fld.grid
    pts = _validate_curve(curve, g)
    mY, Xf = mass_charge_fluxes(sp, fld, ut)
    total, length, scale = 0.0, 0.0, 0.0
    for (x0, y0), (x1, y1) in zip(pts[:-1], pts[1:]):
        if x0 == x1 and y0 == y1:
            continue
        if y0 == y1:
            iy = int(round((y0 + g.Ly / 2) / g.dy)) % g.Ny
            row = mY[iy]
            total += _segment_integral(row, g.Lx, -g.Lx / 2, x0, x1)
            length += abs(x1 - x0)
            scale = max(scale, float(np.abs(row).max()))
        else:
            ix = int(round((x0 + g.Lx / 2) / g.dx)) % g.Nx
            col = Xf[:, ix]
            total += _segment_integral(col, g.Ly, -g.Ly / 2, y0, y1)
            length += abs(y1 - y0)
            scale = max(scale, float(np.abs(col).max()))
    return ChargeResult(total, CHARGE_RTOL * length * scale, length, scale, pts)


# Cauchy-data constraints ------------------------------------------------------

@dataclass
class ConstraintReport:
    P: float
    Py: float
    E: float
    items: list = field(default_factory=list)

    @property
    def caveats(self) -> list:
        return [it["caveat"] for it in self.items if it.get("caveat")]

    def as_dict(self) -> dict:
        return {"P": self.P, "Py": self.Py, "E": self.E, "constraints": self.items,
                "caveats": self.caveats}


def constraint_diagnostics(sp: ScaledParams, u0: Field2D, rtol: float = 1e-8) -> ConstraintReport:
    """Integral constraints on decaying initial data for q = 1."""
    if sp.q != 1:
        raise ParameterError("constraint diagnostics apply to q = 1 only")
    P = conserved_integral("P", sp, u0)
    Py = conserved_integral("Py_var", sp, u0)
    E = conserved_integral("E_constraint", sp, u0)
    scale = max(P, 1e-300)
    items = []
    items.append({
        "case": "i", "quantity": "Py", "value": Py,
        "relation_holds": condition(13, sp),
        "satisfied": abs(Py) <= rtol * max(scale, 1.0),
        "caveat": None if abs(Py) <= rtol * max(scale, 1.0)
        else "nonzero y-momentum: decaying data are excluded",
    })
    ok_l2 = sp.a == sp.b
    items.append({
        "case": "ii", "quantity": "P", "value": P,
        "relation_holds": condition(12, sp),
        "satisfied": ok_l2 or P == 0,
        "caveat": None if (ok_l2 or P <= 0) else "ill-posed in L² caveat",
    })
    energy_ok_params = sp.sigma1 == 1 and sp.sigma2 == -1
    e_zero = abs(E) <= rtol * max(1.0, abs(E) + P)
    if energy_ok_params:
        cav = None if e_zero else "energy-space caveat: data must have zero energy"
    else:
        cav = "energy-space caveat: ill-posed in the energy space"
        if sp.sigma2 == 1 and E > 0:
            cav += " (energy is positive)"
    items.append({
        "case": "iii", "quantity": "E", "value": E,
        "relation_holds": condition(14, sp),
        "satisfied": energy_ok_params and e_zero,
        "caveat": cav,
    })
    return ConstraintReport(P, Py, E, items)
