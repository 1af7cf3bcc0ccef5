"""Pseudo-spectral integrating-factor RK4 solver on a doubly periodic box.

Evolves u_t = -(s1 u^{2q} + a u^{q-1} v) u_x - b u^q u_y - u_xxx - s2 d_x^{-1} u_yy
with v = d_x^{-1} u_y. The linear part is integrated exactly in Fourier
space; kx = 0 modes of the nonlinear term are projected out, which keeps
every row mean fixed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .grid import Field2D, Grid2D, inv_dx
from .params import ParameterError, ScaledParams, is_variational
from .travelling import LineWaveSolution, WaveFrame, construct_first, q_class


class NumericAbort(RuntimeError):
    def __init__(self, step: int, t: float, msg: str = "non-finite values"):
        super().__init__(f"{msg} at step {step} (t={t:.6g})")
        self.step = step
        self.t = t


@dataclass(frozen=True)
class SolverConfig:
    dt: float
    t_end: float
    dealias: float = 2 / 3
    cfl_guard: float = 200.0
    sample_every: int = 10
    snap_every: int = 0
    nonlocal_mode: str = "zero-mean"
    integrals: tuple = ("P", "M")

    def __post_init__(self):
        if not self.dt > 0:
            raise ParameterError("dt must be positive")
        if self.t_end < 0:
            raise ParameterError("t_end must be nonnegative")
        if not 0 < self.dealias <= 1:
            raise ParameterError("dealias fraction must be in (0, 1]")
        if self.nonlocal_mode != "zero-mean":
            raise ParameterError("only the zero-mean d_x^-1 convention is implemented")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.dt))

    def check_grid(self, grid: Grid2D):
        kmax = float(np.max(np.abs(grid.kx)))
        if self.dt > self.cfl_guard / kmax ** 3:
            raise ParameterError(f"dt={self.dt:g} exceeds cfl_guard/max|kx|^3 = "
                                 f"{self.cfl_guard / kmax ** 3:.3g}")


@dataclass
class EvolutionTrace:
    times: list = field(default_factory=list)
    integrals: dict = field(default_factory=dict)
    snapshots: list = field(default_factory=list)
    snapshot_times: list = field(default_factory=list)
    peak_x: list = field(default_factory=list)
    grid: Optional[Grid2D] = None
    final: Optional[np.ndarray] = None
    steps: int = 0
    meta: dict = field(default_factory=dict)

    def append(self, t: float, values: dict, peak: float):
        if self.times and not t > self.times[-1]:
            raise ValueError("trace times must increase")
        self.times.append(t)
        for k, v in values.items():
            self.integrals.setdefault(k, []).append(v)
        self.peak_x.append(peak)

    def series(self, key: str) -> np.ndarray:
        return np.asarray(self.integrals[key])

    def drift(self, key: str) -> float:
        s = self.series(key)
        return float(np.max(np.abs(s - s[0])) / (1 + abs(s[0])))

    def as_dict(self) -> dict:
        return {"times": list(map(float, self.times)),
                "integrals": {k: list(map(float, v)) for k, v in self.integrals.items()},
                "peak_x": list(map(float, self.peak_x)),
                "snapshot_times": list(map(float, self.snapshot_times)),
                "steps": self.steps, "meta": self.meta}


class SpectralModel:
    """Precomputed symbols and the nonlinear right-hand side for one grid."""

    def __init__(self, sp: ScaledParams, grid: Grid2D, dealias: float = 2 / 3):
        sp.require_domain()
        self.sp, self.grid = sp, grid
        KX, KY = grid.kmesh()
        self.KX, self.KY = KX, KY
        with np.errstate(divide="ignore", invalid="ignore"):
            self.inv_ikx = np.where(KX != 0, 1.0 / (1j * KX), 0.0)
            self.L = np.where(KX != 0, 1j * (KX ** 3 - sp.sigma2 * KY ** 2 / KX), 0.0)
        kxc = dealias * np.max(np.abs(grid.kx))
        kyc = dealias * np.max(np.abs(grid.ky))
        self.mask = (np.abs(KX) <= kxc) & (np.abs(KY) <= kyc)
        self.proj = self.mask & (KX != 0)
        q = sp.q
        self.pad = int(math.ceil(float(q) + 1)) if q >= 2 else 1
        self.q = q
        self._frac = q.denominator != 1

    # powers ---------------------------------------------------------------
    def _pow(self, u, e):
        """u**e with the parity rules of the real branch."""
        from fractions import Fraction
        e = Fraction(e)
        if e == 0:
            return np.ones_like(u)
        if e.denominator == 1:
            return u ** int(e)
        if np.any(u < 0):
            raise ParameterError("negative u under a fractional power")
        if e < 0 and np.any(u == 0):
            raise ParameterError("u = 0 under a negative power")
        return u ** float(e)

    def _pad(self, Uh):
        if self.pad == 1:
            return Uh
        Ny, Nx = Uh.shape
        P = self.pad
        out = np.zeros((Ny * P, Nx * P), dtype=complex)
        hy, hx = Ny // 2, Nx // 2
        out[:hy, :hx] = Uh[:hy, :hx]
        out[:hy, -hx:] = Uh[:hy, -hx:]
        out[-hy:, :hx] = Uh[-hy:, :hx]
        out[-hy:, -hx:] = Uh[-hy:, -hx:]
        return out * P * P

    def _unpad(self, Vh):
        if self.pad == 1:
            return Vh
        P = self.pad
        Ny, Nx = Vh.shape[0] // P, Vh.shape[1] // P
        hy, hx = Ny // 2, Nx // 2
        out = np.zeros((Ny, Nx), dtype=complex)
        out[:hy, :hx] = Vh[:hy, :hx]
        out[:hy, -hx:] = Vh[:hy, -hx:]
        out[-hy:, :hx] = Vh[-hy:, :hx]
        out[-hy:, -hx:] = Vh[-hy:, -hx:]
        return out / (P * P)

    def nonlinear_hat(self, Uh):
        sp = self.sp
        Uh = Uh * self.mask
        u = np.real(np.fft.ifft2(self._pad(Uh)))
        ux = np.real(np.fft.ifft2(self._pad(1j * self.KX * Uh)))
        q = self.q
        terms = sp.sigma1 * self._pow(u, 2 * q) * ux
        if sp.a != 0:
            v = np.real(np.fft.ifft2(self._pad(self.inv_ikx * 1j * self.KY * Uh)))
            terms = terms + sp.a * self._pow(u, q - 1) * v * ux
        if sp.b != 0:
            uy = np.real(np.fft.ifft2(self._pad(1j * self.KY * Uh)))
            terms = terms + sp.b * self._pow(u, q) * uy
        return -self._unpad(np.fft.fft2(terms)) * self.proj

    def rhs_hat(self, Uh):
        return self.L * Uh + self.nonlinear_hat(Uh)


def _check_row_means(u: np.ndarray, tol: float = 1e-10):
    m = u.mean(axis=1)
    if np.max(np.abs(m - m.mean())) > tol * max(1.0, float(np.abs(u).max())):
        raise ParameterError("row means of u must be independent of y "
                             "(the nonlocal term needs u_y to have zero x-mean)")


def rhs(sp: ScaledParams, fld: Field2D, dealias: float = 2 / 3) -> Field2D:
    """u_t for the field (physical space)."""
    _check_row_means(fld.u)
    model = SpectralModel(sp, fld.grid, dealias)
    ut = np.real(np.fft.ifft2(model.rhs_hat(np.fft.fft2(fld.u))))
    return Field2D(fld.grid, ut, fld.t)


def conserved_values(sp: ScaledParams, fld: Field2D, kinds) -> dict:
    from .conservation.integrals import conserved_integral
    return {k: conserved_integral(k, sp, fld) for k in kinds}


def _peak_x(u: np.ndarray, grid: Grid2D) -> float:
    iy, ix = np.unravel_index(np.argmax(np.abs(u)), u.shape)
    return float(grid.x[ix])


def evolve(sp: ScaledParams, u0: Field2D, config: SolverConfig,
           callback: Optional[Callable] = None) -> EvolutionTrace:
    """Integrating-factor RK4 from u0 to t_end."""
    grid = u0.grid
    config.check_grid(grid)
    _check_row_means(u0.u)
    model = SpectralModel(sp, grid, config.dealias)
    kinds = tuple(config.integrals)
    if is_variational(sp):
        kinds = tuple(dict.fromkeys(kinds + ("E_var", "Py_var")))
    dt = config.dt
    E = np.exp(model.L * dt / 2)
    E2 = E * E
    N = model.nonlinear_hat
    Uh = np.fft.fft2(u0.u)
    t = u0.t
    trace = EvolutionTrace(grid=grid)
    trace.meta["row_mean"] = float(u0.u.mean())

    def record(Uh, t):
        u = np.real(np.fft.ifft2(Uh))
        fld = Field2D(grid, u, t)
        trace.append(t, conserved_values(sp, fld, kinds), _peak_x(u, grid))
        return u

    u = record(Uh, t)
    if config.snap_every:
        trace.snapshots.append(u.copy())
        trace.snapshot_times.append(t)
    n = config.n_steps
    # overflow is reported as NumericAbort below
    with np.errstate(over="ignore", invalid="ignore"):
        for step in range(1, n + 1):
            k1 = dt * N(Uh)
            k2 = dt * N(E * (Uh + k1 / 2))
            k3 = dt * N(E * Uh + k2 / 2)
            k4 = dt * N(E2 * Uh + E * k3)
            Uh = E2 * Uh + (E2 * k1 + 2 * E * (k2 + k3) + k4) / 6
            t = u0.t + step * dt
            if not np.all(np.isfinite(Uh)):
                raise NumericAbort(step, t)
            sample = step % config.sample_every == 0 or step == n
            snap = config.snap_every and (step % config.snap_every == 0 or step == n)
            if sample or snap:
                u = record(Uh, t) if sample else np.real(np.fft.ifft2(Uh))
                if snap:
                    trace.snapshots.append(u.copy())
                    trace.snapshot_times.append(t)
                if not np.all(np.isfinite(u)):
                    raise NumericAbort(step, t)
            if callback is not None:
                callback(step, t, Uh)
    trace.final = np.real(np.fft.ifft2(Uh))
    trace.steps = n
    return trace


def reflect(u: np.ndarray) -> np.ndarray:
    """u(-x, -y) on the cell grid x_j = -L/2 + j dx."""
    return np.roll(np.roll(u[::-1, ::-1], 1, axis=0), 1, axis=1)


def reversal_error(sp: ScaledParams, u0: Field2D, config: SolverConfig) -> tuple[float, float]:
    """Evolve forward, map (t, x, y) -> (-t, -x, -y), evolve again.

    Returns (L2 distance to u0 after the round trip, L2 norm of u0).
    """
    fwd = evolve(sp, u0, config)
    back = evolve(sp, Field2D(u0.grid, reflect(fwd.final)), config)
    ret = reflect(back.final)
    g = u0.grid
    err = math.sqrt(float(((ret - u0.u) ** 2).sum() * g.cell_area))
    return err, math.sqrt(float((u0.u ** 2).sum() * g.cell_area))


def time_derivative(sp: ScaledParams, fld: Field2D, h: float = 1e-3,
                    dealias: float = 2 / 3) -> np.ndarray:
    """u_t from the evolution itself: (u(t+h) - u(t-h)) / 2h.

    The backward step uses the reversal symmetry, so both sides are plain
    forward solves of length h.
    """
    cfg = SolverConfig(dt=h, t_end=h, dealias=dealias, sample_every=1)
    fwd = evolve(sp, fld, cfg).final
    back = reflect(evolve(sp, Field2D(fld.grid, reflect(fld.u), fld.t), cfg).final)
    return (fwd - back) / (2 * h)


# seeding -----------------------------------------------------------------

@dataclass
class SeededField:
    field: Field2D
    solution: LineWaveSolution
    seam: float
    row_mean: float
    meta: dict


def seed_soliton_on_grid(sp: ScaledParams, frame: WaveFrame, grid: Grid2D,
                         sol: Optional[LineWaveSolution] = None, seam_tol: float = 1e-12,
                         max_wraps: int = 8) -> SeededField:
    """Samples of U(x + mu y) wrapped periodically, centred at xi = 0.

    mu Ly / Lx must be an integer (number of transverse wraps). The row mean
    is kept (it is the same on every row) rather than subtracted, since
    removing it would no longer give a solution.
    """
    if sol is None:
        sol = construct_first(sp, frame)
    if sol.kind.is_shock:
        raise ParameterError("shocks are not periodic and cannot be seeded")
    ratio = frame.mu * grid.Ly / grid.Lx
    m = round(ratio)
    if abs(ratio - m) > 1e-12 * max(1.0, abs(ratio)) or abs(m) > max_wraps:
        raise ParameterError(f"mu Ly/Lx = {ratio:.6g} must be a small integer for the line to wrap")
    X, Y = grid.mesh()
    xi = np.mod(X + frame.mu * Y + grid.Lx / 2, grid.Lx) - grid.Lx / 2
    u = sol.eval(xi)
    seam = float(abs(sol.eval(grid.Lx / 2)) + abs(sol.eval(-grid.Lx / 2)))
    if seam > seam_tol * sol.height:
        raise ParameterError(f"seam mismatch {seam:.3g} exceeds {seam_tol:g} h; enlarge Lx")
    fld = Field2D(grid, u)
    rm = float(u.mean())
    meta = {"c": frame.c, "theta": frame.theta, "mu": frame.mu, "nu": frame.nu,
            "wraps": m, "h": sol.height, "w": sol.width, "row_mean": rm}
    return SeededField(fld, sol, seam, rm, meta)


def gaussian_seed(grid: Grid2D, amplitude: float = 1.0, width: float = 1.0,
                  center=(0.0, 0.0), order: int = 2) -> Field2D:
    """amplitude * d_x^order of a Gaussian, normalized by width**order.

    Row means are removed (for order >= 1 they vanish up to tail
    truncation). order >= 2 also makes the zero-mean antiderivative
    localized, so nonlocal integrals do not carry an O(1/Lx) gauge offset.
    """
    X, Y = grid.mesh()
    s = (X - center[0]) / width
    g = np.exp(-(s ** 2 + ((Y - center[1]) / width) ** 2) / 2)
    # d^n/ds^n e^{-s^2/2} = (-1)^n He_n(s) e^{-s^2/2}
    he = np.polynomial.hermite_e.hermeval(s, [0] * order + [1])
    u = amplitude * (-1) ** order * he * g
    u = u - u.mean(axis=1, keepdims=True)
    return Field2D(grid, u)


# speed measurement -------------------------------------------------------

def _parabolic_peak(c: np.ndarray) -> float:
    i = int(np.argmax(c))
    n = c.size
    y0, y1, y2 = c[(i - 1) % n], c[i], c[(i + 1) % n]
    den = y0 - 2 * y1 + y2
    off = 0.5 * (y0 - y2) / den if den != 0 else 0.0
    return i + off


def x_shift(u_ref: np.ndarray, u: np.ndarray, grid: Grid2D) -> float:
    """Shift s (mod Lx) with u(x) ~ u_ref(x - s).

    Maximizes the trigonometric interpolant of the row-summed circular
    cross-correlation: parabolic start, then Newton steps.
    """
    A = np.fft.fft(u_ref - u_ref.mean(), axis=1)
    B = np.fft.fft(u - u.mean(), axis=1)
    C = (B * np.conj(A)).sum(axis=0)
    corr = np.real(np.fft.ifft(C))
    s = _parabolic_peak(corr) * grid.dx
    k = grid.kx
    for _ in range(8):
        e = C * np.exp(1j * k * s)
        d1 = -np.sum(k * e.imag)
        d2 = -np.sum(k * k * e.real)
        if d2 >= 0:
            break
        step = d1 / d2
        s -= step
        if abs(step) < 1e-14 * grid.Lx:
            break
    return (s + grid.Lx / 2) % grid.Lx - grid.Lx / 2


def measure_mu(u: np.ndarray, grid: Grid2D) -> float:
    """Slope mu of a line pattern u = U(x + mu y), from row-to-row shifts."""
    shifts = []
    for j in range(grid.Ny - 1):
        s = x_shift(u[j:j + 1], u[j + 1:j + 2], grid)
        shifts.append(s)
    # u(y + dy) = u shifted left by mu dy
    return -float(np.median(shifts)) / grid.dy


def measure_speed(trace: EvolutionTrace, min_snapshots: int = 5) -> tuple[float, float]:
    """(c, theta) of a line wave from the snapshots of a trace."""
    snaps, times = trace.snapshots, np.asarray(trace.snapshot_times)
    if len(snaps) < min_snapshots:
        raise ParameterError(f"need at least {min_snapshots} snapshots")
    grid = trace.grid
    a0 = float(np.abs(snaps[0]).max())
    shifts = [0.0]
    for prev, cur in zip(snaps[:-1], snaps[1:]):
        if float(np.abs(cur).max()) < 0.5 * a0:
            raise ParameterError("peak lost: amplitude fell below half its initial value")
        shifts.append(shifts[-1] + x_shift(prev, cur, grid))
    nu = float(np.polyfit(times, shifts, 1)[0])
    mu = measure_mu(snaps[0], grid)
    return nu / math.sqrt(1 + mu * mu), math.atan(mu)


def synthetic_trace(u0: Field2D, velocity: float, times) -> EvolutionTrace:
    """Trace of u0 translated in x at a fixed speed (spectral shift)."""
    g = u0.grid
    tr = EvolutionTrace(grid=g)
    U = np.fft.fft(u0.u, axis=1)
    for t in times:
        shifted = np.real(np.fft.ifft(U * np.exp(-1j * g.kx[None, :] * velocity * t), axis=1))
        tr.snapshots.append(shifted)
        tr.snapshot_times.append(float(t))
    return tr
