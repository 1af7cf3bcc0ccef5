"""Speed/angle kinematics of line solitons and shocks.

A line wave moving with speed c in the direction at angle theta to the x axis
has mu = tan(theta) and nu = c sec(theta). Everything here is written in
terms of kcoef**2 (``k2``), which may be overridden to study a curve of the
family directly.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .params import ParameterError, ScaledParams
from .travelling import (Family, InadmissibleError, LineWaveSolution, Polarity,
                         SolutionKind, WaveFrame, classify, construct, kcoef, q_class,
                         reduced_constants)

SHOCK_TOL = 1e-8
BISECT_TOL = 1e-10


def vartheta(c: float) -> float:
    """Angle at which the minimum speed (normal dispersion) equals c."""
    if c < 0:
        raise ParameterError("vartheta needs c >= 0")
    return math.atan(math.sqrt(0.5 * c * (math.sqrt(c * c + 4) + c)))


def _check_theta(theta: float):
    if not abs(theta) < math.pi / 2:
        raise ParameterError("|theta| must be below pi/2 (pure-y propagation is excluded)")


def _k2(sp: ScaledParams, k2: Optional[float]) -> float:
    return kcoef(sp) ** 2 if k2 is None else float(k2)


def _sin2_over_cos(theta: float) -> float:
    return math.sin(theta) ** 2 / math.cos(theta)


def speed_bounds(sp: ScaledParams, theta: float,
                 k2: Optional[float] = None) -> tuple[float, Optional[float]]:
    """(c_min, c_max); c_max is None in the focussing case."""
    _check_theta(theta)
    r = _sin2_over_cos(theta)
    c_min = sp.sigma2 * r
    if sp.sigma1 == 1:
        return c_min, None
    return c_min, (sp.sigma2 + _k2(sp, k2)) * r


def shock_speed(sp: ScaledParams, theta: float, k2: Optional[float] = None) -> float:
    """Speed on the shock curve (only meaningful for sigma1 = -1)."""
    _check_theta(theta)
    return (sp.sigma2 + _k2(sp, k2)) * _sin2_over_cos(theta)


@dataclass(frozen=True)
class SignChoice:
    s: int
    s_tilde: int


@dataclass(frozen=True)
class AllowedKind:
    kind: SolutionKind
    signs: tuple[SignChoice, ...]
    needs_theta_sign: Optional[int] = None


@dataclass(frozen=True)
class AdmissibilityResult:
    c: float
    theta: float
    kinds: tuple[AllowedKind, ...]
    c_min: float
    c_max: Optional[float]
    c_shock: Optional[float]
    reason: str = ""

    @property
    def admissible(self) -> bool:
        return bool(self.kinds)

    @property
    def soliton(self) -> bool:
        return any(not ak.kind.is_shock for ak in self.kinds)

    @property
    def shock(self) -> bool:
        return any(ak.kind.is_shock for ak in self.kinds)

    def label(self) -> str:
        return ";".join(str(ak.kind) for ak in self.kinds)


def _sgn(v: float) -> int:
    return 1 if v > 0 else (-1 if v < 0 else 0)


def _soliton_signs(sp: ScaledParams, kind: SolutionKind, theta: float, k: float):
    """Sign choices of the (c, theta) soliton forms for an admitted kind."""
    st = _sgn(theta)
    cls = q_class(sp.q)
    if sp.sigma1 == 1:
        if cls == "even":
            return tuple(SignChoice(s, st) for s in (1, -1)), None
        if cls == "odd":
            return tuple(SignChoice(s, s * st) for s in (1, -1)), None
        return (SignChoice(1, st),), None
    if cls == "even":
        return tuple(SignChoice(s, 1) for s in (1, -1)), _sgn(k)
    if cls == "odd":
        return (SignChoice(_sgn(k * theta), 1),), None
    return (SignChoice(1, 1),), _sgn(k)


def _shock_signs(sp: ScaledParams, k: float):
    cls = q_class(sp.q)
    if cls == "even":
        return tuple(SignChoice(1, s) for s in (1, -1)), _sgn(k)
    if cls == "odd":
        return (SignChoice(1, 1),), None
    return (SignChoice(1, 1),), _sgn(k)


def admissible(sp: ScaledParams, c: float, theta: float,
               k2: Optional[float] = None) -> AdmissibilityResult:
    _check_theta(theta)
    c_min, c_max = speed_bounds(sp, theta, k2)
    c_sh = shock_speed(sp, theta, k2) if sp.sigma1 == -1 else None
    k = kcoef(sp) if k2 is None else math.copysign(math.sqrt(k2), kcoef(sp) or 1.0)
    kinds: list[AllowedKind] = []
    reasons = []
    A_pos = c > c_min
    if not A_pos:
        reasons.append(f"c <= c_min = {c_min:.17g}")
    if sp.sigma1 == 1:
        if A_pos:
            kind = classify(sp, _rc_for(sp, c, theta, k))
            for kd in kind:
                signs, th = _soliton_signs(sp, kd, theta, k)
                kinds.append(AllowedKind(kd, signs, th))
    else:
        cls = q_class(sp.q)
        need = None if cls == "odd" else _sgn(k)
        sign_ok = theta != 0 and k != 0 and (need is None or _sgn(theta) == need)
        if not sign_ok:
            reasons.append("sgn(theta) must equal sgn(kcoef)" if theta != 0 and k != 0
                           else "defocussing waves need theta != 0 and kcoef != 0")
        on_shock = abs(c - c_sh) <= SHOCK_TOL * (1 + abs(c))
        if A_pos and sign_ok and c < c_max and not on_shock:
            kd = _defocus_soliton_kind(sp, theta, k)
            signs, th = _soliton_signs(sp, kd, theta, k)
            kinds.append(AllowedKind(kd, signs, th))
        elif A_pos and c >= c_max and not on_shock:
            reasons.append(f"c >= c_max = {c_max:.17g}")
        if on_shock and sign_ok and c_sh > c_min:
            kd = _shock_kind(sp, theta, k)
            signs, th = _shock_signs(sp, k)
            kinds.append(AllowedKind(kd, signs, th))
    return AdmissibilityResult(c=c, theta=theta, kinds=tuple(kinds), c_min=c_min,
                               c_max=c_max, c_shock=c_sh, reason="; ".join(reasons))


def _rc_for(sp, c, theta, k):
    return reduced_constants(sp, WaveFrame.from_ctheta(c, theta))


def _defocus_soliton_kind(sp, theta, k) -> SolutionKind:
    cls = q_class(sp.q)
    if cls == "even":
        return SolutionKind(Family.SYMMETRIC_SOLITON_PAIR, Polarity.PAIR)
    if cls == "half":
        return SolutionKind(Family.BRIGHT_SOLITON, Polarity.BRIGHT)
    pol = Polarity.BRIGHT if k * theta > 0 else Polarity.DARK
    return SolutionKind(Family.SINGLE_SOLITON, pol)


def _shock_kind(sp, theta, k) -> SolutionKind:
    cls = q_class(sp.q)
    if cls == "even":
        return SolutionKind(Family.SYMMETRIC_SHOCK_PAIR, Polarity.PAIR)
    if cls == "half":
        return SolutionKind(Family.BRIGHT_SHOCK, Polarity.BRIGHT)
    pol = Polarity.BRIGHT if k * theta > 0 else Polarity.DARK
    return SolutionKind(Family.SINGLE_SHOCK, pol)


# closed forms in terms of (c, theta)

def _bq(sp: ScaledParams) -> float:
    q = sp.qf
    return ((q + 1) * (2 * q + 1)) ** (1 / (2 * q))


def _g_factor(sp: ScaledParams, c: float, theta: float) -> float:
    """A / tan(theta)^2 written through c_min."""
    c_min = abs(_sin2_over_cos(theta))
    return c / c_min - 1 if sp.sigma2 == 1 else 1 + c / c_min


def _root_factor(sp: ScaledParams, c: float, theta: float, k: float) -> float:
    """R / (sqrt|B| tan|theta|) in the printed forms."""
    g = _g_factor(sp, c, theta)
    k2 = k * k
    if sp.sigma1 == 1:
        return math.sqrt(k2 + g)
    _, c_max = speed_bounds(sp, theta, k2)
    if c_max == 0:
        return math.sqrt(max(k2 - g, 0.0))
    return math.sqrt((k2 + sp.sigma2) * (1 - c / c_max))


def _qroot(v, q: float, cls: str):
    v = np.asarray(v, dtype=float)
    if cls == "odd":
        return np.sign(v) * np.abs(v) ** (1 / q)
    return v ** (1 / q)


@dataclass(frozen=True)
class CThetaForm:
    """Printed (c, theta) closed form: s * Bq * (g tan|theta|)^(1/q) / (den)^(1/q)."""

    q: float
    cls: str
    s: int
    lead: float
    root: float
    g: float
    tabs: float

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        kap = self.q * math.sqrt(self.g) * self.tabs
        z = kap * np.abs(xi)
        e1 = np.exp(-z)
        # log(lead + root cosh z) evaluated without overflow
        log_den = z + np.log(0.5 * self.root * (1 + e1 * e1) + self.lead * e1)
        scale = ((self.q + 1) * (2 * self.q + 1)) ** (1 / (2 * self.q))
        return self.s * scale * np.exp((math.log(self.g * self.tabs) - log_den) / self.q)


@dataclass(frozen=True)
class ShockCThetaForm:
    q: float
    cls: str
    s_tilde: int
    num: float
    kap: float
    scale: float

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        return (self.s_tilde * self.scale * _qroot(self.num, self.q, self.cls)
                * np.exp(-np.logaddexp(0.0, -self.kap * xi) / self.q))


def ctheta_height_width(sp: ScaledParams, c: float, theta: float, s_tilde: int = None,
                        k2: Optional[float] = None) -> tuple[float, float]:
    """Printed (h, w) of the soliton with speed c and angle theta."""
    if theta == 0:
        raise ParameterError("the (c, theta) forms need theta != 0")
    k = kcoef(sp) if k2 is None else math.copysign(math.sqrt(k2), kcoef(sp) or 1.0)
    g = _g_factor(sp, c, theta)
    if g <= 0:
        raise InadmissibleError("c is below the minimum speed")
    tabs = abs(math.tan(theta))
    root = _root_factor(sp, c, theta, k)
    lead = (s_tilde if s_tilde is not None else _sgn(theta)) * k if sp.sigma1 == 1 else abs(k)
    q = sp.qf
    h = _bq(sp) * (abs(root - lead) * tabs) ** (1 / q)
    w = 1.0 / (q * math.sqrt(g) * tabs)
    return h, w


def shock_height_width(sp: ScaledParams, theta: float,
                       k2: Optional[float] = None) -> tuple[float, float]:
    if theta == 0:
        raise ParameterError("the shock forms need theta != 0")
    k = math.sqrt(_k2(sp, k2))
    tabs = abs(math.tan(theta))
    q = sp.qf
    return _bq(sp) * (k * tabs) ** (1 / q), 1.0 / (q * k * tabs)


def _shock_tan2_from_c(sp: ScaledParams, c: float, k2: Optional[float]) -> tuple[float, float]:
    kk = _k2(sp, k2)
    p = abs(kk + sp.sigma2)
    ca = abs(c)
    return ca * (math.sqrt(c * c + 4 * p * p) + ca) / (2 * p * p), kk


def shock_width_from_c(sp: ScaledParams, c: float, k2: Optional[float] = None) -> float:
    tan2, kk = _shock_tan2_from_c(sp, c, k2)
    return 1.0 / (sp.qf * math.sqrt(kk * tan2))


def shock_height_from_c(sp: ScaledParams, c: float, k2: Optional[float] = None,
                        printed: bool = False) -> float:
    """Shock height as a function of its speed along the shock curve.

    ``printed`` uses |k^2 + sigma2| to the first power in the denominator
    instead of its square, which disagrees with the angle form.
    """
    q = sp.qf
    tan2, kk = _shock_tan2_from_c(sp, c, k2)
    inner = (q + 1) * (2 * q + 1) * kk * tan2
    if printed:
        inner *= abs(kk + sp.sigma2)
    return inner ** (1 / (2 * q))


def _pick_kind(res: AdmissibilityResult, kind: Optional[SolutionKind], shock: bool):
    pool = [ak for ak in res.kinds if ak.kind.is_shock == shock]
    if kind is not None:
        pool = [ak for ak in pool if ak.kind == kind]
    if not pool:
        raise InadmissibleError(f"(c={res.c:.17g}, theta={res.theta:.17g}) is not admissible"
                                + (f": {res.reason}" if res.reason else ""))
    return pool[0]


def soliton_from_ctheta(sp: ScaledParams, c: float, theta: float,
                        kind: Optional[SolutionKind] = None, s: int = 1) -> LineWaveSolution:
    """Soliton from the printed (c, theta) form.

    ``s`` selects the branch (+1 bright by default); s_tilde follows the
    sign tables. The result's evaluator is the (c, theta) closed form; all
    metadata come from the (mu, nu) construction of the same wave.
    """
    if theta == 0:
        raise ParameterError("the (c, theta) forms need theta != 0")
    res = admissible(sp, c, theta)
    ak = _pick_kind(res, kind, shock=False)
    choice = [sc for sc in ak.signs if sc.s == s]
    if not choice:
        raise InadmissibleError(f"sign s={s} is not available for {ak.kind} at this angle")
    sc = choice[0]
    k = kcoef(sp)
    g = _g_factor(sp, c, theta)
    root = _root_factor(sp, c, theta, k)
    lead = sc.s_tilde * k if sp.sigma1 == 1 else abs(k)
    form = CThetaForm(q=sp.qf, cls=q_class(sp.q), s=sc.s, lead=lead, root=root, g=g,
                      tabs=abs(math.tan(theta)))
    frame = WaveFrame.from_ctheta(c, theta)
    base = construct(sp, frame, ak.kind, sc.s)
    return _with_profile(base, form, sc.s_tilde)


def shock_from_theta(sp: ScaledParams, theta: float, s_tilde: int = 1,
                     printed_orientation: bool = False) -> LineWaveSolution:
    """Shock on the curve c = (sigma2 + k^2) sin^2/cos.

    The default orientation matches the (mu, nu) construction (zero as
    xi -> -infinity). ``printed_orientation`` evaluates the mirror image
    xi -> -xi, which solves the same travelling-wave ODE.
    """
    if sp.sigma1 != -1:
        raise InadmissibleError("line shocks exist only for sigma1 = -1")
    if theta == 0:
        raise ParameterError("the shock forms need theta != 0")
    c = shock_speed(sp, theta)
    res = admissible(sp, c, theta)
    ak = _pick_kind(res, None, shock=True)
    choice = [sc for sc in ak.signs if sc.s_tilde == s_tilde]
    if not choice:
        raise InadmissibleError(f"s_tilde={s_tilde} is not available for {ak.kind}")
    k = kcoef(sp)
    q = sp.qf
    tabs = abs(math.tan(theta))
    kap = q * abs(k) * tabs * (-1 if printed_orientation else 1)
    form = ShockCThetaForm(q=q, cls=q_class(sp.q), s_tilde=s_tilde,
                           num=k * math.tan(theta), kap=kap, scale=_bq(sp))
    frame = WaveFrame.from_ctheta(c, theta)
    rc = reduced_constants(sp, frame)
    # snap onto the curve: Delta is zero up to rounding
    if not rc.delta_is_zero:
        raise InadmissibleError(f"Delta={rc.Delta:.3g} is not zero on the shock curve")
    base = construct(sp, frame, ak.kind, s_tilde)
    return _with_profile(base, form, s_tilde)


def _with_profile(base: LineWaveSolution, form, s_tilde: int) -> LineWaveSolution:
    return dataclasses.replace(base, profile=form, s_tilde=s_tilde)


# region sampling

@dataclass
class RegionGrid:
    c: np.ndarray
    theta: np.ndarray
    admissible: np.ndarray
    kinds: np.ndarray
    boundaries: list = field(default_factory=list)

    def rows(self):
        for i, th in enumerate(self.theta):
            for j, cc in enumerate(self.c):
                yield cc, th, bool(self.admissible[i, j]), self.kinds[i, j]


def _adm_soliton(sp, c, th, k2):
    if th == 0:
        return False
    return admissible(sp, c, th, k2).soliton


def sample_region(sp: ScaledParams, c_range: tuple[float, float],
                  theta_range: tuple[float, float], resolution: int | tuple[int, int],
                  k2: Optional[float] = None, refine: bool = True) -> RegionGrid:
    """Cell-centre admissibility of solitons, with boundaries refined by bisection.

    Boundaries are returned as polylines ``(curve_id, [(c, theta), ...])``:
    ``lower`` where admissibility switches on as c increases and ``upper``
    where it switches off. For sigma1 = -1 the shock curve is emitted as
    ``shock``.
    """
    nc, nt = (resolution, resolution) if isinstance(resolution, int) else resolution
    if nc < 2 or nt < 2:
        raise ParameterError("resolution must be at least 2")
    c0, c1 = map(float, c_range)
    t0, t1 = map(float, theta_range)
    if not (c1 > c0 and t1 > t0):
        raise ParameterError("ranges must be increasing")
    if max(abs(t0), abs(t1)) >= math.pi / 2:
        raise ParameterError("theta range must stay inside (-pi/2, pi/2)")
    dc, dt = (c1 - c0) / nc, (t1 - t0) / nt
    cs = c0 + dc * (np.arange(nc) + 0.5)
    ths = t0 + dt * (np.arange(nt) + 0.5)
    adm = np.zeros((nt, nc), dtype=bool)
    kinds = np.full((nt, nc), "", dtype=object)
    for i, th in enumerate(ths):
        if th == 0:
            continue
        for j, cc in enumerate(cs):
            res = admissible(sp, cc, th, k2)
            adm[i, j] = res.soliton
            kinds[i, j] = ";".join(str(ak.kind) for ak in res.kinds if not ak.kind.is_shock)
    grid = RegionGrid(c=cs, theta=ths, admissible=adm, kinds=kinds)
    if refine:
        lower, upper = [], []
        for i, th in enumerate(ths):
            row = adm[i]
            for j in range(nc - 1):
                if row[j] == row[j + 1]:
                    continue
                lo, hi = cs[j], cs[j + 1]
                left = bool(row[j])
                while hi - lo > BISECT_TOL:
                    mid = 0.5 * (lo + hi)
                    if _adm_soliton(sp, mid, th, k2) == left:
                        lo = mid
                    else:
                        hi = mid
                (upper if left else lower).append((0.5 * (lo + hi), float(th)))
        if lower:
            grid.boundaries.append(("lower", lower))
        if upper:
            grid.boundaries.append(("upper", upper))
        if sp.sigma1 == -1:
            pts = [(shock_speed(sp, th, k2), float(th)) for th in ths]
            pts = [(cc, th) for cc, th in pts if c0 <= cc <= c1]
            if pts:
                grid.boundaries.append(("shock", pts))
    return grid


def boundary_curves(sp: ScaledParams, thetas, k2: Optional[float] = None) -> dict:
    """Closed-form c_min/c_max/shock curves sampled at the given angles."""
    out = {"c_min": [], "c_max": [], "shock": []}
    for th in thetas:
        c_min, c_max = speed_bounds(sp, th, k2)
        out["c_min"].append((c_min, th))
        if c_max is not None:
            out["c_max"].append((c_max, th))
            out["shock"].append((shock_speed(sp, th, k2), th))
    return {k: v for k, v in out.items() if v}
