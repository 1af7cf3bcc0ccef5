"""Travelling-wave reduction, classification and closed-form line solitons/shocks.

A line wave is u = U(xi) with xi = x + mu y - nu t. In the half-line gauge
(the x-antiderivative taken from -infinity) U obeys

    (s2 mu^2 - nu) U' + (s1 U^{2q} + (a+b) mu U^q) U' + U''' = 0,

whose first integral is U'^2 + V(U) = 0 with
V = -A U^2 + B U^{2q+2} + 2 C U^{q+2}.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np
from scipy.special import expit

from .params import ParameterError, ScaledParams

DELTA_TOL = 1e-10
OVERFLOW_ARG = 300.0


class InadmissibleError(ParameterError):
    """No solution of the requested kind exists for these parameters."""


def q_class(q: Fraction) -> str:
    """'even', 'odd' or 'half' from the parity of numerator and denominator."""
    q = Fraction(q)
    if q.numerator % 2 == 0:
        return "even"
    return "odd" if q.denominator % 2 == 1 else "half"


def upow(u, q: Fraction):
    """Real power u^q: even-numerator q gives |u|^q, odd/odd q keeps the sign."""
    u = np.asarray(u, dtype=float)
    cls = q_class(q)
    qf = float(q)
    if cls == "half":
        if np.any(u < 0):
            raise ParameterError("negative base under a half-integer power")
        return u ** qf
    mag = np.abs(u) ** qf
    return mag if cls == "even" else np.sign(u) * mag


@dataclass(frozen=True)
class WaveFrame:
    mu: float
    nu: float

    @property
    def theta(self) -> float:
        return math.atan(self.mu)

    @property
    def c(self) -> float:
        return self.nu / math.sqrt(1.0 + self.mu ** 2)

    @classmethod
    def from_ctheta(cls, c: float, theta: float) -> "WaveFrame":
        if not abs(theta) < math.pi / 2:
            raise ParameterError("theta must satisfy |theta| < pi/2")
        mu = math.tan(theta)
        return cls(mu=mu, nu=c * math.sqrt(1.0 + mu * mu))

    def xi(self, t, x, y):
        return x + self.mu * y - self.nu * t


@dataclass(frozen=True)
class ReducedConstants:
    A: float
    B: float
    C: float
    Delta: float
    kcoef: float
    l2: float
    m2: float
    q: Fraction

    @property
    def delta_is_zero(self) -> bool:
        scale = max(self.C ** 2, abs(self.A * self.B))
        return abs(self.Delta) <= DELTA_TOL * scale if scale > 0 else self.Delta == 0


def kcoef(sp: ScaledParams) -> float:
    q = sp.qf
    return math.sqrt(2 * q + 1) / (math.sqrt(q + 1) * (q + 2)) * (sp.a + sp.b)


def reduced_constants(sp: ScaledParams, frame: WaveFrame) -> ReducedConstants:
    sp.require_domain()
    q = sp.qf
    A = frame.nu - sp.sigma2 * frame.mu ** 2
    B = sp.sigma1 / ((q + 1) * (2 * q + 1))
    C = (sp.a + sp.b) * frame.mu / ((q + 1) * (q + 2))
    return ReducedConstants(A=A, B=B, C=C, Delta=C * C + A * B, kcoef=kcoef(sp),
                            l2=(2 * q + 1) * (q + 1) / q ** 2, m2=(q + 1) * (q + 2) / q ** 2,
                            q=sp.q)


def potential_V(rc: ReducedConstants, q, U):
    q = Fraction(q)
    qf = float(q)
    U = np.asarray(U, dtype=float)
    return -rc.A * U ** 2 + rc.B * U ** 2 * upow(U, 2 * q) + 2 * rc.C * U ** 2 * upow(U, q)


def potential_dV(rc: ReducedConstants, q, U):
    q = Fraction(q)
    qf = float(q)
    U = np.asarray(U, dtype=float)
    return (-2 * rc.A * U + (2 * qf + 2) * rc.B * U * upow(U, 2 * q)
            + 2 * (qf + 2) * rc.C * U * upow(U, q))


def roots_of_V(rc: ReducedConstants, q) -> list[tuple[float, int]]:
    """Nonzero real roots of V with multiplicity, from (B U^q + C)^2 = Delta."""
    q = Fraction(q)
    if rc.Delta < 0 and not rc.delta_is_zero:
        return []
    cls = q_class(q)
    if rc.delta_is_zero:
        targets = [(-rc.C / rc.B, 2)]
    else:
        rD = math.sqrt(rc.Delta)
        targets = [((-rc.C + rD) / rc.B, 1), ((-rc.C - rD) / rc.B, 1)]
    inv = 1.0 / float(q)
    roots = []
    for r, mult in targets:
        if r == 0:
            continue
        if cls == "odd":
            roots.append((math.copysign(abs(r) ** inv, r), mult))
        elif r > 0:
            root = r ** inv
            roots.append((root, mult))
            if cls == "even":
                roots.append((-root, mult))
    return sorted(roots)


class Family(enum.Enum):
    SYMMETRIC_SOLITON_PAIR = "SymmetricSolitonPair"
    NONSYMMETRIC_SOLITON_PAIR = "NonsymmetricSolitonPair"
    SINGLE_SOLITON = "SingleSoliton"
    BRIGHT_SOLITON = "BrightSoliton"
    SYMMETRIC_SHOCK_PAIR = "SymmetricShockPair"
    SINGLE_SHOCK = "SingleShock"
    BRIGHT_SHOCK = "BrightShock"

    @property
    def is_shock(self) -> bool:
        return self in (Family.SYMMETRIC_SHOCK_PAIR, Family.SINGLE_SHOCK, Family.BRIGHT_SHOCK)


class Polarity(enum.Enum):
    BRIGHT = "bright"
    DARK = "dark"
    PAIR = "pair"


@dataclass(frozen=True)
class SolutionKind:
    family: Family
    polarity: Polarity

    @property
    def is_shock(self) -> bool:
        return self.family.is_shock

    def __str__(self):
        return f"{self.family.value}/{self.polarity.value}"


def _sgn(v: float) -> int:
    return 1 if v > 0 else -1


def classify(sp: ScaledParams, rc: ReducedConstants) -> list[SolutionKind]:
    """Families that exist for these constants (empty when A <= 0)."""
    if rc.A <= 0:
        return []
    cls = q_class(sp.q)
    shock_curve = rc.delta_is_zero
    if sp.sigma1 == 1:
        fam = {"even": Family.SYMMETRIC_SOLITON_PAIR, "odd": Family.NONSYMMETRIC_SOLITON_PAIR,
               "half": Family.BRIGHT_SOLITON}[cls]
        pol = Polarity.BRIGHT if cls == "half" else Polarity.PAIR
        return [SolutionKind(fam, pol)]
    # defocussing: need C^2/|B| >= A, i.e. Delta >= 0
    if rc.C == 0:
        return []
    if cls == "odd":
        pol = Polarity.BRIGHT if rc.C > 0 else Polarity.DARK
        if shock_curve:
            return [SolutionKind(Family.SINGLE_SHOCK, pol)]
        return [SolutionKind(Family.SINGLE_SOLITON, pol)] if rc.Delta > 0 else []
    if rc.C < 0:
        return []
    if shock_curve:
        return [SolutionKind(Family.SYMMETRIC_SHOCK_PAIR, Polarity.PAIR) if cls == "even"
                else SolutionKind(Family.BRIGHT_SHOCK, Polarity.BRIGHT)]
    if rc.Delta > 0:
        return [SolutionKind(Family.SYMMETRIC_SOLITON_PAIR, Polarity.PAIR) if cls == "even"
                else SolutionKind(Family.BRIGHT_SOLITON, Polarity.BRIGHT)]
    return []


@dataclass(frozen=True)
class _Shape:
    """U = sign * (A / D)^(1/q) with D = Cp + R cosh(kappa xi) (soliton) or
    D = Cp (1 + exp(-kappa xi)) (shock)."""

    sign: int
    A: float
    Cp: float
    R: float
    kappa: float
    q: float
    shock: bool

    def log_D(self, xi):
        xi = np.asarray(xi, dtype=float)
        if self.shock:
            return math.log(self.Cp) + np.logaddexp(0.0, -self.kappa * xi)
        z = self.kappa * np.abs(xi)
        e1 = np.exp(-z)
        return z + np.log(0.5 * self.R * (1.0 + e1 * e1) + self.Cp * e1)

    def value(self, xi):
        return self.sign * np.exp((math.log(self.A) - self.log_D(xi)) / self.q)

    def log_derivs(self, xi):
        """phi', phi'', phi''' for phi = log D."""
        xi = np.asarray(xi, dtype=float)
        k = self.kappa
        if self.shock:
            p = expit(-k * xi)
            r1, r2, r3 = -k * p, k * k * p, -k ** 3 * p
        else:
            z = k * xi
            e = np.exp(-np.abs(z))
            sech = 2 * e / (1 + e * e)
            th = np.tanh(z)
            den = self.Cp * sech + self.R
            r1 = self.R * k * th / den
            r2 = self.R * k * k / den
            r3 = self.R * k ** 3 * th / den
        return r1, r2 - r1 ** 2, r3 - 3 * r1 * r2 + 2 * r1 ** 3


@dataclass(frozen=True)
class LineWaveSolution:
    """An exact line soliton or shock.

    ``s`` is the overall sign of U (the sign of its peak, or of its limit at
    +infinity for shocks); ``s_tilde`` follows the sign tables of the (c, theta)
    forms where it is defined and is None otherwise.
    """

    params: ScaledParams
    frame: WaveFrame
    kind: SolutionKind
    s: int
    s_tilde: Optional[int]
    peak: float
    height: float
    h_plus: Optional[float]
    h_minus: Optional[float]
    width: float
    rc: ReducedConstants
    shape: _Shape = field(repr=False)
    profile: Optional[Callable] = field(default=None, repr=False, compare=False)

    def eval(self, xi):
        xi = np.asarray(xi, dtype=float)
        if self.profile is not None:
            return self.profile(xi)
        return self.shape.value(xi)

    __call__ = eval

    def u(self, t, x, y):
        return self.eval(self.frame.xi(t, x, y))

    def derivatives(self, xi):
        """U, U', U'', U''' from the closed form (log-derivative chain)."""
        U = self.shape.value(xi)
        p1, p2, p3 = self.shape.log_derivs(xi)
        iq = -1.0 / self.shape.q
        s1, s2, s3 = iq * p1, iq * p2, iq * p3
        return U, U * s1, U * (s2 + s1 * s1), U * (s3 + 3 * s1 * s2 + s1 ** 3)

    def as_dict(self) -> dict:
        rc = self.rc
        return {"kind": str(self.kind), "s": self.s, "s_tilde": self.s_tilde,
                "mu": self.frame.mu, "nu": self.frame.nu, "theta": self.frame.theta,
                "c": self.frame.c, "h": self.height, "h_plus": self.h_plus,
                "h_minus": self.h_minus, "w": self.width, "A": rc.A, "B": rc.B,
                "C": rc.C, "Delta": rc.Delta, "kcoef": rc.kcoef}


def _table_s_tilde(sp: ScaledParams, frame: WaveFrame, Cp: float, C: float,
                   shock: bool, sign: int) -> Optional[int]:
    if frame.mu == 0 or kcoef(sp) == 0:
        return None
    if shock:
        return sign if q_class(sp.q) == "even" else 1
    if sp.sigma1 == 1:
        return _sgn(frame.mu) * (1 if Cp == C else -1)
    return None


def construct(sp: ScaledParams, frame: WaveFrame, kind: SolutionKind,
              s: int = 1) -> LineWaveSolution:
    """Build the closed-form solution of ``kind``.

    ``s`` picks the member of a pair (+1 bright/upper, -1 dark/lower) and is
    ignored for kinds whose sign is fixed by the parameters.
    """
    rc = reduced_constants(sp, frame)
    allowed = classify(sp, rc)
    if kind not in allowed:
        raise InadmissibleError(f"{kind} not admitted here (allowed: "
                                f"{', '.join(map(str, allowed)) or 'none'})")
    if s not in (1, -1):
        raise ParameterError("sign selector must be +1 or -1")
    q = sp.qf
    A, C = rc.A, rc.C
    R = 0.0 if rc.delta_is_zero else math.sqrt(rc.Delta)
    fam = kind.family
    cls = q_class(sp.q)
    h_plus = h_minus = None
    if fam is Family.SYMMETRIC_SOLITON_PAIR:
        sign, Cp = s, C
    elif fam is Family.NONSYMMETRIC_SOLITON_PAIR:
        sign, Cp = s, (C if s == 1 else -C)
        h_plus = (A / (C + R)) ** (1 / q)
        h_minus = (A / (R - C)) ** (1 / q)
    elif fam is Family.SINGLE_SOLITON or fam is Family.SINGLE_SHOCK:
        sign, Cp = _sgn(C), abs(C)
    elif fam is Family.SYMMETRIC_SHOCK_PAIR:
        sign, Cp = s, C
    else:
        sign, Cp = 1, C
    if cls == "half" and sign < 0:
        raise ParameterError("half-integer q admits bright solutions only")
    shock = fam.is_shock
    if shock:
        if Cp <= 0:
            raise InadmissibleError("shock requires a positive base")
        height = (A / Cp) ** (1 / q)
    else:
        if Cp + R <= 0:
            raise InadmissibleError("negative base under the 1/q power")
        height = (A / (Cp + R)) ** (1 / q)
    shape = _Shape(sign=sign, A=A, Cp=Cp, R=R, kappa=q * math.sqrt(A), q=q, shock=shock)
    return LineWaveSolution(params=sp, frame=frame, kind=kind, s=sign,
                            s_tilde=_table_s_tilde(sp, frame, Cp, C, shock, sign),
                            peak=sign * height, height=height, h_plus=h_plus,
                            h_minus=h_minus, width=1.0 / (q * math.sqrt(A)), rc=rc,
                            shape=shape)


def construct_first(sp: ScaledParams, frame: WaveFrame, s: int = 1) -> LineWaveSolution:
    kinds = classify(sp, reduced_constants(sp, frame))
    if not kinds:
        raise InadmissibleError("no line soliton or shock for this frame")
    return construct(sp, frame, kinds[0], s)


def _xi_samples(sol: LineWaveSolution, n_samples: int):
    return np.linspace(-10 * sol.width, 10 * sol.width, n_samples)


def ode_terms(sol: LineWaveSolution, xi):
    sp, fr = sol.params, sol.frame
    U, U1, U2, U3 = sol.derivatives(xi)
    lin = (sp.sigma2 * fr.mu ** 2 - fr.nu) * U1
    non = (sp.sigma1 * upow(U, 2 * sp.q) + (sp.a + sp.b) * fr.mu * upow(U, sp.q)) * U1
    return lin, non, U3


def ode_residual(sol: LineWaveSolution, n_samples: int = 2001) -> float:
    """Max |ODE residual| over [-10w, 10w]."""
    lin, non, U3 = ode_terms(sol, _xi_samples(sol, n_samples))
    return float(np.max(np.abs(lin + non + U3)))


def ode_residual_relative(sol: LineWaveSolution, n_samples: int = 2001) -> float:
    lin, non, U3 = ode_terms(sol, _xi_samples(sol, n_samples))
    scale = np.max(np.abs(lin) + np.abs(non) + np.abs(U3))
    return float(np.max(np.abs(lin + non + U3)) / scale) if scale > 0 else 0.0


def first_integral_terms(sol: LineWaveSolution, xi):
    sp, fr = sol.params, sol.frame
    q, qf = sp.q, sp.qf
    U, U1, _, _ = sol.derivatives(xi)
    rhs = ((fr.nu - sp.sigma2 * fr.mu ** 2) * U ** 2
           - sp.sigma1 * U ** 2 * upow(U, 2 * q) / ((qf + 1) * (2 * qf + 1))
           - 2 * (sp.a + sp.b) * fr.mu * U ** 2 * upow(U, q) / ((qf + 1) * (qf + 2)))
    return U1 ** 2, rhs


def first_integral_residual(sol: LineWaveSolution, n_samples: int = 2001) -> float:
    lhs, rhs = first_integral_terms(sol, _xi_samples(sol, n_samples))
    return float(np.max(np.abs(lhs - rhs)))


def first_integral_residual_relative(sol: LineWaveSolution, n_samples: int = 2001) -> float:
    lhs, rhs = first_integral_terms(sol, _xi_samples(sol, n_samples))
    scale = np.max(np.abs(lhs) + np.abs(rhs))
    return float(np.max(np.abs(lhs - rhs)) / scale) if scale > 0 else 0.0


def _lm(sp: ScaledParams) -> tuple[float, float]:
    q = sp.qf
    return math.sqrt((2 * q + 1) * (q + 1)) / q, math.sqrt((q + 1) * (q + 2)) / q


def width_bound(sp: ScaledParams, h: float) -> float:
    """Largest width of a defocussing soliton of height h (w h^q < l)."""
    l, _ = _lm(sp)
    return l / h ** sp.qf


def profile_hw(sp: ScaledParams, h: float, w: float, xi):
    """|U| of the soliton with height h and width w."""
    if h <= 0 or w <= 0:
        raise ParameterError("h and w must be positive")
    q = sp.qf
    l, _ = _lm(sp)
    rho = sp.sigma1 * (w * h ** q / l) ** 2
    if sp.sigma1 == -1 and not w * h ** q < l:
        raise InadmissibleError(f"defocussing soliton needs w h^q < l = {l:.17g} "
                                f"(got {w * h ** q:.17g})")
    xi = np.asarray(xi, dtype=float)
    z = np.abs(xi) / (2 * w)
    # (1+rho) cosh^2 z - rho = e^{2z}/4 [(1+rho)(1+e^{-2z})^2 - 4 rho e^{-2z}]
    e2 = np.exp(-2 * z)
    log_den = 2 * z + np.log(0.25 * ((1 + rho) * (1 + e2) ** 2 - 4 * rho * e2))
    return h * np.exp(-log_den / q)


def shock_profile_hw(sp: ScaledParams, h: float, w: float, xi):
    if sp.sigma1 != -1:
        raise InadmissibleError("line shocks exist only for sigma1 = -1")
    if h <= 0 or w <= 0:
        raise ParameterError("h and w must be positive")
    xi = np.asarray(xi, dtype=float)
    return h * np.exp(-np.logaddexp(0.0, -xi / w) / sp.qf)


def hw_to_angle_speed(sp: ScaledParams, h: float, w: float, shock: bool = False,
                      printed: bool = True) -> tuple[float, float]:
    """Direction angle and speed of the line wave with height h and width w.

    Solitons return |theta|. With ``printed`` the closed forms are used as
    printed: the soliton speed carries (a+b) rather than |a+b| in its
    denominator and the shock speed uses k^2 l^4 and m^4 h^2. Otherwise the
    speed is computed through mu and nu.
    """
    if h <= 0 or w <= 0:
        raise ParameterError("h and w must be positive")
    apb = sp.a + sp.b
    if apb == 0:
        raise ParameterError("a + b = 0: the direction is not determined by (h, w)")
    q = sp.qf
    s1, s2 = sp.sigma1, sp.sigma2
    l, m = _lm(sp)
    l2, m2 = l * l, m * m
    hq = h ** q
    if not shock:
        g = 1 - s1 * w * w * h ** (2 * q) / l2
        theta = math.atan(m2 * abs(g) / (2 * abs(apb) * w * w * hq))
        num = s2 * q * q * m2 ** 2 * g * g + 4 * apb ** 2 * w * w * h ** (2 * q)
        root = math.sqrt(m2 ** 2 * g * g + 4 * apb ** 2 * w ** 4 * h ** (2 * q))
        den_ab = apb if printed else abs(apb)
        return theta, num / (2 * den_ab * q * q * w * w * hq * root)
    if s1 != -1:
        raise InadmissibleError("line shocks exist only for sigma1 = -1")
    theta = math.atan(m2 * hq / (l2 * apb))
    if printed:
        k2 = kcoef(sp) ** 2
        num = k2 * l2 ** 2 + s2 * q * q * m2 ** 2 * w * w * h ** (2 * q)
        den = apb * q * q * l2 * w * w * math.sqrt(apb ** 2 * l2 ** 2 + m2 ** 2 * h ** 2)
        return theta, num / den
    mu = math.tan(theta)
    nu = 1.0 / (q * q * w * w) + s2 * mu * mu
    return theta, nu / math.sqrt(1 + mu * mu)


def hw_of(sol: LineWaveSolution) -> tuple[float, float]:
    return sol.height, sol.width
