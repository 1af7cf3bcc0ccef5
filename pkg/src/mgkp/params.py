"""Equation coefficients, scaling normalization and structural predicates.

The scaled potential equation is

.. math::

    G = w_{tx} + (\\sigma_1 w_x^{2q} + a w_x^{q-1} w_y) w_{xx} + b w_x^q w_{xy}
        + w_{xxxx} + \\sigma_2 w_{yy} = 0,

with ``u = w_x`` giving the evolution form used by the solver.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

VARIATIONAL_TOL = 1e-12


class ParameterError(ValueError):
    """Raised for coefficient sets outside an operation's domain."""


class OutsideEquationDomain(ParameterError):
    """Raised when an operation needs q > 0 but got the q = -2 identity-only case."""


def as_fraction(q) -> Fraction:
    if isinstance(q, Fraction):
        return q
    if isinstance(q, int):
        return Fraction(q)
    if isinstance(q, str):
        return Fraction(q.strip())
    if isinstance(q, float):
        return Fraction(q).limit_denominator(64)
    raise ParameterError(f"cannot interpret q={q!r} as a rational number")


@dataclass(frozen=True)
class RawCoefficients:
    """Coefficients of u_t + (alpha u^p + kappa u^{p/2-1} v) u_x + eps u^{p/2} u_y
    + beta u_xxx + gamma v_y = 0 with v the x-antiderivative of u_y."""

    alpha: float
    epsilon: float
    kappa: float
    beta: float
    gamma: float
    p: int

    def __post_init__(self):
        if self.alpha == 0 or self.beta == 0 or self.gamma == 0:
            raise ParameterError("alpha, beta and gamma must be nonzero")
        if int(self.p) != self.p or self.p < 1:
            raise ParameterError("p must be a positive integer")


@dataclass(frozen=True)
class ScaledParams:
    """Normalized coefficients (sigma1, sigma2, a, b, q).

    ``q`` is an exact rational. Only half-integers are accepted unless
    ``allow_rational`` is set; q = -2 is accepted for identity checks only and
    flagged by :attr:`outside_domain`.
    """

    sigma1: int
    sigma2: int
    a: float
    b: float
    q: Fraction
    allow_rational: bool = field(default=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "q", as_fraction(self.q))
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        if self.sigma1 not in (1, -1) or self.sigma2 not in (1, -1):
            raise ParameterError("sigma1 and sigma2 must be +1 or -1")
        q = self.q
        if q == -2:
            return
        if q <= 0:
            raise ParameterError(f"q must be positive (got {q})")
        if q.denominator > 2 and not self.allow_rational:
            raise ParameterError(f"q must be a positive half-integer (got {q}); "
                                 "pass allow_rational=True for general rational q")

    @property
    def outside_domain(self) -> bool:
        return self.q <= 0

    @property
    def qf(self) -> float:
        return float(self.q)

    def require_domain(self):
        if self.outside_domain:
            raise OutsideEquationDomain(f"q={self.q} is outside the equation domain q > 0")

    def as_dict(self) -> dict:
        return {"sigma1": self.sigma1, "sigma2": self.sigma2, "a": self.a,
                "b": self.b, "q": str(self.q)}


@dataclass(frozen=True)
class ScalingTransform:
    """t -> l1 t, x -> l2 x, y -> l3 y, w -> l4 w (old variables in terms of new)."""

    lambda1: float
    lambda2: float
    lambda3: float
    lambda4: float

    def __post_init__(self):
        if 0 in (self.lambda1, self.lambda2, self.lambda3, self.lambda4):
            raise ParameterError("scale factors must be nonzero")

    def apply(self, raw: RawCoefficients) -> dict:
        """Transformed coefficients (alpha, epsilon, kappa, beta, gamma)."""
        q = Fraction(raw.p, 2)
        l1, l2, l3, l4 = self.lambda1, self.lambda2, self.lambda3, self.lambda4

        def signed_pow(base, e: Fraction):
            if base > 0:
                return base ** float(e)
            if e.denominator != 1:
                raise ParameterError("fractional power of a negative scale factor")
            return float(base) ** int(e)

        alpha = l1 * signed_pow(l4, 2 * q) * signed_pow(l2, -(2 * q + 1)) * raw.alpha
        mixed = 0.0
        if raw.epsilon != 0 or raw.kappa != 0:
            mixed = l1 * signed_pow(l4, q) * signed_pow(l2, -q) / l3
        return {
            "alpha": alpha,
            "epsilon": mixed * raw.epsilon,
            "kappa": mixed * raw.kappa,
            "beta": l1 * l2 ** -3 * raw.beta,
            "gamma": l1 * l2 / l3 ** 2 * raw.gamma,
        }

    @property
    def is_identity(self) -> bool:
        return all(abs(v - 1.0) <= 1e-15 for v in
                   (self.lambda1, self.lambda2, self.lambda3, self.lambda4))


def normalize(raw: RawCoefficients) -> tuple[ScaledParams, ScalingTransform]:
    """Scale to |alpha'| = |gamma'| = beta' = 1.

    x is reflected (lambda2 = -1) to make beta' positive unless that would flip
    the sign of u under a half-integer power, in which case time is reversed
    instead. lambda3 and lambda4 are always positive.
    """
    q = Fraction(raw.p, 2)
    half = q.denominator == 2
    mixed = raw.epsilon != 0 or raw.kappa != 0
    l2 = 1.0 if (raw.beta > 0 or (half and mixed)) else -1.0
    l1 = l2 ** 3 / raw.beta
    l3 = math.sqrt(abs(l1 * l2 * raw.gamma))
    l4 = (1.0 / abs(l1 * raw.alpha)) ** (1.0 / float(2 * q))
    tr = ScalingTransform(l1, l2, l3, l4)
    c = tr.apply(raw)
    sp = ScaledParams(sigma1=int(np.sign(c["alpha"])), sigma2=int(np.sign(c["gamma"])),
                      a=c["kappa"], b=c["epsilon"], q=q)
    return sp, tr


def is_variational(sp: ScaledParams, tol: float = VARIATIONAL_TOL) -> bool:
    return abs(sp.a - sp.b * sp.qf / 2) <= tol


def equation_lhs(sp: ScaledParams, jet) -> float:
    """G evaluated on a jet (values may be arrays)."""
    q = sp.qf
    wx = jet["x"]
    return (jet["tx"] + (sp.sigma1 * wx ** (2 * q) + sp.a * wx ** (q - 1) * jet["y"]) * jet["xx"]
            + sp.b * wx ** q * jet["xy"] + jet["xxxx"] + sp.sigma2 * jet["yy"])


def lagrangian_density(sp: ScaledParams, jet) -> float:
    if not is_variational(sp):
        raise ParameterError("Lagrangian exists only when a = b q / 2")
    q = sp.qf
    wt, wx, wy, wxx = jet["t"], jet["x"], jet["y"], jet["xx"]
    return (-0.5 * wt * wx - sp.sigma1 * wx ** (2 * q + 2) / ((2 * q + 2) * (2 * q + 1))
            - sp.b * wx ** (q + 1) * wy / (2 * q + 2) - 0.5 * sp.sigma2 * wy ** 2 + 0.5 * wxx ** 2)


def hamiltonian_density(sp: ScaledParams, u, ux, v):
    """Hamiltonian density in terms of u, u_x and v = x-antiderivative of u_y."""
    if not is_variational(sp):
        raise ParameterError("Hamiltonian structure requires a = b q / 2")
    q = sp.qf
    return (0.5 * ux ** 2 - 0.5 * sp.sigma2 * v ** 2 - sp.b * u ** (q + 1) * v / (2 * (q + 1))
            - sp.sigma1 * u ** (2 * q + 2) / (2 * (q + 1) * (2 * q + 1)))


def dispersion(sp: ScaledParams, k1: float, k2: float) -> tuple[float, float]:
    """Linear frequency and x group velocity, sign as in -(3 k1^2 + s2 k2^2/k1^2)."""
    if k1 == 0:
        raise ParameterError("k1 = 0: the nonlocal operator is singular")
    omega = -k1 ** 3 + sp.sigma2 * k2 ** 2 / k1
    vg = -(3 * k1 ** 2 + sp.sigma2 * k2 ** 2 / k1 ** 2)
    return omega, vg


class SpecialCase(enum.Enum):
    KP = "KP"
    MKP = "mKP"
    MKP_CONTINUED = "mKP-continued"
    GKP = "gKP"
    GENERIC = "generic"


def detect_special_case(sp: ScaledParams, tol: float = 1e-12) -> SpecialCase:
    zero_ab = abs(sp.a) <= tol and abs(sp.b) <= tol
    if sp.q == Fraction(1, 2) and zero_ab and sp.sigma1 == 1:
        return SpecialCase.KP
    if sp.q == 1 and abs(sp.a ** 2 - 2) <= tol and abs(sp.b) <= tol:
        if sp.sigma1 == -1 and sp.sigma2 == 1:
            return SpecialCase.MKP
        if sp.sigma1 * sp.sigma2 == -1:
            return SpecialCase.MKP_CONTINUED
    if zero_ab:
        return SpecialCase.GKP
    return SpecialCase.GENERIC


class WeightKind(enum.Enum):
    MOMENTUM = "Momentum"
    ENERGY_VAR = "EnergyVar"
    ENERGY_NONVAR = "EnergyNonVar"


def scaling_weight(kind: WeightKind, q) -> Fraction:
    """Exponent of lambda picked up by the integral under the scaling symmetry."""
    q = as_fraction(q)
    kind = WeightKind(kind) if not isinstance(kind, WeightKind) else kind
    if q <= 0:
        raise ParameterError("q must be positive")
    if kind is WeightKind.MOMENTUM:
        return 3 - 2 / q
    if kind is WeightKind.ENERGY_VAR:
        return 1 - 2 / q
    if q != 1:
        raise ParameterError("the non-variational energy exists only for q = 1")
    return Fraction(-1)


def criticality(weight: Fraction) -> str:
    if weight == 0:
        return "critical"
    return "subcritical" if weight < 0 else "supercritical"


class MissingJetEntry(KeyError):
    pass


_AXES = "txy"


def _multi_index(key) -> tuple[int, int, int]:
    if isinstance(key, str):
        if key in ("", "w"):
            return (0, 0, 0)
        if any(ch not in _AXES for ch in key):
            raise MissingJetEntry(f"bad derivative label {key!r}")
        return (key.count("t"), key.count("x"), key.count("y"))
    nt, nx, ny = key
    return (int(nt), int(nx), int(ny))


class JetPoint:
    """Derivatives of w at a point (or a batch of points), keyed by order counts.

    ``jet["txx"]`` and ``jet[(1, 2, 0)]`` name the same entry. Lookups of
    entries that were not supplied raise :class:`MissingJetEntry`.
    """

    __slots__ = ("_values", "t", "x", "y")

    def __init__(self, values: dict, t=0.0, x=0.0, y=0.0):
        self._values = {_multi_index(k): v for k, v in values.items()}
        self.t, self.x, self.y = t, x, y

    def __getitem__(self, key):
        idx = _multi_index(key)
        try:
            return self._values[idx]
        except KeyError:
            raise MissingJetEntry(f"jet has no entry for derivative orders {idx}") from None

    def __contains__(self, key):
        return _multi_index(key) in self._values

    def keys(self):
        return self._values.keys()

    @property
    def max_order(self) -> int:
        return max(sum(k) for k in self._values)
