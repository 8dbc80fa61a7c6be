"""Parametric alternatives to exponentiality.

Each family reduces to the unit exponential at ``theta = 0``:

* Makeham: ``g = (1 + theta (1 - e^{-x})) exp(-x - theta (e^{-x} - 1 + x))``
* Weibull: ``g = (1 + theta) x^theta exp(-x^{1 + theta})``
* Gamma:   ``g = x^theta e^{-x} / Gamma(theta + 1)``
* EMNW(beta), an exponential mixture with a negative weight:
  ``g = (1 + theta) e^{-x} - theta beta e^{-beta x}``, ``0 < theta <= 1/(beta - 1)``

Efficiency calculations only need ``h(x) = d g(x, theta)/d theta`` at zero.
Internally ``h`` is carried as ``m(x) = h(x) e^{x}`` so every integral becomes
an expectation under the unit exponential.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.special import gammainc, gammaincinv, gammaln

from .errors import NumericFailureError, ParameterRangeError
from .quadrature import expect

EULER_GAMMA = 0.57721566490153286061


class AltFamily(str, enum.Enum):
    MAKEHAM = "makeham"
    WEIBULL = "weibull"
    GAMMA = "gamma"
    EMNW = "emnw"


@dataclass(frozen=True)
class AlternativeSpec:
    family: AltFamily
    theta: float
    beta: float = 3.0

    def __post_init__(self):
        object.__setattr__(self, "family", AltFamily(self.family))
        theta, beta = float(self.theta), float(self.beta)
        if not np.isfinite(theta) or theta < 0:
            raise ParameterRangeError(f"theta must be >= 0, got {self.theta!r}")
        if self.family is AltFamily.EMNW:
            if not beta > 1:
                raise ParameterRangeError(f"EMNW needs beta > 1, got {self.beta!r}")
            if theta > 1.0 / (beta - 1.0) * (1 + 1e-12):
                raise ParameterRangeError(
                    f"EMNW({beta:g}) needs theta <= 1/(beta - 1) = {1 / (beta - 1):g}, got {theta:g}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "beta", beta)

    @property
    def label(self) -> str:
        if self.family is AltFamily.EMNW:
            return f"EMNW({self.beta:g})"
        return self.family.value.capitalize()

    def to_dict(self):
        d = {"family": self.family.value, "theta": self.theta}
        if self.family is AltFamily.EMNW:
            d["beta"] = self.beta
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(AltFamily(d["family"]), float(d["theta"]), float(d.get("beta", 3.0)))


def _raw_density(family, x, theta, beta=3.0):
    """Density formula without parameter validation (used for theta-differencing)."""
    family = AltFamily(family)
    x = np.asarray(x, dtype=float)
    if family is AltFamily.MAKEHAM:
        return (1 + theta * -np.expm1(-x)) * np.exp(-x - theta * (np.expm1(-x) + x))
    if family is AltFamily.WEIBULL:
        with np.errstate(divide="ignore"):
            logx = np.log(x)
        power = np.where(x > 0, np.exp(theta * logx), 0.0 if theta > 0 else 1.0)
        tail = np.where(x > 0, np.exp(-np.exp((1 + theta) * logx)), 1.0)
        return (1 + theta) * power * tail
    if family is AltFamily.GAMMA:
        with np.errstate(divide="ignore"):
            logx = np.log(x)
        body = np.where(x > 0, np.exp(theta * logx - x - gammaln(theta + 1)),
                        1.0 if theta == 0 else 0.0)
        return body
    return (1 + theta) * np.exp(-x) - theta * beta * np.exp(-beta * x)


def density(spec: AlternativeSpec, x):
    """Density ``g(x, theta)`` of the alternative; zero for ``x < 0``."""
    x = np.asarray(x, dtype=float)
    out = np.where(x >= 0, _raw_density(spec.family, np.maximum(x, 0.0), spec.theta, spec.beta), 0.0)
    return float(out) if out.ndim == 0 else out


def cdf(spec: AlternativeSpec, x):
    """Distribution function, from closed-form antiderivatives."""
    x = np.maximum(np.asarray(x, dtype=float), 0.0)
    th = spec.theta
    if spec.family is AltFamily.MAKEHAM:
        out = -np.expm1(-x - th * (np.expm1(-x) + x))
    elif spec.family is AltFamily.WEIBULL:
        out = -np.expm1(-x ** (1 + th))
    elif spec.family is AltFamily.GAMMA:
        out = gammainc(th + 1, x)
    else:
        b = spec.beta
        out = (1 + th) * -np.expm1(-x) - th * -np.expm1(-b * x)
    return float(out) if out.ndim == 0 else out


def _invert(spec, u, tol=1e-12, max_iter=200):
    """Solve ``cdf(x) = u`` by Newton steps safeguarded with bisection on a bracket."""
    lo = np.zeros_like(u)
    hi = np.ones_like(u)
    while True:
        short = cdf(spec, hi) <= u
        if not short.any():
            break
        hi = np.where(short, 2 * hi, hi)
    x = 0.5 * (lo + hi)
    for _ in range(max_iter):
        fx = cdf(spec, x) - u
        done = np.abs(fx) <= tol
        if done.all():
            return x
        lo = np.where(fx < 0, x, lo)
        hi = np.where(fx > 0, x, hi)
        dens = density(spec, x)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = x - fx / dens
        ok = (dens > 0) & (step > lo) & (step < hi)
        x = np.where(done, x, np.where(ok, step, 0.5 * (lo + hi)))
        if np.all(done | (hi - lo <= 4 * np.finfo(float).eps * np.maximum(hi, 1.0))):
            return x
    raise NumericFailureError("cdf inversion did not converge")


def quantile(spec: AlternativeSpec, u):
    """Inverse distribution function."""
    u = np.asarray(u, dtype=float)
    th = spec.theta
    if spec.family is AltFamily.WEIBULL:
        out = (-np.log1p(-u)) ** (1.0 / (1 + th))
    elif spec.family is AltFamily.GAMMA:
        out = gammaincinv(th + 1, u)
    elif th == 0:
        out = -np.log1p(-u)
    else:
        out = _invert(spec, np.atleast_1d(u)).reshape(u.shape)
    return float(out) if np.ndim(out) == 0 else out


def sample(spec: AlternativeSpec | None, rng: np.random.Generator, size: int) -> np.ndarray:
    """Draw ``size`` variates by inverse transform of uniforms from ``rng``.

    ``spec=None`` draws from the unit exponential.
    """
    u = rng.random(size)
    if spec is None:
        return -np.log1p(-u)
    return np.asarray(quantile(spec, u), dtype=float)


def relative_derivative(family, x, beta: float = 3.0):
    """``m(x) = e^{x} dg(x, theta)/dtheta |_{theta=0}``."""
    family = AltFamily(family)
    x = np.asarray(x, dtype=float)
    if family is AltFamily.MAKEHAM:
        out = 2.0 - 2.0 * np.exp(-x) - x
    elif family is AltFamily.WEIBULL:
        out = 1.0 + (1.0 - x) * np.log(x)
    elif family is AltFamily.GAMMA:
        out = np.log(x) + EULER_GAMMA
    else:
        out = 1.0 - beta * np.exp(-(beta - 1.0) * x)
    return float(out) if out.ndim == 0 else out


def theta_derivative(family, x, beta: float = 3.0):
    """``h(x) = dg(x, theta)/dtheta`` at ``theta = 0``.

    Weibull and Gamma involve ``log x`` and are defined for ``x > 0`` only.
    """
    family = AltFamily(family)
    x = np.asarray(x, dtype=float)
    if family in (AltFamily.WEIBULL, AltFamily.GAMMA) and np.any(x <= 0):
        raise ParameterRangeError(f"{family.value} theta-derivative needs x > 0")
    out = np.exp(-x) * relative_derivative(family, x, beta)
    return float(out) if out.ndim == 0 else out


def kl_curvature_of(m, breaks=()) -> float:
    """``lim 2K(theta)/theta^2 = int h^2 e^x - (int x h)^2`` for ``h = e^{-x} m(x)``."""
    second = expect(lambda s: m(s) ** 2, breaks)
    first = expect(lambda s: s * m(s), breaks)
    out = second - first ** 2
    if not np.isfinite(out):
        raise NumericFailureError(f"KL curvature quadrature diverged: {second!r}, {first!r}")
    return out


def kl_curvature(family, beta: float = 3.0) -> float:
    """Curvature of twice the Kullback-Leibler distance to the exponential family at ``theta = 0``."""
    return kl_curvature_of(lambda s: relative_derivative(family, s, beta))


def kl_distance(spec: AlternativeSpec) -> float:
    """``K(theta) = inf_lambda int g log(g / (lambda e^{-lambda x})) dx``.

    The infimum is attained at ``lambda = 1 / mean``, giving
    ``K = int g log g + log(mean) + 1``.
    """
    def ratio(s):
        return density(spec, s) * np.exp(s)

    def glogg(s):
        r = ratio(s)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(r > 0, r * np.log(np.where(r > 0, density(spec, s), 1.0)), 0.0)

    breaks = (1.0, 5.0)
    neg_entropy = expect(glogg, breaks)
    mean = expect(lambda s: s * ratio(s), breaks)
    return neg_entropy + np.log(mean) + 1.0
