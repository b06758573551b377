"""Nonlinearity families, admissible frequency windows, and conserved functionals.

Everything downstream (shooting, evolution, minimization, the 1D appendix
machinery) consumes the definitions in this module.  The three families are

* ``CUBIC_LOG_2D``   : i u_t + (1/2) Lap u = lam * u |u|^2 ln|u|^2   on R^2
* ``QUINTIC_LOG_1D`` : i u_t + (1/2) u_xx  = lam * u |u|^4 ln|u|^2   on R
* ``PURE_CUBIC_2D``  : focusing cubic reference, stationary form
                       -(1/2) Lap Q - lam Q^3 + omega Q = 0
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    MissingOmega,
    NegativeAmplitude,
    NonFiniteField,
    NonPositiveLambda,
    OmegaOutOfWindow,
)

# Log-weighted terms evaluate to exactly 0 below this amplitude: z^3 ln z^2 -> 0
# and -inf * 0 must never reach the float pipeline.
AMPLITUDE_CLAMP = 1e-150
_DENSITY_CLAMP = AMPLITUDE_CLAMP ** 2


class Family(str, Enum):
    CUBIC_LOG_2D = "cubic_log_2d"
    QUINTIC_LOG_1D = "quintic_log_1d"
    PURE_CUBIC_2D = "pure_cubic_2d"

    @property
    def dim(self) -> int:
        return 1 if self is Family.QUINTIC_LOG_1D else 2


@dataclass(frozen=True)
class ModelParams:
    """Nonlinearity family plus coupling ``lam`` and optional frequency ``omega``."""

    family: Family
    lam: float
    omega: float | None = None

    def __post_init__(self):
        if self.lam < 0:
            raise NonPositiveLambda(f"coupling must be >= 0, got {self.lam}")
        if self.omega is not None:
            lo, hi = omega_window_unchecked(self.family, self.lam)
            if not lo < self.omega < hi:
                raise OmegaOutOfWindow(
                    f"omega={self.omega} outside ({lo}, {hi}) for {self.family.value}"
                )

    @property
    def dim(self) -> int:
        return self.family.dim

    def require_omega(self) -> float:
        if self.omega is None:
            if self.family is Family.PURE_CUBIC_2D:
                return 1.0  # Q-normalization
            raise MissingOmega("operation requires a frequency omega")
        return float(self.omega)

    def with_omega(self, omega: float) -> "ModelParams":
        return ModelParams(self.family, self.lam, omega)


def omega_window_unchecked(family: Family, lam: float) -> tuple[float, float]:
    if family is Family.CUBIC_LOG_2D:
        return 0.0, lam / (2.0 * math.sqrt(math.e))
    if family is Family.QUINTIC_LOG_1D:
        return 0.0, lam / (6.0 * math.e ** (1.0 / 3.0))
    return 0.0, math.inf


def omega_window(model: ModelParams) -> tuple[float, float]:
    """Open interval of frequencies admitting nontrivial solitary waves."""
    if model.lam <= 0:
        raise NonPositiveLambda("frequency window requires lam > 0")
    return omega_window_unchecked(model.family, model.lam)


def _bisect_root(f, lo: float, hi: float, width: float = 1e-15):
    """Bracketing bisection to the given width, then one Newton polish.

    The callers guarantee monotonicity of ``f`` on [lo, hi], so the bracket
    never lies.  ``f`` returns (value, derivative).
    """
    flo = f(lo)[0]
    fhi = f(hi)[0]
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise ValueError("root not bracketed")
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)[0]
        if fm == 0.0:
            return mid
        if fm * flo < 0.0:
            hi = mid
        else:
            lo, flo = mid, fm
    x = 0.5 * (lo + hi)
    val, dval = f(x)
    if dval != 0.0:
        polished = x - val / dval
        if lo <= polished <= hi:
            x = polished
    return x


def amplitude_roots(model: ModelParams) -> tuple[float, float]:
    """Roots of y ln y = -omega/lam: returns (alpha, sqrt(z_omega)).

    alpha^2 is the lower root on (0, 1/e); z_omega the upper one on (1/e, 1).
    The stationary nonlinearity g vanishes exactly at 0, alpha and sqrt(z_omega).
    """
    if model.family is not Family.CUBIC_LOG_2D:
        raise OmegaOutOfWindow("amplitude roots are defined for the 2D cubic-log family")
    if model.lam <= 0:
        raise NonPositiveLambda("amplitude roots require lam > 0")
    omega = model.require_omega()
    lo, hi = omega_window(model)
    if not lo < omega < hi:
        raise OmegaOutOfWindow(f"omega={omega} outside ({lo}, {hi})")
    target = -omega / model.lam
    inv_e = 1.0 / math.e
    if target <= -inv_e:
        raise OmegaOutOfWindow("roots of y ln y merge at -1/e")

    def eq(y):
        ly = math.log(y)
        return y * ly - target, ly + 1.0

    lower = _bisect_root(eq, 1e-300, inv_e)
    upper = _bisect_root(eq, inv_e, 1.0)
    return math.sqrt(lower), math.sqrt(upper)


def _density_log(rho: np.ndarray | float) -> np.ndarray | float:
    """ln(rho) with the removable-singularity convention: 0 where rho ~ 0."""
    rho = np.asarray(rho, dtype=float)
    safe = np.where(rho > _DENSITY_CLAMP, rho, 1.0)
    return np.log(safe)


def nonlinear_phase_rate(rho, model: ModelParams):
    """d/d rho of the potential density: the phase rate of the nonlinear subflow.

    CubicLog2D: lam rho ln rho; QuinticLog1D: lam rho^2 ln rho; PureCubic2D: -lam rho.
    """
    rho = np.asarray(rho, dtype=float)
    if model.family is Family.PURE_CUBIC_2D:
        return -model.lam * rho
    lr = _density_log(rho)
    if model.family is Family.CUBIC_LOG_2D:
        return model.lam * rho * lr
    return model.lam * rho * rho * lr


def potential_density(rho, model: ModelParams):
    """Potential-energy density V(rho):  E = (1/2)||grad u||^2 + int V(|u|^2)."""
    rho = np.asarray(rho, dtype=float)
    if model.family is Family.PURE_CUBIC_2D:
        return -0.5 * model.lam * rho * rho
    lr = _density_log(rho)
    if model.family is Family.CUBIC_LOG_2D:
        # (lam/2) rho^2 ln(rho / sqrt(e))
        return 0.5 * model.lam * rho * rho * (lr - 0.5)
    return (model.lam / 3.0) * rho ** 3 * (lr - 1.0 / 3.0)


def nonlinear_term(z, model: ModelParams):
    """Right-hand side amplitude function evaluated at |u| = z (z >= 0).

    Continuous at z = 0 (the z^3 ln z^2 limit is taken, never an
    indeterminate form).
    """
    z = np.asarray(z, dtype=float)
    if np.any(z < 0):
        raise NegativeAmplitude("amplitude must be nonnegative")
    out = z * nonlinear_phase_rate(z * z, model)
    if out.ndim == 0:
        return float(out)
    return out


def potential_G(z, model: ModelParams):
    """Antiderivative G(z) = int_0^z g, with g = -2 omega z - 2 z * phase_rate(z^2).

    Closed forms:
      CubicLog2D   : -omega z^2 - (lam/2) z^4 ln(z^2 / sqrt(e))
      QuinticLog1D : -omega z^2 - (lam/3) z^6 ln(z^2 / e^(1/3))
      PureCubic2D  : -omega z^2 + (lam/2) z^4
    """
    omega = model.require_omega()
    z = np.asarray(z, dtype=float)
    if np.any(z < 0):
        raise NegativeAmplitude("amplitude must be nonnegative")
    z2 = z * z
    out = -omega * z2 - potential_density(z2, model)
    if out.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class Observables:
    """Conserved functionals of a field, plus the standard derived quantities."""

    mass: float
    energy: float
    momentum: tuple[float, ...]
    kinetic: float
    potential: float
    quartic: float
    sigma_weight: float
    action: float | None = None

    @property
    def lagrangian_T(self) -> float:
        """T of the stationary Lagrangian S = T/2 - V: the gradient norm squared.

        S = E + omega M rearranges to (1/2)||grad u||^2 - int G(u), so
        T = 2 * kinetic; V below vanishes exactly on stationary states.
        """
        return 2.0 * self.kinetic

    @property
    def lagrangian_V(self) -> float:
        """V = int G(u) of the stationary Lagrangian, from V = kinetic - action."""
        if self.action is None:
            raise MissingOmega("action requires omega")
        return self.kinetic - self.action


def observables(field, model: ModelParams) -> Observables:
    """Mass, energy, momentum and friends by spectral gradient + cell quadrature."""
    from . import grid as _grid

    vals = field.values
    if not np.all(np.isfinite(vals.view(float))):
        raise NonFiniteField("field contains non-finite samples")
    g = field.grid
    rho = np.abs(vals) ** 2
    mass = _grid.integrate(g, rho)
    grads = _grid.gradient(field)
    kinetic = 0.5 * sum(_grid.integrate(g, np.abs(gr.values) ** 2) for gr in grads)
    potential = _grid.integrate(g, potential_density(rho, model))
    momentum = tuple(
        _grid.integrate(g, np.imag(np.conj(vals) * gr.values)) for gr in grads
    )
    quartic = _grid.integrate(g, rho * rho)
    xs = _grid.coordinates(g)
    r2 = sum(x * x for x in xs)
    sigma_weight = math.sqrt(max(_grid.integrate(g, r2 * rho), 0.0))
    energy = kinetic + potential
    action = None
    if model.omega is not None:
        action = energy + model.omega * mass
    return Observables(
        mass=mass,
        energy=energy,
        momentum=momentum,
        kinetic=kinetic,
        potential=potential,
        quartic=quartic,
        sigma_weight=sigma_weight,
        action=action,
    )


def h1_apriori_bound(initial: Observables, model: ModelParams) -> float:
    """B with (1/2)||grad u(t)||^2 <= B along any solution of the log models."""
    if model.lam < 0:
        raise NonPositiveLambda("bound requires lam >= 0")
    return initial.energy + 0.5 * model.lam * math.sqrt(math.e) * initial.mass
