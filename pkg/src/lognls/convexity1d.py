"""1D quintic-log appendix: exact-quadrature ground states and action convexity.

The autonomous 1D profile obeys the first integral (phi')^2 = -2 G(phi), so
everything reduces to one-dimensional quadratures in amplitude space.  In the
turning-point variables used here

    f(s) = lam s^2 ln s,   g(s) = (lam/3) s^3 ln(s / e^(1/3)),
    W(s) = omega s + g(s),        W(phi_max^2) = 0,  W'(a) < 0,

and G(sqrt(s)) = -W(s).  The curvature of the action branch d(omega) is the
Iliev-Kirchev integral; its printed simplification drops constant factors, so
both forms are computed and the general one is canonical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .errors import (
    ConservationError,
    OmegaOutOfWindow,
    OmegaTooCloseToEdge,
    QuadratureFailure,
)
from .model import Family, ModelParams, _bisect_root, omega_window_unchecked

_GAUSS_X, _GAUSS_W = np.polynomial.legendre.leggauss(16)


@dataclass(frozen=True)
class TurningPoint:
    a: float
    W_prime_at_a: float
    omega: float
    lam: float


@dataclass
class Profile1D:
    x_nodes: np.ndarray
    values: np.ndarray
    derivs: np.ndarray
    phi_max: float
    omega: float
    lam: float


def _window_edge(lam: float) -> float:
    return omega_window_unchecked(Family.QUINTIC_LOG_1D, lam)[1]


def _check_window(lam: float, omega: float):
    if lam <= 0 or not 0.0 < omega < _window_edge(lam):
        raise OmegaOutOfWindow(
            f"omega={omega} outside (0, {_window_edge(lam)}) for lam={lam}"
        )


def f_appendix(s, lam: float):
    s = np.asarray(s, dtype=float)
    return lam * s * s * np.log(s)


def g_appendix(s, lam: float):
    s = np.asarray(s, dtype=float)
    return (lam / 3.0) * s ** 3 * (np.log(s) - 1.0 / 3.0)


def w_func(s, lam: float, omega: float):
    return omega * np.asarray(s, dtype=float) + g_appendix(s, lam)


def find_turning_point(lam: float, omega: float) -> TurningPoint:
    """Smallest positive zero of W: solves s^2 (1/3 - ln s) = 3 omega / lam."""
    _check_window(lam, omega)
    target = 3.0 * omega / lam

    def eq(s):
        ls = math.log(s)
        return s * s * (1.0 / 3.0 - ls) - target, s * (-1.0 / 3.0 - 2.0 * ls)

    a = _bisect_root(eq, 1e-12, math.exp(-1.0 / 6.0))
    w_prime = omega + lam * a * a * math.log(a)
    if w_prime >= 0.0:
        raise OmegaOutOfWindow("double root: W'(a) >= 0 at the window edge")
    return TurningPoint(a=a, W_prime_at_a=w_prime, omega=omega, lam=lam)


def _gauss_panels(fn, lo: float, hi: float, panels: int) -> float:
    edges = np.linspace(lo, hi, panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    pts = mid[:, None] + half[:, None] * _GAUSS_X[None, :]
    vals = fn(pts.ravel()).reshape(pts.shape)
    return float(np.sum(half * (vals * _GAUSS_W[None, :]).sum(axis=1)))


def _adaptive_gauss(fn, lo: float, hi: float, rel_tol: float, max_panels: int = 4096):
    prev = _gauss_panels(fn, lo, hi, 1)
    panels = 2
    while panels <= max_panels:
        cur = _gauss_panels(fn, lo, hi, panels)
        if abs(cur - prev) <= rel_tol * max(abs(cur), 1e-300):
            return cur
        prev = cur
        panels *= 2
    raise QuadratureFailure("composite Gauss quadrature failed to settle")


def dpp_forms(lam: float, omega: float, rel_tol: float = 1e-8) -> tuple[float, float]:
    """(general, simplified) evaluations of the curvature integral d''(omega).

    Both integrands carry the (s/W)^{1/2} endpoint singularity at s = a,
    absorbed by the substitution s = a - t^2.
    """
    _check_window(lam, omega)
    if omega > 0.95 * _window_edge(lam):
        raise OmegaTooCloseToEdge(
            "W'(a) -> 0 within 5% of the window edge; curvature integral is singular"
        )
    tp = find_turning_point(lam, omega)
    a = tp.a
    fa = lam * a * a * math.log(a)
    ga = g_appendix(a, lam)

    def bracket_factor(s):
        # 3 + a s (f(a) - f(s)) / (a g(s) - s g(a)); near s=a the raw form
        # cancels catastrophically and the algebraically equal limit
        # (lam/3) s (a^2 - s^2) / W(s) takes over.
        s = np.asarray(s, dtype=float)
        out = np.empty_like(s)
        near = a - s < 1e-4 * a
        sn = s[near]
        wn = w_func(sn, lam, omega)
        out[near] = (lam / 3.0) * sn * (a * a - sn * sn) / wn
        sf = s[~near]
        out[~near] = 3.0 + a * sf * (fa - f_appendix(sf, lam)) / (
            a * g_appendix(sf, lam) - sf * ga
        )
        return out

    def general_integrand(t):
        s = a - t * t
        w = w_func(s, lam, omega)
        return 2.0 * t * bracket_factor(s) * np.sqrt(s / w)

    def simplified_integrand(t):
        s = a - t * t
        w = w_func(s, lam, omega)
        return 2.0 * t * ((a * a - s * s) / w) * s * np.sqrt(s / w)

    # For this equation (phi')^2 = 2 W(phi^2), so the amplitude-space measure
    # is ds / sqrt(2 W): M(omega) = 2^{-1/2} int_0^a (s/W)^{1/2} ds, and the
    # curvature inherits the same 1/sqrt(2).  Cross-checked against centered
    # differences of the action and of the mass.
    pref = -1.0 / (2.0 * tp.W_prime_at_a) / math.sqrt(2.0)
    general = pref * _adaptive_gauss(general_integrand, 0.0, math.sqrt(a), rel_tol)
    simplified = pref * _adaptive_gauss(simplified_integrand, 0.0, math.sqrt(a), rel_tol)
    return general, simplified


def dpp_quadrature(lam: float, omega: float, rel_tol: float = 1e-8) -> float:
    """Canonical (general-form) d''(omega)."""
    return dpp_forms(lam, omega, rel_tol)[0]


# ---------------------------------------------------------------------------
# amplitude-space quadratures: the profile and its observables, no ODE solve
# ---------------------------------------------------------------------------


def _neg2G(phi, lam: float, omega: float):
    """-2 G(phi) = (phi')^2 along the profile; equals 2 W(phi^2) / 1 ... > 0 on (0, phi_max)."""
    phi = np.asarray(phi, dtype=float)
    s = phi * phi
    return 2.0 * w_func(s, lam, omega)


def mass_action_1d(lam: float, omega: float, rel_tol: float = 1e-11):
    """(mass, action, energy) of the 1D ground state by amplitude quadrature."""
    _check_window(lam, omega)
    a = find_turning_point(lam, omega).a
    phimax = math.sqrt(a)
    tmax = math.sqrt(phimax)

    # substitute phi = phimax - t^2; sqrt(-2G) ~ t near t=0, integrands smooth
    def mass_integrand(t):
        phi = phimax - t * t
        return 2.0 * t * 2.0 * phi * phi / np.sqrt(_neg2G(phi, lam, omega))

    def grad_integrand(t):
        phi = phimax - t * t
        return 2.0 * t * 2.0 * np.sqrt(_neg2G(phi, lam, omega))

    def sextic_integrand(t):
        phi = phimax - t * t
        s = phi * phi
        val = np.where(s > 1e-280, s ** 3 * (np.log(np.where(s > 0, s, 1.0)) - 1.0 / 3.0), 0.0)
        return 2.0 * t * 2.0 * val / np.sqrt(_neg2G(phi, lam, omega))

    mass = _adaptive_gauss(mass_integrand, 0.0, tmax, rel_tol)
    grad2 = _adaptive_gauss(grad_integrand, 0.0, tmax, rel_tol)
    log_sextic = _adaptive_gauss(sextic_integrand, 0.0, tmax, rel_tol)
    energy = 0.5 * grad2 + (lam / 3.0) * log_sextic
    action = energy + omega * mass
    return mass, action, energy


def ground_state_1d_quadrature(
    lam: float, omega: float, n_nodes: int = 4001
) -> Profile1D:
    """Even positive profile by inverting x(phi) = int d phi / sqrt(-2G).

    The x(phi) table is accumulated with per-segment Gauss rule in two
    charts: t = sqrt(phi_max - phi) near the turning amplitude (square-root
    tangency) and u = ln(phi) down the exponential tail.
    """
    _check_window(lam, omega)
    if n_nodes < 3 or n_nodes % 2 == 0:
        raise ValueError("n_nodes must be an odd integer >= 3")
    a = find_turning_point(lam, omega).a
    phimax = math.sqrt(a)

    # chart A: phi in [phimax/2, phimax], t = sqrt(phimax - phi)
    t_hi = math.sqrt(phimax / 2.0)
    t_edges = np.linspace(0.0, t_hi, 1501)

    def dx_dt(t):
        phi = phimax - t * t
        return 2.0 * t / np.sqrt(_neg2G(phi, lam, omega))

    x_a = _cumulative_gauss(dx_dt, t_edges)
    phi_a = phimax - t_edges ** 2

    # chart B: phi from phimax/2 down to the floor, u = ln phi
    floor = phimax * 1e-13
    u_edges = np.linspace(math.log(phimax / 2.0), math.log(floor), 2001)

    def dx_du(u):
        phi = np.exp(u)
        return -phi / np.sqrt(_neg2G(phi, lam, omega))

    x_b = x_a[-1] + _cumulative_gauss(dx_du, u_edges)
    phi_b = np.exp(u_edges)

    x_table = np.concatenate([x_a, x_b[1:]])
    phi_table = np.concatenate([phi_a, phi_b[1:]])
    dphi_table = -np.sqrt(_neg2G(phi_table, lam, omega))
    dphi_table[0] = 0.0

    spline = CubicHermiteSpline(x_table, phi_table, dphi_table)
    half = (n_nodes + 1) // 2
    x_half = np.linspace(0.0, float(x_table[-1]), half)
    v_half = spline(x_half)
    d_half = spline.derivative()(x_half)
    v_half[0] = phimax
    d_half[0] = 0.0

    x_nodes = np.concatenate([-x_half[:0:-1], x_half])
    values = np.concatenate([v_half[:0:-1], v_half])
    derivs = np.concatenate([-d_half[:0:-1], d_half])
    return Profile1D(
        x_nodes=x_nodes,
        values=values,
        derivs=derivs,
        phi_max=phimax,
        omega=omega,
        lam=lam,
    )


def _cumulative_gauss(fn, edges: np.ndarray) -> np.ndarray:
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    pts = mid[:, None] + half[:, None] * _GAUSS_X[None, :]
    vals = fn(pts.ravel()).reshape(pts.shape)
    seg = half * (vals * _GAUSS_W[None, :]).sum(axis=1)
    out = np.empty(edges.size)
    out[0] = 0.0
    np.cumsum(seg, out=out[1:])
    return out


@dataclass
class ConvexityRow:
    omega: float
    dpp_quad: float
    dpp_simplified: float
    dpp_fd: float | None
    mass: float
    action: float


def action_convexity_scan(
    lam: float, omega_grid, delta: float = 1e-4
) -> list[ConvexityRow]:
    """Curvature along the branch: quadrature, both printed forms, FD oracle.

    Asserts d''_quad > 0 and strictly increasing mass on the sampled grid.
    """
    omegas = [float(w) for w in omega_grid]
    rows = []
    for omega in omegas:
        general, simplified = dpp_forms(lam, omega)
        mass, action, _ = mass_action_1d(lam, omega)
        fd = None
        if len(omegas) > 1:
            sp = mass_action_1d(lam, omega + delta)[1]
            sm = mass_action_1d(lam, omega - delta)[1]
            fd = (sp - 2.0 * action + sm) / delta ** 2
        rows.append(
            ConvexityRow(
                omega=omega,
                dpp_quad=general,
                dpp_simplified=simplified,
                dpp_fd=fd,
                mass=mass,
                action=action,
            )
        )
    if any(row.dpp_quad <= 0.0 for row in rows):
        raise ConservationError("curvature d'' must be positive on the window")
    masses = [row.mass for row in rows]
    increasing_omega = all(a < b for a, b in zip(omegas, omegas[1:]))
    if increasing_omega and not all(a < b for a, b in zip(masses, masses[1:])):
        raise ConservationError("mass failed to increase along increasing omega")
    return rows


def model_1d(lam: float, omega: float | None = None) -> ModelParams:
    return ModelParams(Family.QUINTIC_LOG_1D, lam, omega)
