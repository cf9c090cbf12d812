"""First-order Melnikov functions of the three-zone system.

Two independent evaluation routes are provided:

* `closed_form_M` expresses each function as a short combination of the
  seven-member basis below (coefficients assembled analytically for the
  all-saddle class, recovered by a gated least-squares fit against the
  quadrature route for the classes with outer centers);
* `quadrature_M` evaluates the defining line integrals along the exact
  orbit parameterization with adaptive quadrature.

The two routes share no code path beyond the orbit geometry, which makes
their agreement a meaningful cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, FitResidualTooLarge, QuadratureNonConvergence
from .geometry import periodic_orbit, zone_field
from .model import DerivedConstants, Interval, SystemClass, taus_merged

QUAD_ABS_TOL = 1e-10
FIT_RESIDUAL_GATE = 1e-8
#: keep fit samples at least this far from h = 1 and h = tau_RS
FIT_EXCLUSION = 1e-3


@dataclass(frozen=True)
class BasisFunction:
    """One member of the evaluation basis.

    tau and mu are only meaningful for the outer-zone tags; the central
    tags ignore them.
    """

    tag: str  # f0 | fC0 | fC | fRS | fLS | fRC | fLC
    tau: float = float("nan")
    mu: int = 0
    domain: Interval = Interval(0.0, math.inf)

    def __call__(self, h):
        h = np.asarray(h, dtype=float)
        t = self.tag
        if t == "f0":
            return +h
        if t == "fC0":
            return (h * h - 1.0) * np.log((h + 1.0) / (h - 1.0))
        if t == "fC":
            return (h * h - 1.0) * np.log((h + 1.0) / (1.0 - h))
        if t in ("fRS", "fLS"):
            tau = self.tau
            return (h * h - tau * tau) * np.log((h + tau) / (tau - h))
        if t in ("fRC", "fLC"):
            tau2 = self.tau * self.tau
            branch = 2.0 * math.pi * self.mu + (-1.0) ** self.mu * np.arccos(
                (tau2 - h * h) / (tau2 + h * h))
            return (h * h + tau2) * branch
        raise ValueError(f"unknown basis tag {self.tag!r}")

    def contains(self, h: float) -> bool:
        if self.tag in ("fRS", "fLS"):
            # punctured at h = 1 where the bordering orbits break down
            return 0.0 < h < self.tau and h != 1.0
        return h in self.domain


def basis_eval(b: BasisFunction, h: float) -> float:
    """Scalar evaluation with domain enforcement."""
    if not b.contains(h):
        raise DomainError(f"h={h:g} outside domain of {b.tag}")
    return float(b(h))


def make_basis(dc: DerivedConstants) -> dict[str, BasisFunction]:
    """The basis functions available for this system's class."""
    basis = {
        "f0": BasisFunction("f0", domain=Interval(0.0, math.inf)),
        "fC0": BasisFunction("fC0", domain=Interval(1.0, math.inf)),
        "fC": BasisFunction("fC", domain=Interval(0.0, 1.0)),
    }
    if dc.sys_class.right_is_saddle:
        basis["fRS"] = BasisFunction("fRS", tau=dc.tau_right)
    else:
        basis["fRC"] = BasisFunction("fRC", tau=dc.tau_right, mu=dc.mu1)
    if dc.sys_class.left_is_saddle:
        basis["fLS"] = BasisFunction("fLS", tau=dc.tau_left)
    else:
        basis["fLC"] = BasisFunction("fLC", tau=dc.tau_left, mu=dc.mu2)
    return basis


@dataclass(frozen=True)
class MelnikovForm:
    """A Melnikov function as basis-function combination."""

    which: str  # M0 | M1 | M2
    terms: tuple[tuple[float, BasisFunction], ...]
    domain: Interval

    def __call__(self, h):
        h = np.asarray(h, dtype=float)
        out = np.zeros_like(h)
        for coef, basis in self.terms:
            if coef != 0.0:
                out = out + coef * basis(h)
        return out if out.shape else float(out)

    @property
    def coefficients(self) -> tuple[float, ...]:
        return tuple(c for c, _ in self.terms)


def _basis_tags(sys_class: SystemClass, merged: bool):
    right = "fRS" if sys_class.right_is_saddle else "fRC"
    left = "fLS" if sys_class.left_is_saddle else "fLC"
    if merged:
        return (("f0", "fC0", right), ("f0", "fC", right), ("f0", "fC", right))
    return (
        ("f0", "fC0", right, left),
        ("f0", "fC", right),
        ("f0", "fC", left),
    )


def _sss_coefficients(dc: DerivedConstants, merged: bool):
    p = dc.system.perturbation
    bR, bL = dc.system.right.b, dc.system.left.b
    wR, tR = dc.omega_right, dc.tau_right
    wL, tL = dc.omega_left, dc.tau_left
    P = p.p10 + p.q01
    U = p.u10 + p.v01
    R = p.r10 + p.s01
    a1 = 2.0 * (p.p00 + p.p10) + bR * P * tR / wR
    a2 = bR * P / (2.0 * wR)
    a3 = p.v01 - p.u10
    a4 = 0.5 * U
    a5 = 2.0 * (p.r10 - p.r00) + bL * R * tL / wL
    a6 = bL * R / (2.0 * wL)
    a7 = -2.0 * p.u00 - p.u10 + p.v01
    a8 = 2.0 * p.u00 - p.u10 + p.v01
    if merged:
        a5_merged = 2.0 * (p.r10 - p.r00) + bL * R * tR / wL
        k0 = (a1 + 2.0 * bR * a3 + bR / bL * a5_merged, 2.0 * bR * a4,
              a2 + bR / bL * a6)
        k1 = (a1 + bR * a7, bR * a4, a2)
        k2 = (a5_merged / bL + a8, a4, a6 / bL)
        return k0, k1, k2
    k0 = (a1 + 2.0 * bR * a3 + bR / bL * a5, 2.0 * bR * a4, a2, bR / bL * a6)
    k1 = (a1 + bR * a7, bR * a4, a2)
    k2 = (a5 / bL + a8, a4, a6 / bL)
    return k0, k1, k2


def _fit_sample_levels(dc: DerivedConstants, annulus: int, n: int):
    """Well-conditioned sample levels inside the annulus, clear of the
    degenerate endpoints h = 1 and h = tau_RS."""
    if annulus == 0:
        if math.isinf(dc.J0.hi):
            offsets = np.array([0.08, 0.25, 0.5, 0.9, 1.5, 2.3])
            pts = 1.0 + offsets[:n]
        else:
            span = dc.J0.hi - 1.0
            qs = np.linspace(0.08, 0.9, n)
            pts = 1.0 + np.maximum(qs * span, FIT_EXCLUSION)
        return pts
    return np.linspace(0.12, 1.0 - 5e-2, n)


def _fit_coefficients(dc: DerivedConstants, which: int, tags, basis) -> tuple:
    n = len(tags) + 2
    hs = _fit_sample_levels(dc, which, n)
    A = np.stack([basis[t](hs) for t in tags], axis=1)
    y = np.array([quadrature_M(dc, which, h) for h in hs])
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = float(np.max(np.abs(A @ coef - y)))
    scale = max(1.0, float(np.max(np.abs(y))))
    if resid > FIT_RESIDUAL_GATE * scale:
        raise FitResidualTooLarge(
            f"M{which} basis fit residual {resid:.3e} exceeds gate "
            f"(basis mismatch for class {dc.sys_class.value})")
    return tuple(float(c) for c in coef)


def closed_form_M(dc: DerivedConstants):
    """(M0, M1, M2) as basis combinations.

    All-saddle systems use the analytically assembled coefficients
    (with the merged variant when tau_LS = tau_RS).  For the CSS/CSC
    classes the coefficients are recovered by least squares against the
    quadrature route over an overdetermined sample, guarded by a hard
    residual gate; the theorems fix the basis, so the fit is exact up
    to quadrature error.
    """
    merged = taus_merged(dc)
    basis = make_basis(dc)
    tags0, tags1, tags2 = _basis_tags(dc.sys_class, merged)
    if dc.sys_class is SystemClass.SSS:
        k0, k1, k2 = _sss_coefficients(dc, merged)
    else:
        k0 = _fit_coefficients(dc, 0, tags0, basis)
        k1 = _fit_coefficients(dc, 1, tags1, basis)
        k2 = _fit_coefficients(dc, 2, tags2, basis)
    return (
        MelnikovForm("M0", tuple(zip(k0, (basis[t] for t in tags0))), dc.J0),
        MelnikovForm("M1", tuple(zip(k1, (basis[t] for t in tags1))), dc.J1),
        MelnikovForm("M2", tuple(zip(k2, (basis[t] for t in tags2))), dc.J2),
    )


def _arc_integral(arc) -> float:
    """integral of (g x' - f y') dt along one closed-form arc."""
    fx, fy, f0, gx, gy, g0 = arc.spec.perturbation.zone_fg(arc.zone)
    if fx == fy == f0 == gx == gy == g0 == 0.0:
        return 0.0
    A, w = zone_field(arc.spec, arc.zone)

    def integrand(t):
        x, y = arc.point(t)
        xdot = A[0, 0] * x + A[0, 1] * y + w[0]
        ydot = A[1, 0] * x + A[1, 1] * y + w[1]
        return (gx * x + gy * y + g0) * xdot - (fx * x + fy * y + f0) * ydot

    val, abserr = quad(integrand, 0.0, arc.duration,
                       epsabs=QUAD_ABS_TOL * 1e-2, epsrel=1e-12, limit=300)
    if abserr > 1e-8 * max(1.0, abs(val)):
        raise QuadratureNonConvergence(
            f"arc integral error estimate {abserr:.2e} in zone {arc.zone}")
    return val


def quadrature_M(dc: DerivedConstants, which: int, h: float) -> float:
    """Line-integral evaluation of M_which at level h.

    Constant zone weights apply in normal form: the three-zone function
    uses (b_R, b_R/b_L, b_R, 1) over its four arcs, the two-zone ones
    (b_R, 1) and (1/b_L, 1).
    """
    bR, bL = dc.system.right.b, dc.system.left.b
    arcs = periodic_orbit(dc, which, h)
    ints = [_arc_integral(a) for a in arcs]
    if which == 0:
        i_r, i_c_bottom, i_l, i_c_top = ints
        return bR * i_c_top + (bR / bL) * i_l + bR * i_c_bottom + i_r
    if which == 1:
        i_r, i_c = ints
        return bR * i_c + i_r
    i_c, i_l = ints
    return (1.0 / bL) * i_l + i_c


def hy_weight_products(dc: DerivedConstants, h: float) -> dict[str, float]:
    """Crossing-point H_y ratio products for the weight identities.

    Returns the numerically assembled products next to the constants
    they must equal in normal form.
    """
    from .geometry import crossing_points, zone_hamiltonian  # local, cheap

    spec = dc.system

    def hy(zone, pt):
        x, y = pt
        eps = 1e-7
        return (zone_hamiltonian(spec, zone, x, y + eps)
                - zone_hamiltonian(spec, zone, x, y - eps)) / (2 * eps)

    bR, bL = spec.right.b, spec.left.b
    A, A1, A2, A3 = crossing_points(0, h)
    out = {
        "w_top_central": hy("R", A) / hy("C", A),
        "w_left": hy("R", A) * hy("C", A3) / (hy("C", A) * hy("L", A3)),
        "w_bottom_central": (hy("R", A) * hy("C", A3) * hy("L", A2))
        / (hy("C", A) * hy("L", A3) * hy("C", A2)),
        "w_right": (hy("R", A) * hy("C", A3) * hy("L", A2) * hy("C", A1))
        / (hy("C", A) * hy("L", A3) * hy("C", A2) * hy("R", A1)),
    }
    out.update({
        "expected_top_central": bR,
        "expected_left": bR / bL,
        "expected_bottom_central": bR,
        "expected_right": 1.0,
    })
    return out
