"""Closed-form zone flows, flight times and unperturbed periodic orbits.

Every zone field is linear, v' = A v + w with trace(A) = 0, so the flow
is evaluated exactly through the 2x2 matrix exponential specialized to
the saddle (cosh/sinh) or center (cos/sin) case.  Numerical integration
is deliberately absent here; it lives in the simulator module as an
independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import OutOfAnnulus, OutsideZone
from .model import DerivedConstants, Side, SystemSpec

#: relative guard band around h = tau_RS where the saddle flight time blows up
TAU_GUARD_RTOL = 1e-8

ZONES = ("L", "C", "R")


def zone_field(spec: SystemSpec, zone: str):
    """(A, w) of the zone's linear system v' = A v + w."""
    if zone == "C":
        return np.array([[0.0, 1.0], [1.0, 0.0]]), np.zeros(2)
    z = spec.right if zone == "R" else spec.left
    A = np.array([[z.a, z.b], [z.c, -z.a]])
    # the y-linear term of H is -a (right) / +a (left)
    w = np.array([-z.a, z.beta]) if zone == "R" else np.array([z.a, z.beta])
    return A, w


def zone_hamiltonian(spec: SystemSpec, zone: str, x, y):
    """Zone Hamiltonian; accepts scalars or arrays."""
    if zone == "C":
        return 0.5 * y * y - 0.5 * x * x
    z = spec.right if zone == "R" else spec.left
    sa = -z.a if zone == "R" else z.a
    return 0.5 * z.b * y * y - 0.5 * z.c * x * x + z.a * x * y + sa * y - z.beta * x

def in_zone(zone: str, x: float, tol: float = 1e-9) -> bool:
    if zone == "L":
        return x <= -1.0 + tol
    if zone == "R":
        return x >= 1.0 - tol
    return -1.0 - tol <= x <= 1.0 + tol


def zone_flow(spec: SystemSpec, zone: str, point, t):
    """Exact flow of the (unperturbed) zone field after time t.

    t may be a scalar or an array; returns (x, y) with matching shape.
    Raises OutsideZone when the initial point is not in the zone's
    closed region (the flow itself is evaluated regardless of whether
    it stays there; arc validity is the caller's concern).
    """
    x0, y0 = point
    if not in_zone(zone, x0):
        raise OutsideZone(f"point {point} not in zone {zone}")
    A, w = zone_field(spec, zone)
    det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
    # equilibrium p solves A p = -w ; det != 0 for nondegenerate zones
    p = np.linalg.solve(A, -w)
    d0 = np.array([x0 - p[0], y0 - p[1]])
    t = np.asarray(t, dtype=float)
    if det < 0.0:  # saddle: exp(At) = cosh(wt) I + sinh(wt)/w A
        om = math.sqrt(-det)
        ch, sh = np.cosh(om * t), np.sinh(om * t) / om
    else:  # center
        om = math.sqrt(det)
        ch, sh = np.cos(om * t), np.sin(om * t) / om
    x = p[0] + ch * d0[0] + sh * (A[0, 0] * d0[0] + A[0, 1] * d0[1])
    y = p[1] + ch * d0[1] + sh * (A[1, 0] * d0[0] + A[1, 1] * d0[1])
    return x, y


def flight_time(dc: DerivedConstants, zone: str, h: float, annulus: int) -> float:
    """Time for the zone arc of the annulus-`annulus` orbit at level h.

    Outer-zone arcs run between the two crossing ordinates -h and +h on
    that zone's switching line.  The central zone contributes the
    switching-line-to-switching-line passes for annulus 0 and the
    turn-back arcs for the two-zone annuli.
    """
    _check_level(dc, annulus, h)
    if zone == "C":
        if annulus == 0:
            return math.log((h + 1.0) / (h - 1.0))
        return math.log((1.0 + h) / (1.0 - h))
    if zone == "R":
        kind, om, tau, mu = dc.right_kind, dc.omega_right, dc.tau_right, dc.mu1
    else:
        kind, om, tau, mu = dc.left_kind, dc.omega_left, dc.tau_left, dc.mu2
    if kind.is_saddle:
        return math.log((h + tau) / (tau - h)) / om
    acos = math.acos((tau * tau - h * h) / (tau * tau + h * h))
    return (2.0 * math.pi * mu + (-1.0) ** mu * acos) / om


def _check_level(dc: DerivedConstants, annulus: int, h: float) -> None:
    interval = (dc.J0, dc.J1, dc.J2)[annulus]
    if h not in interval:
        raise OutOfAnnulus(
            f"h={h:g} outside J{annulus}=({interval.lo:g}, {interval.hi:g})")
    if annulus == 0 and dc.sys_class.right_is_saddle:
        if dc.tau_right - h <= TAU_GUARD_RTOL * dc.tau_right:
            raise OutOfAnnulus(
                f"h={h:g} within guard band of tau_RS={dc.tau_right:g}")
    # two-zone arcs in a saddle outer zone also need h < tau of that zone
    if annulus == 1 and dc.sys_class.right_is_saddle and h >= dc.tau_right:
        raise OutOfAnnulus(f"h={h:g} >= tau_RS={dc.tau_right:g}")
    if annulus == 2 and dc.sys_class.left_is_saddle and h >= dc.tau_left:
        raise OutOfAnnulus(f"h={h:g} >= tau_LS={dc.tau_left:g}")


@dataclass(frozen=True)
class ZoneArc:
    """One zone piece of a periodic orbit, with its exact parameterization."""

    zone: str
    start: tuple[float, float]
    end: tuple[float, float]
    duration: float
    spec: SystemSpec

    def point(self, t):
        """Position at arc-local time t in [0, duration]."""
        return zone_flow(self.spec, self.zone, self.start, t)

    def velocity(self, t):
        x, y = self.point(t)
        A, w = zone_field(self.spec, self.zone)
        return (A[0, 0] * x + A[0, 1] * y + w[0],
                A[1, 0] * x + A[1, 1] * y + w[1])


def crossing_points(annulus: int, h: float):
    """Switching-line crossings of the level-h orbit, in traversal order."""
    if annulus == 0:
        return ((1.0, h), (1.0, -h), (-1.0, -h), (-1.0, h))
    if annulus == 1:
        return ((1.0, h), (1.0, -h))
    return ((-1.0, h), (-1.0, -h))


def periodic_orbit(dc: DerivedConstants, annulus: int, h: float) -> list[ZoneArc]:
    """Arcs of the crossing periodic orbit at level h, head-to-tail.

    Annulus 0 runs clockwise through right, central (bottom), left and
    central (top) zones; annulus 1 (right two-zone family) and annulus 2
    (left family) each consist of an outer arc and a central turn-back.
    """
    _check_level(dc, annulus, h)
    spec = dc.system
    if annulus == 0:
        A, A1, A2, A3 = crossing_points(0, h)
        t_out_r = flight_time(dc, "R", h, 0)
        t_c = flight_time(dc, "C", h, 0)
        t_out_l = flight_time(dc, "L", h, 0)
        return [
            ZoneArc("R", A, A1, t_out_r, spec),
            ZoneArc("C", A1, A2, t_c, spec),
            ZoneArc("L", A2, A3, t_out_l, spec),
            ZoneArc("C", A3, A, t_c, spec),
        ]
    if annulus == 1:
        B, B1 = crossing_points(1, h)
        return [
            ZoneArc("R", B, B1, flight_time(dc, "R", h, 1), spec),
            ZoneArc("C", B1, B, flight_time(dc, "C", h, 1), spec),
        ]
    C, C1 = crossing_points(2, h)
    return [
        ZoneArc("C", C, C1, flight_time(dc, "C", h, 2), spec),
        ZoneArc("L", C1, C, flight_time(dc, "L", h, 2), spec),
    ]


def orbit_closure_error(arcs: list[ZoneArc]) -> float:
    """Max gap between each arc's exact endpoint and the next arc's start."""
    err = 0.0
    for i, arc in enumerate(arcs):
        x, y = arc.point(arc.duration)
        nx, ny = arcs[(i + 1) % len(arcs)].start
        err = max(err, math.hypot(x - nx, y - ny))
    return err


def is_clockwise(dc: DerivedConstants, annulus: int, h: float) -> bool:
    """Orientation check at the top crossing point (x' there must point
    into the first arc's zone)."""
    arcs = periodic_orbit(dc, annulus, h)
    vx, _ = arcs[0].velocity(0.0)
    return vx > 0.0 if arcs[0].zone in ("R", "C") else vx < 0.0


def sample_orbit(dc: DerivedConstants, annulus: int, h: float,
                 points_per_arc: int = 64):
    """Sampled polyline rows (zone, t, x, y) with cumulative time t."""
    rows = []
    t0 = 0.0
    for arc in periodic_orbit(dc, annulus, h):
        ts = np.linspace(0.0, arc.duration, points_per_arc)
        xs, ys = arc.point(ts)
        rows.extend((arc.zone, t0 + t, float(x), float(y))
                    for t, x, y in zip(ts, xs, ys))
        t0 += arc.duration
    return rows
