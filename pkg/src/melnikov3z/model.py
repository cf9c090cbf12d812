"""Normal-form model of three-zone piecewise-linear Hamiltonian systems.

The plane is split by the switching lines x = -1 and x = +1 into a left,
a central and a right zone.  The central zone is frozen to the saddle
Hamiltonian H(x, y) = y^2/2 - x^2/2 (equilibrium at the origin), while
each outer zone carries four parameters (a, b, c, beta):

    left  (x <= -1):  H(x, y) = b/2 y^2 - c/2 x^2 + a x y + a y - beta x
    right (x >= +1):  H(x, y) = b/2 y^2 - c/2 x^2 + a x y - a y - beta x

The unperturbed flow is x' = H_y, y' = -H_x.  The sign of a^2 + b c
decides whether an outer zone is of saddle (> 0) or center (< 0) type.
On top of the Hamiltonian skeleton sits an 18-coefficient linear
perturbation (x' += eps*f, y' += eps*g with f, g affine per zone), the
object whose Melnikov functions the rest of the package studies.
"""

from __future__ import annotations

import dataclasses
import enum
import json
import math
from dataclasses import dataclass

from .errors import DegenerateZone, HypothesisViolation, ParseError

#: classification tolerance for boundary equilibria (|x_eq -+ 1| below this)
BOUNDARY_TOL = 1e-12

#: relative tolerance under which tau_LS and tau_RS count as equal (the
#: heteroclinic SSS variant)
TAU_MERGE_RTOL = 1e-12


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


class ZoneKind(enum.Enum):
    SADDLE_REAL = "saddle-real"
    SADDLE_VIRTUAL = "saddle-virtual"
    SADDLE_BOUNDARY = "saddle-boundary"
    CENTER_REAL = "center-real"
    CENTER_VIRTUAL = "center-virtual"
    CENTER_BOUNDARY = "center-boundary"

    @property
    def is_saddle(self) -> bool:
        return self.value.startswith("saddle")

    @property
    def is_center(self) -> bool:
        return self.value.startswith("center")

    @property
    def is_real(self) -> bool:
        return self.value.endswith("real")

    @property
    def letter(self) -> str:
        return "S" if self.is_saddle else "C"


class SystemClass(enum.Enum):
    """Zone-type pattern, spelled left-to-right with the central saddle."""

    SSS = "SSS"
    CSS = "CSS"
    CSC = "CSC"

    @property
    def right_is_saddle(self) -> bool:
        return self.value[2] == "S"

    @property
    def left_is_saddle(self) -> bool:
        return self.value[0] == "S"


@dataclass(frozen=True)
class ZoneParams:
    a: float
    b: float
    c: float
    beta: float

    def discriminant(self) -> float:
        return self.a * self.a + self.b * self.c


#: field order of the perturbation coefficients, also the JSON key set
PERTURBATION_NAMES = (
    "r10", "r01", "r00", "s10", "s01", "s00",
    "u10", "u01", "u00", "v10", "v01", "v00",
    "p10", "p01", "p00", "q10", "q01", "q00",
)

#: coefficients that never enter any Melnikov function (their line
#: integrals vanish identically along every arc)
INERT_NAMES = ("r01", "s10", "u01", "v10", "p01", "q10")


@dataclass(frozen=True)
class PerturbationCoeffs:
    """Linear perturbation (f, g) per zone.

    Left zone: f = r10*x + r01*y + r00, g = s10*x + s01*y + s00.
    Central:   f = u10*x + u01*y + u00, g = v10*x + v01*y + v00.
    Right:     f = p10*x + p01*y + p00, g = q10*x + q01*y + q00.
    """

    r10: float = 0.0
    r01: float = 0.0
    r00: float = 0.0
    s10: float = 0.0
    s01: float = 0.0
    s00: float = 0.0
    u10: float = 0.0
    u01: float = 0.0
    u00: float = 0.0
    v10: float = 0.0
    v01: float = 0.0
    v00: float = 0.0
    p10: float = 0.0
    p01: float = 0.0
    p00: float = 0.0
    q10: float = 0.0
    q01: float = 0.0
    q00: float = 0.0

    @classmethod
    def zero(cls) -> "PerturbationCoeffs":
        return cls()

    @classmethod
    def from_dict(cls, d: dict) -> "PerturbationCoeffs":
        unknown = set(d) - set(PERTURBATION_NAMES)
        if unknown:
            raise ParseError(f"unknown perturbation keys: {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in d.items()})

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in PERTURBATION_NAMES}

    def replace(self, **kw) -> "PerturbationCoeffs":
        return dataclasses.replace(self, **kw)

    def zone_fg(self, zone: str):
        """(fx, fy, f0, gx, gy, g0) for zone 'L', 'C' or 'R'."""
        if zone == "L":
            return (self.r10, self.r01, self.r00, self.s10, self.s01, self.s00)
        if zone == "C":
            return (self.u10, self.u01, self.u00, self.v10, self.v01, self.v00)
        if zone == "R":
            return (self.p10, self.p01, self.p00, self.q10, self.q01, self.q00)
        raise ValueError(f"unknown zone {zone!r}")


@dataclass(frozen=True)
class SystemSpec:
    """A three-zone system in normal form plus its perturbation."""

    left: ZoneParams
    right: ZoneParams
    perturbation: PerturbationCoeffs = PerturbationCoeffs()

    def with_perturbation(self, pert: PerturbationCoeffs) -> "SystemSpec":
        return dataclasses.replace(self, perturbation=pert)


@dataclass(frozen=True)
class Interval:
    """Open interval (lo, hi); hi may be +inf."""

    lo: float
    hi: float

    def __contains__(self, h: float) -> bool:
        return self.lo < h < self.hi

    def is_empty(self) -> bool:
        return not (self.lo < self.hi)


def equilibrium(zone: ZoneParams, side: Side) -> tuple[float, float]:
    """Equilibrium of the zone's linear field, solved in closed form."""
    disc = zone.discriminant()
    if disc == 0.0:
        raise DegenerateZone(f"{side.value} zone has a^2 + b*c = 0")
    a, b, c, beta = zone.a, zone.b, zone.c, zone.beta
    if side is Side.RIGHT:
        return (a * a - b * beta) / disc, a * (beta + c) / disc
    return -(a * a + b * beta) / disc, a * (beta - c) / disc


def classify_zone(zone: ZoneParams, side: Side) -> ZoneKind:
    """Saddle/center by sign of a^2 + b*c, real/virtual/boundary by the
    equilibrium abscissa relative to the zone's half-plane."""
    disc = zone.discriminant()
    if disc == 0.0:
        raise DegenerateZone(f"{side.value} zone has a^2 + b*c = 0")
    x_eq, _ = equilibrium(zone, side)
    edge = 1.0 if side is Side.RIGHT else -1.0
    if abs(x_eq - edge) <= BOUNDARY_TOL:
        position = "boundary"
    elif (x_eq > edge) == (side is Side.RIGHT):
        position = "real"
    else:
        position = "virtual"
    family = "saddle" if disc > 0.0 else "center"
    return ZoneKind(f"{family}-{position}")


def _omega_tau(zone: ZoneParams, side: Side) -> tuple[float, float]:
    """Frequency omega and section ordinate tau of an outer zone.

    Saddle: omega = sqrt(a^2 + b c), numerator uses -omega^2.
    Center: omega = sqrt(-a^2 - b c), numerator uses +omega^2.
    The b*beta term enters with opposite signs on the two sides.
    """
    disc = zone.discriminant()
    omega = math.sqrt(abs(disc))
    sgn_beta = -1.0 if side is Side.RIGHT else 1.0
    sgn_disc = -1.0 if disc > 0.0 else 1.0
    tau = (zone.a**2 + sgn_beta * zone.b * zone.beta + sgn_disc * omega**2) / (
        zone.b * omega
    )
    return omega, tau


def reflect(spec: SystemSpec) -> SystemSpec:
    """Mirror the system through the origin, (x, y) -> (-x, -y).

    Swaps the outer zones (with beta sign flipped) and maps the
    perturbation to (x, y) -> -(f, g)(-x, -y), so that the reflected
    system's flow is the pointwise mirror image of the original.
    """
    p = spec.perturbation
    new_pert = PerturbationCoeffs(
        r10=p.p10, r01=p.p01, r00=-p.p00,
        s10=p.q10, s01=p.q01, s00=-p.q00,
        u10=p.u10, u01=p.u01, u00=-p.u00,
        v10=p.v10, v01=p.v01, v00=-p.v00,
        p10=p.r10, p01=p.r01, p00=-p.r00,
        q10=p.s10, q01=p.s01, q00=-p.s00,
    )
    new_left = dataclasses.replace(spec.right, beta=-spec.right.beta)
    new_right = dataclasses.replace(spec.left, beta=-spec.left.beta)
    return SystemSpec(left=new_left, right=new_right, perturbation=new_pert)


@dataclass(frozen=True)
class DerivedConstants:
    """Everything the analytical machinery needs, derived once.

    `system` is the possibly reflected copy of the input; all other
    fields describe `system`, not the original argument.
    """

    system: SystemSpec
    sys_class: SystemClass
    reflected: bool
    left_kind: ZoneKind
    right_kind: ZoneKind
    omega_left: float
    omega_right: float
    tau_left: float
    tau_right: float
    mu1: int  # right center real (1) / virtual (0); 0 for saddle
    mu2: int  # left center flag, same convention
    J0: Interval
    J1: Interval
    J2: Interval


def derive_constants(spec: SystemSpec) -> DerivedConstants:
    """Classify, normalize by reflection, and compute all scalar data.

    Normalization: a saddle-left/center-right system is reflected into
    CSS form, and an SSS system is reflected so that the right saddle
    carries the smaller section ordinate (tau_RS <= tau_LS).  The
    `reflected` flag records whether this happened.

    Raises HypothesisViolation when an outer b is not positive or when
    the three-zone annulus would be empty (tau_RS <= 1 for a saddle
    right zone).
    """
    for side, zone in ((Side.LEFT, spec.left), (Side.RIGHT, spec.right)):
        if not zone.b > 0.0:
            raise HypothesisViolation(f"{side.value} zone requires b > 0")

    left_kind = classify_zone(spec.left, Side.LEFT)
    right_kind = classify_zone(spec.right, Side.RIGHT)

    reflected = False
    if left_kind.is_saddle and right_kind.is_center:
        reflected = True
    elif left_kind.is_saddle and right_kind.is_saddle:
        _, tau_l = _omega_tau(spec.left, Side.LEFT)
        _, tau_r = _omega_tau(spec.right, Side.RIGHT)
        if tau_l < tau_r:
            reflected = True
    if reflected:
        spec = reflect(spec)
        left_kind, right_kind = right_kind, left_kind

    omega_l, tau_l = _omega_tau(spec.left, Side.LEFT)
    omega_r, tau_r = _omega_tau(spec.right, Side.RIGHT)
    sys_class = SystemClass(left_kind.letter + "S" + right_kind.letter)

    mu1 = 1 if (right_kind is ZoneKind.CENTER_REAL) else 0
    mu2 = 1 if (left_kind is ZoneKind.CENTER_REAL) else 0

    if sys_class is SystemClass.CSC:
        J0 = Interval(1.0, math.inf)
    else:
        if tau_r <= 1.0:
            raise HypothesisViolation(
                f"right saddle has tau_RS = {tau_r:.6g} <= 1: no three-zone annulus"
            )
        J0 = Interval(1.0, tau_r)
    J1 = Interval(0.0, 1.0)
    J2 = Interval(0.0, 1.0)

    return DerivedConstants(
        system=spec,
        sys_class=sys_class,
        reflected=reflected,
        left_kind=left_kind,
        right_kind=right_kind,
        omega_left=omega_l,
        omega_right=omega_r,
        tau_left=tau_l,
        tau_right=tau_r,
        mu1=mu1,
        mu2=mu2,
        J0=J0,
        J1=J1,
        J2=J2,
    )


def taus_merged(dc: DerivedConstants) -> bool:
    """True for the heteroclinic SSS variant tau_LS == tau_RS."""
    if dc.sys_class is not SystemClass.SSS:
        return False
    scale = max(abs(dc.tau_left), abs(dc.tau_right), 1.0)
    return abs(dc.tau_left - dc.tau_right) <= TAU_MERGE_RTOL * scale


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[CheckResult, ...]
    sys_class: SystemClass | None
    reflected: bool

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]


def validate_hypotheses(spec: SystemSpec) -> ValidationReport:
    """Check the structural hypotheses and report pass/fail per item.

    Never raises; classification problems are folded into the report.
    """
    checks: list[CheckResult] = []

    b_ok = spec.left.b > 0.0 and spec.right.b > 0.0
    checks.append(CheckResult("outer_b_positive", b_ok,
                              f"b_L={spec.left.b:g}, b_R={spec.right.b:g}"))

    try:
        left_kind = classify_zone(spec.left, Side.LEFT)
        right_kind = classify_zone(spec.right, Side.RIGHT)
        checks.append(CheckResult("zones_nondegenerate", True))
    except DegenerateZone as exc:
        checks.append(CheckResult("zones_nondegenerate", False, str(exc)))
        return ValidationReport(tuple(checks), None, False)

    # central zone is the frozen normal form: real saddle at the origin
    checks.append(CheckResult("central_saddle_real_at_origin", True))

    if not b_ok:
        return ValidationReport(tuple(checks), None, False)

    try:
        dc = derive_constants(spec)
    except HypothesisViolation as exc:
        checks.append(CheckResult("annulus_J0_nonempty", False, str(exc)))
        return ValidationReport(tuple(checks), None, False)

    for side_name, kind in (("left", dc.left_kind), ("right", dc.right_kind)):
        if kind.is_saddle and not kind.is_real:
            checks.append(CheckResult(
                "outer_saddles_real", False,
                f"ThreeZoneOrbitObstruction: {side_name} saddle is "
                f"{kind.value.split('-')[1]}, no orbits through three zones"))
            break
    else:
        checks.append(CheckResult("outer_saddles_real", True))

    checks.append(CheckResult(
        "annulus_J0_nonempty", not dc.J0.is_empty(),
        f"J0=({dc.J0.lo:g}, {dc.J0.hi:g})"))

    return ValidationReport(tuple(checks), dc.sys_class, dc.reflected)


# ---------------------------------------------------------------------------
# system specification files

def system_to_dict(spec: SystemSpec) -> dict:
    return {
        "left": {"a": spec.left.a, "b": spec.left.b,
                 "c": spec.left.c, "beta": spec.left.beta},
        "right": {"a": spec.right.a, "b": spec.right.b,
                  "c": spec.right.c, "beta": spec.right.beta},
        "perturbation": spec.perturbation.as_dict(),
    }


def system_from_dict(d: dict) -> SystemSpec:
    try:
        zones = {}
        for key in ("left", "right"):
            z = d[key]
            zones[key] = ZoneParams(a=float(z["a"]), b=float(z["b"]),
                                    c=float(z["c"]), beta=float(z["beta"]))
        pert = PerturbationCoeffs.from_dict(d.get("perturbation", {}))
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed system specification: {exc}") from exc
    return SystemSpec(left=zones["left"], right=zones["right"], perturbation=pert)


def load_system(path) -> SystemSpec:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read system file {path}: {exc}") from exc
    return system_from_dict(data)


def save_system(spec: SystemSpec, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(system_to_dict(spec), fh, indent=2)
        fh.write("\n")
