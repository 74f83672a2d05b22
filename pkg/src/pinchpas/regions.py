"""Serving-region boundaries and the rectangular partition of the room.

Between two adjacent antennas the set of floor positions where both give
equal SNR is a circular arc; its circle is returned by boundary_circle and
sampled by exact_boundary_x. Because the arc is nearly vertical for
typical geometries, each antenna's serving region is approximated by an
asymmetric rectangle [x_k - L_k, x_k + R_k] spanning the room width; the
cut positions are chosen by a one-dimensional search that minimizes the
misassigned area against the exact arcs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .numerics import gauss_legendre, golden_section
from .system import PaLayout, SystemConfig

__all__ = [
    "DegenerateBoundaryError",
    "ImaginaryRadiusError",
    "BoundaryCircle",
    "RegionPartition",
    "boundary_circle",
    "exact_boundary_x",
    "optimize_partition",
]

_PARTITION_TOL_M = 1e-6
_MISMATCH_QUAD_POINTS = 64


class DegenerateBoundaryError(ValueError):
    """The equal-SNR boundary is a vertical line, not a circle (alpha = 0)."""


class ImaginaryRadiusError(ValueError):
    """No real equal-SNR circle, or it misses the requested row.

    Raised when the attenuation-spacing-height combination leaves no real
    circle radius, or when the nearer antenna out-delivers its neighbor
    across the entire row at the requested |y|.
    """


@dataclass(frozen=True)
class BoundaryCircle:
    """Circle carrying the equal-SNR arc between antennas k and k+1."""

    center_x: float
    radius: float
    curvature: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"radius must be > 0, got {self.radius!r}")


@dataclass(frozen=True)
class RegionPartition:
    """Rectangular serving limits for each antenna.

    boundaries_b holds the cut abscissae b_0 = 0 < b_1 < ... < b_M = d_x;
    antenna k serves the strip [b_{k-1}, b_k], which is L_k to its left
    and R_k to its right.
    """

    boundaries_b: tuple[float, ...]
    left_limits: tuple[float, ...]
    right_limits: tuple[float, ...]

    def __post_init__(self):
        b = self.boundaries_b
        if len(b) != len(self.left_limits) + 1:
            raise ValueError("boundaries_b must have one more entry than the limits")
        if len(self.left_limits) != len(self.right_limits):
            raise ValueError("left and right limit lists must have equal length")
        if b[0] != 0.0:
            raise ValueError(f"first boundary must be 0, got {b[0]!r}")
        if any(hi <= lo for lo, hi in zip(b, b[1:])):
            raise ValueError("boundaries must be strictly increasing")
        if any(v <= 0 for v in self.left_limits + self.right_limits):
            raise ValueError("all serving limits must be positive")
        span = b[-1] - b[0]
        total = sum(self.left_limits) + sum(self.right_limits)
        if abs(total - span) > 1e-9 * max(1.0, span):
            raise ValueError(
                f"serving limits sum to {total!r}, expected the room length {span!r}"
            )


def boundary_circle(config: SystemConfig, layout: PaLayout, k: int) -> BoundaryCircle:
    """Circle of equal SNR between antennas k and k+1.

    Only defined for positive attenuation; at alpha = 0 the locus is the
    vertical midline and DegenerateBoundaryError is raised instead.
    """
    if not 1 <= k <= layout.m - 1:
        raise IndexError(f"cut index k={k} outside 1..{layout.m - 1}")
    if config.alpha == 0.0:
        raise DegenerateBoundaryError(
            "equal-SNR boundary is a vertical midline at alpha = 0"
        )
    delta = layout.delta
    g1 = math.expm1(config.alpha * delta)
    center_x = layout.x_k[k - 1] + delta * (1.0 + 1.0 / g1)
    radius_sq = delta * delta * (1.0 + g1) / (g1 * g1) - config.h * config.h
    if radius_sq <= 0.0:
        raise ImaginaryRadiusError(
            f"no real equal-SNR circle: spacing {delta} m and height {config.h} m "
            f"at alpha {config.alpha} leave radius^2 = {radius_sq}"
        )
    radius = math.sqrt(radius_sq)
    return BoundaryCircle(center_x=center_x, radius=radius, curvature=1.0 / radius)


def exact_boundary_x(
    config: SystemConfig, layout: PaLayout, k: int, y: float
) -> float:
    """Abscissa where antennas k and k+1 deliver equal SNR at height y.

    Solves the equal-SNR quadratic in closed form, arranged so no
    catastrophic cancellation occurs for small alpha (the alpha = 0 limit
    degenerates smoothly to the midpoint). The crossing usually falls
    between the two antennas, but when the spacing is small relative to
    the lateral distance the attenuation advantage of the nearer-to-feed
    antenna pushes it at or past the farther one; the true crossing is
    returned either way, and the partition optimizer clamps its cuts to
    the strip separately.
    """
    if not 1 <= k <= layout.m - 1:
        raise IndexError(f"cut index k={k} outside 1..{layout.m - 1}")
    if abs(y) > config.d_y / 2.0:
        raise ValueError(f"|y| = {abs(y)} exceeds the half-width {config.d_y / 2.0}")
    x_k = layout.x_k[k - 1]
    x_next = layout.x_k[k]
    if config.alpha == 0.0:
        return 0.5 * (x_k + x_next)
    delta = layout.delta
    dist_sq = y * y + config.h * config.h
    g1 = math.expm1(config.alpha * delta)
    g = 1.0 + g1
    disc = g * delta * delta - g1 * g1 * dist_sq
    if disc <= 0.0:
        # Equivalent to |y| >= circle radius: the equal-SNR circle never
        # reaches this height, so antenna k wins along the entire row.
        raise ImaginaryRadiusError(
            f"antenna {k} out-delivers antenna {k + 1} along the whole row at "
            f"|y| = {abs(y)}: the equal-SNR circle does not reach that height"
        )
    root = math.sqrt(disc)
    offset = (g * delta * delta + g1 * dist_sq) / (g * delta + root)
    return x_k + offset


def _symmetric_partition(config: SystemConfig, layout: PaLayout) -> RegionPartition:
    # With no attenuation every boundary is the midpoint, so the limits
    # are exactly half a spacing; storing delta/2 literally keeps the
    # downstream closed forms bitwise identical to the idealized case.
    m = layout.m
    delta = layout.delta
    half = delta / 2.0
    cuts = [0.0] + [i * delta for i in range(1, m)] + [config.d_x]
    return RegionPartition(
        boundaries_b=tuple(cuts),
        left_limits=(half,) * m,
        right_limits=(half,) * m,
    )


def optimize_partition(config: SystemConfig, layout: PaLayout) -> RegionPartition:
    """Rectangular partition whose cuts best match the exact arcs.

    For each interior cut the objective is the y-integrated horizontal
    deviation between the candidate vertical cut and the exact equal-SNR
    arc (the misassigned area), evaluated with a fixed 64-point
    Gauss-Legendre rule so results are deterministic. The objective is
    convex in the cut position, so a golden-section search over
    (x_k, x_{k+1}) finds the minimum to 1e-6 m.

    Args:
        config: scenario.
        layout: antenna grid to partition the room for.

    Returns:
        RegionPartition with cuts pinned to the room edges.
    """
    m = layout.m
    if m == 1:
        x_1 = layout.x_k[0]
        return RegionPartition(
            boundaries_b=(0.0, config.d_x),
            left_limits=(x_1,),
            right_limits=(config.d_x - x_1,),
        )
    if config.alpha == 0.0:
        return _symmetric_partition(config, layout)

    y_nodes, y_weights = gauss_legendre(
        _MISMATCH_QUAD_POINTS, -config.d_y / 2.0, config.d_y / 2.0
    )
    cuts = [0.0]
    for k in range(1, m):
        samples = [exact_boundary_x(config, layout, k, float(y)) for y in y_nodes]

        def mismatch(b: float) -> float:
            return sum(w * abs(s - b) for w, s in zip(y_weights, samples))

        cuts.append(
            golden_section(
                mismatch, layout.x_k[k - 1], layout.x_k[k], tol=_PARTITION_TOL_M
            )
        )
    cuts.append(config.d_x)
    left = tuple(layout.x_k[i] - cuts[i] for i in range(m))
    right = tuple(cuts[i + 1] - layout.x_k[i] for i in range(m))
    return RegionPartition(
        boundaries_b=tuple(cuts), left_limits=left, right_limits=right
    )
