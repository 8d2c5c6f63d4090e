"""Local gradient truncations of the non-local chain and their Berry phases.

Expanding the hop over distance a in powers of the gradient gives a family
of local two-band models. In momentum space the lower-left matrix element
(the numerator of the B amplitude) is

    order 0:  z(k) = v + w                       (flat bands +-|v+w|)
    order 1:  z(k) = v + w + i a w k
    order 2:  z(k) = v + w - (w/2)(a k)^2 + i a w k

with H_n(k) = [[0, conj(z)], [z, 0]], bands +-|z(k)|, and eigenvectors
u(+-) = (1, z/E(+-)) / sqrt(2). k runs over the whole real line for these
truncations, so their Berry integral is taken over (-inf, inf).

Because |u_B| = 1 in this gauge, the Berry connection reduces to
i<u|du/dk> = -(1/2) d(arg z)/dk and the integral is -(1/2) times the total
winding of arg z(k). That winding is computed by unwrapping sampled phases
on [-K, K] and adding the exact residual arcs from +-K to the asymptotic
directions of z (the curve crosses no axis beyond the cutoff, so the
residual arc is shorter than pi and the wrap is exact).

Closed forms this reproduces: order 1 gives -(pi/2) sgn(a w (v+w)) for all
gapped parameters; order 2 gives -pi when the parabola traced by z encloses
the origin, i.e. -pi*Theta(w(v+w)), which reduces to the familiar
-pi*Theta(w) when v + w > 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bulk import BandPoint, GAP_ABS_TOL, energy_bands
from .errors import (
    ConvergenceFailure,
    CutoffTooSmall,
    GapClosure,
    UnsupportedOrder,
    ValidationError,
)
from .model import BlochState, BulkParams, band_sign, validate_bulk, wrap_angle

ORDERS = (0, 1, 2)

# defaults for the winding computation
BERRY_NK = 200_001
BERRY_MIN_CUTOFF = 100.0  # in units of 1/a
BERRY_DEFAULT_CUTOFF = 1e4  # in units of 1/a


def _check_order(order: int) -> int:
    if order not in ORDERS:
        raise UnsupportedOrder(f"truncation order must be one of {ORDERS}, got {order}")
    return order


def _b_numerator(params: BulkParams, order: int, k):
    """Lower-left matrix element z(k) of the order-n truncation."""
    v, w, a = params.v, params.w, params.a
    k = np.asarray(k, dtype=float)
    if order == 0:
        return np.full(k.shape, v + w, dtype=complex)
    if order == 1:
        return (v + w) + 1j * a * w * k
    return (v + w) - 0.5 * w * (a * k) ** 2 + 1j * a * w * k


def approx_matrix(params: BulkParams, order: int, k: float) -> np.ndarray:
    """2x2 momentum-space matrix of the order-n truncation."""
    validate_bulk(params)
    _check_order(order)
    z = complex(_b_numerator(params, order, k))
    return np.array([[0.0, np.conj(z)], [z, 0.0]], dtype=complex)


def approx_bands(params: BulkParams, order: int, k) -> BandPoint:
    """Truncated band energies +-|z(k)| (scalar or array k)."""
    validate_bulk(params)
    _check_order(order)
    k = np.asarray(k, dtype=float)
    e = np.abs(_b_numerator(params, order, k))
    return BandPoint(k=k, e_minus=-e, e_plus=e)


def approx_eigvec(params: BulkParams, order: int, band: str, k: float) -> BlochState:
    """Normalized eigenvector (1, z/E)/sqrt(2) of the order-n truncation.

    |z| = |E| makes the stated form unit-norm already; it is renormalized
    anyway so the constructor's norm check reflects arithmetic only.
    """
    validate_bulk(params)
    _check_order(order)
    s = band_sign(band)
    z = complex(_b_numerator(params, order, k))
    e = s * abs(z)
    if abs(e) < GAP_ABS_TOL:
        raise GapClosure(f"order-{order} bands touch zero at k = {k}")
    vec = np.array([1.0, z / e], dtype=complex) / np.sqrt(2.0)
    vec /= np.linalg.norm(vec)
    return BlochState(k=float(k), band=band, u_a=complex(vec[0]), u_b=complex(vec[1]))


@dataclass(frozen=True)
class BerryIntegralResult:
    """Berry integral over the real line, the cutoff used, and an error estimate."""

    value: float
    cutoff_k: float
    quadrature_error: float


def _asymptote_angles(params: BulkParams, order: int) -> tuple[float, float]:
    # direction of z(k) as k -> +inf / -inf, as angles in (-pi, pi]
    w = params.w
    if order == 1:
        return (np.sign(w) * np.pi / 2, -np.sign(w) * np.pi / 2)
    # order 2: the -(w/2)(ak)^2 term dominates; the sign of Im z picks the side
    if w > 0:
        return (np.pi, -np.pi)
    return (0.0, 0.0)


def berry_integral(
    params: BulkParams,
    order: int,
    band: str = "plus",
    cutoff_k: float | None = None,
    nk: int = BERRY_NK,
) -> BerryIntegralResult:
    """Berry integral of the order-n truncation, n in {1, 2}.

    Computed as -(1/2) times the winding of arg z(k): unwrap on [-K, K],
    then add the exact arcs between z(+-K) and the asymptotic directions.
    Both bands give the same value (the +-1 in u_B cancels in <u|du>); the
    band argument is validated and otherwise unused.

    cutoff_k defaults to 1e4/a and must be at least 100/a; for order 2 it
    must also clear the axis-crossing scale sqrt(2(v+w)/w)/a, otherwise
    CutoffTooSmall is raised.
    """
    validate_bulk(params)
    band_sign(band)
    if order not in (1, 2):
        raise UnsupportedOrder(f"Berry integral implemented for orders 1 and 2, got {order}")
    v, w, a = params.v, params.w, params.a
    if cutoff_k is None:
        cutoff_k = BERRY_DEFAULT_CUTOFF / a
    if cutoff_k * a < BERRY_MIN_CUTOFF:
        raise CutoffTooSmall(f"cutoff_k must be >= {BERRY_MIN_CUTOFF}/a")
    if order == 2 and w != 0.0:
        crossing = np.sqrt(max(2.0 * (v + w) / w, 0.0))  # |ak| where Re z = 0
        if cutoff_k * a < 10.0 * max(1.0, crossing):
            raise CutoffTooSmall(
                "cutoff_k too close to the axis-crossing scale sqrt(2(v+w)/w)/a"
            )
    if nk < 1001:
        raise ValidationError(f"nk must be >= 1001, got {nk}")
    if w == 0.0:
        # z(k) = v is constant: no winding
        return BerryIntegralResult(value=0.0, cutoff_k=float(cutoff_k), quadrature_error=0.0)

    ks = np.linspace(-cutoff_k, cutoff_k, nk)
    z = _b_numerator(params, order, ks)
    if np.min(np.abs(z)) < GAP_ABS_TOL * (abs(v) + abs(w)):
        raise GapClosure("truncated bands touch zero inside the cutoff")
    theta = np.unwrap(np.angle(z))
    steps = np.abs(np.diff(theta))
    if steps.max() > 0.5 * np.pi:
        raise ConvergenceFailure("k sampling too coarse to track the phase winding")

    th_plus, th_minus = _asymptote_angles(params, order)
    tail_plus = wrap_angle(th_plus - float(np.angle(z[-1])))
    tail_minus = wrap_angle(float(np.angle(z[0])) - th_minus)
    total = (theta[-1] - theta[0]) + tail_plus + tail_minus
    value = -0.5 * total

    # resolution estimate: redo the unwrap on every other sample
    theta_c = np.unwrap(theta[::2])
    value_c = -0.5 * ((theta_c[-1] - theta_c[0]) + tail_plus + tail_minus)
    err = abs(value - value_c) + 4.0 * np.abs(theta).max() * np.finfo(float).eps
    if err > 1e-3 * max(1.0, abs(value)):
        raise ConvergenceFailure(f"winding error estimate {err:g} out of bounds")
    return BerryIntegralResult(value=float(value), cutoff_k=float(cutoff_k), quadrature_error=float(err))


def comparison_table(params: BulkParams, k_samples: int = 401):
    """All truncated bands next to the exact ones on one zone of ka.

    Returns (columns, rows): column names and an (k_samples, 9) array with
    ka in [-pi, pi] followed by the order-0/1/2 and exact band pairs.
    """
    validate_bulk(params)
    if k_samples < 2:
        raise ValidationError(f"k_samples must be >= 2, got {k_samples}")
    ka = np.linspace(-np.pi, np.pi, k_samples)
    k = ka / params.a
    cols = ["ka"]
    data = [ka]
    for order in ORDERS:
        bp = approx_bands(params, order, k)
        cols += [f"E{order}_minus", f"E{order}_plus"]
        data += [bp.e_minus, bp.e_plus]
    exact = energy_bands(params, k)
    cols += ["E_minus", "E_plus"]
    data += [exact.e_minus, exact.e_plus]
    return cols, np.column_stack(data)
