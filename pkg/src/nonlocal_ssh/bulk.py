"""Bulk band structure and Zak phase of the non-local dimerized chain.

The Bloch Hamiltonian is purely off-diagonal,

    H(k) = [[0, h(k)], [conj(h(k)), 0]],      h(k) = v + w*exp(-i*a*k),

so the two bands are E(k) = +-|h(k)| = +-sqrt(v^2 + w^2 + 2 v w cos(a k))
with period 2*pi/a, and the eigenvectors are fixed by the phase
phi(k) = arg h(k) alone:

    u(+-) = (exp(i*phi/2), +-exp(-i*phi/2)) / sqrt(2).

phi winds by -2*pi per Brillouin zone when |w| > |v| and does not wind when
|w| < |v|; the Zak phase is correspondingly pi or 0 (mod 2*pi). The Wilson
loop below computes it from a gauge-invariant product of neighbor overlaps,
so any per-k phase choice cancels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CriticalPoint, GapClosure, ValidationError
from .model import (
    EPS,
    BlochState,
    BulkParams,
    band_sign,
    validate_bulk,
    wrap_angle,
)

# |h(k)| below this is treated as a closed gap (phases undefined)
GAP_ABS_TOL = 1e-12

# Wilson loop refuses when the sampled gap dips under this times max(|v|,|w|)
WILSON_GAP_RTOL = 1e-8

WILSON_MIN_POINTS = 16


@dataclass(frozen=True)
class BandPoint:
    """Band energies at momentum k; e_plus = -e_minus >= 0. Fields may be arrays."""

    k: np.ndarray
    e_minus: np.ndarray
    e_plus: np.ndarray


@dataclass(frozen=True)
class ZakResult:
    """A Zak phase in (-pi, pi], its phase classification, and the k-points used."""

    value: float
    classification: str
    k_points: int


def bloch_matrix(params: BulkParams, k: float) -> np.ndarray:
    """2x2 Bloch Hamiltonian at momentum k."""
    validate_bulk(params)
    h = params.v + params.w * np.exp(-1j * params.a * k)
    return np.array([[0.0, h], [np.conj(h), 0.0]], dtype=complex)


def energy_bands(params: BulkParams, k):
    """Band energies at momentum k (scalar or array).

    Returns a BandPoint with e_plus = -e_minus >= 0.
    """
    validate_bulk(params)
    k = np.asarray(k, dtype=float)
    v, w, a = params.v, params.w, params.a
    e = np.sqrt(v * v + w * w + 2.0 * v * w * np.cos(a * k))
    return BandPoint(k=k, e_minus=-e, e_plus=e)


def phase_phi(params: BulkParams, k):
    """Phase phi(k) = arg(v + w e^{-iak}) in (-pi, pi].

    Branch convention at the cut: points with v + w cos(ak) < 0 and
    sin(ak) = 0 report +pi (step function valued 1 at 0). sin(ak) carries
    rounding noise of order eps*|ak| at multiples of pi, which would land
    exactly-on-the-cut momenta on a random side; imaginary parts below that
    noise floor are snapped to +0 before arctan2, which realizes the
    convention in floating point.
    """
    validate_bulk(params)
    k = np.asarray(k, dtype=float)
    v, w, a = params.v, params.w, params.a
    ak = a * k
    x = v + w * np.cos(ak)
    y = -w * np.sin(ak)
    noise = 16.0 * EPS * abs(w) * np.maximum(1.0, np.abs(ak))
    y = np.where(np.abs(y) <= noise, 0.0, y)
    if np.any(np.hypot(x, y) < GAP_ABS_TOL):
        raise GapClosure("|v + w e^{-iak}| < 1e-12: phase undefined")
    phi = np.arctan2(y, x)
    return phi if phi.ndim else float(phi)


def bloch_state(params: BulkParams, k: float, band: str) -> BlochState:
    """Normalized Bloch eigenvector at momentum k for one band."""
    s = band_sign(band)
    phi = phase_phi(params, k)
    u_a = np.exp(0.5j * phi) / np.sqrt(2.0)
    u_b = s * np.exp(-0.5j * phi) / np.sqrt(2.0)
    return BlochState(k=float(k), band=band, u_a=complex(u_a), u_b=complex(u_b))


def zak_analytic(params: BulkParams) -> ZakResult:
    """Quantized Zak phase from the coupling ratio alone.

    0 for |v| > |w|, pi for |v| < |w| (the principal representative in
    (-pi, pi]; which band carries +pi and which -pi is a gauge choice, and
    the two coincide mod 2*pi). Raises CriticalPoint at |v| = |w|.
    """
    validate_bulk(params)
    av, aw = abs(params.v), abs(params.w)
    if av == aw:
        raise CriticalPoint("|v| = |w|: gap closes, Zak phase undefined")
    value = np.pi if av < aw else 0.0
    cls = "topological" if av < aw else "trivial"
    return ZakResult(value=float(value), classification=cls, k_points=0)


def wilson_loop_phase(states: np.ndarray) -> float:
    """-Im log of the cyclic product of neighbor overlaps <u_j|u_{j+1}>.

    states: (N, 2) array of normalized spinors sampled around a closed loop
    (the wrap from the last point back to the first is included here).
    Gauge invariant: each state enters once as bra and once as ket.
    """
    states = np.asarray(states, dtype=complex)
    if states.ndim != 2 or states.shape[1] != 2 or states.shape[0] < 2:
        raise ValidationError("states must be an (N, 2) array with N >= 2")
    overlaps = np.sum(np.conj(states) * np.roll(states, -1, axis=0), axis=1)
    if np.any(np.abs(overlaps) < 1e-12):
        raise GapClosure("vanishing overlap between neighboring states")
    prod = np.prod(overlaps)
    return wrap_angle(-np.angle(prod))


def zak_wilson(params: BulkParams, band: str = "plus", nk: int = 2048) -> ZakResult:
    """Zak phase from a Wilson loop over one Brillouin zone.

    Uses nk uniformly spaced momenta on [-pi/a, pi/a) (endpoint excluded;
    the loop closes by reusing the first state). Refuses with GapClosure if
    the sampled gap dips below 1e-8 * max(|v|, |w|).
    """
    validate_bulk(params)
    s = band_sign(band)
    if nk < WILSON_MIN_POINTS:
        raise ValidationError(f"nk must be >= {WILSON_MIN_POINTS}, got {nk}")
    v, w, a = params.v, params.w, params.a
    k = -np.pi / a + (2.0 * np.pi / a) * np.arange(nk) / nk
    gap = np.abs(v + w * np.exp(-1j * a * k))
    if gap.min() < WILSON_GAP_RTOL * max(abs(v), abs(w)):
        raise GapClosure("band gap closes (to sampling accuracy) inside the zone")
    phi = phase_phi(params, k)
    states = np.empty((nk, 2), dtype=complex)
    states[:, 0] = np.exp(0.5j * phi)
    states[:, 1] = s * np.exp(-0.5j * phi)
    states /= np.sqrt(2.0)
    gamma = wilson_loop_phase(states)
    dist_topo = abs(wrap_angle(gamma - np.pi))
    dist_triv = abs(wrap_angle(gamma))
    cls = "topological" if dist_topo < dist_triv else "trivial"
    return ZakResult(value=gamma, classification=cls, k_points=nk)


def parity_check(params: BulkParams, k: float) -> float:
    """Residual of the inversion symmetry sigma_x H(-k) sigma_x = H(k)."""
    hk = bloch_matrix(params, k)
    hmk = bloch_matrix(params, -k)
    sx = np.array([[0.0, 1.0], [1.0, 0.0]])
    return float(np.max(np.abs(sx @ hmk @ sx - hk)))
