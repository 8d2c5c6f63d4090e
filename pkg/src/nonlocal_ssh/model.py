"""Parameter sets, grids, and spinor containers.

The model lives on two sublattices A and B. In the bulk it is parametrized
by (v, w, a): v is the local A-B coupling, w the non-local coupling acting
over the fixed distance a. In a finite box of length L the couplings take
the constant values (v0, w0) inside [-L/2, L/2] and vanish outside, and the
box is discretized with step dx commensurate with a.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .errors import (
    DegenerateCouplings,
    GridMismatch,
    NonCommensurate,
    NonPositiveScale,
    ValidationError,
)

EPS = float(np.finfo(float).eps)

# relative tolerance for "this ratio is an integer" checks
COMMENSURATE_RTOL = 1e-9

_BAND_SIGNS = {"plus": 1.0, "minus": -1.0}


def band_sign(band: str) -> float:
    """+1.0 for the upper band, -1.0 for the lower."""
    try:
        return _BAND_SIGNS[band]
    except KeyError:
        raise ValidationError(f"band must be 'plus' or 'minus', got {band!r}") from None


def wrap_angle(x: float) -> float:
    """Reduce an angle to the principal range (-pi, pi]."""
    return np.pi - (np.pi - x) % (2.0 * np.pi)


def _require_finite(**values: float) -> None:
    for name, val in values.items():
        if not math.isfinite(val):
            raise ValidationError(f"{name} must be finite, got {val!r}")


@dataclass(frozen=True)
class BulkParams:
    """Couplings v, w and the non-local hop distance a (a > 0)."""

    v: float
    w: float
    a: float


def validate_bulk(params: BulkParams) -> BulkParams:
    """Check bulk parameters; returns the input on success."""
    _require_finite(v=params.v, w=params.w, a=params.a)
    if params.a <= 0.0:
        raise NonPositiveScale(f"hop distance a must be positive, got {params.a}")
    if params.v == 0.0 and params.w == 0.0:
        raise DegenerateCouplings("v = w = 0 gives the zero Hamiltonian")
    return params


@dataclass(frozen=True)
class FiniteParams:
    """Box couplings (v0, w0), hop a, box length L, grid step dx.

    a must be an integer multiple of dx (the hop connects grid points) and
    L an integer multiple of dx; both are checked to 1e-9 relative.
    """

    v0: float
    w0: float
    a: float
    L: float
    dx: float

    @property
    def hop_steps(self) -> int:
        """m = a/dx, the hop measured in grid steps."""
        m = round(self.a / self.dx)
        if m < 1 or abs(m * self.dx - self.a) > COMMENSURATE_RTOL * self.a:
            raise NonCommensurate(
                f"a = {self.a} is not an integer multiple of dx = {self.dx}"
            )
        return m

    @property
    def n_points(self) -> int:
        """P = L/dx + 1 grid points per sublattice."""
        steps = round(self.L / self.dx)
        if steps < 1 or abs(steps * self.dx - self.L) > COMMENSURATE_RTOL * self.L:
            raise NonCommensurate(
                f"L = {self.L} is not an integer multiple of dx = {self.dx}"
            )
        return steps + 1

    def bulk(self) -> BulkParams:
        return BulkParams(v=self.v0, w=self.w0, a=self.a)


def validate_finite(params: FiniteParams) -> FiniteParams:
    """Check finite-box parameters; returns the input on success."""
    _require_finite(v0=params.v0, w0=params.w0, a=params.a, L=params.L, dx=params.dx)
    for name in ("a", "L", "dx"):
        if getattr(params, name) <= 0.0:
            raise NonPositiveScale(f"{name} must be positive, got {getattr(params, name)}")
    if not params.L > params.a:
        raise ValidationError(
            f"box length L = {params.L} must exceed the hop distance a = {params.a}"
        )
    params.hop_steps
    params.n_points
    return params


@dataclass(frozen=True)
class Grid:
    """Uniform grid x_i = -L/2 + i*dx, symmetric about the origin."""

    x: np.ndarray
    dx: float

    @property
    def n(self) -> int:
        return self.x.size


def make_grid(params: FiniteParams) -> Grid:
    validate_finite(params)
    p = params.n_points
    x = -0.5 * params.L + params.dx * np.arange(p)
    return Grid(x=x, dx=params.dx)


@dataclass
class SpinorGrid:
    """Two-component wavefunction sampled on a grid (one value per sublattice)."""

    grid: Grid
    psi_a: np.ndarray
    psi_b: np.ndarray

    def __post_init__(self) -> None:
        self.psi_a = np.asarray(self.psi_a, dtype=complex)
        self.psi_b = np.asarray(self.psi_b, dtype=complex)
        if self.psi_a.shape != (self.grid.n,) or self.psi_b.shape != (self.grid.n,):
            raise GridMismatch(
                f"spinor components must have shape ({self.grid.n},), "
                f"got {self.psi_a.shape} and {self.psi_b.shape}"
            )

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.psi_a) ** 2) + np.sum(np.abs(self.psi_b) ** 2)))


@dataclass(frozen=True)
class BlochState:
    """Normalized two-component Bloch eigenvector at one momentum."""

    k: float
    band: str
    u_a: complex
    u_b: complex

    def __post_init__(self) -> None:
        band_sign(self.band)
        nrm = abs(self.u_a) ** 2 + abs(self.u_b) ** 2
        if abs(nrm - 1.0) > 1e-12:
            raise ValidationError(f"Bloch spinor norm {nrm} deviates from 1")

    def vector(self) -> np.ndarray:
        return np.array([self.u_a, self.u_b], dtype=complex)
