"""Multimode Gaussian states, passive linear optics, and imperfection channels.

States are covariance-matrix objects in the hbar = 1/2 convention (vacuum
variance 1/4), with quadratures stacked as (x_1 .. x_n, p_1 .. p_n).  A passive
network given as a complex unitary U = A + iB on annihilation operators maps to
the real quadrature transform S = [[A, -B], [B, A]], which is both symplectic
and orthogonal.

All objects are immutable after construction and every operation returns a new
value, so everything here is safe to use from concurrent workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Vacuum quadrature variance in the hbar = 1/2 convention.
VACUUM_VARIANCE = 0.25

# Constructor-level validation tolerance; produced objects are held to the
# tighter identity-level tolerances by the test suite.
CONSTRUCTOR_TOL = 1e-8

LN10 = math.log(10.0)


def symplectic_form(n_modes: int) -> np.ndarray:
    """Canonical form Omega = [[0, I], [-I, 0]] in (x..., p...) ordering."""
    eye = np.eye(n_modes)
    zero = np.zeros((n_modes, n_modes))
    return np.block([[zero, eye], [-eye, zero]])


def _read_only(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class ComplexUnitary:
    """An n x n complex unitary acting on annihilation operators.

    Represents any passive linear-optical network (beam splitters, phase
    shifts, swaps): output operators are a'_i = sum_j U_ij a_j.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ValueError(f"unitary must be a square matrix, got shape {m.shape}")
        dev = np.max(np.abs(m @ m.conj().T - np.eye(m.shape[0])))
        if dev > CONSTRUCTOR_TOL:
            raise ValueError(f"matrix is not unitary (deviation {dev:.3e})")
        object.__setattr__(self, "matrix", _read_only(m))

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0]

    def adjoint(self) -> "ComplexUnitary":
        """Inverse network, U-dagger."""
        return ComplexUnitary(self.matrix.conj().T)


@dataclass(frozen=True, eq=False)
class SymplecticMap:
    """A real 2n x 2n quadrature transform satisfying S Omega S^T = Omega."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2 != 0:
            raise ValueError(f"symplectic matrix must be square and even-sized, got {m.shape}")
        omega = symplectic_form(m.shape[0] // 2)
        dev = np.max(np.abs(m @ omega @ m.T - omega))
        if dev > CONSTRUCTOR_TOL:
            raise ValueError(f"matrix is not symplectic (deviation {dev:.3e})")
        object.__setattr__(self, "matrix", _read_only(m))

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0] // 2


@dataclass(frozen=True, eq=False, repr=False)
class GaussianState:
    """Mean vector and covariance matrix of n optical modes.

    Attributes:
        mean: length-2n vector of quadrature expectation values,
            ordered (x_1 .. x_n, p_1 .. p_n).
        cov: real symmetric 2n x 2n covariance matrix in the same ordering.
        cov_factor: optional 2n x m factor with cov = F F^T.  Operations that
            act as exact congruences (passive networks, loss) propagate it so
            that quadrature-combination variances can be evaluated as a sum
            of squares, immune to the catastrophic cancellation that the
            plain c^T cov c contraction suffers under strong squeezing.

    The covariance matrix must satisfy the uncertainty relation
    cov + (i/4) Omega >= 0; the vacuum state saturates it with
    cov = (1/4) I and mean = 0.
    """

    mean: np.ndarray
    cov: np.ndarray
    cov_factor: np.ndarray | None = None

    def __post_init__(self):
        mean = np.array(self.mean, dtype=float)
        cov = np.array(self.cov, dtype=float)
        if mean.ndim != 1 or mean.size % 2 != 0 or mean.size == 0:
            raise ValueError(f"mean must be a vector of even length, got shape {mean.shape}")
        if cov.shape != (mean.size, mean.size):
            raise ValueError(f"covariance shape {cov.shape} does not match mean length {mean.size}")
        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(cov))):
            raise ValueError("mean and covariance must be finite")
        asym = np.max(np.abs(cov - cov.T))
        if asym > CONSTRUCTOR_TOL:
            raise ValueError(f"covariance is not symmetric (deviation {asym:.3e})")
        cov = (cov + cov.T) / 2.0
        n = mean.size // 2
        herm = cov + 0.25j * symplectic_form(n)
        min_eig = float(np.min(np.linalg.eigvalsh(herm)))
        if min_eig < -CONSTRUCTOR_TOL:
            raise ValueError(f"covariance violates the uncertainty relation (min eigenvalue {min_eig:.3e})")
        if self.cov_factor is not None:
            factor = np.array(self.cov_factor, dtype=float)
            if factor.ndim != 2 or factor.shape[0] != mean.size:
                raise ValueError(f"factor shape {factor.shape} does not match {mean.size} quadratures")
            dev = np.max(np.abs(factor @ factor.T - cov))
            if dev > CONSTRUCTOR_TOL * (1.0 + np.max(np.abs(cov))):
                raise ValueError(f"factor does not reproduce the covariance (deviation {dev:.3e})")
            object.__setattr__(self, "cov_factor", _read_only(factor))
        object.__setattr__(self, "mean", _read_only(mean))
        object.__setattr__(self, "cov", _read_only(cov))

    @property
    def n_modes(self) -> int:
        return self.mean.size // 2

    def __repr__(self):
        return f"GaussianState(n_modes={self.n_modes}, mean={self.mean!r}, cov={self.cov!r})"


@dataclass(frozen=True)
class SqueezedInputSpec:
    """Single-mode squeezed-vacuum levels in dB relative to vacuum.

    Attributes:
        squeezing_db: p-quadrature variance level, <= 0.
        antisqueezing_db: x-quadrature variance level, >= 0.  Physicality
            requires antisqueezing_db >= -squeezing_db; a pure state has
            exactly antisqueezing_db = -squeezing_db.
        pure: marks the pure case; enforced exactly.
    """

    squeezing_db: float
    antisqueezing_db: float
    pure: bool = False

    def __post_init__(self):
        s, a = self.squeezing_db, self.antisqueezing_db
        if not (math.isfinite(s) and math.isfinite(a)):
            raise ValueError("squeezing levels must be finite")
        if s > 0:
            raise ValueError(f"squeezing_db must be <= 0, got {s}")
        if a < 0:
            raise ValueError(f"antisqueezing_db must be >= 0, got {a}")
        if self.pure:
            if a != -s:
                raise ValueError(f"pure state requires antisqueezing_db == -squeezing_db, got {a} != {-s}")
        elif a < -s:
            raise ValueError(f"unphysical levels: antisqueezing_db {a} < -squeezing_db {-s}")

    @classmethod
    def pure_db(cls, squeezing_db: float) -> "SqueezedInputSpec":
        return cls(squeezing_db=squeezing_db, antisqueezing_db=-squeezing_db, pure=True)


def squeezing_db_to_r(squeezing_db: float) -> float:
    """Squeezing parameter r with p-variance exp(-2r)/4 at the given dB level."""
    return -squeezing_db * LN10 / 20.0


def _diagonal_state(variances: np.ndarray) -> GaussianState:
    return GaussianState(
        mean=np.zeros(variances.size),
        cov=np.diag(variances),
        cov_factor=np.diag(np.sqrt(variances)),
    )


def vacuum(n: int) -> GaussianState:
    """n-mode vacuum: zero mean, covariance (1/4) I.

    Args:
        n: number of modes, >= 1.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"mode count must be a positive integer, got {n!r}")
    return _diagonal_state(np.full(2 * n, VACUUM_VARIANCE))


def squeezed_vacuum(r: float) -> GaussianState:
    """Single-mode p-squeezed vacuum with x-variance e^{2r}/4 and p-variance e^{-2r}/4.

    The mode operator is a = e^{+r} x0 + i e^{-r} p0 with (x0, p0) vacuum
    quadratures, so r > 0 squeezes p and antisqueezes x.
    """
    if not math.isfinite(r):
        raise ValueError(f"squeezing parameter must be finite, got {r!r}")
    return _diagonal_state(np.array([
        VACUUM_VARIANCE * math.exp(2 * r),
        VACUUM_VARIANCE * math.exp(-2 * r),
    ]))


def impure_squeezed_vacuum(spec: SqueezedInputSpec) -> GaussianState:
    """Single-mode squeezed thermal state with independent x and p dB levels.

    Real sources show more antisqueezing than squeezing; the covariance is
    diag(0.25 * 10^(a/10), 0.25 * 10^(s/10)) for antisqueezing a and
    squeezing s in dB.
    """
    vx = VACUUM_VARIANCE * 10.0 ** (spec.antisqueezing_db / 10.0)
    vp = VACUUM_VARIANCE * 10.0 ** (spec.squeezing_db / 10.0)
    return _diagonal_state(np.array([vx, vp]))


def tensor(states: list[GaussianState]) -> GaussianState:
    """Compose independent states into one, preserving mode order.

    The result keeps the global (x..., p...) ordering: the x block is the
    direct sum of the parts' x blocks, likewise for p.
    """
    if not states:
        raise ValueError("tensor requires at least one state")
    n = sum(s.n_modes for s in states)
    mean = np.zeros(2 * n)
    cov = np.zeros((2 * n, 2 * n))
    factors = [s.cov_factor for s in states]
    width = sum(f.shape[1] for f in factors) if all(f is not None for f in factors) else None
    factor = np.zeros((2 * n, width)) if width is not None else None
    offset = 0
    col = 0
    for s in states:
        k = s.n_modes
        idx = np.concatenate([np.arange(offset, offset + k), np.arange(n + offset, n + offset + k)])
        mean[idx] = s.mean
        cov[np.ix_(idx, idx)] = s.cov
        if factor is not None:
            cols = s.cov_factor.shape[1]
            factor[idx, col:col + cols] = s.cov_factor
            col += cols
        offset += k
    return GaussianState(mean=mean, cov=cov, cov_factor=factor)


def unitary_to_symplectic(unitary: ComplexUnitary) -> SymplecticMap:
    """Quadrature image of a passive unitary: U = A + iB gives S = [[A, -B], [B, A]]."""
    m = unitary.matrix
    dev = np.max(np.abs(m @ m.conj().T - np.eye(m.shape[0])))
    if dev > CONSTRUCTOR_TOL:
        raise ValueError(f"matrix is not unitary (deviation {dev:.3e})")
    a, b = m.real, m.imag
    return SymplecticMap(np.block([[a, -b], [b, a]]))


def apply_unitary(state: GaussianState, unitary: ComplexUnitary) -> GaussianState:
    """Propagate a state through a passive network: cov -> S cov S^T, mean -> S mean."""
    if unitary.n_modes != state.n_modes:
        raise ValueError(f"unitary acts on {unitary.n_modes} modes but state has {state.n_modes}")
    s = unitary_to_symplectic(unitary).matrix
    cov = s @ state.cov @ s.T
    factor = None if state.cov_factor is None else s @ state.cov_factor
    return GaussianState(mean=s @ state.mean, cov=(cov + cov.T) / 2.0, cov_factor=factor)


def _mode_indices(state: GaussianState, mode: int) -> tuple[int, int]:
    if not 1 <= mode <= state.n_modes:
        raise ValueError(f"mode index {mode} out of range 1..{state.n_modes}")
    return mode - 1, state.n_modes + mode - 1


def lossy_channel(state: GaussianState, mode: int, eta: float) -> GaussianState:
    """Mix one mode with vacuum on a beam splitter of transmissivity eta.

    The mode's rows and columns scale by sqrt(eta) and its diagonal block
    gains (1 - eta)/4; eta = 1 is the identity, eta = 0 replaces the mode
    by vacuum and removes all correlations to it.

    Args:
        state: input state.
        mode: 1-based mode index.
        eta: transmissivity in [0, 1].
    """
    if not (0.0 <= eta <= 1.0):
        raise ValueError(f"transmissivity must lie in [0, 1], got {eta}")
    ix, ip = _mode_indices(state, mode)
    scale = np.ones(2 * state.n_modes)
    scale[[ix, ip]] = math.sqrt(eta)
    cov = state.cov * np.outer(scale, scale)
    cov[ix, ix] += (1.0 - eta) * VACUUM_VARIANCE
    cov[ip, ip] += (1.0 - eta) * VACUUM_VARIANCE
    factor = None
    if state.cov_factor is not None:
        # the admixed vacuum contributes two fresh factor columns
        vac_cols = np.zeros((2 * state.n_modes, 2))
        vac_cols[ix, 0] = vac_cols[ip, 1] = math.sqrt((1.0 - eta) * VACUUM_VARIANCE)
        factor = np.hstack([scale[:, None] * state.cov_factor, vac_cols])
    return GaussianState(mean=state.mean * scale, cov=cov, cov_factor=factor)


def phase_jitter(state: GaussianState, mode: int, sigma: float) -> GaussianState:
    """Average one mode over a random phase-space rotation theta ~ N(0, sigma^2).

    Uses the closed-form Gaussian moments E[cos theta] = e^{-sigma^2/2},
    E[cos 2 theta] = e^{-2 sigma^2}, E[sin theta] = E[sin 2 theta] = 0.  The
    result is the exact covariance of the rotation-averaged mixture, including
    the mean-spread contribution when the mode is displaced.

    Args:
        state: input state.
        mode: 1-based mode index.
        sigma: phase standard deviation in radians, >= 0.
    """
    if not (sigma >= 0.0 and math.isfinite(sigma)):
        raise ValueError(f"jitter sigma must be finite and >= 0, got {sigma}")
    if sigma == 0.0:
        return state
    ix, ip = _mode_indices(state, mode)
    c1 = math.exp(-sigma * sigma / 2.0)
    c2 = math.exp(-2.0 * sigma * sigma)

    # Correlations to other modes shrink by E[cos theta].
    scale = np.ones(2 * state.n_modes)
    scale[[ix, ip]] = c1
    cov = state.cov * np.outer(scale, scale)

    vxx, vpp, vxp = state.cov[ix, ix], state.cov[ip, ip], state.cov[ix, ip]
    cov[ix, ix] = 0.5 * (1 + c2) * vxx + 0.5 * (1 - c2) * vpp
    cov[ip, ip] = 0.5 * (1 - c2) * vxx + 0.5 * (1 + c2) * vpp
    cov[ix, ip] = cov[ip, ix] = c2 * vxp

    mx, mp = state.mean[ix], state.mean[ip]
    if mx != 0.0 or mp != 0.0:
        # Spread of the rotated mean over the phase distribution.
        cov[ix, ix] += (0.5 * (1 + c2) - c1 * c1) * mx * mx + 0.5 * (1 - c2) * mp * mp
        cov[ip, ip] += 0.5 * (1 - c2) * mx * mx + (0.5 * (1 + c2) - c1 * c1) * mp * mp
        spread_xp = (c2 - c1 * c1) * mx * mp
        cov[ix, ip] += spread_xp
        cov[ip, ix] += spread_xp
    return GaussianState(mean=state.mean * scale, cov=cov)


def phase_jitter_mc(
    state: GaussianState,
    mode: int,
    sigma: float,
    samples: int = 200_000,
    seed: int = 0,
) -> GaussianState:
    """Monte-Carlo estimate of :func:`phase_jitter` by sampling rotations.

    Debug and cross-check path only; it applies explicit rotation symplectics
    for `samples` draws of theta and averages the resulting moments.
    """
    if not (sigma >= 0.0 and math.isfinite(sigma)):
        raise ValueError(f"jitter sigma must be finite and >= 0, got {sigma}")
    if samples < 1:
        raise ValueError(f"sample count must be >= 1, got {samples}")
    if sigma == 0.0:
        return state
    ix, ip = _mode_indices(state, mode)
    n2 = 2 * state.n_modes
    rng = np.random.default_rng(seed)

    mean_sum = np.zeros(n2)
    outer_sum = np.zeros((n2, n2))
    cov_sum = np.zeros((n2, n2))
    chunk = 20_000
    done = 0
    while done < samples:
        k = min(chunk, samples - done)
        thetas = rng.normal(0.0, sigma, size=k)
        rots = np.broadcast_to(np.eye(n2), (k, n2, n2)).copy()
        rots[:, ix, ix] = np.cos(thetas)
        rots[:, ix, ip] = -np.sin(thetas)
        rots[:, ip, ix] = np.sin(thetas)
        rots[:, ip, ip] = np.cos(thetas)
        means = np.einsum("kij,j->ki", rots, state.mean)
        mean_sum += means.sum(axis=0)
        outer_sum += np.einsum("ki,kj->ij", means, means)
        cov_sum += np.einsum("kij,jl,kml->im", rots, state.cov, rots)
        done += k

    mean = mean_sum / samples
    cov = cov_sum / samples + outer_sum / samples - np.outer(mean, mean)
    return GaussianState(mean=mean, cov=(cov + cov.T) / 2.0)


def combination_variance(state: GaussianState, coeffs: np.ndarray) -> float:
    """Variance of the quadrature combination sum_k c_k q_k, i.e. c^T cov c.

    The coefficient vector follows the (x..., p...) ordering and the result
    does not depend on the state's mean.  When the state carries a covariance
    factor the quadratic form is evaluated as ||F^T c||^2, which stays
    accurate even when huge antisqueezed variances cancel out of the
    combination.
    """
    c = np.asarray(coeffs, dtype=float)
    if c.shape != (2 * state.n_modes,):
        raise ValueError(f"coefficient vector has length {c.size}, expected {2 * state.n_modes}")
    if state.cov_factor is not None:
        w = state.cov_factor.T @ c
        return float(w @ w)
    return float(c @ state.cov @ c)


def variance_to_db(v: float, v_ref: float) -> float:
    """Variance ratio in decibels, 10 log10(v / v_ref).

    For a nullifier with k unit-coefficient terms the natural reference is
    its vacuum-input variance k/4.
    """
    if not (v > 0.0 and v_ref > 0.0):
        raise ValueError(f"variances must be positive, got v={v}, v_ref={v_ref}")
    return 10.0 * math.log10(v / v_ref)
