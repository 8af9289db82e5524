"""Stencils on the doubled phase space: builtins, sampling and validity checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .doubled_space import (
    _BITS,
    coset_sign,
    cross_correlate,
    grid_dimension,
    negate_indices,
    project,
    sdft,
)
from .qudit_algebra import DomainError, check_dimension, roots_of_unity

DEFAULT_TOL = 1e-10

BUILTIN_KINDS = ("rs", "cgs", "dks")


class ConstructionError(RuntimeError):
    """A sampled stencil could not satisfy its own symmetry constraints."""


@dataclass(frozen=True, eq=False)
class Stencil:
    """A complex function on Z_2d^2 together with its projection.

    ``projected`` is computed from ``raw`` when not supplied.
    """

    raw: np.ndarray
    label: str = ""
    projected: np.ndarray = field(default=None)

    def __post_init__(self):
        raw = np.array(self.raw, dtype=complex)
        grid_dimension(raw)
        raw.setflags(write=False)
        object.__setattr__(self, "raw", raw)
        if self.projected is None:
            proj = project(raw)
        else:
            proj = np.array(self.projected, dtype=complex)
            if proj.shape != raw.shape:
                raise DomainError("projected grid shape does not match raw grid")
        proj.setflags(write=False)
        object.__setattr__(self, "projected", proj)

    @property
    def d(self) -> int:
        return self.raw.shape[0] // 2

    def as_projected(self) -> "Stencil":
        """The stencil whose raw grid is this stencil's projection."""
        return Stencil(self.projected, label=f"{self.label}-projected", projected=self.projected)


@dataclass(frozen=True)
class ValidityReport:
    m1_ok: bool
    m2_ok: bool
    m3_ok: bool
    residuals: dict
    domain: str
    tolerance: float

    @property
    def ok(self) -> bool:
        return self.m1_ok and self.m2_ok and self.m3_ok

    def summary(self) -> str:
        return " ".join(f"M{i} {'ok' if flag else 'FAIL'}"
                        for i, flag in enumerate((self.m1_ok, self.m2_ok, self.m3_ok), 1))

    def to_dict(self) -> dict:
        return {
            "domain": self.domain,
            "tolerance": self.tolerance,
            "m1_ok": self.m1_ok,
            "m2_ok": self.m2_ok,
            "m3_ok": self.m3_ok,
            "residuals": dict(self.residuals),
        }


def dirichlet_kernel(d: int, m: int) -> float:
    """One-dimensional Dirichlet kernel ``K_d(m)`` for odd d.

    Evaluated as ``(1/d) sum_t omega_2d^(t m)`` over ``|t| <= (d-1)/2``, which
    has no removable singularity at ``m = 0 mod 2d``.
    """
    d = check_dimension(d)
    if d % 2 == 0:
        raise DomainError(f"Dirichlet kernel requires odd d, got d={d}")
    h = (d - 1) // 2
    t = np.arange(-h, h + 1)
    return float(np.sum(roots_of_unity(2 * d, t * int(m))).real / d)


def dirichlet_kernel_sine(d: int, m: int) -> float:
    """Sine-ratio form of :func:`dirichlet_kernel`; undefined at ``m = 0 mod 2d``."""
    d = check_dimension(d)
    if d % 2 == 0:
        raise DomainError(f"Dirichlet kernel requires odd d, got d={d}")
    if int(m) % (2 * d) == 0:
        raise DomainError("sine form is singular at m = 0 mod 2d")
    return math.sin(math.pi * m / 2) / (d * math.sin(math.pi * m / (2 * d)))


def boxcar(d: int, k: int) -> int:
    """2d-periodic boxcar: 1 where ``Re omega_2d^k > 0``, else 0 (odd d)."""
    d = check_dimension(d)
    if d % 2 == 0:
        raise DomainError(f"boxcar requires odd d, got d={d}")
    # Re omega_2d^k > 0  <=>  |k| < d/2 on the symmetric representative
    r = int(k) % (2 * d)
    if r > d:
        r -= 2 * d
    return int(2 * abs(r) < d)


def builtin_stencil(kind: str, d: int) -> Stencil:
    """Reduction (RS, odd d), coarse-grain (CGS, even d) or Dirichlet-kernel (DKS, odd d)."""
    d = check_dimension(d)
    kind = kind.lower()
    n = 2 * d
    grid = np.zeros((n, n), dtype=complex)
    if kind == "rs":
        if d % 2 == 0:
            raise DomainError(f"RS requires odd d (got d={d})")
        grid[0, 0] = 2.0
    elif kind == "cgs":
        if d % 2:
            raise DomainError(f"CGS requires even d (got d={d})")
        for b1, b2 in _BITS:
            grid[b1, b2] = 1.0
    elif kind == "dks":
        if d % 2 == 0:
            raise DomainError(f"DKS requires odd d (got d={d})")
        kern = np.array([dirichlet_kernel(d, m) for m in range(n)])
        grid[:] = np.outer(kern, kern)
    else:
        raise DomainError(f"unknown stencil kind {kind!r}; expected one of {BUILTIN_KINDS}")
    return Stencil(grid, label=f"{kind}{d}")


def zero_stencil(d: int) -> Stencil:
    d = check_dimension(d)
    return Stencil(np.zeros((2 * d, 2 * d), dtype=complex), label=f"zero{d}")


def _check_tol(tol: float) -> float:
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    return float(tol)


def validate_stencil(M: Stencil, tol: float = DEFAULT_TOL) -> ValidityReport:
    """Check M1 (realness), M2 (unit sum) and M3 (even-site autocorrelation) on the projection."""
    tol = _check_tol(tol)
    d = M.d
    Mbar = M.projected
    r1 = float(max(np.abs(Mbar.imag).max(), np.abs(Mbar.conj() - Mbar).max()))
    r2 = float(abs(Mbar.sum() - 1))
    target = np.zeros((d, d))
    target[0, 0] = 1.0
    auto = cross_correlate(Mbar, Mbar)[::2, ::2]
    r3 = float(np.abs(auto - target).max())
    return ValidityReport(r1 <= tol, r2 <= tol, r3 <= tol,
                          {"m1": r1, "m2": r2, "m3": r3}, "spatial", tol)


def validate_stencil_fourier(M: Stencil, tol: float = DEFAULT_TOL) -> ValidityReport:
    """Same criteria expressed on ``B = project(sdft(raw))``."""
    tol = _check_tol(tol)
    d = M.d
    B = project(sdft(M.raw))
    r1 = float(np.abs(B.conj() - negate_indices(B)).max())
    r2 = float(abs(B[0, 0] - 1 / (2 * d)))
    r3 = float(np.abs(np.abs(B) - 1 / (2 * d)).max())
    return ValidityReport(r1 <= tol, r2 <= tol, r3 <= tol,
                          {"m1": r1, "m2": r2, "m3": r3}, "fourier", tol)


def stencil_from_fourier(B: np.ndarray, label: str = "") -> Stencil:
    """Stencil whose SDFT is ``B``; if ``B`` is projector-invariant so is the result."""
    return Stencil(sdft(np.asarray(B, dtype=complex)), label=label)


def fourier_orbits(d: int) -> list[dict]:
    """Orbits of Z_2d^2 under negation and the coset shifts ``m -> m - d b``.

    Each orbit is a dict with the lexicographically first point ``rep``,
    the shift ``pair_shift`` taking ``rep`` to ``-rep`` (``None`` when ``-rep``
    lies in a different coset), and the two cosets ``{b: m}`` of ``rep`` and
    ``-rep``.
    """
    d = check_dimension(d)
    n = 2 * d
    seen = np.zeros((n, n), dtype=bool)
    orbits = []
    for r1 in range(n):
        for r2 in range(n):
            if seen[r1, r2]:
                continue
            rep = (r1, r2)
            neg = ((-r1) % n, (-r2) % n)
            coset = {b: ((r1 - d * b[0]) % n, (r2 - d * b[1]) % n) for b in _BITS}
            neg_coset = {b: ((neg[0] - d * b[0]) % n, (neg[1] - d * b[1]) % n) for b in _BITS}
            pair_shift = next((b for b, m in coset.items() if m == neg), None)
            for m in list(coset.values()) + list(neg_coset.values()):
                seen[m] = True
            orbits.append({"rep": rep, "pair_shift": pair_shift,
                           "coset": coset, "neg_coset": neg_coset})
    return orbits


def sample_fourier_grid(d: int, seed: int) -> np.ndarray:
    """Random projector-invariant grid satisfying the Fourier-domain validity criteria.

    Phases are drawn on one representative per orbit and propagated by the
    negation and coset-shift symmetries; the modulus is ``1/2d`` everywhere.
    """
    d = check_dimension(d)
    n = 2 * d
    rng = np.random.default_rng(seed)
    B = np.full((n, n), np.nan, dtype=complex)
    amp = 1.0 / n
    for orbit in fourier_orbits(d):
        rep = orbit["rep"]
        b0 = orbit["pair_shift"]
        if rep == (0, 0):
            value = amp
        elif b0 is not None:
            # conj(B(r)) = s B(r): real if s = +1, imaginary if s = -1
            s = coset_sign(d, rep, b0)
            sign = 1.0 if rng.integers(2) else -1.0
            value = amp * sign * (1.0 if s == 1 else 1j)
        else:
            value = amp * np.exp(1j * rng.uniform(0.0, 2 * np.pi))
        neg = orbit["neg_coset"][(0, 0)]
        for b, m in orbit["coset"].items():
            _assign(B, m, coset_sign(d, rep, b) * value)
        for b, m in orbit["neg_coset"].items():
            _assign(B, m, coset_sign(d, neg, b) * np.conj(value))
    assert not np.isnan(B).any()
    return B


def _assign(B: np.ndarray, m, value, tol=1e-12):
    current = B[m]
    if np.isnan(current.real):
        B[m] = value
    elif abs(current - value) > tol:
        raise ConstructionError(f"inconsistent phase constraint at {m}: {current} vs {value}")


def sample_valid_stencil(d: int, seed: int) -> Stencil:
    """A random valid stencil, equal to its own projection."""
    B = sample_fourier_grid(d, seed)
    M = stencil_from_fourier(B, label=f"sampled{d}-seed{seed}")
    return M


def stencils_equivalent(M1: Stencil, M2: Stencil, tol: float = DEFAULT_TOL) -> bool:
    """True iff the projections agree entrywise within ``tol``."""
    if M1.d != M2.d:
        raise DomainError(f"stencils have different dimensions: {M1.d} vs {M2.d}")
    return bool(np.abs(M1.projected - M2.projected).max() <= tol)
