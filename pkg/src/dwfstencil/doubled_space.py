"""The doubled phase space Z_2d^2.

A function on the doubled space (a stencil, a doubled Wigner function, ...) is
a complex ``(2d, 2d)`` array indexed ``grid[m1, m2]``, with ``m1`` the position
displacement index.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .qudit_algebra import (
    DomainError,
    check_dimension,
    operator_dimension,
    parity,
    roots_of_unity,
    whdo_table,
)

_BITS = ((0, 0), (1, 0), (0, 1), (1, 1))


def grid_dimension(f: np.ndarray) -> int:
    """Return d for a ``(2d, 2d)`` doubled grid."""
    f = np.asarray(f)
    if f.ndim != 2 or f.shape[0] != f.shape[1] or f.shape[0] % 2:
        raise DomainError(f"doubled grid must be 2d x 2d, got shape {f.shape}")
    if not np.all(np.isfinite(f)):
        raise DomainError("doubled grid has non-finite entries")
    return check_dimension(f.shape[0] // 2)


@lru_cache(maxsize=None)
def _doubled_frame(d: int) -> np.ndarray:
    frame = whdo_table(d) @ parity(d)
    frame.setflags(write=False)
    return frame


def doubled_frame(d: int) -> np.ndarray:
    """All doubled phase-point operators ``A2d(m) = V(m) R``, shape ``(2d, 2d, d, d)``."""
    return _doubled_frame(check_dimension(d))


def doubled_ppo(d: int, m) -> np.ndarray:
    """Doubled phase-point operator ``V(m) R`` at ``m`` (reduced mod 2d)."""
    d = check_dimension(d)
    m1, m2 = m
    return doubled_frame(d)[int(m1) % (2 * d), int(m2) % (2 * d)].copy()


def doubled_wigner(O: np.ndarray) -> np.ndarray:
    """Doubled Wigner transform ``W(m) = Tr[A2d(m)^dagger O] / 2d``."""
    d = operator_dimension(O)
    A = doubled_frame(d)
    return np.einsum("abij,ij->ab", A.conj(), O) / (2 * d)


def doubled_weyl(f: np.ndarray) -> np.ndarray:
    """Doubled Weyl transform ``(1/2) sum_m f(m) A2d(m)``."""
    d = grid_dimension(f)
    return 0.5 * np.einsum("ab,abij->ij", f, doubled_frame(d))


@lru_cache(maxsize=None)
def _projector_signs(d: int) -> np.ndarray:
    m1, m2 = np.meshgrid(np.arange(2 * d), np.arange(2 * d), indexing="ij")
    signs = np.empty((4, 2 * d, 2 * d))
    for i, (b1, b2) in enumerate(_BITS):
        signs[i] = (-1.0) ** ((b1 * m2 - b2 * m1 - b1 * b2 * d) % 2)
    signs.setflags(write=False)
    return signs


def coset_sign(d: int, m, b) -> int:
    """Sign linking ``f(m - d*b)`` to ``f(m)`` for ``f`` in the projector image."""
    m1, m2 = m
    b1, b2 = b
    return -1 if (m1 * b2 - m2 * b1 - b1 * b2 * d) % 2 else 1


def project(f: np.ndarray) -> np.ndarray:
    """Orthogonal projection onto the image of the doubled Wigner transform.

    Uses the closed four-term form
    ``fbar(m) = 1/4 sum_b (-1)^(b1 m2 - b2 m1 - b1 b2 d) f(m - d b)``.
    """
    d = grid_dimension(f)
    f = np.asarray(f, dtype=complex)
    signs = _projector_signs(d)
    out = np.zeros_like(f)
    for i, (b1, b2) in enumerate(_BITS):
        # np.roll by +d*b places f(m - d*b) at m
        out += signs[i] * np.roll(f, (d * b1, d * b2), axis=(0, 1))
    return out / 4


def projector_matrix_element(d: int, m, mp) -> complex:
    """``P[m, m']`` of the projector, from the explicit delta sum."""
    d = check_dimension(d)
    n = 2 * d
    m1, m2 = (int(c) % n for c in m)
    p1, p2 = (int(c) % n for c in mp)
    total = 0.0
    for b1, b2 in _BITS:
        if (m1 - p1 - d * b1) % n == 0 and (m2 - p2 - d * b2) % n == 0:
            total += (-1.0) ** ((b1 * m2 - b2 * m1 - b1 * b2 * d) % 2)
    return complex(total / 4)


def projector_matrix(d: int) -> np.ndarray:
    """Dense ``(4d^2, 4d^2)`` projector matrix on row-major flattened grids."""
    d = check_dimension(d)
    n = 2 * d
    P = np.zeros((n * n, n * n), dtype=complex)
    for i in range(n * n):
        for j in range(n * n):
            P[i, j] = projector_matrix_element(d, divmod(i, n), divmod(j, n))
    return P


def inner(f: np.ndarray, g: np.ndarray) -> complex:
    """``<f, g> = sum_m conj(f(m)) g(m)``."""
    f = np.asarray(f)
    g = np.asarray(g)
    if f.shape != g.shape:
        raise DomainError(f"grid shapes differ: {f.shape} vs {g.shape}")
    return complex(np.vdot(f, g))


def cross_correlate(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """``(f * g)(m) = sum_m' conj(f(m')) g(m' + m)``, indices mod 2d."""
    d = grid_dimension(f)
    if grid_dimension(g) != d:
        raise DomainError(f"grids have different dimensions: {np.shape(f)} vs {np.shape(g)}")
    n = 2 * d
    out = np.empty((n, n), dtype=complex)
    for m1 in range(n):
        for m2 in range(n):
            out[m1, m2] = np.vdot(f, np.roll(g, (-m1, -m2), axis=(0, 1)))
    return out


@lru_cache(maxsize=None)
def _sdft_kernel(d: int) -> np.ndarray:
    n = 2 * d
    idx = np.arange(n)
    m1, m2, p1, p2 = np.meshgrid(idx, idx, idx, idx, indexing="ij")
    kernel = roots_of_unity(n, -(m1 * p2 - m2 * p1)) / n
    kernel.setflags(write=False)
    return kernel


def sdft(f: np.ndarray) -> np.ndarray:
    """Symplectic DFT ``(1/2d) sum_m' omega_2d^-(m1 m2' - m2 m1') f(m')``; self-inverse."""
    d = grid_dimension(f)
    return np.einsum("abcd,cd->ab", _sdft_kernel(d), f)


def delta_grid(d: int, m=(0, 0), value=1.0) -> np.ndarray:
    """Doubled grid with a single nonzero ``value`` at ``m``."""
    d = check_dimension(d)
    f = np.zeros((2 * d, 2 * d), dtype=complex)
    f[int(m[0]) % (2 * d), int(m[1]) % (2 * d)] = value
    return f


def negate_indices(f: np.ndarray) -> np.ndarray:
    """``g(m) = f(-m)`` on a periodic grid of any size."""
    f = np.asarray(f)
    return np.roll(f[::-1, ::-1], (1, 1), axis=(0, 1))
