"""Modular arithmetic, roots of unity and the Weyl-Heisenberg generators.

Operators are plain ``complex128`` numpy arrays of shape ``(d, d)`` acting on
the computational basis ``|j>``: row index is the output basis state, column
index the input.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


class DomainError(ValueError):
    """Raised when an argument lies outside the domain of an operation."""


def check_dimension(d) -> int:
    """Validate a qudit dimension and return it as a plain ``int``."""
    if isinstance(d, bool) or not isinstance(d, (int, np.integer)):
        raise DomainError(f"dimension must be an integer, got {d!r}")
    d = int(d)
    if d < 2:
        raise DomainError(f"dimension must be >= 2, got {d}")
    return d


def is_odd(d: int) -> bool:
    return check_dimension(d) % 2 == 1


@dataclass(frozen=True)
class PhasePoint:
    """Two-component integer vector, reduced into ``[0, modulus)`` when bounded.

    ``modulus=None`` is the unbounded lattice Z^2.
    """

    v1: int
    v2: int
    modulus: int | None = None

    def __post_init__(self):
        if self.modulus is not None:
            if self.modulus < 1:
                raise DomainError(f"modulus must be positive, got {self.modulus}")
            object.__setattr__(self, "v1", int(self.v1) % self.modulus)
            object.__setattr__(self, "v2", int(self.v2) % self.modulus)
        else:
            object.__setattr__(self, "v1", int(self.v1))
            object.__setattr__(self, "v2", int(self.v2))

    def __iter__(self):
        yield self.v1
        yield self.v2

    def __add__(self, other):
        o1, o2 = other
        return PhasePoint(self.v1 + o1, self.v2 + o2, self.modulus)

    def __neg__(self):
        return PhasePoint(-self.v1, -self.v2, self.modulus)


def _as_pair(k) -> tuple[int, int]:
    k1, k2 = k
    return int(k1), int(k2)


def root_of_unity(order: int, a: int) -> complex:
    """``exp(2*pi*i*a/order)`` with ``a`` reduced modulo ``order`` first."""
    if order < 1:
        raise DomainError(f"order must be >= 1, got {order}")
    a = int(a) % order
    # exact values at the quarter turns keep small grids free of 1e-17 noise
    if (4 * a) % order == 0:
        return (1.0, 1j, -1.0, -1j)[(4 * a) // order]
    return complex(np.exp(2j * np.pi * a / order))


def roots_of_unity(order: int, exponents) -> np.ndarray:
    """Vectorised :func:`root_of_unity` over an integer array of exponents."""
    if order < 1:
        raise DomainError(f"order must be >= 1, got {order}")
    table = np.array([root_of_unity(order, a) for a in range(order)], dtype=complex)
    return table[np.mod(np.asarray(exponents, dtype=np.int64), order)]


def periodic_delta(T: int, v) -> int:
    """T-periodic Kronecker delta of a scalar or a two-component vector."""
    if T < 1:
        raise DomainError(f"period must be >= 1, got {T}")
    if np.ndim(v) == 0 and not isinstance(v, PhasePoint):
        return int(int(v) % T == 0)
    return int(all(int(c) % T == 0 for c in v))


def clock_power(d: int, e: int) -> np.ndarray:
    """``Z**e = sum_j omega_d^(e*j) |j><j|``."""
    d = check_dimension(d)
    j = np.arange(d)
    return np.diag(roots_of_unity(d, e * j))


def shift_power(d: int, e: int) -> np.ndarray:
    """``X**e = sum_j |j+e mod d><j|``."""
    d = check_dimension(d)
    out = np.zeros((d, d), dtype=complex)
    j = np.arange(d)
    out[(j + e) % d, j] = 1.0
    return out


def whdo(d: int, k) -> np.ndarray:
    """Schwinger displacement ``V(k) = omega_2d^(-k1*k2) Z^k2 X^k1``.

    ``k`` is any integer pair; V is 2d-periodic in each component so the
    pair is reduced mod 2d before the phase is evaluated.
    """
    d = check_dimension(d)
    k1, k2 = _as_pair(k)
    k1 %= 2 * d
    k2 %= 2 * d
    return root_of_unity(2 * d, -k1 * k2) * (clock_power(d, k2) @ shift_power(d, k1))


@lru_cache(maxsize=None)
def _whdo_table(d: int) -> np.ndarray:
    table = np.empty((2 * d, 2 * d, d, d), dtype=complex)
    for m1 in range(2 * d):
        for m2 in range(2 * d):
            table[m1, m2] = whdo(d, (m1, m2))
    table.setflags(write=False)
    return table


def whdo_table(d: int) -> np.ndarray:
    """All ``V(m)`` for ``m`` in Z_2d^2, shape ``(2d, 2d, d, d)``, read-only."""
    return _whdo_table(check_dimension(d))


def parity(d: int) -> np.ndarray:
    """Discrete parity ``R = sum_j |-j mod d><j|``."""
    d = check_dimension(d)
    out = np.zeros((d, d), dtype=complex)
    j = np.arange(d)
    out[(-j) % d, j] = 1.0
    return out


def hs_inner(A: np.ndarray, B: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product ``Tr[A^dagger B]``."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape != B.shape or A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DomainError(f"operator shapes differ or are not square: {A.shape} vs {B.shape}")
    return complex(np.vdot(A, B))


def operator_dimension(O: np.ndarray) -> int:
    """Return d for a square ``(d, d)`` operator, raising on anything else."""
    O = np.asarray(O)
    if O.ndim != 2 or O.shape[0] != O.shape[1]:
        raise DomainError(f"operator must be a square matrix, got shape {O.shape}")
    if not np.all(np.isfinite(O)):
        raise DomainError("operator has non-finite entries")
    return check_dimension(O.shape[0])
