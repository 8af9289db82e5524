"""Linear maps between the DWFs (and Weyl quantisations) of two valid stencils.

Wigner grids are flattened row-major, ``alpha -> a1 * d + a2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dwf_engine import PPOFrame, m_ppo_frame, weyl, wig
from .qudit_algebra import DomainError
from .stencil_kit import DEFAULT_TOL, Stencil, validate_stencil


@dataclass(frozen=True, eq=False)
class FunctionMap:
    """Dense ``(d^2, d^2)`` matrix, rows indexed by target point, columns by source point."""

    matrix: np.ndarray
    source: str = ""
    target: str = ""

    @property
    def d(self) -> int:
        return int(round(np.sqrt(self.matrix.shape[0])))

    def __matmul__(self, other: "FunctionMap") -> "FunctionMap":
        return FunctionMap(self.matrix @ other.matrix, source=other.source, target=self.target)


def _require_valid(M: Stencil, tol: float) -> None:
    report = validate_stencil(M, tol)
    if not report.ok:
        raise DomainError(f"stencil {M.label!r} is not valid ({report.summary()}; "
                          f"residuals {report.residuals})")


def _frames(M1: Stencil, M2: Stencil, tol: float) -> tuple[PPOFrame, PPOFrame]:
    if M1.d != M2.d:
        raise DomainError(f"stencils have different dimensions: {M1.d} vs {M2.d}")
    _require_valid(M1, tol)
    _require_valid(M2, tol)
    return m_ppo_frame(M1), m_ppo_frame(M2)


def build_function_map(M1: Stencil, M2: Stencil, tol: float = DEFAULT_TOL) -> FunctionMap:
    """``E[alpha, beta] = Tr[A2(alpha)^dagger A1(beta)] / d``, mapping M1-DWFs to M2-DWFs."""
    F1, F2 = _frames(M1, M2, tol)
    d = F1.d
    A1 = F1.ppos.reshape(d * d, d, d)
    A2 = F2.ppos.reshape(d * d, d, d)
    E = np.einsum("aij,bij->ab", A2.conj(), A1) / d
    return FunctionMap(E, source=M1.label, target=M2.label)


def apply_function_map(E: FunctionMap, W: np.ndarray) -> np.ndarray:
    W = np.asarray(W)
    d = E.d
    if W.shape != (d, d):
        raise DomainError(f"grid shape {W.shape} does not match map dimension {d}")
    return (E.matrix @ W.reshape(d * d)).reshape(d, d)


def apply_operator_map(M1: Stencil, M2: Stencil, O: np.ndarray,
                       tol: float = DEFAULT_TOL) -> np.ndarray:
    """Re-quantise the M1-DWF of ``O`` with the M2 frame."""
    F1, F2 = _frames(M1, M2, tol)
    return weyl(wig(O, F1), F2)
