"""Phase-point operator frames generated by stencils, and the DWFs they define.

A Wigner grid is a complex ``(d, d)`` array indexed ``W[a1, a2]``. A frame
stores its operators as a ``(d, d, d, d)`` array, ``ppos[a1, a2]`` being the
operator at phase-space point ``(a1, a2)``.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .doubled_space import cross_correlate, doubled_frame, doubled_weyl, doubled_wigner
from .qudit_algebra import DomainError, check_dimension, operator_dimension, whdo_table
from .stencil_kit import DEFAULT_TOL, Stencil, _check_tol


def stencil_hash(M: Stencil, decimals: int = 9) -> str:
    """Digest of the rounded projected stencil; equal digests imply equal frames."""
    rounded = np.round(M.projected, decimals) + 0.0  # folds -0.0 into 0.0
    payload = np.ascontiguousarray(np.stack([rounded.real, rounded.imag])).tobytes()
    return hashlib.sha256(f"{M.d}:".encode() + payload).hexdigest()


@dataclass(frozen=True, eq=False)
class PPOFrame:
    ppos: np.ndarray
    source: str = ""
    stencil_digest: str = ""
    stencil: Stencil | None = field(default=None, repr=False)

    def __post_init__(self):
        ppos = np.array(self.ppos, dtype=complex)
        if ppos.ndim != 4 or len(set(ppos.shape)) != 1:
            raise DomainError(f"frame must have shape (d, d, d, d), got {ppos.shape}")
        check_dimension(ppos.shape[0])
        ppos.setflags(write=False)
        object.__setattr__(self, "ppos", ppos)

    @property
    def d(self) -> int:
        return self.ppos.shape[0]

    def __getitem__(self, alpha) -> np.ndarray:
        a1, a2 = alpha
        return self.ppos[int(a1) % self.d, int(a2) % self.d]


def m_ppo_frame(M: Stencil) -> PPOFrame:
    """``A^M(alpha) = (1/2) sum_m M(m) A2d(m + 2 alpha)``."""
    d = M.d
    A2d = doubled_frame(d)
    ppos = np.empty((d, d, d, d), dtype=complex)
    for a1 in range(d):
        for a2 in range(d):
            shifted = np.roll(M.raw, (2 * a1, 2 * a2), axis=(0, 1))
            ppos[a1, a2] = 0.5 * np.einsum("ab,abij->ij", shifted, A2d)
    return PPOFrame(ppos, source=M.label, stencil_digest=stencil_hash(M), stencil=M)


def m_ppo_frame_from_projection(M: Stencil) -> PPOFrame:
    """Same frame via ``A^M(alpha) = Op2d[conj(Mbar(. - 2 alpha))]``; agrees for real ``Mbar``."""
    d = M.d
    ppos = np.empty((d, d, d, d), dtype=complex)
    for a1 in range(d):
        for a2 in range(d):
            shifted = np.roll(M.projected, (2 * a1, 2 * a2), axis=(0, 1))
            ppos[a1, a2] = doubled_weyl(shifted.conj())
    return PPOFrame(ppos, source=M.label, stencil_digest=stencil_hash(M), stencil=M)


def frames_equal(F1: PPOFrame, F2: PPOFrame, tol: float = DEFAULT_TOL) -> bool:
    if F1.d != F2.d:
        return False
    if F1.stencil_digest and F1.stencil_digest == F2.stencil_digest:
        return True
    return bool(np.abs(F1.ppos - F2.ppos).max() <= tol)


def _check_match(O: np.ndarray, F: PPOFrame) -> int:
    d = operator_dimension(O)
    if d != F.d:
        raise DomainError(f"operator dimension {d} does not match frame dimension {F.d}")
    return d


def wig(O: np.ndarray, F: PPOFrame) -> np.ndarray:
    """``W(alpha) = Tr[A(alpha)^dagger O] / d``."""
    d = _check_match(O, F)
    return np.einsum("xyij,ij->xy", F.ppos.conj(), O) / d


def wig_via_stencil(O: np.ndarray, M: Stencil) -> np.ndarray:
    """``W(alpha) = (M * W2d_O)(2 alpha)``, computed from the doubled Wigner function."""
    d = operator_dimension(O)
    if d != M.d:
        raise DomainError(f"operator dimension {d} does not match stencil dimension {M.d}")
    return cross_correlate(M.raw, doubled_wigner(O))[::2, ::2]


def weyl(W: np.ndarray, F: PPOFrame) -> np.ndarray:
    """``sum_alpha W(alpha) A(alpha)``."""
    W = np.asarray(W)
    if W.shape != (F.d, F.d):
        raise DomainError(f"grid shape {W.shape} does not match frame dimension {F.d}")
    return np.einsum("xy,xyij->ij", W, F.ppos)


@dataclass(frozen=True)
class MUBReport:
    qh_projectors_ok: bool
    qv_projectors_ok: bool
    within_basis_orthonormal: bool
    unbiasedness_residual: float
    residuals: dict
    tolerance: float

    @property
    def ok(self) -> bool:
        return (self.qh_projectors_ok and self.qv_projectors_ok
                and self.within_basis_orthonormal
                and self.unbiasedness_residual <= self.tolerance)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "qh_projectors_ok": self.qh_projectors_ok,
            "qv_projectors_ok": self.qv_projectors_ok,
            "within_basis_orthonormal": self.within_basis_orthonormal,
            "unbiasedness_residual": self.unbiasedness_residual,
            "residuals": dict(self.residuals),
            "tolerance": self.tolerance,
        }


@dataclass(frozen=True)
class FrameReport:
    a1_ok: bool
    a2_ok: bool
    a3_ok: bool
    a4_ok: bool
    residuals: dict
    marginalisation: MUBReport
    tolerance: float

    @property
    def ok(self) -> bool:
        return self.a1_ok and self.a2_ok and self.a3_ok and self.a4_ok

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "a1_ok": self.a1_ok,
            "a2_ok": self.a2_ok,
            "a3_ok": self.a3_ok,
            "a4_ok": self.a4_ok,
            "residuals": dict(self.residuals),
            "tolerance": self.tolerance,
            "marginalisation": self.marginalisation.to_dict(),
        }


def frame_residuals(F: PPOFrame) -> dict:
    """Max deviations from Hermiticity, unit trace, orthogonality and WHDO covariance."""
    d = F.d
    A = F.ppos
    flat = A.reshape(d * d, d, d)
    a1 = np.abs(flat - flat.conj().transpose(0, 2, 1)).max()
    a2 = np.abs(np.trace(flat, axis1=1, axis2=2) - 1).max()
    gram = np.einsum("pij,qij->pq", flat.conj(), flat)
    a3 = np.abs(gram - d * np.eye(d * d)).max()
    V = whdo_table(d)
    a4 = 0.0
    for k1 in range(d):
        for k2 in range(d):
            Vk = V[k1, k2]
            moved = Vk @ A @ Vk.conj().T
            target = np.roll(A, (-k1, -k2), axis=(0, 1))  # target[a] = A(a + k)
            a4 = max(a4, float(np.abs(moved - target).max()))
    return {"a1": float(a1), "a2": float(a2), "a3": float(a3), "a4": a4}


def marginals(F: PPOFrame) -> tuple[np.ndarray, np.ndarray]:
    """Horizontal ``Q_H[a2]`` and vertical ``Q_V[a1]`` line averages of the frame."""
    d = F.d
    QH = F.ppos.sum(axis=0) / d
    QV = F.ppos.sum(axis=1) / d
    return QH, QV


def _projector_family(Q: np.ndarray):
    """Residual of a family being rank-1 orthogonal projectors resolving I, plus their vectors."""
    d = Q.shape[0]
    herm = np.abs(Q - Q.conj().transpose(0, 2, 1)).max()
    idem = np.abs(Q @ Q - Q).max()
    tr = np.abs(np.trace(Q, axis1=1, axis2=2) - 1).max()
    vectors = np.empty((d, d), dtype=complex)
    rank1 = 0.0
    for i, q in enumerate(Q):
        vals, vecs = np.linalg.eigh(0.5 * (q + q.conj().T))
        top = int(np.argmax(np.abs(vals)))
        v = vecs[:, top]
        vectors[i] = v
        rank1 = max(rank1, float(np.abs(np.outer(v, v.conj()) - q).max()))
    projector = float(max(herm, idem, tr, rank1))
    cross = np.einsum("pij,qjk->pqik", Q, Q)
    cross[np.arange(d), np.arange(d)] = 0
    ortho = float(max(np.abs(cross).max(), np.abs(Q.sum(axis=0) - np.eye(d)).max()))
    return projector, ortho, vectors


def check_marginalisation(F: PPOFrame, tol: float = DEFAULT_TOL) -> MUBReport:
    """Test whether the line marginals are projectors onto two mutually unbiased bases."""
    tol = _check_tol(tol)
    d = F.d
    QH, QV = marginals(F)
    h_proj, h_ortho, h_vecs = _projector_family(QH)
    v_proj, v_ortho, v_vecs = _projector_family(QV)
    overlaps = np.abs(h_vecs.conj() @ v_vecs.T) ** 2
    unbiased = float(np.abs(overlaps - 1 / d).max())
    return MUBReport(
        qh_projectors_ok=h_proj <= tol,
        qv_projectors_ok=v_proj <= tol,
        within_basis_orthonormal=max(h_ortho, v_ortho) <= tol,
        unbiasedness_residual=unbiased,
        residuals={"qh_projector": h_proj, "qv_projector": v_proj,
                   "qh_orthogonality": h_ortho, "qv_orthogonality": v_ortho},
        tolerance=tol,
    )


def validate_frame(F: PPOFrame, tol: float = DEFAULT_TOL) -> FrameReport:
    tol = _check_tol(tol)
    res = frame_residuals(F)
    return FrameReport(
        a1_ok=res["a1"] <= tol,
        a2_ok=res["a2"] <= tol,
        a3_ok=res["a3"] <= tol,
        a4_ok=res["a4"] <= tol,
        residuals=res,
        marginalisation=check_marginalisation(F, tol),
        tolerance=tol,
    )


def stencil_from_frame(F: PPOFrame) -> Stencil:
    """Generating stencil of a valid frame: the doubled Wigner function of ``A(0)``."""
    return Stencil(doubled_wigner(F.ppos[0, 0]), label=f"from-frame:{F.source}")


def negativity(W: np.ndarray, imag_tol: float = 1e-8) -> float:
    """Sum of the magnitudes of the negative entries of a real Wigner grid."""
    W = np.asarray(W)
    if np.iscomplexobj(W) and W.size and np.abs(W.imag).max() > imag_tol:
        raise DomainError("negativity is undefined for a non-real Wigner grid")
    return float(np.maximum(0.0, -np.real(W)).sum())
