"""Mode vectors over comb teeth, orthonormal bases, and projectors.

A comb field is a superposition of discrete spectral teeth.  Pump shapes and
supermodes are both vectors of complex amplitudes over a common tooth range;
everything downstream (channels, covariance transforms) only ever sees the
finite-dimensional subspace these vectors span, so the tooth count is a desk
scale knob, not a physical limit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, PhysicsError

__all__ = [
    "ModeVector",
    "ModeBasis",
    "Projector",
    "inner_product",
    "gram_schmidt",
    "projector_of",
    "unitary_mix",
]

DEFAULT_TOOTH_COUNT = 128

ORTHO_TOL = 1e-10        # pairwise |<vi,vj> - delta_ij| for a valid basis
DEPENDENCE_TOL = 1e-8    # residual norm below this is linear dependence
PROJECTOR_HERM_TOL = 1e-12
PROJECTOR_IDEM_TOL = 1e-10


def _as_complex_vector(amplitudes) -> np.ndarray:
    v = np.asarray(amplitudes, dtype=complex)
    if v.ndim != 1 or v.size == 0:
        raise DimensionError("amplitudes must be a nonempty 1-d sequence")
    if not np.all(np.isfinite(v.view(float))):
        raise PhysicsError("amplitudes must be finite")
    return v


@dataclass(frozen=True)
class ModeVector:
    """Complex amplitude per comb tooth.

    Parameters
    ----------
    amplitudes : array_like of complex
        One amplitude per tooth, tooth ``m`` at frequency offset
        ``(tooth_offset + m) * omega_r``.
    tooth_offset : int
        Index of the first tooth.
    """

    amplitudes: np.ndarray
    tooth_offset: int = 0

    def __post_init__(self):
        v = _as_complex_vector(self.amplitudes)
        v.flags.writeable = False
        object.__setattr__(self, "amplitudes", v)
        object.__setattr__(self, "tooth_offset", int(self.tooth_offset))

    def __len__(self) -> int:
        return self.amplitudes.size

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "ModeVector":
        n = self.norm
        if n == 0.0:
            raise PhysicsError("cannot normalize the zero vector")
        return ModeVector(self.amplitudes / n, self.tooth_offset)

    def to_json(self) -> dict:
        return {
            "tooth_offset": self.tooth_offset,
            "re": self.amplitudes.real.tolist(),
            "im": self.amplitudes.imag.tolist(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ModeVector":
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj["im"], dtype=float)
        if re.shape != im.shape:
            raise DimensionError("re/im length mismatch in mode vector JSON")
        return cls(re + 1j * im, int(obj.get("tooth_offset", 0)))


def _check_common_range(u: ModeVector, v: ModeVector):
    if u.tooth_offset != v.tooth_offset or len(u) != len(v):
        raise DimensionError(
            "mode vectors live on different tooth ranges: "
            f"[{u.tooth_offset}, +{len(u)}) vs [{v.tooth_offset}, +{len(v)})"
        )


def inner_product(u: ModeVector, v: ModeVector) -> complex:
    """Hermitian inner product sum_m conj(u_m) v_m over a common tooth range."""
    _check_common_range(u, v)
    return complex(np.vdot(u.amplitudes, v.amplitudes))


@dataclass(frozen=True)
class ModeBasis:
    """Ordered orthonormal set of ModeVectors over one tooth range."""

    vectors: tuple = field(default_factory=tuple)

    def __post_init__(self):
        vs = tuple(self.vectors)
        if not vs:
            raise DimensionError("basis must contain at least one vector")
        for v in vs[1:]:
            _check_common_range(vs[0], v)
        G = np.array([[np.vdot(a.amplitudes, b.amplitudes) for b in vs] for a in vs])
        if np.abs(G - np.eye(len(vs))).max() > ORTHO_TOL:
            raise PhysicsError(
                "basis is not orthonormal within "
                f"{ORTHO_TOL:g} (max Gram deviation {np.abs(G - np.eye(len(vs))).max():.3e})"
            )
        object.__setattr__(self, "vectors", vs)

    def __len__(self) -> int:
        return len(self.vectors)

    @property
    def tooth_count(self) -> int:
        return len(self.vectors[0])

    @property
    def tooth_offset(self) -> int:
        return self.vectors[0].tooth_offset

    def matrix(self) -> np.ndarray:
        """Rows are the basis vectors: an M x N matrix with orthonormal rows."""
        return np.array([v.amplitudes for v in self.vectors])

    def to_json(self) -> dict:
        return {"vectors": [v.to_json() for v in self.vectors]}

    @classmethod
    def from_json(cls, obj: dict) -> "ModeBasis":
        return cls(tuple(ModeVector.from_json(v) for v in obj["vectors"]))


@dataclass(frozen=True)
class Projector:
    """Hermitian idempotent N x N matrix onto a spanned tooth subspace."""

    matrix: np.ndarray
    rank: int

    def __post_init__(self):
        P = np.asarray(self.matrix, dtype=complex)
        if P.ndim != 2 or P.shape[0] != P.shape[1]:
            raise DimensionError("projector matrix must be square")
        if np.abs(P - P.conj().T).max() > PROJECTOR_HERM_TOL:
            raise PhysicsError("projector is not Hermitian within 1e-12")
        if np.abs(P @ P - P).max() > PROJECTOR_IDEM_TOL:
            raise PhysicsError("projector is not idempotent within 1e-10")
        P.flags.writeable = False
        object.__setattr__(self, "matrix", P)
        object.__setattr__(self, "rank", int(self.rank))


def gram_schmidt(vs) -> ModeBasis:
    """Orthonormalize mode vectors (modified Gram-Schmidt, one re-pass).

    The first output is parallel to the first input.  Raises PhysicsError when
    a residual norm falls below 1e-8 of the original vector norm (linear
    dependence).
    """
    vs = list(vs)
    if not vs:
        raise DimensionError("gram_schmidt needs at least one vector")
    for v in vs[1:]:
        _check_common_range(vs[0], v)
    out = []
    for k, v in enumerate(vs):
        w = v.amplitudes.astype(complex)
        scale = np.linalg.norm(w)
        if scale == 0.0:
            raise PhysicsError(f"vector {k} is linearly dependent (zero norm)")
        # two passes of projection removal for numerical stability
        for _ in range(2):
            for q in out:
                w = w - np.vdot(q, w) * q
        r = np.linalg.norm(w)
        if r < DEPENDENCE_TOL * scale:
            raise PhysicsError(
                f"vector {k} is linearly dependent on its predecessors "
                f"(residual {r / scale:.3e})"
            )
        out.append(w / r)
    off = vs[0].tooth_offset
    return ModeBasis(tuple(ModeVector(w, off) for w in out))


def projector_of(basis: ModeBasis) -> Projector:
    """P = sum_k p_k p_k^H; rank equals the number of basis vectors."""
    A = basis.matrix()
    return Projector(A.conj().T @ A, rank=len(basis))


def unitary_mix(basis: ModeBasis, U) -> ModeBasis:
    """Re-mix a basis: q_j = sum_k U_jk p_k.  Leaves the projector unchanged."""
    U = np.asarray(U, dtype=complex)
    M = len(basis)
    if U.shape != (M, M):
        raise DimensionError(f"expected a {M}x{M} matrix, got {U.shape}")
    if np.abs(U @ U.conj().T - np.eye(M)).max() > ORTHO_TOL:
        raise PhysicsError("mixing matrix is not unitary within 1e-10")
    Q = U @ basis.matrix()
    off = basis.tooth_offset
    return ModeBasis(tuple(ModeVector(q, off) for q in Q))
