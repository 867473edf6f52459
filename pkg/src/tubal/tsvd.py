"""Tensor spectral toolkit: t-SVD, tubal rank, nuclear/spectral norms, SVT.

Everything here works one Fourier slice at a time.  For a real tensor the
slices come in conjugate pairs, so each routine decomposes only the first
``n3 // 2 + 1`` slices and either mirrors the factors (t-SVD, SVT) or
double-counts the paired contributions (norms, ranks).

Singular values of the tensor are the diagonal entries of the first frontal
slice of the middle factor; they equal the per-slice singular values
averaged across the spectrum, hence are nonnegative and non-increasing.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NegativeThreshold
from .tensor import (
    _require_tensor,
    ctranspose,
    half_spectrum,
    tprod,
)


def _mirror_weights(n3: int) -> np.ndarray:
    """Multiplicity of each independent Fourier slice; sums to n3."""
    h = half_spectrum(n3)
    w = np.full(h, 2.0)
    w[0] = 1.0
    if n3 % 2 == 0:
        w[h - 1] = 1.0
    return w


def _half_slices(a: np.ndarray) -> np.ndarray:
    """The independent Fourier slices, stacked as (h, n1, n2)."""
    n3 = a.shape[2]
    return np.fft.fft(a, axis=2).transpose(2, 0, 1)[: half_spectrum(n3)]


def _slice_svals(a: np.ndarray) -> np.ndarray:
    """Per-slice singular values, shape (h, min(n1, n2))."""
    return np.linalg.svd(_half_slices(a), compute_uv=False)


def singular_values(a: np.ndarray) -> np.ndarray:
    """Tensor singular values s(i, i, 1), non-increasing, length min(n1, n2)."""
    a = _require_tensor(a)
    sv = _slice_svals(a)
    w = _mirror_weights(a.shape[2])
    return (w[:, None] * sv).sum(axis=0) / a.shape[2]


@dataclass(frozen=True)
class TSvdFactors:
    """Orthogonal-diagonal-orthogonal factorization of a 3-way tensor.

    u: (n1, k, n3), v: (n2, k, n3) with orthonormal lateral slices under the
    tensor product; s: (k, k, n3) with every frontal slice diagonal.  mode is
    "full" (k = min(n1, n2)) or "skinny" (k = tubal rank or caller-chosen).
    """

    u: np.ndarray
    s: np.ndarray
    v: np.ndarray
    mode: str

    @property
    def k(self) -> int:
        return self.u.shape[1]

    @property
    def spectrum(self) -> np.ndarray:
        """Diagonal of the first frontal slice of s."""
        return np.ascontiguousarray(np.diagonal(self.s[:, :, 0]))

    def compose(self) -> np.ndarray:
        """Reconstruct u * s * v^H."""
        return tprod(self.u, tprod(self.s, ctranspose(self.v)))


def tsvd(a: np.ndarray, mode: str = "full", k: int | None = None,
         rank_tol: float = 1e-6, check_mirrors: bool = False) -> TSvdFactors:
    """Factor a tensor as u * s * v^H via per-slice SVDs.

    Parameters
    ----------
    a : ndarray (n1, n2, n3)
    mode : "full" keeps k = min(n1, n2) components; "skinny" truncates to
        the tubal rank at rank_tol (or to the caller-supplied k).
    k : explicit number of components for skinny mode.
    rank_tol : relative threshold used to count nonzero singular values.
    check_mirrors : recompute the mirrored slices directly and verify the
        copied factors reproduce them to 1e-10 (debug aid).
    """
    a = _require_tensor(a)
    if mode not in ("full", "skinny"):
        raise ValueError(f"mode must be 'full' or 'skinny', got {mode!r}")
    n1, n2, n3 = a.shape
    h = half_spectrum(n3)
    fa = np.fft.fft(a, axis=2).transpose(2, 0, 1)
    ub, sb, vhb = np.linalg.svd(fa[:h], full_matrices=False)

    if mode == "skinny":
        if k is None:
            w = _mirror_weights(n3)
            profile = (w[:, None] * sb).sum(axis=0) / n3
            top = profile[0] if profile.size else 0.0
            k = int((profile > rank_tol * top).sum())
        k = min(k, min(n1, n2))
    else:
        k = min(n1, n2)
    ub, sb, vhb = ub[:, :, :k], sb[:, :k], vhb[:, :k, :]

    fu = np.empty((n3, n1, k), dtype=complex)
    fs = np.zeros((n3, k, k), dtype=complex)
    fv = np.empty((n3, n2, k), dtype=complex)
    fu[:h] = ub
    fv[:h] = vhb.conj().transpose(0, 2, 1)
    for i in range(h):
        np.fill_diagonal(fs[i], sb[i])
    for idx in range(h, n3):
        fu[idx] = np.conj(fu[n3 - idx])
        fs[idx] = fs[n3 - idx]
        fv[idx] = np.conj(fv[n3 - idx])

    if check_mirrors:
        for idx in range(h, n3):
            direct = fa[idx]
            mirrored = fu[idx] @ fs[idx] @ fv[idx].conj().T
            scale = max(np.abs(direct).max(), 1.0)
            if np.abs(mirrored - direct).max() > 1e-10 * scale:
                raise AssertionError(f"mirrored slice {idx} disagrees with recomputation")

    u = np.ascontiguousarray(np.fft.ifft(fu, axis=0).real.transpose(1, 2, 0))
    s = np.ascontiguousarray(np.fft.ifft(fs, axis=0).real.transpose(1, 2, 0))
    v = np.ascontiguousarray(np.fft.ifft(fv, axis=0).real.transpose(1, 2, 0))
    return TSvdFactors(u=u, s=s, v=v, mode=mode)


def tubal_rank(a: np.ndarray, rel_tol: float = 1e-6) -> int:
    """Number of tensor singular values above rel_tol times the largest."""
    if not 0 <= rel_tol < 1:
        raise ValueError(f"rel_tol must be in [0, 1), got {rel_tol}")
    profile = singular_values(a)
    if profile.size == 0 or profile[0] <= 0.0:
        return 0
    return int((profile > rel_tol * profile[0]).sum())


def tnn(a: np.ndarray) -> float:
    """Tensor nuclear norm: sum of tensor singular values.

    Computed as 1/n3 times the summed nuclear norms of the Fourier slices,
    with mirrored slices contributing twice.
    """
    a = _require_tensor(a)
    sv = _slice_svals(a)
    w = _mirror_weights(a.shape[2])
    return float((w[:, None] * sv).sum() / a.shape[2])


def spectral_norm(a: np.ndarray) -> float:
    """Largest spectral norm over the Fourier slices (= block-circulant 2-norm)."""
    a = _require_tensor(a)
    sv = _slice_svals(a)
    return float(sv[:, 0].max()) if sv.size else 0.0


def avg_rank(a: np.ndarray, rel_tol: float = 1e-6) -> float:
    """Average rank: 1/n3 times the matrix rank of the block-circulant expansion.

    Slice ranks are counted against rel_tol times the largest singular value
    across the whole spectrum, matching the usual matrix-rank tolerance on
    the materialized block-circulant matrix.
    """
    if not 0 <= rel_tol < 1:
        raise ValueError(f"rel_tol must be in [0, 1), got {rel_tol}")
    a = _require_tensor(a)
    sv = _slice_svals(a)
    if sv.size == 0:
        return 0.0
    top = sv.max()
    if top <= 0.0:
        return 0.0
    w = _mirror_weights(a.shape[2])
    counts = (sv > rel_tol * top).sum(axis=1)
    return float((w * counts).sum() / a.shape[2])


def _svt_freq(y: np.ndarray, tau: float):
    """Soft-threshold singular values per Fourier slice; returns (tensor, tnn)."""
    n1, n2, n3 = y.shape
    h = half_spectrum(n3)
    fy = np.fft.fft(y, axis=2).transpose(2, 0, 1)
    ub, sb, vhb = np.linalg.svd(fy[:h], full_matrices=False)
    shr = np.maximum(sb - tau, 0.0)
    fx = np.empty_like(fy)
    fx[:h] = (ub * shr[:, None, :]) @ vhb
    for idx in range(h, n3):
        fx[idx] = np.conj(fx[n3 - idx])
    x = np.ascontiguousarray(np.fft.ifft(fx, axis=0).real.transpose(1, 2, 0))
    w = _mirror_weights(n3)
    return x, float((w[:, None] * shr).sum() / n3)


def svt(y: np.ndarray, tau: float) -> np.ndarray:
    """Proximal operator of tau times the tensor nuclear norm at y.

    Minimizes tau*||x||_tnn + 0.5*||x - y||_F^2.  The 1/n3 factors in the
    norm and in Parseval's identity cancel, so each Fourier slice is
    soft-thresholded by exactly tau.
    """
    y = _require_tensor(y)
    if tau < 0:
        raise NegativeThreshold(f"threshold must be >= 0, got {tau}")
    if tau == 0.0:
        return y.copy()
    return _svt_freq(y, tau)[0]
