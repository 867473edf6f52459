"""Third-order tensor algebra built on the circular convolution product.

A tensor is a plain ``numpy.ndarray`` of shape ``(n1, n2, n3)`` and dtype
float64.  Frontal slices are ``a[:, :, k]``, horizontal slices ``a[i, :, :]``,
lateral slices ``a[:, j, :]``, tubes ``a[i, j, :]``.  Wherever a flat layout
is needed (vectorization, file formats) the declared index order is
column-major: index i varies fastest, then j, then k, i.e. numpy's
``order="F"`` for this shape.

The product of two tensors multiplies their block-circulant expansions; it
is computed in the frequency domain as independent matrix products per
Fourier slice.  Because the inputs are real, the transformed slices come in
conjugate pairs, so only the first ``n3 // 2 + 1`` products are formed and
the rest are mirrored.
"""

from typing import NamedTuple

import numpy as np

from .errors import DimMismatch, IndexOutOfRange, LengthMismatch, SymmetryViolation

# Relative tolerances for the conjugate-symmetry invariant of transformed
# tensors and for the imaginary residue discarded by the inverse transform.
SYM_TOL = 1e-8
IMAG_TOL = 1e-8

# bcirc/tprod_oracle materialize (n1*n3) x (n2*n3) matrices; they anchor
# correctness tests and are not meant for production sizes.
_ORACLE_SIDE_LIMIT = 512


def _require_tensor(a, name="tensor"):
    a = np.asarray(a, dtype=float)
    if a.ndim != 3:
        raise DimMismatch(f"{name} must be 3-way, got shape {a.shape}")
    return a


def validate_tensor(a) -> np.ndarray:
    """Check the tensor contract: 3-way, float, every entry finite."""
    a = _require_tensor(a)
    if not np.all(np.isfinite(a)):
        raise ValueError("tensor contains NaN or Inf entries")
    return a


def half_spectrum(n3: int) -> int:
    """Number of independent Fourier slices of a real tensor: ceil((n3+1)/2)."""
    return n3 // 2 + 1


def fft_dim3(a: np.ndarray) -> np.ndarray:
    """Unnormalized DFT of every tube, returning the complex frequency tensor.

    Slice 0 of the result is real and slices i and n3-i are conjugates of
    each other (i = 1..n3-1).
    """
    a = _require_tensor(a)
    return np.fft.fft(a, axis=2)


def ifft_dim3(f: np.ndarray) -> np.ndarray:
    """Inverse DFT (with 1/n3 normalization) of every tube, as a real tensor.

    Raises SymmetryViolation if the imaginary residue left after the inverse
    transform exceeds IMAG_TOL relative to the largest magnitude, which
    signals a corrupted frequency-domain value rather than round-off.
    """
    f = np.asarray(f)
    if f.ndim != 3:
        raise DimMismatch(f"frequency tensor must be 3-way, got shape {f.shape}")
    t = np.fft.ifft(f, axis=2)
    max_abs = np.abs(t).max() if t.size else 0.0
    residue = np.abs(t.imag).max() if t.size else 0.0
    if residue > IMAG_TOL * max_abs:
        raise SymmetryViolation(
            f"imaginary residue {residue:.3e} exceeds {IMAG_TOL:.1e} * {max_abs:.3e}"
        )
    return np.ascontiguousarray(t.real)


def tprod(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor-tensor product of (n1, n2, n3) with (n2, l, n3) -> (n1, l, n3).

    Equal to folding ``bcirc(a) @ unfold(b)``; computed as per-slice complex
    matrix products on the first n3//2+1 Fourier slices, with the remaining
    slices filled by conjugate symmetry.
    """
    a = _require_tensor(a, "a")
    b = _require_tensor(b, "b")
    n1, n2, n3 = a.shape
    if b.shape[0] != n2 or b.shape[2] != n3:
        raise DimMismatch(f"cannot multiply {a.shape} by {b.shape}")
    ell = b.shape[1]
    h = half_spectrum(n3)
    fa = np.fft.fft(a, axis=2).transpose(2, 0, 1)
    fb = np.fft.fft(b, axis=2).transpose(2, 0, 1)
    fc = np.empty((n3, n1, ell), dtype=complex)
    fc[:h] = fa[:h] @ fb[:h]
    for idx in range(h, n3):
        fc[idx] = np.conj(fc[n3 - idx])
    return np.ascontiguousarray(np.fft.ifft(fc, axis=0).real.transpose(1, 2, 0))


def _unfold(a: np.ndarray) -> np.ndarray:
    """Stack frontal slices vertically: (n1*n3, n2)."""
    return a.transpose(2, 0, 1).reshape(a.shape[0] * a.shape[2], a.shape[1])


def _fold(m: np.ndarray, n1: int, n3: int) -> np.ndarray:
    return np.ascontiguousarray(m.reshape(n3, n1, m.shape[1]).transpose(1, 2, 0))


def _guard_oracle(a, b=None):
    shapes = [a.shape] if b is None else [a.shape, b.shape]
    for n1, n2, n3 in shapes:
        if n1 * n3 > _ORACLE_SIDE_LIMIT or n2 * n3 > _ORACLE_SIDE_LIMIT:
            raise DimMismatch(
                f"oracle path materializes {n1 * n3} x {n2 * n3} blocks; "
                f"limit is {_ORACLE_SIDE_LIMIT} per side"
            )


def bcirc(a: np.ndarray) -> np.ndarray:
    """Block-circulant matrix of the tensor: block (r, c) is frontal slice (r - c) mod n3."""
    a = _require_tensor(a)
    _guard_oracle(a)
    n1, n2, n3 = a.shape
    out = np.empty((n1 * n3, n2 * n3))
    for r in range(n3):
        for c in range(n3):
            out[r * n1:(r + 1) * n1, c * n2:(c + 1) * n2] = a[:, :, (r - c) % n3]
    return out


def bdiag(f: np.ndarray) -> np.ndarray:
    """Block-diagonal matrix with the frontal slices of a frequency tensor."""
    f = np.asarray(f)
    if f.ndim != 3:
        raise DimMismatch(f"expected 3-way tensor, got shape {f.shape}")
    n1, n2, n3 = f.shape
    if n1 * n3 > _ORACLE_SIDE_LIMIT or n2 * n3 > _ORACLE_SIDE_LIMIT:
        raise DimMismatch(f"bdiag limited to {_ORACLE_SIDE_LIMIT} rows/cols per side")
    out = np.zeros((n1 * n3, n2 * n3), dtype=f.dtype)
    for k in range(n3):
        out[k * n1:(k + 1) * n1, k * n2:(k + 1) * n2] = f[:, :, k]
    return out


def tprod_oracle(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Reference product via the literal block-circulant path (test sizes only)."""
    a = _require_tensor(a, "a")
    b = _require_tensor(b, "b")
    if b.shape[0] != a.shape[1] or b.shape[2] != a.shape[2]:
        raise DimMismatch(f"cannot multiply {a.shape} by {b.shape}")
    _guard_oracle(a, b)
    return _fold(bcirc(a) @ _unfold(b), a.shape[0], a.shape[2])


def ctranspose(a: np.ndarray) -> np.ndarray:
    """Transpose every frontal slice and reverse the order of slices 2..n3."""
    a = _require_tensor(a)
    n1, n2, n3 = a.shape
    out = np.empty((n2, n1, n3))
    out[:, :, 0] = a[:, :, 0].T
    if n3 > 1:
        out[:, :, 1:] = a[:, :, :0:-1].transpose(1, 0, 2)
    return out


def identity(n: int, n3: int) -> np.ndarray:
    """Identity tensor: first frontal slice is eye(n), all other slices zero."""
    if n < 1 or n3 < 1:
        raise DimMismatch("identity needs n >= 1 and n3 >= 1")
    out = np.zeros((n, n, n3))
    out[:, :, 0] = np.eye(n)
    return out


class TensorNorms(NamedTuple):
    fro: float
    l1: float
    linf: float
    linf2: float


def norms(a: np.ndarray) -> TensorNorms:
    """Frobenius, entrywise l1, entrywise max, and the max slice-Frobenius norm.

    linf2 is the largest Frobenius norm over all horizontal slices a[i, :, :]
    and all lateral slices a[:, j, :].
    """
    a = _require_tensor(a)
    fro = float(np.sqrt((a * a).sum()))
    l1 = float(np.abs(a).sum())
    linf = float(np.abs(a).max()) if a.size else 0.0
    row_sq = (a * a).sum(axis=(1, 2))
    col_sq = (a * a).sum(axis=(0, 2))
    linf2 = float(np.sqrt(max(row_sq.max(), col_sq.max()))) if a.size else 0.0
    return TensorNorms(fro, l1, linf, linf2)


def inner(a: np.ndarray, b: np.ndarray) -> float:
    """Sum of entrywise products."""
    a = _require_tensor(a, "a")
    b = _require_tensor(b, "b")
    if a.shape != b.shape:
        raise DimMismatch(f"inner product needs equal shapes, got {a.shape} and {b.shape}")
    return float((a * b).sum())


def vec(x: np.ndarray) -> np.ndarray:
    """Flatten in the declared index order (i fastest, then j, then k)."""
    x = _require_tensor(x)
    return x.reshape(-1, order="F")


def unvec(arr: np.ndarray, dims) -> np.ndarray:
    """Inverse of vec for the given (n1, n2, n3)."""
    arr = np.asarray(arr, dtype=float).reshape(-1)
    n1, n2, n3 = dims
    if arr.size != n1 * n2 * n3:
        raise LengthMismatch(f"expected {n1 * n2 * n3} values, got {arr.size}")
    return np.ascontiguousarray(arr.reshape((n1, n2, n3), order="F"))


def column_basis(i: int, n: int, n3: int) -> np.ndarray:
    """Column basis tensor of size (n, 1, n3) with entry (i, 0, 0) = 1 (0-based i)."""
    if not 0 <= i < n:
        raise IndexOutOfRange(f"column index {i} outside [0, {n})")
    out = np.zeros((n, 1, n3))
    out[i, 0, 0] = 1.0
    return out


def tube_basis(k: int, n3: int) -> np.ndarray:
    """Tube basis tensor of size (1, 1, n3) with entry (0, 0, k) = 1 (0-based k)."""
    if not 0 <= k < n3:
        raise IndexOutOfRange(f"tube index {k} outside [0, {n3})")
    out = np.zeros((1, 1, n3))
    out[0, 0, k] = 1.0
    return out


def unit_basis(i: int, j: int, k: int, dims) -> np.ndarray:
    """Unit tensor with a single 1 at (i, j, k); equals column(i) * tube(k) * column(j)^H."""
    n1, n2, n3 = dims
    if not (0 <= i < n1 and 0 <= j < n2 and 0 <= k < n3):
        raise IndexOutOfRange(f"index ({i}, {j}, {k}) outside {tuple(dims)}")
    out = np.zeros((n1, n2, n3))
    out[i, j, k] = 1.0
    return out
