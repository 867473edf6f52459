"""t-SVD, tubal rank, tensor nuclear norm, and singular value thresholding."""

import numpy as np

import tubal as tb

a = tb.rand_low_tubal(8, 8, 5, r=3, seed=1)

f = tb.tsvd(a)
print("singular values:", np.round(f.spectrum, 4))
print("reconstruction error:",
      np.linalg.norm(f.compose() - a) / np.linalg.norm(a))

skinny = tb.tsvd(a, mode="skinny")
print("skinny width k =", skinny.k, " tubal rank =", tb.tubal_rank(a))

print("tnn:", tb.tnn(a))
print("spectral norm:", tb.spectral_norm(a))
print("average rank:", tb.avg_rank(a))

# svt solves argmin tau*||x||_tnn + 0.5*||x - y||_F^2: singular values are
# soft-thresholded slice by slice in the frequency domain
y = a + 0.1 * np.random.default_rng(2).standard_normal(a.shape)
den = tb.svt(y, 0.3)
print("svt input rank:", tb.tubal_rank(y, 1e-3),
      "-> output rank:", tb.tubal_rank(den, 1e-3))
print("objective drop:",
      0.3 * tb.tnn(y) - (0.3 * tb.tnn(den) + 0.5 * np.linalg.norm(den - y) ** 2))
