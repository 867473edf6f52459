"""Tensor algebra basics: the t-product, its oracle, transforms and norms."""

import numpy as np

import tubal as tb

rng = np.random.default_rng(0)
a = rng.standard_normal((3, 4, 5))
b = rng.standard_normal((4, 2, 5))

# The product is computed per Fourier slice; the block-circulant path is the
# literal definition and doubles as a correctness oracle.
c_fast = tb.tprod(a, b)
c_oracle = tb.tprod_oracle(a, b)
print("tprod vs block-circulant oracle:", np.abs(c_fast - c_oracle).max())

# Tubes multiply by circular convolution: (1,2) * (3,4) = (11,10)
tube = tb.tprod(np.array([[[1.0, 2.0]]]), np.array([[[3.0, 4.0]]]))
print("tube convolution:", tube.ravel())

# Identity element and conjugate transpose behave like their matrix versions
print("identity law:", np.abs(tb.tprod(a, tb.identity(4, 5)) - a).max())
lhs = tb.ctranspose(tb.tprod(a, b))
rhs = tb.tprod(tb.ctranspose(b), tb.ctranspose(a))
print("(a*b)^H = b^H * a^H:", np.abs(lhs - rhs).max())

# Transform round trip and Parseval link to the block-diagonal matrix
back = tb.ifft_dim3(tb.fft_dim3(a))
print("transform round trip:", np.abs(back - a).max())
bd = tb.bdiag(tb.fft_dim3(a))
print("||a||_F vs (1/sqrt(n3))||bdiag||_F:",
      tb.norms(a).fro - np.linalg.norm(bd) / np.sqrt(5))
