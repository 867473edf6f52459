"""Exact tensor completion from a Bernoulli sample of the entries."""

import time

import tubal as tb

n, n3, r, p = 50, 50, 3, 0.47
m_full = tb.rand_low_tubal(n, n, n3, r, seed=21, scale="inv_n")
mask = tb.make_bernoulli_mask((n, n, n3), p, seed=22)
print(f"dims {n}x{n}x{n3}, rank {r}: observing {mask.count} of {n * n * n3} "
      f"entries (p = {p})")
print(f"oversampling vs dof: {mask.count / tb.dof(n, n, n3, r):.2f}")

fac = tb.tsvd(m_full, mode="skinny")
mu = tb.incoherence(fac)
print(f"incoherence mu = {mu:.2f}; rate bound at c0=0.25: "
      f"{tb.completion_rate_bound(n, n, n3, r, mu, 0.25):.3f}")

t0 = time.perf_counter()
xhat, report = tb.solve_completion(mask, tb.proj_omega(mask, m_full))
print(f"solved in {report.iterations} iterations "
      f"({time.perf_counter() - t0:.1f}s), converged={report.converged}")
print(f"relative error: {tb.rel_error(xhat, m_full):.2e}")
print(f"recovered tubal rank: {tb.tubal_rank(xhat, 1e-3)}")
