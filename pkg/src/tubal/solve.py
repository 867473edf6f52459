"""ADMM solvers for tensor nuclear norm minimization.

`solve_gaussian` recovers a tensor from dense Gaussian measurements
y = A vec(x) by splitting the variable (x = z) and alternating a
singular-value-thresholding step with a linear solve against (A^T A + I).
`solve_completion` recovers a tensor from observed entries by carrying the
unobserved part in an explicit slack tensor.

Both use the same schedule: penalty mu_k = min(mu0 * rho^k, mu_max) and
infinity-norm stopping criteria checked each iteration.  Hitting the
iteration cap is not an exception; the report comes back with
converged=False and the final iterate is returned as-is.
"""

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import DimMismatch
from .sensing import GaussianMap, SampleMask, proj_omega, proj_omega_c
from .tensor import unvec, vec
from .tsvd import _svt_freq


@dataclass
class AdmmConfig:
    rho: float = 1.1
    mu0: float = 1e-4
    mu_max: float = 1e10
    eps: float = 1e-8
    max_iter: int = 500
    record_history: bool = False

    def __post_init__(self):
        if not self.rho > 1:
            raise ValueError(f"rho must exceed 1, got {self.rho}")
        if not 0 < self.mu0 <= self.mu_max:
            raise ValueError(f"need 0 < mu0 <= mu_max, got {self.mu0}, {self.mu_max}")
        if not self.eps > 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")


@dataclass
class SolverReport:
    iterations: int
    converged: bool
    residuals: dict
    mu_final: float
    objective: float
    wall_time: float
    history: list | None = field(default=None, repr=False)


def _penalty(cfg: AdmmConfig, k: int) -> float:
    return min(cfg.mu0 * cfg.rho ** k, cfg.mu_max)


def solve_gaussian(gmap: GaussianMap, y: np.ndarray, cfg: AdmmConfig | None = None):
    """Minimize the tensor nuclear norm subject to A vec(x) = y.

    Returns (x_hat, report).  The linear system (A^T A + I) z = w is
    factored once; when m < d the Woodbury identity reduces it to an
    m x m Cholesky solve.
    """
    cfg = cfg or AdmmConfig()
    y = np.asarray(y, dtype=float).reshape(-1)
    if y.size != gmap.m:
        raise DimMismatch(f"expected {gmap.m} measurements, got {y.size}")
    t0 = time.perf_counter()
    a = gmap.a
    m, d = a.shape
    dims = gmap.dims

    if m < d:
        # (A^T A + I)^-1 = I - A^T (I_m + A A^T)^-1 A
        gram = a @ a.T
        gram[np.diag_indices_from(gram)] += 1.0
        factor = scipy.linalg.cho_factor(gram, check_finite=False)

        def solve_system(w):
            return w - a.T @ scipy.linalg.cho_solve(factor, a @ w, check_finite=False)
    else:
        gram = a.T @ a
        gram[np.diag_indices_from(gram)] += 1.0
        factor = scipy.linalg.cho_factor(gram, check_finite=False)

        def solve_system(w):
            return scipy.linalg.cho_solve(factor, w, check_finite=False)

    aty = a.T @ y
    x = np.zeros(dims)
    z = np.zeros(dims)
    lam1 = np.zeros(m)
    lam2 = np.zeros(dims)

    history = [] if cfg.record_history else None
    residuals = {"res_x": np.inf, "res_z": np.inf, "res_feas": np.inf, "res_gap": np.inf}
    objective = 0.0
    converged = False
    mu = cfg.mu0
    iterations = 0

    for k in range(cfg.max_iter):
        mu = _penalty(cfg, k)
        x_new, objective = _svt_freq(z - lam2 / mu, 1.0 / mu)
        rhs = -a.T @ (lam1 / mu) + vec(lam2) / mu + aty + vec(x_new)
        z_vec = solve_system(rhs)
        z_new = unvec(z_vec, dims)
        feas = a @ z_vec - y
        lam1 = lam1 + mu * feas
        lam2 = lam2 + mu * (x_new - z_new)

        residuals = {
            "res_x": float(np.abs(x_new - x).max()),
            "res_z": float(np.abs(z_new - z).max()),
            "res_feas": float(np.abs(feas).max()),
            "res_gap": float(np.abs(x_new - z_new).max()),
        }
        x, z = x_new, z_new
        iterations = k + 1
        if history is not None:
            history.append({"iter": iterations, "objective": objective, **residuals, "mu": mu})
        if all(v <= cfg.eps for v in residuals.values()):
            converged = True
            break

    report = SolverReport(
        iterations=iterations,
        converged=converged,
        residuals=residuals,
        mu_final=mu,
        objective=objective,
        wall_time=time.perf_counter() - t0,
        history=history,
    )
    return x, report


def solve_completion(mask: SampleMask, m_obs: np.ndarray, cfg: AdmmConfig | None = None):
    """Minimize the tensor nuclear norm subject to agreeing with m_obs on the mask.

    m_obs must carry zeros at unobserved entries (they are re-zeroed
    defensively).  Returns (x_hat, report).
    """
    cfg = cfg or AdmmConfig()
    if tuple(m_obs.shape) != tuple(mask.dims):
        raise DimMismatch(f"tensor shape {m_obs.shape} does not match mask dims {mask.dims}")
    t0 = time.perf_counter()
    m_obs = proj_omega(mask, np.asarray(m_obs, dtype=float))

    x = np.zeros(mask.dims)
    e = np.zeros(mask.dims)
    dual = np.zeros(mask.dims)

    history = [] if cfg.record_history else None
    residuals = {"res_x": np.inf, "res_e": np.inf, "res_feas": np.inf}
    objective = 0.0
    converged = False
    mu = cfg.mu0
    iterations = 0

    for k in range(cfg.max_iter):
        mu = _penalty(cfg, k)
        x_new, objective = _svt_freq(m_obs - e + dual / mu, 1.0 / mu)
        e_new = proj_omega_c(mask, m_obs - x_new + dual / mu)
        gap = m_obs - x_new - e_new
        dual = dual + mu * gap

        residuals = {
            "res_x": float(np.abs(x_new - x).max()),
            "res_e": float(np.abs(e_new - e).max()),
            "res_feas": float(np.abs(gap).max()),
        }
        x, e = x_new, e_new
        iterations = k + 1
        if history is not None:
            history.append({"iter": iterations, "objective": objective, **residuals, "mu": mu})
        if all(v <= cfg.eps for v in residuals.values()):
            converged = True
            break

    report = SolverReport(
        iterations=iterations,
        converged=converged,
        residuals=residuals,
        mu_final=mu,
        objective=objective,
        wall_time=time.perf_counter() - t0,
        history=history,
    )
    return x, report
