"""Experiment harness: generators, sample-count formulas, and recovery drivers.

The drivers reproduce the two standard experiments at configurable size:
recovery from Gaussian measurements with m chosen near the 3*dof+1 bound,
and completion from a Bernoulli(p) mask.  Every randomized object inside a
run draws from a substream keyed by the experiment coordinates, so rows and
grid cells are reproducible independently of execution order.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimMismatch, InvalidEpsilon, InvalidRank
from .rng import derive_seed, normal_fill, substream
from .sensing import apply_map, make_bernoulli_mask, make_gaussian_map, proj_omega
from .solve import AdmmConfig, SolverReport, solve_completion, solve_gaussian
from .tensor import ctranspose, tprod
from .tsvd import TSvdFactors, tubal_rank


def rand_low_tubal(n1: int, n2: int, n3: int, r: int, seed: int,
                   scale: str = "unit") -> np.ndarray:
    """Random tensor of tubal rank r as a product of two Gaussian factors.

    scale="unit" draws factor entries from N(0, 1); scale="inv_n" from
    N(0, 1/n) with n = max(n1, n2), the convention used for completion
    experiments.  The left factor is filled before the right one, each in
    index order.
    """
    if not 1 <= r <= min(n1, n2):
        raise InvalidRank(f"rank {r} outside [1, {min(n1, n2)}]")
    if scale not in ("unit", "inv_n"):
        raise ValueError(f"scale must be 'unit' or 'inv_n', got {scale!r}")
    sigma = 1.0 if scale == "unit" else 1.0 / math.sqrt(max(n1, n2))
    gen = substream(seed, "low-tubal", n1, n2, n3, r, scale)
    p = sigma * normal_fill(gen, n1 * r * n3).reshape((n1, r, n3), order="F")
    q = sigma * normal_fill(gen, r * n2 * n3).reshape((r, n2, n3), order="F")
    return tprod(p, q)


def dof(n1: int, n2: int, n3: int, r: int) -> int:
    """Degrees of freedom of a tubal-rank-r tensor: r(n1 + n2 - r)n3."""
    if not 0 <= r <= min(n1, n2):
        raise InvalidRank(f"rank {r} outside [0, {min(n1, n2)}]")
    return r * (n1 + n2 - r) * n3


def gaussian_bound(n1: int, n2: int, n3: int, r: int) -> int:
    """Measurements sufficient for exact recovery: 3r(n1 + n2 - r)n3 + 1."""
    if not 0 < r <= min(n1, n2):
        raise InvalidRank(f"rank {r} outside [1, {min(n1, n2)}]")
    return 3 * r * (n1 + n2 - r) * n3 + 1


def robust_bound(n1: int, n2: int, n3: int, r: int, epsilon: float) -> int:
    """Measurements for robust recovery: ceil((3r(n1+n2-r)n3 + 3/2) / (1-eps)^2)."""
    if not 0 < epsilon < 1:
        raise InvalidEpsilon(f"epsilon must be in (0, 1), got {epsilon}")
    if not 0 < r <= min(n1, n2):
        raise InvalidRank(f"rank {r} outside [1, {min(n1, n2)}]")
    return math.ceil((3 * r * (n1 + n2 - r) * n3 + 1.5) / (1.0 - epsilon) ** 2)


def completion_rate_bound(n1: int, n2: int, n3: int, r: int,
                          mu: float, c0: float) -> float:
    """Sampling rate bound c0 * mu * r * log^2(max(n1,n2) n3) / (min(n1,n2) n3)."""
    n_hi, n_lo = max(n1, n2), min(n1, n2)
    return c0 * mu * r * math.log(n_hi * n3) ** 2 / (n_lo * n3)


def incoherence(factors: TSvdFactors) -> float:
    """Smallest mu satisfying the standard incoherence conditions on u and v.

    mu = max over sides of (n * n3 / r) * max_i ||u^H * e_col(i)||_F^2, where
    the slice energies are read off the Fourier transform of the factor
    (each column-basis product collapses to a factor row per slice).
    """
    r = factors.k
    if r < 1:
        raise InvalidRank("incoherence needs at least one component")

    def side(u):
        n, _, n3 = u.shape
        fu = np.fft.fft(u, axis=2)
        row_energy = (np.abs(fu) ** 2).sum(axis=(1, 2)) / n3
        return (n * n3 / r) * row_energy.max()

    return float(max(side(factors.u), side(factors.v)))


def proj_t(factors: TSvdFactors, z: np.ndarray) -> np.ndarray:
    """Project onto the tangent space spanned by the factors:
    u*u^H*z + z*v*v^H - u*u^H*z*v*v^H."""
    u, v = factors.u, factors.v
    if z.shape != (u.shape[0], v.shape[0], u.shape[2]):
        raise DimMismatch(f"tensor shape {z.shape} does not match factors")
    uh_z = tprod(ctranspose(u), z)
    u_uh_z = tprod(u, uh_z)
    z_v = tprod(z, v)
    z_v_vh = tprod(z_v, ctranspose(v))
    u_uh_z_v_vh = tprod(u, tprod(tprod(uh_z, v), ctranspose(v)))
    return u_uh_z + z_v_vh - u_uh_z_v_vh


def proj_t_perp(factors: TSvdFactors, z: np.ndarray) -> np.ndarray:
    """Orthogonal complement of proj_t."""
    return z - proj_t(factors, z)


def rel_error(xhat: np.ndarray, x0: np.ndarray) -> float:
    """Relative Frobenius error ||xhat - x0||_F / ||x0||_F (inf on zero x0)."""
    num = float(np.linalg.norm(xhat - x0))
    den = float(np.linalg.norm(x0))
    if den == 0.0:
        return 0.0 if num == 0.0 else float("inf")
    return num / den


def psnr(xhat: np.ndarray, m: np.ndarray) -> float:
    """Peak signal-to-noise ratio in dB against peak value ||m||_inf."""
    peak = float(np.abs(m).max())
    mse = float(((xhat - m) ** 2).mean())
    if mse == 0.0:
        return float("inf")
    return 10.0 * math.log10(peak ** 2 / mse)


@dataclass
class RecoveryVerdict:
    rel_error: float
    recovered: bool
    rank_estimate: int
    report: SolverReport


def make_verdict(xhat: np.ndarray, x0: np.ndarray, report: SolverReport,
                 threshold: float = 1e-3, rank_tol: float = 1e-3) -> RecoveryVerdict:
    err = rel_error(xhat, x0)
    return RecoveryVerdict(
        rel_error=err,
        recovered=err <= threshold,
        rank_estimate=tubal_rank(xhat, rank_tol),
        report=report,
    )


# Post-ADMM iterates carry noise in their trailing singular values, so table
# and grid reports read ranks at a looser relative tolerance than the
# library default.
TABLE_RANK_TOL = 1e-3


def _gaussian_trial(n1, n2, n3, r, m, seed_tensor, seed_map, cfg):
    x0 = rand_low_tubal(n1, n2, n3, r, seed_tensor, scale="unit")
    gmap = make_gaussian_map(m, (n1, n2, n3), seed_map)
    y = apply_map(gmap, x0)
    xhat, report = solve_gaussian(gmap, y, cfg)
    return x0, xhat, report


def _completion_trial(n1, n2, n3, r, p, seed_tensor, seed_mask, cfg):
    m_full = rand_low_tubal(n1, n2, n3, r, seed_tensor, scale="inv_n")
    mask = make_bernoulli_mask((n1, n2, n3), p, seed_mask)
    xhat, report = solve_completion(mask, proj_omega(mask, m_full), cfg)
    return m_full, xhat, report


def run_table1(rows, base_seed: int = 0, cfg: AdmmConfig | None = None,
               rank_tol: float = TABLE_RANK_TOL) -> list:
    """Gaussian-measurement recovery table.

    rows: iterable of (n, n3, r, m).  Returns one dict per row with the
    verdict fields; a failing row records its error and the batch continues.
    """
    out = []
    for n, n3, r, m in rows:
        row = {"n": n, "n3": n3, "r": r, "m": m}
        try:
            seed_t = derive_seed(base_seed, "table1", n, n3, r, m, "tensor")
            seed_a = derive_seed(base_seed, "table1", n, n3, r, m, "map")
            x0, xhat, report = _gaussian_trial(n, n, n3, r, m, seed_t, seed_a, cfg)
            v = make_verdict(xhat, x0, report, rank_tol=rank_tol)
            row.update(rank_estimate=v.rank_estimate, rel_error=v.rel_error,
                       iterations=report.iterations, converged=report.converged)
        except Exception as exc:  # keep the batch alive
            row["error"] = f"{type(exc).__name__}: {exc}"
        out.append(row)
    return out


def run_table2(rows, base_seed: int = 0, cfg: AdmmConfig | None = None,
               rank_tol: float = TABLE_RANK_TOL) -> list:
    """Tensor completion table.

    rows: iterable of (n, n3, r, p); factors are drawn at the 1/n scale.
    """
    out = []
    for n, n3, r, p in rows:
        row = {"n": n, "n3": n3, "r": r, "p": p}
        try:
            seed_t = derive_seed(base_seed, "table2", n, n3, r, float(p), "tensor")
            seed_o = derive_seed(base_seed, "table2", n, n3, r, float(p), "mask")
            m_full, xhat, report = _completion_trial(n, n, n3, r, p, seed_t, seed_o, cfg)
            v = make_verdict(xhat, m_full, report, rank_tol=rank_tol)
            row.update(rank_estimate=v.rank_estimate, rel_error=v.rel_error,
                       iterations=report.iterations, converged=report.converged)
        except Exception as exc:
            row["error"] = f"{type(exc).__name__}: {exc}"
        out.append(row)
    return out


@dataclass
class PhaseCell:
    m_or_p: float
    r: int
    trials: int
    successes: int
    mean_rel_err: float
    mean_iters: float
    errors: list = field(default_factory=list)

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials if self.trials else 0.0


@dataclass
class PhaseGrid:
    kind: str
    dims: tuple
    values: list
    ranks: list
    trials: int
    base_seed: int
    threshold: float
    cells: list = field(default_factory=list)


def phase_grid(kind: str, dims, values, ranks, trials: int, base_seed: int = 0,
               threshold: float = 1e-3, cfg: AdmmConfig | None = None) -> PhaseGrid:
    """Empirical recovery-rate grid over (measurement count or rate) x rank.

    kind="gaussian" treats each value as a measurement count m (unit-scale
    tensors); kind="completion" treats it as a Bernoulli rate p (1/n-scale
    tensors).  A trial succeeds when the relative error is at or below the
    threshold.  Per-trial substreams depend only on (base_seed, value, r,
    trial), so any execution order reproduces the same grid.
    """
    if kind not in ("gaussian", "completion"):
        raise ValueError(f"kind must be 'gaussian' or 'completion', got {kind!r}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not values or not ranks:
        raise ValueError("axis lists must be nonempty")
    n1, n2, n3 = dims
    grid = PhaseGrid(kind=kind, dims=(n1, n2, n3), values=list(values),
                     ranks=list(ranks), trials=trials, base_seed=base_seed,
                     threshold=threshold)
    for v in values:
        for r in ranks:
            successes = 0
            errs, iters, failures = [], [], []
            for t in range(trials):
                coord = float(v) if kind == "completion" else int(v)
                seed_t = derive_seed(base_seed, kind, coord, r, t, "tensor")
                seed_s = derive_seed(base_seed, kind, coord, r, t, "sensing")
                try:
                    if kind == "gaussian":
                        x0, xhat, report = _gaussian_trial(
                            n1, n2, n3, r, int(v), seed_t, seed_s, cfg)
                    else:
                        x0, xhat, report = _completion_trial(
                            n1, n2, n3, r, float(v), seed_t, seed_s, cfg)
                except Exception as exc:
                    failures.append(f"trial {t}: {type(exc).__name__}: {exc}")
                    continue
                err = rel_error(xhat, x0)
                errs.append(err)
                iters.append(report.iterations)
                if err <= threshold:
                    successes += 1
            grid.cells.append(PhaseCell(
                m_or_p=float(v), r=int(r), trials=trials, successes=successes,
                mean_rel_err=float(np.mean(errs)) if errs else float("nan"),
                mean_iters=float(np.mean(iters)) if iters else float("nan"),
                errors=failures,
            ))
    return grid
