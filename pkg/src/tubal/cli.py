"""Command-line surface.

Subcommands: gen, recover, complete, phase, inpaint, frames, info, replay.
Every file-producing command writes a manifest.json next to its outputs;
`replay` re-executes a manifest into a fresh directory and, because every
randomized object is a pure function of its seed, reproduces the outputs
byte for byte.

Exit codes: 0 success, 2 validation error, 3 solver hit the iteration cap,
4 I/O failure.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from . import io
from .errors import FrameSizeMismatch, TubalError
from .lab import (
    incoherence,
    phase_grid,
    psnr,
    rand_low_tubal,
    rel_error,
)
from .sensing import apply_map, make_bernoulli_mask, make_gaussian_map, proj_omega
from .solve import AdmmConfig, solve_completion, solve_gaussian
from .tensor import norms
from .tsvd import spectral_norm, tnn, tsvd, tubal_rank

_EXIT_OK = 0
_EXIT_USAGE = 2
_EXIT_NOT_CONVERGED = 3
_EXIT_IO = 4

_CFG_KEYS = ("eps", "max_iter", "rho", "mu0", "mu_max")


def _cfg_from(params, record_history=False) -> AdmmConfig:
    defaults = AdmmConfig()
    kwargs = {k: params.get(k, getattr(defaults, k)) for k in _CFG_KEYS}
    return AdmmConfig(record_history=record_history, **kwargs)


def _outdir(path) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _finish(outdir: Path, subcommand: str, params: dict, outputs: list):
    io.write_manifest(outdir / "manifest.json", {
        "format": 1,
        "subcommand": subcommand,
        "params": params,
        "outputs": sorted(outputs),
    })


def run_gen(params, outdir: Path) -> int:
    x0 = rand_low_tubal(params["n1"], params["n2"], params["n3"], params["r"],
                        params["seed"], params["scale"])
    io.write_tensor(outdir / "x0.t3", x0)
    _finish(outdir, "gen", params, ["x0.t3"])
    print(f"wrote {outdir / 'x0.t3'} shape {x0.shape} rank {params['r']}")
    return _EXIT_OK


def run_recover(params, outdir: Path) -> int:
    x0 = io.read_tensor(params["tensor"])
    gmap = make_gaussian_map(params["m"], x0.shape, params["seed"])
    y = apply_map(gmap, x0)
    cfg = _cfg_from(params, record_history=params.get("history", False))
    xhat, report = solve_gaussian(gmap, y, cfg)

    outputs = ["xhat.t3", "report.csv"]
    io.write_tensor(outdir / "xhat.t3", xhat)
    err = rel_error(xhat, x0)
    rank = tubal_rank(xhat, params["rank_tol"])
    io.write_report_csv(outdir / "report.csv", report,
                        extra={"rel_error": err, "rank_estimate": rank})
    if report.history is not None:
        io.write_history_csv(outdir / "history.csv", report.history)
        outputs.append("history.csv")
    _finish(outdir, "recover", params, outputs)
    print(f"m={params['m']} iterations={report.iterations} "
          f"converged={report.converged} rel_error={err:.3e} rank={rank}")
    return _EXIT_OK if report.converged else _EXIT_NOT_CONVERGED


def run_complete(params, outdir: Path) -> int:
    m_full = io.read_tensor(params["tensor"])
    if params.get("mask"):
        mask = io.read_mask(params["mask"])
    else:
        mask = make_bernoulli_mask(m_full.shape, params["p"], params["seed"])
    cfg = _cfg_from(params, record_history=params.get("history", False))
    xhat, report = solve_completion(mask, proj_omega(mask, m_full), cfg)

    outputs = ["xhat.t3", "mask.om", "report.csv"]
    io.write_tensor(outdir / "xhat.t3", xhat)
    io.write_mask(outdir / "mask.om", mask)
    err = rel_error(xhat, m_full)
    rank = tubal_rank(xhat, params["rank_tol"])
    io.write_report_csv(outdir / "report.csv", report,
                        extra={"rel_error": err, "rank_estimate": rank})
    if report.history is not None:
        io.write_history_csv(outdir / "history.csv", report.history)
        outputs.append("history.csv")
    _finish(outdir, "complete", params, outputs)
    print(f"p={mask.p} observed={mask.count} iterations={report.iterations} "
          f"converged={report.converged} rel_error={err:.3e} rank={rank}")
    return _EXIT_OK if report.converged else _EXIT_NOT_CONVERGED


def run_phase(params, outdir: Path) -> int:
    cfg = _cfg_from(params)
    grid = phase_grid(params["kind"], (params["n1"], params["n2"], params["n3"]),
                      params["values"], params["ranks"], params["trials"],
                      base_seed=params["seed"], threshold=params["threshold"],
                      cfg=cfg)
    outputs = ["grid.csv"]
    io.write_grid_csv(outdir / "grid.csv", grid)
    if params.get("matrix", False):
        lines = []
        for r in grid.ranks:
            rates = [c.success_rate for c in grid.cells if c.r == r]
            lines.append(" ".join(io.fmt(v) for v in rates))
        (outdir / "grid_matrix.txt").write_text("\n".join(lines) + "\n")
        outputs.append("grid_matrix.txt")
    _finish(outdir, "phase", params, outputs)
    for cell in grid.cells:
        print(f"r={cell.r} value={cell.m_or_p:g} "
              f"success={cell.successes}/{cell.trials} "
              f"mean_rel_err={cell.mean_rel_err:.3e}")
    return _EXIT_OK


def _complete_pixels(tensor, params):
    if params.get("mask"):
        mask = io.read_mask(params["mask"])
    else:
        mask = make_bernoulli_mask(tensor.shape, params["p"], params["seed"])
    cfg = _cfg_from(params)
    xhat, report = solve_completion(mask, proj_omega(mask, tensor), cfg)
    return np.clip(xhat, 0.0, 1.0), mask, report


def run_inpaint(params, outdir: Path) -> int:
    pixels, color = io.read_image(params["image"])
    tensor = io.image_to_tensor(pixels, color)
    xhat, mask, report = _complete_pixels(tensor, params)
    quality = psnr(xhat, tensor)

    out_name = "inpainted.ppm" if color else "inpainted.pgm"
    io.write_image(outdir / out_name, io.tensor_to_image(xhat, color))
    io.write_mask(outdir / "mask.om", mask)
    io.write_report_csv(outdir / "report.csv", report, extra={"psnr_db": quality})
    _finish(outdir, "inpaint", params, [out_name, "mask.om", "report.csv"])
    print(f"psnr_db={quality:.2f} iterations={report.iterations} "
          f"converged={report.converged}")
    return _EXIT_OK if report.converged else _EXIT_NOT_CONVERGED


def run_frames(params, outdir: Path) -> int:
    frame_dir = Path(params["frames"])
    paths = sorted(frame_dir.glob("*.pgm"))
    if not paths:
        raise TubalError(f"no .pgm frames found in {frame_dir}")
    frames = []
    for p in paths:
        pixels, color = io.read_image(p)
        if color:
            raise TubalError(f"{p}: frames must be grayscale P5")
        frames.append(pixels)
    h, w = frames[0].shape
    for p, f in zip(paths, frames):
        if f.shape != (h, w):
            raise FrameSizeMismatch(f"{p}: frame is {f.shape}, expected {(h, w)}")

    tensor = np.empty((h, len(frames), w))
    for j, f in enumerate(frames):
        tensor[:, j, :] = f.astype(float) / 255.0
    xhat, mask, report = _complete_pixels(tensor, params)
    quality = psnr(xhat, tensor)

    outputs = ["mask.om", "report.csv"]
    for j, p in enumerate(paths):
        pixels = np.rint(np.clip(xhat[:, j, :], 0.0, 1.0) * 255.0).astype(np.uint8)
        io.write_image(outdir / p.name, pixels)
        outputs.append(p.name)
    io.write_mask(outdir / "mask.om", mask)
    io.write_report_csv(outdir / "report.csv", report, extra={"psnr_db": quality})
    _finish(outdir, "frames", params, outputs)
    print(f"frames={len(frames)} psnr_db={quality:.2f} "
          f"converged={report.converged}")
    return _EXIT_OK if report.converged else _EXIT_NOT_CONVERGED


def run_info(params, outdir=None) -> int:
    a = io.read_tensor(params["tensor"])
    rank = tubal_rank(a, params["rank_tol"])
    print(f"dims: {a.shape[0]} x {a.shape[1]} x {a.shape[2]}")
    print(f"tubal_rank: {rank}")
    print(f"tnn: {io.fmt(tnn(a))}")
    print(f"spectral_norm: {io.fmt(spectral_norm(a))}")
    print(f"fro_norm: {io.fmt(norms(a).fro)}")
    if rank >= 1:
        mu = incoherence(tsvd(a, mode="skinny", k=rank))
        print(f"incoherence_mu: {io.fmt(mu)}")
    return _EXIT_OK


_RUNNERS = {
    "gen": run_gen,
    "recover": run_recover,
    "complete": run_complete,
    "phase": run_phase,
    "inpaint": run_inpaint,
    "frames": run_frames,
}


def run_replay(params, outdir: Path) -> int:
    manifest = io.read_manifest(params["manifest"])
    sub = manifest.get("subcommand")
    if sub not in _RUNNERS:
        raise TubalError(f"manifest names unknown subcommand {sub!r}")
    return _RUNNERS[sub](manifest["params"], outdir)


def _add_cfg_flags(p):
    p.add_argument("--eps", type=float, default=AdmmConfig.eps)
    p.add_argument("--max-iter", dest="max_iter", type=int, default=AdmmConfig.max_iter)
    p.add_argument("--rho", type=float, default=AdmmConfig.rho)
    p.add_argument("--mu0", type=float, default=AdmmConfig.mu0)
    p.add_argument("--mu-max", dest="mu_max", type=float, default=AdmmConfig.mu_max)
    p.add_argument("--rank-tol", dest="rank_tol", type=float, default=1e-3)


def _int_list(text):
    return [int(v) for v in text.split(",") if v]


def _float_list(text):
    return [float(v) for v in text.split(",") if v]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tubal",
        description="Low tubal rank tensor recovery: generation, sensing, "
                    "completion, and phase-transition experiments.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("gen", help="generate a random low-tubal-rank tensor")
    p.add_argument("n1", type=int)
    p.add_argument("n2", type=int)
    p.add_argument("n3", type=int)
    p.add_argument("r", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scale", choices=("unit", "inv_n"), default="unit")
    p.add_argument("--out", required=True)

    p = sub.add_parser("recover", help="recover a tensor from Gaussian measurements")
    p.add_argument("tensor")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--history", action="store_true")
    p.add_argument("--out", required=True)
    _add_cfg_flags(p)

    p = sub.add_parser("complete", help="complete a tensor from sampled entries")
    p.add_argument("tensor")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--p", type=float)
    group.add_argument("--mask")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--history", action="store_true")
    p.add_argument("--out", required=True)
    _add_cfg_flags(p)

    p = sub.add_parser("phase", help="empirical phase-transition grid")
    p.add_argument("kind", choices=("gaussian", "completion"))
    p.add_argument("--n1", type=int, required=True)
    p.add_argument("--n2", type=int, required=True)
    p.add_argument("--n3", type=int, required=True)
    p.add_argument("--values", required=True,
                   help="comma-separated m counts (gaussian) or p rates (completion)")
    p.add_argument("--ranks", required=True, help="comma-separated tubal ranks")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--threshold", type=float, default=1e-3)
    p.add_argument("--matrix", action="store_true",
                   help="also write a plain success-rate matrix")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    _add_cfg_flags(p)

    p = sub.add_parser("inpaint", help="complete the missing pixels of an image")
    p.add_argument("image")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--p", type=float)
    group.add_argument("--mask")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    _add_cfg_flags(p)

    p = sub.add_parser("frames", help="complete a directory of grayscale frames")
    p.add_argument("frames")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    _add_cfg_flags(p)

    p = sub.add_parser("info", help="print spectral summary of a tensor file")
    p.add_argument("tensor")
    p.add_argument("--rank-tol", dest="rank_tol", type=float, default=1e-6)

    p = sub.add_parser("replay", help="re-run a recorded manifest")
    p.add_argument("manifest")
    p.add_argument("--out", required=True)

    return parser


def _params_from_args(args) -> dict:
    skip = {"subcommand", "out"}
    params = {k: v for k, v in vars(args).items() if k not in skip}
    if "kind" in params:
        values = _float_list(params["values"]) if params["kind"] == "completion" \
            else _int_list(params["values"])
        params["values"] = values
        params["ranks"] = _int_list(params["ranks"])
    return params


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    params = _params_from_args(args)
    try:
        if args.subcommand == "info":
            return run_info(params)
        outdir = _outdir(args.out)
        if args.subcommand == "replay":
            return run_replay(params, outdir)
        return _RUNNERS[args.subcommand](params, outdir)
    except TubalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_USAGE
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return _EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
