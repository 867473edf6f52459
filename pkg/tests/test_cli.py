"""Command-line surface: subcommand flows, exit codes, manifest replay."""

import numpy as np
import pytest

import tubal as tb
from tubal import io as tio
from tubal.cli import main

RNG = np.random.default_rng(64)


def _dir_bytes(path):
    return {p.name: p.read_bytes() for p in sorted(path.iterdir()) if p.is_file()}


def test_gen_round_trip_and_determinism(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    args = ["gen", "10", "10", "5", "2", "--seed", "7"]
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert _dir_bytes(out1) == _dir_bytes(out2)
    x = tio.read_tensor(out1 / "x0.t3")
    assert x.shape == (10, 10, 5)
    assert x.size == 500
    assert tb.tubal_rank(x, 1e-6) == 2
    assert (out1 / "manifest.json").exists()


def test_gen_rejects_zero_rank(tmp_path):
    assert main(["gen", "4", "4", "2", "0", "--out", str(tmp_path / "z")]) == 2


def test_recover_flow(tmp_path):
    gen_out = tmp_path / "gen"
    assert main(["gen", "4", "4", "2", "1", "--seed", "3", "--out", str(gen_out)]) == 0
    rec_out = tmp_path / "rec"
    code = main(["recover", str(gen_out / "x0.t3"), "--m", "43", "--seed", "5",
                 "--history", "--out", str(rec_out)])
    assert code == 0
    x0 = tio.read_tensor(gen_out / "x0.t3")
    xhat = tio.read_tensor(rec_out / "xhat.t3")
    assert tb.rel_error(xhat, x0) <= 1e-5
    report = (rec_out / "report.csv").read_text().splitlines()
    assert "rel_error" in report[0]
    history = (rec_out / "history.csv").read_text().splitlines()
    assert history[0] == "iter,objective,res_x,res_z,res_feas,res_gap,mu"
    assert len(history) >= 3


def test_recover_m_zero_rejected(tmp_path):
    gen_out = tmp_path / "gen"
    main(["gen", "3", "3", "2", "1", "--out", str(gen_out)])
    assert main(["recover", str(gen_out / "x0.t3"), "--m", "0",
                 "--out", str(tmp_path / "r")]) == 2


def test_recover_not_converged_exit_code(tmp_path):
    gen_out = tmp_path / "gen"
    main(["gen", "4", "4", "2", "1", "--seed", "3", "--out", str(gen_out)])
    rec_out = tmp_path / "rec"
    code = main(["recover", str(gen_out / "x0.t3"), "--m", "43", "--seed", "5",
                 "--max-iter", "2", "--out", str(rec_out)])
    assert code == 3
    assert (rec_out / "report.csv").exists()


def test_complete_fully_observed(tmp_path):
    gen_out = tmp_path / "gen"
    main(["gen", "8", "8", "4", "2", "--seed", "9", "--scale", "inv_n",
          "--out", str(gen_out)])
    comp_out = tmp_path / "comp"
    code = main(["complete", str(gen_out / "x0.t3"), "--p", "1.0",
                 "--out", str(comp_out)])
    assert code == 0
    x0 = tio.read_tensor(gen_out / "x0.t3")
    xhat = tio.read_tensor(comp_out / "xhat.t3")
    assert tb.rel_error(xhat, x0) <= 1e-6


def test_complete_with_mask_file(tmp_path):
    gen_out = tmp_path / "gen"
    main(["gen", "10", "10", "4", "1", "--seed", "11", "--scale", "inv_n",
          "--out", str(gen_out)])
    mask = tb.make_bernoulli_mask((10, 10, 4), 0.8, seed=12)
    tio.write_mask(tmp_path / "m.om", mask)
    comp_out = tmp_path / "comp"
    code = main(["complete", str(gen_out / "x0.t3"), "--mask",
                 str(tmp_path / "m.om"), "--out", str(comp_out)])
    assert code == 0
    back = tio.read_mask(comp_out / "mask.om")
    assert np.array_equal(back.observed, mask.observed)


def test_complete_rejects_both_p_and_mask(tmp_path):
    gen_out = tmp_path / "gen"
    main(["gen", "4", "4", "2", "1", "--out", str(gen_out)])
    with pytest.raises(SystemExit) as err:
        main(["complete", str(gen_out / "x0.t3"), "--p", "0.5", "--mask", "x.om",
              "--out", str(tmp_path / "c")])
    assert err.value.code == 2


def test_missing_input_file_is_io_error(tmp_path):
    assert main(["info", str(tmp_path / "missing.t3")]) == 4


def test_phase_single_cell(tmp_path, capsys):
    out = tmp_path / "grid"
    code = main(["phase", "gaussian", "--n1", "4", "--n2", "4", "--n3", "2",
                 "--values", "32", "--ranks", "1", "--trials", "2",
                 "--seed", "1", "--matrix", "--out", str(out)])
    assert code == 0
    lines = (out / "grid.csv").read_text().splitlines()
    assert lines[0].startswith("kind,n1,n2,n3,r,m_or_p")
    cells = lines[1].split(",")
    assert cells[0] == "gaussian" and cells[8] == "1"  # success_rate
    assert (out / "grid_matrix.txt").read_text().strip() == "1"


def test_phase_completion_kind(tmp_path):
    out = tmp_path / "grid"
    code = main(["phase", "completion", "--n1", "8", "--n2", "8", "--n3", "4",
                 "--values", "0.9", "--ranks", "1", "--trials", "2",
                 "--seed", "2", "--out", str(out)])
    assert code == 0
    row = (out / "grid.csv").read_text().splitlines()[1].split(",")
    assert row[0] == "completion" and float(row[5]) == 0.9
    assert row[8] == "1"  # success_rate


def test_info_identity(tmp_path, capsys):
    tio.write_tensor(tmp_path / "i.t3", tb.identity(4, 3))
    assert main(["info", str(tmp_path / "i.t3")]) == 0
    text = capsys.readouterr().out
    assert "tubal_rank: 4" in text
    assert "tnn: 4" in text
    assert "spectral_norm: 1" in text
    tio.write_tensor(tmp_path / "z.t3", np.zeros((3, 3, 2)))
    main(["info", str(tmp_path / "z.t3")])
    assert "tubal_rank: 0" in capsys.readouterr().out


def test_info_matches_library(tmp_path, capsys):
    a = tb.rand_low_tubal(6, 6, 3, 2, seed=5)
    tio.write_tensor(tmp_path / "a.t3", a)
    main(["info", str(tmp_path / "a.t3")])
    text = capsys.readouterr().out
    assert f"tnn: {tio.fmt(tb.tnn(a))}" in text
    assert f"spectral_norm: {tio.fmt(tb.spectral_norm(a))}" in text


def _make_low_rank_image(tmp_path, h=32, w=32, rank=1, seed=2):
    """Quantized positive low-tubal-rank (h, 3, w)-tensor rendered as pixels."""
    from conftest import positive_low_tubal

    t = positive_low_tubal(h, 3, w, rank, seed)
    pixels = np.rint(t.transpose(0, 2, 1) * 255.0).astype(np.uint8)
    path = tmp_path / "scene.ppm"
    tio.write_image(path, pixels)
    return path


def test_inpaint_fully_observed_is_lossless(tmp_path):
    path = _make_low_rank_image(tmp_path)
    out = tmp_path / "inp"
    code = main(["inpaint", str(path), "--p", "1.0", "--out", str(out)])
    assert code == 0
    original = tio.read_image(path)[0]
    recovered = tio.read_image(out / "inpainted.ppm")[0]
    assert np.array_equal(original, recovered)


def test_inpaint_rejects_bad_format(tmp_path):
    bad = tmp_path / "img.ppm"
    bad.write_bytes(b"P3\n1 1\n255\n0 0 0\n")
    assert main(["inpaint", str(bad), "--p", "0.5", "--out", str(tmp_path / "o")]) == 2


def test_recover_table_row_via_cli(tmp_path):
    # first recovery-table row end to end: n=10, n3=5, r=2, m=541
    gen_out = tmp_path / "gen"
    assert main(["gen", "10", "10", "5", "2", "--seed", "17",
                 "--out", str(gen_out)]) == 0
    rec_out = tmp_path / "rec"
    assert main(["recover", str(gen_out / "x0.t3"), "--m", "541", "--seed", "18",
                 "--out", str(rec_out)]) == 0
    x0 = tio.read_tensor(gen_out / "x0.t3")
    xhat = tio.read_tensor(rec_out / "xhat.t3")
    assert tb.rel_error(xhat, x0) <= 1e-6
    assert tb.tubal_rank(xhat, 1e-3) == 2


def test_complete_table_row_via_cli(tmp_path):
    # completion-table row end to end: n=50, r=3, p=0.47, 1/n-scale factors
    gen_out = tmp_path / "gen"
    assert main(["gen", "50", "50", "50", "3", "--seed", "19", "--scale", "inv_n",
                 "--out", str(gen_out)]) == 0
    comp_out = tmp_path / "comp"
    assert main(["complete", str(gen_out / "x0.t3"), "--p", "0.47", "--seed", "20",
                 "--out", str(comp_out)]) == 0
    x0 = tio.read_tensor(gen_out / "x0.t3")
    xhat = tio.read_tensor(comp_out / "xhat.t3")
    assert tb.rel_error(xhat, x0) <= 1e-5
    assert tb.tubal_rank(xhat, 1e-3) == 3


def test_inpaint_grayscale_pgm(tmp_path):
    pixels = RNG.integers(0, 256, size=(6, 7), dtype=np.uint8)
    tio.write_image(tmp_path / "img.pgm", pixels)
    out = tmp_path / "o"
    assert main(["inpaint", str(tmp_path / "img.pgm"), "--p", "1.0",
                 "--out", str(out)]) == 0
    assert np.array_equal(tio.read_image(out / "inpainted.pgm")[0], pixels)


def test_frames_synthetic_low_rank_recovery(tmp_path):
    from conftest import positive_low_tubal

    h, w, f = 48, 48, 8
    scene = positive_low_tubal(h, f, w, 2, seed=23)
    frame_dir = tmp_path / "frames"
    frame_dir.mkdir()
    for j in range(f):
        pixels = np.rint(scene[:, j, :] * 255.0).astype(np.uint8)
        tio.write_image(frame_dir / f"frame_{j:02d}.pgm", pixels)
    out = tmp_path / "fout"
    assert main(["frames", str(frame_dir), "--p", "0.6", "--seed", "24",
                 "--out", str(out)]) == 0
    err_sq = 0.0
    for j in range(f):
        truth = np.rint(scene[:, j, :] * 255.0) / 255.0
        got = tio.read_image(out / f"frame_{j:02d}.pgm")[0].astype(float) / 255.0
        err_sq += ((got - truth) ** 2).sum()
    quant = np.rint(scene * 255.0) / 255.0
    assert np.sqrt(err_sq) / np.linalg.norm(quant) <= 1e-2


def test_frames_round_trip_and_mismatch(tmp_path):
    frame_dir = tmp_path / "frames"
    frame_dir.mkdir()
    pixels = RNG.integers(0, 256, size=(8, 9), dtype=np.uint8)
    tio.write_image(frame_dir / "f0.pgm", pixels)
    out = tmp_path / "fout"
    code = main(["frames", str(frame_dir), "--p", "1.0", "--out", str(out)])
    assert code == 0
    assert np.array_equal(tio.read_image(out / "f0.pgm")[0], pixels)
    tio.write_image(frame_dir / "f1.pgm", RNG.integers(0, 256, (4, 4), dtype=np.uint8))
    assert main(["frames", str(frame_dir), "--p", "1.0",
                 "--out", str(tmp_path / "f2")]) == 2


@pytest.mark.parametrize("maker", ["gen", "complete", "phase"])
def test_manifest_replay_bitwise(tmp_path, maker):
    first = tmp_path / "first"
    if maker == "gen":
        args = ["gen", "6", "6", "3", "2", "--seed", "13", "--out", str(first)]
    elif maker == "complete":
        gen_out = tmp_path / "gen"
        main(["gen", "8", "8", "4", "1", "--seed", "14", "--scale", "inv_n",
              "--out", str(gen_out)])
        args = ["complete", str(gen_out / "x0.t3"), "--p", "0.8", "--seed", "15",
                "--out", str(first)]
    else:
        args = ["phase", "gaussian", "--n1", "4", "--n2", "4", "--n3", "2",
                "--values", "32,40", "--ranks", "1", "--trials", "2",
                "--seed", "16", "--out", str(first)]
    assert main(args) == 0
    replay_out = tmp_path / "replay"
    assert main(["replay", str(first / "manifest.json"), "--out", str(replay_out)]) == 0
    assert _dir_bytes(first) == _dir_bytes(replay_out)


def test_manifest_replay_recover_bitwise(tmp_path):
    gen_out = tmp_path / "gen"
    main(["gen", "4", "4", "2", "1", "--seed", "3", "--out", str(gen_out)])
    first = tmp_path / "first"
    assert main(["recover", str(gen_out / "x0.t3"), "--m", "43", "--seed", "5",
                 "--history", "--out", str(first)]) == 0
    replay_out = tmp_path / "replay"
    assert main(["replay", str(first / "manifest.json"),
                 "--out", str(replay_out)]) == 0
    assert _dir_bytes(first) == _dir_bytes(replay_out)
