import math
import os
import subprocess
import sys

import numpy as np
import pytest

from sffbench import bench, cli
from sffbench.fileio import load_float_grid, load_pgm, save_pgm
from sffbench.metrics import read_csv


@pytest.fixture(scope="module")
def stack_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("gen") / "stack"
    assert cli.main(["generate", "--out", str(out), "--frames", "5", "--size", "32"]) == 0
    return out


def test_generate_outputs(stack_dir):
    names = sorted(os.listdir(stack_dir))
    assert names == [f"frame_{k:03d}.pgm" for k in range(5)] + \
        ["gt_depth.pgm", "gt_depth.sffd", "manifest.txt", "texture.pgm"]
    assert load_pgm(stack_dir / "frame_000.pgm").shape == (32, 32)
    gt = load_float_grid(stack_dir / "gt_depth.sffd")
    assert gt.min() == 0 and gt.max() == 4
    man = bench.read_manifest(stack_dir / "manifest.txt")
    assert man["frames"] == "5" and man["size"] == "32" and man["pixel_pitch"] == "0.08"
    assert set(man) >= {"texture", "noise_sigma", "seed", "focal_length", "aperture",
                        "v_min", "v_max", "tool_version"}


def test_generate_is_reproducible(stack_dir, tmp_path):
    other = tmp_path / "again"
    cli.main(["generate", "--out", str(other), "--frames", "5", "--size", "32"])
    for name in os.listdir(stack_dir):
        assert (stack_dir / name).read_bytes() == (other / name).read_bytes()


@pytest.mark.parametrize("argv", [
    ["generate", "--frames", "1"],
    ["generate", "--size", "8"],
    ["generate", "--texture", "plaid"],
    ["generate", "--noise-sigma", "-1"],
    ["reconstruct", "--stack", "x", "--operator", "dct"],
    ["reconstruct", "--stack", "x", "--operator", "lapd", "--window", "4"],
    ["plot", "x.csv", "--metric", "ssim"],
    [],
])
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2


def test_unknown_operator_lists_tokens(capsys):
    with pytest.raises(SystemExit):
        cli.main(["reconstruct", "--stack", "x", "--operator", "dct"])
    err = capsys.readouterr().err
    for tok in ("curv", "grae", "hise", "lapm", "lapv", "lapd", "lap3", "wavs"):
        assert tok in err


def test_reconstruct(stack_dir, tmp_path):
    out = tmp_path / "lapd"
    assert cli.main(["reconstruct", "--stack", str(stack_dir), "--operator", "LAPD",
                     "--window", "5", "--refine", "--out", str(out)]) == 0
    depth = load_float_grid(out / "depth.sffd")
    assert depth.shape == (32, 32) and depth.min() >= 0 and depth.max() <= 4
    assert load_pgm(out / "aif.pgm").shape == (32, 32)
    man = bench.read_manifest(out / "manifest.txt")
    assert man["window"] == "5" and man["operator"] == "lapd" and man["refine"] == "true"


def test_reconstruct_ragged_stack_is_data_error(tmp_path, capsys):
    save_pgm(np.zeros((8, 8)), tmp_path / "frame_000.pgm")
    save_pgm(np.zeros((8, 9)), tmp_path / "frame_001.pgm")
    assert cli.main(["reconstruct", "--stack", str(tmp_path), "--operator", "lapm"]) == 1
    assert "differ" in capsys.readouterr().err


def test_evaluate_identical(stack_dir, capsys):
    f = str(stack_dir / "texture.pgm")
    assert cli.main(["evaluate", "--processed", f, "--reference", f, "--method", "lapd"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines == ["method,mse,psnr,ncc,ad,sc,md,nae",
                     "lapd,0.0000,Inf,1.0000,0.0000,1.0000,0.0000,0.0000"]


def test_evaluate_depth_against_gt(stack_dir, tmp_path, capsys):
    out = tmp_path / "r"
    cli.main(["reconstruct", "--stack", str(stack_dir), "--operator", "lapm", "--out", str(out)])
    capsys.readouterr()
    cli.main(["evaluate", "--processed", str(out / "depth.pgm"),
              "--reference", str(stack_dir / "gt_depth.pgm"), "--no-header"])
    row = capsys.readouterr().out.strip().split(",")
    assert row[0] == "processed" and len(row) == 8
    assert all(math.isfinite(float(v)) for v in row[1:2] + row[3:])


def test_evaluate_size_mismatch(tmp_path, capsys):
    save_pgm(np.zeros((4, 4)), tmp_path / "a.pgm")
    save_pgm(np.zeros((4, 5)), tmp_path / "b.pgm")
    code = cli.main(["evaluate", "--processed", str(tmp_path / "a.pgm"),
                     "--reference", str(tmp_path / "b.pgm")])
    assert code == 1
    assert "shape" in capsys.readouterr().err


def test_missing_file_is_runtime_error(tmp_path, capsys):
    code = cli.main(["evaluate", "--processed", str(tmp_path / "nope.pgm"),
                     "--reference", str(tmp_path / "nope.pgm")])
    assert code == 1


CSV = """method,mse,psnr,ncc,ad,sc,md,nae
ideal,0.0000,Inf,1.0000,0.0000,1.0000,0.0000,0.0000
curv,23.6105,34.3998,0.9937,0.6101,1.0114,26.0196,0.0293
grae,26.0291,33.9762,0.9916,0.8768,1.0157,26.7141,0.0265
hise,44.1025,31.6862,0.9976,0.0706,1.0024,25.3392,0.0411
lapm,23.8293,34.3597,0.9940,0.5043,1.0109,9.8613,0.0337
lapv,19.4382,35.2442,0.9905,1.0072,1.0182,9.3848,0.0299
lapd,0.0000,Inf,0.9941,-0.6161,1.0111,9.4204,0.0293
lap3,19.1781,35.3027,0.9941,0.5991,1.0109,9.4204,0.0296
wavs,nan,nan,nan,nan,nan,nan,nan
"""


def test_plot(tmp_path):
    src = tmp_path / "t.csv"
    src.write_text(CSV)
    out = tmp_path / "mse.svg"
    assert cli.main(["plot", str(src), "--metric", "mse", "--out", str(out)]) == 0
    svg = out.read_text()
    assert svg.startswith("<svg") and svg.count('class="bar"') == 7
    assert svg.count('class="missing"') == 1
    assert 'class="ideal"' in svg
    out2 = tmp_path / "again.svg"
    cli.main(["plot", str(src), "--metric", "mse", "--out", str(out2)])
    assert out.read_bytes() == out2.read_bytes()
    cli.main(["plot", str(src), "--metric", "psnr", "--out", str(tmp_path / "p.svg")])
    psnr = (tmp_path / "p.svg").read_text()
    assert psnr.count('class="bar"') == 6 and psnr.count('class="missing"') == 2
    assert "ideal: Inf" in psnr and 'class="ideal"' not in psnr
    cli.main(["plot", str(src), "--metric", "ad"])
    assert (tmp_path / "t_ad.svg").exists()


def test_bench_small(tmp_path):
    out = tmp_path / "b"
    assert cli.main(["bench", "--out", str(out), "--frames", "6", "--size", "32"]) == 0
    for name in ("depth_metrics.csv", "aif_metrics.csv"):
        reports = read_csv((out / name).read_text())
        assert [r.method for r in reports] == ["ideal", "curv", "grae", "hise", "lapm",
                                               "lapv", "lapd", "lap3", "wavs"]
    assert len(os.listdir(out / "plots")) == 14
    for op in ("curv", "lap3", "wavs"):
        assert sorted(os.listdir(out / op)) == ["aif.pgm", "depth.pgm", "depth.sffd"]
    man = bench.read_manifest(out / "manifest.txt")
    assert man["operators"] == "curv,grae,hise,lapm,lapv,lapd,lap3,wavs"
    assert man["window"] == "7" and man["refine"] == "false"


def test_bench_with_external_stack(stack_dir, tmp_path):
    out = tmp_path / "ext"
    assert cli.main(["bench", "--stack", str(stack_dir), "--out", str(out)]) == 0
    assert not (out / "stack").exists()
    assert len(read_csv((out / "depth_metrics.csv").read_text())) == 9


def test_failing_operator_gives_nan_row(stack_dir, tmp_path, monkeypatch):
    real = bench.reconstruct_to_dir

    def flaky(stack, kind, config, out_dir):
        if kind.value == "hise":
            raise RuntimeError("boom")
        return real(stack, kind, config, out_dir)

    monkeypatch.setattr(bench, "reconstruct_to_dir", flaky)
    depth, aif = bench.run_bench(str(tmp_path / "f"), stack_dir=str(stack_dir))
    hise = [r for r in depth if r.method == "hise"][0]
    assert all(math.isnan(v) for v in hise.values())
    assert "hise,nan,nan,nan,nan,nan,nan,nan" in (tmp_path / "f" / "aif_metrics.csv").read_text()


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "sffbench", "--version"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "sffbench" in res.stdout
