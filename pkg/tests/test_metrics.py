import math

import numpy as np
import pytest

import naive
from sffbench.imaging import DimensionError
from sffbench import metrics as m

RNG = np.random.default_rng(42)


def pairs(n=10, shape=(32, 32)):
    rng = np.random.default_rng(7)
    return [(rng.uniform(0, 255, shape), rng.uniform(0, 255, shape)) for _ in range(n)]


def test_mse_examples():
    a = RNG.uniform(0, 255, (5, 5))
    assert m.mse(a, a) == 0
    assert m.mse(np.zeros((3, 3)), np.ones((3, 3))) == 1
    assert m.mse(np.array([[0, 2], [0, 0]]), np.zeros((2, 2))) == 1


def test_psnr_examples():
    a = RNG.uniform(0, 255, (5, 5))
    assert m.psnr(a, a) == math.inf
    assert m.psnr_from_mse(255.0 ** 2) == 0.0
    assert m.psnr_from_mse(650.25) == pytest.approx(20.0, abs=1e-12)


def test_sc_examples():
    a = RNG.uniform(1, 255, (5, 5))
    assert m.sc(a, a) == 1
    assert m.sc(a, a / 2) == pytest.approx(4.0, rel=1e-14)
    assert m.sc(np.zeros((5, 5)), a) == 0
    with pytest.raises(m.UndefinedMetricError):
        m.sc(a, np.zeros((5, 5)))


def test_ncc_examples():
    a = RNG.uniform(1, 255, (5, 5))
    assert m.ncc(a, a) == 1
    assert m.ncc(a, 2 * a) == 2
    left = np.zeros((4, 4))
    left[:, :2] = 9
    assert m.ncc(left, left[:, ::-1]) == 0
    with pytest.raises(m.UndefinedMetricError):
        m.ncc(np.zeros((4, 4)), a[:4, :4])


def test_md_examples():
    a = RNG.uniform(0, 245, (6, 6))
    assert m.md(a, a) == 0
    b = a.copy()
    b[2, 3] += 10
    assert m.md(a, b) == pytest.approx(10)
    perm = RNG.permutation(36)
    assert m.md(a.ravel()[perm].reshape(6, 6), b.ravel()[perm].reshape(6, 6)) == m.md(a, b)


def test_nae_examples():
    a = RNG.integers(1, 200, (6, 6)).astype(float)
    assert m.nae(a, a) == 0
    assert m.nae(a, np.zeros_like(a)) == 1
    assert m.nae(a, a + 1) == pytest.approx(a.size / a.sum(), rel=1e-14)
    with pytest.raises(m.UndefinedMetricError):
        m.nae(np.zeros((3, 3)), np.ones((3, 3)))


def test_ad_examples():
    a = RNG.integers(10, 200, (6, 6)).astype(float)
    assert m.ad(a, a) == 0
    assert m.ad(a, a - 3) == 3
    b = RNG.uniform(0, 255, (6, 6))
    assert m.ad(a, b) == -m.ad(b, a)


def test_shape_mismatch():
    for fn in (m.mse, m.psnr, m.sc, m.ncc, m.md, m.nae, m.ad, m.evaluate_all):
        args = (np.ones((2, 2)), np.ones((2, 3)))
        with pytest.raises(DimensionError):
            fn(*args) if fn is not m.evaluate_all else fn(*args, "x")


@pytest.mark.parametrize("name", m.METRIC_NAMES)
def test_bitwise_against_nested_loops(name):
    ours = getattr(m, name)
    ref = getattr(naive, name)
    for a, b in pairs():
        assert ours(a, b) == ref(a, b)


def test_algebra():
    for a, b in pairs():
        assert m.mse(a, b) == m.mse(b, a)
        assert m.md(a, b) == m.md(b, a)
        assert m.ad(a, b) == -m.ad(b, a)
        assert abs(m.sc(a, b) * m.sc(b, a) - 1) < 1e-12
        e = m.mse(a, b)
        assert abs(m.psnr_from_mse(e / 100) - (m.psnr_from_mse(e) + 20)) < 1e-12
        c = 1.7
        assert m.ncc(a, c * a) == pytest.approx(c, rel=1e-14)
        assert m.psnr_from_mse(e) > m.psnr_from_mse(e * 1.01)


def test_evaluate_all_ideal_and_sentinels():
    a = RNG.uniform(0, 255, (8, 8))
    rep = m.evaluate_all(a, a, "lapd")
    assert rep.values() == (0.0, math.inf, 1.0, 0.0, 1.0, 0.0, 0.0)
    assert rep.csv_row() == "lapd,0.0000,Inf,1.0000,0.0000,1.0000,0.0000,0.0000"
    zero = m.evaluate_all(np.zeros((4, 4)), np.full((4, 4), 2.0), "z")
    assert math.isnan(zero.ncc) and math.isnan(zero.nae)
    assert zero.sc == 0 and zero.mse == 4
    both = m.evaluate_all(np.zeros((4, 4)), np.zeros((4, 4)), "z")
    assert math.isnan(both.sc) and both.csv_row().split(",")[5] == "nan"


def test_csv_round_trip():
    reports = [m.MetricReport.ideal(), m.evaluate_all(*pairs(1)[0], "grae"),
               m.MetricReport.failed("hise")]
    text = m.reports_to_csv(reports)
    assert text.splitlines()[0] == "method,mse,psnr,ncc,ad,sc,md,nae"
    back = m.read_csv(text)
    assert [r.method for r in back] == ["ideal", "grae", "hise"]
    assert back[0].psnr == math.inf and math.isnan(back[2].md)
    assert back[1].mse == pytest.approx(reports[1].mse, abs=5e-5)
    with pytest.raises(ValueError):
        m.read_csv("a,b\n")
