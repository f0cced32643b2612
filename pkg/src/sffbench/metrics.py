"""Full-reference image quality metrics.

Throughout, ``A`` is the reference image and ``B`` the processed one. All
sums accumulate in row-major order (``numpy.add.accumulate``), so every
metric is bitwise equal to a plain nested-loop evaluation.
"""

import math
from dataclasses import astuple, dataclass

import numpy as np

from .imaging import DimensionError

METRIC_NAMES = ("mse", "psnr", "ncc", "ad", "sc", "md", "nae")
CSV_HEADER = "method," + ",".join(METRIC_NAMES)
PEAK = 255.0


class UndefinedMetricError(ArithmeticError):
    """The metric's denominator vanishes for this image pair."""


def _pair(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionError(f"image shapes differ: {a.shape} vs {b.shape}")
    if a.size == 0:
        raise DimensionError("images are empty")
    return a, b


def rowmajor_sum(values):
    """Strict left-to-right sum over the flattened array."""
    flat = np.ravel(values)
    if flat.size == 0:
        return 0.0
    return float(np.add.accumulate(flat)[-1])


def mse(a, b):
    a, b = _pair(a, b)
    d = a - b
    return rowmajor_sum(d * d) / a.size


def psnr_from_mse(value):
    if value == 0:
        return math.inf
    return 10.0 * math.log10(PEAK * PEAK / value)


def psnr(a, b):
    """Peak signal-to-noise ratio in dB for 8-bit gray levels; inf when equal."""
    return psnr_from_mse(mse(a, b))


def sc(a, b):
    """Structural content, ``sum(A**2) / sum(B**2)``."""
    a, b = _pair(a, b)
    den = rowmajor_sum(b * b)
    if den == 0:
        raise UndefinedMetricError("structural content undefined for an all-zero processed image")
    return rowmajor_sum(a * a) / den


def ncc(a, b):
    """Normalized cross-correlation ``sum(A*B) / sum(A**2)``."""
    a, b = _pair(a, b)
    den = rowmajor_sum(a * a)
    if den == 0:
        raise UndefinedMetricError("NCC undefined for an all-zero reference")
    return rowmajor_sum(a * b) / den


def md(a, b):
    a, b = _pair(a, b)
    return float(np.max(np.abs(a - b)))


def nae(a, b):
    a, b = _pair(a, b)
    den = rowmajor_sum(a)
    if den == 0:
        raise UndefinedMetricError("NAE undefined for a zero-sum reference")
    return rowmajor_sum(np.abs(a - b)) / den


def ad(a, b):
    """Signed average difference ``mean(A - B)``."""
    a, b = _pair(a, b)
    return rowmajor_sum(a - b) / a.size


_FUNCTIONS = {"mse": mse, "psnr": psnr, "ncc": ncc, "ad": ad, "sc": sc, "md": md, "nae": nae}


@dataclass(frozen=True)
class MetricReport:
    method: str
    mse: float
    psnr: float
    ncc: float
    ad: float
    sc: float
    md: float
    nae: float

    def values(self):
        return astuple(self)[1:]

    def csv_row(self):
        return ",".join([self.method] + [format_value(v) for v in self.values()])

    @classmethod
    def ideal(cls, method="ideal"):
        return cls(method, 0.0, math.inf, 1.0, 0.0, 1.0, 0.0, 0.0)

    @classmethod
    def failed(cls, method):
        return cls(method, *([math.nan] * len(METRIC_NAMES)))


def format_value(value):
    """Four decimals, ``Inf`` for +infinity and ``nan`` for undefined."""
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "Inf" if value > 0 else "-Inf"
    return f"{value:.4f}"


def parse_value(token):
    token = token.strip()
    if token == "Inf":
        return math.inf
    if token == "-Inf":
        return -math.inf
    return float(token)


def evaluate_all(reference, processed, method):
    """All seven metrics for one image pair.

    Undefined metrics are reported as NaN instead of aborting the row;
    only a shape mismatch raises.
    """
    a, b = _pair(reference, processed)
    row = []
    for name in METRIC_NAMES:
        try:
            row.append(_FUNCTIONS[name](a, b))
        except UndefinedMetricError:
            row.append(math.nan)
    return MetricReport(str(method), *row)


def reports_to_csv(reports, header=True):
    lines = [CSV_HEADER] if header else []
    lines += [r.csv_row() for r in reports]
    return "\n".join(lines) + "\n"


def read_csv(text):
    """Parse a metrics CSV into a list of :class:`MetricReport`."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != CSV_HEADER:
        raise ValueError("missing or unexpected metrics CSV header")
    reports = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != len(METRIC_NAMES) + 1:
            raise ValueError(f"malformed metrics row: {ln!r}")
        reports.append(MetricReport(parts[0], *(parse_value(p) for p in parts[1:])))
    return reports
