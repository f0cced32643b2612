"""Directory-level workflow: generate a stack, reconstruct, evaluate, report.

Layout of a generated stack directory::

    frame_000.pgm ... frame_{K-1}.pgm   rendered frames
    gt_depth.sffd / gt_depth.pgm        ground-truth frame index
    texture.pgm                         sharp reference texture
    manifest.txt                        key=value run description

A bench directory holds ``stack/`` (unless an external stack is given),
one sub-directory per operator with ``depth.sffd``, ``depth.pgm`` and
``aif.pgm``, the two metric tables and ``plots/``.
"""

import glob
import logging
import os

import numpy as np

from . import __version__
from .camera import SimConfig, ThinLensCamera, make_cone_scene, manifest_items, render_stack
from .fileio import atomic_write, load_float_grid, load_pgm, save_float_grid, save_pgm
from .focus import OPERATORS, OperatorConfig, OperatorKind
from .imaging import DimensionError
from .metrics import METRIC_NAMES, MetricReport, evaluate_all, reports_to_csv
from .parallel import ordered_map
from .pipeline import depth_to_gray, reconstruct, stack_frames
from .svgplot import bar_chart_svg

log = logging.getLogger(__name__)

MANIFEST = "manifest.txt"


def _format_manifest_value(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return ",".join(str(getattr(v, "value", v)) for v in value)
    return str(value)


def write_manifest(path, items):
    text = "".join(f"{k}={_format_manifest_value(v)}\n" for k, v in items)
    atomic_write(path, text.encode("utf-8"))


def read_manifest(path):
    out = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line and "=" in line:
                key, value = line.split("=", 1)
                out[key] = value
    return out


def frame_name(k):
    return f"frame_{k:03d}.pgm"


def generate(out_dir, config=None, camera=None):
    """Render the cone stack into `out_dir`; returns ``(scene, stack)``."""
    config = config or SimConfig()
    camera = camera or ThinLensCamera()
    os.makedirs(out_dir, exist_ok=True)
    scene = make_cone_scene(config, camera)
    stack = render_stack(scene, camera, config)
    for k, frame in enumerate(stack):
        save_pgm(frame, os.path.join(out_dir, frame_name(k)))
    save_float_grid(scene.gt_frame, os.path.join(out_dir, "gt_depth.sffd"))
    save_pgm(depth_to_gray(scene.gt_frame, config.frames), os.path.join(out_dir, "gt_depth.pgm"))
    save_pgm(scene.texture, os.path.join(out_dir, "texture.pgm"))
    items = [("tool_version", __version__)] + manifest_items(config, camera)
    write_manifest(os.path.join(out_dir, MANIFEST), items)
    return scene, stack


def load_stack(stack_dir):
    """Load ``frame_*.pgm`` from `stack_dir` as a ``(K, H, W)`` array."""
    paths = sorted(glob.glob(os.path.join(stack_dir, "frame_*.pgm")))
    if len(paths) < 2:
        raise DimensionError(f"{stack_dir} holds {len(paths)} frames; need at least 2")
    return stack_frames([load_pgm(p) for p in paths])


def reconstruct_to_dir(stack, kind, config, out_dir):
    """Run the pipeline for one operator and write its outputs."""
    kind = OperatorKind.parse(kind)
    depth, aif = reconstruct(stack, kind, config)
    os.makedirs(out_dir, exist_ok=True)
    save_float_grid(depth, os.path.join(out_dir, "depth.sffd"))
    save_pgm(depth_to_gray(depth, stack.shape[0]), os.path.join(out_dir, "depth.pgm"))
    save_pgm(aif, os.path.join(out_dir, "aif.pgm"))
    return depth, aif


def operator_manifest(kind, config, stack_dir):
    return [
        ("tool_version", __version__),
        ("operator", OperatorKind.parse(kind).value),
        ("window", config.window),
        ("step", config.step),
        ("histogram_bins", config.histogram_bins),
        ("refine", config.refine),
        ("stack", stack_dir),
        ("outputs", ["depth.sffd", "depth.pgm", "aif.pgm"]),
    ]


def run_bench(out_dir, config=None, camera=None, op_config=None, stack_dir=None):
    """Evaluate all eight operators against the stack's ground truth.

    Returns ``(depth_reports, aif_reports)``, each starting with the ideal
    row. An operator that raises is reported as an all-NaN row.
    """
    config = config or SimConfig()
    camera = camera or ThinLensCamera()
    op_config = op_config or OperatorConfig()
    os.makedirs(out_dir, exist_ok=True)

    if stack_dir is None:
        stack_dir = os.path.join(out_dir, "stack")
        log.info("generating %d frames of %dx%d in %s",
                 config.frames, config.size, config.size, stack_dir)
        generate(stack_dir, config, camera)
        stack_ref = "stack"
    else:
        stack_ref = os.path.abspath(stack_dir)
    stack = load_stack(stack_dir)
    frames = stack.shape[0]
    gt = load_float_grid(os.path.join(stack_dir, "gt_depth.sffd"))
    texture = load_pgm(os.path.join(stack_dir, "texture.pgm"))
    gt_gray = depth_to_gray(gt, frames)

    def run_one(kind):
        try:
            depth, aif = reconstruct_to_dir(stack, kind, op_config,
                                            os.path.join(out_dir, kind.value))
            return (evaluate_all(gt_gray, depth_to_gray(depth, frames), kind.value),
                    evaluate_all(texture, np.rint(aif), kind.value))
        except Exception:  # a failing operator must not abort the table
            log.exception("operator %s failed", kind.value)
            return MetricReport.failed(kind.value), MetricReport.failed(kind.value)

    rows = ordered_map(run_one, OPERATORS)
    depth_reports = [MetricReport.ideal()] + [r[0] for r in rows]
    aif_reports = [MetricReport.ideal()] + [r[1] for r in rows]

    atomic_write(os.path.join(out_dir, "depth_metrics.csv"),
                 reports_to_csv(depth_reports).encode("ascii"))
    atomic_write(os.path.join(out_dir, "aif_metrics.csv"),
                 reports_to_csv(aif_reports).encode("ascii"))

    plot_dir = os.path.join(out_dir, "plots")
    os.makedirs(plot_dir, exist_ok=True)
    for prefix, reports, label in (("depth", depth_reports, "depth map"),
                                   ("aif", aif_reports, "all-in-focus")):
        for metric in METRIC_NAMES:
            svg = bar_chart_svg(reports, metric, f"{metric.upper()} ({label})")
            atomic_write(os.path.join(plot_dir, f"{prefix}_{metric}.svg"), svg.encode("utf-8"))

    items = [("tool_version", __version__)]
    items += manifest_items(config, camera) if stack_ref == "stack" else []
    items += [
        ("operators", list(OPERATORS)),
        ("window", op_config.window),
        ("step", op_config.step),
        ("histogram_bins", op_config.histogram_bins),
        ("refine", op_config.refine),
        ("stack", stack_ref),
        ("depth_metrics", "depth_metrics.csv"),
        ("aif_metrics", "aif_metrics.csv"),
        ("plots", "plots"),
    ]
    write_manifest(os.path.join(out_dir, MANIFEST), items)
    return depth_reports, aif_reports

