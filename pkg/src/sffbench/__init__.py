"""Shape-from-focus benchmark: focus operators, depth recovery and quality metrics."""

__version__ = "0.1.0"

from .camera import ConeScene, SimConfig, ThinLensCamera, blur_sigma, focused_depth, \
    make_cone_scene, render_stack
from .focus import OPERATORS, OperatorConfig, OperatorKind, focus_map
from .metrics import MetricReport, evaluate_all
from .pipeline import all_in_focus, build_focus_volume, depth_from_volume, depth_to_gray, \
    reconstruct

__all__ = [
    "ConeScene", "SimConfig", "ThinLensCamera", "blur_sigma", "focused_depth",
    "make_cone_scene", "render_stack", "OPERATORS", "OperatorConfig", "OperatorKind",
    "focus_map", "MetricReport", "evaluate_all", "all_in_focus", "build_focus_volume",
    "depth_from_volume", "depth_to_gray", "reconstruct",
]
