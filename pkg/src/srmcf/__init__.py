"""Sub-Riemannian mean curvature flow on R^2 x S^1 for grayscale image
inpainting and enhancement."""

from .errors import ConfigurationError, ImageIOError, NumericalError
from .flow import (
    Diagnostics,
    FlowParams,
    coefficients,
    evolve,
    horizontal_mean_curvature,
    mcf_rhs,
    step,
    w1_term,
    w2_term,
)
from .grid import (
    GridSpec,
    coordinate_diff,
    dint_norm_sq,
    frame_diff,
    horizontal_grad_norm_sq,
)
from .imageio import load_image, load_mask, parse_config, save_image
from .lb import concentrate, coupled_evolve, lb_rhs, lb_step
from .lifting import (
    OrientationField,
    estimate_orientation,
    fill_from_boundary,
    gaussian_smooth,
    lift_intensity,
    lift_surface,
    project,
)
from .pipelines import (
    ConcentrationSchedule,
    PipelineConfig,
    RunReport,
    enhance,
    heat_baseline,
    inpaint,
    inpaint_then_enhance,
    psnr,
)

__all__ = [
    "ConfigurationError",
    "ImageIOError",
    "NumericalError",
    "GridSpec",
    "coordinate_diff",
    "frame_diff",
    "horizontal_grad_norm_sq",
    "dint_norm_sq",
    "FlowParams",
    "Diagnostics",
    "coefficients",
    "w1_term",
    "w2_term",
    "mcf_rhs",
    "step",
    "evolve",
    "horizontal_mean_curvature",
    "lb_rhs",
    "lb_step",
    "coupled_evolve",
    "concentrate",
    "OrientationField",
    "gaussian_smooth",
    "estimate_orientation",
    "lift_surface",
    "lift_intensity",
    "project",
    "fill_from_boundary",
    "PipelineConfig",
    "ConcentrationSchedule",
    "RunReport",
    "inpaint",
    "enhance",
    "inpaint_then_enhance",
    "heat_baseline",
    "psnr",
    "load_image",
    "save_image",
    "load_mask",
    "parse_config",
]

__version__ = "0.1.0"
