"""Discriminative localization for overlapping classes.

Two binary expert networks, one for the class of interest and one for a
possibly overlapping class, each yield a class activation map for the
same image. The directed divergence kernel amplifies the cells where the
class-of-interest expert is more confident, turning a pair of heavily
overlapping maps into a localized explanation. This package covers the
numeric core (tensor interchange files, activation maps, the kernel) and
the rendering chain (bilinear upsampling, jet colorization, overlay
compositing), plus a ``localize`` CLI that runs the whole flow from
files.
"""

from .cam import Cam, compute_cam, normalize_by_max
from .errors import (
    DivcamError,
    ImageFormatError,
    InputError,
    NonFiniteValueError,
    NonPositiveMaxError,
    NpyFormatError,
    ParameterError,
    PipelineError,
    ShapeError,
    UnsupportedDtypeError,
)
from .imaging import (
    JET_LUT,
    colorize,
    composite,
    load_image,
    save_png,
    to_heatmap,
    upsample_bilinear,
)
from .kernel import DEFAULT_ALPHA, AddkResult, addk, concentration
from .pipeline import (
    ExpertExport,
    PipelineConfig,
    alpha_sweep,
    run_pipeline,
    single_cam_overlay,
)
from .tensor_io import ClassWeights, FeatureStack, load_tensor, max_value, save_tensor

__version__ = "0.1.0"

__all__ = [
    "AddkResult",
    "Cam",
    "ClassWeights",
    "DEFAULT_ALPHA",
    "DivcamError",
    "ExpertExport",
    "FeatureStack",
    "ImageFormatError",
    "InputError",
    "JET_LUT",
    "NonFiniteValueError",
    "NonPositiveMaxError",
    "NpyFormatError",
    "ParameterError",
    "PipelineConfig",
    "PipelineError",
    "ShapeError",
    "UnsupportedDtypeError",
    "addk",
    "alpha_sweep",
    "colorize",
    "compute_cam",
    "composite",
    "concentration",
    "load_image",
    "load_tensor",
    "max_value",
    "normalize_by_max",
    "run_pipeline",
    "save_png",
    "save_tensor",
    "single_cam_overlay",
    "to_heatmap",
    "upsample_bilinear",
]
