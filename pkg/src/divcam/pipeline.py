"""End-to-end dual-expert localization runs.

One run loads the exports of two binary expert networks plus the source
image, computes both activation maps, applies the directed divergence
kernel with the class of interest as the left operand, and writes four
PNGs next to a plain-text manifest:

    <stem>_cam1.png       interest expert's map over the image
    <stem>_cam2.png       competing expert's map over the image
    <stem>_addk.png       kernel output over the image
    <stem>_addk_raw.png   kernel output alone, at display size
    <stem>_manifest.txt   key=value record of inputs and outputs

Overlays always match the source image's dimensions; the standalone heat
map is rendered at ``display_size``. The alpha sweep renders one
standalone heat map per amplification value plus a horizontal grid, and
records how concentrated each result is.

Everything here is deterministic: identical inputs and configuration
produce byte-identical artifacts.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cam import Cam, compute_cam
from .errors import DivcamError, ParameterError, PipelineError
from .imaging import colorize, composite, load_image, save_png, to_heatmap, upsample_bilinear
from .kernel import DEFAULT_ALPHA, addk, concentration
from .tensor_io import ClassWeights, FeatureStack

DEFAULT_OPACITY = 0.5
DEFAULT_DISPLAY_SIZE = (224, 224)
SWEEP_CONCENTRATION_LEVEL = 0.5


@dataclass(frozen=True)
class ExpertExport:
    """File-backed output of one binary expert network.

    Either ``activations`` + ``weights`` (a (C, H, W) stack and a length-C
    vector) or a precomputed ``cam`` file (an (H, W) map) must be given,
    not both.
    """

    model_id: str
    activations: Path | None = None
    weights: Path | None = None
    cam: Path | None = None
    class_index: int = 0

    def __post_init__(self):
        has_pair = self.activations is not None and self.weights is not None
        has_half_pair = (self.activations is None) != (self.weights is None)
        if has_half_pair:
            raise ParameterError(
                f"expert {self.model_id!r}: activations and weights must be given together"
            )
        if has_pair == (self.cam is not None):
            raise ParameterError(
                f"expert {self.model_id!r}: give either an activations/weights pair or a cam file"
            )

    def load_cam(self) -> Cam:
        if self.cam is not None:
            return Cam.from_file(self.cam, class_index=self.class_index, model_id=self.model_id)
        stack = FeatureStack.from_file(self.activations, model_id=self.model_id)
        weights = ClassWeights.from_file(self.weights, class_index=self.class_index)
        return compute_cam(stack, weights)


@dataclass(frozen=True)
class PipelineConfig:
    """Inputs and knobs for one localization run.

    ``interest`` is the expert for the class being explained; ``other``
    is the overlapping class. ``image`` may be omitted only for alpha
    sweeps, which render no overlays.
    """

    interest: ExpertExport
    other: ExpertExport
    output_dir: Path
    image: Path | None = None
    alpha: float = DEFAULT_ALPHA
    opacity: float = DEFAULT_OPACITY
    display_size: tuple[int, int] = DEFAULT_DISPLAY_SIZE

    def __post_init__(self):
        if not self.alpha > 0:
            raise ParameterError(f"alpha must be > 0, got {self.alpha!r}")
        if not 0.0 <= self.opacity <= 1.0:
            raise ParameterError(f"opacity must lie in [0, 1], got {self.opacity!r}")
        if len(self.display_size) != 2 or any(int(e) < 1 for e in self.display_size):
            raise ParameterError(f"display size extents must be >= 1, got {self.display_size!r}")


@contextmanager
def _stage(name: str):
    """Tag errors with the pipeline stage they came from."""
    try:
        yield
    except PipelineError:
        raise
    except (DivcamError, OSError) as exc:
        raise PipelineError(name, exc) from exc


def _overlay(base: np.ndarray, map2d: np.ndarray, opacity: float) -> np.ndarray:
    height, width = base.shape[:2]
    heat = colorize(to_heatmap(upsample_bilinear(map2d, height, width)))
    return composite(base, heat, opacity)


def _render_heatmap(map2d: np.ndarray, size: tuple[int, int]) -> np.ndarray:
    height, width = int(size[0]), int(size[1])
    return colorize(to_heatmap(upsample_bilinear(map2d, height, width)))


def _write_manifest(entries: dict[str, object], path: Path) -> None:
    text = "".join(f"{key}={value}\n" for key, value in entries.items())
    path.write_text(text, encoding="utf-8")


def _format_alpha(alpha: float) -> str:
    return format(float(alpha), "g")


def _input_entries(config: PipelineConfig) -> dict[str, object]:
    entries: dict[str, object] = {}
    if config.image is not None:
        entries["image"] = config.image
    for role, export in (("interest", config.interest), ("other", config.other)):
        entries[f"{role}_model"] = export.model_id
        entries[f"{role}_class"] = export.class_index
        if export.cam is not None:
            entries[f"{role}_cam"] = export.cam
        else:
            entries[f"{role}_activations"] = export.activations
            entries[f"{role}_weights"] = export.weights
    return entries


def run_pipeline(config: PipelineConfig) -> dict[str, str]:
    """Execute one dual-expert localization run.

    Returns the manifest as a mapping (the same content written to
    ``<stem>_manifest.txt``). The kernel sees the interest expert's map
    as the left operand; swapping the experts changes the result.
    """
    if config.image is None:
        raise ParameterError("run_pipeline requires an image")
    with _stage("load-image"):
        base = load_image(config.image)
    with _stage("load-interest-export"):
        cam_interest = config.interest.load_cam()
    with _stage("load-other-export"):
        cam_other = config.other.load_cam()
    with _stage("divergence-kernel"):
        result = addk(cam_interest, cam_other, config.alpha)

    stem = Path(config.image).stem
    out_dir = Path(config.output_dir)
    outputs = {
        "cam1_overlay": out_dir / f"{stem}_cam1.png",
        "cam2_overlay": out_dir / f"{stem}_cam2.png",
        "addk_overlay": out_dir / f"{stem}_addk.png",
        "addk_heatmap": out_dir / f"{stem}_addk_raw.png",
    }
    with _stage("render-outputs"):
        out_dir.mkdir(parents=True, exist_ok=True)
        save_png(_overlay(base, cam_interest.map, config.opacity), outputs["cam1_overlay"])
        save_png(_overlay(base, cam_other.map, config.opacity), outputs["cam2_overlay"])
        save_png(_overlay(base, result.normalized, config.opacity), outputs["addk_overlay"])
        save_png(_render_heatmap(result.normalized, config.display_size), outputs["addk_heatmap"])

    manifest = _input_entries(config)
    manifest["alpha"] = _format_alpha(config.alpha)
    manifest["opacity"] = format(config.opacity, "g")
    manifest.update(outputs)
    with _stage("write-manifest"):
        manifest_path = out_dir / f"{stem}_manifest.txt"
        _write_manifest(manifest, manifest_path)
    manifest["manifest"] = manifest_path
    return {key: str(value) for key, value in manifest.items()}


def alpha_sweep(config: PipelineConfig, alphas) -> dict[str, str]:
    """Render one standalone kernel heat map per amplification value.

    Also writes a side-by-side grid of all heat maps and records, for
    each alpha, how many cells of the kernel output reach half of its
    maximum. Along an ascending alpha sequence those counts never
    increase.
    """
    alphas = [float(a) for a in alphas]
    if not alphas:
        raise ParameterError("alpha sweep requires at least one alpha")
    for alpha in alphas:
        if not alpha > 0:
            raise ParameterError(f"alpha must be > 0, got {alpha!r}")

    with _stage("load-interest-export"):
        cam_interest = config.interest.load_cam()
    with _stage("load-other-export"):
        cam_other = config.other.load_cam()

    stem = Path(config.image).stem if config.image is not None else "sweep"
    out_dir = Path(config.output_dir)
    manifest = _input_entries(config)
    manifest["alphas"] = ",".join(_format_alpha(a) for a in alphas)

    panels = []
    with _stage("render-outputs"):
        out_dir.mkdir(parents=True, exist_ok=True)
        for alpha in alphas:
            result = addk(cam_interest, cam_other, alpha)
            image = _render_heatmap(result.normalized, config.display_size)
            panels.append(image)
            tag = _format_alpha(alpha)
            path = out_dir / f"{stem}_addk_a{tag}.png"
            save_png(image, path)
            manifest[f"alpha_{tag}_heatmap"] = path
            manifest[f"alpha_{tag}_concentration_{SWEEP_CONCENTRATION_LEVEL:g}"] = concentration(
                result, SWEEP_CONCENTRATION_LEVEL
            )
        grid_path = out_dir / f"{stem}_sweep.png"
        save_png(np.hstack(panels), grid_path)
        manifest["sweep_grid"] = grid_path

    with _stage("write-manifest"):
        manifest_path = out_dir / f"{stem}_sweep_manifest.txt"
        _write_manifest(manifest, manifest_path)
    manifest["manifest"] = manifest_path
    return {key: str(value) for key, value in manifest.items()}


def single_cam_overlay(
    export: ExpertExport,
    image,
    output_dir,
    opacity: float = DEFAULT_OPACITY,
) -> dict[str, str]:
    """Overlay one expert's activation map on the image (no kernel)."""
    if not 0.0 <= opacity <= 1.0:
        raise ParameterError(f"opacity must lie in [0, 1], got {opacity!r}")
    with _stage("load-image"):
        base = load_image(image)
    with _stage("load-export"):
        cam = export.load_cam()
    out_dir = Path(output_dir)
    stem = Path(image).stem
    path = out_dir / f"{stem}_cam.png"
    with _stage("render-outputs"):
        out_dir.mkdir(parents=True, exist_ok=True)
        save_png(_overlay(base, cam.map, opacity), path)
    return {"cam_overlay": str(path)}
