"""Rendering scalar maps onto images.

Images are plain ``numpy`` arrays of shape (height, width, 3), dtype
uint8, row-major RGB. Heat maps are rank-2 float arrays with values in
[0, 1]. The chain that turns a low-resolution activation map into an
overlay is:

    upsample_bilinear -> to_heatmap -> colorize -> composite

Bilinear resampling uses the half-pixel-center convention: output pixel
``i`` samples source coordinate ``(i + 0.5) * src/dst - 0.5``, clamped to
the source extent. That matches mainstream image-resize semantics and is
pinned down here so independent reimplementations agree cell for cell.

Colorization goes through a fixed 256-entry jet lookup table (:data:`JET_LUT`)
built once from the anchor points below; identical inputs therefore
produce byte-identical RGB output on every platform.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import ImageFormatError, ParameterError, ShapeError

# Piecewise-linear channel anchors (position, intensity) of the classic
# jet map: dark blue -> blue -> cyan -> green -> yellow -> red -> dark red.
JET_ANCHORS = {
    "red": ((0.0, 0.0), (0.35, 0.0), (0.66, 1.0), (0.89, 1.0), (1.0, 0.5)),
    "green": ((0.0, 0.0), (0.125, 0.0), (0.375, 1.0), (0.64, 1.0), (0.91, 0.0), (1.0, 0.0)),
    "blue": ((0.0, 0.5), (0.11, 1.0), (0.34, 1.0), (0.65, 0.0), (1.0, 0.0)),
}


def _build_jet_lut() -> np.ndarray:
    xs = np.linspace(0.0, 1.0, 256)
    channels = []
    for name in ("red", "green", "blue"):
        anchors = JET_ANCHORS[name]
        pos = [p for p, _ in anchors]
        val = [v for _, v in anchors]
        channels.append(np.interp(xs, pos, val))
    lut = np.rint(np.stack(channels, axis=1) * 255.0).astype(np.uint8)
    lut.setflags(write=False)
    return lut


JET_LUT = _build_jet_lut()


def upsample_bilinear(map2d, target_h: int, target_w: int) -> np.ndarray:
    """Resample a rank-2 map to (target_h, target_w) with bilinear
    interpolation under the half-pixel-center convention.

    Returns float64. Output values are convex combinations of input
    cells, so they stay within [min(map), max(map)]; resampling to the
    same size reproduces the input exactly.
    """
    src = np.asarray(map2d, dtype=np.float64)
    if src.ndim != 2:
        raise ShapeError(f"expected a rank-2 map, got shape {src.shape}")
    if src.shape[0] < 1 or src.shape[1] < 1:
        raise ShapeError(f"source extents must be >= 1, got {src.shape}")
    if target_h < 1 or target_w < 1:
        raise ParameterError(f"target extents must be >= 1, got {(target_h, target_w)}")

    ys = _sample_coords(src.shape[0], target_h)
    xs = _sample_coords(src.shape[1], target_w)
    y0 = np.floor(ys).astype(np.intp)
    x0 = np.floor(xs).astype(np.intp)
    y1 = np.minimum(y0 + 1, src.shape[0] - 1)
    x1 = np.minimum(x0 + 1, src.shape[1] - 1)
    ty = (ys - y0)[:, None]
    tx = (xs - x0)[None, :]

    top = src[np.ix_(y0, x0)]
    top = top + tx * (src[np.ix_(y0, x1)] - top)
    bottom = src[np.ix_(y1, x0)]
    bottom = bottom + tx * (src[np.ix_(y1, x1)] - bottom)
    return top + ty * (bottom - top)


def _sample_coords(n_src: int, n_dst: int) -> np.ndarray:
    coords = (np.arange(n_dst, dtype=np.float64) + 0.5) * (n_src / n_dst) - 0.5
    return np.clip(coords, 0.0, float(n_src - 1))


def to_heatmap(map2d) -> np.ndarray:
    """Min-max normalize a finite rank-2 map into [0, 1].

    A constant map normalizes to all zeros: a featureless surface should
    render as "no signal" rather than saturate.
    """
    data = np.asarray(map2d, dtype=np.float64)
    if data.ndim != 2:
        raise ShapeError(f"expected a rank-2 map, got shape {data.shape}")
    if not np.isfinite(data).all():
        raise ParameterError("map contains non-finite values")
    lo = data.min()
    hi = data.max()
    if hi == lo:
        return np.zeros_like(data)
    return np.clip((data - lo) / (hi - lo), 0.0, 1.0)


def colorize(heatmap) -> np.ndarray:
    """Map a [0, 1] heat map through :data:`JET_LUT` to an RGB image.

    Each value selects entry ``rint(value * 255)``; output is uint8
    (H, W, 3) and byte-exact for identical input.
    """
    data = np.asarray(heatmap, dtype=np.float64)
    if data.ndim != 2:
        raise ShapeError(f"expected a rank-2 heat map, got shape {data.shape}")
    if not np.isfinite(data).all() or data.min() < 0.0 or data.max() > 1.0:
        raise ParameterError("heat map values must be finite and within [0, 1]")
    index = np.rint(data * 255.0).astype(np.intp)
    return JET_LUT[index]


def composite(base, heat, opacity: float = 0.5) -> np.ndarray:
    """Blend two equally sized RGB images: ``opacity`` of ``heat`` over
    ``1 - opacity`` of ``base``, rounded half-up per channel."""
    base = _check_rgb(base, "base")
    heat = _check_rgb(heat, "heat")
    if base.shape != heat.shape:
        raise ShapeError(
            f"image sizes differ: base is {base.shape[1]}x{base.shape[0]}, "
            f"heat is {heat.shape[1]}x{heat.shape[0]}"
        )
    if not 0.0 <= opacity <= 1.0:
        raise ParameterError(f"opacity must lie in [0, 1], got {opacity!r}")
    blended = opacity * heat.astype(np.float64) + (1.0 - opacity) * base.astype(np.float64)
    return np.floor(blended + 0.5).astype(np.uint8)


def _check_rgb(image, label: str) -> np.ndarray:
    data = np.asarray(image)
    if data.ndim != 3 or data.shape[2] != 3 or data.dtype != np.uint8:
        raise ShapeError(f"{label}: expected a (H, W, 3) uint8 image, got {data.dtype} {data.shape}")
    return data


def load_image(path) -> np.ndarray:
    """Decode a PNG (or any common raster file) into (H, W, 3) uint8 RGB.

    Grayscale inputs are expanded by channel replication. A file that
    exists but cannot be decoded raises :class:`ImageFormatError`;
    missing files and permission problems propagate as ``OSError``.
    """
    path = Path(path)
    try:
        with Image.open(path) as img:
            rgb = img.convert("RGB")
            return np.asarray(rgb, dtype=np.uint8)
    except (FileNotFoundError, PermissionError, IsADirectoryError):
        raise
    except (UnidentifiedImageError, OSError, SyntaxError, ValueError) as exc:
        raise ImageFormatError(f"{path}: cannot decode image ({exc})") from exc


def save_png(image, path) -> None:
    """Encode an (H, W, 3) uint8 RGB array as a PNG file."""
    data = _check_rgb(image, "image")
    Image.fromarray(data, mode="RGB").save(str(path), format="PNG")
