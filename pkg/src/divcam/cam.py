"""Class activation maps.

A class activation map is the weight-vector-weighted sum of a model's
final convolutional feature maps:

    cam[i, j] = sum_k weights[k] * features[k, i, j]

High cells mark the image regions most responsible for the class score.
The sum is accumulated in float64 and rounded to float32, the storage
precision of the interchange format (a 2048-term float32 sum would lose
precision otherwise). Classifier bias terms play no part in the map.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import NonPositiveMaxError, ShapeError
from .tensor_io import ClassWeights, FeatureStack, _check_finite, load_tensor


@dataclass(frozen=True)
class Cam:
    """One H x W activation map for a single predicted class.

    ``class_index`` records which classifier output the map explains and
    ``model_id`` which expert network produced it. Any float dtype is
    accepted; file-backed maps arrive as float32.
    """

    map: np.ndarray
    class_index: int = 0
    model_id: str = ""

    def __post_init__(self):
        data = np.asarray(self.map)
        if data.ndim != 2:
            raise ShapeError(f"activation map must have rank 2, got shape {data.shape}")
        if not np.issubdtype(data.dtype, np.floating):
            data = data.astype(np.float64)
        _check_finite(data, "Cam")
        object.__setattr__(self, "map", data)

    @property
    def shape(self) -> tuple[int, int]:
        return self.map.shape

    @classmethod
    def from_file(cls, path, class_index: int = 0, model_id: str = "") -> "Cam":
        data = load_tensor(path)
        if data.ndim != 2:
            raise ShapeError(f"{Path(path)}: expected a rank-2 map, got shape {data.shape}")
        return cls(data, class_index=class_index, model_id=model_id)


def compute_cam(features: FeatureStack, weights: ClassWeights) -> Cam:
    """Weighted sum of feature maps for one class.

    The weight vector length must equal the stack's channel count. The
    class index and model label of the inputs are carried through to the
    returned map.
    """
    if len(weights) != features.channels:
        raise ShapeError(
            f"weight vector has {len(weights)} entries but feature stack has "
            f"{features.channels} channels"
        )
    acc = np.tensordot(
        weights.weights.astype(np.float64),
        features.maps.astype(np.float64),
        axes=(0, 0),
    )
    return Cam(
        acc.astype(np.float32),
        class_index=weights.class_index,
        model_id=features.model_id,
    )


def normalize_by_max(cam: Cam) -> Cam:
    """Divide a map by its maximum so the peak becomes exactly 1.0.

    The maximum must be positive: a map whose peak is zero or negative
    carries no positive evidence for its class, and rescaling or shifting
    it would silently change what downstream amplification highlights, so
    this raises :class:`NonPositiveMaxError` instead.
    """
    peak = float(cam.map.max())
    if peak <= 0.0:
        raise NonPositiveMaxError(peak, source=cam.model_id or "activation map")
    scale = cam.map.dtype.type(peak)
    return Cam(cam.map / scale, class_index=cam.class_index, model_id=cam.model_id)
