"""Float32 tensors and their bit-exact interchange file format.

Activations, class weights, and precomputed activation maps travel between
tools as NPY v1.0 files restricted to a single layout:

* bytes 0-5   magic ``\\x93NUMPY``
* bytes 6-7   version ``\\x01\\x00``
* bytes 8-9   little-endian uint16 header length
* header      ASCII dict ``{'descr': '<f4', 'fortran_order': False,
  'shape': (...), }`` space-padded so the total header (magic included) is
  a multiple of 64 bytes and terminated by ``\\n``
* payload     raw little-endian IEEE-754 binary32 values in C order

Only this layout is written. Reading is strict about everything that
affects the decoded values: dtype must be ``<f4``, the layout must be
C order, the payload length must match the declared shape exactly, and
every value must be finite. Rank is limited to 1..3 (vectors, maps, and
stacks of maps) with all extents >= 1.

In memory a tensor is a plain ``numpy.ndarray``; :class:`FeatureStack`
and :class:`ClassWeights` are thin wrappers that pin down the shapes the
activation-map math expects.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    NonFiniteValueError,
    NpyFormatError,
    ParameterError,
    ShapeError,
    UnsupportedDtypeError,
)

MAGIC = b"\x93NUMPY"
VERSION = b"\x01\x00"
HEADER_ALIGN = 64
DTYPE_DESCR = "<f4"
MAX_RANK = 3

_HEADER_KEYS = {"descr", "fortran_order", "shape"}


def _check_shape(shape: tuple, origin: str) -> None:
    if len(shape) < 1 or len(shape) > MAX_RANK:
        raise ShapeError(f"{origin}: rank {len(shape)} outside supported range 1..{MAX_RANK}")
    for extent in shape:
        if isinstance(extent, bool) or not isinstance(extent, (int, np.integer)) or extent < 1:
            raise ShapeError(f"{origin}: invalid extent {extent!r} in shape {shape}")


def _check_finite(data: np.ndarray, origin: str) -> None:
    finite = np.isfinite(data)
    if not finite.all():
        index = int(np.flatnonzero(~finite.ravel())[0])
        raise NonFiniteValueError(
            f"{origin}: non-finite value {data.ravel()[index]!r} at flat index {index}"
        )


def load_tensor(path) -> np.ndarray:
    """Read one float32 tensor from ``path``.

    Returns a C-contiguous float32 array of rank 1..3. Raises
    :class:`NpyFormatError` (with the byte offset of the problem) for any
    container damage, :class:`UnsupportedDtypeError` for dtypes other than
    ``<f4``, and :class:`NonFiniteValueError` naming the flat index of the
    first NaN/Inf. I/O failures propagate as ``OSError``.
    """
    path = Path(path)
    raw = path.read_bytes()
    if len(raw) < 10:
        raise NpyFormatError(f"{path}: file is {len(raw)} bytes, shorter than the 10-byte preamble")
    if raw[:6] != MAGIC:
        raise NpyFormatError(f"{path}: bad magic {raw[:6]!r} at byte 0")
    if raw[6:8] != VERSION:
        raise NpyFormatError(f"{path}: unsupported version {raw[6:8]!r} at byte 6; only 1.0 is accepted")
    header_len = int.from_bytes(raw[8:10], "little")
    header_end = 10 + header_len
    if len(raw) < header_end:
        raise NpyFormatError(
            f"{path}: header length {header_len} declared at byte 8 overruns the file"
        )
    header = raw[10:header_end]
    if not header.endswith(b"\n"):
        raise NpyFormatError(f"{path}: header is not newline-terminated at byte {header_end - 1}")
    try:
        meta = ast.literal_eval(header.decode("ascii"))
    except (UnicodeDecodeError, ValueError, SyntaxError) as exc:
        raise NpyFormatError(f"{path}: unparseable header at byte 10 ({exc})") from exc
    if not isinstance(meta, dict) or set(meta) != _HEADER_KEYS:
        raise NpyFormatError(f"{path}: header at byte 10 must be a dict with keys {sorted(_HEADER_KEYS)}")
    if meta["descr"] != DTYPE_DESCR:
        raise UnsupportedDtypeError(
            f"{path}: dtype {meta['descr']!r}; only {DTYPE_DESCR!r} is supported"
        )
    if meta["fortran_order"] is not False:
        raise NpyFormatError(f"{path}: fortran_order={meta['fortran_order']!r}; only C order is supported")
    shape = meta["shape"]
    if not isinstance(shape, tuple):
        raise NpyFormatError(f"{path}: shape entry {shape!r} is not a tuple")
    _check_shape(shape, str(path))
    expected = 4 * int(np.prod(shape, dtype=np.int64))
    payload = raw[header_end:]
    if len(payload) != expected:
        raise NpyFormatError(
            f"{path}: payload of {len(payload)} bytes at byte {header_end} does not match "
            f"shape {shape} ({expected} bytes expected)"
        )
    data = np.frombuffer(payload, dtype=DTYPE_DESCR).reshape(shape).copy()
    _check_finite(data, str(path))
    return data


def save_tensor(tensor, path) -> None:
    """Write ``tensor`` to ``path`` in the interchange layout.

    The array is stored as little-endian float32 in C order (other float
    dtypes are cast). ``load_tensor(path)`` returns a bit-identical copy
    of what was written.
    """
    data = np.ascontiguousarray(tensor, dtype=DTYPE_DESCR)
    _check_shape(data.shape, "save_tensor")
    _check_finite(data, "save_tensor")
    Path(path).write_bytes(_encode_header(data.shape) + data.tobytes())


def _encode_header(shape: tuple[int, ...]) -> bytes:
    meta = "{'descr': '%s', 'fortran_order': False, 'shape': %s, }" % (
        DTYPE_DESCR,
        str(tuple(int(e) for e in shape)),
    )
    # pad with spaces so magic+version+length+header is a multiple of 64
    unpadded = 10 + len(meta) + 1
    padding = (-unpadded) % HEADER_ALIGN
    header = (meta + " " * padding + "\n").encode("ascii")
    return MAGIC + VERSION + len(header).to_bytes(2, "little") + header


def max_value(tensor) -> float:
    """Maximum element of a non-empty tensor, as a Python float."""
    data = np.asarray(tensor)
    if data.size == 0:
        raise ShapeError("max_value: tensor is empty")
    return float(data.max())


@dataclass(frozen=True)
class FeatureStack:
    """C feature maps of H x W activations from a model's last
    convolutional layer, stored as one (C, H, W) array.

    ``model_id`` is a free-form label naming the expert network the
    activations came from; it is carried through to derived maps.
    """

    maps: np.ndarray
    model_id: str = ""

    def __post_init__(self):
        data = np.asarray(self.maps)
        if data.ndim != 3:
            raise ShapeError(f"feature stack must have rank 3, got shape {data.shape}")
        _check_shape(data.shape, "FeatureStack")
        _check_finite(data, "FeatureStack")
        object.__setattr__(self, "maps", data)

    @property
    def channels(self) -> int:
        return self.maps.shape[0]

    @property
    def height(self) -> int:
        return self.maps.shape[1]

    @property
    def width(self) -> int:
        return self.maps.shape[2]

    @classmethod
    def from_file(cls, path, model_id: str = "") -> "FeatureStack":
        return cls(load_tensor(path), model_id=model_id)


@dataclass(frozen=True)
class ClassWeights:
    """Length-C weight vector connecting pooled features to one output
    class of the classifier head."""

    weights: np.ndarray
    class_index: int = 0

    def __post_init__(self):
        data = np.asarray(self.weights)
        if data.ndim != 1:
            raise ShapeError(f"class weights must have rank 1, got shape {data.shape}")
        _check_shape(data.shape, "ClassWeights")
        _check_finite(data, "ClassWeights")
        if self.class_index < 0:
            raise ParameterError(f"class_index must be >= 0, got {self.class_index}")
        object.__setattr__(self, "weights", data)

    def __len__(self) -> int:
        return self.weights.shape[0]

    @classmethod
    def from_file(cls, path, class_index: int = 0) -> "ClassWeights":
        return cls(load_tensor(path), class_index=class_index)
