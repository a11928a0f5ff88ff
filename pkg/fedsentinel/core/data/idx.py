# Copyright 2026 fedsentinel contributors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#     http://www.apache.org/licenses/LICENSE-2.0
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Reader/writer for the IDX format used by the MNIST distribution.

Layout (big endian):
    u8[2]  | zero
    u8     | element type (0x08 = unsigned byte)
    u8     | number of dimensions
    i32[n] | dimension sizes
    u8[]   | data (row-major)
"""

import gzip
import logging
import struct
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from fedsentinel.exceptions import DataFormatError

from .dataset import Dataset

logger = logging.getLogger(__name__)

IDX_IMAGES_MAGIC = 0x00000803
IDX_LABELS_MAGIC = 0x00000801


def _read_bytes(path: Path) -> bytes:
    if path.suffix == ".gz":
        with gzip.open(path, "rb") as f:
            return f.read()
    return path.read_bytes()


def _parse_idx(path: Path, expected_magic: int) -> np.ndarray:
    raw = _read_bytes(path)
    if len(raw) < 4:
        raise DataFormatError(f"'{path}' is truncated: missing IDX magic number")
    (magic,) = struct.unpack(">I", raw[:4])
    if magic != expected_magic:
        raise DataFormatError(f"'{path}' has magic number 0x{magic:08x}, expected 0x{expected_magic:08x}")

    num_dims = magic & 0xFF
    header_size = 4 + 4 * num_dims
    if len(raw) < header_size:
        raise DataFormatError(f"'{path}' is truncated: incomplete IDX header")
    dims = struct.unpack(f">{num_dims}I", raw[4:header_size])

    expected_size = int(np.prod(dims))
    payload = raw[header_size:]
    if len(payload) < expected_size:
        raise DataFormatError(f"'{path}' is truncated: expected {expected_size} data bytes, found {len(payload)}")
    if len(payload) > expected_size:
        logger.warning("'%s' has %d trailing bytes after the IDX payload", path, len(payload) - expected_size)
    return np.frombuffer(payload, dtype=np.uint8, count=expected_size).reshape(dims)


def load_idx(
    images_path: Union[str, Path], labels_path: Union[str, Path], num_classes: Optional[int] = None
) -> Dataset:
    """Loads an IDX image/label pair into a Dataset.

    Pixel bytes are scaled by 1/255 and every image is flattened to one feature row. ``.gz`` files are
    decompressed transparently. ``num_classes`` defaults to the largest label + 1.

    Raises:
        DataFormatError: bad magic number, truncated file or image/label count mismatch. The message
            names the offending file.
    """
    images_path = Path(images_path)
    labels_path = Path(labels_path)

    images = _parse_idx(images_path, IDX_IMAGES_MAGIC)
    labels = _parse_idx(labels_path, IDX_LABELS_MAGIC)
    if images.shape[0] != labels.shape[0]:
        raise DataFormatError(
            f"'{images_path}' holds {images.shape[0]} images but '{labels_path}' holds {labels.shape[0]} labels"
        )

    features = images.reshape(images.shape[0], -1).astype(np.float32) / np.float32(255.0)
    labels = labels.astype(np.int64)
    if num_classes is None:
        num_classes = int(labels.max()) + 1 if labels.size else 1
    logger.debug("Loaded %d samples with %d features from '%s'", labels.size, features.shape[1], images_path)
    return Dataset(features, labels, num_classes)


def write_idx(
    ds: Dataset,
    images_path: Union[str, Path],
    labels_path: Union[str, Path],
    image_shape: Optional[Sequence[int]] = None,
) -> Tuple[Path, Path]:
    """Writes ``ds`` as an IDX pair; features are quantized as round(255 * x).

    ``image_shape`` is the (rows, columns) of one sample and defaults to a single row of ``num_features``.
    """
    images_path = Path(images_path)
    labels_path = Path(labels_path)
    shape = tuple(int(s) for s in image_shape) if image_shape else (1, ds.num_features)
    if len(shape) != 2 or shape[0] * shape[1] != ds.num_features:
        raise DataFormatError(f"Image shape {shape} does not match {ds.num_features} features")
    if ds.num_classes > 256:
        raise DataFormatError(f"IDX labels are single bytes; {ds.num_classes} classes do not fit")

    pixels = np.rint(np.clip(ds.features, 0.0, 1.0) * 255.0).astype(np.uint8)
    image_dims = (len(ds), *shape)
    image_header = struct.pack(">IIII", IDX_IMAGES_MAGIC, *image_dims)
    label_header = struct.pack(">II", IDX_LABELS_MAGIC, len(ds))

    images_path.write_bytes(image_header + pixels.tobytes())
    labels_path.write_bytes(label_header + ds.labels.astype(np.uint8).tobytes())
    return images_path, labels_path
