"""PNG and manifest I/O.

File formats:

* 8-bit PNG for images (L/RGB/RGBA) and binary masks (L, 0/255).
* 16-bit grayscale PNG for unit-interval maps: stored value ``u``
  represents ``u / 65535``; writes round half-up. Per-pixel std maps use
  the same encoding (their values never exceed 0.5).
* Manifests are UTF-8 JSON Lines: a header object
  ``{"image_size": S, "grid_sizes": [...]}`` followed by one record
  object per line. Writing is canonical (sorted keys, no trailing
  whitespace), so read -> write round-trips byte-stable.
"""
from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import CorruptImageError, ManifestError, UnsupportedImageError, ValidationError
from .types import DatasetManifest, SampleRecord
from .validation import check_image, check_mask, check_prob_map

MAP_SCALE = 65535  # 16-bit full scale; real value = stored / MAP_SCALE

_MODE_CHANNELS = {"L": 1, "RGB": 3, "RGBA": 4}


def load_image(path) -> np.ndarray:
    """Decode an 8-bit PNG into a (H, W, C) uint8 array, C in {1, 3, 4}.

    Raises FileNotFoundError for a missing file, UnsupportedImageError for
    depths/modes outside the supported set, CorruptImageError for streams
    that fail to decode.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such image: {path}")
    try:
        with Image.open(path) as im:
            mode = im.mode
            if mode not in _MODE_CHANNELS:
                raise UnsupportedImageError(
                    f"{path}: unsupported image mode {mode!r} (need 8-bit L/RGB/RGBA)"
                )
            im.load()
            arr = np.asarray(im, dtype=np.uint8)
    except UnidentifiedImageError as exc:
        raise CorruptImageError(f"{path}: cannot decode image stream ({exc})") from exc
    except (UnsupportedImageError, FileNotFoundError):
        raise
    except (OSError, SyntaxError, ValueError) as exc:
        raise CorruptImageError(f"{path}: corrupt image stream ({exc})") from exc
    if arr.ndim == 2:
        arr = arr[:, :, np.newaxis]
    return check_image(arr, name=str(path))


def save_image(arr, path) -> None:
    """Encode a uint8 raster ((H, W), (H, W, 1), (H, W, 3) or (H, W, 4))
    as PNG without any ancillary metadata."""
    a = check_image(arr, name="image to save")
    if a.shape[2] == 1:
        im = Image.fromarray(a[:, :, 0], mode="L")
    elif a.shape[2] == 3:
        im = Image.fromarray(a, mode="RGB")
    else:
        im = Image.fromarray(a, mode="RGBA")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    im.save(path, format="PNG")


def mask_from_raster(raster, threshold: int = 127) -> np.ndarray:
    """Binarize an 8-bit raster: pixel true iff sample > threshold.

    Accepts 1-channel rasters directly; 3-channel rasters must carry the
    same value on every channel (near-binary mask PNGs saved as RGB), and
    channel 0 is used. 4-channel input is rejected.
    """
    a = check_image(raster, name="mask raster")
    if a.shape[2] == 4:
        raise ValidationError("mask rasters with an alpha channel are not supported")
    if a.shape[2] == 3:
        if not (np.array_equal(a[:, :, 0], a[:, :, 1]) and np.array_equal(a[:, :, 0], a[:, :, 2])):
            raise ValidationError("3-channel mask raster has unequal channels")
    if not 0 <= threshold <= 255:
        raise ValidationError(f"threshold must be an 8-bit value, got {threshold}")
    return a[:, :, 0] > threshold


def load_mask(path, threshold: int = 127) -> np.ndarray:
    return mask_from_raster(load_image(path), threshold=threshold)


def save_mask(mask, path) -> None:
    m = check_mask(mask, name="mask to save")
    save_image(m.astype(np.uint8) * 255, path)


def encode_unit_map(values) -> np.ndarray:
    """Quantize a [0, 1] map to uint16, rounding half-up."""
    v = check_prob_map(values, name="map to encode")
    return np.floor(v * MAP_SCALE + 0.5).astype(np.uint16)


def decode_unit_map(stored) -> np.ndarray:
    u = np.asarray(stored)
    if u.dtype not in (np.uint16, np.int32, np.uint8):
        raise ValidationError(f"expected 16-bit samples, got {u.dtype}")
    u = u.astype(np.float64)
    if u.min() < 0 or u.max() > MAP_SCALE:
        raise ValidationError("stored map samples outside the 16-bit range")
    return u / MAP_SCALE


def save_map(values, path) -> None:
    """Write a unit-interval map as 16-bit grayscale PNG."""
    u = encode_unit_map(values)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(u).save(path, format="PNG")


def load_map(path) -> np.ndarray:
    """Read a 16-bit grayscale PNG back into a float64 [0, 1] map."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such map: {path}")
    try:
        with Image.open(path) as im:
            if im.mode not in ("I;16", "I"):
                raise UnsupportedImageError(f"{path}: expected 16-bit grayscale, got mode {im.mode!r}")
            im.load()
            arr = np.asarray(im)
    except UnidentifiedImageError as exc:
        raise CorruptImageError(f"{path}: cannot decode image stream ({exc})") from exc
    except (UnsupportedImageError, FileNotFoundError):
        raise
    except (OSError, SyntaxError, ValueError) as exc:
        raise CorruptImageError(f"{path}: corrupt image stream ({exc})") from exc
    return decode_unit_map(arr)


def png_bit_depth(path) -> int:
    """Peek at a PNG's sample bit depth (8 or 16) without full decode."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such file: {path}")
    try:
        with Image.open(path) as im:
            if im.mode in ("I;16", "I"):
                return 16
            if im.mode in _MODE_CHANNELS:
                return 8
            raise UnsupportedImageError(f"{path}: unsupported image mode {im.mode!r}")
    except UnidentifiedImageError as exc:
        raise CorruptImageError(f"{path}: cannot decode image stream ({exc})") from exc


def _dump_line(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(", ", ": "))


def write_manifest(manifest: DatasetManifest, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [_dump_line({"image_size": manifest.image_size, "grid_sizes": list(manifest.grid_sizes)})]
    lines.extend(_dump_line(rec.to_json_dict()) for rec in manifest.records)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_manifest(path) -> DatasetManifest:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such manifest: {path}")
    text = path.read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise ManifestError("empty manifest (missing header line)", line=1)

    def parse(line_no: int, raw: str) -> dict:
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ManifestError(f"malformed JSON ({exc.msg})", line=line_no) from exc
        if not isinstance(obj, dict):
            raise ManifestError("expected a JSON object", line=line_no)
        return obj

    header = parse(1, lines[0])
    if set(header) != {"image_size", "grid_sizes"}:
        raise ManifestError(
            f"header must carry exactly image_size and grid_sizes, got {sorted(header)}", line=1
        )
    try:
        image_size = header["image_size"]
        grid_sizes = tuple(header["grid_sizes"])
        skeleton = DatasetManifest(image_size=image_size, grid_sizes=grid_sizes)
    except (TypeError, ValidationError) as exc:
        raise ManifestError(str(exc), line=1) from exc

    records: list[SampleRecord] = []
    seen_ids: set[str] = set()
    for i, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        obj = parse(i, raw)
        try:
            rec = SampleRecord.from_json_dict(obj)
            if rec.id in seen_ids:
                raise ValidationError(f"duplicate record id {rec.id!r}")
            if rec.grid_n is not None and image_size % rec.grid_n != 0:
                raise ValidationError(
                    f"record {rec.id!r}: grid_n {rec.grid_n} does not divide image_size {image_size}"
                )
            seen_ids.add(rec.id)
        except ValidationError as exc:
            raise ManifestError(str(exc), line=i) from exc
        records.append(rec)
    return skeleton.with_records(records)


def ensure_dir(path) -> Path:
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p


def relative_to(base, path) -> str:
    """Manifest-friendly relative path (POSIX separators)."""
    return os.path.relpath(Path(path), Path(base)).replace(os.sep, "/")
