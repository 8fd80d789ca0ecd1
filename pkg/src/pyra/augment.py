"""Dataset splitting, grid-pyramid expansion and classic augmentation.

Expansion materializes one record per (train record, grid level): the
mask is grid-converted at that level and written to disk together with
the shared checkerboard rasters, producing a self-contained dataset
directory. All randomized steps are pure functions of their seed, and
per-record work is independent, so any worker count yields the same
bytes.
"""
from __future__ import annotations

import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
from PIL import Image
from scipy import ndimage

from . import io
from .errors import ValidationError
from .gridify import gridify_mask
from .grids import checkerboard, pyramid_specs
from .types import DatasetManifest, GridSpec, SampleRecord
from .validation import check_image, check_mask, check_same_shape


@dataclass(frozen=True)
class ClassicAugmentParams:
    """Parameters for the three classic baseline augmentations.

    ``rotation_deg`` and ``translate_frac`` are symmetric half-ranges
    (draws come from [-x, +x]); ``scale`` is an explicit (low, high)
    range. Dropout holes are squares with side ``dropout_size_frac`` of
    the image width; noise_sigma is in 8-bit sample units.
    """

    rotation_deg: float = 15.0
    scale: tuple[float, float] = (0.9, 1.1)
    translate_frac: float = 0.05
    dropout_holes: int = 4
    dropout_size_frac: float = 0.10
    noise_sigma: float = 10.0

    def __post_init__(self):
        if self.rotation_deg < 0:
            raise ValidationError("rotation_deg must be >= 0")
        lo, hi = self.scale
        if not (0 < lo <= hi):
            raise ValidationError(f"scale range must satisfy 0 < low <= high, got {self.scale}")
        if self.translate_frac < 0:
            raise ValidationError("translate_frac must be >= 0")
        if self.dropout_holes < 0:
            raise ValidationError("dropout_holes must be >= 0")
        if not 0.0 < self.dropout_size_frac < 1.0:
            raise ValidationError("dropout_size_frac must lie in (0, 1)")
        if self.noise_sigma < 0:
            raise ValidationError("noise_sigma must be >= 0")


def derive_seed(seed: int, *tokens: str) -> int:
    """Stable 64-bit per-item seed derived from a global seed and tokens."""
    h = hashlib.blake2b(digest_size=8)
    h.update(str(seed).encode())
    for t in tokens:
        h.update(b"\x00")
        h.update(t.encode())
    return int.from_bytes(h.digest(), "big")


def split_dataset(manifest: DatasetManifest, seed: int, n_train: int) -> DatasetManifest:
    """Assign train/test splits: exactly n_train records become train.

    The partition depends only on (seed, sorted record ids), never on the
    record order in the manifest.
    """
    if n_train > len(manifest.records):
        raise ValidationError(
            f"n_train {n_train} exceeds record count {len(manifest.records)}"
        )
    if n_train < 0:
        raise ValidationError("n_train must be >= 0")
    ids = sorted(r.id for r in manifest.records)
    order = np.random.default_rng(seed).permutation(len(ids))
    train_ids = {ids[i] for i in order[:n_train]}
    new_records = [
        replace(rec, split="train" if rec.id in train_ids else "test")
        for rec in manifest.records
    ]
    return manifest.with_records(new_records)


def _sample_affine(rng: np.random.Generator, params: ClassicAugmentParams, width: int):
    angle = rng.uniform(-params.rotation_deg, params.rotation_deg)
    scale = rng.uniform(params.scale[0], params.scale[1])
    tx = rng.uniform(-params.translate_frac, params.translate_frac) * width
    ty = rng.uniform(-params.translate_frac, params.translate_frac) * width
    return angle, scale, (ty, tx)


def _warp(arr: np.ndarray, angle: float, scale: float, shift: tuple[float, float], order: int) -> np.ndarray:
    """Rotate/scale about the image center then translate, inverse-mapped
    with constant black padding."""
    h, w = arr.shape[:2]
    theta = np.deg2rad(angle)
    rot = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
    fwd = rot * scale
    inv = np.linalg.inv(fwd)
    center = np.array([(h - 1) / 2.0, (w - 1) / 2.0])
    offset = center - inv @ (center + np.array(shift))

    def warp_plane(plane: np.ndarray) -> np.ndarray:
        # grid-constant keeps coordinates an epsilon outside the lattice
        # in-bounds, so right-angle rotations stay exact permutations
        return ndimage.affine_transform(
            plane.astype(np.float64), inv, offset=offset, order=order, mode="grid-constant", cval=0.0
        )

    if arr.ndim == 2:
        return warp_plane(arr)
    return np.stack([warp_plane(arr[:, :, ch]) for ch in range(arr.shape[2])], axis=2)


def classic_augment(
    image: np.ndarray,
    mask: np.ndarray,
    params: ClassicAugmentParams,
    seed: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Apply affine + coarse dropout + additive Gaussian noise.

    The affine transform (sampled from params using seed) hits image and
    mask identically (bilinear vs nearest resampling); dropout and noise
    touch the image only. Identity parameters return the inputs byte-exact.
    """
    img = check_image(image, name="image")
    m = check_mask(mask, name="mask")
    check_same_shape(img, m, "image and mask")
    rng = np.random.default_rng(np.uint64(seed))
    h, w = m.shape

    angle, scale, shift = _sample_affine(rng, params, w)
    if angle != 0.0 or scale != 1.0 or shift != (0.0, 0.0):
        warped_img = _warp(img, angle, scale, shift, order=1)
        img = np.clip(np.floor(warped_img + 0.5), 0, 255).astype(np.uint8)
        m = _warp(m.astype(np.uint8), angle, scale, shift, order=0) > 0.5

    if params.dropout_holes > 0:
        side = max(1, int(round(params.dropout_size_frac * w)))
        img = img.copy()
        for _ in range(params.dropout_holes):
            r0 = int(rng.integers(0, max(1, h - side + 1)))
            c0 = int(rng.integers(0, max(1, w - side + 1)))
            img[r0 : r0 + side, c0 : c0 + side, :] = 0

    if params.noise_sigma > 0:
        noise = rng.normal(0.0, params.noise_sigma, size=img.shape)
        img = np.clip(np.floor(img.astype(np.float64) + noise + 0.5), 0, 255).astype(np.uint8)

    return img, m


def _load_image_resized(path: Path, size: int) -> np.ndarray:
    img = io.load_image(path)
    if img.shape[2] == 1:
        img = np.repeat(img, 3, axis=2)
    elif img.shape[2] == 4:
        img = img[:, :, :3]
    if img.shape[:2] != (size, size):
        pil = Image.fromarray(img, mode="RGB").resize((size, size), Image.BILINEAR)
        img = np.asarray(pil, dtype=np.uint8)
    return img


def _load_mask_resized(path: Path, size: int) -> np.ndarray:
    mask = io.load_mask(path)
    if mask.shape != (size, size):
        pil = Image.fromarray(mask.astype(np.uint8) * 255, mode="L").resize((size, size), Image.NEAREST)
        mask = np.asarray(pil, dtype=np.uint8) > 127
    return mask


def expand_dataset(
    manifest: DatasetManifest,
    grid_ns,
    src_dir,
    out_dir,
    *,
    classic: ClassicAugmentParams | None = None,
    seed: int = 42,
    threads: int | None = None,
) -> DatasetManifest:
    """Expand train records across the grid pyramid into out_dir.

    Every train record becomes one record per grid level with id
    ``<origid>@g<n>``, a grid-converted mask under gridded/ and a pointer
    to the shared checkerboard raster under grids/. Test records pass
    through annotated with the full-resolution level. When ``classic`` is
    given, each train record's image/mask pair is classically augmented
    (seeded per record) before gridding. Source images and masks are
    materialized under out_dir (resized to the manifest size if needed),
    so the result is self-contained.
    """
    size = manifest.image_size
    specs = pyramid_specs(size, grid_ns)
    src_dir = Path(src_dir)
    out_dir = Path(out_dir)
    for sub in ("images", "masks", "gridded", "grids"):
        io.ensure_dir(out_dir / sub)

    grid_paths: dict[int, str] = {}
    for spec in specs + [GridSpec(size, size)]:
        if spec.n in grid_paths:
            continue
        rel = f"grids/grid_n{spec.n}.png"
        io.save_image(checkerboard(spec), out_dir / rel)
        grid_paths[spec.n] = rel

    expanded_ids = set()
    for rec in manifest.train_records():
        for spec in specs:
            derived = f"{rec.id}@g{spec.n}"
            if derived in expanded_ids:
                raise ValidationError(f"derived id collision: {derived!r}")
            expanded_ids.add(derived)

    def process(rec: SampleRecord) -> list[SampleRecord]:
        img = _load_image_resized(src_dir / rec.image_path, size)
        mask = _load_mask_resized(src_dir / rec.mask_path, size)
        if rec.split == "train" and classic is not None:
            img, mask = classic_augment(img, mask, classic, derive_seed(seed, rec.id))
        image_rel = f"images/{rec.id}.png"
        mask_rel = f"masks/{rec.id}.png"
        io.save_image(img, out_dir / image_rel)
        io.save_mask(mask, out_dir / mask_rel)
        if rec.split == "test":
            return [
                replace(
                    rec,
                    image_path=image_rel,
                    mask_path=mask_rel,
                    grid_n=size,
                    gridded_mask_path=mask_rel,
                    grid_image_path=grid_paths[size],
                )
            ]
        out = []
        for spec in specs:
            gridded_rel = f"gridded/{rec.id}@g{spec.n}.png"
            io.save_mask(gridify_mask(mask, spec), out_dir / gridded_rel)
            out.append(
                SampleRecord(
                    id=f"{rec.id}@g{spec.n}",
                    image_path=image_rel,
                    mask_path=mask_rel,
                    split="train",
                    grid_n=spec.n,
                    gridded_mask_path=gridded_rel,
                    grid_image_path=grid_paths[spec.n],
                )
            )
        return out

    workers = threads if threads and threads > 0 else 1
    if workers == 1:
        batches = [process(rec) for rec in manifest.records]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(process, manifest.records))

    records = [rec for batch in batches for rec in batch]
    records.sort(key=lambda r: (r.id.rsplit("@g", 1)[0], r.grid_n or 0))
    return DatasetManifest(image_size=size, grid_sizes=tuple(s.n for s in specs), records=records)
