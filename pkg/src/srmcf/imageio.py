"""Grayscale image/mask file I/O (8-bit PGM and PNG) and config parsing."""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, ImageIOError
from .flow import FlowParams
from .pipelines import ConcentrationSchedule, PipelineConfig

_LUMA = (0.299, 0.587, 0.114)


def _load_pgm(path: Path) -> np.ndarray:
    data = path.read_bytes()
    if data[:2] not in (b"P2", b"P5"):
        raise ImageIOError(f"{path}: not a PGM file (missing P2/P5 magic)")
    binary = data[:2] == b"P5"

    # header: magic, width, height, maxval; '#' comments allowed
    tokens: list[bytes] = []
    pos = 2
    while len(tokens) < 3:
        m = re.compile(rb"\s*(#[^\n]*\n|\S+)").match(data, pos)
        if m is None:
            raise ImageIOError(f"{path}: truncated PGM header")
        pos = m.end()
        if not m.group(1).startswith(b"#"):
            tokens.append(m.group(1))
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError:
        raise ImageIOError(f"{path}: malformed PGM header") from None
    if maxval <= 0 or maxval > 255:
        raise ImageIOError(f"{path}: unsupported PGM bit depth (maxval={maxval})")

    if binary:
        pos += 1  # single whitespace after maxval
        raw = data[pos : pos + width * height]
        if len(raw) < width * height:
            raise ImageIOError(f"{path}: truncated PGM pixel data")
        pixels = np.frombuffer(raw, dtype=np.uint8).astype(float)
    else:
        try:
            pixels = np.array(data[pos:].split(), dtype=float)
        except ValueError:
            raise ImageIOError(f"{path}: malformed ASCII PGM pixel data") from None
        if pixels.size != width * height:
            raise ImageIOError(
                f"{path}: expected {width * height} pixels, found {pixels.size}"
            )
    return (pixels / float(maxval)).reshape(height, width).clip(0.0, 1.0)


def _load_png(path: Path) -> np.ndarray:
    try:
        from PIL import Image as PILImage

        with PILImage.open(path) as im:
            mode = im.mode
            if mode in ("L", "RGB", "RGBA", "LA", "P"):
                if mode == "P":
                    im = im.convert("RGB")
                    mode = "RGB"
                arr = np.asarray(im, dtype=float)
            else:
                raise ImageIOError(f"{path}: unsupported PNG mode {mode!r}")
    except ImageIOError:
        raise
    except Exception as exc:
        raise ImageIOError(f"{path}: cannot read PNG ({exc})") from exc
    if arr.ndim == 2:
        return arr / 255.0
    r, g, b = arr[..., 0], arr[..., 1], arr[..., 2]
    if arr.shape[-1] in (3, 4):
        return (_LUMA[0] * r + _LUMA[1] * g + _LUMA[2] * b) / 255.0
    if arr.shape[-1] == 2:  # LA
        return arr[..., 0] / 255.0
    raise ImageIOError(f"{path}: unsupported PNG channel count {arr.shape[-1]}")


def load_image(path) -> np.ndarray:
    """Load an 8-bit grayscale PGM (P2/P5) or grayscale/RGB PNG into [0, 1]."""
    path = Path(path)
    if not path.is_file():
        raise ImageIOError(f"{path}: file not found")
    suffix = path.suffix.lower()
    if suffix == ".png":
        return _load_png(path)
    if suffix in (".pgm", ".ppm"):
        return _load_pgm(path)
    # fall back on content sniffing
    head = path.read_bytes()[:2]
    if head in (b"P2", b"P5"):
        return _load_pgm(path)
    if head == b"\x89P":
        return _load_png(path)
    raise ImageIOError(f"{path}: unsupported image format")


def save_image(img: np.ndarray, path) -> None:
    """Write v -> round(255*clamp(v, 0, 1)) as PGM P5 or PNG by extension."""
    path = Path(path)
    img = np.asarray(img, dtype=float)
    if img.ndim != 2:
        raise ImageIOError(f"{path}: expected a 2D image, got shape {img.shape}")
    data = np.rint(255.0 * np.clip(img, 0.0, 1.0)).astype(np.uint8)
    try:
        if path.suffix.lower() == ".png":
            from PIL import Image as PILImage

            PILImage.fromarray(data, mode="L").save(path)
        else:
            header = f"P5\n{img.shape[1]} {img.shape[0]}\n255\n".encode()
            path.write_bytes(header + data.tobytes())
    except OSError as exc:
        raise ImageIOError(f"{path}: cannot write image ({exc})") from exc


def load_mask(path, img_shape: tuple[int, int]) -> np.ndarray:
    """Load a mask image; pixel value > 127 (8-bit) means corrupted."""
    arr = load_image(path)
    if arr.shape != tuple(img_shape):
        raise ConfigurationError(
            f"mask dimensions {arr.shape} do not match image {tuple(img_shape)}"
        )
    return np.rint(arr * 255.0) > 127


_CONFIG_KEYS = (
    "ntheta",
    "tau",
    "epsilon",
    "sigma",
    "dt",
    "steps",
    "sigma_smooth",
    "sigma_theta",
    "concentration_every",
    "concentration_power",
    "projection",
)


def _parse_kv(line: str, values: dict, origin: str) -> None:
    if "=" not in line:
        raise ConfigurationError(f"{origin}: expected key=value, got {line!r}")
    key, _, raw = line.partition("=")
    key, raw = key.strip(), raw.strip()
    if key not in _CONFIG_KEYS:
        raise ConfigurationError(f"{origin}: unknown key in {line!r}")
    try:
        if key in ("ntheta", "steps", "concentration_every"):
            values[key] = int(raw)
        elif key == "projection":
            values[key] = raw
        elif key == "dt":
            values[key] = None if raw == "auto" else float(raw)
        else:
            values[key] = float(raw)
    except ValueError:
        raise ConfigurationError(f"{origin}: cannot parse value in {line!r}") from None


def parse_config(path=None, overrides: list[str] | None = None) -> PipelineConfig:
    """Build a PipelineConfig from a key=value file plus CLI overrides.

    Overrides beat file values.  Unknown keys, unparsable values, and
    invariant violations raise ConfigurationError quoting the offending line.
    """
    values: dict = {}
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise ImageIOError(f"{path}: config file not found")
        for n, line in enumerate(path.read_text().splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            _parse_kv(line, values, f"{path}:{n}")
    for item in overrides or []:
        _parse_kv(item, values, "--set")

    try:
        params = FlowParams(
            tau=values.get("tau", 1e-4),
            eps=values.get("epsilon", 0.0),
            sigma=values.get("sigma", 0.0),
            dt=values.get("dt", None),
            steps=values.get("steps", None),
        )
        every = values.get("concentration_every", 25)
        conc = (
            None
            if every == 0
            else ConcentrationSchedule(
                every_n=every, power=values.get("concentration_power", 2.0)
            )
        )
        return PipelineConfig(
            ntheta=values.get("ntheta", 32),
            sigma_s=values.get("sigma_smooth", 1.5),
            sigma_theta=values.get("sigma_theta", None),
            flow=params,
            concentration=conc,
            projection=values.get("projection", "weighted_mean"),
        )
    except ConfigurationError:
        raise
