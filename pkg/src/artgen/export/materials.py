"""Scalar material parameters and their material-library mapping.

Materials are reduced to four scalars (base color, roughness, specular,
noise amplitude). Sampling picks a palette entry uniformly, draws each scalar
uniformly from the entry's range, then perturbs the base color channelwise by
`noise_amplitude * uniform(-1, 1)`, clamped to [0, 1]; amplitude zero leaves
the color bit-exact. Draw order per sample: entry index, r, g, b, roughness,
specular, noise_amplitude, then three perturbation draws.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import EmptyPalette, PathNotWritable
from ..rng import SeededStream


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


@dataclass
class MaterialParams:
    base_color: np.ndarray  # rgb in [0,1]^3
    roughness: float
    specular: float
    noise_amplitude: float

    def __post_init__(self) -> None:
        self.base_color = np.asarray(self.base_color, dtype=np.float64)

    def check(self) -> None:
        if np.any(self.base_color < 0) or np.any(self.base_color > 1):
            raise ValueError("base_color outside [0,1]^3")
        for name in ("roughness", "specular", "noise_amplitude"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"{name} {v} outside [0,1]")


@dataclass(frozen=True)
class MaterialRange:
    """Per-channel [lo, hi] ranges for one palette entry."""

    r: tuple[float, float]
    g: tuple[float, float]
    b: tuple[float, float]
    roughness: tuple[float, float]
    specular: tuple[float, float]
    noise: tuple[float, float] = (0.0, 0.0)


PALETTES: dict[str, list[MaterialRange]] = {
    "wood": [
        MaterialRange((0.45, 0.62), (0.28, 0.4), (0.12, 0.2), (0.5, 0.75), (0.1, 0.3), (0.0, 0.06)),
        MaterialRange((0.3, 0.42), (0.18, 0.26), (0.08, 0.14), (0.55, 0.8), (0.05, 0.2), (0.0, 0.06)),
        MaterialRange((0.6, 0.75), (0.45, 0.58), (0.3, 0.4), (0.45, 0.7), (0.1, 0.25), (0.0, 0.05)),
    ],
    "painted": [
        MaterialRange((0.85, 0.95), (0.85, 0.95), (0.82, 0.92), (0.25, 0.45), (0.3, 0.5), (0.0, 0.03)),
        MaterialRange((0.15, 0.3), (0.2, 0.35), (0.3, 0.5), (0.3, 0.5), (0.3, 0.5), (0.0, 0.04)),
        MaterialRange((0.55, 0.7), (0.1, 0.2), (0.12, 0.22), (0.3, 0.5), (0.3, 0.5), (0.0, 0.04)),
    ],
    "metal": [
        MaterialRange((0.6, 0.75), (0.6, 0.75), (0.62, 0.78), (0.15, 0.35), (0.6, 0.9), (0.0, 0.02)),
        MaterialRange((0.2, 0.3), (0.2, 0.3), (0.22, 0.33), (0.2, 0.4), (0.5, 0.8), (0.0, 0.02)),
    ],
    "plastic": [
        MaterialRange((0.9, 0.98), (0.9, 0.98), (0.88, 0.96), (0.3, 0.55), (0.35, 0.55), (0.0, 0.02)),
        MaterialRange((0.05, 0.15), (0.05, 0.15), (0.05, 0.15), (0.3, 0.55), (0.35, 0.55), (0.0, 0.02)),
    ],
    "fabric": [
        MaterialRange((0.7, 0.85), (0.65, 0.8), (0.5, 0.65), (0.7, 0.95), (0.02, 0.12), (0.0, 0.08)),
    ],
}


def sample_material(rng: SeededStream, palette: list[MaterialRange]) -> MaterialParams:
    """Draw one material from a palette (see module docstring for draw order)."""
    if not palette:
        raise EmptyPalette("palette has no entries")
    entry = palette[rng.randint(0, len(palette) - 1)]
    color = np.array([rng.uniform(*entry.r), rng.uniform(*entry.g), rng.uniform(*entry.b)])
    roughness = rng.uniform(*entry.roughness)
    specular = rng.uniform(*entry.specular)
    noise = rng.uniform(*entry.noise)
    perturbed = color + noise * np.array([rng.uniform(-1.0, 1.0) for _ in range(3)])
    params = MaterialParams(np.clip(perturbed, 0.0, 1.0), roughness, specular, noise)
    params.check()
    return params


def write_mtl(params: MaterialParams, name: str, path: str | Path) -> Path:
    """Companion material-library file. Mapping: Kd = base color, Ks =
    specular gray, Ns = 1000 * (1 - roughness)^2, plus a `Pr` PBR roughness
    line for loaders that understand the extension.
    """
    path = Path(path)
    ns = 1000.0 * (1.0 - params.roughness) ** 2
    lines = [
        f"newmtl {name}",
        f"Kd {_fmt(params.base_color[0])} {_fmt(params.base_color[1])} {_fmt(params.base_color[2])}",
        f"Ks {_fmt(params.specular)} {_fmt(params.specular)} {_fmt(params.specular)}",
        f"Ns {_fmt(ns)}",
        f"Pr {_fmt(params.roughness)}",
        "d 1",
        "illum 2",
    ]
    try:
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as e:
        raise PathNotWritable(f"cannot write {path}: {e}") from e
    return path
