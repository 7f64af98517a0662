"""Deterministic serialization: URDF, OBJ + material files, bundle manifests."""

from ..objio import read_obj, write_obj  # noqa: F401
from .materials import MaterialParams, MaterialRange, sample_material, write_mtl, PALETTES  # noqa: F401
from .urdf import parse_urdf, parse_urdf_report, write_urdf  # noqa: F401
from .bundle import Bundle, write_manifest, read_manifest  # noqa: F401
