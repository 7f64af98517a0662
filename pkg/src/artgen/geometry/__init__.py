"""Geometry: mesh kernel, per-node layout, and the retrieval asset library."""

from .mesh import (  # noqa: F401
    Aabb,
    Mesh,
    build_box,
    build_lathe,
    build_prism,
    compute_aabb,
    recompute_normals,
    signed_volume,
)
from .layout import LayoutTemplate, SlotRule, assign_bounding_boxes, load_layout, parse_layout  # noqa: F401
from .assets import (  # noqa: F401
    AlignmentResult,
    AssetEntry,
    AssetLibrary,
    align_support_points,
    retrieve_part,
)
