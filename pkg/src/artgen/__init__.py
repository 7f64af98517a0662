"""Procedural generation of articulated objects.

Grows kinematic trees from category grammars, fills them with parametric or
retrieved meshes, synthesizes joints from the assembled geometry, repairs
physical-plausibility problems, and exports URDF + OBJ bundles. Corpus-level
diversity metrics (joint counts, tree edit distance) live in `artgen.metrics`.
"""

__version__ = "0.1.0"
