"""Exception hierarchy for the generator pipeline."""


class ArtgenError(Exception):
    """Base class for all generator errors."""


# -- grammar / tree growth ------------------------------------------------

class GrammarError(ArtgenError):
    pass


class GrammarDiverges(GrammarError):
    """Tree growth exceeded the node or depth cap instead of terminating."""


class LabelUnknown(GrammarError):
    """A rule references a label that is not declared in the grammar."""


# -- layout / geometry -----------------------------------------------------

class LayoutError(ArtgenError):
    pass


class LabelNotInTemplate(LayoutError):
    pass


class SlotOverflow(LayoutError):
    """Requested child count cannot fit the slot's repetition axis."""


class MeshError(ArtgenError):
    pass


class DegenerateProfile(MeshError):
    """Self-intersecting or zero-area profile passed to a mesh builder."""


class EmptyMesh(MeshError):
    pass


class NonManifold(MeshError):
    """An edge with a number of incident faces other than two."""


class NoAssetForLabel(ArtgenError):
    pass


# -- joints ------------------------------------------------------------------

class JointError(ArtgenError):
    pass


class MissingRule(JointError):
    def __init__(self, parent_label: str, child_label: str):
        super().__init__(f"no joint rule for edge {parent_label} -> {child_label}")
        self.parent_label = parent_label
        self.child_label = child_label


class InfeasibleLimits(JointError):
    """The geometric feasibility interval for a joint's limits is empty."""


class ValueOutOfLimits(JointError):
    pass


class UnexpandedCompound(JointError):
    """A compound joint reached a stage that only accepts simple joints."""


# -- plausibility ------------------------------------------------------------

class Unfixable(ArtgenError):
    """Ground clearance cannot be repaired (rest pose already penetrates)."""


# -- export / parse ----------------------------------------------------------

class ExportError(ArtgenError):
    pass


class PathNotWritable(ExportError):
    pass


class ParseError(ArtgenError):
    pass


class MalformedXml(ParseError):
    pass


class MultipleRoots(ParseError):
    pass


class CycleDetected(ParseError):
    pass


class UnsupportedJointType(ParseError):
    pass


# -- metrics -------------------------------------------------------------

class TreeTooLarge(ArtgenError):
    """Tree exceeds the documented 10 000 node cap for edit distance."""


class EmptyCorpus(ArtgenError):
    pass


class EmptyPalette(ArtgenError):
    pass


# -- configuration ---------------------------------------------------------

class ConfigError(ArtgenError):
    pass
