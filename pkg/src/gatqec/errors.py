"""Exception types shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for every error this package raises deliberately."""


class DataFormatError(ToolkitError):
    """Malformed b8/01/DEM input, or a value outside its valid range."""


class LayoutError(ToolkitError):
    """Detector coordinates cannot be projected onto a spatial layout."""


class ShapeError(ToolkitError):
    """Array or tensor dimensions are inconsistent."""


class ConfigError(ToolkitError):
    """A run configuration is invalid or incompatible with the data."""


class UnsupportedModelError(ToolkitError):
    """The error model violates a decoder precondition (e.g. hyperedges)."""


class CapacityError(ToolkitError):
    """An exact algorithm was asked to exceed its instance-size bound."""
