"""Surface-code syndrome decoding toolkit.

Parses shot and detector-error-model files, flattens multi-round syndromes
into per-node feature graphs, trains a GATv2 dual-head decoder (optionally
supervised by matching-derived edge probabilities), and provides an exact
minimum-weight perfect matching reference decoder.
"""

from .errors import (
    CapacityError,
    ConfigError,
    DataFormatError,
    LayoutError,
    ShapeError,
    ToolkitError,
    UnsupportedModelError,
)
from .formats import (
    DetectorModel,
    Mechanism,
    ShotTable,
    format_dem,
    parse_01,
    parse_b8,
    parse_dem,
    write_01,
    write_b8,
)

__all__ = [
    "CapacityError",
    "ConfigError",
    "DataFormatError",
    "DetectorModel",
    "LayoutError",
    "Mechanism",
    "ShapeError",
    "ShotTable",
    "ToolkitError",
    "UnsupportedModelError",
    "format_dem",
    "parse_01",
    "parse_b8",
    "parse_dem",
    "write_01",
    "write_b8",
]
