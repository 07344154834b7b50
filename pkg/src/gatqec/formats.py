"""Readers and writers for the three on-disk formats the pipeline consumes.

Shot data comes in two interchangeable encodings:

* ``b8`` -- bit-packed binary. Each shot occupies ``ceil(n_bits / 8)`` bytes
  (the shot stride), least-significant bit first within each byte. Padding
  bits beyond ``n_bits`` are ignored on read and written as zero.
* ``01`` -- ASCII. One shot per newline-terminated line of ``'0'``/``'1'``
  characters; the trailing newline is optional.

Error models use the DEM text format: one instruction per line, ``#``
comments, whitespace-separated targets. Supported instructions are
``error(p) D... L...``, ``detector[(coords)] D<i>``,
``logical_observable L<j>`` and ``shift_detectors[(coords)] k``.
``repeat`` blocks are rejected rather than expanded.

All parsers are pure functions and every returned object is immutable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import DataFormatError


class ShotTable:
    """Immutable bit matrix with one row per shot.

    Depending on context the columns are detection events (one per detector)
    or observable flips (one per logical observable).
    """

    def __init__(self, bits: np.ndarray | list) -> None:
        arr = np.ascontiguousarray(np.asarray(bits, dtype=np.uint8))
        if arr.ndim != 2:
            raise DataFormatError(f"shot table must be 2-D, got shape {arr.shape}")
        if arr.size and arr.max() > 1:
            raise DataFormatError("shot table entries must be 0 or 1")
        arr.flags.writeable = False
        self.bits = arr

    @property
    def n_shots(self) -> int:
        return self.bits.shape[0]

    @property
    def n_bits(self) -> int:
        return self.bits.shape[1]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ShotTable):
            return NotImplemented
        return self.bits.shape == other.bits.shape and bool(
            np.array_equal(self.bits, other.bits)
        )

    def __repr__(self) -> str:
        return f"ShotTable(n_shots={self.n_shots}, n_bits={self.n_bits})"

    @classmethod
    def empty(cls, n_bits: int) -> "ShotTable":
        return cls(np.zeros((0, n_bits), dtype=np.uint8))


@dataclass(frozen=True, order=True)
class Mechanism:
    """One independent error channel: fires with ``probability`` and flips
    every listed detector and observable."""

    probability: float
    detectors: tuple[int, ...]
    observables: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 0.0 <= self.probability <= 1.0:
            raise DataFormatError(
                f"mechanism probability {self.probability} outside [0, 1]"
            )
        if tuple(sorted(set(self.detectors))) != self.detectors:
            raise DataFormatError("mechanism detector ids must be sorted and unique")
        if tuple(sorted(set(self.observables))) != self.observables:
            raise DataFormatError("mechanism observable ids must be sorted and unique")


@dataclass(frozen=True)
class DetectorModel:
    """A parsed detector error model.

    ``detectors`` keeps coordinate declarations in file order; ids are
    absolute (all ``shift_detectors`` offsets applied). A declaration without
    coordinates is stored with an empty tuple. The last coordinate of a
    declared vector is interpreted as time by the graph layer.
    """

    n_detectors: int
    n_observables: int
    detectors: tuple[tuple[int, tuple[float, ...]], ...]
    mechanisms: tuple[Mechanism, ...]

    def __post_init__(self) -> None:
        for mech in self.mechanisms:
            if any(d < 0 or d >= self.n_detectors for d in mech.detectors):
                raise DataFormatError(
                    f"mechanism references detector outside [0, {self.n_detectors})"
                )
            if any(o < 0 or o >= self.n_observables for o in mech.observables):
                raise DataFormatError(
                    f"mechanism references observable outside [0, {self.n_observables})"
                )
        for det_id, _ in self.detectors:
            if det_id < 0 or det_id >= self.n_detectors:
                raise DataFormatError(
                    f"detector D{det_id} outside [0, {self.n_detectors})"
                )


def _shot_stride(n_bits: int) -> int:
    return (n_bits + 7) // 8


def parse_b8(data: bytes, n_bits: int) -> ShotTable:
    """Decode bit-packed shots; ``n_bits`` is the number of bits per shot."""
    if n_bits < 1:
        raise DataFormatError(f"n_bits must be >= 1, got {n_bits}")
    stride = _shot_stride(n_bits)
    if len(data) % stride != 0:
        expected = (len(data) // stride + 1) * stride
        raise DataFormatError(
            f"b8 input length {len(data)} is not a multiple of the "
            f"{stride}-byte shot stride (nearest valid lengths "
            f"{len(data) - len(data) % stride} or {expected})"
        )
    raw = np.frombuffer(data, dtype=np.uint8)
    if raw.size == 0:
        return ShotTable.empty(n_bits)
    rows = raw.reshape(-1, stride)
    bits = np.unpackbits(rows, axis=1, count=n_bits, bitorder="little")
    return ShotTable(bits)


def write_b8(table: ShotTable) -> bytes:
    """Inverse of :func:`parse_b8`; padding bits are written as zero."""
    if table.n_shots == 0:
        return b""
    packed = np.packbits(table.bits, axis=1, bitorder="little")
    return packed.tobytes()


def parse_01(text: str) -> ShotTable:
    """Decode ASCII shots, one line per shot. Blank lines are skipped."""
    rows: list[str] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        bad = set(line) - {"0", "1"}
        if bad:
            raise DataFormatError(
                f"01 input line {lineno}: unexpected characters {sorted(bad)}"
            )
        if rows and len(line) != len(rows[0]):
            raise DataFormatError(
                f"01 input line {lineno}: length {len(line)} differs from "
                f"first line length {len(rows[0])}"
            )
        rows.append(line)
    if not rows:
        return ShotTable.empty(0)
    bits = np.array([[c == "1" for c in row] for row in rows], dtype=np.uint8)
    return ShotTable(bits)


def write_01(table: ShotTable) -> str:
    """Inverse of :func:`parse_01`."""
    if table.n_shots == 0:
        return ""
    lines = ["".join("1" if b else "0" for b in row) for row in table.bits]
    return "\n".join(lines) + "\n"


_INSTRUCTION = re.compile(r"^([A-Za-z_]\w*)\s*(?:\(([^()]*)\))?\s*(.*)$")


def _parse_args(arg_text: str | None, lineno: int) -> tuple[float, ...]:
    if arg_text is None or not arg_text.strip():
        return ()
    out = []
    for piece in arg_text.split(","):
        try:
            out.append(float(piece))
        except ValueError:
            raise DataFormatError(
                f"DEM line {lineno}: cannot parse argument {piece.strip()!r}"
            ) from None
    return tuple(out)


def _xor_targets(ids: list[int]) -> tuple[int, ...]:
    # Duplicate targets within one instruction cancel pairwise.
    keep: set[int] = set()
    for i in ids:
        keep.symmetric_difference_update({i})
    return tuple(sorted(keep))


def parse_dem(text: str) -> DetectorModel:
    """Parse DEM text into a :class:`DetectorModel` with absolute ids."""
    id_offset = 0
    coord_offset: list[float] = []
    detectors: list[tuple[int, tuple[float, ...]]] = []
    declared: set[int] = set()
    mechanisms: list[Mechanism] = []
    max_det = -1
    max_obs = -1

    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("repeat") or line in ("{", "}"):
            raise DataFormatError(
                f"DEM line {lineno}: unsupported instruction 'repeat' "
                "(blocks must be written flat)"
            )
        match = _INSTRUCTION.match(line)
        if match is None:
            raise DataFormatError(f"DEM line {lineno}: cannot parse {line!r}")
        name, arg_text, target_text = match.groups()
        args = _parse_args(arg_text, lineno)
        targets = target_text.split()

        if name == "error":
            if len(args) != 1:
                raise DataFormatError(
                    f"DEM line {lineno}: error takes exactly one probability"
                )
            p = args[0]
            if not 0.0 <= p <= 1.0:
                raise DataFormatError(
                    f"DEM line {lineno}: probability {p} outside [0, 1]"
                )
            dets: list[int] = []
            obs: list[int] = []
            for tok in targets:
                if tok.startswith("D") and tok[1:].isdigit():
                    dets.append(int(tok[1:]) + id_offset)
                elif tok.startswith("L") and tok[1:].isdigit():
                    obs.append(int(tok[1:]))
                else:
                    raise DataFormatError(
                        f"DEM line {lineno}: unexpected error target {tok!r}"
                    )
            det_ids = _xor_targets(dets)
            obs_ids = _xor_targets(obs)
            if dets:
                max_det = max(max_det, max(dets))
            if obs:
                max_obs = max(max_obs, max(obs))
            mechanisms.append(Mechanism(p, det_ids, obs_ids))

        elif name == "detector":
            if len(targets) != 1 or not targets[0].startswith("D"):
                raise DataFormatError(
                    f"DEM line {lineno}: detector takes exactly one D target"
                )
            det_id = int(targets[0][1:]) + id_offset
            if det_id in declared:
                raise DataFormatError(
                    f"DEM line {lineno}: detector D{det_id} declared twice"
                )
            width = max(len(args), len(coord_offset))
            coords = tuple(
                (args[i] if i < len(args) else 0.0)
                + (coord_offset[i] if i < len(coord_offset) else 0.0)
                for i in range(width)
            )
            declared.add(det_id)
            detectors.append((det_id, coords))
            max_det = max(max_det, det_id)

        elif name == "logical_observable":
            if len(targets) != 1 or not targets[0].startswith("L"):
                raise DataFormatError(
                    f"DEM line {lineno}: logical_observable takes one L target"
                )
            max_obs = max(max_obs, int(targets[0][1:]))

        elif name == "shift_detectors":
            if len(targets) != 1:
                raise DataFormatError(
                    f"DEM line {lineno}: shift_detectors takes one integer target"
                )
            try:
                shift = int(targets[0])
            except ValueError:
                raise DataFormatError(
                    f"DEM line {lineno}: bad shift amount {targets[0]!r}"
                ) from None
            id_offset += shift
            if len(args) > len(coord_offset):
                coord_offset.extend([0.0] * (len(args) - len(coord_offset)))
            for i, a in enumerate(args):
                coord_offset[i] += a

        else:
            raise DataFormatError(
                f"DEM line {lineno}: unknown instruction {name!r}"
            )

    return DetectorModel(
        n_detectors=max_det + 1,
        n_observables=max_obs + 1,
        detectors=tuple(detectors),
        mechanisms=tuple(mechanisms),
    )


def format_dem(model: DetectorModel) -> str:
    """Debug printer; the output parses back to an equal model.

    Models assembled by hand with phantom trailing ids (ids beyond every
    declaration and mechanism reference) gain bare ``detector`` /
    ``logical_observable`` padding lines, which a re-parse then records.
    """
    lines: list[str] = []
    max_ref = -1
    for det_id, coords in model.detectors:
        max_ref = max(max_ref, det_id)
        if coords:
            coord_text = ", ".join(repr(c) for c in coords)
            lines.append(f"detector({coord_text}) D{det_id}")
        else:
            lines.append(f"detector D{det_id}")
    max_obs_ref = -1
    for mech in model.mechanisms:
        if mech.detectors:
            max_ref = max(max_ref, max(mech.detectors))
        if mech.observables:
            max_obs_ref = max(max_obs_ref, max(mech.observables))
    if model.n_detectors - 1 > max_ref:
        lines.append(f"detector D{model.n_detectors - 1}")
    if model.n_observables - 1 > max_obs_ref:
        lines.append(f"logical_observable L{model.n_observables - 1}")
    for mech in model.mechanisms:
        targets = [f"D{d}" for d in mech.detectors] + [
            f"L{o}" for o in mech.observables
        ]
        lines.append(f"error({mech.probability!r}) " + " ".join(targets))
    return "\n".join(lines) + ("\n" if lines else "")
