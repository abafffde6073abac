"""Sensing matrices: 2-bit block states, the wire codec, aggregation, and
synthetic perception of scenario ground truth.

A vehicle's knowledge of its zone is an m x n matrix with one 2-bit state per
block, ``b1 b0``: bit b1 says whether the block was sensed, b0 carries the
content. The four values are NO_OBJECT (10), OBJECT (11), OUT_OF_SENSING (00)
and UNCERTAIN (01, view blocked). With the default 20x20 zone the matrix
serializes to exactly 100 bytes.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .grid import (
    GridConfig,
    OutOfZoneError,
    Position,
    ZoneIndex,
    block_centers,
    locate_block,
    locate_zone,
)


class BlockState(IntEnum):
    """Per-block state; the enum value is the wire bit pair (b1 << 1) | b0."""

    OUT_OF_SENSING = 0b00
    UNCERTAIN = 0b01
    NO_OBJECT = 0b10
    OBJECT = 0b11

    @property
    def sensed(self) -> bool:
        """The b1 bit: whether the block was actually observed."""
        return bool(self.value >> 1)


class PayloadSizeError(ValueError):
    """Encoded payload length does not match the matrix dimensions."""


class IncompatibleMatrixError(ValueError):
    """Two matrices cannot be aggregated (zone or shape mismatch)."""


@dataclass(eq=False)
class SensingMatrix:
    """One vehicle's 2-bit block states for a zone.

    ``cells[row, col]`` holds the state of block (col, row); row 0 is the
    zone's southernmost block row.
    """

    zone: ZoneIndex
    cells: np.ndarray

    def __post_init__(self) -> None:
        cells = np.asarray(self.cells, dtype=np.uint8)
        if cells.ndim != 2:
            raise ValueError("cells must be a 2-D array")
        if cells.size and cells.max() > 3:
            raise ValueError("cell values must fit in two bits")
        self.cells = cells

    @property
    def m(self) -> int:
        return self.cells.shape[0]

    @property
    def n(self) -> int:
        return self.cells.shape[1]

    def copy(self) -> "SensingMatrix":
        return SensingMatrix(self.zone, self.cells.copy())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SensingMatrix):
            return NotImplemented
        return (
            self.zone == other.zone
            and self.cells.shape == other.cells.shape
            and bool(np.array_equal(self.cells, other.cells))
        )


def encode(mat: SensingMatrix) -> bytes:
    """Pack a matrix into ceil(m*n/4) bytes.

    Cells go out in row-major order starting at the south-west corner; within
    each byte earlier cells occupy the higher-order bit pairs, and within a
    pair b1 is the more significant bit. With the default 20x20 zone this is
    exactly 100 bytes; when the cell count is not a multiple of four the last
    byte is padded with zero bits so equal matrices still encode to equal
    bytes.
    """
    flat = mat.cells.reshape(-1)
    if flat.size % 4:
        flat = np.concatenate([flat, np.zeros(-flat.size % 4, dtype=np.uint8)])
    quads = flat.reshape(-1, 4)
    packed = (quads[:, 0] << 6) | (quads[:, 1] << 4) | (quads[:, 2] << 2) | quads[:, 3]
    return packed.astype(np.uint8).tobytes()


def decode(data: bytes, zone: ZoneIndex, m: int, n: int) -> SensingMatrix:
    """Inverse of encode; raises PayloadSizeError on a wrong-length payload."""
    expected = (m * n + 3) // 4
    data = bytes(data)
    if len(data) != expected:
        raise PayloadSizeError(
            f"expected {expected} bytes for a {m}x{n} matrix, got {len(data)}"
        )
    b = np.frombuffer(data, dtype=np.uint8)
    cells = np.empty((b.size, 4), dtype=np.uint8)
    cells[:, 0] = b >> 6
    cells[:, 1] = (b >> 4) & 3
    cells[:, 2] = (b >> 2) & 3
    cells[:, 3] = b & 3
    return SensingMatrix(zone, cells.reshape(-1)[: m * n].reshape(m, n))


def _merge_table() -> np.ndarray:
    """4x4 lookup: table[current, received] -> merged cell value."""
    table = np.empty((4, 4), dtype=np.uint8)
    for cur in range(4):
        for rec in range(4):
            if rec >> 1 == 0:
                out = cur  # received cell carries no information
            elif cur >> 1 == 0:
                out = rec  # fill an unsensed cell with the sensed report
            elif cur != rec:
                out = BlockState.UNCERTAIN  # sensed but contradictory
            else:
                out = cur
            table[cur, rec] = out
    return table


_MERGE = _merge_table()


def aggregate(
    current: SensingMatrix, received: SensingMatrix
) -> tuple[SensingMatrix, bool]:
    """Element-wise merge of a received matrix into the current one.

    Per cell: a sensed received value fills an unsensed current cell;
    two sensed values that disagree reset the cell to UNCERTAIN; everything
    else is left alone. Returns the merged matrix and whether any cell's
    value actually differs from before.
    """
    if current.zone != received.zone:
        raise IncompatibleMatrixError(
            f"zone mismatch: {tuple(current.zone)} vs {tuple(received.zone)}"
        )
    if current.cells.shape != received.cells.shape:
        raise IncompatibleMatrixError(
            f"shape mismatch: {current.cells.shape} vs {received.cells.shape}"
        )
    merged = _MERGE[current.cells, received.cells]
    changed = not np.array_equal(merged, current.cells)
    return SensingMatrix(current.zone, merged), changed


def has_uncertain(mat: SensingMatrix) -> bool:
    """True iff any cell is UNCERTAIN (01)."""
    return bool(np.any(mat.cells == BlockState.UNCERTAIN))


@dataclass(frozen=True)
class GroundTruth:
    """Scenario world: static disc objects plus the vehicles themselves.

    objects: ((x, y) position, radius) pairs.
    vehicles: (id, (x, y) position, radius) triples. Vehicles are both
    detectable objects and occluders for everyone else's view. A radius of 0
    means a point vehicle that never occludes.
    """

    objects: tuple[tuple[Position, float], ...] = ()
    vehicles: tuple[tuple[int, Position, float], ...] = ()

    def __post_init__(self) -> None:
        if any(r <= 0 for _, r in self.objects):
            raise ValueError("object radii must be positive")
        if any(r < 0 for _, _, r in self.vehicles):
            raise ValueError("vehicle radii must be non-negative")


def _occluded_mask(
    viewer: np.ndarray, centers: np.ndarray, occluders: list[tuple[Position, float]]
) -> np.ndarray:
    """Which block centers are hidden behind an occluder disc.

    A disc blocks the view of a center c when the viewer-to-c segment passes
    within the disc radius strictly between its endpoints: both the viewer
    and c itself must lie outside the disc, so an object never shadows the
    block it occupies.
    """
    occluded = np.zeros(len(centers), dtype=bool)
    seg = centers - viewer
    seg_len2 = np.einsum("ij,ij->i", seg, seg)
    safe_len2 = np.where(seg_len2 == 0, 1.0, seg_len2)
    for pos, radius in occluders:
        if radius <= 0:
            continue
        q = np.asarray(pos, dtype=float)
        w = q - viewer
        if w @ w <= radius * radius:
            continue  # viewer inside the disc: no clean shadow
        t = np.clip((seg @ w) / safe_len2, 0.0, 1.0)
        closest = viewer + t[:, None] * seg
        d2 = ((q - closest) ** 2).sum(axis=1)
        target_clear = ((centers - q) ** 2).sum(axis=1) > radius * radius
        occluded |= (d2 <= radius * radius) & target_clear & (seg_len2 > 0)
    return occluded


def perceive(
    self_id: int,
    self_pos: Position,
    world: GroundTruth,
    zone: ZoneIndex,
    cfg: GridConfig,
    sensing_range: float,
) -> SensingMatrix:
    """Synthesize the matrix a vehicle at self_pos perceives for its zone.

    Per block center: beyond sensing_range -> OUT_OF_SENSING; hidden behind an
    occluder (any object, or any vehicle other than self) -> UNCERTAIN; else
    OBJECT when some object or vehicle center lies in the block, NO_OBJECT
    otherwise. The vehicle's own block reports OBJECT.
    """
    if locate_zone(self_pos, cfg) != zone:
        raise OutOfZoneError(f"vehicle {self_id} at {self_pos!r} is outside zone {tuple(zone)}")
    n = cfg.blocks_per_side
    centers = block_centers(zone, cfg)
    viewer = np.asarray(self_pos, dtype=float)
    dist = np.hypot(centers[:, 0] - viewer[0], centers[:, 1] - viewer[1])

    occluders = list(world.objects)
    occluders += [(pos, r) for vid, pos, r in world.vehicles if vid != self_id]

    cells = np.full(n * n, int(BlockState.NO_OBJECT), dtype=np.uint8)
    occupied = np.zeros(n * n, dtype=bool)
    for pos in [p for p, _ in world.objects] + [p for _, p, _ in world.vehicles]:
        if locate_zone(pos, cfg) == zone:
            col, row = locate_block(pos, zone, cfg)
            occupied[row * n + col] = True
    cells[occupied] = BlockState.OBJECT
    cells[_occluded_mask(viewer, centers, occluders)] = BlockState.UNCERTAIN
    cells[dist > sensing_range] = BlockState.OUT_OF_SENSING
    return SensingMatrix(zone, cells.reshape(n, n))


def format_matrix(mat: SensingMatrix) -> str:
    """Render a matrix as m rows of two-bit tokens, northernmost row first."""
    lines = []
    for row in mat.cells[::-1]:
        lines.append(" ".join(f"{v >> 1}{v & 1}" for v in row))
    return "\n".join(lines)
