"""Walk through the data model: zones, blocks, 2-bit states, the wire codec,
and matrix aggregation.

Run with:  python demos/matrix_walkthrough.py
"""

import numpy as np

from zonecast import (
    BlockState,
    GridConfig,
    SensingMatrix,
    aggregate,
    decode,
    encode,
    format_matrix,
    locate_block,
    locate_zone,
)

# --- The map grid -----------------------------------------------------------
# The world is tiled into 100 m zones, each split into 5 m blocks. A position
# maps to a zone, and within that zone to a (col, row) block; row 0 is the
# southernmost block row.

grid = GridConfig()
pos = (147.3, 62.9)
zone = locate_zone(pos, grid)
block = locate_block(pos, zone, grid)
print(f"position {pos} -> zone {tuple(zone)}, block (col={block.col}, row={block.row})")
print(f"a zone holds {grid.blocks_per_side}x{grid.blocks_per_side} blocks\n")

# --- Block states -----------------------------------------------------------
# Each block carries two bits, b1 b0. Bit b1 says "was this block sensed";
# b0 carries the content when it was.

for state in BlockState:
    print(f"  {state.value:02b}  {state.name:<15} sensed={state.sensed}")
print()

# --- A small matrix and its wire form ----------------------------------------
# Four cells pack into one byte, earlier cells in the high-order bits. A full
# 20x20 zone therefore costs exactly 100 bytes on air.

OUT, UNC, FREE, OBJ = BlockState
tiny = SensingMatrix(zone, np.array([[OBJ, FREE], [UNC, OUT]], dtype=np.uint8))
wire = encode(tiny)
print("2x2 matrix on the wire:", wire.hex(), f"({len(wire)} byte)")
print("decodes back to:\n" + format_matrix(decode(wire, zone, 2, 2)))

full = SensingMatrix(zone, np.full((20, 20), FREE, dtype=np.uint8))
print(f"\nall-NO_OBJECT 20x20 -> {len(encode(full))} bytes, "
      f"first byte 0x{encode(full)[:1].hex()}\n")

# --- Aggregation -------------------------------------------------------------
# Merging a received matrix fills unsensed cells, keeps agreements, and
# downgrades OBJECT-vs-NO_OBJECT contradictions to UNCERTAIN.

mine = SensingMatrix(zone, np.array([[OBJ, OUT], [UNC, FREE]], dtype=np.uint8))
theirs = SensingMatrix(zone, np.array([[OBJ, FREE], [FREE, OBJ]], dtype=np.uint8))
merged, changed = aggregate(mine, theirs)
print("mine:\n" + format_matrix(mine))
print("theirs:\n" + format_matrix(theirs))
print(f"merged (changed={changed}):\n" + format_matrix(merged))
print("\nnote the top-right cell as printed: NO_OBJECT vs OBJECT became")
print("UNCERTAIN (01), while every unsensed cell adopted the sensed report.")
