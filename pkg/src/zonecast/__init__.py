"""zonecast: slotted broadcast sharing of per-zone sensing matrices.

Vehicles in a map zone perceive their surroundings into 2-bit block matrices,
then flood them over a synchronized slotted channel with capture effect and
constructive interference until every vehicle holds the identical matrix.
"""

from .channel import (
    COLLISION,
    DELIVERED,
    SILENCE,
    ChannelConfig,
    DegenerateGeometryError,
    InvalidSlotError,
    Outcome,
    Packet,
    Transmission,
    received_power,
    resolve_slot,
)
from .engine import (
    SWEEP_COLUMNS,
    ConfigError,
    CsmaConfig,
    Placement,
    RunMetrics,
    ScenarioConfig,
    build_world,
    run,
    run_baseline,
    sweep,
    sweep_csv,
)
from .grid import (
    BlockIndex,
    GridConfig,
    OutOfZoneError,
    Position,
    ZoneIndex,
    block_centers,
    locate_block,
    locate_zone,
    resident_zone,
    zone_origin,
)
from .presets import PRESETS, SweepPreset
from .protocol import (
    VehicleState,
    init_vehicle,
    is_globally_converged,
    on_delivery,
    on_slot_begin,
)
from .scenario import (
    bundled_scenario,
    load_scenario,
    parse_scenario,
    save_scenario,
    scenario_to_dict,
)
from .sensing import (
    BlockState,
    GroundTruth,
    IncompatibleMatrixError,
    PayloadSizeError,
    SensingMatrix,
    aggregate,
    decode,
    encode,
    format_matrix,
    has_uncertain,
    perceive,
)

__version__ = "0.1.0"
