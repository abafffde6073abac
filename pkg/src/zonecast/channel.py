"""Slot-level radio model: log-distance path loss, capture effect, and
constructive interference of byte-identical packets.

All transmissions of a slot start simultaneously (the protocol is slot
synchronous), so the only questions the channel answers are which packets a
listener can decode and whether the strongest rises far enough above the sum
of the rest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .grid import Position, ZoneIndex

DELIVERED = "delivered"
COLLISION = "collision"
SILENCE = "silence"


class DegenerateGeometryError(ValueError):
    """Transmitter and receiver share a position; path loss is undefined."""


class InvalidSlotError(ValueError):
    """A slot contained two transmissions from the same sender."""


@dataclass(frozen=True)
class ChannelConfig:
    comm_range: float = 100.0
    capture_threshold: float = 3.0  # dB above the sum of all other signals
    path_loss_exponent: float = 2.0
    reference_power: float = 0.0  # dB at 1 m; only ratios matter

    def __post_init__(self) -> None:
        if self.comm_range <= 0:
            raise ValueError("comm_range must be positive")
        if self.capture_threshold < 0:
            raise ValueError("capture_threshold must be non-negative")
        if self.path_loss_exponent <= 0:
            raise ValueError("path_loss_exponent must be positive")


@dataclass(frozen=True)
class Packet:
    """Wire frame: the sender's zone stamp plus its encoded matrix.

    The sender id is simulator bookkeeping, not wire bytes — two packets with
    equal zone and payload are indistinguishable on air, which is what lets
    distinct vehicles interfere constructively.
    """

    sender: int
    zone: ZoneIndex
    payload: bytes


@dataclass(frozen=True)
class Transmission:
    sender: int
    sender_pos: Position
    packet: Packet


@dataclass(frozen=True)
class Outcome:
    """Per-receiver slot result: DELIVERED (with the packet), COLLISION, or
    SILENCE (nothing decodable in range, or the receiver was transmitting)."""

    kind: str
    packet: Optional[Packet] = None


def received_power(tx_pos: Position, rx_pos: Position, cfg: ChannelConfig) -> float:
    """Received power in dB under log-distance path loss."""
    d = math.dist(tx_pos, rx_pos)
    if d == 0:
        raise DegenerateGeometryError(f"transmitter and receiver both at {tx_pos!r}")
    return cfg.reference_power - 10.0 * cfg.path_loss_exponent * math.log10(d)


def resolve_slot(
    txs: list[Transmission],
    receivers: list[tuple[int, Position]],
    cfg: ChannelConfig,
) -> dict[int, Outcome]:
    """Decide what every receiver hears in one slot.

    Byte-identical packets form one constructively interfering group whose
    power at a receiver is its strongest member's power. Groups whose nearest
    member is out of comm_range are inaudible. A single audible group is
    delivered; among several, the strongest is delivered only if it exceeds
    the linear-scale sum of the others by capture_threshold dB, else the slot
    is a collision. Senders are half-duplex and always hear silence.
    """
    senders = {t.sender for t in txs}
    if len(senders) != len(txs):
        raise InvalidSlotError("duplicate sender id in slot")

    groups: dict[tuple[ZoneIndex, bytes], list[Transmission]] = {}
    for t in txs:
        groups.setdefault((t.packet.zone, t.packet.payload), []).append(t)

    outcomes: dict[int, Outcome] = {}
    for rid, rpos in receivers:
        if rid in senders:
            outcomes[rid] = Outcome(SILENCE)
            continue
        audible: list[tuple[float, int, Packet]] = []
        for members in groups.values():
            best_power = -math.inf
            best = None
            nearest = math.inf
            for t in members:
                d = math.dist(t.sender_pos, rpos)
                nearest = min(nearest, d)
                p = received_power(t.sender_pos, rpos, cfg)
                if p > best_power or (p == best_power and t.sender < best.sender):
                    best_power, best = p, t
            if nearest > cfg.comm_range:
                continue
            audible.append((best_power, best.sender, best.packet))
        if not audible:
            outcomes[rid] = Outcome(SILENCE)
        elif len(audible) == 1:
            outcomes[rid] = Outcome(DELIVERED, audible[0][2])
        else:
            audible.sort(key=lambda item: (-item[0], item[1]))
            strongest = audible[0]
            others_linear = sum(10.0 ** (p / 10.0) for p, _, _ in audible[1:])
            margin = strongest[0] - 10.0 * math.log10(others_linear)
            if margin >= cfg.capture_threshold:
                outcomes[rid] = Outcome(DELIVERED, strongest[2])
            else:
                outcomes[rid] = Outcome(COLLISION)
    return outcomes
