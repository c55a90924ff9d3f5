"""Handles to live wires, as seen by circuit-building code."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class Qubit:
    wire: int


@dataclass(frozen=True, slots=True)
class Bit:
    wire: int


Handle = Qubit | Bit
