"""Enumeration and table-size caps shared by all modules."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class Caps:
    partitions: int = 16   # ground set size for full set-partition enumeration
    nc: int = 16           # ground set size for non-crossing enumeration
    pairings: int = 20     # ground set size for pair partitions
    degree: int = 12       # moment-oracle word length
    weingarten_k: int = 8  # half-degree for Weingarten tables


caps = Caps()
