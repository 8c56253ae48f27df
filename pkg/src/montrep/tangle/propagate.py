"""Wirtinger propagation: label every arc from the generating pairs.

Only the crossing rule ``rho(out) = -O rho(in) O^-1`` is used here, where
``O`` is the over strand and ``in``/``out`` the two under ports.  Nothing in
this module knows about the closed-form end formulas.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from montrep.errors import PropagationOrderError, UnlabeledArc
from montrep.mat2 import Mat2
from montrep.tangle.diagram import CORNERS, Corner, Diagram, DirectedArc

logger = logging.getLogger(__name__)


@dataclass
class RepAssignment:
    """Matrices on arcs; a directed arc reads ``sign * matrix``."""

    values: dict[int, Mat2] = field(default_factory=dict)

    def __contains__(self, directed: DirectedArc) -> bool:
        return directed.arc in self.values

    def __getitem__(self, directed: DirectedArc) -> Mat2:
        try:
            return directed.sign * self.values[directed.arc]
        except KeyError:
            raise UnlabeledArc(f"arc {directed.arc} has no matrix") from None

    def assign(self, directed: DirectedArc, matrix: Mat2) -> None:
        self.values[directed.arc] = directed.sign * np.asarray(matrix, dtype=np.complex128)

    def ends(self, diagram: Diagram) -> dict[Corner, Mat2]:
        return {corner: self[diagram.ends[corner]] for corner in CORNERS}

    def copy(self) -> "RepAssignment":
        return RepAssignment({arc: m.copy() for arc, m in self.values.items()})


def propagate_pairs(diagram: Diagram, pairs: Iterable[tuple[Mat2, Mat2]]) -> RepAssignment:
    """Seed each rational tangle with its ``(X, Y)`` and sweep crossings to a fixpoint."""
    pairs = list(pairs)
    if len(pairs) != len(diagram.generators):
        raise PropagationOrderError(
            f"diagram has {len(diagram.generators)} generating pairs, got {len(pairs)}"
        )
    asg = RepAssignment()
    for (x_port, y_port), (x, y) in zip(diagram.generators, pairs):
        asg.assign(x_port, x)
        asg.assign(y_port, y)

    pending = list(diagram.crossings)
    while pending:
        remaining = []
        for crossing in pending:
            first, second = crossing.under
            if crossing.over not in asg or (first not in asg and second not in asg):
                remaining.append(crossing)
                continue
            if first in asg and second in asg:
                continue
            src, dst = (first, second) if first in asg else (second, first)
            o = asg[crossing.over]
            asg.assign(dst, -(o @ asg[src] @ np.linalg.inv(o)))
        if len(remaining) == len(pending):
            break
        pending = remaining

    missing = diagram.referenced_arcs - asg.values.keys()
    if missing:
        raise PropagationOrderError(f"{len(missing)} arcs could not be reached: {sorted(missing)[:5]}")
    return asg


def propagate(diagram: Diagram, x: Mat2, y: Mat2) -> RepAssignment:
    """Propagate a single generating pair through a rational tangle diagram."""
    return propagate_pairs(diagram, [(x, y)])
