"""Crossing-level diagrams of tangles and Montesinos links.

Every crossing has four corner ports ``nw``, ``ne``, ``sw``, ``se``.  The
matrix attached to a port is the one on the arc leaving the crossing through
that corner, so the two ports of one strand carry negatives of each other::

      nw     ne            nw     ne
        \\   /               \\   /
         \\ /                 \\ /
          /    kind +1       \\     kind -1
         / \\                 / \\
        /   \\               /   \\
      sw     se            sw     se

For kind ``+1`` the over strand runs ``nw``-``se``; for kind ``-1`` it runs
``sw``-``ne``.  Gluing two ends also identifies an arc with its reverse.
Arcs are the connected components of this "same arc, reversed" graph, and a
port is stored as ``(arc, sign)`` with ``rho(port) = sign * rho(arc)``.

A rational tangle ``[[k1, ..., km]]`` is laid out as ``[k1] | [1/k2] * [k3] | ...``
with ``X`` on the ``nw`` end and ``Y`` on the ``sw`` port of the first
crossing.  For ``[[2, -1, 3]]``::

    X  [k1]: crossing crossing
    Y        [1/k2]: crossing
                   [k3]: crossing crossing crossing
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Literal

import networkx as nx
from pydantic import BaseModel, ConfigDict

from montrep.errors import PropagationOrderError
from montrep.models.link import MontesinosSpec
from montrep.rational import check_expansion
from montrep.tangle.expr import Basic, Compose, Rational, TangleExpr, Twist

logger = logging.getLogger(__name__)

Corner = Literal["nw", "ne", "sw", "se"]
CORNERS: tuple[Corner, ...] = ("nw", "ne", "sw", "se")


# ---------------------------------------------------------------------------
# Diagram model
# ---------------------------------------------------------------------------

class DirectedArc(BaseModel):
    model_config = ConfigDict(frozen=True)

    arc: int
    sign: Literal[1, -1] = 1

    def reversed(self) -> "DirectedArc":
        return DirectedArc(arc=self.arc, sign=-self.sign)


class Crossing(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal[1, -1]
    nw: DirectedArc
    ne: DirectedArc
    sw: DirectedArc
    se: DirectedArc

    def port(self, corner: Corner) -> DirectedArc:
        return getattr(self, corner)

    @property
    def over(self) -> DirectedArc:
        """Over strand, directed out through ``se`` (kind +1) or ``ne`` (kind -1)."""
        return self.se if self.kind == 1 else self.ne

    @property
    def under(self) -> tuple[DirectedArc, DirectedArc]:
        return (self.sw, self.ne) if self.kind == 1 else (self.nw, self.se)


class Join(BaseModel):
    """Two outward ends glued together: ``rho(first) = -rho(second)``."""

    model_config = ConfigDict(frozen=True)

    first: DirectedArc
    second: DirectedArc
    label: Literal["glue", "closure"]


class Diagram(BaseModel):
    model_config = ConfigDict(frozen=True)

    crossings: list[Crossing]
    arc_count: int
    ends: dict[Corner, DirectedArc]
    # one (X port, Y port) pair per rational tangle
    generators: list[tuple[DirectedArc, DirectedArc]]
    # ends of each rational tangle (Montesinos) or each twist region (rational)
    regions: list[dict[Corner, DirectedArc]] = []
    joins: list[Join] = []
    closed: bool = False

    @property
    def referenced_arcs(self) -> set[int]:
        arcs = {c.port(corner).arc for c in self.crossings for corner in CORNERS}
        arcs |= {d.arc for d in self.ends.values()}
        for x, y in self.generators:
            arcs |= {x.arc, y.arc}
        return arcs


# ---------------------------------------------------------------------------
# Builder
# ---------------------------------------------------------------------------

Node = tuple


@dataclass
class _Piece:
    ends: dict[str, Node]
    seed: Node
    regions: list[dict[str, Node]] = field(default_factory=list)


class _Builder:
    """Collects ports and "same arc" links in one graph, then freezes arcs."""

    def __init__(self) -> None:
        self.graph = nx.Graph()
        self.kinds: list[int] = []
        self._stubs = itertools.count()

    def _link(self, u: Node, v: Node) -> None:
        self.graph.add_edge(u, v)

    def crossing(self, kind: int) -> _Piece:
        index = len(self.kinds)
        self.kinds.append(kind)
        ports = {corner: ("x", index, corner) for corner in CORNERS}
        self.graph.add_nodes_from(ports.values())
        if kind == 1:
            self._link(ports["nw"], ports["se"])
        else:
            self._link(ports["sw"], ports["ne"])
        return _Piece(ends=ports, seed=ports["sw"])

    def trivial(self, value: str) -> _Piece:
        ports = {corner: ("e", next(self._stubs)) for corner in CORNERS}
        self.graph.add_nodes_from(ports.values())
        if value == "0":
            self._link(ports["nw"], ports["ne"])
            self._link(ports["sw"], ports["se"])
        else:
            self._link(ports["nw"], ports["sw"])
            self._link(ports["ne"], ports["se"])
        return _Piece(ends=ports, seed=ports["sw"])

    def horizontal(self, left: _Piece, right: _Piece) -> _Piece:
        self._link(left.ends["ne"], right.ends["nw"])
        self._link(left.ends["se"], right.ends["sw"])
        ends = {"nw": left.ends["nw"], "sw": left.ends["sw"],
                "ne": right.ends["ne"], "se": right.ends["se"]}
        return _Piece(ends=ends, seed=left.seed, regions=left.regions + right.regions)

    def vertical(self, top: _Piece, bottom: _Piece) -> _Piece:
        self._link(top.ends["sw"], bottom.ends["nw"])
        self._link(top.ends["se"], bottom.ends["ne"])
        ends = {"nw": top.ends["nw"], "ne": top.ends["ne"],
                "sw": bottom.ends["sw"], "se": bottom.ends["se"]}
        return _Piece(ends=ends, seed=top.seed, regions=top.regions + bottom.regions)

    def twist(self, k: int, vertical: bool) -> _Piece:
        kind = 1 if k > 0 else -1
        combine = self.vertical if vertical else self.horizontal
        piece = self.crossing(kind)
        for _ in range(abs(k) - 1):
            piece = combine(piece, self.crossing(kind))
        return _Piece(ends=piece.ends, seed=piece.seed, regions=[dict(piece.ends)])

    def rational(self, ks: list[int]) -> _Piece:
        ks = check_expansion(ks)
        piece = self.twist(ks[0], vertical=False)
        for j, k in enumerate(ks[1:], start=2):
            if j % 2 == 0:
                piece = self.vertical(piece, self.twist(k, vertical=True))
            else:
                piece = self.horizontal(piece, self.twist(k, vertical=False))
        return piece

    def expression(self, expr: TangleExpr) -> _Piece:
        if isinstance(expr, Basic):
            if expr.value in ("1", "-1"):
                return self.twist(int(expr.value), vertical=False)
            return self.trivial(expr.value)
        if isinstance(expr, Twist):
            return self.twist(expr.k, expr.vertical)
        if isinstance(expr, Rational):
            return self.rational(expr.ks)
        if isinstance(expr, Compose):
            left, right = self.expression(expr.left), self.expression(expr.right)
            if expr.op == "horizontal":
                return self.horizontal(left, right)
            return self.vertical(left, right)
        raise TypeError(f"unknown tangle node {expr!r}")

    # -- freezing -----------------------------------------------------------

    def _arcs(self) -> dict[Node, DirectedArc]:
        directed: dict[Node, DirectedArc] = {}
        components = sorted(nx.connected_components(self.graph), key=min)
        for arc, component in enumerate(components):
            sub = self.graph.subgraph(component)
            try:
                colors = nx.bipartite.color(sub)
            except nx.NetworkXError as exc:
                raise PropagationOrderError(f"arc {arc} closes up with an odd twist") from exc
            root = colors[min(component)]
            for node in component:
                directed[node] = DirectedArc(arc=arc, sign=1 if colors[node] == root else -1)
        return directed

    def freeze(
        self,
        pieces: list[_Piece],
        ends: dict[str, Node],
        joins: list[tuple[Node, Node, str]] = (),
        regions: list[dict[str, Node]] | None = None,
    ) -> Diagram:
        directed = self._arcs()
        crossings = [
            Crossing(kind=kind, **{c: directed[("x", i, c)] for c in CORNERS})
            for i, kind in enumerate(self.kinds)
        ]
        regions = regions if regions is not None else [r for p in pieces for r in p.regions]
        return Diagram(
            crossings=crossings,
            arc_count=len(set(d.arc for d in directed.values())),
            ends={c: directed[n] for c, n in ends.items()},
            generators=[(directed[p.ends["nw"]], directed[p.seed]) for p in pieces],
            regions=[{c: directed[n] for c, n in r.items()} for r in regions],
            joins=[Join(first=directed[u], second=directed[v], label=label) for u, v, label in joins],
            closed=any(label == "closure" for _, _, label in joins),
        )


# ---------------------------------------------------------------------------
# Public constructors
# ---------------------------------------------------------------------------

def build_rational_diagram(ks: list[int]) -> Diagram:
    """Diagram of ``[[k1, ..., km]]``; ``regions`` lists the m twist regions."""
    builder = _Builder()
    piece = builder.rational(list(ks))
    return builder.freeze([piece], piece.ends)


def build_tangle_diagram(expr: TangleExpr) -> Diagram:
    builder = _Builder()
    piece = builder.expression(expr)
    return builder.freeze([piece], piece.ends)


def build_montesinos_diagram(spec: MontesinosSpec) -> Diagram:
    """Stack the rational tangles top to bottom and close ``nw``-``sw``, ``ne``-``se``.

    Each tangle keeps its own end arcs; gluing and closure are recorded as
    joins so that verification sees them explicitly.
    """
    builder = _Builder()
    pieces = [builder.rational(ks) for ks in spec.expansions]
    joins: list[tuple[Node, Node, str]] = []
    for upper, lower in zip(pieces, pieces[1:]):
        joins.append((upper.ends["sw"], lower.ends["nw"], "glue"))
        joins.append((upper.ends["se"], lower.ends["ne"], "glue"))
    joins.append((pieces[-1].ends["sw"], pieces[0].ends["nw"], "closure"))
    joins.append((pieces[-1].ends["se"], pieces[0].ends["ne"], "closure"))
    ends = {"nw": pieces[0].ends["nw"], "ne": pieces[0].ends["ne"],
            "sw": pieces[-1].ends["sw"], "se": pieces[-1].ends["se"]}
    diagram = builder.freeze(pieces, ends, joins, regions=[p.ends for p in pieces])
    logger.debug("built %s: %d crossings, %d arcs", spec, len(diagram.crossings), diagram.arc_count)
    return diagram
