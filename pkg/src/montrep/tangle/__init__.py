from montrep.tangle.closed_form import (
    ends_closed_form,
    linear_transfer,
    recover_from_sw,
    recover_generator,
    transfer_B,
    transfer_C,
)
from montrep.tangle.diagram import (
    Crossing,
    Diagram,
    DirectedArc,
    Join,
    build_montesinos_diagram,
    build_rational_diagram,
    build_tangle_diagram,
)
from montrep.tangle.expr import Basic, Compose, Rational, TangleExpr, Twist
from montrep.tangle.parser import parse_montesinos, parse_tangle
from montrep.tangle.propagate import RepAssignment, propagate, propagate_pairs

__all__ = [
    "Basic",
    "Compose",
    "Crossing",
    "Diagram",
    "DirectedArc",
    "Join",
    "Rational",
    "RepAssignment",
    "TangleExpr",
    "Twist",
    "build_montesinos_diagram",
    "build_rational_diagram",
    "build_tangle_diagram",
    "ends_closed_form",
    "linear_transfer",
    "parse_montesinos",
    "parse_tangle",
    "propagate",
    "propagate_pairs",
    "recover_from_sw",
    "recover_generator",
    "transfer_B",
    "transfer_C",
]
