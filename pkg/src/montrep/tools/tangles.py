import asyncio
import json
import logging

from montrep.api import CacheLayer
from montrep.app import mcp
from montrep.config import settings
from montrep.enumerate import fraction_str
from montrep.errors import InputError
from montrep.mat2 import mat_A
from montrep.models.link import MontesinosSpec
from montrep.models.output import ComponentsOutput, TangleEndsOutput
from montrep.rational import TangleFraction, cf_expand, tangle_data
from montrep.tangle import build_montesinos_diagram, build_tangle_diagram, parse_montesinos, parse_tangle, propagate
from montrep.tangle.closed_form import boundary_traces
from montrep.verify import count_components, describe_link

logger = logging.getLogger(__name__)

cache = CacheLayer(settings.redis_url)


@mcp.tool()
async def tangle_ends(expression: str, s_real: float = 0.0, s_imag: float = 1.0) -> dict:
    """
    Propagate the generating pair (A(1), A(s)) through a tangle such as
    "[[2,-1,3]]" or "[2] | [1/3] * [-1]" and return the four end matrices
    with the boundary traces tr(ne se) and tr(sw se).
    """
    expr = parse_tangle(expression)
    if isinstance(expr, MontesinosSpec):
        raise InputError("tangle_ends takes a tangle, not a closed link")
    s = complex(s_real, s_imag)

    def compute() -> TangleEndsOutput:
        diagram = build_tangle_diagram(expr)
        ends = propagate(diagram, mat_A(1), mat_A(s)).ends(diagram)
        fraction = expr.fraction
        return TangleEndsOutput(
            expression=expression,
            fraction=None if fraction is None else fraction_str(fraction),
            crossings=len(diagram.crossings),
            s=s,
            ends=dict(ends),
            boundary_traces=list(boundary_traces(ends)),
        )

    output = await asyncio.to_thread(compute)
    return json.loads(output.to_json())


@mcp.tool()
async def count_link_components(spec: str) -> dict:
    """
    Count the components of a Montesinos link such as "M(3/1,3/1,3/-2)" by
    following its crossing diagram. A single component means the link is a knot.
    """
    link = parse_montesinos(spec)

    async def compute():
        diagram = build_montesinos_diagram(link)
        components = count_components(diagram)
        return ComponentsOutput(
            link=describe_link(link, diagram), mu=fraction_str(link.mu), knot=components == 1,
        ).to_json()

    result = await cache.get_or_compute(f"components:{link.label}", compute, ttl=settings.cache_ttl)
    return json.loads(result)


@mcp.tool()
async def expand_fraction(p: int, q: int) -> dict:
    """
    Continued-fraction expansion [[k1, ..., km]] of the rational tangle p/q,
    with its signed continuant data (p, q, p~, q~) and crossing count.
    """
    fraction = TangleFraction(p=p, q=q)
    ks = cf_expand(fraction)
    td = tangle_data(ks)
    return {
        "fraction": str(fraction),
        "expansion": ks,
        "p": td.p,
        "q": td.q,
        "p_tilde": td.p_tilde,
        "q_tilde": td.q_tilde,
        "crossings": td.crossings,
    }
