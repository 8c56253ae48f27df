import json
import logging

from montrep.api import CacheLayer
from montrep.app import mcp
from montrep.config import settings
from montrep.enumerate import fraction_str
from montrep.errors import InputError
from montrep.models.link import MontesinosSpec
from montrep.tangle import build_montesinos_diagram, build_tangle_diagram, parse_montesinos, parse_tangle
from montrep.verify import describe_link

logger = logging.getLogger(__name__)

cache = CacheLayer(settings.redis_url)


def _link_text(fractions: str) -> str:
    # URIs cannot carry "/", so fractions are written p:q
    return "M(" + fractions.replace(":", "/") + ")"


@mcp.resource("montrep://link/{fractions}")
async def link_resource(fractions: str) -> str:
    """
    MCP resource describing a Montesinos link.
    URI: montrep://link/1:1,1:1,1:1  for M(1/1,1/1,1/1)
    Returns the chosen expansions, signed continuant data, mu and component count.
    """
    spec = parse_montesinos(_link_text(fractions))

    async def compute():
        diagram = build_montesinos_diagram(spec)
        return json.dumps({
            "link": describe_link(spec, diagram).model_dump(),
            "mu": fraction_str(spec.mu),
            "mu_numerator": spec.mu_numerator,
            "tangles": [td.model_dump() for td in spec.tangles],
            "arcs": diagram.arc_count,
        })

    return await cache.get_or_compute(f"resource:link:{spec.label}", compute, ttl=settings.cache_ttl)


@mcp.resource("montrep://tangle/{expression}/diagram")
async def tangle_diagram_resource(expression: str) -> str:
    """
    MCP resource holding the crossing-level diagram of a tangle.
    URI: montrep://tangle/[[2,-1,3]]/diagram
    Returns crossings (kind and the directed arc on each corner), ends and
    generator ports as JSON.
    """
    expr = parse_tangle(expression.replace(":", "/"))
    if isinstance(expr, MontesinosSpec):
        raise InputError("use montrep://link/... for closed links")

    async def compute():
        return build_tangle_diagram(expr).model_dump_json()

    return await cache.get_or_compute(f"resource:tangle:{expression}", compute, ttl=settings.cache_ttl)
