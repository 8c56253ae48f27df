import asyncio
import json
import logging

from montrep.api import CacheLayer
from montrep.app import mcp
from montrep.config import settings
from montrep.enumerate import ALL_CASES, enumerate_classes, fraction_str
from montrep.models.output import ScanOutput
from montrep.models.link import MontesinosSpec
from montrep.models.representation import EnumerationResult
from montrep.tangle import parse_montesinos
from montrep.verify import describe_link, scan_all_tuples, verify_classes

logger = logging.getLogger(__name__)

cache = CacheLayer(settings.redis_url)


def _cases(cases: str) -> list[str]:
    return [c.strip() for c in cases.split(",") if c.strip()]


@mcp.tool()
async def enumerate_representations(
    spec: str,
    cases: str = ",".join(ALL_CASES),
    samples: int | None = None,
    seed: int | None = None,
    tol: float | None = None,
    dedupe_characters: bool = False,
) -> dict:
    """
    Enumerate the conjugacy classes of tracefree SL(2,C) representations of a
    Montesinos link such as "M(1/1,1/1,1/1)". `cases` is a comma-separated
    subset of i (abelian), ii (reducible non-abelian), iii (irreducible with
    a = +-1), iv (irreducible, mu = 0) and v (irreducible, mu != 0).
    Every returned class has been checked against the crossing diagram.
    """
    link = parse_montesinos(spec)
    selected = _cases(cases)
    samples = settings.samples if samples is None else samples
    seed = settings.seed if seed is None else seed
    tol = settings.tol if tol is None else tol
    key = f"enum:{link.label}:{','.join(selected)}:{samples}:{seed}:{tol!r}:{dedupe_characters}"

    async def compute():
        result = await asyncio.to_thread(
            enumerate_classes, link, selected, tol=tol, samples=samples, seed=seed,
            dedupe="characters" if dedupe_characters else None,
        )
        return result.to_json()

    result = await cache.get_or_compute(key, compute, ttl=settings.cache_ttl)
    return json.loads(result)


@mcp.tool()
async def verify_enumeration(result_json: str, tol: float | None = None) -> dict:
    """
    Re-verify a saved enumeration (the JSON returned by enumerate_representations)
    against the crossing-level diagram. Reports per-class residuals and whether
    every class passes.
    """
    tol = settings.tol if tol is None else tol
    saved = EnumerationResult.model_validate_json(result_json)
    link = MontesinosSpec(fractions=saved.link.fractions, expansions=saved.expansions)

    output = await asyncio.to_thread(verify_classes, link, saved.classes, tol)
    return json.loads(output.to_json())


@mcp.tool()
async def scan_closure(spec: str, grid: int | None = None, n_list: list[int] | None = None) -> dict:
    """
    Scan the closure residual of a mu != 0 Montesinos link over theta in [0, 2 pi).
    Returns the refined zeros for each twist tuple (n_1, ..., n_r), or only for
    `n_list` when given. The full residual table is included for a single tuple.
    """
    link = parse_montesinos(spec)
    grid = settings.scan_grid if grid is None else grid
    key = f"scan:{link.label}:{grid}:{n_list}"

    async def compute():
        scans = await asyncio.to_thread(
            scan_all_tuples, link, grid, 1e-6, None if n_list is None else [n_list]
        )
        output = ScanOutput(
            link=describe_link(link), mu=fraction_str(link.mu), grid=grid, threshold=1e-6, scans=scans,
        )
        return output.to_json()

    result = await cache.get_or_compute(key, compute, ttl=settings.cache_ttl)
    return json.loads(result)
