from kicked_harper.server import mcp
from kicked_harper.commands import run_tool
from kicked_harper.config import BetaPlusInput, ClassifyPixelInput, ScanInput


@mcp.tool(
    name="harper_classify_pixel",
    annotations={
        "title": "Classify Parameters",
        "readOnlyHint": True,
        "destructiveHint": False,
        "idempotentHint": True,
        "openWorldHint": False,
    },
)
async def harper_classify_pixel(params: ClassifyPixelInput) -> str:
    """
    Decide whether (alpha, beta) is detected diffusive.

    NDetected means some orbit moved at least one unit horizontally and some
    orbit moved at least one unit vertically; that is conclusive. EPresumed
    only means nothing was detected within the budget.

    Args:
        params: ClassifyPixelInput containing:
            - alpha, beta: the map parameters
            - seeds: number of seed orbits (default 32)
            - iters: iterations per seed (default 100000)
            - seed: master seed

    Returns:
        The verdict with maximal displacements, iterations used and witness seeds.
    """
    return await run_tool("pixel", params)


@mcp.tool(
    name="harper_scan",
    annotations={
        "title": "Scan Parameter Rectangle",
        "readOnlyHint": True,
        "destructiveHint": False,
        "idempotentHint": True,
        "openWorldHint": False,
    },
)
async def harper_scan(params: ScanInput) -> str:
    """
    Classify every pixel centre of an alpha x beta rectangle.

    Keep resolution and budget small here; large scans belong on the
    command line, which also writes the CSV and image files.

    Args:
        params: ScanInput containing:
            - alpha, beta: ranges (lo, hi)
            - res: resolution (nx, ny)
            - seeds, iters: per-pixel budget
            - seed: master seed

    Returns:
        NDetected / EPresumed counts and sha256 digests of the CSV, PPM and PGM outputs.
    """
    return await run_tool("scan", params)


@mcp.tool(
    name="harper_beta_plus",
    annotations={
        "title": "Diffusion Threshold Upper Bound",
        "readOnlyHint": True,
        "destructiveHint": False,
        "idempotentHint": True,
        "openWorldHint": False,
    },
)
async def harper_beta_plus(params: BetaPlusInput) -> str:
    """
    Bisect in beta for the smallest detected-diffusive value at each alpha.

    The bisection runs on [0, ceiling * (8/pi)/sqrt(alpha)]; only NDetected
    moves the upper end, so each value is an upper estimate.

    Args:
        params: BetaPlusInput containing:
            - alphas: list of alphas, each >= 1/2
            - steps: bisection steps
            - seeds, iters: classification budget
            - ceiling: multiple of (8/pi)/sqrt(alpha) used as the upper end

    Returns:
        One row per alpha with the estimate, the bound (8/pi)/sqrt(alpha)
        and the iterations spent.
    """
    return await run_tool("betaplus", params)
