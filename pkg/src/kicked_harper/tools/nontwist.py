from kicked_harper.server import mcp
from kicked_harper.commands import run_tool
from kicked_harper.config import NontwistInput


@mcp.tool(
    name="harper_nontwist",
    annotations={
        "title": "Non-Twist Rescaling",
        "readOnlyHint": True,
        "destructiveHint": False,
        "idempotentHint": True,
        "openWorldHint": False,
    },
)
async def harper_nontwist(params: NontwistInput) -> str:
    """
    Relate large-alpha kicked Harper maps to the standard non-twist map.

    action='convergence' reports the sup distance between the rescaled map
    at alpha0 + n and its non-twist limit for each n. action='conjecture'
    scans the rescaled strip [n, n+1] x [0, 1/sqrt(n)] and the non-twist
    parameter square and reports how much the two masks differ.

    Args:
        params: NontwistInput containing:
            - action: 'convergence' or 'conjecture'
            - alpha0, n_list: convergence inputs
            - n, res, seeds, iters: conjecture inputs

    Returns:
        Distances per n, or the mismatch fraction with both grids' counts.
    """
    return await run_tool("nontwist", params)
