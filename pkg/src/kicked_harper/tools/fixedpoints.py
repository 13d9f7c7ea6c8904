from kicked_harper.server import mcp
from kicked_harper.commands import run_tool
from kicked_harper.config import FixedPointsInput


@mcp.tool(
    name="harper_fixed_points",
    annotations={
        "title": "Fixed Points",
        "readOnlyHint": True,
        "destructiveHint": False,
        "idempotentHint": True,
        "openWorldHint": False,
    },
)
async def harper_fixed_points(params: FixedPointsInput) -> str:
    """
    Local analysis of F_{alpha,beta} at its four fixed points (0,0), (0,1/2),
    (1/2,0) and (1/2,1/2).

    Args:
        params: FixedPointsInput containing:
            - alpha, beta: the map parameters; alpha*beta must be nonzero
            - format: 'markdown' or 'json'

    Returns:
        Eigenvalues, real eigenvectors and a hyperbolic / elliptic /
        parabolic / non_elementary label per fixed point, plus the closed-form
        eigenvalues at the origin when alpha*beta > 0.
    """
    return await run_tool("fixedpoints", params)
