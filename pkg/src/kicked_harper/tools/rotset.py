from kicked_harper.server import mcp
from kicked_harper.commands import run_tool
from kicked_harper.config import RotsetInput


@mcp.tool(
    name="harper_rotation_set",
    annotations={
        "title": "Rotation Set",
        "readOnlyHint": True,
        "destructiveHint": False,
        "idempotentHint": True,
        "openWorldHint": False,
    },
)
async def harper_rotation_set(params: RotsetInput) -> str:
    """
    Inner approximation of the rotation set of F_{alpha,beta}.

    The polygon is the symmetrized convex hull of long-orbit displacement
    averages and the exactly known periodic rotation vectors.

    Args:
        params: RotsetInput containing:
            - alpha, beta: the map parameters
            - orbits: number of seed orbits (default 256)
            - iters: iterations per orbit (default 100000)
            - tol: width below which an axis counts as degenerate
            - seed: master seed

    Returns:
        Vertices (counterclockwise), shape label (origin, horizontal_segment,
        vertical_segment or full_dim), exact rotations found, and the
        Hausdorff distance to the box [-|alpha|,|alpha|] x [-|beta|,|beta|].
    """
    return await run_tool("rotset", params)
