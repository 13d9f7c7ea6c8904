from kicked_harper import __version__
from kicked_harper.server import mcp
from kicked_harper.commands import COMMANDS, run_tool
from kicked_harper.config import FixedPointsInput


@mcp.tool(
    name="harper_ping",
    annotations={
        "title": "Ping Kicked Harper",
        "readOnlyHint": True,
        "destructiveHint": False,
        "idempotentHint": True,
        "openWorldHint": False,
    },
)
async def harper_ping() -> str:
    """
    Test tool to verify the MCP server is running.

    Returns the package version, the available commands and a sample
    fixed-point report at (alpha, beta) = (1, 1).
    """
    sample = await run_tool("fixedpoints", FixedPointsInput(alpha=1.0, beta=1.0))

    lines = [
        f"kicked_harper {__version__} is running.",
        f"Commands: {', '.join(COMMANDS)}",
        "",
        sample,
    ]
    return "\n".join(lines)
