from kicked_harper.server import mcp
from kicked_harper.commands import run_tool
from kicked_harper.config import CertifyInput


@mcp.tool(
    name="harper_certify",
    annotations={
        "title": "Half-Plane Certificate",
        "readOnlyHint": True,
        "destructiveHint": False,
        "idempotentHint": True,
        "openWorldHint": False,
    },
)
async def harper_certify(params: CertifyInput) -> str:
    """
    Conservative bound on <F^k(z) - z, v> along the line <z, v> = c.

    With 'which' set, runs one of the mode-locking checks: 'square11'
    (rotation set of F_{1,1} is [-1,1]^2) or 'diamond_half' (rotation set
    of F_{1/2,1/2} is |x|+|y| <= 1/2). Otherwise certifies the half-plane
    given by alpha, beta, v, u, c and power. With 'replay', recomputes the
    certificates stored in a report file.

    Args:
        params: CertifyInput containing:
            - which: optional mode-locking check
            - alpha, beta, v, u, c, power: a custom certificate
            - step: grid step along the line (default 1e-6)
            - target: optional override of <u, v>
            - replay: optional path of a certificate report

    Returns:
        Grid maximum, Lipschitz constant, rigorous bound and verdict, or the
        failed bound when the certificate does not hold.
    """
    return await run_tool("certify", params)
