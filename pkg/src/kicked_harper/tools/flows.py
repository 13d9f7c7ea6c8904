from kicked_harper.server import mcp
from kicked_harper.commands import run_tool
from kicked_harper.config import EulerInput, ExperimentInput


@mcp.tool(
    name="harper_euler",
    annotations={
        "title": "Euler Convergence",
        "readOnlyHint": True,
        "destructiveHint": False,
        "idempotentHint": True,
        "openWorldHint": False,
    },
)
async def harper_euler(params: EulerInput) -> str:
    """
    Compare floor(1/alpha) Euler steps of the field W^{lam,alpha} (that is,
    iterates of F_{alpha, lam*alpha}) with its time-one flow.

    Args:
        params: EulerInput containing:
            - lam: ray slope in [0, 1]
            - alphas: at least three step sizes
            - sample: number of start points

    Returns:
        Sup C0 and C1 errors per step size and the fitted log-log orders.
    """
    return await run_tool("euler", params)


@mcp.tool(
    name="harper_experiment",
    annotations={
        "title": "Exploratory Experiment",
        "readOnlyHint": True,
        "destructiveHint": False,
        "idempotentHint": True,
        "openWorldHint": False,
    },
)
async def harper_experiment(params: ExperimentInput) -> str:
    """
    Experiments that report data without a pass/fail target.

    Kinds:
        cusp: classify along beta = lam*alpha for the given alphas
        monotonicity: nested-hull report along the diagonal (t, t), t in alphas
        continuity: Hausdorff distance to nearby parameters within radius;
            one_sided keeps to larger |alpha| and |beta|
        drift: observed vs predicted vertical drift speed
        mean_rotation: Lebesgue mean of the one-step displacement

    Returns:
        The experiment's rows or summary values.
    """
    return await run_tool("experiment", params)
