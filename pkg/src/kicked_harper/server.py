from mcp.server.fastmcp import FastMCP

from kicked_harper.constants import SERVICE_NAME

mcp = FastMCP(SERVICE_NAME)

from kicked_harper.tools import ping  # noqa: F401, E402
from kicked_harper.tools import fixedpoints  # noqa: F401, E402
from kicked_harper.tools import rotset  # noqa: F401, E402
from kicked_harper.tools import diffusion  # noqa: F401, E402
from kicked_harper.tools import certify  # noqa: F401, E402
from kicked_harper.tools import flows  # noqa: F401, E402
from kicked_harper.tools import nontwist  # noqa: F401, E402


def main():
    mcp.run()
