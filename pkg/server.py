import logging

from mcp.server.fastmcp import FastMCP

from revkit.config import load_env

load_env()
logging.basicConfig(level=logging.INFO, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

# Create the MCP instance
mcp = FastMCP("revkit")

# Import and register all agents
from agents import register_analyst, register_assigner, register_auditor  # noqa: E402

register_assigner(mcp)
register_auditor(mcp)
register_analyst(mcp)

if __name__ == "__main__":
    mcp.run()
