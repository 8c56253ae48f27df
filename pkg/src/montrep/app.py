from mcp.server.fastmcp import FastMCP

# Single shared MCP instance; tools and resources register against it on import
mcp = FastMCP("montrep")
