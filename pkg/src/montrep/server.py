import logging

from montrep.app import mcp
from montrep.config import settings

# registration happens at import time
import montrep.tools.enumeration  # noqa: F401
import montrep.tools.tangles      # noqa: F401
import montrep.resources.links    # noqa: F401


def main():
    logging.basicConfig(level=settings.log_level.upper())
    mcp.run()


if __name__ == "__main__":
    main()
