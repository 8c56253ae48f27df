# Tools are registered via side-effect imports in server.py
from montrep.tools import enumeration, tangles

__all__ = ["enumeration", "tangles"]
