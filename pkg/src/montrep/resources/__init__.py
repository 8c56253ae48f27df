from montrep.resources import links

__all__ = ["links"]
