from montrep.api.cache import CacheLayer

__all__ = ["CacheLayer"]
