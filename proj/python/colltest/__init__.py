"""Collision-based uniformity and l2 closeness testing."""

try:
    from ._colltest import *  # noqa: F401,F403  (installed package layout)
    from . import _colltest as _impl
except ImportError:
    from _colltest import *  # noqa: F401,F403  (build-tree layout)
    import _colltest as _impl

__all__ = [name for name in dir(_impl) if not name.startswith("_")]
