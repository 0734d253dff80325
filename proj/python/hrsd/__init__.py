"""Harris random self-decomposability toolkit.

Thin Python layer over the compiled ``_hrsd`` extension: transform
expression trees with branch-continuous evaluation, SD/HID/HRSD factor
constructors, exact samplers, generalized AR(1)/INAR(1) simulation and
numerical verification suites.
"""

try:
    from ._hrsd import *  # noqa: F401,F403  (installed package layout)
    from . import _hrsd as _impl
except ImportError:  # pragma: no cover - build-tree layout
    from _hrsd import *  # noqa: F401,F403
    import _hrsd as _impl

__all__ = [name for name in dir(_impl) if not name.startswith("_")]
__version__ = "1.0.0"
