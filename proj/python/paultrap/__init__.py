"""Exact time-dependent quantum states of the three-dimensional Paul trap.

Thin wrapper over the compiled `_paultrap` module: trap drive parameters,
Mathieu/Floquet mode functions, Hermite/Laguerre number states in Cartesian
and cylindrical coordinates, stability scans, and the operator-verification
suites.
"""

try:
    from ._paultrap import *  # noqa: F401,F403  (installed package layout)
    from . import _paultrap as _core
except ImportError:  # in-tree builds place the extension on PYTHONPATH
    from _paultrap import *  # noqa: F401,F403
    import _paultrap as _core

__all__ = [name for name in dir(_core) if not name.startswith("_")]
__version__ = _core.__version__
