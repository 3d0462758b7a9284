"""Discrete-diffusion TSP solver bindings."""

try:
    from ideq._ideq import *  # noqa: F401,F403  (installed wheel layout)
    from ideq._ideq import __version__  # noqa: F401
except ImportError:  # build-tree layout: _ideq on sys.path
    from _ideq import *  # noqa: F401,F403
    from _ideq import __version__  # noqa: F401
