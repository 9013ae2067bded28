"""Spectral solver and fractional-order identification toolkit.

Thin wrapper over the compiled extension; see the project README for the
mathematical background and the C++ API.
"""

try:
    # Installed layout: the extension lives inside the package.
    from ._fracorder import *  # noqa: F401,F403
    from ._fracorder import __version__  # noqa: F401
except ImportError:
    # Development layout: the extension sits on PYTHONPATH (build tree).
    from _fracorder import *  # noqa: F401,F403
    from _fracorder import __version__  # noqa: F401
