"""Python bindings for the frns ground-state solver."""

try:
    from ._frns import *  # noqa: F401,F403
    from ._frns import __version__
except ImportError:  # in-tree build: the extension sits next to the package
    from _frns import *  # noqa: F401,F403
    from _frns import __version__
