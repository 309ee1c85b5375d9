import os
import sys

_build = os.environ.get("FRNS_PYTHON_BUILD_DIR")
if _build:
    sys.path.insert(0, _build)
    sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))
