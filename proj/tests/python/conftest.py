import os
import sys

try:
    import facspeed  # noqa: F401
except ImportError:
    # In-tree build: the extension sits next to python/facspeed/__init__.py.
    sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "..", "python"))
