"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it imports; otherwise, or
when ``DYNHUB_PURE_PYTHON`` is set to a non-empty value, the pure-Python
``_pykernels`` module is used. Both expose identical functions.
"""
import os

from . import _pykernels

py = _pykernels

try:
    from . import _ckernels as compiled
except ImportError:  # extension not built
    compiled = None

if compiled is not None and not os.environ.get("DYNHUB_PURE_PYTHON"):
    impl = compiled
    BACKEND = "compiled"
else:
    impl = _pykernels
    BACKEND = "python"

sssp = impl.sssp
apsp = impl.apsp
multi_source_keys = impl.multi_source_keys
cluster = impl.cluster
clusters_all = impl.clusters_all
delete_repair = impl.delete_repair

# 2**62 leaves headroom for key arithmetic in int64.
INF_KEY = 1 << 62
