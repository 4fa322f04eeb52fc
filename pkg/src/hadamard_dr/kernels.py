"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the pure-Python
module is used. Set ``HADAMARD_DR_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py

if os.environ.get("HADAMARD_DR_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _kernels_py

BACKEND = _impl.BACKEND

rb_dist = _impl.rb_dist
rb_norm = _impl.rb_norm
rb_exp = _impl.rb_exp
rb_log = _impl.rb_log
rb_geodesic = _impl.rb_geodesic
rb_prox_phi = _impl.rb_prox_phi
rb_prox_psi = _impl.rb_prox_psi
rb_reflect_phi = _impl.rb_reflect_phi
rb_reflect_psi = _impl.rb_reflect_psi
rb_dr_map = _impl.rb_dr_map
rb_dist_rows = _impl.rb_dist_rows
lo_dist = _impl.lo_dist
lo_norm = _impl.lo_norm
lo_exp = _impl.lo_exp
lo_log = _impl.lo_log
lo_geodesic = _impl.lo_geodesic
lo_mean = _impl.lo_mean
lo_dist_rows = _impl.lo_dist_rows


def backends():
    """Return ``{name: module}`` for every backend importable in this process."""
    found = {"python": _kernels_py}
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        found["cython"] = _kernels
    return found
