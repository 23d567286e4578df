"""Resolved hot-kernel callables for the active backend."""

from . import _kernels_numpy
from .backends import ACTIVE_BACKEND

if ACTIVE_BACKEND == "numba":
    from . import _kernels_numba as _impl
else:
    _impl = _kernels_numpy

two_sample_cost = _impl.two_sample_cost
transport_displacement = _impl.transport_displacement
stream_uniforms = _impl.stream_uniforms
stream_normals = _impl.stream_normals
ndtr_vec = _impl.ndtr_vec
ndtri_vec = _impl.ndtri_vec

# Grid refinement helper only exists vectorized; it is not in the hot path.
merged_steps = _kernels_numpy.merged_steps


def backend_module(name: str):
    """Explicit access to one lane, regardless of the active backend."""
    if name == "numpy":
        return _kernels_numpy
    if name == "numba":
        from . import _kernels_numba
        return _kernels_numba
    raise ValueError(f"unknown backend {name!r}")
