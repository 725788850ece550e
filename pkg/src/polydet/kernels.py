"""Backend selection for the hot kernels.

The compiled Cython module is used when it imported cleanly, otherwise the
numpy implementations.  ``use_backend`` switches explicitly (tests and the
benchmark compare both).
"""

from __future__ import annotations

from contextlib import contextmanager
from types import ModuleType

from . import _pykernels

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_BACKENDS: dict[str, ModuleType] = {"python": _pykernels}
if _compiled is not None:
    _BACKENDS["cython"] = _compiled

_active: ModuleType = _compiled if _compiled is not None else _pykernels


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def backend_name() -> str:
    return "cython" if _active is _compiled and _compiled is not None else "python"


def set_backend(name: str) -> None:
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} unavailable; have {available_backends()}")
    _active = _BACKENDS[name]


@contextmanager
def use_backend(name: str):
    previous = backend_name()
    set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)


def log_sin_weighted_sum(n: int) -> float:
    return _active.log_sin_weighted_sum(n)


def log_factorial_ratio(n: int) -> float:
    return _active.log_factorial_ratio(n)


def shoot_dirichlet(qmid, h: float, lambdas):
    return _active.shoot_dirichlet(qmid, h, lambdas)
