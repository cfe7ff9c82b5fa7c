"""Hot-kernel dispatch: compiled extension when built, numpy fallback otherwise.

Both backends implement the same three functions with identical semantics
(and bitwise-identical results):

    horner_triple(coeffs, points) -> (p, p', p'')
    horner_pair(coeffs, points)   -> (p, p')
    horner_eval(coeffs, points)   -> p
    cauchy_truncated(a, b, n)     -> truncated convolution

`use_backend("python")` / `use_backend("compiled")` switches at runtime
(used by the parity tests and the benchmark).
"""

from __future__ import annotations

from . import _fallback

try:
    from . import _core
except ImportError:
    _core = None

_active = _core if _core is not None else _fallback

COMPILED_AVAILABLE = _core is not None


def backend_name() -> str:
    return "compiled" if _active is _core else "python"


def use_backend(name: str) -> None:
    global _active
    if name == "python":
        _active = _fallback
    elif name == "compiled":
        if _core is None:
            raise RuntimeError("compiled kernels are not built")
        _active = _core
    else:
        raise ValueError(f"unknown kernel backend: {name!r}")


def horner_triple(coeffs, points):
    return _active.horner_triple(coeffs, points)


def horner_pair(coeffs, points):
    return _active.horner_pair(coeffs, points)


def horner_eval(coeffs, points):
    return _active.horner_eval(coeffs, points)


def cauchy_truncated(a, b, n_out):
    return _active.cauchy_truncated(a, b, n_out)
