"""State-sum driver around the enumeration kernel.

The compiled kernel (``_statesum``) is used when it was built; otherwise the
pure-Python one is.  Set ``KBSKEIN_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _statesum_py
from .diagram import (
    Diagram,
    Multicurve,
    StateClassificationError,
    StateCurves,
    SurfaceKind,
    classify_state,
)

try:
    from . import _statesum as _compiled
except ImportError:  # pragma: no cover - depends on the build
    _compiled = None

DEFAULT_MAX_CROSSINGS = 24
CHUNK = 1 << 15

_backend = "python" if (_compiled is None or os.environ.get("KBSKEIN_PURE_PYTHON")) else "compiled"


class CrossingBoundError(ValueError):
    pass


def available_backends() -> list[str]:
    return ["python"] + (["compiled"] if _compiled is not None else [])


def get_backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    global _backend
    if name not in available_backends():
        raise ValueError(f"backend {name!r} is not available")
    _backend = name


def _kernel(name: str | None):
    name = name or _backend
    if name == "compiled":
        return _compiled.enumerate_states
    return _statesum_py.enumerate_states


def _arrays(d: Diagram):
    n = len(d.arcs)
    port_arc = np.zeros(4 * d.ncrossings, dtype=np.int32)
    port_end = np.zeros(4 * d.ncrossings, dtype=np.int32)
    e0 = np.zeros(n, dtype=np.int32)
    e1 = np.zeros(n, dtype=np.int32)
    cx = np.zeros(n, dtype=np.int64)
    cy = np.zeros(n, dtype=np.int64)
    for i, (a, b, cnt) in enumerate(d.arcs):
        e0[i], e1[i] = a, b
        port_arc[a], port_end[a] = i, 0
        port_arc[b], port_end[b] = i, 1
        c = tuple(cnt) + (0, 0)
        cx[i], cy[i] = c[0], c[1]
    return port_arc, port_end, e0, e1, cx, cy


def _decode(key: int) -> tuple[int, int, int, int, int]:
    return (
        key >> 56,
        (key >> 44) & 0xFFF,
        (key >> 32) & 0xFFF,
        ((key >> 16) & 0xFFFF) - 32768,
        (key & 0xFFFF) - 32768,
    )


def _run_chunk(kernel, arrays, start, count):
    out = np.zeros(count, dtype=np.uint64)
    status = kernel(*arrays, start, count, out)
    if status:
        raise StateClassificationError(
            "non-primitive component" if status == 1 else "disjoint components in distinct classes"
        )
    keys, counts = np.unique(out, return_counts=True)
    return list(zip(keys.tolist(), counts.tolist()))


def state_histogram(
    d: Diagram,
    max_crossings: int = DEFAULT_MAX_CROSSINGS,
    backend: str | None = None,
    workers: int | None = None,
) -> Counter:
    """Count states by ``(number of A-smoothings, trivial circles, multicurve)``."""
    k = d.ncrossings
    if k > max_crossings:
        raise CrossingBoundError(f"{k} crossings exceeds the bound {max_crossings} (2^{k} states)")
    if len(d.arcs) >= 4096 or sum(sum(abs(x) for x in c) for _, _, c in d.arcs) >= 32768:
        raise ValueError("diagram too large for the packed state keys")

    loop_triv, loop_mc = classify_state(StateCurves(d.surface, d.loops))
    hist: Counter = Counter()
    if k == 0 and not d.arcs:
        hist[(0, loop_triv, loop_mc)] = 1
        return hist

    kernel = _kernel(backend)
    arrays = _arrays(d)
    total = 1 << k
    starts = range(0, total, CHUNK)
    raw: Counter = Counter()
    nworkers = workers if workers is not None else (os.cpu_count() or 1)
    if (backend or _backend) == "compiled" and nworkers > 1 and total > CHUNK:
        with ThreadPoolExecutor(max_workers=nworkers) as pool:
            parts = pool.map(lambda s: _run_chunk(kernel, arrays, s, min(CHUNK, total - s)), starts)
            for part in parts:
                for key, cnt in part:
                    raw[key] += cnt
    else:
        for s in starts:
            for key, cnt in _run_chunk(kernel, arrays, s, min(CHUNK, total - s)):
                raw[key] += cnt

    for key, cnt in raw.items():
        nA, triv, ness, p, q = _decode(key)
        triv += loop_triv
        if ness == 0:
            mc = loop_mc
        else:
            if d.surface is SurfaceKind.ANNULUS:
                mc = Multicurve.core(ness)
            elif d.surface is SurfaceKind.DISK:
                raise StateClassificationError("essential component on the disk")
            else:
                mc = Multicurve.torus(p, q, ness)
            if not loop_mc.is_empty:
                if loop_mc.primitive != mc.primitive:
                    raise StateClassificationError("free loop class differs from traced components")
                mc = mc.with_multiplicity(mc.m + loop_mc.m)
        hist[(nA, triv, mc)] += cnt
    return hist
