"""Boundary location for monotone boolean predicates."""

from __future__ import annotations

from typing import Callable

from .errors import NonConvergence


def bisect_threshold(
    predicate: Callable[[float], bool],
    lo: float,
    hi: float,
    tol: float = 1e-9,
    max_iter: int = 60,
    max_expand: int = 30,
) -> float:
    """Return the point where ``predicate`` switches from False to True.

    ``predicate`` must be monotone: False below the threshold, True above it.
    If ``predicate(lo)`` already holds, ``lo`` is returned (the threshold lies
    at or below the bracket).  The upper end is doubled away from ``lo`` until
    the predicate holds there.
    """
    if predicate(lo):
        return lo
    width = hi - lo
    for _ in range(max_expand):
        if predicate(hi):
            break
        lo, width = hi, 2.0 * width
        hi = lo + width
    else:
        raise NonConvergence("predicate never became true while expanding the bracket")
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if predicate(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
