"""Floating-point exploration of branch geometry for arbitrary real slopes.

Nothing here classifies: multiplicative dependence cannot be decided from
floats, so these helpers only report approximate branch parameters and
endpoints.
"""

from __future__ import annotations

from itertools import product

from .errors import BudgetExceeded, InvalidInput


def explore_branches(r: float, rho: float, depth: int, cap: int = 16) -> list[dict]:
    if not (r > 0 and rho > 0):
        raise InvalidInput("slopes must be positive")
    if depth < 1:
        raise InvalidInput("depth must be >= 1")
    if depth > cap:
        raise BudgetExceeded(f"depth {depth} exceeds the float exploration cap {cap}")
    rows = []
    for word in product("RP", repeat=depth):
        prods = [1.0]
        for s in word:
            prods.append(prods[-1] * (r if s == "R" else rho))
        t = 1.0 / max(prods)
        rows.append({"word": "".join(word), "param_max": t, "endpoint": [t * p for p in prods]})
    return rows
