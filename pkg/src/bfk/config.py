"""Enumeration size guards, overridable through ``BFK_SIZE_GUARD``.

The variable holds comma-separated ``name=value`` pairs, e.g.
``BFK_SIZE_GUARD="poincare_genus=3,solve_unknowns=80"``.
"""

from __future__ import annotations

import os

DEFAULTS = {
    "pmc_genus": 3,
    "poincare_genus": 2,
    "framing": 16,
    "solve_unknowns": 64,
    "diagram_points": 64,
    "delta_length": 64,
}

_overrides: dict[str, int] = {}


def _from_env() -> dict[str, int]:
    raw = os.environ.get("BFK_SIZE_GUARD", "").strip()
    out: dict[str, int] = {}
    if not raw:
        return out
    for item in raw.split(","):
        name, _, value = item.partition("=")
        name = name.strip()
        if name not in DEFAULTS:
            raise ValueError(f"BFK_SIZE_GUARD: unknown guard {name!r}")
        out[name] = int(value)
    return out


def guard(name: str) -> int:
    if name in _overrides:
        return _overrides[name]
    env = _from_env()
    return env.get(name, DEFAULTS[name])


def set_guard(name: str, value: int | None) -> None:
    """Process-local override (used by the CLI and tests); ``None`` clears it."""
    if name not in DEFAULTS:
        raise KeyError(name)
    if value is None:
        _overrides.pop(name, None)
    else:
        _overrides[name] = value
