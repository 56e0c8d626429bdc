"""Stable JSON encoding of engine values.

All report and chart output flows through :func:`stable_dumps`, so a
fixed format version always produces byte-identical documents.
"""

from __future__ import annotations

import json
from typing import Any

from .abelian import (
    OMEGA,
    DirectSum,
    Fg,
    FgAbelianGroup,
    PPrimary,
    RationalVS,
    StructuredAbelian,
    SymbolicInfinity,
    Zero,
    direct_sum,
)

FORMAT_VERSION = "1.0"


def stable_dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=True) + "\n"


def cardinal_to_json(c) -> Any:
    return "omega" if isinstance(c, SymbolicInfinity) else int(c)


def cardinal_from_json(v):
    if v == "omega":
        return OMEGA
    if isinstance(v, int) and v >= 0:
        return v
    raise ValueError(f"not a cardinal: {v!r}")


def structured_to_json(m: StructuredAbelian) -> dict:
    m = direct_sum(m)
    out: dict[str, Any] = {"label": m.label()}
    if isinstance(m, Zero):
        out["kind"] = "zero"
    elif isinstance(m, Fg):
        out["kind"] = "fg"
        out["free_rank"] = m.group.free_rank
        out["invariant_factors"] = list(m.group.invariant_factors)
    elif isinstance(m, RationalVS):
        out["kind"] = "rational"
        out["dim"] = cardinal_to_json(m.dim)
    elif isinstance(m, PPrimary):
        out["kind"] = "p_primary"
        out["p"] = m.p
        out["orders"] = {str(e): cardinal_to_json(mult) for e, mult in m.orders}
    elif isinstance(m, DirectSum):
        out["kind"] = "sum"
        out["parts"] = [structured_to_json(p) for p in m.summands]
    else:
        raise TypeError(m)
    return out


def structured_from_json(data: Any) -> StructuredAbelian:
    if data == "zero":
        return direct_sum()
    if not isinstance(data, dict):
        raise ValueError(f"not a structured abelian group: {data!r}")
    kind = data.get("kind")
    if kind == "zero":
        return direct_sum()
    if kind == "fg":
        return direct_sum(Fg(FgAbelianGroup(
            int(data.get("free_rank", 0)),
            tuple(int(d) for d in data.get("invariant_factors", [])),
        )))
    if kind == "rational":
        return direct_sum(RationalVS(cardinal_from_json(data.get("dim", 1))))
    if kind == "p_primary":
        orders = tuple(sorted(
            (int(e), cardinal_from_json(mult))
            for e, mult in data.get("orders", {}).items()
        ))
        return direct_sum(PPrimary(int(data["p"]), orders))
    if kind == "sum":
        return direct_sum(*(structured_from_json(p) for p in data.get("parts", [])))
    raise ValueError(f"unknown abelian group kind: {kind!r}")
