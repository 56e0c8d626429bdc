"""Scenario file parsing and report document assembly.

Scenarios are strict JSON: unknown keys are rejected everywhere, and the
descriptor grammars match the group and spectrum modules exactly.
Reports are emitted through the stable JSON writer, so a fixed format
version yields byte-identical documents.
"""

from __future__ import annotations

from typing import Any, Optional

from .checker import (
    Certificate,
    Conclusion,
    Limits,
    RankRefutation,
    Scenario,
    Verdict,
)
from .errors import InvalidSubgroup, ScenarioInvalid, UnsupportedGroupShape
from .profinite import (
    CanonicalFamily,
    CofinalFamily,
    DeclaredChain,
    Finite,
    FiniteGroupTable,
    OpenNormalDescriptor,
    PrimeIndexedProduct,
    PrimeSet,
    Procyclic,
    Product,
    ProfiniteDescriptor,
)
from .serialize import FORMAT_VERSION, structured_from_json, structured_to_json
from .spectra import HQ, GradedPiece, MoravaK, Shift, SpectrumDescriptor, Wedge

_SCENARIO_KEYS = {"group", "subgroup", "spectrum", "family", "primes_J", "limits"}
_LIMIT_KEYS = {"s_max", "t_min", "t_max", "tower_depth", "bar_budget", "table_budget"}


def _require_keys(data: dict, allowed: set[str], context: str) -> None:
    unknown = set(data) - allowed
    if unknown:
        raise ScenarioInvalid(
            f"unknown key(s) {sorted(unknown)} in {context}; allowed: {sorted(allowed)}"
        )


def _require_int(value: Any, context: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ScenarioInvalid(f"{context} must be an integer, got {value!r}")
    return value


# ---------------------------------------------------------------------------
# group descriptors
# ---------------------------------------------------------------------------

def group_from_json(data: Any, *, _nested: bool = False) -> ProfiniteDescriptor:
    if not isinstance(data, dict):
        raise ScenarioInvalid(f"group descriptor must be an object, got {data!r}")
    kind = data.get("type")
    try:
        if kind == "trivial":
            _require_keys(data, {"type"}, "trivial group")
            return Finite(FiniteGroupTable.trivial())
        if kind == "cyclic":
            _require_keys(data, {"type", "order"}, "cyclic group")
            n = _require_int(data.get("order"), "cyclic order")
            if n < 1:
                raise ScenarioInvalid("cyclic order must be positive")
            return Finite(FiniteGroupTable.cyclic(n))
        if kind == "table":
            _require_keys(data, {"type", "table"}, "group table")
            rows = data.get("table")
            if not isinstance(rows, list):
                raise ScenarioInvalid("group table must be a list of rows")
            table = tuple(tuple(_require_int(x, "table entry") for x in row)
                          for row in rows)
            return Finite(FiniteGroupTable(table))
        if kind == "procyclic":
            _require_keys(data, {"type", "p", "shift"}, "procyclic group")
            p = _require_int(data.get("p"), "procyclic prime")
            shift = _require_int(data.get("shift", 0), "procyclic shift")
            return Procyclic(p, shift)
        if kind == "product":
            _require_keys(data, {"type", "factors"}, "product group")
            factors = data.get("factors")
            if not isinstance(factors, list) or not factors:
                raise ScenarioInvalid("product needs a nonempty factor list")
            if _nested:
                raise ScenarioInvalid("nested products are not supported")
            return Product(tuple(group_from_json(f, _nested=True) for f in factors))
        if kind == "prime_indexed_product":
            _require_keys(data, {"type", "primes", "local"}, "prime-indexed product")
            if _nested:
                raise ScenarioInvalid("nested products are not supported")
            index = _prime_set_from_json(data.get("primes"))
            local = []
            for key, val in (data.get("local") or {}).items():
                p = _parse_prime_key(key)
                if val == "trivial":
                    local.append((p, None))
                else:
                    local.append((p, _require_int(val, f"local shift at {p}")))
            return PrimeIndexedProduct(index, tuple(sorted(local)))
    except (ValueError, UnsupportedGroupShape) as exc:
        raise ScenarioInvalid(str(exc)) from exc
    raise ScenarioInvalid(f"unknown group type: {kind!r}")


def _parse_prime_key(key: Any) -> int:
    try:
        return int(key)
    except (TypeError, ValueError):
        raise ScenarioInvalid(f"expected a prime as key, got {key!r}") from None


def _prime_set_from_json(data: Any) -> PrimeSet:
    try:
        if data == "all":
            return PrimeSet.all_primes()
        if isinstance(data, dict):
            _require_keys(data, {"all_except"}, "prime set")
            return PrimeSet.all_except(
                _require_int(p, "excluded prime") for p in data["all_except"]
            )
        if isinstance(data, list):
            return PrimeSet.of(_require_int(p, "prime") for p in data)
    except ValueError as exc:
        raise ScenarioInvalid(str(exc)) from exc
    raise ScenarioInvalid(f"not a prime set: {data!r}")


def group_to_json(g: ProfiniteDescriptor) -> dict:
    if isinstance(g, Finite):
        if g.group.size == 1:
            return {"type": "trivial"}
        if g.group.is_cyclic():
            return {"type": "cyclic", "order": g.group.size}
        return {"type": "table", "table": [list(r) for r in g.group.table]}
    if isinstance(g, Procyclic):
        return {"type": "procyclic", "p": g.p, "shift": g.shift}
    if isinstance(g, Product):
        return {"type": "product", "factors": [group_to_json(f) for f in g.factors]}
    if isinstance(g, PrimeIndexedProduct):
        return {
            "type": "prime_indexed_product",
            "primes": _prime_set_to_json(g.index),
            "local": {str(p): ("trivial" if s is None else s) for p, s in g.local},
        }
    raise TypeError(g)


def _prime_set_to_json(ps: PrimeSet) -> Any:
    if ps.cofinite:
        if not ps.primes:
            return "all"
        return {"all_except": sorted(ps.primes)}
    return sorted(ps.primes)


# ---------------------------------------------------------------------------
# spectrum descriptors
# ---------------------------------------------------------------------------

def spectrum_from_json(data: Any) -> SpectrumDescriptor:
    if not isinstance(data, dict):
        raise ScenarioInvalid(f"spectrum descriptor must be an object, got {data!r}")
    kind = data.get("type")
    try:
        if kind == "hq":
            _require_keys(data, {"type"}, "rational Eilenberg-MacLane spectrum")
            return HQ()
        if kind == "morava_k":
            _require_keys(data, {"type", "n", "p"}, "Morava K-theory")
            return MoravaK(_require_int(data.get("n"), "n"),
                           _require_int(data.get("p"), "p"))
        if kind == "graded_piece":
            _require_keys(data, {"type", "degree", "value"}, "graded piece")
            return GradedPiece(structured_from_json(data.get("value")),
                               _require_int(data.get("degree"), "degree"))
        if kind == "shift":
            _require_keys(data, {"type", "k", "inner"}, "shifted spectrum")
            return Shift(_require_int(data.get("k"), "shift"),
                         spectrum_from_json(data.get("inner")))
        if kind == "wedge":
            _require_keys(data, {"type", "parts"}, "wedge")
            parts = data.get("parts")
            if not isinstance(parts, list) or not parts:
                raise ScenarioInvalid("wedge needs a nonempty part list")
            return Wedge(tuple(spectrum_from_json(p) for p in parts))
    except ValueError as exc:
        raise ScenarioInvalid(str(exc)) from exc
    raise ScenarioInvalid(f"unknown spectrum type: {kind!r}")


def spectrum_to_json(x: SpectrumDescriptor) -> dict:
    if isinstance(x, HQ):
        return {"type": "hq"}
    if isinstance(x, MoravaK):
        return {"type": "morava_k", "n": x.n, "p": x.p}
    if isinstance(x, GradedPiece):
        return {"type": "graded_piece", "degree": x.degree,
                "value": structured_to_json(x.value)}
    if isinstance(x, Shift):
        return {"type": "shift", "k": x.k, "inner": spectrum_to_json(x.inner)}
    if isinstance(x, Wedge):
        return {"type": "wedge", "parts": [spectrum_to_json(p) for p in x.parts]}
    raise TypeError(x)


# ---------------------------------------------------------------------------
# families and subgroup specs
# ---------------------------------------------------------------------------

def family_from_json(data: Any, group: ProfiniteDescriptor) -> CofinalFamily:
    if data == "canonical":
        return CanonicalFamily()
    if isinstance(data, list) and data:
        members = tuple(_member_from_json(m, group) for m in data)
        try:
            return DeclaredChain(members)
        except InvalidSubgroup as exc:
            raise ScenarioInvalid(str(exc)) from exc
    raise ScenarioInvalid(
        'family must be "canonical" or a nonempty list of members'
    )


def _member_from_json(data: Any, group: ProfiniteDescriptor) -> OpenNormalDescriptor:
    if not isinstance(data, dict):
        raise ScenarioInvalid(f"family member must be an object, got {data!r}")
    _require_keys(data, {"slots"}, "family member")
    slots = data.get("slots")
    if not isinstance(slots, dict):
        raise ScenarioInvalid("family member needs a slots object")
    payload = {}
    for key, spec in slots.items():
        slot_key = _parse_prime_key(key)
        if not isinstance(spec, dict):
            raise ScenarioInvalid(f"slot spec must be an object, got {spec!r}")
        _require_keys(spec, {"exponent", "subgroup"}, f"slot {key}")
        if "exponent" in spec and "subgroup" in spec:
            raise ScenarioInvalid(f"slot {key} must give exactly one of exponent/subgroup")
        if "exponent" in spec:
            payload[slot_key] = _require_int(spec["exponent"], f"slot {key} exponent")
        elif "subgroup" in spec:
            if not isinstance(spec["subgroup"], list):
                raise ScenarioInvalid(f"slot {key} subgroup must be a list of indices")
            payload[slot_key] = frozenset(
                _require_int(i, f"slot {key} element") for i in spec["subgroup"]
            )
        else:
            raise ScenarioInvalid(f"slot {key} gives neither exponent nor subgroup")
    try:
        return OpenNormalDescriptor.make(group, payload)
    except InvalidSubgroup as exc:
        raise ScenarioInvalid(str(exc)) from exc


def family_to_json(family: CofinalFamily) -> Any:
    if isinstance(family, CanonicalFamily):
        return "canonical"
    out = []
    for m in family.members:
        slots = {}
        for key, spec in m.data:
            if isinstance(spec, frozenset):
                slots[str(key)] = {"subgroup": sorted(spec)}
            else:
                slots[str(key)] = {"exponent": spec}
        out.append({"slots": slots})
    return out


def subgroup_spec_from_json(data: Any) -> tuple[tuple[int, Optional[int]], ...]:
    if not isinstance(data, dict) or not data:
        raise ScenarioInvalid("subgroup spec must be a nonempty object prime -> shift")
    out = []
    for key, val in data.items():
        p = _parse_prime_key(key)
        if val == "trivial":
            out.append((p, None))
        else:
            shift = _require_int(val, f"subgroup shift at {p}")
            if shift < 0:
                raise ScenarioInvalid("subgroup shifts must be nonnegative")
            out.append((p, shift))
    return tuple(sorted(out))


def subgroup_spec_to_json(spec) -> dict:
    return {str(p): ("trivial" if s is None else s) for p, s in spec}


# ---------------------------------------------------------------------------
# scenario
# ---------------------------------------------------------------------------

def parse_scenario(data: Any) -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioInvalid("scenario must be a JSON object")
    _require_keys(data, _SCENARIO_KEYS, "scenario")
    if "group" not in data:
        raise ScenarioInvalid("scenario needs a group")
    if "spectrum" not in data:
        raise ScenarioInvalid("scenario needs a spectrum")
    group = group_from_json(data["group"])
    spectrum = spectrum_from_json(data["spectrum"])
    subgroup = None
    if "subgroup" in data:
        subgroup = subgroup_spec_from_json(data["subgroup"])
        try:
            from .profinite import closed_subgroup
            closed_subgroup(group, dict(subgroup))
        except UnsupportedGroupShape as exc:
            raise ScenarioInvalid(str(exc)) from exc
    family = None
    if "family" in data:
        family = family_from_json(data["family"], group)
    primes_j = None
    if "primes_J" in data:
        if not isinstance(data["primes_J"], list) or not data["primes_J"]:
            raise ScenarioInvalid("primes_J must be a nonempty list of primes")
        primes_j = tuple(sorted(
            _require_int(p, "prime in primes_J") for p in data["primes_J"]
        ))
    limits = _limits_from_json(data.get("limits") or {})
    scenario = Scenario(group=group, spectrum=spectrum, subgroup=subgroup,
                        family=family, primes_j=primes_j, limits=limits)
    scenario.validate()
    return scenario


def _limits_from_json(data: Any) -> Limits:
    if not isinstance(data, dict):
        raise ScenarioInvalid("limits must be an object")
    _require_keys(data, _LIMIT_KEYS, "limits")
    defaults = Limits()
    return Limits(
        s_max=_require_int(data.get("s_max", defaults.s_max), "s_max"),
        t_min=_require_int(data.get("t_min", defaults.t_min), "t_min"),
        t_max=_require_int(data.get("t_max", defaults.t_max), "t_max"),
        tower_depth=_require_int(data.get("tower_depth", defaults.tower_depth),
                                 "tower_depth"),
        bar_budget=_require_int(data.get("bar_budget", defaults.bar_budget),
                                "bar_budget"),
        table_budget=_require_int(data.get("table_budget", defaults.table_budget),
                                  "table_budget"),
    )


def scenario_to_json(s: Scenario) -> dict:
    out: dict[str, Any] = {
        "group": group_to_json(s.group),
        "spectrum": spectrum_to_json(s.spectrum),
        "limits": {
            "s_max": s.limits.s_max,
            "t_min": s.limits.t_min,
            "t_max": s.limits.t_max,
            "tower_depth": s.limits.tower_depth,
            "bar_budget": s.limits.bar_budget,
            "table_budget": s.limits.table_budget,
        },
    }
    if s.subgroup is not None:
        out["subgroup"] = subgroup_spec_to_json(s.subgroup)
    if s.family is not None:
        out["family"] = family_to_json(s.family)
    if s.primes_j is not None:
        out["primes_J"] = list(s.primes_j)
    return out


# ---------------------------------------------------------------------------
# report documents
# ---------------------------------------------------------------------------

def conclusion_to_json(c: Conclusion) -> dict:
    out = {"tag": c.tag, "statement": c.statement}
    if c.subject:
        out["subject"] = c.subject
    if c.quotient:
        out["quotient"] = c.quotient
    return out


def certificate_to_json(c: Certificate) -> dict:
    return {"hypothesis": c.hypothesis, "status": c.status, "detail": c.detail}


def obstruction_to_json(o: RankRefutation) -> dict:
    return {
        "kind": "rank_refutation",
        "p": o.p,
        "n": o.n,
        "r": o.r,
        "rank": o.rank,
        "statements": list(o.statements),
    }


def verdict_to_json(v: Verdict) -> dict:
    return {
        "rule": v.rule,
        "applicable": v.applicable,
        "ambient_group": v.ambient,
        "conclusions": [conclusion_to_json(c) for c in v.conclusions],
        "certificates": [certificate_to_json(c) for c in v.certificates],
        "obstructions": ([obstruction_to_json(v.obstruction)]
                         if v.obstruction is not None else []),
    }


def report_document(scenario: Scenario, verdict: Verdict) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "scenario_echo": scenario_to_json(scenario),
        "verdict": verdict_to_json(verdict),
        "diagnostics": list(verdict.failure_reasons),
    }
