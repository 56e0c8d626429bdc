"""Decide which sufficient criterion certifies the comparison map.

A scenario bundles a profinite group, a spectrum, and optional extras
(closed subgroup, cofinal family, prime set, window limits).  Rules are
evaluated in a fixed priority order; the first applicable rule wins and
its verdict lists the licensed conclusions with per-hypothesis
certificates.  Failure of every rule yields an inconclusive verdict,
never a negative one; the only negative statement produced is the rank
obstruction against an equivalence between the spectrum and its full
homotopy fixed points.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Optional

from .abelian import SymbolicInfinity, decompose_div_plus_torsion
from .cohomology import (
    BAR_BUDGET,
    UndeterminedAt,
    continuous_cohomology,
    symbolic_cohomology,
)
from .errors import ScenarioInvalid
from .profinite import (
    TABLE_BUDGET,
    CanonicalFamily,
    CofinalFamily,
    Finite,
    FiniteGroupTable,
    OpenNormalDescriptor,
    Product,
    ProfiniteDescriptor,
    RefutedAt,
    canonical_tower,
    check_cofinal,
    closed_subgroup,
    quotient,
)
from .spectra import MoravaK, SpectrumDescriptor, degree_classes, is_bounded_above
from .abelian import p_adic_valuation


# ---------------------------------------------------------------------------
# scenario and verdict data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Limits:
    s_max: int = 4
    t_min: int = -8
    t_max: int = 8
    tower_depth: int = 3
    bar_budget: int = BAR_BUDGET
    table_budget: int = TABLE_BUDGET

    def validate(self) -> None:
        if self.s_max < 0:
            raise ScenarioInvalid("s_max must be nonnegative")
        if self.t_min > self.t_max:
            raise ScenarioInvalid("t_min must not exceed t_max")
        if self.tower_depth < 1:
            raise ScenarioInvalid("tower_depth must be at least 1")
        if self.bar_budget < 1 or self.table_budget < 1:
            raise ScenarioInvalid("budgets must be positive")
        if self.bar_budget > BAR_BUDGET or self.table_budget > TABLE_BUDGET:
            raise ScenarioInvalid("budgets exceed the global caps")


@dataclass(frozen=True)
class Scenario:
    group: ProfiniteDescriptor
    spectrum: SpectrumDescriptor
    subgroup: Optional[tuple[tuple[int, Optional[int]], ...]] = None
    family: Optional[CofinalFamily] = None
    primes_j: Optional[tuple[int, ...]] = None
    limits: Limits = Limits()

    def validate(self) -> None:
        self.limits.validate()
        if self.primes_j is not None and not self.primes_j:
            raise ScenarioInvalid("primes_J must be nonempty when given")


@dataclass(frozen=True)
class Certificate:
    hypothesis: str
    status: str  # "symbolic" or "depth-checked(k)"
    detail: str


@dataclass(frozen=True)
class Conclusion:
    tag: str        # phi_weak_equivalence | colim_presentation |
                    # fixed_points_equiv | unit_equiv
    statement: str
    subject: str = ""
    quotient: str = ""


@dataclass(frozen=True)
class RankRefutation:
    p: int
    n: int
    r: int
    rank: int
    statements: tuple[str, ...]


@dataclass(frozen=True)
class Verdict:
    rule: str  # FiniteG | BoundedAbove | Vanishing | CorDivisible | CorJTorsion | None
    applicable: bool
    ambient: str
    conclusions: tuple[Conclusion, ...] = ()
    certificates: tuple[Certificate, ...] = ()
    obstruction: Optional[RankRefutation] = None
    failure_reasons: tuple[str, ...] = ()


@lru_cache(maxsize=None)
def _cached_tower(g: ProfiniteDescriptor, depth: int, table_budget: int):
    return canonical_tower(g, depth, table_budget)


# ---------------------------------------------------------------------------
# conclusion builders
# ---------------------------------------------------------------------------

def _base_conclusions(g_label: str, x_label: str) -> list[Conclusion]:
    return [
        Conclusion(
            "phi_weak_equivalence",
            f"the comparison map into the colimit of fixed points of the "
            f"deeper-subgroup fixed points is a weak equivalence (ambient group {g_label})",
            subject=g_label,
        ),
        Conclusion(
            "colim_presentation",
            f"{x_label}^h({g_label}) ~ colim over open normal N of "
            f"{x_label}^h({g_label}/N)",
            subject=g_label,
        ),
    ]


def _member_conclusions(g: ProfiniteDescriptor, x_label: str,
                        member: OpenNormalDescriptor,
                        table_budget: int) -> list[Conclusion]:
    g_label = g.label()
    u_label = member.label()
    q_label = quotient(g, member, table_budget).label()
    sub_label = member.member_group().label()
    return [
        Conclusion(
            "fixed_points_equiv",
            f"{x_label}^h({g_label}/U) ~ {x_label}^h({g_label}) for U = {u_label}, "
            f"where {g_label}/U is {q_label}",
            subject=u_label,
            quotient=q_label,
        ),
        Conclusion(
            "unit_equiv",
            f"{x_label} ~ {x_label}^h({sub_label}) (the subgroup U = {u_label} "
            f"acting trivially)",
            subject=sub_label,
        ),
    ]


def _universal_conclusions(g_label: str, x_label: str, family_note: str) -> list[Conclusion]:
    return [
        Conclusion(
            "fixed_points_equiv",
            f"{x_label}^h({g_label}/U) ~ {x_label}^h({g_label}) for every member U "
            f"of {family_note}",
            subject=f"every member of {family_note}",
        ),
        Conclusion(
            "unit_equiv",
            f"{x_label} ~ {x_label}^hU for every member U of {family_note}",
            subject=f"every member of {family_note}",
        ),
    ]


def _whole_group_unit(g_label: str, x_label: str) -> Conclusion:
    return Conclusion(
        "unit_equiv",
        f"{x_label} ~ {x_label}^h({g_label}) (the whole group is an open normal "
        f"subgroup of itself)",
        subject=g_label,
    )


# ---------------------------------------------------------------------------
# individual rules
# ---------------------------------------------------------------------------

def check_finite(g: ProfiniteDescriptor) -> Verdict:
    """The comparison map is a weak equivalence whenever the group is finite."""
    size = g.order().as_int()
    if size is None:
        return Verdict("None", False, g.label(),
                       failure_reasons=("the group is not finite",))
    return Verdict(
        "FiniteG", True, g.label(),
        conclusions=(
            Conclusion(
                "phi_weak_equivalence",
                f"the comparison map is a weak equivalence: the group is finite "
                f"(order {size}), so the trivial subgroup is terminal among open "
                f"normal subgroups",
                subject=g.label(),
            ),
        ),
        certificates=(Certificate(
            "the group is finite", "symbolic", f"order {size} is a finite integer"),),
    )


def check_bounded(g: ProfiniteDescriptor, x: SpectrumDescriptor) -> Verdict:
    """Bounded-above homotopy makes the comparison map a weak equivalence."""
    answer, witness = is_bounded_above(x)
    if answer is not True:
        reason = (
            "homotopy is not bounded above (a periodic line forces nonzero "
            "groups in arbitrarily high degrees)" if answer is False
            else "boundedness of the homotopy could not be decided"
        )
        return Verdict("None", False, g.label(), failure_reasons=(reason,))
    return Verdict(
        "BoundedAbove", True, g.label(),
        conclusions=tuple(_base_conclusions(g.label(), x.label())),
        certificates=(Certificate(
            "the spectrum is bounded above", "symbolic",
            f"homotopy vanishes in degrees above {witness}"),),
    )


def _family_members_for_checks(family: CofinalFamily, g: ProfiniteDescriptor,
                               limits: Limits) -> tuple[list[OpenNormalDescriptor], str, bool]:
    """(representatives, family description, uniform) for hypothesis checks.

    ``uniform`` means every member of the (possibly infinite) family has
    the same member-group order, so one symbolic check covers them all.
    """
    if isinstance(family, CanonicalFamily):
        tower = _cached_tower(g, limits.tower_depth, limits.table_budget)
        members = list(tower.kernels)
        return members, "the canonical tower kernels", True
    pattern = family.recognized_basis_pattern()
    return list(family.members), "the declared chain", pattern


def check_vanishing(g: ProfiniteDescriptor, x: SpectrumDescriptor,
                    family: Optional[CofinalFamily], limits: Limits) -> Verdict:
    """Cofinal family with vanishing positive-degree cohomology on each member."""
    family = family if family is not None else CanonicalFamily()
    g_label, x_label = g.label(), x.label()
    cof = check_cofinal(family, g, limits.tower_depth, limits.table_budget)
    if isinstance(cof, RefutedAt):
        return Verdict(
            "None", False, g_label,
            failure_reasons=(
                f"the family is not cofinal: refuted at tower level {cof.level} "
                f"with witness {cof.witness}",
            ),
        )
    certificates = [Certificate(
        "the family is cofinal among open normal subgroups",
        cof.kind if cof.kind == "symbolic" else f"depth-checked({cof.depth})",
        cof.detail,
    )]

    classes = degree_classes(x)
    if classes is None:
        classes = tuple(
            _window_degree_class(x, t) for t in range(limits.t_min, limits.t_max + 1)
        )
        coverage = f"degrees {limits.t_min}..{limits.t_max} within the window only"
        full_coverage = False
    else:
        coverage = "all integer degrees, via the periodic degree structure"
        full_coverage = True

    members, family_note, uniform = _family_members_for_checks(family, g, limits)
    check_members = members[:1] if uniform else members[: limits.tower_depth + 1]

    failure: Optional[str] = None
    for member in check_members:
        sub = member.member_group()
        sub_label = sub.label()
        symbolic_ok = []
        computational = []
        for cls in classes:
            if cls.value.is_zero():
                continue
            verdict = symbolic_cohomology(sub, cls.value, 1)
            if verdict.is_vanishes():
                symbolic_ok.append((cls, verdict))
                continue
            if not cls.value.is_finitely_generated():
                failure = (
                    f"no symbolic rule certifies H^s_c({sub_label}, "
                    f"{cls.value.label()}) = 0 at {cls.description}"
                )
                break
            for s in range(1, limits.s_max + 1):
                value = continuous_cohomology(
                    sub, cls.value, s, depth=limits.tower_depth,
                    budget=limits.bar_budget, table_budget=limits.table_budget,
                )
                if isinstance(value, UndeterminedAt):
                    failure = (
                        f"H^{s}_c({sub_label}, {cls.value.label()}) undetermined "
                        f"at depth {value.depth} ({cls.description})"
                    )
                    break
                if not value.is_zero():
                    failure = (
                        f"H^{s}_c({sub_label}, {cls.value.label()}) = "
                        f"{value.label()} is nonzero ({cls.description})"
                    )
                    break
            if failure:
                break
            computational.append(cls)
        if failure:
            break
        status = "symbolic" if not computational else f"depth-checked({limits.tower_depth})"
        scope = ("every member of the family (members are isomorphic: only "
                 "procyclic shifts vary)") if uniform else f"member {member.label()}"
        detail_bits = []
        if symbolic_ok:
            detail_bits.append(
                f"{len(symbolic_ok)} degree class(es) vanish symbolically: "
                + "; ".join(sorted({v.detail for _, v in symbolic_ok}))
            )
        if computational:
            detail_bits.append(
                f"{len(computational)} degree class(es) verified by the inflation "
                f"colimit up to filtration {limits.s_max} at depth {limits.tower_depth}"
            )
        if not detail_bits:
            detail_bits.append("all homotopy in the window vanishes")
        certificates.append(Certificate(
            f"H^s vanishes for s > 0 on {scope} ({coverage})", status,
            "; ".join(detail_bits),
        ))
    if failure:
        return Verdict("None", False, g_label, failure_reasons=(failure,))
    if not full_coverage:
        certificates.append(Certificate(
            "degree coverage", f"depth-checked({limits.tower_depth})",
            "hypotheses were checked only for degrees inside the window",
        ))

    conclusions = _base_conclusions(g_label, x_label)
    conclusions.extend(_universal_conclusions(g_label, x_label, family_note))
    display = members if not isinstance(family, CanonicalFamily) else members[:2]
    for member in display:
        conclusions.extend(_member_conclusions(g, x_label, member, limits.table_budget))
        if member.is_whole_group():
            conclusions.append(_whole_group_unit(g_label, x_label))
    return Verdict("Vanishing", True, g_label,
                   conclusions=tuple(conclusions), certificates=tuple(certificates))


def _window_degree_class(x: SpectrumDescriptor, t: int):
    from .spectra import DegreeClass, homotopy_of
    return DegreeClass(f"degree t = {t}", t, homotopy_of(x, t))


def check_cor_divisible(g: ProfiniteDescriptor, x: SpectrumDescriptor) -> Verdict:
    """Degreewise torsion-free divisible homotopy; works for every group."""
    g_label, x_label = g.label(), x.label()
    classes = degree_classes(x)
    if classes is None:
        return Verdict("None", False, g_label,
                       failure_reasons=("degree structure too large to certify",))
    for cls in classes:
        if not cls.value.is_torsion_free_divisible():
            return Verdict(
                "None", False, g_label,
                failure_reasons=(
                    f"homotopy at {cls.description} is {cls.value.label()}, "
                    f"not torsion-free divisible",
                ),
            )
    family_note = "the full collection of open normal subgroups"
    conclusions = _base_conclusions(g_label, x_label)
    conclusions.extend(_universal_conclusions(g_label, x_label, family_note))
    conclusions.append(_whole_group_unit(g_label, x_label))
    certificates = (
        Certificate(
            "homotopy is degreewise torsion-free divisible", "symbolic",
            "checked on every degree class of the periodic degree structure",
        ),
        Certificate(
            "higher cohomology of every open normal subgroup vanishes", "symbolic",
            "torsion-free divisible coefficients have vanishing higher cohomology "
            "(imported result; hypotheses checked, conclusion trusted); the "
            "vanishing family is the full collection of open normal subgroups",
        ),
    )
    return Verdict("CorDivisible", True, g_label,
                   conclusions=tuple(conclusions), certificates=certificates)


def check_cor_j(g: ProfiniteDescriptor, subgroup_spec, x: SpectrumDescriptor,
                j_primes, limits: Limits) -> Verdict:
    """J-torsion-plus-divisible homotopy over a group of order prime to J.

    Conclusions are emitted relative to the ambient closed subgroup H
    (H = G when no subgroup is specified).
    """
    g_label = g.label()
    if not j_primes:
        return Verdict("None", False, g_label,
                       failure_reasons=("no prime set J was provided",))
    j_primes = tuple(sorted(set(j_primes)))
    ambient = closed_subgroup(g, dict(subgroup_spec)) if subgroup_spec else g
    h_label = ambient.label()
    x_label = x.label()

    certificates = []
    g_order = g.order()
    for p in j_primes:
        e = g_order.exponent(p)
        if isinstance(e, SymbolicInfinity) or e != 0:
            return Verdict(
                "None", False, h_label,
                failure_reasons=(
                    f"{p} divides #G = {g_order.label()} (exponent {e})",
                ),
            )
    certificates.append(Certificate(
        "no prime of J divides #G", "symbolic",
        f"#G = {g_order.label()}; the exponent of each p in J = "
        f"{{{', '.join(map(str, j_primes))}}} is 0",
    ))

    classes = degree_classes(x)
    if classes is None:
        return Verdict("None", False, h_label,
                       failure_reasons=("degree structure too large to certify",))
    for cls in classes:
        if decompose_div_plus_torsion(cls.value, j_primes) is None:
            return Verdict(
                "None", False, h_label,
                failure_reasons=(
                    f"homotopy at {cls.description} is {cls.value.label()}, which "
                    f"does not split as torsion-free divisible plus J-torsion",
                ),
            )
    certificates.append(Certificate(
        "homotopy splits degreewise as divisible plus J-torsion", "symbolic",
        "checked on every degree class of the periodic degree structure",
    ))
    certificates.append(Certificate(
        "higher cohomology of every open normal subgroup of H vanishes", "symbolic",
        "the divisible part vanishes by divisibility; the J-torsion part vanishes "
        "because #H divides #G and restriction to the trivial subgroup is injective "
        "(imported results; hypotheses checked, conclusions trusted); the vanishing "
        "family is the full collection of open normal subgroups of H",
    ))

    family_note = "the full collection of open normal subgroups of the ambient group"
    conclusions = _base_conclusions(h_label, x_label)
    conclusions.extend(_universal_conclusions(h_label, x_label, family_note))
    conclusions.append(_whole_group_unit(h_label, x_label))
    return Verdict("CorJTorsion", True, h_label,
                   conclusions=tuple(conclusions), certificates=tuple(certificates))


def refute_equivalence(g: ProfiniteDescriptor, x: SpectrumDescriptor
                       ) -> Optional[RankRefutation]:
    """Rank obstruction against X ~ X^hG from a finite cyclic p-power factor.

    Applies exactly when the group has a direct factor that is cyclic of
    order p^r and the spectrum is the n-th Morava K-theory at the same
    p: the fixed points of the cyclic factor form a free module of rank
    p^(n r) over the coefficient ring, so for rank > 1 no equivalence
    with the spectrum itself can exist.
    """
    if not isinstance(x, MoravaK):
        return None
    tables: list[FiniteGroupTable] = []
    if isinstance(g, Finite):
        tables.append(g.group)
    elif isinstance(g, Product):
        tables.extend(f.group for f in g.factors if isinstance(f, Finite))
    for table in tables:
        size = table.size
        if size <= 1 or not table.is_cyclic():
            continue
        if size % x.p:
            continue
        r = p_adic_valuation(size, x.p)
        if x.p ** r != size:
            continue
        rank = x.p ** (x.n * r)
        return RankRefutation(
            x.p, x.n, r, rank,
            statements=(
                f"pi_*(X^h(Z/{size})) is a free module of rank {rank} = "
                f"{x.p}^({x.n}*{r}) over the coefficient ring of {x.label()} "
                f"(imported computation of the K-theory of the classifying space "
                f"of Z/{size})",
                f"rank {rank} > 1, so pi_*(X^hG) and pi_*(X) are not isomorphic "
                f"as graded abelian groups",
                "there is no equivalence between X^hG and X",
                "G does not belong to {U}",
            ),
        )
    return None


RULE_ORDER = ("FiniteG", "CorDivisible", "CorJTorsion", "Vanishing", "BoundedAbove")


def run_all(scenario: Scenario) -> Verdict:
    """Evaluate the rules in priority order and merge the rank obstruction."""
    scenario.validate()
    g, x = scenario.group, scenario.spectrum
    obstruction = refute_equivalence(g, x)
    failures: list[str] = []
    for rule in RULE_ORDER:
        if rule == "FiniteG":
            verdict = check_finite(g)
        elif rule == "CorDivisible":
            verdict = check_cor_divisible(g, x)
        elif rule == "CorJTorsion":
            verdict = check_cor_j(g, scenario.subgroup, x, scenario.primes_j,
                                  scenario.limits)
        elif rule == "Vanishing":
            verdict = check_vanishing(g, x, scenario.family, scenario.limits)
        else:
            verdict = check_bounded(g, x)
        if verdict.applicable:
            return replace(verdict, obstruction=obstruction)
        failures.extend(f"{rule}: {reason}" for reason in verdict.failure_reasons)
    return Verdict("None", False, g.label(), obstruction=obstruction,
                   failure_reasons=tuple(failures))
