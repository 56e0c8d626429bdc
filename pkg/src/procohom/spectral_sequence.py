"""E2 pages of homotopy fixed point spectral sequences for trivial actions.

Cell (s, t) holds the degree-s cohomology of the acting group with
coefficients in the degree-t homotopy of the spectrum.  No differentials
are computed: a page either collapses (all positive filtrations vanish),
in which case the abutment is the filtration-zero row, or the abutment
is reported as undetermined.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .abelian import ZERO, StructuredAbelian
from .cohomology import (
    BAR_BUDGET,
    UndeterminedAt,
    continuous_cohomology,
    group_cohomology,
    symbolic_cohomology,
)
from .errors import UnknownFormat
from .profinite import (
    TABLE_BUDGET,
    FiniteGroupTable,
    OpenNormalDescriptor,
    ProfiniteDescriptor,
)
from .serialize import FORMAT_VERSION, stable_dumps, structured_to_json
from .spectra import SpectrumDescriptor, degree_classes, homotopy_of

CellValue = Union[StructuredAbelian, UndeterminedAt]

GroupLike = Union[FiniteGroupTable, ProfiniteDescriptor, OpenNormalDescriptor]


@dataclass
class E2Page:
    group_label: str
    spectrum_label: str
    s_max: int
    t_min: int
    t_max: int
    cells: dict[tuple[int, int], CellValue]
    collapse_certificate: Optional[str] = None

    def cell(self, s: int, t: int) -> CellValue:
        return self.cells[(s, t)]

    @property
    def has_undetermined(self) -> bool:
        return any(isinstance(v, UndeterminedAt) for v in self.cells.values())

    @property
    def collapsed_in_window(self) -> bool:
        """All positive-filtration cells are (determined) zero groups."""
        for (s, _), v in self.cells.items():
            if s == 0:
                continue
            if isinstance(v, UndeterminedAt) or not v.is_zero():
                return False
        return True


def _resolve_group(group: GroupLike) -> tuple[Optional[FiniteGroupTable],
                                              Optional[ProfiniteDescriptor], str]:
    if isinstance(group, FiniteGroupTable):
        return group, None, group.label()
    if isinstance(group, OpenNormalDescriptor):
        desc = group.member_group()
        return None, desc, desc.label()
    if isinstance(group, ProfiniteDescriptor):
        return None, group, group.label()
    raise TypeError(f"not a group argument: {group!r}")


def e2_page(group: GroupLike, x: SpectrumDescriptor, s_max: int,
            t_min: int, t_max: int, depth: int = 3,
            budget: int = BAR_BUDGET, table_budget: int = TABLE_BUDGET) -> E2Page:
    """Fill the window [0, s_max] x [t_min, t_max] of the E2 page.

    Symbolic vanishing rules are preferred; otherwise finite groups go
    through the cochain engine and profinite groups through the
    inflation colimit at the given tower depth.  Unresolved cells are
    flagged rather than guessed.
    """
    if s_max < 0:
        raise ValueError("the filtration window must contain s = 0")
    table, desc, label = _resolve_group(group)
    cells: dict[tuple[int, int], CellValue] = {}
    for t in range(t_min, t_max + 1):
        coeffs = homotopy_of(x, t)
        for s in range(s_max + 1):
            cells[(s, t)] = _cell_value(table, desc, coeffs, s, depth, budget,
                                        table_budget)
    page = E2Page(label, x.label(), s_max, t_min, t_max, cells)
    page.collapse_certificate = _collapse_certificate(table, desc, x)
    return page


def _cell_value(table, desc, coeffs: StructuredAbelian, s: int, depth: int,
                budget: int, table_budget: int) -> CellValue:
    u = table if table is not None else desc
    verdict = symbolic_cohomology(u, coeffs, s)
    if verdict.kind == "equals_coefficients":
        return coeffs
    if verdict.kind == "vanishes":
        return ZERO
    if table is not None:
        fg = coeffs.as_fg()
        if fg is None:
            return UndeterminedAt(0)
        return group_cohomology(table, fg, s, budget)
    return continuous_cohomology(desc, coeffs, s, depth=depth, budget=budget,
                                 table_budget=table_budget)


def _collapse_certificate(table, desc, x: SpectrumDescriptor) -> Optional[str]:
    """A symbolic all-degree vanishing certificate, when the rules give one."""
    classes = degree_classes(x)
    if classes is None:
        return None
    u = table if table is not None else desc
    for cls in classes:
        verdict = symbolic_cohomology(u, cls.value, 1)
        if verdict.kind != "vanishes":
            return None
    return (
        "symbolic: every positive-filtration entry vanishes in all degrees "
        "(vanishing rules applied classwise over the periodic degree structure)"
    )


# ---------------------------------------------------------------------------
# collapse and abutment
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Abutment:
    """The graded abutment read off a collapsed page, degreewise."""

    values: tuple[tuple[int, StructuredAbelian], ...]  # (t, group)
    note: str


def collapse_and_abutment(page: E2Page) -> Optional[Abutment]:
    """The abutment when the window collapses; None when undetermined.

    On collapse the abutment in degree t is the filtration-zero entry,
    which for a trivial action is the coefficient group itself.
    """
    if not page.collapsed_in_window:
        return None
    values = []
    for t in range(page.t_min, page.t_max + 1):
        v = page.cell(0, t)
        if isinstance(v, UndeterminedAt):
            return None
        values.append((t, v))
    note = "abutment equals the filtration-zero row, which equals the coefficients"
    if page.collapse_certificate:
        note += "; collapse certified symbolically in all degrees"
    else:
        note += "; collapse observed within the window only (window evidence)"
    return Abutment(tuple(values), note)


# ---------------------------------------------------------------------------
# chart rendering
# ---------------------------------------------------------------------------

def _cell_text(v: CellValue) -> str:
    if isinstance(v, UndeterminedAt):
        return "?"
    if v.is_zero():
        return "."
    return v.label()


def _cells_json(page: E2Page) -> list[dict]:
    out = []
    for (s, t) in sorted(page.cells):
        v = page.cells[(s, t)]
        if isinstance(v, UndeterminedAt):
            out.append({"s": s, "t": t, "value": None,
                        "status": f"undetermined(depth {v.depth})"})
        else:
            out.append({"s": s, "t": t, "value": structured_to_json(v),
                        "status": "computed"})
    return out


def render_chart(page: E2Page, format: str = "text") -> str:
    """Serialize the page as a chart; formats: text, json, svg.

    Output is deterministic and byte-stable for a fixed format version.
    """
    if format == "text":
        return _render_text(page)
    if format == "json":
        return _render_json(page)
    if format == "svg":
        return _render_svg(page)
    raise UnknownFormat(f"unknown chart format: {format!r}")


def _render_text(page: E2Page) -> str:
    header = [
        f"E2 page (chart format {FORMAT_VERSION})",
        f"group: {page.group_label} | spectrum: {page.spectrum_label}",
        f"window: s in [0, {page.s_max}], t in [{page.t_min}, {page.t_max}]",
        f"collapsed in window: {'yes' if page.collapsed_in_window else 'no'}",
    ]
    if page.collapse_certificate:
        header.append(f"certificate: {page.collapse_certificate}")
    if page.has_undetermined:
        header.append("legend: '?' = undetermined, '.' = zero")
    else:
        header.append("legend: '.' = zero")
    ts = list(range(page.t_min, page.t_max + 1))
    labels = {(s, t): _cell_text(page.cell(s, t))
              for t in ts for s in range(page.s_max + 1)}
    width = max([len(v) for v in labels.values()]
                + [len(str(t)) for t in ts] + [len(f"s={page.s_max}")])
    lines = list(header)
    lines.append("")
    for s in range(page.s_max, -1, -1):
        row = [f"s={s}".rjust(width)]
        row.extend(labels[(s, t)].rjust(width) for t in ts)
        lines.append("  ".join(row))
    axis = ["t".rjust(width)]
    axis.extend(str(t).rjust(width) for t in ts)
    lines.append("  ".join(axis))
    return "\n".join(lines) + "\n"


def _render_json(page: E2Page) -> str:
    doc = {
        "format_version": FORMAT_VERSION,
        "window": {"s_max": page.s_max, "t_min": page.t_min, "t_max": page.t_max},
        "group": page.group_label,
        "spectrum": page.spectrum_label,
        "cells": _cells_json(page),
        "flags": {
            "collapsed_in_window": page.collapsed_in_window,
            "has_undetermined": page.has_undetermined,
        },
        "collapse_certificate": page.collapse_certificate,
    }
    return stable_dumps(doc)


_SVG_CELL = 64
_SVG_PAD = 56


def _svg_escape(s: str) -> str:
    return (s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;"))


def _render_svg(page: E2Page) -> str:
    ts = list(range(page.t_min, page.t_max + 1))
    ncols = len(ts)
    nrows = page.s_max + 1
    w = _SVG_PAD + ncols * _SVG_CELL + 8
    h = _SVG_PAD + nrows * _SVG_CELL + 8
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<!-- chart format {FORMAT_VERSION} -->',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<text x="8" y="20" font-family="monospace" font-size="13">'
        f'{_svg_escape(page.group_label)} acting on {_svg_escape(page.spectrum_label)}'
        f'</text>',
    ]
    for row in range(nrows):
        s = page.s_max - row
        y = _SVG_PAD + row * _SVG_CELL
        parts.append(
            f'<text x="8" y="{y + _SVG_CELL // 2 + 4}" font-family="monospace" '
            f'font-size="12">s={s}</text>'
        )
        for col, t in enumerate(ts):
            x = _SVG_PAD + col * _SVG_CELL
            v = page.cell(s, t)
            fill = "#f3f3f3" if isinstance(v, UndeterminedAt) else "white"
            parts.append(
                f'<rect x="{x}" y="{y}" width="{_SVG_CELL}" height="{_SVG_CELL}" '
                f'fill="{fill}" stroke="#888"/>'
            )
            label = _cell_text(v)
            parts.append(
                f'<text x="{x + _SVG_CELL // 2}" y="{y + _SVG_CELL // 2 + 4}" '
                f'font-family="monospace" font-size="11" text-anchor="middle">'
                f'{_svg_escape(label)}</text>'
            )
    for col, t in enumerate(ts):
        x = _SVG_PAD + col * _SVG_CELL
        parts.append(
            f'<text x="{x + _SVG_CELL // 2}" y="{h - 10}" font-family="monospace" '
            f'font-size="12" text-anchor="middle">{t}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_png(page: E2Page, path: str) -> None:
    """Render the page as a matplotlib figure written to ``path``."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ts = list(range(page.t_min, page.t_max + 1))
    fig, ax = plt.subplots(
        figsize=(max(4.0, 0.8 * len(ts) + 1.5), max(3.0, 0.8 * (page.s_max + 1) + 1.5))
    )
    ax.set_xlim(page.t_min - 0.5, page.t_max + 0.5)
    ax.set_ylim(-0.5, page.s_max + 0.5)
    ax.set_xticks(ts)
    ax.set_yticks(range(page.s_max + 1))
    ax.set_xlabel("t")
    ax.set_ylabel("s")
    ax.set_title(f"{page.group_label} acting on {page.spectrum_label}")
    ax.grid(True, which="both", linewidth=0.4, alpha=0.5)
    for (s, t), v in page.cells.items():
        if isinstance(v, UndeterminedAt):
            ax.text(t, s, "?", ha="center", va="center", color="#aa3333")
        elif not v.is_zero():
            ax.text(t, s, v.label(), ha="center", va="center", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
