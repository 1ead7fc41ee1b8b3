"""Rendering of analysis reports (text, JSON, CSV) and chain-graph DOT export."""
from __future__ import annotations

import json

import numpy as np

from .analysis import AnalysisReport
from .recurrence import build_chain_graph

TEXT_LIST_LIMIT = 64


def _fmt_element(c) -> str:
    return "(" + ", ".join(str(v) for v in c) + ")" if isinstance(c, list) else str(c)


# keys whose values are element lists (or lists of them, for cosets)
ELEMENT_KEYS = {"elements", "counterexample", "induced_fix", "induced_per"}


def _elements_text(v) -> str:
    shown = ", ".join(_fmt_element(c) for c in v[:TEXT_LIST_LIMIT])
    more = f", ... ({len(v)} total)" if len(v) > TEXT_LIST_LIMIT else ""
    return "{" + shown + more + "}"


def _text_value(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v is None:
        return "-"
    if isinstance(v, list):
        return "[" + ", ".join(_text_value(x) for x in v) + "]"
    return str(v)


def _text_lines(obj, indent: int) -> list:
    pad = "  " * indent
    out = []
    for key, v in obj.items():
        if isinstance(v, dict):
            out.append(f"{pad}{key}:")
            out += _text_lines(v, indent + 1)
        elif key == "rows":
            out.append(f"{pad}{'n':>4} {'sep':>8} {'exact':>5} {'span':>8} {'exact':>5}")
            for r in v:
                out.append(f"{pad}{r['n']:>4} {r['sep']:>8} {_text_value(r['sep_exact']):>5} "
                           f"{r['span']:>8} {_text_value(r['span_exact']):>5}")
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            for i, item in enumerate(v):
                out.append(f"{pad}{key}[{i}]:")
                out += _text_lines(item, indent + 1)
        elif key.startswith("induced"):  # list of cosets
            out.append(f"{pad}{key}:")
            out += [f"{pad}  {_elements_text(item)}" for item in v]
        elif key in ELEMENT_KEYS:
            out.append(f"{pad}{key}: {_elements_text(v)}")
        else:
            out.append(f"{pad}{key}: {_text_value(v)}")
    return out


def render_text(report: AnalysisReport) -> str:
    lines = [f"recgroup {report.version}", "== system"]
    lines += _text_lines(report.system, 1)
    for name, section in report.sections:
        lines.append(f"== {name}")
        if "theorem_violations" in section and section["theorem_violations"]:
            lines.append("  !! THEOREM VIOLATION: " + "; ".join(section["theorem_violations"]))
        lines += _text_lines(section, 1)
    return "\n".join(lines) + "\n"


def render_json(report: AnalysisReport) -> str:
    doc = {
        "version": report.version,
        "system": report.system,
        "sections": [{"analysis": name, **section} for name, section in report.sections],
        "exit_code": report.exit_code,
    }
    return json.dumps(doc, indent=2) + "\n"


CSV_COLUMNS = ("n", "sep", "sep_exact", "span", "span_exact")


def render_csv(report: AnalysisReport) -> str:
    """One block per entropy table, each preceded by a ``# name`` line."""
    blocks = []

    def table(name, rows):
        lines = [f"# {name}", ",".join(CSV_COLUMNS)]
        for r in rows:
            lines.append(",".join(str(r[c]).lower() if isinstance(r[c], bool) else str(r[c]) for c in CSV_COLUMNS))
        blocks.append("\n".join(lines))

    for name, section in report.sections:
        if "rows" in section:
            table(name, section["rows"])
        for part in ("total", "quotient", "restricted"):
            if isinstance(section.get(part), dict) and "rows" in section[part]:
                table(f"{name}/{part}", section[part]["rows"])
    return "\n".join(blocks) + ("\n" if blocks else "")


def emit_report(report: AnalysisReport, fmt: str = "text") -> bytes:
    render = {"text": render_text, "json": render_json, "csv": render_csv}.get(fmt)
    if render is None:
        raise ValueError(f"unknown format {fmt!r}")
    return render(report).encode("utf-8")


def _node_label(space, x) -> str:
    c = space.label(int(x))
    return "(" + ",".join(str(v) for v in c) + ")" if isinstance(c, tuple) else str(c)


def export_chain_graph_dot(f, E, cap: int | None = None) -> str:
    """DOT digraph of the E-chain graph; cyclic components become clusters."""
    graph = build_chain_graph(f, E) if cap is None else build_chain_graph(f, E, cap)
    space = f.space
    labels, cyclic = graph.components()
    succ = graph.successor_table()
    lines = ["digraph chain {", "  node [shape=box];"]
    comps = {}
    for x in range(space.order):
        comps.setdefault(int(labels[x]), []).append(x)
    clustered = set()
    # clusters ordered by their smallest member
    for k, members in sorted(comps.items(), key=lambda kv: kv[1][0]):
        if not cyclic[k]:
            continue
        lines.append(f"  subgraph cluster_{members[0]} {{")
        lines.append(f'    label="component {_node_label(space, members[0])}";')
        for x in members:
            lines.append(f'    n{x} [label="{_node_label(space, x)}"];')
            clustered.add(x)
        lines.append("  }")
    for x in range(space.order):
        if x not in clustered:
            lines.append(f'  n{x} [label="{_node_label(space, x)}"];')
    for x in range(space.order):
        for y in np.unique(succ[x]).tolist():
            lines.append(f"  n{x} -> n{y};")
    lines.append("}")
    return "\n".join(lines) + "\n"
