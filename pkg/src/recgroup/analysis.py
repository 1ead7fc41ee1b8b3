"""Turn a :class:`SystemConfig` into objects and run the selected analyses."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .config import SystemConfig
from .endo import induced_quotient_map, validate_endomorphism
from .entropy import estimate_from_table, entropy_table
from .errors import EntropyError, RecgroupError, TheoremViolation
from .group import FiniteAbelianGroup, as_subgroup, quotient_group, subgroup_closure
from .recurrence import SetKind, fixed_points, periodic_set, recurrence_report, verify_recurrent_subgroup
from .shadowing import check_quotient_shadowing, decide_shadowing
from .uniformity import Entourage, EntourageBase, halving_base, push_forward


@dataclass
class System:
    config: SystemConfig
    group: FiniteAbelianGroup
    f: object
    base: EntourageBase
    phi: object = None


def build_system(cfg: SystemConfig) -> System:
    G = FiniteAbelianGroup(cfg.moduli, cap=cfg.cap)
    G.check_cap()
    f = validate_endomorphism(G, cfg.matrix)
    if cfg.sets is not None:
        base = EntourageBase([Entourage.explicit(G, list(level)) for level in cfg.sets])
    else:
        base = halving_base(G, cfg.radius, cfg.depth)
    phi = validate_endomorphism(G, cfg.conjugacy) if cfg.conjugacy is not None else None
    return System(cfg, G, f, base, phi)


def set_kind(text: str, base: EntourageBase) -> SetKind:
    name, _, m = text.partition(":")
    if name in ("per", "eper"):
        return SetKind(name, int(m)) if m else SetKind(name + "-all")
    if name in ("cr", "cc"):
        return SetKind(name, entourage=base[0])
    if name in ("cr-base", "cc-base"):
        return SetKind(name, base=base)
    return SetKind(name)


def resolve_subgroup(system: System):
    text = system.config.subgroup
    G = system.group
    if text.startswith("gens"):
        gens = [tuple(int(t) for t in tok.split(",")) for tok in text[4:].split()]
        return subgroup_closure(G, gens)
    return as_subgroup(G, set_kind(text, system.base).compute(system.f))


def _radius_entourage(G, radius, fallback):
    return Entourage.ball(G, radius) if radius is not None else fallback


# -- report ----------------------------------------------------------------------------


@dataclass
class AnalysisReport:
    system: dict
    sections: list = field(default_factory=list)  # (name, dict), in request order
    version: str = __version__

    @property
    def exit_code(self) -> int:
        return max((s.get("exit_code", 0) for _, s in self.sections), default=0)


def _elements(space, idx) -> list:
    return [list(c) if isinstance(c, tuple) else c for c in space.labels(np.asarray(idx, dtype=np.int64))]


def _entourage_desc(E) -> dict:
    d = {"size": len(E)}
    if E.radii is not None:
        d["radii"] = list(E.radii)
    else:
        d["elements"] = _elements(E.space, E.members)
    return d


def system_echo(system: System) -> dict:
    cfg = system.config
    return {
        "moduli": list(cfg.moduli),
        "order": system.group.order,
        "matrix": [list(r) for r in system.f.matrix],
        "base": [_entourage_desc(E) for E in system.base],
    }


def section_recurrent_sets(system: System) -> dict:
    rep = recurrence_report(system.f, system.base, system.config.periods)
    G = system.group
    return {
        "sets": {name: {"size": len(s), "elements": _elements(G, s)} for name, s in rep.sets.items()},
        "inclusion_failures": [f"{a} not inside {b}" for a, b in rep.inclusion_failures()],
    }


def section_verify(system: System) -> dict:
    kind = set_kind(system.config.verify, system.base)
    S = kind.compute(system.f)
    verdict = verify_recurrent_subgroup(S, system.f, kind, phi=system.phi)
    out = {
        "set": verdict.label,
        "size": verdict.size,
        "elements": _elements(system.group, S),
        "axioms": {k: {"status": r.status, "detail": r.detail} for k, r in verdict.axioms.items()},
        "theorem_violations": verdict.violations,
    }
    if verdict.violations:
        out["exit_code"] = TheoremViolation.exit_code
    return out


def _verdict(space, v) -> dict:
    d = {"holds": v.holds, "states": v.states, "horizon": v.horizon}
    if not v.holds:
        d["counterexample"] = _elements(space, v.counterexample.points)
        d["empty_step"] = v.empty_step
    return d


def section_shadowing(system: System) -> dict:
    G = system.group
    D = _radius_entourage(G, system.config.shadow_d, system.base.finest)
    E = _radius_entourage(G, system.config.shadow_e, system.base[0])
    v = decide_shadowing(system.f, D, E, state_cap=system.config.cap)
    return {"D": _entourage_desc(D), "E": _entourage_desc(E), **_verdict(G, v)}


def section_quotient(system: System) -> dict:
    G, f = system.group, system.f
    H = resolve_subgroup(system)
    Q = quotient_group(G, H)
    ft = induced_quotient_map(f, H, Q)
    D = _radius_entourage(G, system.config.shadow_d, system.base.finest)
    E = _radius_entourage(G, system.config.shadow_e, system.base[0])
    pair = check_quotient_shadowing(f, H, D, E, state_cap=system.config.cap, strict=False)
    out = {
        "subgroup": {"size": len(H), "elements": _elements(G, H.indices)},
        "quotient_order": Q.order,
        "induced_fix": [_elements(G, Q.coset(c)) for c in fixed_points(ft)],
        "induced_per": [_elements(G, Q.coset(c)) for c in periodic_set(ft)],
        "shadowing_base": _verdict(G, pair.base),
        "shadowing_quotient": _verdict(Q, pair.quotient),
        "consistent": pair.consistent,
    }
    if not pair.consistent:
        out["theorem_violations"] = ["shadowing holds for f but not for the induced map"]
        out["exit_code"] = TheoremViolation.exit_code
    return out


def _rows(table) -> list:
    return [
        {"n": r.n, "sep": r.sep, "sep_exact": r.sep_exact, "span": r.span, "span_exact": r.span_exact}
        for r in table.rows
    ]


def _estimate(table) -> dict:
    try:
        est = estimate_from_table(table)
    except EntropyError as exc:
        return {"rows": _rows(table), "error": str(exc)}
    return {
        "rows": _rows(table),
        "slope": round(est.slope, 12),
        "span_slope": None if est.span_slope is None else round(est.span_slope, 12),
        "window": list(est.window),
        "saturation": est.saturation,
    }


def _n_range(cfg):
    return range(cfg.n_min, cfg.n_max + 1)


def section_entropy(system: System) -> dict:
    cfg = system.config
    E = _radius_entourage(system.group, cfg.entropy_radius, system.base[0])
    table = entropy_table(system.f, E, None, _n_range(cfg), cfg.exact_cap)
    return {"E": _entourage_desc(E), **_estimate(table)}


def section_addition(system: System) -> dict:
    cfg = system.config
    G, f = system.group, system.f
    H = resolve_subgroup(system)
    Q = quotient_group(G, H)
    ft = induced_quotient_map(f, H, Q)
    E = _radius_entourage(G, cfg.entropy_radius, system.base[0])
    ns = _n_range(cfg)
    parts = {
        "total": _estimate(entropy_table(f, E, None, ns, cfg.exact_cap)),
        "quotient": _estimate(entropy_table(ft, push_forward(E, Q), None, ns, cfg.exact_cap)),
        "restricted": _estimate(entropy_table(f, E, H.indices, ns, cfg.exact_cap)),
    }
    slopes = [p.get("slope") for p in parts.values()]
    margin = None if None in slopes else round(slopes[0] - slopes[1] - slopes[2], 12)
    return {"E": _entourage_desc(E), "subgroup_order": len(H), "quotient_order": Q.order, **parts, "margin": margin}


SECTIONS = {
    "recurrent-sets": section_recurrent_sets,
    "verify": section_verify,
    "shadowing": section_shadowing,
    "quotient": section_quotient,
    "entropy": section_entropy,
    "addition": section_addition,
}


def run_analysis(cfg: SystemConfig, selections=None) -> AnalysisReport:
    """Run ``selections`` (default: the config's ``run`` list) in order.

    A failing analysis becomes an ``error`` section carrying its exit code;
    the others still run.
    """
    system = build_system(cfg)
    report = AnalysisReport(system_echo(system))
    for name in cfg.run if selections is None else selections:
        try:
            section = SECTIONS[name](system)
        except RecgroupError as exc:
            section = {"error": str(exc), "exit_code": exc.exit_code}
        report.sections.append((name, section))
    return report
