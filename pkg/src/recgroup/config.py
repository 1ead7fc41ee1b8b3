"""Plain-text system configuration.

::

    recgroup-config v1
    [group]
    moduli = 8, 4
    [map]
    matrix = 3, 0; 1, 1
    [uniformity]
    radius = 2            # top ball; halving down to 0 unless depth is set
    depth = 3
    set = 0,0 0,1 0,3     # alternative: explicit levels, coarsest first
    [analysis]
    run = recurrent-sets, verify
    periods = 1, 2
    verify = fix          # fix | per:m | efix | eper:m | per | eper | cr | cc | cr-base | cc-base
    conjugacy = 1, 0; 0, 3
    subgroup = cr-base    # a set kind as above, or: gens 0,4 2,0
    shadow_d = 1
    shadow_e = 2
    entropy_radius = 1
    n_min = 1
    n_max = 6
    exact_cap = 24
    cap = 1000000

Blank lines and ``#`` comments are ignored.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .endo import hom_violations
from .errors import ValidationError
from .group import DEFAULT_CAP

HEADER = "recgroup-config v1"
ANALYSES = ("recurrent-sets", "verify", "shadowing", "quotient", "entropy", "addition")
SET_KINDS = ("fix", "per", "efix", "eper", "per-all", "eper-all", "cr", "cc", "cr-base", "cc-base")

_KEYS = {
    "group": {"moduli"},
    "map": {"matrix"},
    "uniformity": {"radius", "depth", "set"},
    "analysis": {
        "run", "periods", "verify", "conjugacy", "subgroup", "shadow_d", "shadow_e",
        "entropy_radius", "n_min", "n_max", "exact_cap", "cap",
    },
}


@dataclass
class SystemConfig:
    moduli: tuple
    matrix: tuple
    radius: tuple | None = None
    depth: int | None = None
    sets: tuple | None = None  # levels of coordinate tuples, coarsest first
    run: tuple = ("recurrent-sets",)
    periods: tuple = (1,)
    verify: str = "fix"
    conjugacy: tuple | None = None
    subgroup: str = "cr-base"
    shadow_d: tuple | None = None
    shadow_e: tuple | None = None
    entropy_radius: tuple | None = None
    n_min: int = 1
    n_max: int = 6
    exact_cap: int = 24
    cap: int = DEFAULT_CAP
    extra: dict = field(default_factory=dict)


def _ints(text: str) -> list:
    return [int(t) for t in text.replace(",", " ").split()]


def _matrix(text: str) -> tuple:
    return tuple(tuple(_ints(row)) for row in text.split(";"))


def _radius(text: str, rank: int | None) -> tuple:
    vals = _ints(text)
    if len(vals) == 1 and rank:
        vals = vals * rank
    return tuple(vals)


def _set_kind_ok(text: str) -> bool:
    name, _, m = text.partition(":")
    if name in ("per", "eper") and m:
        return m.isdigit() and int(m) >= 1
    return name in SET_KINDS and not m


def parse_system_config(text: str) -> SystemConfig:
    """Parse and validate; every problem is collected before raising."""
    errors = []
    raw = {}  # (section, key) -> list of (lineno, value)
    lines = text.splitlines()
    first = next(((i, l.strip()) for i, l in enumerate(lines, 1) if l.strip() and not l.strip().startswith("#")), None)
    if first is None or first[1] != HEADER:
        errors.append(f"line {first[0] if first else 1}: expected header '{HEADER}'")
    section = None
    for no, line in enumerate(lines, 1):
        s = line.split("#", 1)[0].strip()
        if not s or (first and no == first[0]):
            continue
        if s.startswith("[") and s.endswith("]"):
            section = s[1:-1].strip()
            if section not in _KEYS:
                errors.append(f"line {no}: unknown section [{section}]")
            continue
        key, eq, value = s.partition("=")
        key, value = key.strip(), value.strip()
        if not eq:
            errors.append(f"line {no}: expected 'key = value'")
        elif section is None:
            errors.append(f"line {no}: '{key}' outside any section")
        elif section in _KEYS and key not in _KEYS[section]:
            errors.append(f"line {no}: unknown key '{key}' in [{section}]")
        elif section in _KEYS:
            if (section, key) in raw and key != "set":
                errors.append(f"line {no}: duplicate key '{key}'")
            raw.setdefault((section, key), []).append((no, value))

    def get(sec, key, conv, default=None):
        if (sec, key) not in raw:
            return default
        no, value = raw[(sec, key)][-1]
        try:
            return conv(value)
        except ValueError as exc:
            errors.append(f"line {no}: bad value for '{key}': {exc}")
            return default

    def lineno(sec, key):
        return raw[(sec, key)][0][0] if (sec, key) in raw else "?"

    moduli = get("group", "moduli", lambda v: tuple(_ints(v)))
    if moduli is None:
        if ("group", "moduli") not in raw:
            errors.append("missing [group] moduli")
    elif not moduli or any(n < 1 for n in moduli):
        errors.append(f"line {lineno('group', 'moduli')}: moduli must be positive integers")
        moduli = None
    rank = len(moduli) if moduli else None

    def check_square(name, sec, M):
        if M is None or rank is None:
            return False
        if len(M) != rank or any(len(r) != rank for r in M):
            errors.append(f"line {lineno(sec, name)}: {name} must be {rank}x{rank} to match the moduli")
            return False
        for v in hom_violations(_Shape(moduli), M):
            errors.append(f"line {lineno(sec, name)}: {v}")
        return True

    matrix = get("map", "matrix", _matrix)
    if ("map", "matrix") not in raw:
        errors.append("missing [map] matrix")
    check_square("matrix", "map", matrix)
    conjugacy = get("analysis", "conjugacy", _matrix)
    check_square("conjugacy", "analysis", conjugacy)

    radius = get("uniformity", "radius", lambda v: _radius(v, rank))
    depth = get("uniformity", "depth", int)
    sets = None
    if ("uniformity", "set") in raw:
        sets = []
        for no, value in raw[("uniformity", "set")]:
            level = []
            for tok in value.split():
                try:
                    c = tuple(int(t) for t in tok.split(","))
                except ValueError:
                    errors.append(f"line {no}: bad element '{tok}'")
                    continue
                if rank is not None and len(c) != rank:
                    errors.append(f"line {no}: element '{tok}' needs {rank} coordinates")
                level.append(c)
            sets.append(tuple(level))
        sets = tuple(sets)
    if radius is None and sets is None:
        errors.append("[uniformity] needs 'radius' or at least one 'set'")
    if radius is not None and sets is not None:
        errors.append(f"line {lineno('uniformity', 'set')}: give either 'radius' or 'set', not both")
    for name in ("radius",):
        if radius is not None and rank is not None and len(radius) != rank:
            errors.append(f"line {lineno('uniformity', name)}: radius needs 1 or {rank} values")
    if depth is not None and depth < 1:
        errors.append(f"line {lineno('uniformity', 'depth')}: depth must be >= 1")

    run = get("analysis", "run", lambda v: tuple(t.strip() for t in v.split(",") if t.strip()), ("recurrent-sets",))
    for a in run:
        if a not in ANALYSES:
            errors.append(f"line {lineno('analysis', 'run')}: unknown analysis '{a}'")
    periods = get("analysis", "periods", lambda v: tuple(_ints(v)), (1,))
    if any(m < 1 for m in periods):
        errors.append(f"line {lineno('analysis', 'periods')}: periods must be >= 1")
    verify = get("analysis", "verify", str.strip, "fix")
    if not _set_kind_ok(verify):
        errors.append(f"line {lineno('analysis', 'verify')}: unknown set kind '{verify}'")
    subgroup = get("analysis", "subgroup", str.strip, "cr-base")
    if subgroup.startswith("gens"):
        for tok in subgroup[4:].split():
            try:
                c = tuple(int(t) for t in tok.split(","))
            except ValueError:
                errors.append(f"line {lineno('analysis', 'subgroup')}: bad generator '{tok}'")
                continue
            if rank is not None and len(c) != rank:
                errors.append(f"line {lineno('analysis', 'subgroup')}: generator '{tok}' needs {rank} coordinates")
    elif not _set_kind_ok(subgroup):
        errors.append(f"line {lineno('analysis', 'subgroup')}: unknown subgroup '{subgroup}'")

    def radius_key(key):
        r = get("analysis", key, lambda v: _radius(v, rank))
        if r is not None and rank is not None and len(r) != rank:
            errors.append(f"line {lineno('analysis', key)}: {key} needs 1 or {rank} values")
        if r is not None and any(x < 0 for x in r):
            errors.append(f"line {lineno('analysis', key)}: {key} must be >= 0")
        return r

    shadow_d = radius_key("shadow_d")
    shadow_e = radius_key("shadow_e")
    entropy_radius = radius_key("entropy_radius")
    n_min = get("analysis", "n_min", int, 1)
    n_max = get("analysis", "n_max", int, 6)
    if n_min < 1 or n_max < n_min:
        errors.append(f"line {lineno('analysis', 'n_min')}: need 1 <= n_min <= n_max")
    exact_cap = get("analysis", "exact_cap", int, 24)
    cap = get("analysis", "cap", int, DEFAULT_CAP)
    if cap < 1:
        errors.append(f"line {lineno('analysis', 'cap')}: cap must be >= 1")

    if errors:
        raise ValidationError("invalid configuration", errors)
    return SystemConfig(
        moduli=moduli, matrix=matrix, radius=radius, depth=depth, sets=sets, run=run,
        periods=periods, verify=verify, conjugacy=conjugacy, subgroup=subgroup,
        shadow_d=shadow_d, shadow_e=shadow_e, entropy_radius=entropy_radius,
        n_min=n_min, n_max=n_max, exact_cap=exact_cap, cap=cap,
    )


class _Shape:
    """Just enough of a group for hom_violations, without enumerating it."""

    def __init__(self, moduli):
        self.moduli = tuple(moduli)
        self.rank = len(moduli)


def _fmt_matrix(M) -> str:
    return "; ".join(", ".join(str(v) for v in row) for row in M)


def _fmt(vals) -> str:
    return ", ".join(str(v) for v in vals)


def emit_config(cfg: SystemConfig) -> str:
    """Canonical text form; ``parse_system_config(emit_config(c)) == c``."""
    out = [HEADER, "[group]", f"moduli = {_fmt(cfg.moduli)}", "[map]", f"matrix = {_fmt_matrix(cfg.matrix)}",
           "[uniformity]"]
    if cfg.radius is not None:
        out.append(f"radius = {_fmt(cfg.radius)}")
    if cfg.depth is not None:
        out.append(f"depth = {cfg.depth}")
    for level in cfg.sets or ():
        out.append("set = " + " ".join(",".join(str(c) for c in x) for x in level))
    out += ["[analysis]", f"run = {_fmt(cfg.run)}", f"periods = {_fmt(cfg.periods)}", f"verify = {cfg.verify}"]
    if cfg.conjugacy is not None:
        out.append(f"conjugacy = {_fmt_matrix(cfg.conjugacy)}")
    out.append(f"subgroup = {cfg.subgroup}")
    for key in ("shadow_d", "shadow_e", "entropy_radius"):
        val = getattr(cfg, key)
        if val is not None:
            out.append(f"{key} = {_fmt(val)}")
    out += [f"n_min = {cfg.n_min}", f"n_max = {cfg.n_max}", f"exact_cap = {cfg.exact_cap}", f"cap = {cfg.cap}"]
    return "\n".join(out) + "\n"


def load_config(path) -> SystemConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_system_config(fh.read())
