"""Instance files: JSON with a ``kind`` tag, plus two plain-text forms.

Text forms:

* gamma-group: a ``group <k>`` block for the acting group, a ``group <m>``
  block for the coefficients, then ``action <k> <m>`` and k rows.
* tower: a single line ``tower N N' n``.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import jsonschema

from .cohomology import GammaGroup, make_cocycle
from .descent import HomogeneousSpace, coset_space
from .errors import InputError
from .galois_sorts import AmbientAction, coset_action
from .groupoid import NormalFamily, SymGroupoid, action_groupoid
from .groups import FiniteGroup, GroupAction, group_by_name, parse_group_lines, permutation_group
from .kummer import Tower, parse_tower

KINDS = ("gamma-group", "homogeneous-space", "groupoid", "relation", "ambient-action", "tower")

_TABLE = {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}}
_MEMBERS = {"type": "array", "items": {"type": "integer", "minimum": 0}}
_GROUP = {
    "oneOf": [
        {"type": "string"},
        {"type": "object", "properties": {"table": _TABLE}, "required": ["table"], "additionalProperties": False},
        {"type": "object", "properties": {"permutations": _TABLE}, "required": ["permutations"],
         "additionalProperties": False},
    ]
}
_ACTION = {"oneOf": [{"const": "trivial"}, _TABLE]}

SCHEMAS: dict[str, dict] = {
    "gamma-group": {
        "type": "object",
        "properties": {"kind": {}, "gamma": _GROUP, "group": _GROUP, "action": _ACTION},
        "required": ["gamma", "group", "action"],
        "additionalProperties": False,
    },
    "homogeneous-space": {
        "type": "object",
        "properties": {
            "kind": {}, "gamma": _GROUP, "group": _GROUP, "action": _ACTION,
            "subgroup": _MEMBERS, "twist": _MEMBERS,
            "gamma_on_points": _TABLE, "group_on_points": _TABLE,
            "base_point": {"type": "integer", "minimum": 0},
        },
        "required": ["gamma", "group", "action"],
        "oneOf": [
            {"required": ["subgroup"], "not": {"required": ["gamma_on_points"]}},
            {"required": ["gamma_on_points", "group_on_points"], "not": {"required": ["subgroup"]}},
        ],
        "additionalProperties": False,
    },
    "groupoid": {
        "type": "object",
        "properties": {
            "kind": {}, "sym": _GROUP,
            # explicit form
            "objects": {"type": "integer", "minimum": 1},
            "morphisms": _TABLE, "comp": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
            "obj_act": _TABLE, "mor_act": _TABLE,
            # action-groupoid form
            "group": _GROUP, "action": _ACTION, "stabilizer": _MEMBERS,
            "N": {"oneOf": [_MEMBERS, _TABLE]}, "Nminus": {"oneOf": [_MEMBERS, _TABLE]},
        },
        "required": ["sym"],
        "oneOf": [
            {"required": ["objects", "morphisms", "comp", "obj_act", "mor_act"]},
            {"required": ["group", "action", "stabilizer"]},
        ],
        "additionalProperties": False,
    },
    "relation": {
        "type": "object",
        "properties": {"kind": {}, "grid": {"type": "array", "items": {"type": "array",
                                                                       "items": {"enum": [0, 1]}}}},
        "required": ["grid"],
        "additionalProperties": False,
    },
    "ambient-action": {
        "type": "object",
        "properties": {"kind": {}, "group": _GROUP, "action": _TABLE, "subgroup": _MEMBERS,
                       "faithful": {"type": "boolean"}},
        "required": ["group"],
        "oneOf": [{"required": ["action"]}, {"required": ["subgroup"]}],
        "additionalProperties": False,
    },
    "tower": {
        "type": "object",
        "properties": {"kind": {}, "N": {"type": "integer"}, "N_prime": {"type": "integer"},
                       "n": {"type": "integer"}},
        "required": ["N", "N_prime", "n"],
        "additionalProperties": False,
    },
}


def read_group(desc: Any) -> FiniteGroup:
    if isinstance(desc, str):
        return group_by_name(desc)
    if "table" in desc:
        return FiniteGroup(desc["table"])
    return permutation_group(desc["permutations"])[0]


def _gamma_group(d: dict) -> GammaGroup:
    S, G = read_group(d["gamma"]), read_group(d["group"])
    if d["action"] == "trivial":
        return GammaGroup.trivial(S, G)
    return GammaGroup(S, G, d["action"])


def validate(d: Any) -> str:
    if not isinstance(d, dict) or d.get("kind") not in KINDS:
        raise InputError(f"instance must be an object with kind in {list(KINDS)}")
    kind = d["kind"]
    try:
        jsonschema.validate(d, SCHEMAS[kind])
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InputError(f"{kind} schema: at {where}: {exc.message}") from None
    return kind


def build(d: dict) -> tuple[str, Any]:
    """Validate and construct the instance object for a parsed JSON document."""
    kind = validate(d)
    try:
        return kind, _BUILDERS[kind](d)
    except (IndexError, KeyError, TypeError) as exc:
        raise InputError(f"{kind}: malformed payload ({exc})") from None


def _homogeneous(d: dict):
    M = _gamma_group(d)
    G = M.coeff
    if "subgroup" in d:
        H = G.subgroup(d["subgroup"])
        twist = make_cocycle(M, d["twist"]) if "twist" in d else None
        space = coset_space(M, H, twist)
    else:
        if "twist" in d:
            raise InputError("twist is only supported together with subgroup")
        space = HomogeneousSpace(M, GroupAction(M.gamma, d["gamma_on_points"]), GroupAction(G, d["group_on_points"]))
    return space, d.get("base_point")


def _family(gpd: SymGroupoid, members, G=None, reps=None) -> NormalFamily:
    if members and isinstance(members[0], list):
        return NormalFamily(gpd, members)
    n = G.order
    return NormalFamily(gpd, {v: [v * n + G.conj(int(r), h) for h in members] for v, r in enumerate(reps)})


def _groupoid(d: dict):
    S = read_group(d["sym"])
    if "objects" in d:
        mor = d["morphisms"]
        if any(len(m) != 2 for m in mor):
            raise InputError("morphisms must be [src, dst] pairs")
        gpd = SymGroupoid(d["objects"], [m[0] for m in mor], [m[1] for m in mor], d["comp"], S,
                          d["obj_act"], d["mor_act"])
        N = _family(gpd, d["N"]) if "N" in d else None
        Nm = _family(gpd, d["Nminus"]) if "Nminus" in d else None
        return gpd, N, Nm
    G = read_group(d["group"])
    M = GammaGroup.trivial(S, G) if d["action"] == "trivial" else GammaGroup(S, G, d["action"])
    T = G.subgroup(d["stabilizer"])
    if any(M.act(s, t) not in T for s in range(S.order) for t in T.members):
        raise InputError("stabilizer is not stable under the symmetry group")
    act = coset_action(G, T)
    reps = [cs[0] for cs in T.left_cosets()]
    which = {x: i for i, cs in enumerate(T.left_cosets()) for x in cs}
    sym_pts = GroupAction(S, [[which[M.act(s, r)] for r in reps] for s in range(S.order)])
    gpd = action_groupoid(M, act, sym_pts)
    gpd.verify()
    N = _family(gpd, d["N"], G, reps) if "N" in d else None
    Nm = _family(gpd, d["Nminus"], G, reps) if "Nminus" in d else None
    return gpd, N, Nm


def _relation(d: dict):
    grid = d["grid"]
    rows = len(grid)
    cols = len(grid[0]) if grid else 0
    if any(len(r) != cols for r in grid):
        raise InputError("relation grid rows have different lengths")
    R = {(i, j) for i in range(rows) for j in range(cols) if grid[i][j]}
    return R, list(range(rows)), list(range(cols))


def _ambient(d: dict) -> AmbientAction:
    G = read_group(d["group"])
    faithful = d.get("faithful", True)
    if "subgroup" in d:
        return AmbientAction(coset_action(G, G.subgroup(d["subgroup"])), faithful=faithful)
    return AmbientAction(GroupAction(G, d["action"]), faithful=faithful)


_BUILDERS = {
    "gamma-group": _gamma_group,
    "homogeneous-space": _homogeneous,
    "groupoid": _groupoid,
    "relation": _relation,
    "ambient-action": _ambient,
    "tower": lambda d: Tower(d["N"], d["N_prime"], d["n"]),
}


def parse_gamma_text(text: str) -> GammaGroup:
    lines = text.splitlines()
    S, i = parse_group_lines(lines, 0)
    A, i = parse_group_lines(lines, i)
    while i < len(lines) and not lines[i].strip():
        i += 1
    if i >= len(lines):
        raise InputError(f"line {i + 1}: expected 'action <k> <m>' header")
    head = lines[i].split()
    if head != ["action", str(S.order), str(A.order)]:
        raise InputError(f"line {i + 1}: expected 'action {S.order} {A.order}', got {lines[i].strip()!r}")
    rows = []
    for r in range(S.order):
        j = i + 1 + r
        if j >= len(lines):
            raise InputError(f"line {j + 1}: action table ended after {r} rows")
        try:
            row = [int(x) for x in lines[j].split()]
        except ValueError:
            raise InputError(f"line {j + 1}: non-integer action entry") from None
        if len(row) != A.order:
            raise InputError(f"line {j + 1}: expected {A.order} entries, got {len(row)}")
        rows.append(row)
    try:
        return GammaGroup(S, A, rows)
    except InputError as exc:
        raise InputError(f"line {i + 1}: invalid action: {exc}") from None


def dumps_gamma(M: GammaGroup) -> str:
    from .groups import dumps

    rows = "\n".join(" ".join(str(int(x)) for x in row) for row in M.action)
    return dumps(M.gamma) + dumps(M.coeff) + f"action {M.gamma.order} {M.coeff.order}\n{rows}\n"


def loads_instance(text: str) -> tuple[str, Any]:
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"line {exc.lineno}: invalid JSON: {exc.msg}") from None
        return build(d)
    if stripped.startswith("tower"):
        return "tower", parse_tower(stripped.splitlines()[0])
    if stripped.startswith("group"):
        return "gamma-group", parse_gamma_text(text)
    raise InputError("line 1: unrecognized instance format")


def load_instance(path: str | Path) -> tuple[str, Any]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return loads_instance(text)

