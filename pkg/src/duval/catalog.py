"""Case catalog: loading, per-case verification and report rendering.

A catalog is a JSON document validated against ``schemas/catalog.schema.json``.
Each case lists an ambient weighted projective space, an optional equation,
named graded maps (with declared inverses and expected orders), relations
between them, lattice actions on Aut0 parameters and an optional dual graph.
``verify_case`` replays every recorded claim and returns a ``CaseReport``;
failures are captured in the report rather than raised.
"""

from __future__ import annotations

import copy
import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import jsonschema

from . import dualgraph
from .coeffring import Scalar
from .errors import DuvalError, SchemaError, UnknownFormatError
from .grouptool import (
    LatticeAction,
    aut0_members,
    component_group,
    fingerprint,
    has_central_involution,
    has_element_of_order,
    lattice_report,
    match_named_group,
    substitution_from_matrix,
)
from .poly import Poly, parse_poly
from .wps import (
    TORUS,
    GradedMap,
    Surface,
    WordRef,
    compose_maps,
    element_order,
    evaluate_word,
    map_from_matrix,
    map_from_strings,
    mode_label,
    normalize_mode,
    projective_equal,
    verify_automorphism,
    verify_declared_inverse,
    verify_family_relation,
)

SCHEMA_VERSION = "1.0"
REPORT_SCHEMA_VERSION = "1.0"

PASS = "PASS"
FAIL = "FAIL"
SKIP = "SKIPPED-AMBIGUOUS"
NA = "NOT-APPLICABLE"

CHECKS = (
    "gradedness",
    "automorphism",
    "inverse",
    "order",
    "family-relation",
    "word-relation",
    "closure",
    "fingerprint",
    "lattice",
    "graph",
)

CLOSURE_CAP = 64
ORDER_CAP = 24


@lru_cache(maxsize=None)
def load_schema(name: str = "catalog") -> dict:
    text = resources.files("duval").joinpath("schemas", f"{name}.schema.json").read_text("utf-8")
    return json.loads(text)


# ---------------------------------------------------------------------------
# records


@dataclass
class MapSpec:
    name: str
    map: GradedMap
    display: str
    role: str
    order: int | None
    modes: tuple | None
    derived: bool = False
    note: str = ""

    def applies(self, mode_key: str) -> bool:
        return self.modes is None or mode_key in self.modes


@dataclass
class RelationSpec:
    kind: str
    label: str
    status: str
    modes: tuple | None
    outer: str | None = None
    family: str | None = None
    sub: dict = field(default_factory=dict)
    lhs: tuple = ()
    rhs: tuple = ()
    derived: bool = False
    note: str = ""

    def applies(self, mode_key: str) -> bool:
        return self.modes is None or mode_key in self.modes


@dataclass
class LatticeSpec:
    action: LatticeAction
    family: tuple = ()
    maps: dict = field(default_factory=dict)
    note: str = ""


@dataclass
class CaseRecord:
    id: str
    degree: int
    singularity_type: str
    provenance: str
    weights: tuple | None
    coords: tuple | None = None
    aut0: str = ""
    structure: str = ""
    equation: Poly | None = None
    equation_text: str | None = None
    expected_degree: int | None = None
    lambda_modes: tuple = ("generic",)
    aut0_family: tuple = ()
    maps: dict = field(default_factory=dict)
    relations: list = field(default_factory=list)
    lattice_actions: list = field(default_factory=list)
    expected: dict = field(default_factory=dict)
    graph_file: Path | None = None
    expected_graph_group: str | None = None
    expected_graph_order: int | None = None
    torus_rank: int | None = None
    metadata: dict = field(default_factory=dict)
    metadata_only: bool = False
    raw: dict = field(default_factory=dict, repr=False)

    @property
    def symbols(self) -> set:
        out = set()
        for spec in self.maps.values():
            out |= set(spec.map.param_symbols)
        for lat in self.lattice_actions:
            out |= set(lat.action.symbols)
        return out

    def raw_map(self, name: str) -> dict:
        """The map entry exactly as written in the catalog file."""
        return next(m for m in self.raw.get("maps", []) if m["name"] == name)


_WORD_RE = re.compile(r"^\s*([A-Za-z][A-Za-z0-9_]*)\s*(?:\(([^)]*)\))?\s*(\^\s*-\s*1)?\s*$")


def parse_word_letter(text: str) -> WordRef:
    """'sigma', 'sigma^-1', 'tau(t=-1)' or 'tau(t=-1)^-1'."""
    m = _WORD_RE.match(text)
    if not m:
        raise DuvalError(f"malformed word letter {text!r}")
    at = ()
    if m.group(2):
        pairs = []
        for part in m.group(2).split(","):
            if "=" not in part:
                raise DuvalError(f"malformed parameter value in {text!r}")
            k, v = part.split("=", 1)
            pairs.append((k.strip(), v.strip()))
        at = tuple(pairs)
    return WordRef(m.group(1), inverse=bool(m.group(3)), at=at)


def _path_str(path) -> str:
    return "/" + "/".join(str(p) for p in path)


def _mode_keys(modes) -> tuple:
    return tuple(mode_label(normalize_mode(m)) for m in modes)


def load_catalog(path) -> list:
    path = Path(path)
    try:
        data = json.loads(path.read_text("utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return load_catalog_data(data, base_dir=path.parent)


def load_catalog_data(data: dict, base_dir=None) -> list:
    """Validate and build records; gradedness of every map is checked eagerly."""
    base = Path(base_dir) if base_dir is not None else Path.cwd()
    validator = jsonschema.Draft202012Validator(load_schema("catalog"))
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        p = list(err.absolute_path)
        case_id = None
        if len(p) >= 2 and p[0] == "cases" and isinstance(p[1], int):
            try:
                case_id = data["cases"][p[1]].get("id")
            except (AttributeError, IndexError, KeyError, TypeError):
                case_id = None
        raise SchemaError(f"schema violation at {_path_str(p)}: {err.message}",
                          case_id=case_id, path=_path_str(p))
    records = []
    seen = set()
    for k, raw in enumerate(data.get("cases", [])):
        if raw["id"] in seen:
            raise SchemaError(f"duplicate case id {raw['id']!r}", case_id=raw["id"],
                              path=f"/cases/{k}/id")
        seen.add(raw["id"])
        records.append(_build_record(raw, k, base))
    return records


def _build_record(raw: dict, index: int, base: Path) -> CaseRecord:
    cid = raw["id"]
    where = f"/cases/{index}"

    def fail(msg, sub=""):
        raise SchemaError(msg, case_id=cid, path=where + sub)

    weights = raw["ambientWeights"]
    weights = None if weights == "abstract" else tuple(weights)
    coords = tuple(raw["coords"]) if "coords" in raw else None
    if weights is not None and coords is not None and len(coords) != len(weights):
        fail(f"{len(coords)} coordinates for {len(weights)} weights", "/coords")
    if (raw.get("maps") or raw.get("equation")) and (weights is None or coords is None):
        fail("maps and equations need ambientWeights and coords")
    lam_modes = _mode_keys(raw.get("lambdaModes", ["generic"]))

    symbols = set()
    for m in raw.get("maps", []):
        symbols |= {p["symbol"] for p in m.get("params", [])}
    for lat in raw.get("latticeActions", []):
        symbols |= {p["symbol"] for p in lat["symbols"]}

    equation = None
    if "equation" in raw:
        try:
            equation = parse_poly(raw["equation"], coords, symbols=symbols)
        except DuvalError as exc:
            fail(f"equation: {exc}", "/equation")
        deg = equation.weighted_degree(weights)
        if deg is None or not deg:
            fail("equation is not quasi-homogeneous", "/equation")
        if "expectedDegree" in raw and deg != raw["expectedDegree"]:
            fail(f"equation has weighted degree {deg}, expected {raw['expectedDegree']}",
                 "/expectedDegree")

    maps: dict = {}
    for j, m in enumerate(raw.get("maps", [])):
        name = m["name"]
        if name in maps:
            fail(f"duplicate map name {name!r}", f"/maps/{j}/name")
        params = tuple((p["symbol"], p["kind"]) for p in m.get("params", []))
        try:
            if "images" in m:
                gm = map_from_strings(name, weights, coords, m["images"], params, symbols=symbols)
            else:
                gm = map_from_matrix(name, m["matrix"], coords, params, symbols=symbols)
                if gm.weights != weights:
                    fail(f"map {name}: matrix form needs all weights 1", f"/maps/{j}/matrix")
        except DuvalError as exc:
            fail(str(exc), f"/maps/{j}")
        modes = _mode_keys(m["modes"]) if "modes" in m else None
        if modes is not None and not set(modes) <= set(lam_modes):
            fail(f"map {name}: modes {sorted(set(modes) - set(lam_modes))} not in lambdaModes",
                 f"/maps/{j}/modes")
        maps[name] = MapSpec(name, gm, m.get("display", name), m.get("role", "finite"),
                             m.get("order"), modes, m.get("derived", False), m.get("note", ""))
    # declared inverses, resolved once all maps are known
    for j, m in enumerate(raw.get("maps", [])):
        inv = m.get("inverse")
        if inv is None:
            continue
        spec = maps[m["name"]]
        try:
            if "images" in inv:
                im = map_from_strings(spec.name + "^-1", weights, coords, inv["images"],
                                      spec.map.params, symbols=symbols)
                recipe = "images"
            else:
                of = inv["of"]
                if of not in maps:
                    fail(f"inverse of {spec.name} refers to unknown map {of!r}", f"/maps/{j}/inverse")
                sub = {k: _const(v, symbols) for k, v in inv.get("subs", {}).items()}
                im = maps[of].map.subs(sub, name=spec.name + "^-1") if sub else maps[of].map
                recipe = of + ("(" + ", ".join(f"{k}={v}" for k, v in inv["subs"].items()) + ")"
                               if sub else "")
        except DuvalError as exc:
            fail(f"inverse of {spec.name}: {exc}", f"/maps/{j}/inverse")
        spec.map = spec.map.with_inverse(im, recipe)

    family = tuple(raw.get("aut0Family", []))
    for f in family:
        if f not in maps:
            fail(f"aut0Family names unknown map {f!r}", "/aut0Family")

    relations = []
    for j, r in enumerate(raw.get("relations", [])):
        sub = {}
        lhs = rhs = ()
        try:
            if r["kind"] == "family":
                for key in ("outer", "family"):
                    if r.get(key) not in maps:
                        fail(f"relation {r['label']!r}: unknown map {r.get(key)!r}",
                             f"/relations/{j}/{key}")
                sub = {k: v for k, v in r.get("sub", {}).items()}
                for v in sub.values():
                    _const(v, symbols)
            else:
                lhs = tuple(parse_word_letter(x) for x in r.get("lhs", []))
                rhs = tuple(parse_word_letter(x) for x in r.get("rhs", []))
                for ref in lhs + rhs:
                    if ref.name not in maps and ref.name not in ("id", "1"):
                        fail(f"relation {r['label']!r}: unknown map {ref.name!r}",
                             f"/relations/{j}")
        except DuvalError as exc:
            fail(f"relation {r['label']!r}: {exc}", f"/relations/{j}")
        relations.append(RelationSpec(
            r["kind"], r["label"], r.get("status", "verify"),
            _mode_keys(r["modes"]) if "modes" in r else None,
            r.get("outer"), r.get("family"), sub, lhs, rhs,
            r.get("derived", False), r.get("note", "")))

    lattices = []
    for j, lat in enumerate(raw.get("latticeActions", [])):
        syms = tuple(p["symbol"] for p in lat["symbols"])
        kinds = tuple(p["kind"] for p in lat["symbols"])
        n = len(syms)
        for g, mat in lat["generators"].items():
            if len(mat) != n or any(len(row) != n for row in mat):
                fail(f"lattice {lat['name']}: matrix of {g} must be {n}x{n}",
                     f"/latticeActions/{j}/generators/{g}")
        kind = TORUS if all(k == TORUS for k in kinds) else (
            "linear" if all(k != TORUS for k in kinds) else "mixed")
        rels = [(tuple(a), tuple(b)) for a, b in lat.get("relations", [])]
        act = LatticeAction(lat["name"], dict(lat["generators"]), rels, dict(lat.get("orders", {})),
                            kind, syms, kinds)
        fam = tuple(lat.get("family", []))
        for f in fam:
            if f not in maps:
                fail(f"lattice {lat['name']}: unknown family map {f!r}", f"/latticeActions/{j}/family")
        lmaps = dict(lat.get("maps", {}))
        for g, mname in lmaps.items():
            if g not in act.generators or mname not in maps:
                fail(f"lattice {lat['name']}: bad map binding {g!r} -> {mname!r}",
                     f"/latticeActions/{j}/maps")
        lattices.append(LatticeSpec(act, fam, lmaps, lat.get("note", "")))

    expected = {}
    for key, exp in raw.get("expected", {}).items():
        mk = mode_label(normalize_mode(key))
        if mk not in lam_modes:
            fail(f"expectation for mode {key!r} not in lambdaModes", f"/expected/{key}")
        for g in exp.get("generators", []):
            if g not in maps:
                fail(f"expectation for mode {key!r} names unknown map {g!r}", f"/expected/{key}")
        expected[mk] = exp

    graph_file = None
    if "graphFile" in raw:
        graph_file = (base / raw["graphFile"]).resolve()

    return CaseRecord(
        id=cid, degree=raw["degree"], singularity_type=raw["singularityType"],
        provenance=raw["provenance"], weights=weights, coords=coords,
        aut0=raw.get("aut0", ""), structure=raw.get("structure", ""),
        equation=equation, equation_text=raw.get("equation"),
        expected_degree=raw.get("expectedDegree"), lambda_modes=lam_modes,
        aut0_family=family, maps=maps, relations=relations, lattice_actions=lattices,
        expected=expected, graph_file=graph_file,
        expected_graph_group=raw.get("expectedGraphGroup"),
        expected_graph_order=raw.get("expectedGraphOrder"),
        torus_rank=raw.get("torusRank"), metadata=raw.get("metadata", {}),
        metadata_only=raw.get("metadataOnly", False), raw=raw,
    )


def _const(text: str, symbols, rel: bool = False) -> Scalar:
    p = parse_poly(str(text), [], symbols=symbols, rel=rel)
    return p.const_value()


loadCatalog = load_catalog


# ---------------------------------------------------------------------------
# reports


@dataclass
class CheckResult:
    check: str
    item: str
    status: str
    detail: str = ""

    def as_dict(self) -> dict:
        return {"check": self.check, "item": self.item, "status": self.status, "detail": self.detail}


@dataclass
class CaseReport:
    case_id: str
    mode: str
    degree: int
    singularity_type: str
    aut0: str
    structure: str
    checks: list = field(default_factory=list)
    component_group: str | None = None
    component_order: int | None = None
    fingerprint: dict | None = None
    graph_group: str | None = None

    @property
    def verdict(self) -> str:
        return FAIL if any(c.status == FAIL for c in self.checks) else PASS

    def statuses(self, check: str | None = None) -> list:
        return [c.status for c in self.checks if check is None or c.check == check]

    def failures(self) -> list:
        return [c for c in self.checks if c.status == FAIL]

    def skipped(self) -> list:
        return [c for c in self.checks if c.status == SKIP]

    def add(self, check, item, status, detail=""):
        self.checks.append(CheckResult(check, item, status, detail))

    def as_dict(self) -> dict:
        return {
            "caseId": self.case_id,
            "mode": self.mode,
            "degree": self.degree,
            "singularityType": self.singularity_type,
            "aut0": self.aut0,
            "structure": self.structure,
            "componentGroup": self.component_group,
            "componentOrder": self.component_order,
            "fingerprint": self.fingerprint,
            "graphGroup": self.graph_group,
            "checks": [c.as_dict() for c in self.checks],
            "verdict": self.verdict,
        }


def _maps_for_mode(rec: CaseRecord, S: Surface, mode_key: str) -> dict:
    return {n: S.prepare(spec.map) for n, spec in rec.maps.items() if spec.applies(mode_key)}


def _fmt(x) -> str:
    return x.to_str() if hasattr(x, "to_str") else str(x)


def verify_case(rec: CaseRecord, mode=None) -> CaseReport:
    """Replay every recorded claim of ``rec`` with lambda in ``mode``."""
    mode_key = rec.lambda_modes[0] if mode is None else mode_label(normalize_mode(mode))
    rep = CaseReport(rec.id, mode_key, rec.degree, rec.singularity_type, rec.aut0, rec.structure)
    if rec.metadata_only:
        for c in CHECKS:
            rep.add(c, "-", NA, "metadata-only record")
        return rep
    if mode_key not in rec.lambda_modes:
        raise ValueError(f"mode {mode_key!r} is not listed for case {rec.id}")
    first = mode_key == rec.lambda_modes[0]
    S = None
    maps: dict = {}
    if rec.weights is not None and rec.coords is not None:
        try:
            S = Surface(rec.weights, rec.equation, mode_key, rec.coords)
            maps = _maps_for_mode(rec, S, mode_key)
        except DuvalError as exc:
            rep.add("gradedness", "surface", FAIL, str(exc))
            return rep

    _check_gradedness(rec, S, maps, rep)
    _check_automorphisms(rec, S, maps, rep)
    _check_inverses(rec, maps, rep)
    _check_orders(rec, maps, rep)
    _check_relations(rec, S, maps, mode_key, rep)
    _check_component_group(rec, S, maps, mode_key, rep)
    if first:
        _check_lattices(rec, S, maps, rep)
        _check_graph(rec, rep)
    else:
        rep.add("lattice", "-", NA, f"checked in mode {rec.lambda_modes[0]}")
        rep.add("graph", "-", NA, f"checked in mode {rec.lambda_modes[0]}")
    return rep


verifyCase = verify_case


def _check_gradedness(rec, S, maps, rep):
    if S is None or S.equation is None:
        rep.add("gradedness", "equation", NA, "no equation recorded")
    else:
        deg = S.degree
        if rec.expected_degree is not None and deg != rec.expected_degree:
            rep.add("gradedness", "equation", FAIL, f"degree {deg}, expected {rec.expected_degree}")
        else:
            rep.add("gradedness", "equation", PASS,
                    f"quasi-homogeneous of degree {deg} in P{tuple(rec.weights)}")
    if not maps:
        rep.add("gradedness", "maps", NA, "no maps recorded")
    for name, m in maps.items():
        rep.add("gradedness", rec.maps[name].display, PASS, "graded of weights " + str(m.weights))


def _check_automorphisms(rec, S, maps, rep):
    if S is None or S.equation is None:
        rep.add("automorphism", "-", NA, "relation-only case (no equation)")
        return
    for name, m in maps.items():
        label = rec.maps[name].display
        try:
            c = verify_automorphism(S, m)
            rep.add("automorphism", label, PASS, f"equation scaled by {c.to_str()}")
        except DuvalError as exc:
            rep.add("automorphism", label, FAIL, str(exc))


def _check_inverses(rec, maps, rep):
    for name, m in maps.items():
        label = rec.maps[name].display
        if m.declared_inverse is None:
            rep.add("inverse", label, NA, "no declared inverse")
            continue
        try:
            ok = verify_declared_inverse(m)
        except DuvalError as exc:
            rep.add("inverse", label, FAIL, str(exc))
            continue
        rep.add("inverse", label, PASS if ok else FAIL,
                f"declared inverse {m.declared_inverse.to_str()}"
                + ("" if ok else " does not compose to the identity"))


def _check_orders(rec, maps, rep):
    for name, m in maps.items():
        spec = rec.maps[name]
        if spec.order is None:
            continue
        if m.free_symbols():
            rep.add("order", spec.display, NA, "family member; order depends on parameters")
            continue
        try:
            got = element_order(None, m, cap=ORDER_CAP)
        except DuvalError as exc:
            rep.add("order", spec.display, FAIL, f"expected {spec.order}: {exc}")
            continue
        status = PASS if got == spec.order else FAIL
        rep.add("order", spec.display, status, f"order {got}, expected {spec.order}")


def _inverse_word(word):
    return tuple(WordRef(r.name, not r.inverse, r.at) for r in reversed(word))


def _check_relations(rec, S, maps, mode_key, rep):
    rels = [r for r in rec.relations if r.applies(mode_key)]
    if not rels:
        rep.add("family-relation", "-", NA, "no relations for this mode")
        return
    fam_maps = [maps[f] for f in rec.aut0_family if f in maps]
    for r in rels:
        check = "family-relation" if r.kind == "family" else "word-relation"
        if r.status == "skip-ambiguous":
            rep.add(check, r.label, SKIP, "skipped: ambiguous notation" + (f"; {r.note}" if r.note else ""))
            continue
        try:
            if r.kind == "family":
                sub = {k: _const(v, rec.symbols, S.rel) for k, v in r.sub.items()}
                ok = verify_family_relation(None, maps[r.outer], maps[r.family], sub)
                rep.add(check, r.label, PASS if ok else FAIL,
                        "conjugation matches the substitution" if ok else
                        "conjugate differs from the substituted family")
            else:
                lhs = evaluate_word(S, r.lhs, maps)
                rhs = evaluate_word(S, r.rhs, maps)
                if projective_equal(lhs, rhs):
                    rep.add(check, r.label, PASS, "both sides agree in P(w)")
                    continue
                detail = f"lhs {lhs.to_str()} differs from rhs {rhs.to_str()}"
                try:
                    k = compose_maps(lhs, evaluate_word(S, _inverse_word(r.rhs), maps))
                    sample = aut0_members(fam_maps, S.rel, S.weights)
                    if any(projective_equal(k, a) for a in sample):
                        detail += "; holds modulo Aut0 (lhs * rhs^-1 = " + k.to_str() + ")"
                except DuvalError:
                    pass
                rep.add(check, r.label, FAIL, detail)
        except (DuvalError, KeyError) as exc:
            rep.add(check, r.label, FAIL, f"could not evaluate: {exc}")


def _check_component_group(rec, S, maps, mode_key, rep):
    exp = rec.expected.get(mode_key)
    if exp is None:
        rep.add("closure", "-", NA, "no component-group claim for this mode")
        return
    names = exp.get("generators") or [n for n, s in rec.maps.items()
                                      if s.role == "finite" and n in maps]
    gens = [maps[n] for n in names if n in maps]
    if not gens:
        rep.add("closure", "-", FAIL, "no generators available for this mode")
        return
    fam = [maps[f] for f in rec.aut0_family if f in maps]
    try:
        cg = component_group(S, gens, fam, cap=CLOSURE_CAP)
    except DuvalError as exc:
        rep.add("closure", "generators " + ", ".join(names), FAIL, str(exc))
        return
    rep.add("closure", "generators " + ", ".join(rec.maps[n].display for n in names), PASS,
            f"closure of order {cg.closure.order}, {len(cg.kernel)} element(s) in Aut0, "
            f"quotient of order {cg.order}")
    fp = fingerprint(list(range(cg.order)), cg.table)
    name = match_named_group(fp)
    rep.component_group = name
    rep.component_order = cg.order
    rep.fingerprint = fp.as_dict()
    shown = name or f"unnamed group of order {cg.order}"
    if "componentGroup" in exp:
        want = exp["componentGroup"]
        if want is None:
            rep.add("fingerprint", "name", NA, f"no table name claimed; got {shown}")
        else:
            rep.add("fingerprint", "name", PASS if name == want else FAIL,
                    f"{shown}, expected {want}")
    if "componentOrder" in exp:
        want = exp["componentOrder"]
        rep.add("fingerprint", "order", PASS if cg.order == want else FAIL,
                f"order {cg.order}, expected {want}")
    if exp.get("centralInvolution"):
        ok = has_central_involution(cg.table)
        rep.add("fingerprint", "central involution", PASS if ok else FAIL,
                "found" if ok else "none found")
    for k in exp.get("elementOrders", []):
        ok = has_element_of_order(cg.table, k)
        rep.add("fingerprint", f"element of order {k}", PASS if ok else FAIL,
                "found" if ok else "none found")


def _check_lattices(rec, S, maps, rep):
    if not rec.lattice_actions:
        rep.add("lattice", "-", NA, "no lattice action recorded")
        return
    for lat in rec.lattice_actions:
        act = lat.action
        try:
            r = lattice_report(act)
        except DuvalError as exc:
            rep.add("lattice", act.name, FAIL, str(exc))
            continue
        for g, (d, ok) in r["determinants"].items():
            rep.add("lattice", f"{act.name}: {g} invertible", PASS if ok else FAIL, f"det {d}")
        for g, (want, got, ok) in r["orders"].items():
            rep.add("lattice", f"{act.name}: order of {g}", PASS if ok else FAIL,
                    f"order {got}, expected {want}")
        for lhs, rhs, ok in r["relations"]:
            rep.add("lattice", f"{act.name}: {lhs} = {rhs}", PASS if ok else FAIL,
                    "matrices agree" if ok else "matrices differ")
        if lat.maps and S is not None:
            fam = [maps[f] for f in lat.family]
            prod = fam[0]
            for f in fam[1:]:
                prod = compose_maps(prod, f)
            for g, mname in lat.maps.items():
                label = f"{act.name}: {g} on the family"
                try:
                    sub = substitution_from_matrix(act, g, S.rel)
                    ok = verify_family_relation(None, maps[mname], prod, sub)
                    shown = ", ".join(f"{k} -> {v.to_str()}" for k, v in sub.items())
                    rep.add("lattice", label, PASS if ok else FAIL,
                            f"conjugation realises {shown}" + ("" if ok else " (mismatch)"))
                except DuvalError as exc:
                    rep.add("lattice", label, FAIL, str(exc))


def _check_graph(rec, rep):
    if rec.graph_file is None:
        if rec.expected_graph_group is not None:
            rep.add("graph", "group", NA, f"recorded as {rec.expected_graph_group}; no graph file")
        else:
            rep.add("graph", "-", NA, "no dual graph recorded")
        return
    try:
        g = dualgraph.load_graph(rec.graph_file)
        auts = dualgraph.graph_automorphisms(g)
    except (DuvalError, OSError) as exc:
        rep.add("graph", "load", FAIL, str(exc))
        return
    name = dualgraph.identify_graph_group(g)
    rep.graph_group = name
    shown = name or f"unnamed group of order {len(auts)}"
    if rec.expected_graph_group is not None:
        rep.add("graph", "group", PASS if name == rec.expected_graph_group else FAIL,
                f"{shown}, expected {rec.expected_graph_group}")
    if rec.expected_graph_order is not None:
        rep.add("graph", "order", PASS if len(auts) == rec.expected_graph_order else FAIL,
                f"{len(auts)} automorphisms, expected {rec.expected_graph_order}")
    if g.n <= dualgraph.MAX_BRUTE_FORCE:
        ok = dualgraph.brute_force_automorphisms(g) == auts
        rep.add("graph", "oracle", PASS if ok else FAIL,
                "backtracking agrees with brute force" if ok else "backtracking and brute force differ")
    if rec.torus_rank:
        trivial = [tuple(range(g.n))]
        claw = dualgraph.find_invariant_claw(g, trivial)
        edge = dualgraph.find_invariant_edge(g, trivial) if rec.torus_rank >= 2 else None
        ok = claw is not None or edge is not None
        detail = (f"claw centred at {claw[0]}" if claw else
                  f"edge {edge[0]}-{edge[1]}" if edge else "no claw or edge")
        rep.add("graph", "invariant curves", PASS if ok else FAIL,
                detail + f" (torus rank {rec.torus_rank})")


# ---------------------------------------------------------------------------
# running and rendering


def _sort_key(rec: CaseRecord):
    return (-rec.degree, rec.id)


def run_all(records: Sequence[CaseRecord], modes="all"):
    """Reports for every case and mode, ordered by degree descending, then id."""
    reports = []
    for rec in sorted(records, key=_sort_key):
        if modes == "all" or modes is None:
            wanted = rec.lambda_modes
        else:
            keys = _mode_keys(modes)
            wanted = [m for m in rec.lambda_modes if m in keys]
            if rec.metadata_only and not wanted:
                wanted = rec.lambda_modes[:1]
        for m in wanted:
            reports.append(verify_case(rec, m))
    return reports, summarize(reports)


runAll = run_all


def summarize(reports: Iterable[CaseReport]) -> dict:
    reports = list(reports)
    counts = {s: 0 for s in (PASS, FAIL, SKIP, NA)}
    for r in reports:
        for c in r.checks:
            counts[c.status] += 1
    return {
        "reports": len(reports),
        "passed": sum(1 for r in reports if r.verdict == PASS),
        "failed": sum(1 for r in reports if r.verdict == FAIL),
        "checks": counts,
    }


def emit_report(reports: Sequence[CaseReport], fmt: str = "markdown", detail: bool = False) -> str:
    if fmt == "json":
        doc = {
            "schemaVersion": REPORT_SCHEMA_VERSION,
            "reports": [r.as_dict() for r in reports],
            "summary": summarize(reports),
        }
        return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if fmt in ("markdown", "md"):
        return _markdown(reports, detail)
    raise UnknownFormatError(f"unknown report format {fmt!r}")


emitReport = emit_report


def _cell(s) -> str:
    return str(s).replace("|", "\\|")


def _markdown(reports, detail) -> str:
    lines = [
        "| case | degree | singularity type | Aut⁰ | λ | component group | structure | verdict |",
        "|---|---|---|---|---|---|---|---|",
    ]
    for r in reports:
        if r.component_group:
            cg = r.component_group
        elif r.component_order:
            cg = f"order {r.component_order}"
        else:
            cg = "-"
        verdict = r.verdict
        if r.skipped():
            verdict += " (skipped: ambiguous notation)"
        cells = [r.case_id, r.degree, r.singularity_type, r.aut0 or "-", r.mode, cg,
                 r.structure or "-", verdict]
        lines.append("| " + " | ".join(_cell(c) for c in cells) + " |")
    s = summarize(reports)
    lines.append("")
    lines.append(f"{s['passed']} of {s['reports']} reports PASS, {s['failed']} FAIL; checks: "
                 + ", ".join(f"{k} {v}" for k, v in s["checks"].items()))
    notable = [(r, c) for r in reports for c in r.checks if c.status in (FAIL, SKIP)]
    if notable:
        lines.append("")
        lines.append("| case | λ | check | item | status | detail |")
        lines.append("|---|---|---|---|---|---|")
        for r, c in notable:
            lines.append("| " + " | ".join(_cell(x) for x in
                                             (r.case_id, r.mode, c.check, c.item, c.status, c.detail)) + " |")
    if detail:
        for r in reports:
            lines.append("")
            lines.append(f"### {r.case_id} (λ {r.mode}): {r.verdict}")
            lines.append("")
            lines.append("| check | item | status | detail |")
            lines.append("|---|---|---|---|")
            for c in r.checks:
                lines.append("| " + " | ".join(_cell(x) for x in (c.check, c.item, c.status, c.detail)) + " |")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# fault injection


def sign_flip_sites(data: dict) -> list:
    """Every explicit sign in equations and map images: (case index, locator, char index).

    A '-' that starts a negative exponent is not a sign of a term and is skipped.
    """
    sites = []
    for ci, case in enumerate(data.get("cases", [])):
        if "equation" in case:
            sites += [(ci, ("equation",), k) for k in _sign_positions(case["equation"])]
        for mi, m in enumerate(case.get("maps", [])):
            for ii, img in enumerate(m.get("images", [])):
                sites += [(ci, ("maps", mi, "images", ii), k) for k in _sign_positions(img)]
            for ri, row in enumerate(m.get("matrix", [])):
                for ei, e in enumerate(row):
                    if isinstance(e, int):
                        if e:
                            sites.append((ci, ("maps", mi, "matrix", ri, ei), -1))
                    else:
                        sites += [(ci, ("maps", mi, "matrix", ri, ei), k) for k in _sign_positions(e)]
    return sites


def _sign_positions(text: str) -> list:
    out = []
    for k, ch in enumerate(text):
        if ch in "+-":
            prev = text[:k].rstrip()
            if ch == "-" and prev.endswith("^"):
                continue
            out.append(k)
    return out


def apply_sign_flip(data: dict, site) -> dict:
    ci, loc, k = site
    out = copy.deepcopy(data)
    node = out["cases"][ci]
    for key in loc[:-1]:
        node = node[key]
    val = node[loc[-1]]
    if k < 0:
        node[loc[-1]] = -val
    else:
        flipped = "-" if val[k] == "+" else "+"
        node[loc[-1]] = val[:k] + flipped + val[k + 1:]
    return out
