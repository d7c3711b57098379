"""Finite calculus of end-space descriptors.

An infinite-type surface is described here by finitely many equivalence
classes of ends (each a singleton or a Cantor set), a partial order between
the classes, a genus entry, and optional special-surface tags.  All graph
classification verdicts in this package are functions of that data alone.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb

from .errors import (
    EmptyEndSpace,
    ExcludedSurface,
    MalformedInput,
    NoGrandArcs,
    RequiresStableEnds,
)

SINGLETON = "singleton"
CANTOR = "cantor"

NAMED_OTHER = "other"
NAMED_OPCT = "opct"  # once-punctured Cantor tree
NAMED_CYCLOCTOPUS = "cycloctopus"  # once-punctured Cantor tree with one handle

VERDICT_EMPTY = "Empty"
VERDICT_NOT_HYPERBOLIC = "InfiniteDiameterNotHyperbolic"
VERDICT_HYPERBOLIC = "UniformlyHyperbolic"

_DESCRIPTOR_KEYS = {"classes", "order", "genus", "named", "stable"}
_CLASS_KEYS = {"id", "kind", "genus_acc"}


@dataclass(frozen=True)
class EndClass:
    """One self-similar equivalence class of ends."""

    id: str
    kind: str  # SINGLETON or CANTOR
    accumulated_by_genus: bool = False
    maximal_hint: bool | None = None


@dataclass(frozen=True)
class EndSpaceDescriptor:
    """Finite presentation of an end space.

    ``order`` lists pairs ``(a, b)`` meaning class ``a`` strictly precedes
    class ``b``; equivalence is encoded by sharing a class id, so mutual
    edges are forbidden.  ``genus`` is a natural number or ``None`` for
    infinite genus.
    """

    classes: tuple[EndClass, ...]
    order: tuple[tuple[str, str], ...] = ()
    genus: int | None = 0
    named_surface: str = NAMED_OTHER
    stable: bool = True

    def class_ids(self) -> list[str]:
        return [c.id for c in self.classes]

    def get_class(self, cid: str) -> EndClass:
        for c in self.classes:
            if c.id == cid:
                return c
        raise KeyError(cid)

    @property
    def genus_infinite(self) -> bool:
        return self.genus is None


@dataclass(frozen=True)
class GrandSplitting:
    """The maximal classes of a descriptor."""

    elements: tuple[EndClass, ...]

    @property
    def m(self) -> int:
        return len(self.elements)

    def ids(self) -> list[str]:
        return [c.id for c in self.elements]


@dataclass(frozen=True)
class Verdict:
    tag: str
    reason: str


@dataclass(frozen=True)
class WitnessSignature:
    """Topological signature of a canonical witness subsurface."""

    boundary_labels: tuple[str, ...]
    topology: str = "PuncturedSphere"

    @property
    def n(self) -> int:
        return len(self.boundary_labels)


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, msg: str) -> None:
        self.violations.append(msg)


def _order_cycles(ids: list[str], order) -> bool:
    """True iff the order relation has a directed cycle."""
    adj = {i: [] for i in ids}
    for a, b in order:
        if a in adj:
            adj[a].append(b)
    state = {i: 0 for i in ids}  # 0 unseen, 1 active, 2 done

    def visit(v) -> bool:
        state[v] = 1
        for w in adj.get(v, ()):
            if w not in state:
                continue
            if state[w] == 1 or (state[w] == 0 and visit(w)):
                return True
        state[v] = 2
        return False

    return any(state[i] == 0 and visit(i) for i in ids)


def validate_descriptor(d: EndSpaceDescriptor) -> ValidationReport:
    """Check every descriptor invariant; the report is empty iff admissible."""
    rep = ValidationReport()
    ids = d.class_ids()
    if len(set(ids)) != len(ids):
        rep.add("duplicate class ids")
    for c in d.classes:
        if c.kind not in (SINGLETON, CANTOR):
            rep.add(f"class {c.id}: unknown kind {c.kind!r}")
        if not c.id:
            rep.add("empty class id")

    known = set(ids)
    for a, b in d.order:
        if a not in known or b not in known:
            rep.add(f"order edge ({a},{b}) references unknown class")
        if a == b:
            rep.add(f"order edge ({a},{a}) is reflexive")
    pairs = set(d.order)
    for a, b in d.order:
        if (b, a) in pairs and a != b:
            rep.add(f"mutual order edges between {a} and {b}")
    if _order_cycles(ids, d.order):
        rep.add("order relation has a cycle")

    any_genus_acc = any(c.accumulated_by_genus for c in d.classes)
    if d.genus is not None and d.genus < 0:
        rep.add("negative genus")
    if any_genus_acc and not d.genus_infinite:
        rep.add("genus-accumulating class requires infinite genus")
    if d.genus_infinite and not any_genus_acc:
        rep.add("infinite genus requires a genus-accumulating class")

    if not any(c.kind == CANTOR for c in d.classes) and not d.genus_infinite:
        rep.add("descriptor is finite-type (no Cantor class and finite genus)")

    if d.named_surface not in (NAMED_OTHER, NAMED_OPCT, NAMED_CYCLOCTOPUS):
        rep.add(f"unknown named surface tag {d.named_surface!r}")
    if d.named_surface in (NAMED_OPCT, NAMED_CYCLOCTOPUS):
        want_genus = 0 if d.named_surface == NAMED_OPCT else 1
        kinds = sorted(c.kind for c in d.classes)
        if kinds != [CANTOR, SINGLETON] or d.order or d.genus != want_genus:
            rep.add(f"{d.named_surface} tag inconsistent with declared data")

    # maximal_hint is derived data; a wrong hint is flagged, never trusted.
    if not rep.violations:
        maximal = {c.id for c in maximal_classes(d).elements} if ids else set()
        for c in d.classes:
            if c.maximal_hint is not None and c.maximal_hint != (c.id in maximal):
                rep.add(f"class {c.id}: maximal_hint contradicts the order")
    return rep


def _require_valid(d: EndSpaceDescriptor) -> None:
    rep = validate_descriptor(d)
    if not rep.ok:
        raise MalformedInput("invalid descriptor: " + "; ".join(rep.violations))


def maximal_classes(d: EndSpaceDescriptor) -> GrandSplitting:
    """Return the grand splitting: exactly the sinks of the order relation."""
    if not d.classes:
        raise EmptyEndSpace("descriptor has no end classes")
    non_maximal = {a for a, _ in d.order}
    elems = tuple(c for c in d.classes if c.id not in non_maximal)
    return GrandSplitting(elements=elems)


def classify(d: EndSpaceDescriptor) -> Verdict:
    """Classification of the grand arc graph from (m, named_surface) only."""
    _require_valid(d)
    m = maximal_classes(d).m
    if m <= 1:
        return Verdict(VERDICT_EMPTY, f"only {m} grand splitting class(es); no grand arcs exist")
    if m == 2:
        if d.named_surface == NAMED_OPCT:
            return Verdict(
                VERDICT_HYPERBOLIC,
                "once-punctured Cantor tree: the graph coincides with the ray graph and is hyperbolic",
            )
        return Verdict(
            VERDICT_NOT_HYPERBOLIC,
            "two grand splitting classes admit disjoint witnesses; infinite diameter but not hyperbolic",
        )
    return Verdict(
        VERDICT_HYPERBOLIC,
        f"{m} grand splitting classes: connected, infinite diameter, uniformly hyperbolic",
    )


def witness_signature(d: EndSpaceDescriptor) -> WitnessSignature:
    """Signature of the canonical witness: an m-punctured sphere."""
    _require_valid(d)
    split = maximal_classes(d)
    if split.m <= 1:
        raise NoGrandArcs(f"m={split.m}: the grand arc graph is empty")
    return WitnessSignature(boundary_labels=tuple(sorted(split.ids())))


def disjoint_annular_witnesses(
    d: EndSpaceDescriptor,
) -> tuple[WitnessSignature, WitnessSignature] | None:
    """Two disjoint annular witnesses, or None when m != 2.

    Each returned signature records the maximal class it shields together
    with the clopen split chosen on the non-maximal remainder.
    """
    _require_valid(d)
    if d.named_surface in (NAMED_OPCT, NAMED_CYCLOCTOPUS):
        raise ExcludedSurface(f"{d.named_surface} is excluded from the annular witness construction")
    split = maximal_classes(d)
    if split.m != 2:
        return None
    e1, e2 = sorted(split.ids())
    non_max = sorted(set(d.class_ids()) - set(split.ids()))
    non_max_cantor = [cid for cid in non_max if d.get_class(cid).kind == CANTOR]
    if len(non_max) >= 2:
        f1, f2 = non_max[0], non_max[1]
    elif non_max_cantor:
        f1, f2 = f"{non_max_cantor[0]}#1", f"{non_max_cantor[0]}#2"
    elif d.genus_infinite or (d.genus or 0) >= 2:
        f1, f2 = "genus#1", "genus#2"
    else:
        # validity plus m=2 and no usable remainder forces one of the excluded
        # named surfaces, so this is unreachable for admissible input
        raise ExcludedSurface("no clopen remainder available; surface is an excluded special case")
    w1 = WitnessSignature(boundary_labels=(e1, f1))
    w2 = WitnessSignature(boundary_labels=(e2, f2))
    return (w1, w2)


def orbit_census(d: EndSpaceDescriptor, stable: bool | None = None) -> int:
    """Number of mapping class group orbits of grand arcs: m choose 2."""
    _require_valid(d)
    if stable is None:
        stable = d.stable
    if not (stable and d.stable):
        raise RequiresStableEnds("orbit census requires stable maximal ends")
    m = maximal_classes(d).m
    if m < 2:
        raise NoGrandArcs(f"m={m}: no grand arcs to count")
    return comb(m, 2)


# ---------------------------------------------------------------------------
# descriptor file format


def descriptor_to_dict(d: EndSpaceDescriptor) -> dict:
    return {
        "classes": [
            {"id": c.id, "kind": c.kind, "genus_acc": c.accumulated_by_genus}
            for c in d.classes
        ],
        "order": [[a, b] for a, b in d.order],
        "genus": "inf" if d.genus_infinite else d.genus,
        "named": d.named_surface,
        "stable": d.stable,
    }


def descriptor_from_dict(data: dict) -> EndSpaceDescriptor:
    if not isinstance(data, dict):
        raise MalformedInput("descriptor must be a JSON object")
    unknown = set(data) - _DESCRIPTOR_KEYS
    if unknown:
        raise MalformedInput(f"unknown descriptor keys: {sorted(unknown)}")
    missing = _DESCRIPTOR_KEYS - set(data)
    if missing:
        raise MalformedInput(f"missing descriptor keys: {sorted(missing)}")

    classes = []
    for entry in data["classes"]:
        if not isinstance(entry, dict) or set(entry) - _CLASS_KEYS:
            raise MalformedInput(f"bad class entry: {entry!r}")
        if {"id", "kind"} - set(entry):
            raise MalformedInput(f"class entry missing id/kind: {entry!r}")
        classes.append(
            EndClass(
                id=str(entry["id"]),
                kind=str(entry["kind"]),
                accumulated_by_genus=bool(entry.get("genus_acc", False)),
            )
        )
    order = []
    for pair in data["order"]:
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise MalformedInput(f"bad order edge: {pair!r}")
        order.append((str(pair[0]), str(pair[1])))

    raw_genus = data["genus"]
    if raw_genus == "inf":
        genus: int | None = None
    elif isinstance(raw_genus, str):
        if not raw_genus.isdigit():
            raise MalformedInput(f"bad genus value: {raw_genus!r}")
        genus = int(raw_genus)
    elif isinstance(raw_genus, int) and not isinstance(raw_genus, bool):
        genus = raw_genus
    else:
        raise MalformedInput(f"bad genus value: {raw_genus!r}")

    named = data["named"]
    if named not in (NAMED_OTHER, NAMED_OPCT, NAMED_CYCLOCTOPUS):
        raise MalformedInput(f"bad named surface tag: {named!r}")
    if not isinstance(data["stable"], bool):
        raise MalformedInput("stable must be a boolean")
    return EndSpaceDescriptor(
        classes=tuple(classes),
        order=tuple(order),
        genus=genus,
        named_surface=named,
        stable=data["stable"],
    )


def load_descriptor(path) -> EndSpaceDescriptor:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"descriptor is not valid JSON: {exc}") from exc
    return descriptor_from_dict(data)


def dump_descriptor(d: EndSpaceDescriptor, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(descriptor_to_dict(d), fh, indent=2, sort_keys=True)
        fh.write("\n")
