"""Labeled ideal triangulations and finite truncations of infinite-type surfaces.

A triangulation is a set of triangles with sides glued in pairs by an
orientation-reversing involution.  Side ``i`` of a triangle runs, in the
boundary orientation, from corner ``i+1`` to corner ``i+2`` (indices mod 3);
corner ``i`` is opposite side ``i``.  All vertices are ideal (punctures) and
carry end-class labels.

Truncations are assembled from a "pocket" base: one pole puncture plus one
single-triangle pocket per remaining puncture.  Pockets keep every end class
in its own territory, so witness subsurfaces are unions of whole triangles
and can be coned off into standalone punctured surfaces.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .end_space import (
    CANTOR,
    EndSpaceDescriptor,
    ValidationReport,
    classify,
    maximal_classes,
    VERDICT_EMPTY,
)
from .errors import MalformedInput, NoGrandArcs, TruncationTooSmall


def _tri(side: int) -> int:
    return side // 3


def _idx(side: int) -> int:
    return side % 3


def side_code(t: int, i: int) -> int:
    return 3 * t + i


def _orbits_of_corners(glue: list[int]) -> list[list[int]]:
    n = len(glue)
    seen = [False] * n
    orbits = []
    for c in range(n):
        if seen[c]:
            continue
        orbit = []
        x = c
        while not seen[x]:
            seen[x] = True
            orbit.append(x)
            t, k = _tri(x), _idx(x)
            s2 = glue[side_code(t, (k + 2) % 3)]
            x = side_code(_tri(s2), (_idx(s2) + 2) % 3)
        if x != c:
            raise MalformedInput("corner rotation did not close up")
        orbits.append(orbit)
    return orbits


class Triangulation:
    """Immutable glued-triangle complex with labeled ideal vertices."""

    def __init__(self, glue: list[int], corner_labels: dict[int, str], level: int = 0):
        n = len(glue)
        if n == 0 or n % 3:
            raise MalformedInput("side table length must be a positive multiple of 3")
        for s, s2 in enumerate(glue):
            if not 0 <= s2 < n or glue[s2] != s:
                raise MalformedInput(f"gluing is not an involution at side {s}")
            if s2 == s:
                raise MalformedInput(f"side {s} glued to itself")
        self._glue = tuple(glue)
        self._level = level

        self._edge_of_side = [0] * n
        refs = sorted(s for s in range(n) if s < glue[s])
        self._edge_refs = tuple(refs)
        eos = [0] * n
        for e, s in enumerate(refs):
            eos[s] = e
            eos[glue[s]] = e
        self._edge_of_side = tuple(eos)

        orbits = _orbits_of_corners(list(glue))
        order = sorted(range(len(orbits)), key=lambda v: min(orbits[v]))
        voc = [0] * n
        for new, old in enumerate(order):
            for c in orbits[old]:
                voc[c] = new
        self._vertex_of_corner = tuple(voc)
        self._vertex_corners = tuple(tuple(orbits[old]) for old in order)

        labels: list[str | None] = [None] * len(order)
        for corner, lab in corner_labels.items():
            v = self._vertex_of_corner[corner]
            if labels[v] is not None and labels[v] != lab:
                raise MalformedInput(f"conflicting labels for vertex {v}")
            labels[v] = lab
        if any(lab is None for lab in labels):
            raise MalformedInput("some vertex has no label")
        self._labels = tuple(labels)  # type: ignore[arg-type]

    # -- basic queries ------------------------------------------------------

    @property
    def num_triangles(self) -> int:
        return len(self._glue) // 3

    @property
    def num_edges(self) -> int:
        return len(self._edge_refs)

    @property
    def num_vertices(self) -> int:
        return len(self._vertex_corners)

    @property
    def level(self) -> int:
        return self._level

    def rho(self, side: int) -> int:
        return self._glue[side]

    def edge_of_side(self, side: int) -> int:
        return self._edge_of_side[side]

    def edge_sides(self, e: int) -> tuple[int, int]:
        s = self._edge_refs[e]
        return s, self._glue[s]

    def vertex_of_corner(self, c: int) -> int:
        return self._vertex_of_corner[c]

    def vertex_corners(self, v: int) -> tuple[int, ...]:
        return self._vertex_corners[v]

    def vertex_label(self, v: int) -> str:
        return self._labels[v]

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    def vertices_of_edge(self, e: int) -> tuple[int, int]:
        s = self._edge_refs[e]
        t, i = _tri(s), _idx(s)
        return (
            self._vertex_of_corner[side_code(t, (i + 1) % 3)],
            self._vertex_of_corner[side_code(t, (i + 2) % 3)],
        )

    def vertex_link_word(self, v: int) -> tuple[int, ...]:
        """Closed curve around vertex ``v`` as a cyclic exit-side sequence."""
        return tuple(
            side_code(_tri(c), (_idx(c) + 2) % 3) for c in self._vertex_corners[v]
        )

    @property
    def chi_compact(self) -> int:
        return self.num_vertices - self.num_edges + self.num_triangles

    @property
    def chi_open(self) -> int:
        return self.chi_compact - self.num_vertices

    def genus(self) -> int:
        return (2 - self.chi_compact) // 2

    def dual_neighbors(self, t: int) -> list[int]:
        return [_tri(self._glue[side_code(t, i)]) for i in range(3)]

    def is_connected(self) -> bool:
        if self.num_triangles == 0:
            return False
        seen = {0}
        stack = [0]
        while stack:
            t = stack.pop()
            for t2 in self.dual_neighbors(t):
                if t2 not in seen:
                    seen.add(t2)
                    stack.append(t2)
        return len(seen) == self.num_triangles

    # -- file format --------------------------------------------------------

    def to_dict(self) -> dict:
        triangles = [
            [self._edge_of_side[side_code(t, i)] for i in range(3)]
            for t in range(self.num_triangles)
        ]
        gluings = []
        for e in range(self.num_edges):
            s, s2 = self.edge_sides(e)
            gluings.append([[_tri(s), _idx(s)], [_tri(s2), _idx(s2)]])
        labels = {f"v{v}": self._labels[v] for v in range(self.num_vertices)}
        return {
            "triangles": triangles,
            "gluings": gluings,
            "vertex_labels": labels,
            "level": self._level,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Triangulation":
        required = {"triangles", "gluings", "vertex_labels", "level"}
        if not isinstance(data, dict) or set(data) != required:
            raise MalformedInput(f"surface file must have exactly keys {sorted(required)}")
        triangles = data["triangles"]
        nt = len(triangles)
        for t, row in enumerate(triangles):
            if not isinstance(row, list) or len(row) != 3:
                raise MalformedInput(f"triangle {t} does not have 3 sides")
        glue = [-1] * (3 * nt)
        for pair in data["gluings"]:
            try:
                (t, i), (t2, i2) = pair
                a, b = side_code(int(t), int(i)), side_code(int(t2), int(i2))
            except (TypeError, ValueError) as exc:
                raise MalformedInput(f"bad gluing entry {pair!r}") from exc
            if not (0 <= a < 3 * nt and 0 <= b < 3 * nt):
                raise MalformedInput(f"gluing entry {pair!r} out of range")
            if glue[a] != -1 or glue[b] != -1 or a == b:
                raise MalformedInput(f"bad or duplicate gluing entry {pair!r}")
            glue[a], glue[b] = b, a
        if any(g < 0 for g in glue):
            raise MalformedInput("some side is not glued")
        for s in range(3 * nt):
            if triangles[_tri(s)][_idx(s)] != triangles[_tri(glue[s])][_idx(glue[s])]:
                raise MalformedInput("triangle edge ids disagree with gluings")
        corner_labels = _corner_labels_from_names(glue, data["vertex_labels"])
        return cls(glue, corner_labels, level=int(data["level"]))

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def surface_hash(self) -> str:
        cached = getattr(self, "_hash_cache", None)
        if cached is None:
            cached = hashlib.sha256(self.canonical_json().encode()).hexdigest()[:16]
            self._hash_cache = cached
        return cached


def _corner_labels_from_names(glue: list[int], name_map: dict) -> dict[int, str]:
    """Resolve 'v<k>'-keyed labels against the canonical vertex order."""
    orbits = _orbits_of_corners(glue)
    order = sorted(range(len(orbits)), key=lambda v: min(orbits[v]))
    if not isinstance(name_map, dict) or len(name_map) != len(order):
        raise MalformedInput("vertex_labels does not match the vertex count")
    out = {}
    for new, old in enumerate(order):
        key = f"v{new}"
        if key not in name_map:
            raise MalformedInput(f"missing label for vertex {key}")
        out[orbits[old][0]] = str(name_map[key])
    return out


def load_surface(path) -> Triangulation:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"surface file is not valid JSON: {exc}") from exc
    return Triangulation.from_dict(data)


def dump_surface(tri: Triangulation, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(tri.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def euler_characteristic(tri: Triangulation) -> int:
    """V - E + F of the compact model; the punctured count is ``tri.chi_open``."""
    return tri.chi_compact


def validate_triangulation(tri: Triangulation) -> ValidationReport:
    """Report-style validation: gluing involution, connectivity, labels."""
    rep = ValidationReport()
    n = 3 * tri.num_triangles
    for s in range(n):
        if tri.rho(tri.rho(s)) != s:
            rep.add(f"gluing not an involution at side {s}")
        if tri.rho(s) == s:
            rep.add(f"side {s} glued to itself")
    if not tri.is_connected():
        rep.add("surface is not connected")
    if any(not lab for lab in tri.labels):
        rep.add("empty vertex label")
    return rep


# ---------------------------------------------------------------------------
# mutable builder


class _Builder:
    """Grows a complex by pocket assembly, vertex insertion and tube insertion."""

    def __init__(self):
        self.glue: list[int] = []
        self.alive: list[bool] = []
        self.owner: list[str] = []
        self.vertex_rep: dict[str, int] = {}  # handle -> a live corner
        self.vertex_class: dict[str, str] = {}

    def new_triangle(self, owner: str) -> int:
        t = len(self.alive)
        self.alive.append(True)
        self.owner.append(owner)
        self.glue.extend([-1, -1, -1])
        return t

    def set_glue(self, a: int, b: int) -> None:
        self.glue[a] = b
        self.glue[b] = a

    def reps_in_triangle(self, t: int) -> list[tuple[str, int]]:
        return [(h, c) for h, c in self.vertex_rep.items() if _tri(c) == t]

    def corner_orbit(self, corner: int) -> list[int]:
        out = [corner]
        x = corner
        for _ in range(len(self.glue) + 1):
            t, k = _tri(x), _idx(x)
            s2 = self.glue[side_code(t, (k + 2) % 3)]
            x = side_code(_tri(s2), (_idx(s2) + 2) % 3)
            if x == corner:
                return out
            out.append(x)
        raise MalformedInput("corner orbit failed to close in builder")

    def corner_class(self, corner: int) -> str | None:
        orbit = set(self.corner_orbit(corner))
        for handle, rep in self.vertex_rep.items():
            if rep in orbit:
                return self.vertex_class[handle]
        return None

    def subdivide(self, host: int, new_handle: str, new_class: str, owner: str) -> list[int]:
        """Insert a puncture inside ``host``; child ``i`` carries host side ``i``.

        Child local corners: 0 the new vertex, 1 host corner ``i+1``, 2 host
        corner ``i+2``.
        """
        old_glue = [self.glue[side_code(host, i)] for i in range(3)]
        kids = [self.new_triangle(owner) for _ in range(3)]
        for handle, c in self.reps_in_triangle(host):
            j = _idx(c)
            self.vertex_rep[handle] = side_code(kids[(j - 1) % 3], 1)
        self.alive[host] = False
        side_map = {side_code(host, i): side_code(kids[i], 0) for i in range(3)}
        for i in range(3):
            target = old_glue[i]
            self.set_glue(side_code(kids[i], 0), side_map.get(target, target))
        for i in range(3):
            self.set_glue(side_code(kids[i], 1), side_code(kids[(i + 1) % 3], 2))
        self.vertex_rep[new_handle] = side_code(kids[0], 0)
        self.vertex_class[new_handle] = new_class
        return kids

    def insert_tube(self, t1: int, t2: int, owner: str) -> list[int]:
        """Replace two triangles by a six-triangle tube, adding one handle."""
        if t1 == t2:
            raise TruncationTooSmall("tube feet must be distinct triangles")
        old1 = [self.glue[side_code(t1, i)] for i in range(3)]
        old2 = [self.glue[side_code(t2, i)] for i in range(3)]
        ups = [self.new_triangle(owner) for _ in range(3)]
        lows = [self.new_triangle(owner) for _ in range(3)]
        for handle, c in self.reps_in_triangle(t1):
            j = _idx(c)
            self.vertex_rep[handle] = side_code(ups[(1 - j) % 3], 2)
        for handle, c in self.reps_in_triangle(t2):
            j = _idx(c)
            self.vertex_rep[handle] = side_code(lows[(j - 1) % 3], 1)
        self.alive[t1] = False
        self.alive[t2] = False
        side_map = {}
        for k in range(3):
            side_map[side_code(t1, (-k) % 3)] = side_code(ups[k], 1)
            side_map[side_code(t2, k)] = side_code(lows[k], 0)
        for k in range(3):
            tgt = old1[(-k) % 3]
            self.set_glue(side_code(ups[k], 1), side_map.get(tgt, tgt))
            tgt2 = old2[k]
            self.set_glue(side_code(lows[k], 0), side_map.get(tgt2, tgt2))
        for k in range(3):
            self.set_glue(side_code(ups[k], 0), side_code(lows[k], 2))
            self.set_glue(side_code(ups[k], 2), side_code(lows[(k - 1) % 3], 1))
        return ups + lows

    def compact(self) -> tuple[list[int], dict[int, int], list[str]]:
        remap = {}
        for t, ok in enumerate(self.alive):
            if ok:
                remap[t] = len(remap)
        glue = [-1] * (3 * len(remap))
        owners = [""] * len(remap)
        for t_old, t_new in remap.items():
            owners[t_new] = self.owner[t_old]
            for i in range(3):
                s2 = self.glue[side_code(t_old, i)]
                if s2 < 0 or not self.alive[_tri(s2)]:
                    raise MalformedInput("dangling gluing in builder")
                glue[side_code(t_new, i)] = side_code(remap[_tri(s2)], _idx(s2))
        return glue, remap, owners


# ---------------------------------------------------------------------------
# truncations


@dataclass(frozen=True)
class Region:
    """A subsurface given by a set of whole triangles."""

    name: str
    triangles: frozenset

    def __contains__(self, t: int) -> bool:
        return t in self.triangles


class TruncatedSurface:
    """A finite truncation of the surface described by an end-space descriptor."""

    def __init__(self, tri: Triangulation, descriptor: EndSpaceDescriptor, level: int,
                 owners: list[str], cuffs: dict[str, list[int]]):
        self.tri = tri
        self.descriptor = descriptor
        self.level = level
        self._owners = tuple(owners)
        self._cuffs = {k: tuple(v) for k, v in cuffs.items()}
        self._maximal = frozenset(maximal_classes(descriptor).ids())

    @property
    def maximal_class_ids(self) -> frozenset:
        return self._maximal

    def cuff_vertices(self, class_id: str) -> tuple[int, ...]:
        return self._cuffs[class_id]

    def triangle_owner(self, t: int) -> str:
        return self._owners[t]

    def class_of_vertex(self, v: int) -> str:
        lab = self.tri.vertex_label(v)
        return lab[5:] if lab.startswith("cuff:") else lab

    def is_maximal_vertex(self, v: int) -> bool:
        return self.class_of_vertex(v) in self._maximal

    def region(self, name: str) -> Region:
        """Resolve 'all', 'core', 'sprout:<class>' or 'off:<class,...>'."""
        nt = self.tri.num_triangles
        if name == "all":
            return Region("all", frozenset(range(nt)))
        if name == "core":
            tris = frozenset(t for t in range(nt) if self._owners[t] == "core")
            if not tris:
                raise TruncationTooSmall("this truncation has no core triangles")
            return Region("core", tris)
        if name.startswith("sprout:"):
            cid = name[len("sprout:"):]
            if cid not in {c.id for c in self.descriptor.classes}:
                raise MalformedInput(f"unknown class in region name: {cid}")
            tris = frozenset(t for t in range(nt) if self._owners[t] == cid)
            if not tris:
                raise TruncationTooSmall(f"class {cid} owns no triangles at this level")
            return Region(name, tris)
        if name.startswith("off:"):
            cids = set(c for c in name[len("off:"):].split(",") if c)
            keep = frozenset(t for t in range(nt) if self._owners[t] not in cids)
            if not keep:
                raise TruncationTooSmall("region is empty")
            return Region(name, keep)
        raise MalformedInput(f"unknown region name: {name}")

    def surface_hash(self) -> str:
        return self.tri.surface_hash()


def build_truncation(d: EndSpaceDescriptor, level: int) -> TruncatedSurface:
    """Build the level-``level`` truncation of the descriptor's surface.

    Level 0 carries one puncture per end class (pocket layout around a pole).
    Each further level splits every maximal Cantor cuff in two, adds one
    handle per genus-accumulating class, and attaches finite genus at level 1
    next to the first Cantor class.  Descriptors with only two end classes
    start at level 1, the smallest triangulable configuration.
    """
    verdict = classify(d)
    if verdict.tag == VERDICT_EMPTY:
        raise NoGrandArcs("descriptor has no grand arcs; nothing to truncate")
    if level < 0:
        raise MalformedInput("level must be >= 0")
    max_ids = set(maximal_classes(d).ids())

    b = _Builder()
    cuffs: dict[str, list[str]] = {c.id: [] for c in d.classes}
    counter: dict[str, int] = {}
    # levels already performed per class (pre-splits done by the base)
    done: dict[str, int] = {c.id: 0 for c in d.classes}

    def fresh_handle(cid: str) -> str:
        counter[cid] = counter.get(cid, 0) + 1
        return f"{cid}.{counter[cid]}"

    def class_label(cid: str) -> str:
        return f"cuff:{cid}" if d.get_class(cid).kind == CANTOR else cid

    if len(d.classes) >= 3:
        non_max = [c for c in d.classes if c.id not in max_ids]
        pole = non_max[0] if non_max else d.classes[0]
        pockets = [(c.id, c.id) for c in d.classes if c.id != pole.id]
    else:
        # two classes: a 2-punctured sphere carries no ideal triangulation
        if level < 1:
            raise TruncationTooSmall(
                "two-class descriptors are triangulable only from level 1 on"
            )
        c0, c1 = d.classes
        cantors = [c for c in (c0, c1) if c.kind == CANTOR]
        if cantors:
            sat = cantors[-1]
            pole = c0 if sat.id == c1.id else c1
            h2 = fresh_handle(sat.id)
            pockets = [(sat.id, sat.id), (sat.id, h2)]
            done[sat.id] = 1
        else:
            # two singleton classes: start from a one-handle base
            pole = None
            pockets = []

    if pockets:
        mouths = []
        for cid, handle in pockets:
            t = b.new_triangle(owner=cid)
            b.set_glue(side_code(t, 1), side_code(t, 2))
            mouths.append(side_code(t, 0))
            b.vertex_rep[handle] = side_code(t, 0)
            b.vertex_class[handle] = cid
            cuffs[cid].append(handle)
        b.vertex_class[pole.id] = pole.id
        cuffs[pole.id].append(pole.id)
        k = len(mouths)
        if k == 2:
            b.set_glue(mouths[0], mouths[1])
            b.vertex_rep[pole.id] = side_code(_tri(mouths[0]), 1)
        else:
            prev = None
            core0 = None
            for j in range(k - 2):
                t = b.new_triangle(owner="core")
                core0 = t if core0 is None else core0
                b.set_glue(side_code(t, 0), mouths[j + 1])
                b.set_glue(side_code(t, 2), mouths[0] if j == 0 else prev)
                prev = side_code(t, 1)
            b.set_glue(prev, mouths[k - 1])
            b.vertex_rep[pole.id] = side_code(core0, 0)
    else:
        # one-vertex torus, second puncture inserted inside
        c0, c1 = d.classes
        t0 = b.new_triangle(owner=c0.id)
        t1 = b.new_triangle(owner=c0.id)
        for i in range(3):
            b.set_glue(side_code(t0, i), side_code(t1, i))
        b.vertex_rep[c0.id] = side_code(t0, 0)
        b.vertex_class[c0.id] = c0.id
        cuffs[c0.id].append(c0.id)
        b.subdivide(t0, c1.id, c1.id, owner=c1.id)
        cuffs[c1.id].append(c1.id)

    def host_for(cid: str, handle: str) -> int:
        corners = set(b.corner_orbit(b.vertex_rep[handle]))
        best = None
        for corner in corners:
            t = _tri(corner)
            if not b.alive[t]:
                continue
            fam = sum(
                1 for cc in range(3) if b.corner_class(side_code(t, cc)) == cid
            )
            key = (0 if b.owner[t] == cid else 1, -fam, t)
            if best is None or key < best[0]:
                best = (key, t)
        if best is None:
            raise TruncationTooSmall(f"no host triangle available for class {cid}")
        return best[1]

    def tube_feet(cid: str) -> tuple[int, int]:
        owned = [t for t, ok in enumerate(b.alive) if ok and b.owner[t] == cid]
        if len(owned) >= 2:
            return owned[0], owned[1]
        live = [t for t, ok in enumerate(b.alive) if ok]
        if len(live) < 2:
            raise TruncationTooSmall("not enough triangles to insert a handle")
        if owned:
            other = next(t for t in live if t != owned[0])
            return owned[0], other
        return live[0], live[1]

    for lvl in range(1, level + 1):
        for c in d.classes:
            if c.id not in max_ids or c.kind != CANTOR or done[c.id] >= lvl:
                continue
            for h in list(cuffs[c.id]):
                host = host_for(c.id, h)
                nh = fresh_handle(c.id)
                b.subdivide(host, nh, c.id, owner=c.id)
                cuffs[c.id].append(nh)
            done[c.id] = lvl
        if lvl == 1 and d.genus and not d.genus_infinite:
            host_class = next((c for c in d.classes if c.kind == CANTOR), d.classes[0])
            for _ in range(d.genus):
                t1, t2 = tube_feet(host_class.id)
                b.insert_tube(t1, t2, owner=host_class.id)
        if d.genus_infinite:
            for c in d.classes:
                if c.accumulated_by_genus:
                    t1, t2 = tube_feet(c.id)
                    b.insert_tube(t1, t2, owner=c.id)

    glue, remap, owners = b.compact()
    corner_labels = {}
    handle_corner = {}
    for handle, corner in b.vertex_rep.items():
        t_new = remap[_tri(corner)]
        new_corner = side_code(t_new, _idx(corner))
        handle_corner[handle] = new_corner
        corner_labels[new_corner] = class_label(b.vertex_class[handle])
    tri = Triangulation(glue, corner_labels, level=level)

    cuff_vertices: dict[str, list[int]] = {c.id: [] for c in d.classes}
    for cid, handles in cuffs.items():
        for h in handles:
            cuff_vertices[cid].append(tri.vertex_of_corner(handle_corner[h]))
        cuff_vertices[cid] = sorted(set(cuff_vertices[cid]))
    return TruncatedSurface(tri, d, level, owners, cuff_vertices)


# ---------------------------------------------------------------------------
# witness subsurfaces by coning


@dataclass
class WitnessSurface:
    """A region coned off into a standalone punctured surface.

    ``tri_map``/``side_map`` translate ambient triangles and sides into the
    witness complex; every frontier side points at the fan triangle whose
    apex is the cone puncture of its boundary circle.
    """

    base: TruncatedSurface
    region: Region
    tri: Triangulation
    tri_map: dict[int, int]
    side_map: dict[int, int]
    fan_of_frontier: dict[int, int]
    apex_vertices: tuple[int, ...]

    def vertex_class(self, v: int) -> str | None:
        lab = self.tri.vertex_label(v)
        if lab.startswith("@"):
            return None
        return lab[5:] if lab.startswith("cuff:") else lab


def cone_region(s: TruncatedSurface, region: Region) -> WitnessSurface:
    """Abstract surface of a region: its triangles plus one cone per boundary circle."""
    tri = s.tri
    members = sorted(region.triangles)
    if not members:
        raise TruncationTooSmall("empty region")
    tri_map = {t: i for i, t in enumerate(members)}

    frontier = []
    for t in members:
        for i in range(3):
            if _tri(tri.rho(side_code(t, i))) not in region.triangles:
                frontier.append(side_code(t, i))
    frontier_set = set(frontier)
    if not frontier:
        # region is the whole surface: the witness is the surface itself
        ident = {t: t for t in members}
        return WitnessSurface(
            base=s,
            region=region,
            tri=tri,
            tri_map=ident,
            side_map={side_code(t, i): side_code(t, i) for t in members for i in range(3)},
            fan_of_frontier={},
            apex_vertices=(),
        )

    def next_frontier(side: int) -> int:
        # rotate around the head corner of `side`, staying inside the region
        t, i = _tri(side), _idx(side)
        c = side_code(t, (i + 2) % 3)
        while True:
            t2, k2 = _tri(c), _idx(c)
            cand = side_code(t2, (k2 + 2) % 3)
            if cand in frontier_set:
                return cand
            nxt = tri.rho(cand)
            if _tri(nxt) not in region.triangles:
                raise MalformedInput("region frontier trace left the region")
            c = side_code(_tri(nxt), (_idx(nxt) + 2) % 3)

    circles = []
    unseen = set(frontier)
    while unseen:
        start = min(unseen)
        circle = [start]
        unseen.discard(start)
        cur = start
        while True:
            cur = next_frontier(cur)
            if cur == start:
                break
            circle.append(cur)
            unseen.discard(cur)
        circles.append(circle)

    nt = len(members)
    glue = [-1] * (3 * (nt + len(frontier)))

    def member_side(side: int) -> int:
        return side_code(tri_map[_tri(side)], _idx(side))

    for t in members:
        for i in range(3):
            srd = tri.rho(side_code(t, i))
            if _tri(srd) in region.triangles:
                a, bb = member_side(side_code(t, i)), member_side(srd)
                glue[a], glue[bb] = bb, a

    fan_id = {}
    idx = nt
    for circle in circles:
        for side in circle:
            fan_id[side] = idx
            idx += 1
    for circle in circles:
        n = len(circle)
        for j, side in enumerate(circle):
            f = fan_id[side]
            a, bb = side_code(f, 0), member_side(side)
            glue[a], glue[bb] = bb, a
            nxt = fan_id[circle[(j + 1) % n]]
            a, bb = side_code(f, 2), side_code(nxt, 1)
            glue[a], glue[bb] = bb, a

    corner_labels = {}
    for t in members:
        for i in range(3):
            v = tri.vertex_of_corner(side_code(t, i))
            corner_labels[side_code(tri_map[t], i)] = tri.vertex_label(v)
    for k, circle in enumerate(circles):
        corner_labels[side_code(fan_id[circle[0]], 0)] = f"@{k}"

    wtri = Triangulation(glue, corner_labels, level=s.level)
    side_map = {}
    for t in members:
        for i in range(3):
            side_map[side_code(t, i)] = side_code(tri_map[t], i)
    apexes = tuple(
        wtri.vertex_of_corner(side_code(fan_id[circle[0]], 0)) for circle in circles
    )
    return WitnessSurface(
        base=s,
        region=region,
        tri=wtri,
        tri_map=tri_map,
        side_map=side_map,
        fan_of_frontier={side: fan_id[side] for side in frontier},
        apex_vertices=apexes,
    )


def witness_cut_ok(s: TruncatedSurface, region: Region) -> bool:
    """True iff no complement component of the region touches two maximal classes."""
    tri = s.tri
    unseen = set(t for t in range(tri.num_triangles) if t not in region.triangles)
    while unseen:
        start = unseen.pop()
        comp = {start}
        stack = [start]
        while stack:
            t = stack.pop()
            for t2 in tri.dual_neighbors(t):
                if t2 in unseen:
                    unseen.discard(t2)
                    comp.add(t2)
                    stack.append(t2)
        classes = set()
        for t in comp:
            for i in range(3):
                v = tri.vertex_of_corner(side_code(t, i))
                if all(_tri(c) not in region.triangles for c in tri.vertex_corners(v)):
                    cid = s.class_of_vertex(v)
                    if cid in s.maximal_class_ids:
                        classes.add(cid)
        if len(classes) > 1:
            return False
    return True
