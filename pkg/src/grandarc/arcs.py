"""Exact arc calculus on a triangulated truncation.

An arc is stored as its reduced crossing word (sequence of exit sides), or
as the edge it is parallel to when it crosses nothing.  Words are
orientation-normalized, so equal arcs compare equal.  Geometric intersection
numbers come from the joint taut arrangement in :mod:`grandarc.taut`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import MalformedArc, MalformedInput, SurfaceMismatch
from .surface import Triangulation, TruncatedSurface, side_code, _tri, _idx
from .taut import Arrangement, Strand, reverse_word, strand_is_simple, tighten


class Arc:
    """An unoriented essential simple arc between punctures, in taut form."""

    __slots__ = ("tri", "sides", "edge", "_key")

    def __init__(self, tri: Triangulation, sides: tuple[int, ...] | None, edge: int | None):
        self.tri = tri
        self.sides = sides
        self.edge = edge
        if sides is not None:
            self._key = (len(sides),) + sides
        else:
            self._key = (0, -1 - edge)

    # -- constructors --------------------------------------------------------

    @classmethod
    def edge_arc(cls, tri: Triangulation, e: int) -> "Arc":
        if not 0 <= e < tri.num_edges:
            raise MalformedArc(f"no edge {e}")
        return cls(tri, None, e)

    @classmethod
    def from_word(cls, tri: Triangulation, sides) -> "Arc":
        """Arc from a reduced word; normalizes orientation, checks validity."""
        sides = tuple(sides)
        if not sides:
            raise MalformedArc("empty word: use edge_arc")
        raw = tighten(tri, sides[0], sides, tri.rho(sides[-1]))
        return cls._from_raw(tri, raw)

    @classmethod
    def from_raw(cls, tri: Triangulation, start_corner: int, sides, end_corner: int) -> "Arc":
        """Arc from a possibly unreduced word with explicit endpoint corners."""
        raw = tighten(tri, start_corner, tuple(sides), end_corner)
        return cls._from_raw(tri, raw)

    @classmethod
    def _from_raw(cls, tri: Triangulation, raw) -> "Arc":
        if raw is None:
            raise MalformedArc("arc is trivial (collapses to a corner)")
        start, sides, end = raw
        if not sides:
            # corner-to-corner segment: parallel to the side joining the corners
            t = _tri(start)
            i = 3 - _idx(start) - _idx(end)
            return cls(tri, None, tri.edge_of_side(side_code(t, i)))
        rev = reverse_word(tri, sides)
        return cls(tri, min(sides, rev), None)

    # -- data ----------------------------------------------------------------

    @property
    def is_edge_arc(self) -> bool:
        return self.sides is None

    def crossings(self) -> int:
        return 0 if self.sides is None else len(self.sides)

    def endpoints(self) -> tuple[int, int]:
        """Vertex ids of the two ends (unordered but deterministic)."""
        if self.sides is None:
            return self.tri.vertices_of_edge(self.edge)
        start = self.sides[0]
        end = self.tri.rho(self.sides[-1])
        return (self.tri.vertex_of_corner(start), self.tri.vertex_of_corner(end))

    def strand(self) -> Strand:
        if self.sides is None:
            s, _ = self.tri.edge_sides(self.edge)
            t, i = _tri(s), _idx(s)
            return Strand(
                self.tri, (), False,
                start_corner=side_code(t, (i + 1) % 3),
                end_corner=side_code(t, (i + 2) % 3),
            )
        return Strand(
            self.tri, self.sides, False,
            start_corner=self.sides[0],
            end_corner=self.tri.rho(self.sides[-1]),
        )

    def sort_key(self):
        return self._key

    def __eq__(self, other):
        return (
            isinstance(other, Arc)
            and self._key == other._key
            and self.tri.surface_hash() == other.tri.surface_hash()
        )

    def __hash__(self):
        return hash((self._key, self.tri.surface_hash()))

    def __repr__(self):
        return f"Arc({format_arc(self)!r})"


@dataclass(frozen=True)
class MultiArc:
    """Finitely many pairwise disjoint arcs (a subsurface projection)."""

    components: tuple[Arc, ...]

    def __len__(self) -> int:
        return len(self.components)

    @property
    def empty(self) -> bool:
        return not self.components


# ---------------------------------------------------------------------------
# operations


def canonical_form(a: Arc) -> Arc:
    """Re-normalize an arc; idempotent, reversal-invariant."""
    if a.sides is None:
        return Arc.edge_arc(a.tri, a.edge)
    return Arc.from_word(a.tri, a.sides)


def is_grand(a: Arc, s: TruncatedSurface) -> bool:
    """True iff the endpoints lie in two different maximal end classes."""
    if a.tri.surface_hash() != s.tri.surface_hash():
        raise SurfaceMismatch("arc does not live on this truncation")
    u, v = a.endpoints()
    cu, cv = s.class_of_vertex(u), s.class_of_vertex(v)
    return cu != cv and cu in s.maximal_class_ids and cv in s.maximal_class_ids


def _check_same_surface(a: Arc, b: Arc) -> None:
    if a.tri is not b.tri and a.tri.surface_hash() != b.tri.surface_hash():
        raise SurfaceMismatch("arcs live on different surfaces")


def intersection_number(a: Arc, b: Arc) -> int:
    """Geometric intersection number of taut representatives."""
    _check_same_surface(a, b)
    if a == b:
        return 0
    arr = Arrangement(a.tri, [a.strand(), b.strand()])
    return arr.count(0, 1)


def disjoint(a: Arc, b: Arc) -> bool:
    return intersection_number(a, b) == 0


def is_simple_word(tri: Triangulation, sides) -> bool:
    """Whether a reduced word admits an embedded representative."""
    strand = Strand(tri, tuple(sides), False,
                    start_corner=sides[0], end_corner=tri.rho(sides[-1]))
    return strand_is_simple(tri, strand)


def enumerate_arcs(
    surface,
    L: int,
    grand_only: bool = False,
    descriptor=None,
) -> list[Arc]:
    """All canonical simple arcs with at most ``L`` crossings, sorted.

    ``surface`` may be a :class:`TruncatedSurface` (required for
    ``grand_only``) or a bare :class:`Triangulation`.
    """
    if isinstance(surface, TruncatedSurface):
        s, tri = surface, surface.tri
    else:
        s, tri = None, surface
    if grand_only and s is None:
        raise MalformedInput("grand_only enumeration needs a truncation with labels")

    out: list[Arc] = []

    def emit(arc: Arc) -> None:
        if grand_only and not is_grand(arc, s):
            return
        out.append(arc)

    for e in range(tri.num_edges):
        emit(Arc.edge_arc(tri, e))

    if L >= 1:
        n_sides = 3 * tri.num_triangles

        def extend(word: list[int]) -> None:
            rev = reverse_word(tri, word)
            fwd = tuple(word)
            if fwd <= rev and is_simple_word(tri, fwd):
                emit(Arc(tri, fwd, None))
            if len(word) >= L:
                return
            gate = tri.rho(word[-1])
            t, i = _tri(gate), _idx(gate)
            for di in (1, 2):
                word.append(side_code(t, (i + di) % 3))
                extend(word)
                word.pop()

        for s0 in range(n_sides):
            extend([s0])

    seen = set()
    unique = []
    for arc in sorted(out, key=Arc.sort_key):
        if arc.sort_key() not in seen:
            seen.add(arc.sort_key())
            unique.append(arc)
    return unique


# ---------------------------------------------------------------------------
# arc literals: "v3 : e1 e5 e2 : v7"

_TOKEN_RE = re.compile(r"^(=?)e(\d+)(?:@([01]))?$")


def format_arc(a: Arc) -> str:
    """Literal form; round-trips bit-exactly through :func:`parse_arc`."""
    u, v = a.endpoints()
    if a.sides is None:
        return f"v{u} : =e{a.edge} : v{v}"
    plain = " ".join(f"e{a.tri.edge_of_side(s)}" for s in a.sides)
    text = f"v{u} : {plain} : v{v}"
    try:
        if parse_arc(a.tri, text) == a:
            return text
    except MalformedArc:
        pass
    tagged = " ".join(
        f"e{a.tri.edge_of_side(s)}"
        f"@{0 if s == a.tri.edge_sides(a.tri.edge_of_side(s))[0] else 1}"
        for s in a.sides
    )
    return f"v{u} : {tagged} : v{v}"


def parse_arc(tri: Triangulation, text: str) -> Arc:
    """Parse an arc literal; raises :class:`MalformedArc` if inconsistent."""
    parts = [p.strip() for p in text.split(":")]
    if len(parts) != 3:
        raise MalformedArc(f"literal must have two ':' separators: {text!r}")
    u = _parse_vertex(tri, parts[0])
    v = _parse_vertex(tri, parts[2])
    tokens = parts[1].split()
    if not tokens:
        raise MalformedArc("empty crossing list: use the '=e<k>' form for edge arcs")

    if len(tokens) == 1 and tokens[0].startswith("="):
        m = _TOKEN_RE.match(tokens[0])
        if not m:
            raise MalformedArc(f"bad token {tokens[0]!r}")
        arc = Arc.edge_arc(tri, _parse_edge(tri, int(m.group(2))))
        if set(arc.endpoints()) != {u, v}:
            raise MalformedArc("edge arc endpoints do not match the literal")
        return arc

    # per-token side options
    options: list[list[int]] = []
    for tok in tokens:
        m = _TOKEN_RE.match(tok)
        if not m or m.group(1):
            raise MalformedArc(f"bad crossing token {tok!r}")
        e = _parse_edge(tri, int(m.group(2)))
        s, s2 = tri.edge_sides(e)
        if m.group(3) is None:
            options.append([s, s2])
        else:
            options.append([s if m.group(3) == "0" else s2])

    results = set()

    def walk(j: int, word: list[int]) -> None:
        if j == len(options):
            last_tri = _tri(tri.rho(word[-1]))
            first_tri = _tri(word[0])
            for sc in range(3):
                if tri.vertex_of_corner(side_code(first_tri, sc)) != u:
                    continue
                for ec in range(3):
                    if tri.vertex_of_corner(side_code(last_tri, ec)) != v:
                        continue
                    try:
                        arc = Arc.from_raw(
                            tri, side_code(first_tri, sc), word, side_code(last_tri, ec)
                        )
                    except MalformedArc:
                        continue
                    pts = arc.endpoints()
                    if {pts[0], pts[1]} == {u, v}:
                        results.add(arc)
            return
        for side in options[j]:
            if j > 0 and _tri(side) != _tri(tri.rho(word[-1])):
                continue
            word.append(side)
            walk(j + 1, word)
            word.pop()

    walk(0, [])
    if not results:
        raise MalformedArc(f"no consistent reading of {text!r}")
    if len(results) > 1:
        raise MalformedArc(
            f"ambiguous literal {text!r}; use side-tagged tokens like 'e3@0'"
        )
    return results.pop()


def _parse_vertex(tri: Triangulation, token: str) -> int:
    m = re.match(r"^v(\d+)$", token)
    if not m:
        raise MalformedArc(f"bad vertex token {token!r}")
    v = int(m.group(1))
    if not 0 <= v < tri.num_vertices:
        raise MalformedArc(f"no vertex {token}")
    return v


def _parse_edge(tri: Triangulation, e: int) -> int:
    if not 0 <= e < tri.num_edges:
        raise MalformedArc(f"no edge e{e}")
    return e
