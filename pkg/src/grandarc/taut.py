"""Taut realization of arc and curve systems on a triangulation.

Arcs and closed curves are stored as reduced words of exit sides.  This
module places all strands of a system jointly in minimal position:

* passages through each edge are ordered by fellow-travel divergence, the
  deciding divergence event being chosen canonically per strand pair so the
  order is constant along shared corridors;
* inside every triangle the strand pieces become chords between boundary
  slots placed on a convex (parabola) model, so crossings and their order
  along each strand are exact rational computations.

Counting interleaved chord pairs then yields geometric intersection numbers,
and the per-crossing positions drive unicorn surgery and twisting.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cmp_to_key

from .errors import GrandArcError, MalformedArc, MalformedCurve
from .surface import Triangulation, side_code, _tri, _idx


class Strand:
    """One arc or closed curve prepared for arrangement.

    ``sides`` is the reduced word of exit sides.  Open strands carry their
    endpoint corners; an open strand with an empty word is a corner-to-corner
    segment inside one triangle (an arc parallel to a triangulation edge).
    """

    __slots__ = ("tri", "sides", "closed", "start_corner", "end_corner")

    def __init__(self, tri: Triangulation, sides, closed: bool,
                 start_corner: int | None = None, end_corner: int | None = None):
        self.tri = tri
        self.sides = tuple(sides)
        self.closed = closed
        self.start_corner = start_corner
        self.end_corner = end_corner
        n = len(self.sides)
        if closed:
            if n == 0:
                raise MalformedCurve("empty closed word")
            for j in range(n):
                nxt = self.sides[(j + 1) % n]
                if _tri(nxt) != _tri(tri.rho(self.sides[j])):
                    raise MalformedCurve("closed word is not locally consistent")
        else:
            if n == 0:
                if start_corner is None or end_corner is None:
                    raise MalformedArc("empty open strand needs both corners")
                if _tri(start_corner) != _tri(end_corner):
                    raise MalformedArc("corner segment must stay in one triangle")
            else:
                if _tri(start_corner) != _tri(self.sides[0]):
                    raise MalformedArc("start corner not in the first triangle")
                if _tri(end_corner) != _tri(tri.rho(self.sides[-1])):
                    raise MalformedArc("end corner not in the last triangle")
                for j in range(n - 1):
                    if _tri(self.sides[j + 1]) != _tri(tri.rho(self.sides[j])):
                        raise MalformedArc("word is not locally consistent")

    def __len__(self) -> int:
        return len(self.sides)

    def num_chords(self) -> int:
        return len(self.sides) if self.closed else len(self.sides) + 1

    def chord_triangle(self, k: int) -> int:
        """Triangle hosting chord ``k``; chords follow the traversal order."""
        if self.closed:
            return _tri(self.sides[k])
        if k == 0:
            return _tri(self.start_corner)
        return _tri(self.tri.rho(self.sides[k - 1]))


# ---------------------------------------------------------------------------
# word tightening


def tighten(tri: Triangulation, start_corner: int, sides, end_corner: int):
    """Reduce a word with inherited endpoint corners to taut form.

    Returns ``(start_corner, sides_tuple, end_corner)`` or ``None`` when the
    arc collapses to a trivial segment at a single corner.
    """
    sides = list(sides)

    def matched_corner(exit_side: int, corner_idx: int) -> int:
        t, i = _tri(exit_side), _idx(exit_side)
        s2 = tri.rho(exit_side)
        t2, i2 = _tri(s2), _idx(s2)
        if corner_idx == (i + 1) % 3:
            return side_code(t2, (i2 + 2) % 3)
        if corner_idx == (i + 2) % 3:
            return side_code(t2, (i2 + 1) % 3)
        raise MalformedArc("corner is not an endpoint of the crossed side")

    changed = True
    while changed:
        changed = False
        j = 0
        while j + 1 < len(sides):
            if sides[j + 1] == tri.rho(sides[j]):
                del sides[j + 1]
                del sides[j]
                changed = True
                j = max(j - 1, 0)
            else:
                j += 1
        if sides:
            t, k = _tri(start_corner), _idx(start_corner)
            if _tri(sides[0]) != t:
                raise MalformedArc("start corner drifted out of the first triangle")
            if _idx(sides[0]) != k:
                start_corner = matched_corner(sides[0], k)
                del sides[0]
                changed = True
        if sides:
            gate = tri.rho(sides[-1])
            t, i = _tri(gate), _idx(gate)
            if _tri(end_corner) != t:
                raise MalformedArc("end corner drifted out of the last triangle")
            k = _idx(end_corner)
            if k != i:
                # the reversed word exits through `gate`; slide the end across
                end_corner = matched_corner(gate, k)
                del sides[-1]
                changed = True
    if not sides:
        if _tri(start_corner) != _tri(end_corner):
            raise MalformedArc("degenerate word with corners in different triangles")
        if _idx(start_corner) == _idx(end_corner):
            return None
        return (start_corner, (), end_corner)
    return (start_corner, tuple(sides), end_corner)


def tighten_closed(tri: Triangulation, sides):
    """Cyclically reduce a closed word; ``None`` if it collapses."""
    sides = list(sides)
    changed = True
    while changed and sides:
        changed = False
        n = len(sides)
        j = 0
        while j < len(sides) and len(sides) >= 2:
            k = (j + 1) % len(sides)
            if sides[k] == tri.rho(sides[j]):
                for idx in sorted((j, k), reverse=True):
                    del sides[idx]
                changed = True
                j = 0
            else:
                j += 1
        if len(sides) == 1:
            return None
    return tuple(sides) if sides else None


def reverse_word(tri: Triangulation, sides):
    return tuple(tri.rho(s) for s in reversed(sides))


# ---------------------------------------------------------------------------
# divergence comparison


def _rank(gate: int, outcome) -> int:
    """Position rank along the gate from its ccw-start corner.

    Chords exiting through the side that shares the gate's start corner sit
    closest to it; terminal chords to the opposite corner sit in the middle.
    """
    gi = _idx(gate)
    if outcome is None:
        return 1
    i = _idx(outcome)
    if i == (gi + 2) % 3:
        return 0
    if i == (gi + 1) % 3:
        return 2
    raise GrandArcError("outcome side does not belong to the gate triangle")


class _Ray:
    __slots__ = ("strand", "pos", "step")

    def __init__(self, strand: Strand, pos: int, step: int):
        self.strand = strand
        self.pos = pos
        self.step = step

    def outcome(self):
        """Exit side for the current triangle, or None at termination."""
        s = self.strand
        n = len(s.sides)
        if s.closed:
            if self.step > 0:
                return s.sides[self.pos % n]
            return s.tri.rho(s.sides[self.pos % n])
        if self.step > 0:
            return s.sides[self.pos] if self.pos < n else None
        return s.tri.rho(s.sides[self.pos]) if self.pos >= 0 else None

    def advance(self):
        self.pos += self.step


def _cmp_rays(tri: Triangulation, gate: int, ra: _Ray, rb: _Ray, cap: int):
    """Compare two rays entering ``tri(gate)`` through ``gate``.

    Returns ``(sign, event)``: sign -1 when ray ``a`` stays closer to the
    gate's ccw-start corner, 0 on a full tie (both terminate together);
    ``event`` identifies the divergence location for corridor-uniform
    decisions.
    """
    for _ in range(cap):
        oa, ob = ra.outcome(), rb.outcome()
        rka, rkb = _rank(gate, oa), _rank(gate, ob)
        if rka != rkb:
            event = (gate, min(rka, rkb), max(rka, rkb))
            return (-1 if rka < rkb else 1), event
        if oa is None:
            return 0, None
        if oa != ob:
            # same rank but different sides cannot happen inside one triangle
            raise GrandArcError("divergence rank collision")
        gate = tri.rho(oa)
        ra.advance()
        rb.advance()
    raise GrandArcError("fellow-travel comparison failed to terminate")


class _Passage:
    __slots__ = ("strand_id", "j", "exit_side")

    def __init__(self, strand_id: int, j: int, exit_side: int):
        self.strand_id = strand_id
        self.j = j
        self.exit_side = exit_side


def _passage_rays(strands, p: _Passage, ref_side: int):
    """Rays of a passage: one into the reference triangle, one across.

    The forward ray of passage ``j`` first reports exit side ``j+1``; the
    backward ray first reports the reversed gate ``rho(sides[j-1])``.
    """
    s = strands[p.strand_id]
    if p.exit_side == ref_side:
        near = _Ray(s, p.j - 1, -1)    # backward into tri(ref)
        far = _Ray(s, p.j + 1, +1)     # forward across
    else:
        near = _Ray(s, p.j + 1, +1)
        far = _Ray(s, p.j - 1, -1)
    return near, far


def _pair_divergence(tri: Triangulation, strands, p: _Passage, q: _Passage,
                     ref_side: int, cap: int):
    """Near and far divergence data for two passages of one edge.

    Returns ``(sn, en, sf, ef)``: signs and event keys of the comparison of
    the rays into the reference triangle (near) and across (far).  Signs are
    in the boundary order of the respective gate.
    """
    pn, _ = _passage_rays(strands, p, ref_side)
    qn, _ = _passage_rays(strands, q, ref_side)
    sn, en = _cmp_rays(tri, ref_side, pn, qn, cap)
    _, pf = _passage_rays(strands, p, ref_side)
    _, qf = _passage_rays(strands, q, ref_side)
    sf, ef = _cmp_rays(tri, tri.rho(ref_side), pf, qf, cap)
    return sn, en, sf, ef


def forced_crossing_pairs(tri: Triangulation, strands) -> int:
    """Number of passage pairs forced to cross inside a shared corridor.

    Two passages through one edge cross between their divergence ends exactly
    when the near and far divergences order them the same way (the far sign
    is reversed relative to the global edge order).
    """
    cap = 4 * (sum(len(s) for s in strands) + 8)
    by_edge: dict[int, list[_Passage]] = {}
    for si, s in enumerate(strands):
        for j, side in enumerate(s.sides):
            by_edge.setdefault(tri.edge_of_side(side), []).append(_Passage(si, j, side))
    forced = 0
    for e, plist in by_edge.items():
        ref = tri.edge_sides(e)[0]
        for a in range(len(plist)):
            for b in range(a + 1, len(plist)):
                sn, _, sf, _ = _pair_divergence(tri, strands, plist[a], plist[b], ref, cap)
                if sn != 0 and sn == sf:
                    forced += 1
    return forced


def strand_is_simple(tri: Triangulation, strand: Strand) -> bool:
    """Embeddability of a single reduced strand."""
    if forced_crossing_pairs(tri, [strand]) > 0:
        return False
    return Arrangement(tri, [strand]).count(0, 0) == 0


class Arrangement:
    """Joint minimal position of several strands.

    Every strand must be individually simple; pairs of strands may cross.
    Exposes crossing counts, per-strand crossing orders, and exact positions
    for surgery.  Strand indices refer to the constructor argument order.
    """

    def __init__(self, tri: Triangulation, strands: list[Strand], verify_limit: int = 64):
        self.tri = tri
        self.strands = strands
        cap = 4 * (sum(len(s) for s in strands) + 8)

        by_edge: dict[int, list[_Passage]] = {}
        for si, s in enumerate(strands):
            for j, side in enumerate(s.sides):
                by_edge.setdefault(tri.edge_of_side(side), []).append(
                    _Passage(si, j, side)
                )

        def make_cmp(ref_side: int):
            def cmp(p: _Passage, q: _Passage) -> int:
                if p is q:
                    return 0
                pn, pf = _passage_rays(strands, p, ref_side)
                qn, qf = _passage_rays(strands, q, ref_side)
                sn, en = _cmp_rays(tri, ref_side, pn, qn, cap)
                pn, pf = _passage_rays(strands, p, ref_side)
                qn, qf = _passage_rays(strands, q, ref_side)
                sf, ef = _cmp_rays(tri, tri.rho(ref_side), pf, qf, cap)
                if sn == 0 and sf == 0:
                    # identical traces both ways: fall back to input order
                    return -1 if (p.strand_id, p.j) < (q.strand_id, q.j) else 1
                if sn == 0:
                    return -sf
                if sf == 0:
                    return sn
                return sn if en <= ef else -sf
            return cmp

        # order passages on each edge; slot parameter along each side
        self._edge_order: dict[int, list[_Passage]] = {}
        self._pos_of: dict[tuple[int, int], int] = {}
        self._edge_count: dict[int, int] = {}
        for e, plist in by_edge.items():
            ref = tri.edge_sides(e)[0]
            cmp = make_cmp(ref)
            plist.sort(key=cmp_to_key(cmp))
            if len(plist) <= verify_limit:
                for a in range(len(plist)):
                    for b in range(a + 1, len(plist)):
                        if cmp(plist[a], plist[b]) >= 0:
                            raise GrandArcError(
                                "inconsistent strand order on edge %d" % e
                            )
            self._edge_order[e] = plist
            self._edge_count[e] = len(plist)
            for m, p in enumerate(plist):
                self._pos_of[(p.strand_id, p.j)] = m

        # chords with exact boundary parameters
        self._chords = [self._build_chords(si) for si in range(len(strands))]
        self._crossings: dict[tuple[int, int], list] = {}
        self._self_ok: list[bool | None] = [None] * len(strands)

    # -- boundary geometry ---------------------------------------------------

    def _theta(self, side: int, strand_id: int, j: int) -> Fraction:
        """Cyclic boundary parameter of a passage point, seen from tri(side)."""
        e = self.tri.edge_of_side(side)
        k = self._edge_count[e]
        m = self._pos_of[(strand_id, j)]
        ref = self.tri.edge_sides(e)[0]
        if side == ref:
            frac = Fraction(m + 1, k + 1)
        else:
            frac = Fraction(k - m, k + 1)
        return Fraction(_idx(side)) + frac

    @staticmethod
    def _theta_corner(corner: int) -> Fraction:
        return Fraction((_idx(corner) + 2) % 3)

    def _build_chords(self, si: int):
        """Chords of strand ``si``: (triangle, theta_in, theta_out)."""
        s = self.strands[si]
        tri = self.tri
        out = []
        n = len(s.sides)
        if s.closed:
            for k in range(n):
                t = _tri(s.sides[k])
                a = self._theta(tri.rho(s.sides[(k - 1) % n]), si, (k - 1) % n)
                b = self._theta(s.sides[k], si, k)
                out.append((t, a, b))
            return out
        if n == 0:
            t = _tri(s.start_corner)
            out.append((t, self._theta_corner(s.start_corner), self._theta_corner(s.end_corner)))
            return out
        out.append((_tri(s.start_corner), self._theta_corner(s.start_corner), self._theta(s.sides[0], si, 0)))
        for k in range(1, n):
            gate = tri.rho(s.sides[k - 1])
            t = _tri(gate)
            out.append((t, self._theta(gate, si, k - 1), self._theta(s.sides[k], si, k)))
        gate = tri.rho(s.sides[-1])
        out.append((_tri(gate), self._theta(gate, si, n - 1), self._theta_corner(s.end_corner)))
        return out

    # -- crossings -----------------------------------------------------------

    @staticmethod
    def _interleave(a1, a2, b1, b2) -> bool:
        if a1 == b1 or a1 == b2 or a2 == b1 or a2 == b2:
            return False
        lo, hi = (a1, a2) if a1 < a2 else (a2, a1)
        inside = sum(1 for x in (b1, b2) if lo < x < hi)
        return inside == 1

    @staticmethod
    def _cross_param(a1, a2, b1, b2) -> Fraction:
        """Parameter along chord (a1,a2) of its crossing with (b1,b2).

        Chords are straight segments between points (t, t^2) on a parabola.
        """
        f0 = (a1 - b1) * (a1 - b2)
        f1 = (a2 - b1) * (a2 - b2)
        return f0 / (f0 - f1)

    def crossings(self, si: int, sj: int):
        """Crossings between two strands, cached.

        Each entry is ``(ci, ti, cj, tj)``: chord index and exact parameter
        along strands ``si`` and ``sj``.
        """
        key = (si, sj) if si <= sj else (sj, si)
        if key not in self._crossings:
            self._crossings[key] = self._compute_crossings(*key)
        if key == (si, sj):
            return self._crossings[key]
        swapped = [(cj, tj, ci, ti) for (ci, ti, cj, tj) in self._crossings[key]]
        swapped.sort(key=lambda r: (r[0], r[1]))
        return swapped

    def _compute_crossings(self, si: int, sj: int):
        by_tri: dict[int, list[int]] = {}
        for cj, (t, _, _) in enumerate(self._chords[sj]):
            by_tri.setdefault(t, []).append(cj)
        out = []
        for ci, (t, a1, a2) in enumerate(self._chords[si]):
            for cj in by_tri.get(t, ()):
                if si == sj and ci >= cj:
                    continue
                _, b1, b2 = self._chords[sj][cj]
                if self._interleave(a1, a2, b1, b2):
                    out.append(
                        (ci, self._cross_param(a1, a2, b1, b2),
                         cj, self._cross_param(b1, b2, a1, a2))
                    )
        out.sort(key=lambda r: (r[0], r[1]))
        return out

    def count(self, si: int, sj: int) -> int:
        return len(self.crossings(si, sj))

    def is_simple(self, si: int) -> bool:
        if self._self_ok[si] is None:
            self._self_ok[si] = self.count(si, si) == 0
        return self._self_ok[si]
