"""Framed link diagrams on the disk, annulus and torus.

A diagram is a 4-valent graph with crossing data.  Crossing ``c`` owns ports
``4c .. 4c+3`` in counterclockwise order; the under-strand uses ports 0 and 2
and the over-strand ports 1 and 3.  Arcs join two ports (or close up as free
loops) and carry homology counters: the signed number of times the arc
crosses the fixed cut curves, read while walking from ``end0`` to ``end1``.
On the torus the counters of a closed curve are its class ``(p, q)``; on the
annulus the single counter is the winding number around the core.

Smoothing ``A`` joins ports (0,1) and (2,3); smoothing ``B`` joins (0,3) and
(1,2).
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, gcd
from typing import Iterable, Sequence


class DiagramError(ValueError):
    pass


class DiagramParseError(DiagramError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class StateClassificationError(RuntimeError):
    """A traced state cannot be an embedded multicurve (tracing or input bug)."""


class SurfaceKind(enum.Enum):
    DISK = "disk"
    ANNULUS = "annulus"
    TORUS = "torus"

    @property
    def ncounters(self) -> int:
        return {"disk": 0, "annulus": 1, "torus": 2}[self.value]

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, order=False)
class Multicurve:
    """Basis element: ``m`` parallel copies of an essential primitive class.

    ``m == 0`` is the empty multicurve.  Torus classes are stored with
    ``p > 0`` or ``p == 0, q > 0``; annulus cores use ``(1, 0)``.
    """

    surface: SurfaceKind
    p: int = 0
    q: int = 0
    m: int = 0

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("multiplicity must be non-negative")
        if self.m == 0:
            if (self.p, self.q) != (0, 0):
                raise ValueError("empty multicurve carries no class")
            return
        if self.surface is SurfaceKind.DISK:
            raise ValueError("the disk has no essential curves")
        if self.surface is SurfaceKind.ANNULUS and (self.p, self.q) != (1, 0):
            raise ValueError("annulus multicurves are parallel cores")
        if gcd(abs(self.p), abs(self.q)) != 1:
            raise ValueError(f"class ({self.p},{self.q}) is not primitive")
        if not (self.p > 0 or (self.p == 0 and self.q > 0)):
            raise ValueError(f"class ({self.p},{self.q}) is not in canonical sign")

    @classmethod
    def empty(cls, surface: SurfaceKind) -> "Multicurve":
        return cls(surface)

    @classmethod
    def core(cls, n: int) -> "Multicurve":
        if n == 0:
            return cls(SurfaceKind.ANNULUS)
        return cls(SurfaceKind.ANNULUS, 1, 0, n)

    @classmethod
    def torus(cls, p: int, q: int, m: int = 1) -> "Multicurve":
        if m == 0:
            return cls(SurfaceKind.TORUS)
        p, q = canonical_class(p, q)
        return cls(SurfaceKind.TORUS, p, q, m)

    @property
    def is_empty(self) -> bool:
        return self.m == 0

    @property
    def primitive(self) -> "Multicurve":
        """The single curve underlying this family."""
        return Multicurve(self.surface, self.p, self.q, 1) if self.m else self

    def with_multiplicity(self, m: int) -> "Multicurve":
        if m == 0:
            return Multicurve(self.surface)
        if self.m == 0:
            raise ValueError("the empty multicurve has no class to repeat")
        return Multicurve(self.surface, self.p, self.q, m)

    def sort_key(self):
        return (self.m != 0, self.p, self.q, self.m)

    def __lt__(self, other: "Multicurve"):
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        if self.m == 0:
            return "empty"
        if self.surface is SurfaceKind.ANNULUS:
            return f"z^{self.m}"
        return f"({self.p},{self.q})^{self.m}"

    _TORUS_RE = re.compile(r"^\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)(?:\^(\d+))?$")
    _CORE_RE = re.compile(r"^z(?:\^(\d+))?$")

    @classmethod
    def parse(cls, text: str, surface: SurfaceKind | None = None) -> "Multicurve":
        """Parse ``"empty"``, ``"z^n"`` or ``"(p,q)^m"`` (exponent optional)."""
        s = text.strip().replace(" ", "")
        if s in ("empty", "∅", "1"):
            return cls(surface or SurfaceKind.TORUS)
        m = cls._CORE_RE.match(s)
        if m:
            if surface not in (None, SurfaceKind.ANNULUS):
                raise ValueError(f"{text!r} is an annulus multicurve")
            return cls.core(int(m.group(1) or 1))
        m = cls._TORUS_RE.match(s)
        if m:
            if surface not in (None, SurfaceKind.TORUS):
                raise ValueError(f"{text!r} is a torus multicurve")
            return cls.torus(int(m.group(1)), int(m.group(2)), int(m.group(3) or 1))
        raise ValueError(f"cannot parse multicurve {text!r}")


def canonical_class(p: int, q: int) -> tuple[int, int]:
    if p < 0 or (p == 0 and q < 0):
        return -p, -q
    return p, q


@dataclass(frozen=True)
class Diagram:
    """Immutable diagram.

    ``arcs[i] = (end0, end1, counters)`` with ports as integers; ``loops``
    holds the counters of crossing-free components.  ``labels`` optionally
    names the arcs (kept from parsing, used for orientation input).
    """

    surface: SurfaceKind
    ncrossings: int
    arcs: tuple[tuple[int, int, tuple[int, ...]], ...]
    loops: tuple[tuple[int, ...], ...] = ()
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        k = self.surface.ncounters
        seen = [0] * (4 * self.ncrossings)
        for e0, e1, cnt in self.arcs:
            if len(cnt) != k:
                raise DiagramError(f"arc counters {cnt} have wrong arity for {self.surface}")
            for port in (e0, e1):
                if not 0 <= port < 4 * self.ncrossings:
                    raise DiagramError(f"port {port} out of range")
                seen[port] += 1
        for cnt in self.loops:
            if len(cnt) != k:
                raise DiagramError(f"loop counters {cnt} have wrong arity for {self.surface}")
        bad = [p for p, n in enumerate(seen) if n != 1]
        if bad:
            raise DiagramError(f"ports {bad} are not attached to exactly one arc end")
        if self.labels is not None and len(self.labels) != len(self.arcs):
            raise DiagramError("label count does not match arc count")

    @property
    def is_empty(self) -> bool:
        return not self.arcs and not self.loops

    def port_map(self) -> list[tuple[int, int]]:
        """``port -> (arc index, end)``."""
        out = [(-1, -1)] * (4 * self.ncrossings)
        for i, (e0, e1, _) in enumerate(self.arcs):
            out[e0] = (i, 0)
            out[e1] = (i, 1)
        return out

    def with_loops(self, extra: Iterable[tuple[int, ...]]) -> "Diagram":
        return Diagram(self.surface, self.ncrossings, self.arcs, self.loops + tuple(extra), self.labels)


def _pad2(cnt: Sequence[int]) -> tuple[int, int]:
    c = tuple(cnt) + (0, 0)
    return c[0], c[1]


def _add(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def _neg(a: Sequence[int]) -> tuple[int, ...]:
    return tuple(-x for x in a)


def smoothing_partner(port: int, smoothing: str) -> int:
    base, local = port & ~3, port & 3
    if smoothing == "A":
        return base | (local ^ 1)
    if smoothing == "B":
        return base | (3 - local)
    raise ValueError(f"unknown smoothing {smoothing!r}")


@dataclass(frozen=True)
class StateCurves:
    surface: SurfaceKind
    components: tuple[tuple[int, ...], ...]


def trace_state(d: Diagram, choice: Sequence[str]) -> StateCurves:
    """Smooth every crossing as ``choice[c]`` and return the closed components."""
    if len(choice) != d.ncrossings:
        raise ValueError(f"need {d.ncrossings} smoothings, got {len(choice)}")
    pm = d.port_map()
    used = [False] * len(d.arcs)
    comps: list[tuple[int, ...]] = []
    zero = (0,) * d.surface.ncounters
    for start in range(len(d.arcs)):
        if used[start]:
            continue
        total = zero
        arc, forward = start, True
        while True:
            if used[arc]:
                raise DiagramError("dangling port while tracing")  # pragma: no cover
            used[arc] = True
            e0, e1, cnt = d.arcs[arc]
            total = _add(total, cnt if forward else _neg(cnt))
            arrive = e1 if forward else e0
            leave = smoothing_partner(arrive, choice[arrive >> 2])
            arc, end = pm[leave]
            forward = end == 0
            if arc == start:
                break
        comps.append(total)
    comps.extend(d.loops)
    return StateCurves(d.surface, tuple(comps))


def classify_state(s: StateCurves) -> tuple[int, Multicurve]:
    """Split a state into its number of trivial circles and its multicurve."""
    trivial = 0
    cls: tuple[int, int] | None = None
    count = 0
    for cnt in s.components:
        p, q = _pad2(cnt)
        if p == 0 and q == 0:
            trivial += 1
            continue
        if gcd(abs(p), abs(q)) != 1:
            raise StateClassificationError(f"embedded component with non-primitive class ({p},{q})")
        c = canonical_class(p, q)
        if cls is None:
            cls = c
        elif cls != c:
            raise StateClassificationError(f"disjoint components in distinct classes {cls} and {c}")
        count += 1
    if cls is None:
        return trivial, Multicurve.empty(s.surface)
    if s.surface is SurfaceKind.ANNULUS:
        return trivial, Multicurve.core(count)
    if s.surface is SurfaceKind.DISK:
        raise StateClassificationError("essential component on the disk")
    return trivial, Multicurve.torus(cls[0], cls[1], count)


def _swap_port(port: int) -> int:
    # new local j holds old local j+1, so the old over-strand becomes the under-strand
    base, local = port & ~3, port & 3
    return base | ((local - 1) % 4)


def switch_crossings(d: Diagram, crossings: Iterable[int]) -> Diagram:
    """Exchange over and under strands at the given crossings."""
    cs = set(crossings)

    def relabel(port):
        return _swap_port(port) if (port >> 2) in cs else port

    arcs = tuple((relabel(e0), relabel(e1), cnt) for e0, e1, cnt in d.arcs)
    return Diagram(d.surface, d.ncrossings, arcs, d.loops, d.labels)


def mirror(d: Diagram) -> Diagram:
    """Switch every crossing.

    Applying this twice turns every crossing by a half-turn (local port j
    becomes j+2), which relabels ports without changing the diagram; see
    ``half_turn``.
    """
    return switch_crossings(d, range(d.ncrossings))


def half_turn(d: Diagram, crossings: Iterable[int] | None = None) -> Diagram:
    """Relabel ports of the given crossings by j -> j+2 (the crossing's own symmetry)."""
    cs = set(range(d.ncrossings) if crossings is None else crossings)

    def relabel(port):
        return (port & ~3) | ((port + 2) & 3) if (port >> 2) in cs else port

    arcs = tuple((relabel(e0), relabel(e1), cnt) for e0, e1, cnt in d.arcs)
    return Diagram(d.surface, d.ncrossings, arcs, d.loops, d.labels)


def smooth_crossing(d: Diagram, c: int, smoothing: str) -> Diagram:
    """Replace crossing ``c`` by one of its smoothings (one fewer crossing)."""
    if not 0 <= c < d.ncrossings:
        raise ValueError(f"no crossing {c}")
    arcs = {i: [e0, e1, cnt] for i, (e0, e1, cnt) in enumerate(d.arcs)}
    pm = {}
    for i, (e0, e1, _) in arcs.items():
        pm[e0] = (i, 0)
        pm[e1] = (i, 1)
    loops = list(d.loops)
    next_id = len(d.arcs)
    b = 4 * c
    pairs = [(b, b + 1), (b + 2, b + 3)] if smoothing == "A" else [(b, b + 3), (b + 1, b + 2)]
    for P, Q in pairs:
        a, ea = pm.pop(P)
        bb, eb = pm.pop(Q)
        if a == bb:
            loops.append(tuple(arcs.pop(a)[2]))
            continue
        X, ca = arcs[a][1 - ea], arcs[a][2]
        Y, cb = arcs[bb][1 - eb], arcs[bb][2]
        into = ca if ea == 1 else _neg(ca)
        out = cb if eb == 0 else _neg(cb)
        del arcs[a], arcs[bb]
        arcs[next_id] = [X, Y, _add(into, out)]
        pm[X] = (next_id, 0)
        pm[Y] = (next_id, 1)
        next_id += 1

    def renum(port):
        return port - 4 if port >= b + 4 else port

    new_arcs = tuple((renum(e0), renum(e1), tuple(cnt)) for _, (e0, e1, cnt) in sorted(arcs.items()))
    return Diagram(d.surface, d.ncrossings - 1, new_arcs, tuple(loops))


class DiagramBuilder:
    """Assemble a diagram from oriented closed curves passing through crossings.

    Each crossing is created from the local directions of its over- and
    under-strands; port numbers then follow from the counterclockwise
    convention.  Curves list their passes in traversal order together with
    the counter increments between consecutive passes.
    """

    def __init__(self, surface: SurfaceKind):
        self.surface = surface
        self._over_out: list[int] = []  # local port where the over-strand leaves
        self._curves: list[tuple[list[tuple[int, str]], list[tuple[int, int]]]] = []
        self._loops: list[tuple[int, ...]] = []

    def crossing(self, over_dir: Sequence, under_dir: Sequence) -> int:
        ox, oy = over_dir
        ux, uy = under_dir
        cross = ox * uy - oy * ux  # cross(-under, over)
        if cross == 0:
            raise DiagramError("strands at a crossing must be transverse")
        self._over_out.append(1 if cross > 0 else 3)
        return len(self._over_out) - 1

    def curve(self, passes: Sequence[tuple[int, str]], deltas: Sequence[Sequence[int]]):
        """``deltas[i]`` is the counter change from pass ``i`` to pass ``i+1`` (cyclically)."""
        if len(passes) != len(deltas):
            raise DiagramError("one delta per pass is required")
        if not passes:
            raise DiagramError("use loop() for crossing-free curves")
        self._curves.append((list(passes), [_pad2(x) for x in deltas]))

    def loop(self, counters: Sequence[int]):
        self._loops.append(_pad2(counters)[: self.surface.ncounters])

    def _port(self, cid: int, role: str, direction: str) -> int:
        if role == "under":
            local = 0 if direction == "in" else 2
        else:
            out = self._over_out[cid]
            local = out if direction == "out" else 4 - out
        return 4 * cid + local

    def build(self) -> Diagram:
        k = self.surface.ncounters
        arcs = []
        for passes, deltas in self._curves:
            n = len(passes)
            for i in range(n):
                c0, r0 = passes[i]
                c1, r1 = passes[(i + 1) % n]
                arcs.append((self._port(c0, r0, "out"), self._port(c1, r1, "in"), deltas[i][:k]))
        return Diagram(self.surface, len(self._over_out), tuple(arcs), tuple(self._loops))


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


def _family_starts(p: int, q: int, m: int, shift: Fraction) -> list[tuple[Fraction, Fraction]]:
    # parallel (p,q) lines are indexed by q*x - p*y mod 1; pick m distinct values
    g, u, w = _ext_gcd(q, -p)  # q*u - p*w = 1
    assert g == 1
    starts = []
    for i in range(m):
        c = Fraction(2 * i + 1, 2 * m) * Fraction(1, 3) + shift
        starts.append((c * u + shift / 7, c * w + shift / 11))
    return starts


def _line_intersections(P, v, Q, w):
    """Parameters ``(t, u)`` in [0,1)^2 with P + t v = Q + u w mod Z^2."""
    (p, q), (r, s) = v, w
    det = -(p * s - q * r)
    if det == 0:
        return []
    dx, dy = Q[0] - P[0], Q[1] - P[1]
    # integer numerators over the common denominator D
    D = dx.denominator * dy.denominator // gcd(dx.denominator, dy.denominator)
    ax, ay = dx.numerator * (D // dx.denominator), dy.numerator * (D // dy.denominator)
    sign = 1 if det > 0 else -1
    bound = abs(det) * D
    bx = abs(p) + abs(r) + 2
    by = abs(q) + abs(s) + 2
    out = []
    for n1 in range(-bx, bx + 1):
        X = ax + n1 * D
        for n2 in range(-by, by + 1):
            Y = ay + n2 * D
            # [p -r; q -s] [t u]^T = [X Y]^T / D
            tn = sign * (-s * X + r * Y)
            if not 0 <= tn < bound:
                continue
            un = sign * (p * Y - q * X)
            if 0 <= un < bound:
                out.append((Fraction(tn, bound), Fraction(un, bound)))
    return out


def _torus_families(fams, shift):
    """Realize families of parallel lines; returns per-line (start, dir, [(t, key)])."""
    lines = []
    for fi, (p, q, m) in enumerate(fams):
        for start in _family_starts(p, q, m, shift + Fraction(fi, 5)):
            lines.append((fi, start, (p, q)))
    return lines


def _segment_counters(start, v, t0, t1) -> tuple[int, int]:
    x0, y0 = start
    return (
        floor(x0 + v[0] * t1) - floor(x0 + v[0] * t0),
        floor(y0 + v[1] * t1) - floor(y0 + v[1] * t0),
    )


def build_product_diagram(x: Multicurve, y: Multicurve) -> Diagram:
    """Diagram of ``x`` stacked over ``y``; every crossing has ``x`` on top."""
    if x.surface is not y.surface:
        raise DiagramError("multicurves live on different surfaces")
    surface = x.surface
    if surface is SurfaceKind.DISK:
        raise DiagramError("products on the disk are scalar; place diagrams side by side")
    b = DiagramBuilder(surface)
    if surface is SurfaceKind.ANNULUS:
        for _ in range(x.m + y.m):
            b.loop((1,))
        return b.build()

    for attempt in range(1, 50):
        shift = Fraction(1, 13 + 2 * attempt)
        over = _torus_families([(x.p, x.q, x.m)], shift) if x.m else []
        under = _torus_families([(y.p, y.q, y.m)], shift + Fraction(1, 17)) if y.m else []
        hits: dict[int, list] = {}
        ok = True
        for i, (_, P, v) in enumerate(over):
            for j, (_, Q, w) in enumerate(under):
                for t, u in _line_intersections(P, v, Q, w):
                    pt = (P[0] + v[0] * t, P[1] + v[1] * t)
                    if pt[0].denominator == 1 or pt[1].denominator == 1:
                        ok = False
                    hits.setdefault(("o", i), []).append((t, (i, j, t, u)))
                    hits.setdefault(("u", j), []).append((u, (i, j, t, u)))
        for _, P, _ in over + under:
            if P[0].denominator == 1 or P[1].denominator == 1:
                ok = False
        if ok:
            break
    else:  # pragma: no cover
        raise DiagramError("could not place curves generically")

    cid: dict = {}
    for key in sorted({k for lst in hits.values() for _, k in lst}):
        i, j = key[0], key[1]
        cid[key] = b.crossing(over[i][2], under[j][2])

    for tag, fam in (("o", over), ("u", under)):
        role = "over" if tag == "o" else "under"
        for idx, (_, start, v) in enumerate(fam):
            pts = sorted(hits.get((tag, idx), []))
            if not pts:
                b.loop(v)
                continue
            passes = [(cid[k], role) for _, k in pts]
            params = [t for t, _ in pts]
            deltas = []
            for n in range(len(params)):
                t0 = params[n]
                t1 = params[n + 1] if n + 1 < len(params) else params[0] + 1
                deltas.append(_segment_counters(start, v, t0, t1))
            b.curve(passes, deltas)
    return b.build()


def closed_braid(surface: SurfaceKind, nstrands: int, word: Sequence) -> Diagram:
    """Close a braid word around the annulus core, the torus (1,0) direction, or in the disk.

    Letters are ``(i, +1|-1)`` for the generator exchanging positions ``i`` and
    ``i+1``; on the torus ``i = nstrands - 1`` exchanges the last and first
    positions across the cut ``y = 0``.  Torus words may also contain
    ``("v", "over"|"under")``: a (0,1) curve crossing every strand.
    A positive generator is a positive crossing: with strands running in
    the +x direction, the strand moving down from ``i+1`` to ``i`` is on top.
    """
    n = nstrands
    b = DiagramBuilder(surface)
    # open path per position: [passes, deltas, head_delta, pending_delta]
    paths = [{"passes": [], "deltas": [], "head": (0, 0), "pending": (0, 0), "origin": j} for j in range(n)]
    at = list(range(n))  # at[pos] -> path index
    verticals = []

    def record(path, cid, role):
        if path["passes"]:
            path["deltas"].append(path["pending"])
        else:
            path["head"] = path["pending"]
        path["passes"].append((cid, role))
        path["pending"] = (0, 0)

    for letter in word:
        if letter[0] == "v":
            if surface is not SurfaceKind.TORUS:
                raise DiagramError("vertical curves need the torus")
            role_v = letter[1]
            passes = []
            for pos in range(n):
                if role_v == "over":
                    c = b.crossing((0, 1), (1, 0))
                    record(paths[at[pos]], c, "under")
                else:
                    c = b.crossing((1, 0), (0, 1))
                    record(paths[at[pos]], c, "over")
                passes.append((c, role_v))
            if passes:
                verticals.append(passes)
            else:
                b.loop((0, 1))
            continue
        i, sign = letter
        j = (i + 1) % n
        if i + 1 >= n and surface is not SurfaceKind.TORUS:
            raise DiagramError(f"generator {i} out of range")
        lo, hi = paths[at[i]], paths[at[j]]  # lo moves up to j, hi moves down to i
        wrap = i + 1 >= n
        if wrap:  # the crossing sits just above y = 0: lo passes the cut before it, hi after
            lo["pending"] = _add(lo["pending"], (0, 1))
        if sign > 0:
            c = b.crossing((1, -1), (1, 1))
            record(hi, c, "over")
            record(lo, c, "under")
        else:
            c = b.crossing((1, 1), (1, -1))
            record(lo, c, "over")
            record(hi, c, "under")
        if wrap:
            hi["pending"] = _add(hi["pending"], (0, -1))
        at[i], at[j] = at[j], at[i]

    closure = (1, 0) if surface is not SurfaceKind.DISK else (0, 0)
    for passes in verticals:
        deltas = [(0, 0)] * (len(passes) - 1) + [(0, 1)]
        b.curve(passes, deltas)
    # end position of each path
    end_pos = {at[pos]: pos for pos in range(n)}
    done = set()
    for startp in range(n):
        if startp in done:
            continue
        cycle = []
        cur = startp
        while cur not in done:
            done.add(cur)
            cycle.append(cur)
            cur = end_pos[cur]  # path ending at position p continues as the path starting at p
        all_passes, all_deltas = [], []
        carry = None
        total = (0, 0)
        for pi in cycle:
            path = paths[pi]
            total = _add(total, _add(path["head"], path["pending"]))
            for d in path["deltas"]:
                total = _add(total, d)
            total = _add(total, closure)
        if not any(paths[pi]["passes"] for pi in cycle):
            b.loop(total)
            continue
        # rotate so the cycle starts at a path with passes
        while not paths[cycle[0]]["passes"]:
            cycle = cycle[1:] + cycle[:1]
        carry = (0, 0)
        first_head = paths[cycle[0]]["head"]
        for idx, pi in enumerate(cycle):
            path = paths[pi]
            if path["passes"]:
                if all_passes:
                    all_deltas.append(_add(carry, path["head"]))
                all_passes.extend(path["passes"])
                all_deltas.extend(path["deltas"])
                carry = _add(path["pending"], closure)
            else:
                carry = _add(carry, _add(_add(path["head"], path["pending"]), closure))
        all_deltas.append(_add(carry, first_head))
        b.curve(all_passes, all_deltas)
    return b.build()


# -- text format ----------------------------------------------------------

_COUNTERS = r"\(\s*(-?\d+(?:\s*,\s*-?\d+)*)?\s*\)"
_RE_SURFACE = re.compile(r"^surface\s+(disk|annulus|torus)$")
_RE_BARE_SURFACE = re.compile(r"^(disk|annulus|torus)$")
_RE_CROSSING = re.compile(r"^crossing\s+(\S+)\s*:\s*ports\s+(.+)$")
_RE_PD = re.compile(r"X\[([^\]]*)\]")
_RE_ARC = re.compile(r"^arc\s+(\S+)\s*:\s*counters\s*" + _COUNTERS + r"$")
_RE_LOOP = re.compile(r"^loop\s*:\s*counters\s*" + _COUNTERS + r"$")
_RE_CURVE = re.compile(r"^curve\s*\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*(?:x\s*(\d+))?$")
_RE_CORE = re.compile(r"^core\s*(?:x\s*(\d+))?$")


def _parse_counters(text: str | None) -> tuple[int, ...]:
    if not text:
        return ()
    return tuple(int(t) for t in text.split(","))


def split_statements(text: str) -> list[tuple[int, str]]:
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0]
        for stmt in line.split(";"):
            stmt = stmt.strip()
            if stmt:
                out.append((lineno, stmt))
    return out


def parse_diagram(text: str, extra_handler=None) -> Diagram:
    """Parse the line-oriented diagram format.

    ``extra_handler(lineno, statement)`` may claim statements this parser does
    not know (it returns True when it consumed one).
    """
    surface = None
    crossings: list[tuple[int, list[str]]] = []
    counters: dict[str, tuple[tuple[int, ...], int]] = {}
    loops: list[tuple[tuple[int, ...], int]] = []
    for lineno, stmt in split_statements(text):
        m = _RE_SURFACE.match(stmt) or _RE_BARE_SURFACE.match(stmt)
        if m:
            if surface is not None:
                raise DiagramParseError("surface declared twice", lineno)
            surface = SurfaceKind(m.group(1))
            continue
        m = _RE_CROSSING.match(stmt)
        if m:
            labels = [t.strip() for t in m.group(2).split(",")]
            if len(labels) != 4 or not all(labels):
                raise DiagramParseError("a crossing needs exactly four arc labels", lineno)
            crossings.append((lineno, labels))
            continue
        if stmt.startswith("X["):
            found = _RE_PD.findall(stmt)
            if not found or _RE_PD.sub("", stmt).strip(" ,") != "":
                raise DiagramParseError(f"malformed PD statement {stmt!r}", lineno)
            for body in found:
                labels = [t.strip() for t in body.split(",")]
                if len(labels) != 4 or not all(labels):
                    raise DiagramParseError("X[...] needs exactly four arc labels", lineno)
                crossings.append((lineno, labels))
            continue
        m = _RE_ARC.match(stmt)
        if m:
            if m.group(1) in counters:
                raise DiagramParseError(f"arc {m.group(1)} declared twice", lineno)
            counters[m.group(1)] = (_parse_counters(m.group(2)), lineno)
            continue
        m = _RE_LOOP.match(stmt)
        if m:
            loops.append((_parse_counters(m.group(1)), lineno))
            continue
        m = _RE_CURVE.match(stmt)
        if m:
            p, q = int(m.group(1)), int(m.group(2))
            if gcd(abs(p), abs(q)) != 1:
                raise DiagramParseError(f"class ({p},{q}) is not primitive", lineno)
            for _ in range(int(m.group(3) or 1)):
                loops.append(((p, q), lineno))
            if surface is None:
                surface = SurfaceKind.TORUS
            continue
        m = _RE_CORE.match(stmt)
        if m:
            for _ in range(int(m.group(1) or 1)):
                loops.append(((1,), lineno))
            if surface is None:
                surface = SurfaceKind.ANNULUS
            continue
        if extra_handler is not None and extra_handler(lineno, stmt):
            continue
        raise DiagramParseError(f"unrecognised statement {stmt!r}", lineno)

    if surface is None:
        surface = SurfaceKind.DISK
    k = surface.ncounters
    occurrences: dict[str, list[int]] = {}
    for ci, (lineno, labels) in enumerate(crossings):
        for pos, lab in enumerate(labels):
            occurrences.setdefault(lab, []).append(4 * ci + pos)
    arcs = []
    names = []
    for lab, ports in occurrences.items():
        if len(ports) != 2:
            line = crossings[ports[0] >> 2][0]
            raise DiagramParseError(f"arc {lab} used {len(ports)} times (expected 2)", line)
        cnt, lineno = counters.get(lab, ((0,) * k, None))
        if len(cnt) != k:
            raise DiagramParseError(f"arc {lab} has {len(cnt)} counters, {surface} needs {k}", lineno)
        arcs.append((ports[0], ports[1], cnt))
        names.append(lab)
    for lab, (_, lineno) in counters.items():
        if lab not in occurrences:
            raise DiagramParseError(f"arc {lab} is not attached to any crossing", lineno)
    loop_cnts = []
    for cnt, lineno in loops:
        if len(cnt) != k:
            raise DiagramParseError(f"loop has {len(cnt)} counters, {surface} needs {k}", lineno)
        loop_cnts.append(cnt)
    return Diagram(surface, len(crossings), tuple(arcs), tuple(loop_cnts), tuple(names))


def format_diagram(d: Diagram) -> str:
    """Render ``d`` in the text format; ``parse_diagram`` inverts it."""
    lines = [f"surface {d.surface}"]
    names = [str(i + 1) for i in range(len(d.arcs))]
    slot = {}
    for i, (e0, e1, _) in enumerate(d.arcs):
        slot[e0] = names[i]
        slot[e1] = names[i]
    for c in range(d.ncrossings):
        lines.append(f"crossing c{c}: ports " + ",".join(slot[4 * c + j] for j in range(4)))
    if d.surface.ncounters:
        for i, (e0, e1, cnt) in enumerate(d.arcs):
            # the parser orients each arc from its lower port to its higher one
            if e0 > e1:
                cnt = _neg(cnt)
            if any(cnt):
                lines.append(f"arc {names[i]}: counters ({','.join(map(str, cnt))})")
    for cnt in d.loops:
        lines.append(f"loop: counters ({','.join(map(str, cnt))})")
    return "\n".join(lines) + "\n"


def diagram_from_multicurve(mc: Multicurve) -> Diagram:
    b = DiagramBuilder(mc.surface)
    for _ in range(mc.m):
        b.loop((mc.p, mc.q))
    return b.build()
