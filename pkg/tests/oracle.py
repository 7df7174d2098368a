"""Naive reference enumerator, written against the raw diagram data only.

Loops of a state are found with networkx on a multigraph whose vertices are
crossing ports; arithmetic is done in sympy.  Nothing from the package's
tracing, classification or ring code is used.
"""
from __future__ import annotations

import itertools
from math import gcd

import networkx as nx
import sympy

Asym = sympy.Symbol("A")
DELTA = -Asym**2 - Asym**-2


def _state_graph(d, choice):
    g = nx.MultiGraph()
    for c in range(d.ncrossings):
        g.add_nodes_from(range(4 * c, 4 * c + 4))
        if choice[c] == "A":
            pairs = ((0, 1), (2, 3))
        else:
            pairs = ((0, 3), (1, 2))
        for a, b in pairs:
            g.add_edge(4 * c + a, 4 * c + b, kind="smooth")
    for i, (e0, e1, cnt) in enumerate(d.arcs):
        g.add_edge(e0, e1, kind="arc", tail=e0, cnt=tuple(cnt))
    return g


def _walk_total(g, comp, k):
    """Sum arc counters around the closed walk through ``comp``."""
    arc_nb, smooth_nb = {}, {}
    for u, v, data in g.subgraph(comp).edges(data=True):
        if data["kind"] == "arc":
            arc_nb[u] = (v, 1 if data["tail"] == u else -1, data["cnt"])
            arc_nb[v] = (u, 1 if data["tail"] == v else -1, data["cnt"])
        else:
            smooth_nb[u], smooth_nb[v] = v, u
    start = min(comp)
    total = [0] * k
    node = start
    while True:
        nxt, sign, cnt = arc_nb[node]
        for i in range(k):
            total[i] += sign * cnt[i]
        node = smooth_nb[nxt]
        if node == start:
            return tuple(total)


def _classify(surface, totals):
    """Return (trivial count, key of essential part)."""
    triv, ess = 0, []
    for t in totals:
        if all(x == 0 for x in t):
            triv += 1
            continue
        if surface == "disk":
            raise AssertionError("essential loop in the disk")
        if surface == "annulus":
            assert abs(t[0]) == 1, t
            ess.append((1, 0))
            continue
        p, q = t
        assert gcd(abs(p), abs(q)) == 1, t
        if p < 0 or (p == 0 and q < 0):
            p, q = -p, -q
        ess.append((p, q))
    assert len(set(ess)) <= 1, ess
    key = "empty" if not ess else (ess[0], len(ess))
    return triv, key


def oracle_bracket(d) -> dict:
    """Map from ``"empty"`` or ``((p, q), m)`` to a sympy Laurent polynomial in A."""
    surface = d.surface.value
    k = {"disk": 0, "annulus": 1, "torus": 2}[surface]
    loop_totals = [tuple(l) + (0,) * (k - len(l)) for l in d.loops]
    counts: dict = {}
    for choice in itertools.product("AB", repeat=d.ncrossings):
        g = _state_graph(d, choice)
        totals = list(loop_totals)
        for comp in nx.connected_components(g):
            totals.append(_walk_total(g, comp, k) if k else ())
        triv, key = _classify(surface, totals)
        na = choice.count("A")
        slot = (key, 2 * na - d.ncrossings, triv)
        counts[slot] = counts.get(slot, 0) + 1
    out: dict = {}
    for (key, e, triv), n in counts.items():
        out[key] = out.get(key, 0) + n * Asym**e * DELTA**triv
    out = {key: sympy.expand(v) for key, v in out.items()}
    return {key: v for key, v in out.items() if v != 0}


def package_to_oracle(x) -> dict:
    """Convert a Laurent ``SkeinElement`` into the oracle's dictionary shape."""
    out = {}
    for mc, c in x.items():
        key = "empty" if mc.is_empty else ((mc.p, mc.q), mc.m)
        out[key] = sympy.expand(sum(v * Asym**e for e, v in c.items()))
    return out


def pd_writhe(pd: list[tuple[int, int, int, int]]) -> int:
    """Writhe of a knot PD code whose labels 1..n run along the orientation.

    Positions 0 and 2 of each tuple hold the under-strand; the under-strand
    runs 0 -> 2 when the label at 2 succeeds the one at 0.
    """
    n = max(max(x) for x in pd)
    if n < 3:
        raise ValueError("label order is ambiguous with fewer than three arcs")

    def succ(x):
        return x % n + 1

    w = 0
    for i, j, k, l in pd:
        under_fwd = k == succ(i)
        over_from_l = j == succ(l)
        w += 1 if under_fwd == over_from_l else -1
    return w


def oracle_jones_series(d, w: int, order: int):
    """Writhe-normalised bracket on the empty multicurve, expanded in h by sympy."""
    h = sympy.Symbol("h")
    br = oracle_bracket(d).get("empty", 0)
    t = sympy.exp(h / 4)
    expr = t ** (-3 * w) * sympy.sympify(br).subs(Asym, -t)
    ser = sympy.series(expr, h, 0, order + 1).removeO()
    return [sympy.Rational(ser.coeff(h, i)) for i in range(order + 1)]
