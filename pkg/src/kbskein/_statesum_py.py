"""Pure-Python state enumeration; same contract as the compiled kernel."""
from math import gcd


def enumerate_states(port_arc, port_end, arc_e0, arc_e1, arc_cx, arc_cy, start, count, out):
    port_arc = [int(x) for x in port_arc]
    port_end = [int(x) for x in port_end]
    e0 = [int(x) for x in arc_e0]
    e1 = [int(x) for x in arc_e1]
    cx = [int(x) for x in arc_cx]
    cy = [int(x) for x in arc_cy]
    narcs = len(e0)
    ncross = len(port_arc) // 4
    for i in range(count):
        st = start + i
        nA = ncross - bin(st).count("1")
        used = [False] * narcs
        triv = ness = 0
        cls = None
        for a in range(narcs):
            if used[a]:
                continue
            tx = ty = 0
            cur, fwd = a, True
            while True:
                used[cur] = True
                if fwd:
                    tx += cx[cur]
                    ty += cy[cur]
                    arrive = e1[cur]
                else:
                    tx -= cx[cur]
                    ty -= cy[cur]
                    arrive = e0[cur]
                local = arrive & 3
                if (st >> (arrive >> 2)) & 1:
                    leave = (arrive & ~3) | (3 - local)
                else:
                    leave = (arrive & ~3) | (local ^ 1)
                cur = port_arc[leave]
                fwd = port_end[leave] == 0
                if cur == a:
                    break
            if tx == 0 and ty == 0:
                triv += 1
                continue
            if gcd(tx, ty) != 1:
                return 1
            if tx < 0 or (tx == 0 and ty < 0):
                tx, ty = -tx, -ty
            if cls is None:
                cls = (tx, ty)
            elif cls != (tx, ty):
                return 2
            ness += 1
        p, q = cls if cls else (0, 0)
        out[i] = (nA << 56) | (triv << 44) | (ness << 32) | ((p + 32768) << 16) | (q + 32768)
    return 0
