"""Derive stable invitation rates for two triangles sharing an edge.

Agents: x, w share the middle edge; u, v are the tips (u and v must stay
unconnected).  Each host realises its rates by nested events, so two guests
of the same host co-attend at the smaller of their two rates.

1. For each ordering of the eight ``min`` terms, solve an LP maximising the
   margin by which every rate sits strictly inside (0, gamma), with the two
   rates ``x->v = (1-gamma)/2`` and ``w->v = 1/2`` pinned.
2. Take the ordering that is feasible across the sampled gammas and solve the
   resulting linear system symbolically, choosing the free parameter ``q``
   midway through its feasible interval.
3. Validate the closed form with the exact deviation checker.

Run: python scripts/derive_h32.py
"""

import itertools
from fractions import Fraction

import numpy as np
import sympy as sy
from scipy.optimize import linprog

from netgame import Parameters, check_stability_deviation, connection_graph
from netgame.constructions import build_h32, h32_rates

GAMMA = sy.Symbol("gamma", positive=True)
NAMES = ["q", "qp", "a1", "a2", "b1", "b2", "s", "s2", "t", "t2"]
# x->w=q, x->u=a1, x->v=a2, w->x=qp, w->u=b1, w->v=b2, u->x=s, u->w=s2, v->x=t, v->w=t2
MINS = [("s", "s2"), ("t", "t2"), ("qp", "b1"), ("qp", "b2"), ("q", "a1"), ("q", "a2"), ("a1", "a2"), ("b1", "b2")]


def edge_terms(pick):
    return [
        ["q", "qp", pick[("s", "s2")], pick[("t", "t2")]],  # x-w
        ["a1", "s", pick[("qp", "b1")]],  # x-u
        ["a2", "t", pick[("qp", "b2")]],  # x-v
        ["b1", "s2", pick[("q", "a1")]],  # w-u
        ["b2", "t2", pick[("q", "a2")]],  # w-v
    ]


def solve_case(gamma, sig):
    nv = len(NAMES) + 1
    ix = {n: i for i, n in enumerate(NAMES)}
    a_ub, b_ub, a_eq, b_eq = [], [], [], []
    pick = {}
    for (x, y), s in zip(MINS, sig):
        lo, hi = (x, y) if s == 0 else (y, x)
        pick[(x, y)] = lo
        r = np.zeros(nv)
        r[ix[lo]], r[ix[hi]] = 1, -1
        a_ub.append(r)
        b_ub.append(0)
    for terms in edge_terms(pick):
        r = np.zeros(nv)
        for t in terms:
            r[ix[t]] += 1
        a_eq.append(r)
        b_eq.append(1)
    r = np.zeros(nv)
    r[ix[pick[("a1", "a2")]]] += 1
    r[ix[pick[("b1", "b2")]]] += 1
    a_ub.append(r)
    b_ub.append(1 - gamma)  # tips stay below the connection threshold
    for n in NAMES:
        lo = np.zeros(nv)
        lo[ix[n]], lo[-1] = -1, 1
        hi = np.zeros(nv)
        hi[ix[n]], hi[-1] = 1, 1
        a_ub += [lo, hi]
        b_ub += [0, gamma]
    for n, val in (("a2", (1 - gamma) / 2), ("b2", 0.5)):
        r = np.zeros(nv)
        r[ix[n]] = 1
        a_eq.append(r)
        b_eq.append(val)
    c = np.zeros(nv)
    c[-1] = -1
    res = linprog(c, A_ub=np.array(a_ub), b_ub=b_ub, A_eq=np.array(a_eq), b_eq=b_eq, bounds=[(0, 1)] * nv)
    return res.x[-1] if res.status == 0 and res.x[-1] > 1e-9 else None


def feasible_orderings(gammas):
    out = []
    for sig in itertools.product([0, 1], repeat=len(MINS)):
        if all(solve_case(g, sig) is not None for g in gammas):
            out.append(sig)
    return out


def closed_form(sig):
    g = GAMMA
    sym = {n: sy.Symbol(n) for n in NAMES}
    pick = {}
    for (x, y), s in zip(MINS, sig):
        pick[(x, y)] = x if s == 0 else y
    eqs = [sum(sym[t] for t in terms) - 1 for terms in edge_terms(pick)]
    eqs += [sym["a2"] - (1 - g) / 2, sym["b2"] - sy.Rational(1, 2), sym["b1"] - (1 - g) / 2, sym["qp"] - sym["q"]]
    sol = sy.solve(eqs, [sym[n] for n in NAMES if n != "q"], dict=True)[0]
    sol[sym["q"]] = sym["q"]
    # q must keep every rate in (0, gamma); for gamma in (1/2, 1) that is (1-gamma)/2 < q < 1/4
    mid = ((1 - g) / 2 + sy.Rational(1, 4)) / 2
    return {n: sy.simplify(sol[sym[n]].subs(sym["q"], mid)) for n in NAMES}


def main():
    gammas = [0.51, 0.6, 0.75, 0.9]
    sigs = feasible_orderings(gammas)
    print(f"orderings feasible at all of {gammas}: {len(sigs)}")
    for sig in sigs:
        print("  ", dict(zip(MINS, sig)))
    form = closed_form(sigs[0])
    print("closed form (first ordering):")
    for n in NAMES:
        print(f"  {n:3s} = {form[n]}")
    for gamma in (Fraction(51, 100), Fraction(3, 5), Fraction(9, 10)):
        cfg = build_h32(Parameters.from_gamma(gamma, 4))
        rep = check_stability_deviation(cfg)
        print(f"gamma={gamma}: stable={rep.stable} edges={sorted(connection_graph(cfg).edges)}")
        gs = sy.Rational(gamma.numerator, gamma.denominator)
        rates = h32_rates(gamma)
        sym_vals = {n: form[n].subs(GAMMA, gs) for n in NAMES}
        shipped = {
            "q": rates[0][1], "a1": rates[0][2], "a2": rates[0][3],
            "qp": rates[1][0], "b1": rates[1][2], "b2": rates[1][3],
            "s": rates[2][0], "s2": rates[2][1], "t": rates[3][0], "t2": rates[3][1],
        }
        assert all(sy.Rational(shipped[n].numerator, shipped[n].denominator) == sym_vals[n] for n in NAMES)
    rechecked = build_h32(Parameters.from_gamma(Fraction(3, 5), 4)).with_params(Parameters.from_gamma(Fraction(9, 20), 4))
    print("fixture built at 3/5, re-checked at 9/20: stable =", check_stability_deviation(rechecked).stable)


if __name__ == "__main__":
    main()
