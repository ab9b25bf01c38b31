"""Independent reference computations used by the tests.

Nothing here imports the solver or the rollup code; each oracle is a
brute-force or closed-form computation of the same quantity.
"""

from __future__ import annotations

import itertools
import math
import re

import numpy as np

ATOMIC_MASS = {"C": 12.0, "H": 1.0, "O": 16.0, "N": 14.0}


# ---------------------------------------------------------------------------
# combustion stoichiometry
# ---------------------------------------------------------------------------

def parse_formula(formula: str) -> dict[str, int]:
    """Atom counts of a condensed formula such as ``CH3OH`` or ``C6H6``."""
    counts: dict[str, int] = {}
    for elem, num in re.findall(r"([A-Z][a-z]?)(\d*)", formula):
        counts[elem] = counts.get(elem, 0) + (int(num) if num else 1)
    return counts


def combustion_co2(formula: str) -> float:
    """Tonnes CO2 per tonne of substance from C + O2 -> CO2, one CO2 per C atom."""
    atoms = parse_formula(formula)
    molar = sum(ATOMIC_MASS[e] * n for e, n in atoms.items())
    co2 = ATOMIC_MASS["C"] + 2 * ATOMIC_MASS["O"]
    return atoms.get("C", 0) * co2 / molar


def carbon_fraction(formula: str) -> float:
    atoms = parse_formula(formula)
    molar = sum(ATOMIC_MASS[e] * n for e, n in atoms.items())
    return atoms.get("C", 0) * ATOMIC_MASS["C"] / molar


# ---------------------------------------------------------------------------
# LP vertex enumeration
# ---------------------------------------------------------------------------

def vertex_optimum(A, b, senses, lb, ub, c, tol=1e-9):
    """Minimum of ``c x`` over a bounded polyhedron by enumerating vertices.

    Every row and every finite bound becomes a half-space or hyperplane; a
    vertex is the solution of ``n`` linearly independent active constraints
    that satisfies all the others. Returns ``None`` when no vertex exists
    (the polyhedron is empty, given finite bounds on every column).
    """
    A = np.asarray(A, dtype=float)
    m, n = A.shape
    cons = []
    for i in range(m):
        if senses[i] == "<=":
            cons.append((A[i], b[i], False))
        elif senses[i] == ">=":
            cons.append((-A[i], -b[i], False))
        else:
            cons.append((A[i], b[i], True))
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        if math.isfinite(lb[j]):
            cons.append((-e, -lb[j], False))
        if math.isfinite(ub[j]):
            cons.append((e, ub[j], False))
    eqs = [k for k, con in enumerate(cons) if con[2]]
    ineqs = [k for k, con in enumerate(cons) if not con[2]]
    best = None
    for extra in itertools.combinations(ineqs, max(n - len(eqs), 0)):
        idx = eqs + list(extra)
        if len(idx) < n:
            continue
        M = np.array([cons[k][0] for k in idx])
        r = np.array([cons[k][1] for k in idx])
        # more equalities than columns: pick a square independent subset
        if M.shape[0] > n:
            rank = np.linalg.matrix_rank(M)
            if rank < n:
                continue
            x, *_ = np.linalg.lstsq(M, r, rcond=None)
        else:
            if abs(np.linalg.det(M)) < 1e-9:
                continue
            x = np.linalg.solve(M, r)
        ok = all(abs(a @ x - rhs) <= 1e-7 * (1 + abs(rhs)) if eq else a @ x <= rhs + 1e-7 * (1 + abs(rhs))
                 for a, rhs, eq in cons)
        if ok:
            v = float(np.dot(c, x))
            if best is None or v < best:
                best = v
    return best


# ---------------------------------------------------------------------------
# supply-chain tree expansion
# ---------------------------------------------------------------------------

def tree_expand(product, mixes, routes, quantity, leaves, depth=0):
    """Intensity by recursive expansion of every route down to the leaves.

    ``routes`` maps route id to ``(product, inputs, direct)`` plain tuples.
    Only valid for acyclic supply chains.
    """
    if depth > 50:
        raise RecursionError("supply chain is cyclic")
    if product in leaves:
        return leaves[product].get(quantity, 0.0)
    total = 0.0
    for rid, share in mixes[product].items():
        prod, inputs, direct = routes[rid]
        v = direct.get(quantity, 0.0)
        for q, amt in inputs.items():
            v += amt * tree_expand(q, mixes, routes, quantity, leaves, depth + 1)
        total += share * v
    return total


# ---------------------------------------------------------------------------
# toy pathway schedules
# ---------------------------------------------------------------------------

def toy_schedule_cost(schedule, years, demand, fossil_cost, elec_cost, capex, emission, caps,
                      penalty, af, base_cost=0.0):
    """Total cost of a toy pathway where product i switches fully in ``schedule[i]``.

    ``schedule[i]`` is a year or ``None`` (never). A switched product runs
    electrified at full demand from that year on; the electrified plant is
    paid as an annuity in every later year; shortfalls against the cap are
    bought as residual emissions.
    """
    hours = 8760.0
    total = 0.0
    for y in years:
        emis = 0.0
        for i, sw in enumerate(schedule):
            if sw is not None and y >= sw:
                total += demand * hours * elec_cost[i] + af * capex[i] * demand
            else:
                total += demand * hours * fossil_cost[i]
                emis += demand * hours * emission[i]
        total += penalty * max(emis - caps[y], 0.0) + base_cost
    return total


def enumerate_toy_schedules(n_products, years):
    choices = list(years) + [None]
    return list(itertools.product(choices, repeat=n_products))
