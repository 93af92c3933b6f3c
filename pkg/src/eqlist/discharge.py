"""Charges and discharging rules R1-R5, in half-units.

Initial charge (x2): every edge 2*eps, every vertex -2*nu, plus eps for a
G-leaf, so the total equals ``2 * rho(V)``.  Relative to a vertex set Y:

R1  charges inside G[Y] stay put;
R2  an edge between Y and V - Y gives all of 2*eps to its end outside Y;
R3  an edge of G - Y gives eps to each end;
R4  a vertex v of degree >= 3 outside Y gives delta/2 (1 half-unit) to each
    leg vertex and delta (2 half-units) to each body vertex of B(v) outside Y;
R5  a degree-2 vertex outside Y with a neighbour in Y gives 2 half-units to
    its neighbour outside Y, if that neighbour exists.

The audit compares final charges with the per-vertex bounds of the charge
lemma, restricted to vertices whose local configuration is one the lemma's
hypotheses allow ("in scope").
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .graph import Graph, mask_of, members, popcount
from .potential import params, potential_of_subset
from .structure import find_threads, fork_roots, maximal_bug


@dataclass
class ChargeLedger:
    k: int
    Y: frozenset
    phase: str
    vertex: list[int]
    edge: dict[tuple[int, int], int]
    log: list = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(self.vertex) + sum(self.edge.values())

    def to_json(self) -> dict:
        return {"k": self.k, "Y": sorted(self.Y), "phase": self.phase,
                "vertex_halves": list(self.vertex),
                "edge_halves": [[u, v, c] for (u, v), c in sorted(self.edge.items())],
                "total_halves": self.total}


def initial_charges(G: Graph, k: int) -> ChargeLedger:
    p = params(k)
    vertex = [-2 * p.nu + (p.epsilon if G.degree(v) == 1 else 0) for v in range(G.n)]
    edge = {e: 2 * p.epsilon for e in G.edges()}
    return ChargeLedger(k, frozenset(), "initial", vertex, edge)


def apply_rules(G: Graph, k: int, Y: Iterable[int] = ()) -> ChargeLedger:
    p = params(k)
    y = mask_of(Y)
    led = initial_charges(G, k)
    led.Y = frozenset(members(y))
    vc, ec = led.vertex, led.edge
    delta2 = 2 * p.delta  # delta in half-units

    for (u, v), c in list(ec.items()):
        iu, iv = bool(y >> u & 1), bool(y >> v & 1)
        if iu and iv:
            continue                                   # R1
        if iu != iv:                                   # R2
            out = v if iu else u
            vc[out] += c
            ec[(u, v)] = 0
            led.log.append(("R2", (u, v), out, c))
        else:                                          # R3
            vc[u] += c // 2
            vc[v] += c // 2
            ec[(u, v)] = 0
            led.log.append(("R3", (u, v), None, c))
    for v in range(G.n):                               # R4
        if y >> v & 1 or G.degree(v) < 3:
            continue
        B = maximal_bug(G, v)
        for w in B.legs:
            if not y >> w & 1:
                vc[v] -= delta2 // 2
                vc[w] += delta2 // 2
                led.log.append(("R4", v, w, delta2 // 2))
        for w in B.body:
            if not y >> w & 1:
                vc[v] -= delta2
                vc[w] += delta2
                led.log.append(("R4", v, w, delta2))
    for v in range(G.n):                               # R5
        if y >> v & 1 or G.degree(v) != 2 or not G.adj[v] & y:
            continue
        outside = [w for w in G.neighbors(v) if not y >> w & 1]
        # v has a neighbour in Y, so at most one neighbour lies outside Y
        if outside:
            vc[v] -= delta2
            vc[outside[0]] += delta2
            led.log.append(("R5", v, outside[0], delta2))
    led.phase = "final"
    return led


# ---------------------------------------------------------------------------
# audit


def table_row(k: int, d: int, pi: int):
    """(|B| bound, lower bound on the final charge in half-units) for d(v) = d >= 3."""
    if k == 3:
        if d == 3:
            return 4 - pi, 1
        return 2 * d + 1 - pi, 2 * (2 * d - 7)
    if k == 4:
        if d == 3:
            return 3 - pi, 0
        if d == 4:
            return 5 - pi, 2
        return 2 * d + 1 - pi, 2 * (d - 5)
    raise ValueError(k)


@dataclass(frozen=True)
class VertexAudit:
    v: int
    degree: int
    charge_halves: int
    status: str                 # pass | fail | out_of_scope
    bound_halves: int | None = None
    table_row: dict | None = None
    note: str = ""

    def to_json(self) -> dict:
        return {"v": self.v, "degree": self.degree, "charge_halves": self.charge_halves,
                "status": self.status, "bound_halves": self.bound_halves,
                "table_row": self.table_row, "note": self.note}


@dataclass(frozen=True)
class AuditReport:
    k: int
    Y: frozenset
    identity_lhs: int           # 2 rho(V)
    identity_rhs: int           # 2 rho(Y) + sum of final charges outside Y
    initial_total: int
    final_total: int
    claim_applies: bool
    violations: tuple
    per_vertex: tuple

    @property
    def conserved(self) -> bool:
        return self.initial_total == self.final_total

    @property
    def identity_holds(self) -> bool:
        return self.identity_lhs == self.identity_rhs

    @property
    def failures(self) -> list[VertexAudit]:
        return [a for a in self.per_vertex if a.status == "fail"]

    def to_json(self) -> dict:
        return {"k": self.k, "Y": sorted(self.Y), "identity_lhs": self.identity_lhs,
                "identity_rhs": self.identity_rhs, "identity_holds": self.identity_holds,
                "initial_total": self.initial_total, "final_total": self.final_total,
                "conserved": self.conserved, "claim_applies": self.claim_applies,
                "violations": list(self.violations),
                "per_vertex": [a.to_json() for a in self.per_vertex]}


def _v2_scope(G: Graph, v: int, y: int, threads_of: dict) -> tuple[bool, str]:
    if G.adj[v] & y:
        return True, "degree 2 next to Y"
    th = threads_of.get(v)
    if th is None:
        return False, "not on a thread (component of maximum degree <= 2)"
    if th.kind == "plain" and th.t in (1, 2):
        return True, f"plain {th.t}-thread"
    if th.kind == "closed" and th.t == 2:
        return True, "closed 2-thread"
    return False, f"{th.kind} {th.t}-thread excluded by the thread lemma"


def audit(G: Graph, k: int, Y: Iterable[int] = ()) -> AuditReport:
    p = params(k)
    y = mask_of(Y)
    init = initial_charges(G, k)
    led = apply_rules(G, k, y)
    lhs = 2 * potential_of_subset(G, k, G.full_mask)
    rhs = 2 * potential_of_subset(G, k, y) + sum(led.vertex[v] for v in range(G.n) if not y >> v & 1)

    forks = fork_roots(G, k)
    violations = [{"kind": "fork_root_outside_Y", "vertex": r} for r in sorted(forks)
                  if not y >> r & 1]
    claim = not violations

    threads_of: dict[int, object] = {}
    for th in find_threads(G):
        for w in th.interior:
            threads_of.setdefault(w, th)

    rows = []
    for v in range(G.n):
        if y >> v & 1:
            continue
        d = G.degree(v)
        ch = led.vertex[v]
        bound, row, note = None, None, ""
        if d == 0:
            note = "isolated vertex"
        elif d == 1:
            nb = G.neighbors(v)[0]
            if G.degree(nb) >= 3:
                bound, note = 0, "leaf on a loose 1-thread"
            else:
                note = "leaf on a loose thread with t >= 2"
        elif d == 2:
            ok, note = _v2_scope(G, v, y, threads_of)
            if ok:
                bound = p.epsilon - 4 if G.adj[v] & y else 0
        else:
            B = maximal_bug(G, v)
            lim, lb = table_row(k, d, B.pi)
            row = {"k": k, "d": d, "B_max": lim, "bound_halves": lb, "B": len(B.vertices),
                   "pi": B.pi}
            if v in forks:
                note = "fork root"
            elif len(B.vertices) > lim:
                note = f"|B| = {len(B.vertices)} exceeds the table bound {lim}"
            else:
                bound = lb
                note = "table"
        if bound is None or not claim:
            status = "out_of_scope"
            if not claim and bound is not None:
                note = "fork root outside Y: no claim"
        else:
            status = "pass" if ch >= bound else "fail"
        rows.append(VertexAudit(v, d, ch, status, bound if status != "out_of_scope" else None,
                                row, note))
    return AuditReport(k, frozenset(members(y)), lhs, rhs, init.total, led.total, claim,
                       tuple(violations), tuple(rows))
