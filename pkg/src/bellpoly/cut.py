"""Compatibility graphs, cut vectors, and exclusivity inequalities.

Dichotomic measurements with a compatibility graph G have a noncontextual
polytope that is affinely isomorphic to the cut polytope of the suspension
graph of G (one apex adjacent to everything): single correlators map to apex
edges via <M_i> = 1 - 2 x_{iO} and pair correlators to ordinary edges via
<M_i M_j> = 1 - 2 x_{ij}. This module keeps both pictures exact: cuts and
their incidence vectors over integers, behaviours and inequalities over
rationals, plus the exclusivity (sum over mutually exclusive events <= 1)
inequalities for the pairwise-measurement scenario and the pentagonal
inequality that separates them from the noncontextual set.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Tuple

import networkx as nx

from .errors import BudgetExceededError, VerificationError
from .exactrank import affine_rank

CUT_ENUM_MAX_VERTICES = 20


@dataclass(frozen=True)
class Graph:
    """Undirected graph on vertices 0..n-1 with no self-loops."""
    n: int
    edges: frozenset

    def __init__(self, n: int, edges):
        object.__setattr__(self, "n", int(n))
        norm = set()
        for e in edges:
            i, j = e
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) references a missing vertex")
            norm.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", frozenset(norm))

    @staticmethod
    def complete(n: int) -> "Graph":
        return Graph(n, itertools.combinations(range(n), 2))

    @property
    def is_complete(self) -> bool:
        return len(self.edges) == self.n * (self.n - 1) // 2

    @property
    def sorted_edges(self) -> Tuple[Tuple[int, int], ...]:
        return tuple(sorted(self.edges))


def suspension(g: Graph) -> Graph:
    """Add one apex vertex adjacent to every existing vertex; the apex gets
    the last index n."""
    return Graph(g.n + 1, set(g.edges) | {(v, g.n) for v in range(g.n)})


# ---------------------------------------------------------------------------
# cuts
# ---------------------------------------------------------------------------

def _two_coloring(g: Graph, bits):
    """Recover a vertex subset from an edge 0/1 vector, component by
    component (smallest vertex of each component is placed outside), or
    report that no subset induces these bits."""
    edge_bit = dict(zip(g.sorted_edges, bits))
    adj = {v: [] for v in range(g.n)}
    for (i, j), b in edge_bit.items():
        adj[i].append((j, b))
        adj[j].append((i, b))
    color = [None] * g.n
    for start in range(g.n):
        if color[start] is not None:
            continue
        color[start] = 0
        stack = [start]
        while stack:
            v = stack.pop()
            for u, b in adj[v]:
                want = color[v] ^ b
                if color[u] is None:
                    color[u] = want
                    stack.append(u)
                elif color[u] != want:
                    raise ValueError("bit vector is not the incidence vector of any cut")
    return frozenset(v for v in range(g.n) if color[v] == 1)


@dataclass(frozen=True)
class CutVector:
    """Edge incidence vector of a vertex subset. The stored subset is the
    canonical representative not containing vertex 0 (a set and its
    complement cut the same edges)."""
    graph: Graph
    subset: frozenset
    bits: tuple = field(compare=False)

    def __init__(self, graph: Graph, subset):
        s = frozenset(subset)
        if not s <= set(range(graph.n)):
            raise ValueError("subset references a missing vertex")
        if 0 in s:
            s = frozenset(range(graph.n)) - s
        bits = tuple(1 if (i in s) != (j in s) else 0 for i, j in graph.sorted_edges)
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "subset", s)
        object.__setattr__(self, "bits", bits)

    @staticmethod
    def from_bits(graph: Graph, bits) -> "CutVector":
        bits = tuple(int(b) for b in bits)
        if len(bits) != len(graph.sorted_edges) or any(b not in (0, 1) for b in bits):
            raise ValueError("need one 0/1 entry per edge")
        cv = CutVector(graph, _two_coloring(graph, bits))
        if cv.bits != bits:
            raise VerificationError("recovered subset does not reproduce the bits")
        return cv

    def bit(self, i: int, j: int) -> int:
        return self.bits[self.graph.sorted_edges.index((min(i, j), max(i, j)))]


def enumerate_cuts(g: Graph):
    """All distinct cut vectors, deduplicated across subsets that cut the
    same edges (relevant for disconnected graphs), in subset bitmask order
    over vertices 1..n-1."""
    if g.n > CUT_ENUM_MAX_VERTICES:
        raise BudgetExceededError(
            f"{g.n} vertices exceed the cut enumeration limit of {CUT_ENUM_MAX_VERTICES}")
    seen = {}
    for mask in range(1 << max(0, g.n - 1)):
        s = frozenset(i + 1 for i in range(g.n - 1) if (mask >> i) & 1)
        cv = CutVector(g, s)
        if cv.bits not in seen:
            seen[cv.bits] = cv
    return list(seen.values())


# ---------------------------------------------------------------------------
# behaviours
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NCBehaviour:
    """Single and pair correlators of dichotomic measurements on a
    compatibility graph. Pairwise joint distributions must be nonnegative:
    1 + a<M_i> + b<M_j> + ab<M_iM_j> >= 0 for all signs a, b and each edge."""
    graph: Graph
    singles: tuple
    fulls: Mapping

    def __init__(self, graph: Graph, singles, fulls):
        singles = tuple(Fraction(v) for v in singles)
        fulls = {(min(i, j), max(i, j)): Fraction(v) for (i, j), v in dict(fulls).items()}
        if len(singles) != graph.n:
            raise ValueError("one single correlator per vertex required")
        if set(fulls) != set(graph.sorted_edges):
            raise ValueError("one full correlator per edge required")
        for (i, j), c in fulls.items():
            for a in (1, -1):
                for b in (1, -1):
                    if 1 + a * singles[i] + b * singles[j] + a * b * c < 0:
                        raise ValueError(
                            f"joint distribution of ({i}, {j}) has a negative entry")
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "singles", singles)
        object.__setattr__(self, "fulls", fulls)

    @staticmethod
    def deterministic(graph: Graph, assignment) -> "NCBehaviour":
        vals = tuple(int(v) for v in assignment)
        if any(v not in (1, -1) for v in vals):
            raise ValueError("deterministic assignments are +-1 valued")
        return NCBehaviour(graph, vals,
                           {(i, j): vals[i] * vals[j] for i, j in graph.sorted_edges})

    @property
    def is_deterministic(self) -> bool:
        return (all(v in (1, -1) for v in self.singles)
                and all(c == self.singles[i] * self.singles[j]
                        for (i, j), c in self.fulls.items()))

    def pairwise_positivity_min(self) -> Fraction:
        worst = Fraction(2)
        for (i, j), c in self.fulls.items():
            for a in (1, -1):
                for b in (1, -1):
                    worst = min(worst,
                                (1 + a * self.singles[i] + b * self.singles[j] + a * b * c)
                                / 4)
        return worst


def behaviour_to_cut(b: NCBehaviour) -> CutVector:
    """Image of a deterministic behaviour in the suspension graph: vertices
    assigned -1 form the cut subset, the apex plays the +1 reference."""
    if not b.is_deterministic:
        raise ValueError("only deterministic behaviours map to cut vectors")
    sg = suspension(b.graph)
    cv = CutVector(sg, frozenset(i for i, v in enumerate(b.singles) if v == -1))
    for (i, j), c in b.fulls.items():
        if c != 1 - 2 * cv.bit(i, j):
            raise VerificationError("pair correlator disagrees with the cut image")
    for i, v in enumerate(b.singles):
        if v != 1 - 2 * cv.bit(i, sg.n - 1):
            raise VerificationError("single correlator disagrees with the cut image")
    return cv


def cut_to_behaviour(cv: CutVector) -> NCBehaviour:
    """Inverse map: the cut lives on a suspension graph whose apex is the
    last vertex; apex edges give singles, the rest give pair correlators."""
    sg = cv.graph
    apex = sg.n - 1
    base_edges = [(i, j) for i, j in sg.sorted_edges if j != apex]
    if {(i, apex) for i in range(apex)} - set(sg.sorted_edges):
        raise ValueError("graph is not a suspension: apex must see every vertex")
    base = Graph(apex, base_edges)
    singles = [1 - 2 * cv.bit(i, apex) for i in range(apex)]
    fulls = {(i, j): 1 - 2 * cv.bit(i, j) for i, j in base_edges}
    for i, j in base_edges:  # product structure of cuts, checked exhaustively
        if fulls[(i, j)] != singles[i] * singles[j]:
            raise VerificationError("cut image violates the apex factorization identity")
    return NCBehaviour(base, singles, fulls)


# ---------------------------------------------------------------------------
# inequalities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CutInequality:
    """One inequality in one of three coordinate systems.

    form "hypermetric": sum_{i<j} b_i b_j x_ij <= 0 over a complete graph.
    form "cut": explicit rational edge coefficients and bound.
    form "correlator": pair and single correlator coefficients and bound,
    living on n dichotomic observables.
    """
    form: str
    n: int
    b: Optional[tuple] = None
    edge_coeffs: Optional[Mapping] = None
    pair_coeffs: Optional[Mapping] = None
    single_coeffs: Optional[tuple] = None
    bound: Fraction = Fraction(0)

    @staticmethod
    def hypermetric(b) -> "CutInequality":
        b = tuple(int(v) for v in b)
        return CutInequality("hypermetric", len(b), b=b, bound=Fraction(0))

    @staticmethod
    def cut_space(n: int, edge_coeffs, bound) -> "CutInequality":
        coeffs = {(min(i, j), max(i, j)): Fraction(v)
                  for (i, j), v in dict(edge_coeffs).items()}
        return CutInequality("cut", n, edge_coeffs=coeffs, bound=Fraction(bound))

    @staticmethod
    def correlator(n: int, pair_coeffs, single_coeffs, bound) -> "CutInequality":
        pairs = {(min(i, j), max(i, j)): Fraction(v)
                 for (i, j), v in dict(pair_coeffs).items()}
        singles = tuple(Fraction(v) for v in single_coeffs)
        if len(singles) != n:
            raise ValueError("one single coefficient per observable required")
        return CutInequality("correlator", n, pair_coeffs=pairs,
                             single_coeffs=singles, bound=Fraction(bound))

    def evaluate_cut(self, cv: CutVector) -> Fraction:
        if self.form == "hypermetric":
            return sum((Fraction(self.b[i] * self.b[j]) * cv.bit(i, j)
                        for i, j in itertools.combinations(range(self.n), 2)),
                       Fraction(0))
        if self.form == "cut":
            return sum((c * cv.bit(i, j) for (i, j), c in self.edge_coeffs.items()),
                       Fraction(0))
        raise ValueError("correlator-form inequalities evaluate on behaviours")

    def evaluate_behaviour(self, nc: NCBehaviour) -> Fraction:
        if self.form != "correlator":
            raise ValueError("cut-space inequalities evaluate on cut vectors")
        total = sum((c * nc.fulls[e] for e, c in self.pair_coeffs.items()), Fraction(0))
        return total + sum(c * s for c, s in zip(self.single_coeffs, nc.singles))

    def to_cut_form(self) -> "CutInequality":
        """Rewrite in cut coordinates. Correlator inequalities move to the
        suspension graph (one more vertex, the apex): substituting
        <M_iM_j> = 1 - 2 x_ij and <M_i> = 1 - 2 x_{i,apex} turns coefficient
        c into edge coefficient -2c and shifts the bound by the total."""
        if self.form == "hypermetric":
            coeffs = {(i, j): Fraction(self.b[i] * self.b[j])
                      for i, j in itertools.combinations(range(self.n), 2)}
            return CutInequality.cut_space(self.n, coeffs, 0)
        if self.form == "cut":
            return self
        coeffs = {e: -2 * c for e, c in self.pair_coeffs.items()}
        for i, c in enumerate(self.single_coeffs):
            coeffs[(i, self.n)] = -2 * c
        shift = (sum(self.pair_coeffs.values(), Fraction(0))
                 + sum(self.single_coeffs, Fraction(0)))
        return CutInequality.cut_space(self.n + 1, coeffs, self.bound - shift)


def hypermetric_valid(b, g: Graph) -> bool:
    """Exhaustive check of sum b_i b_j x_ij <= 0 over every cut of g.
    Requires sum(b) == 1, the normalization under which the family is valid
    on cut polytopes."""
    b = tuple(int(v) for v in b)
    if len(b) != g.n:
        raise ValueError("one coefficient per vertex required")
    if sum(b) != 1:
        raise ValueError(f"coefficient sum is {sum(b)}, hypermetric form needs 1")
    restricted = {(i, j): Fraction(b[i] * b[j]) for i, j in g.sorted_edges}
    check = CutInequality.cut_space(g.n, restricted, 0)
    return all(check.evaluate_cut(cv) <= 0 for cv in enumerate_cuts(g))


def cut_facet_test(ineq: CutInequality, g: Graph):
    """Exact facet test against the cut polytope of a complete graph: the
    inequality must be valid everywhere; its roots (cuts meeting the bound)
    must affinely span one dimension below the edge count."""
    from .tightness import FacetReport  # shared report shape

    if not g.is_complete:
        raise ValueError("cut facet tests are run on complete graphs")
    if ineq.form == "correlator":
        raise ValueError("convert correlator inequalities with to_cut_form first")
    cform = ineq.to_cut_form()
    if cform.n != g.n:
        raise ValueError("inequality and graph vertex counts differ")
    cuts = enumerate_cuts(g)
    roots = []
    for cv in cuts:
        val = cform.evaluate_cut(cv)
        if val > cform.bound:
            raise ValueError(
                f"inequality is violated at the cut with subset {sorted(cv.subset)}")
        if val == cform.bound:
            roots.append(cv)
    ambient = len(g.sorted_edges)
    dim = affine_rank([cv.bits for cv in roots]) if roots else -1
    return FacetReport(
        polytope_kind="cut",
        ambient_dim=ambient,
        saturating_count=len(roots),
        saturating_affine_dim=dim,
        is_facet=(dim == ambient - 1),
    )


# ---------------------------------------------------------------------------
# exclusivity structure of the pairwise-measurement scenario
# ---------------------------------------------------------------------------

CE1_SIGN_PATTERNS = ((-1, -1, -1), (-1, 1, 1), (1, -1, 1), (1, 1, -1))


def ce1_inequalities(n: int):
    """All nontrivial exclusivity inequalities for n pairwise-compatible
    dichotomic observables: per vertex triple i<j<k, the four odd sign
    patterns on (<M_iM_j>, <M_jM_k>, <M_kM_i>) with bound 1."""
    out = []
    if n < 3:
        return out
    zero_singles = (0,) * n
    for i, j, k in itertools.combinations(range(n), 3):
        for s1, s2, s3 in CE1_SIGN_PATTERNS:
            pairs = {(i, j): s1, (j, k): s2, (i, k): s3}
            out.append(CutInequality.correlator(n, pairs, zero_singles, 1))
    return out


@dataclass(frozen=True, order=True)
class Event:
    """Outcome pair (a, b) of the joint measurement of observables i < j."""
    i: int
    j: int
    a: int
    b: int


def _events(n):
    return [Event(i, j, a, b)
            for i, j in itertools.combinations(range(n), 2)
            for a in (1, -1) for b in (1, -1)]


def _orthogonal(e: Event, f: Event) -> bool:
    if (e.i, e.j) == (f.i, f.j):
        return (e.a, e.b) != (f.a, f.b)
    shared = {e.i: e.a, e.j: e.b}
    for v, val in ((f.i, f.a), (f.j, f.b)):
        if v in shared:
            return shared[v] != val
    return False


@dataclass(frozen=True)
class OrthogonalSetCensus:
    normalization: tuple  # size-4 sets, one per context
    protocol: tuple       # size-4 sets split over two contexts sharing a vertex
    triples: tuple        # size-3 sets over a vertex triangle


def _classify_maximal(events):
    contexts = {(e.i, e.j) for e in events}
    if len(events) == 4 and len(contexts) == 1:
        return "normalization"
    if len(events) == 4 and len(contexts) == 2:
        (c1, c2) = sorted(contexts)
        shared = set(c1) & set(c2)
        if len(shared) == 1:
            v = shared.pop()
            by_ctx = {c1: [], c2: []}
            for e in events:
                by_ctx[(e.i, e.j)].append(e)
            if all(len(v2) == 2 for v2 in by_ctx.values()):
                def shared_val(e):
                    return e.a if e.i == v else e.b
                s1 = {shared_val(e) for e in by_ctx[c1]}
                s2 = {shared_val(e) for e in by_ctx[c2]}
                if len(s1) == 1 and len(s2) == 1 and s1 != s2:
                    return "protocol"
    if len(events) == 3 and len(contexts) == 3:
        verts = set()
        for c in contexts:
            verts |= set(c)
        if len(verts) == 3:
            return "triple"
    return None


def maximal_orthogonal_sets(n: int) -> OrthogonalSetCensus:
    """Enumerate every maximal set of mutually exclusive events and sort them
    into the three families that exist in this scenario; any unclassifiable
    maximal set would falsify that census and aborts loudly."""
    if not 3 <= n <= 6:
        raise BudgetExceededError("event census supported for 3 <= n <= 6")
    evs = _events(n)
    gx = nx.Graph()
    gx.add_nodes_from(range(len(evs)))
    for x, y in itertools.combinations(range(len(evs)), 2):
        if _orthogonal(evs[x], evs[y]):
            gx.add_edge(x, y)
    buckets = {"normalization": [], "protocol": [], "triple": []}
    for clique in nx.find_cliques(gx):
        members = tuple(sorted((evs[x] for x in clique),
                               key=lambda e: (e.i, e.j, e.a, e.b)))
        kind = _classify_maximal(members)
        if kind is None:
            raise VerificationError(
                f"unclassified maximal orthogonal set of size {len(members)}")
        buckets[kind].append(members)
    for key in buckets:
        buckets[key].sort()
    return OrthogonalSetCensus(tuple(buckets["normalization"]),
                               tuple(buckets["protocol"]),
                               tuple(buckets["triple"]))


def ce1_from_triple_set(events, n: int) -> CutInequality:
    """Exclusivity inequality of a size-3 maximal set: the probabilities of
    the three events sum to at most 1, which in correlators reads
    ab <M_iM_j> + bc <M_jM_k> - ac <M_iM_k> <= 1 (singles cancel)."""
    if len(events) != 3:
        raise ValueError("triple sets have exactly three events")
    val = {}
    pairs = {}
    for e in events:
        pairs[(e.i, e.j)] = Fraction(e.a * e.b)
        for vtx, out in ((e.i, e.a), (e.j, e.b)):
            val.setdefault(vtx, []).append(out)
    if len(val) != 3 or any(len(v) != 2 or v[0] != -v[1] for v in val.values()):
        raise ValueError("events do not form a triangle with flipped shared outcomes")
    return CutInequality.correlator(n, pairs, (0,) * n, 1)


# ---------------------------------------------------------------------------
# pentagonal inequality and the exclusivity gap
# ---------------------------------------------------------------------------

PENT_B = (1, 1, 1, -1, -1)  # last entry plays the identity observable


def pentagonal_contextuality_inequality() -> CutInequality:
    """Correlator form of the five-point hypermetric inequality on four
    observables plus the identity: sum of -b_i b_j <M_iM_j> over i<j<=4 and
    -b_i b_5 <M_i> with b = (1,1,1,-1,-1), bound 2."""
    b = PENT_B
    pairs = {(i, j): Fraction(-b[i] * b[j]) for i, j in itertools.combinations(range(4), 2)}
    singles = tuple(Fraction(-b[i] * b[4]) for i in range(4))
    return CutInequality.correlator(4, pairs, singles, 2)


CE_GAP_B = (1, 1, 1, -1)


def ce_gap_certificate() -> NCBehaviour:
    """The behaviour <M_i> = b_i/3, <M_iM_j> = -b_i b_j/3 on four pairwise
    compatible observables (b = (1,1,1,-1)). Checked here: pairwise joint
    positivity (worst case exactly 0), every exclusivity inequality holds
    (max exactly 1), and the pentagonal inequality is violated at exactly
    10/3 > 2. Any failure aborts: it would falsify the separation claim."""
    b = CE_GAP_B
    g4 = Graph.complete(4)
    beh = NCBehaviour(g4, [Fraction(v, 3) for v in b],
                      {(i, j): Fraction(-b[i] * b[j], 3) for i, j in g4.sorted_edges})
    if beh.pairwise_positivity_min() != 0:
        raise VerificationError("positivity margin is not exactly 0")
    ce1_values = [ineq.evaluate_behaviour(beh) for ineq in ce1_inequalities(4)]
    if max(ce1_values) != 1 or any(v > 1 for v in ce1_values):
        raise VerificationError("exclusivity inequalities do not hold with max 1")
    pent = pentagonal_contextuality_inequality().evaluate_behaviour(beh)
    if pent != Fraction(10, 3) or pent <= 2:
        raise VerificationError("pentagonal value is not 10/3")
    return beh


def ce_gap_report() -> dict:
    beh = ce_gap_certificate()
    ce1_values = [ineq.evaluate_behaviour(beh) for ineq in ce1_inequalities(4)]
    return {
        "positivity_min": beh.pairwise_positivity_min(),
        "ce1_count": len(ce1_values),
        "ce1_max": max(ce1_values),
        "pentagonal_value": pentagonal_contextuality_inequality().evaluate_behaviour(beh),
        "pentagonal_bound": Fraction(2),
    }


def ce_gap_grid_search(steps: int = 12):
    """Secondary brute-force route to the same gap: scan the two-parameter
    rational family <M_i> = s b_i, <M_iM_j> = -t b_i b_j, keep points passing
    positivity and every exclusivity inequality, and maximize the pentagonal
    value. Returns (best value, s, t)."""
    b = CE_GAP_B
    g4 = Graph.complete(4)
    pent = pentagonal_contextuality_inequality()
    ce1 = ce1_inequalities(4)
    best = (Fraction(-100), Fraction(0), Fraction(0))
    for si in range(steps + 1):
        for ti in range(steps + 1):
            s, t = Fraction(si, steps), Fraction(ti, steps)
            try:
                beh = NCBehaviour(g4, [s * v for v in b],
                                  {(i, j): -t * b[i] * b[j] for i, j in g4.sorted_edges})
            except ValueError:
                continue
            if any(ineq.evaluate_behaviour(beh) > 1 for ineq in ce1):
                continue
            val = pent.evaluate_behaviour(beh)
            if val > best[0]:
                best = (val, s, t)
    return best
