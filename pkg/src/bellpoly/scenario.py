"""Bipartite measurement scenarios, behaviours, and linear functionals on them.

Conventions used throughout the package:
  * a scenario (ma, mb, da, db) has ma Alice inputs with da outputs each and
    mb Bob inputs with db outputs;
  * a behaviour is the full conditional table P(a, b | x, y), stored exactly
    as nested tuples of Fractions indexed [x][y][a][b];
  * deterministic boxes are pairs of response maps, enumerated in
    lexicographic order on (a_map, b_map).

All arithmetic in this module is exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceededError
from .exactrank import affine_rank

DEFAULT_BOX_BUDGET = 2 ** 24


@dataclass(frozen=True)
class Scenario:
    ma: int
    mb: int
    da: int
    db: int

    def __post_init__(self):
        for v in (self.ma, self.mb, self.da, self.db):
            if not isinstance(v, int) or v < 1:
                raise ValueError(f"scenario parameters must be positive integers, got {self}")

    @property
    def box_count(self) -> int:
        return self.da ** self.ma * self.db ** self.mb


def ns_polytope_dimension(s: Scenario) -> int:
    """Affine dimension of the no-signaling polytope of the scenario.

    The local polytope is full-dimensional inside the same affine subspace,
    so facet tests against either polytope use this ambient dimension.
    """
    return (s.ma * s.mb * (s.da - 1) * (s.db - 1)
            + s.ma * (s.da - 1)
            + s.mb * (s.db - 1))


@dataclass(frozen=True)
class DeterministicBox:
    scenario: Scenario
    a_map: tuple
    b_map: tuple

    def __post_init__(self):
        s = self.scenario
        if len(self.a_map) != s.ma or len(self.b_map) != s.mb:
            raise ValueError("response map lengths do not match the scenario")
        if any(not 0 <= a < s.da for a in self.a_map) or any(not 0 <= b < s.db for b in self.b_map):
            raise ValueError("response map values out of range")

    def behaviour(self) -> "Behaviour":
        s = self.scenario
        one, zero = Fraction(1), Fraction(0)
        table = tuple(
            tuple(
                tuple(
                    tuple(one if (a == self.a_map[x] and b == self.b_map[y]) else zero
                          for b in range(s.db))
                    for a in range(s.da))
                for y in range(s.mb))
            for x in range(s.ma))
        return Behaviour(s, table)

    def probability_vector(self) -> tuple:
        """Flat 0/1 vector of P(a, b | x, y) in x, y, a, b order."""
        s = self.scenario
        return tuple(1 if (a == self.a_map[x] and b == self.b_map[y]) else 0
                     for x in range(s.ma) for y in range(s.mb)
                     for a in range(s.da) for b in range(s.db))

    def reduced_vector(self) -> tuple:
        """Minimal no-signaling coordinates: Alice marginals for a < da-1, Bob
        marginals for b < db-1, and the joint block for a < da-1, b < db-1.
        The length equals ns_polytope_dimension(scenario)."""
        s = self.scenario
        v = [1 if self.a_map[x] == a else 0 for x in range(s.ma) for a in range(s.da - 1)]
        v += [1 if self.b_map[y] == b else 0 for y in range(s.mb) for b in range(s.db - 1)]
        v += [1 if (self.a_map[x] == a and self.b_map[y] == b) else 0
              for x in range(s.ma) for y in range(s.mb)
              for a in range(s.da - 1) for b in range(s.db - 1)]
        return tuple(v)

    def correlator_vector(self) -> tuple:
        """(+1/-1)^{ma*mb} vector of <A_x B_y>; binary outputs only."""
        s = self.scenario
        if s.da != 2 or s.db != 2:
            raise ValueError("correlators need binary outputs")
        return tuple(1 if self.a_map[x] == self.b_map[y] else -1
                     for x in range(s.ma) for y in range(s.mb))


def enumerate_deterministic_boxes(s: Scenario, budget: int = DEFAULT_BOX_BUDGET) -> list:
    """All deterministic boxes, lexicographic on (a_map, b_map).

    Raises BudgetExceededError when da^ma * db^mb exceeds the budget.
    """
    if s.box_count > budget:
        raise BudgetExceededError(
            f"{s.box_count} deterministic boxes exceed the budget of {budget}")
    return [DeterministicBox(s, am, bm)
            for am in itertools.product(range(s.da), repeat=s.ma)
            for bm in itertools.product(range(s.db), repeat=s.mb)]


@dataclass(frozen=True)
class Behaviour:
    scenario: Scenario
    table: tuple  # [x][y][a][b] of Fraction

    def prob(self, a, b, x, y) -> Fraction:
        return self.table[x][y][a][b]

    def probability_vector(self) -> tuple:
        s = self.scenario
        return tuple(self.table[x][y][a][b]
                     for x in range(s.ma) for y in range(s.mb)
                     for a in range(s.da) for b in range(s.db))

    def alice_marginal(self, a, x, y) -> Fraction:
        return sum((self.table[x][y][a][b] for b in range(self.scenario.db)), Fraction(0))

    def bob_marginal(self, b, x, y) -> Fraction:
        return sum((self.table[x][y][a][b] for a in range(self.scenario.da)), Fraction(0))

    def correlator(self, x, y) -> Fraction:
        s = self.scenario
        if s.da != 2 or s.db != 2:
            raise ValueError("correlators need binary outputs")
        return sum((self.table[x][y][a][b] * (1 if a == b else -1)
                    for a in range(2) for b in range(2)), Fraction(0))


def behaviour_from_box(box: DeterministicBox) -> Behaviour:
    return box.behaviour()


def mix(behaviours, weights) -> Behaviour:
    """Convex combination, exact. Weights must sum to 1."""
    behaviours = list(behaviours)
    weights = [Fraction(w) for w in weights]
    if len(behaviours) != len(weights) or not behaviours:
        raise ValueError("need equally many behaviours and weights")
    if sum(weights) != 1:
        raise ValueError("weights must sum to 1")
    s = behaviours[0].scenario
    if any(b.scenario != s for b in behaviours):
        raise ValueError("behaviours live in different scenarios")
    table = tuple(
        tuple(
            tuple(
                tuple(sum((w * b.table[x][y][a][bb] for w, b in zip(weights, behaviours)),
                          Fraction(0))
                      for bb in range(s.db))
                for a in range(s.da))
            for y in range(s.mb))
        for x in range(s.ma))
    return Behaviour(s, table)


def is_no_signaling(b: Behaviour) -> bool:
    """True iff Alice's marginals do not depend on y and Bob's do not depend on x."""
    s = b.scenario
    for x in range(s.ma):
        for a in range(s.da):
            ref = b.alice_marginal(a, x, 0)
            if any(b.alice_marginal(a, x, y) != ref for y in range(1, s.mb)):
                return False
    for y in range(s.mb):
        for bb in range(s.db):
            ref = b.bob_marginal(bb, 0, y)
            if any(b.bob_marginal(bb, x, y) != ref for x in range(1, s.ma)):
                return False
    return True


@dataclass(frozen=True)
class BellInequality:
    """A linear functional sum c(a,b,x,y) P(a,b|x,y) <= bound.

    `space` records how the inequality was built. Correlator-space
    inequalities keep their coefficient table on <A_x B_y> in `corr`; the
    probability-space expansion c = corr(x,y) * (-1)^(a xor b) is always
    stored in `coeffs`, so evaluation is uniform.
    """
    scenario: Scenario
    coeffs: tuple  # [x][y][a][b] of Fraction
    bound: Fraction
    space: str = "probability"
    corr: tuple = None  # [x][y] of Fraction for space == "correlator"

    def __post_init__(self):
        if self.space not in ("probability", "correlator"):
            raise ValueError(f"unknown inequality space {self.space!r}")
        if self.space == "correlator" and self.corr is None:
            raise ValueError("correlator-space inequality needs its corr table")

    def evaluate(self, b: Behaviour) -> Fraction:
        s = self.scenario
        if b.scenario != s:
            raise ValueError("behaviour scenario mismatch")
        return sum((self.coeffs[x][y][a][bb] * b.table[x][y][a][bb]
                    for x in range(s.ma) for y in range(s.mb)
                    for a in range(s.da) for bb in range(s.db)), Fraction(0))

    def evaluate_box(self, box: DeterministicBox) -> Fraction:
        s = self.scenario
        return sum((self.coeffs[x][y][box.a_map[x]][box.b_map[y]]
                    for x in range(s.ma) for y in range(s.mb)), Fraction(0))


def correlator_inequality(s: Scenario, corr, bound) -> BellInequality:
    """Build sum_{x,y} corr[x][y] <A_x B_y> <= bound as a BellInequality."""
    if s.da != 2 or s.db != 2:
        raise ValueError("correlator inequalities need binary outputs")
    corr = tuple(tuple(Fraction(v) for v in row) for row in corr)
    coeffs = tuple(
        tuple(
            tuple(tuple(corr[x][y] * (1 if a == b else -1) for b in range(2))
                  for a in range(2))
            for y in range(s.mb))
        for x in range(s.ma))
    return BellInequality(s, coeffs, Fraction(bound), space="correlator", corr=corr)


def evaluate(ineq: BellInequality, b) -> Fraction:
    """Module-level convenience: works on behaviours and deterministic boxes."""
    if isinstance(b, DeterministicBox):
        return ineq.evaluate_box(b)
    return ineq.evaluate(b)


def affine_dimension(boxes) -> int:
    """Exact affine dimension of a set of boxes/behaviours (full probability
    coordinates; the value is embedding-independent). Raises on empty input."""
    pts = []
    for b in boxes:
        pts.append(b.probability_vector())
    if not pts:
        raise ValueError("affine dimension of an empty set")
    return affine_rank(pts)
