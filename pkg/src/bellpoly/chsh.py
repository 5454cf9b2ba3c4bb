"""Weighted two-input binary correlation inequalities.

Any such inequality can be relabeled (output sign flips per setting, setting
swaps per party, party swap) into either an all-nonnegative form, which is a
product game whose classical bound is the total weight, or the canonical form
p1 E11 + p2 E12 + p3 E21 - p4 E22 <= 1 - 2 p4 with the negative weight
minimal. The canonical form carries an exact algebraic test deciding whether
the inequality supports the quantum correlation set (no quantum advantage)
or is violated, plus two independent numeric cross-checks: a spectral-radius
certificate for the no-advantage case and a single-qubit grid oracle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .rational import parse_rational

CERT_TOLERANCE = 1e-10
QUBIT_GRID_POINTS = 721
QUBIT_REFINE_ITERS = 200


@dataclass(frozen=True)
class WeightedCHSH:
    """Canonical weight vector. p is (p1, p2, p3, p4), nonnegative, summing
    to 1. For the generic class the matrix is [[p1, p2], [p3, -p4]] with p4
    minimal and sign_cell == (1, 1); for the all-nonnegative (trivial) class
    every cell is +p_i, sign_cell is None and trivial_even is True."""
    p: tuple
    sign_cell: Optional[tuple] = (1, 1)
    trivial_even: bool = False

    def __post_init__(self):
        if len(self.p) != 4:
            raise ValueError("four weights required")
        object.__setattr__(self, "p", tuple(Fraction(v) for v in self.p))
        if any(v < 0 for v in self.p):
            raise ValueError("canonical weights are nonnegative")
        if sum(self.p) != 1:
            raise ValueError("canonical weights sum to 1")
        if self.trivial_even:
            if self.sign_cell is not None:
                raise ValueError("trivial class has no negative cell")
        else:
            if self.sign_cell != (1, 1):
                raise ValueError("canonical negative cell is (1, 1)")
            if self.p[3] > min(self.p[:3]):
                raise ValueError("canonical form has the minimal weight on the negative cell")

    @property
    def classical_game_value(self) -> Fraction:
        # game form: win iff a xor b equals the cell's target bit
        return 1 - self.p[3] if not self.trivial_even else Fraction(1)

    @property
    def correlator_bound(self) -> Fraction:
        return 1 - 2 * self.p[3] if not self.trivial_even else Fraction(1)

    def signed_matrix(self):
        p1, p2, p3, p4 = self.p
        if self.trivial_even:
            return ((p1, p2), (p3, p4))
        return ((p1, p2), (p3, -p4))


def relabel_images(cells):
    """All 128 images of a 2x2 correlator coefficient matrix under output
    sign flips (one per setting per party), setting swaps and the party swap.
    cells is ((c11, c12), (c21, c22)); returns a sorted deduplicated list."""
    base = tuple(tuple(row) for row in cells)
    out = set()
    for sa1, sa2, sb1, sb2 in itertools.product((1, -1), repeat=4):
        signed = ((sa1 * sb1 * base[0][0], sa1 * sb2 * base[0][1]),
                  (sa2 * sb1 * base[1][0], sa2 * sb2 * base[1][1]))
        for swap_rows in (False, True):
            m = (signed[1], signed[0]) if swap_rows else signed
            for swap_cols in (False, True):
                mm = tuple((r[1], r[0]) for r in m) if swap_cols else m
                out.add(mm)
                out.add(((mm[0][0], mm[1][0]), (mm[0][1], mm[1][1])))  # party swap
    return sorted(out)


def canonicalize(raw_coeffs) -> WeightedCHSH:
    """Reduce four signed correlator coefficients (row-major cells) to the
    canonical class representative. If some relabeling makes every cell
    nonnegative the inequality is a product game with classical value equal
    to the total weight; it is returned with trivial_even set and the
    lexicographically greatest nonnegative arrangement. Otherwise exactly one
    cell stays negative, moved to position (1, 1) with minimal magnitude,
    ties broken toward the lexicographically greatest (p1, p2, p3)."""
    c = [parse_rational(v, where="coefficient") for v in raw_coeffs]
    if len(c) != 4:
        raise ValueError("four coefficients required")
    total = sum(abs(v) for v in c)
    if total == 0:
        raise ValueError("all four coefficients are zero")
    c = [v / total for v in c]
    images = relabel_images(((c[0], c[1]), (c[2], c[3])))

    nonneg = [m for m in images if all(v >= 0 for row in m for v in row)]
    if nonneg:
        best = max(nonneg, key=lambda m: (m[0][0], m[0][1], m[1][0], m[1][1]))
        p = (best[0][0], best[0][1], best[1][0], best[1][1])
        return WeightedCHSH(p, sign_cell=None, trivial_even=True)

    candidates = []
    for m in images:
        flat = (m[0][0], m[0][1], m[1][0], m[1][1])
        if flat[0] >= 0 and flat[1] >= 0 and flat[2] >= 0 and flat[3] < 0 \
                and -flat[3] <= min(flat[:3]):
            candidates.append(flat)
    best = max(candidates, key=lambda f: (f[0], f[1], f[2]))
    return WeightedCHSH((best[0], best[1], best[2], -best[3]))


# ---------------------------------------------------------------------------
# exact face decision
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FaceVerdict:
    verdict: str  # NontrivialFace | QuantumViolation | Trivial
    algebraically_trivial: bool
    lhs: Optional[Fraction]
    rhs: Optional[Fraction]
    classical_game_value: Fraction
    correlator_bound: Fraction


def face_condition(w: WeightedCHSH) -> FaceVerdict:
    """Exact rational decision. The canonical inequality supports the quantum
    set iff (p2 p3 + p1 p4)^2 <= (p1 + p2)(p1 + p3)(p2 - p4)(p3 - p4);
    equality counts as supporting. A tie p4 == min(p1, p2, p3) can only
    support when both tied weights vanish, which is the trivial face."""
    if w.trivial_even:
        one = Fraction(1)
        return FaceVerdict("Trivial", True, None, None, one, one)
    p1, p2, p3, p4 = w.p
    lhs = (p2 * p3 + p1 * p4) ** 2
    rhs = (p1 + p2) * (p1 + p3) * (p2 - p4) * (p3 - p4)
    if lhs > rhs:
        return FaceVerdict("QuantumViolation", False, lhs, rhs,
                           w.classical_game_value, w.correlator_bound)
    if p4 < min(p1, p2, p3):
        return FaceVerdict("NontrivialFace", p4 == 0, lhs, rhs,
                           w.classical_game_value, w.correlator_bound)
    # condition holds with a tie: forces p4 == tied weight == 0
    assert p4 == 0 and min(p1, p2, p3) == 0
    return FaceVerdict("Trivial", True, lhs, rhs,
                       w.classical_game_value, w.correlator_bound)


# ---------------------------------------------------------------------------
# spectral-radius certificate (numeric cross-check)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SigmaLambdaCertificate:
    phi: tuple
    sigma: tuple       # diagonal of the row-sum matrix
    lambda_: tuple     # diagonal of the column-sum matrix
    rho: float         # spectral radius; inf/nan when a scaling is singular
    verdict: str       # no-advantage | advantage | indefinite
    tolerance: float = CERT_TOLERANCE


def sigma_lambda_certificate(w: WeightedCHSH) -> SigmaLambdaCertificate:
    """Scaling certificate for the all-ones strategy: with Sigma holding the
    signed row sums and Lambda the signed column sums of the game matrix, the
    strategy is unbeatable iff the spectral radius of
    Lambda^-1 Phi^T Sigma^-1 Phi equals 1. Singular scalings give no verdict
    (indefinite) and the exact decision governs."""
    if w.trivial_even:
        raise ValueError("certificate applies to the canonical signed form")
    p1, p2, p3, p4 = (float(v) for v in w.p)
    phi = np.array([[p1, p2], [p3, -p4]])
    sigma = (p1 + p2, p3 - p4)
    lam = (p1 + p3, p2 - p4)
    phit = tuple(tuple(row) for row in phi.tolist())
    if min(abs(sigma[0]), abs(sigma[1]), abs(lam[0]), abs(lam[1])) < 1e-300:
        rho = float("inf") if abs(np.linalg.det(phi)) > 0 else float("nan")
        return SigmaLambdaCertificate(phit, sigma, lam, rho, "indefinite")
    m = np.diag([1 / lam[0], 1 / lam[1]]) @ phi.T @ np.diag([1 / sigma[0], 1 / sigma[1]]) @ phi
    rho = float(max(abs(np.linalg.eigvals(m))))
    verdict = "no-advantage" if abs(rho - 1) <= CERT_TOLERANCE else "advantage"
    return SigmaLambdaCertificate(phit, sigma, lam, rho, verdict)


# ---------------------------------------------------------------------------
# single-qubit oracle (numeric lower bound on the quantum game value)
# ---------------------------------------------------------------------------

def _correlator_envelope(w, cos_gap):
    p1, p2, p3, p4 = (float(v) for v in w.p)
    t1 = math.sqrt(max(0.0, p1 * p1 + p3 * p3 + 2 * p1 * p3 * cos_gap))
    t2 = math.sqrt(max(0.0, p2 * p2 + p4 * p4 - 2 * p2 * p4 * cos_gap))
    return t1 + t2


def qubit_value_estimate(w: WeightedCHSH) -> float:
    """Best game value over projective qubit measurements on the maximally
    entangled pair. Oracle assumption: for two-setting sign games that state
    and plane-angle measurements already reach the quantum optimum, so the
    search reduces to one relative angle; the envelope in its cosine is
    concave, so a coarse grid plus ternary refinement is exact to grid
    precision. Returns (1 + best correlator) / 2."""
    if w.trivial_even:
        return 1.0
    # grid on the relative Alice angle in [0, pi]
    best_alpha, best_val = 0.0, -math.inf
    for i in range(QUBIT_GRID_POINTS):
        alpha = math.pi * i / (QUBIT_GRID_POINTS - 1)
        val = _correlator_envelope(w, math.cos(alpha))
        if val > best_val:
            best_alpha, best_val = alpha, val
    step = math.pi / (QUBIT_GRID_POINTS - 1)
    lo = max(0.0, best_alpha - step)
    hi = min(math.pi, best_alpha + step)
    for _ in range(QUBIT_REFINE_ITERS):
        m1 = lo + (hi - lo) / 3
        m2 = hi - (hi - lo) / 3
        if _correlator_envelope(w, math.cos(m1)) >= _correlator_envelope(w, math.cos(m2)):
            hi = m2
        else:
            lo = m1
    best = max(best_val, _correlator_envelope(w, math.cos((lo + hi) / 2)))
    return (1 + best) / 2
