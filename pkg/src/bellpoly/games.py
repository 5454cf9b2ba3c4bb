"""Game constructors and their Fourier-side matrices.

Two game families are first-class here:

  * linear games over Z_d: win iff (a + b) mod d == f(x, y), with a rational
    weight q(x, y) on each input pair;
  * three-output unique games: win iff b == pi_{x,y}(a) for a permutation of
    {0,1,2} attached to each input pair.

Distributed-computation (NLC) instances are built from a compact spec and come
out as linear games carrying their construction data, which the non-facet
machinery needs later.

Game matrices follow the weighted convention: entry (x, y) of the k-th matrix
is q(x, y) * zeta^(k f(x, y)) with zeta = exp(2 pi i / d). Weights and phase
exponents are kept exactly; the complex realization is built on demand.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import pi

import numpy as np

from .scenario import BellInequality, Scenario

# permutations of {0,1,2} by cycle name; table[i] = image of i
PERMS = {
    "e": (0, 1, 2),
    "(01)": (1, 0, 2),
    "(02)": (2, 1, 0),
    "(12)": (0, 2, 1),
    "(012)": (1, 2, 0),
    "(021)": (2, 0, 1),
}
# rotations pi(a) = a + shift; reflections pi(a) = shift - a (mod 3)
ROTATIONS = {"e": 0, "(012)": 1, "(021)": 2}
REFLECTIONS = {"(01)": 1, "(12)": 0, "(02)": 2}


def _check_weight_table(q, ma, mb):
    q = tuple(tuple(Fraction(v) for v in row) for row in q)
    if len(q) != ma or any(len(row) != mb for row in q):
        raise ValueError("weight table shape does not match input counts")
    if any(v < 0 for row in q for v in row):
        raise ValueError("weights must be nonnegative")
    return q


@dataclass(frozen=True)
class LinearGame:
    d: int
    ma: int
    mb: int
    q: tuple  # [x][y] Fraction >= 0
    f: tuple  # [x][y] int in Z_d
    n: int = 1  # dits per input when inputs range over Z_d^n
    nlc: "NLCSpec" = None

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("need at least two outputs")
        object.__setattr__(self, "q", _check_weight_table(self.q, self.ma, self.mb))
        f = tuple(tuple(int(v) for v in row) for row in self.f)
        if len(f) != self.ma or any(len(row) != self.mb for row in f):
            raise ValueError("winning-value table shape does not match input counts")
        if any(not 0 <= v < self.d for row in f for v in row):
            raise ValueError("winning values must lie in Z_d")
        object.__setattr__(self, "f", f)
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.n > 1 and (self.ma != self.d ** self.n or self.mb != self.d ** self.n):
            raise ValueError("dit-structured games need ma = mb = d^n")

    @property
    def scenario(self) -> Scenario:
        return Scenario(self.ma, self.mb, self.d, self.d)

    @property
    def total_weight(self) -> Fraction:
        return sum((v for row in self.q for v in row), Fraction(0))

    def win(self, a, b, x, y) -> bool:
        return (a + b) % self.d == self.f[x][y]

    def winning_b(self, a, x, y) -> int:
        # the unique Bob output that wins against a on (x, y)
        return (self.f[x][y] - a) % self.d


@dataclass(frozen=True)
class UniqueGame3:
    ma: int
    mb: int
    q: tuple
    perms: tuple  # [x][y] permutation names

    d = 3

    def __post_init__(self):
        object.__setattr__(self, "q", _check_weight_table(self.q, self.ma, self.mb))
        perms = tuple(tuple(str(v) for v in row) for row in self.perms)
        if len(perms) != self.ma or any(len(row) != self.mb for row in perms):
            raise ValueError("permutation table shape does not match input counts")
        for row in perms:
            for name in row:
                if name not in PERMS:
                    raise ValueError(f"unknown permutation {name!r}; use {sorted(PERMS)}")
        object.__setattr__(self, "perms", perms)

    @property
    def scenario(self) -> Scenario:
        return Scenario(self.ma, self.mb, 3, 3)

    @property
    def total_weight(self) -> Fraction:
        return sum((v for row in self.q for v in row), Fraction(0))

    def win(self, a, b, x, y) -> bool:
        return b == PERMS[self.perms[x][y]][a]

    def winning_b(self, a, x, y) -> int:
        return PERMS[self.perms[x][y]][a]


# ---------------------------------------------------------------------------
# NLC construction
# ---------------------------------------------------------------------------

def _is_prime(d):
    if d < 2:
        return False
    i = 2
    while i * i <= d:
        if d % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class NLCSpec:
    """Compact description of a distributed-computation game.

    For d = 2 the table `g` may be a full truth table on Z_2^n (arbitrary
    function, length 2^n) or a product-form table on Z_2^(n-1). For d >= 3
    only the product form g(first n-1 dits) * (last dit sum) is accepted.
    `p` is a rational probability distribution on the same index set as `g`.
    """
    d: int
    n: int
    g: tuple
    p: tuple

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.d < 2:
            raise ValueError("d must be at least 2")
        g = tuple(int(v) for v in self.g)
        p = tuple(Fraction(v) for v in self.p)
        if len(g) != len(p):
            raise ValueError("g and p must share an index set")
        full = self.d == 2 and len(g) == 2 ** self.n
        product = len(g) == self.d ** (self.n - 1)
        if not (full or product):
            raise ValueError(
                f"table length {len(g)} matches neither a full d=2 table (2^n) "
                f"nor a product-form table (d^(n-1))")
        if any(not 0 <= v < self.d for v in g):
            raise ValueError("g values must lie in Z_d")
        if any(v < 0 for v in p) or sum(p) != 1:
            raise ValueError("p must be a probability distribution")
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "p", p)

    @property
    def is_product_form(self) -> bool:
        return len(self.g) == self.d ** (self.n - 1)


def input_dits(x, d, n):
    """Base-d digits of x, most significant first (n digits)."""
    out = []
    for _ in range(n):
        x, r = divmod(x, d)
        out.append(r)
    return tuple(reversed(out))


def dits_to_index(dits, d):
    v = 0
    for t in dits:
        v = v * d + t
    return v


def ditwise_add(u, v, d, n):
    """Index of the digit-wise mod-d sum of two base-d encoded strings."""
    du = input_dits(u, d, n)
    dv = input_dits(v, d, n)
    return dits_to_index(tuple((a + b) % d for a, b in zip(du, dv)), d)


def build_nlc2(spec: NLCSpec) -> LinearGame:
    """Binary distributed-computation game: q(x,y) = p(x xor y)/2^n and
    f(x,y) = g(x xor y), any g: Z_2^n -> Z_2."""
    if spec.d != 2:
        raise ValueError("build_nlc2 needs d = 2")
    if len(spec.g) != 2 ** spec.n:
        raise ValueError("build_nlc2 needs the full f-table; use build_nlcd for product form")
    m = 2 ** spec.n
    q = tuple(tuple(spec.p[x ^ y] / m for y in range(m)) for x in range(m))
    f = tuple(tuple(spec.g[x ^ y] for y in range(m)) for x in range(m))
    return LinearGame(2, m, m, q, f, n=spec.n, nlc=spec)


def build_nlc(spec: NLCSpec) -> LinearGame:
    """Dispatch on the table shape: full d=2 truth tables go through
    build_nlc2, product-form tables (any prime d, including 2) through
    build_nlcd."""
    if spec.d == 2 and len(spec.g) == 2 ** spec.n:
        return build_nlc2(spec)
    return build_nlcd(spec)


def build_nlcd(spec: NLCSpec) -> LinearGame:
    """Product-form distributed-computation game for prime d:
    f(x,y) = g(xt + yt) * (x_n + y_n) and q(x,y) = p(xt + yt) / d^(n+1),
    where xt is the string of the first n-1 dits (digit-wise sums mod d)."""
    d = spec.d
    if not _is_prime(d):
        raise ValueError(f"d = {d} is not prime")
    if not spec.is_product_form:
        raise ValueError("build_nlcd needs the product-form table g on Z_d^(n-1)")
    n = spec.n
    m = d ** n
    den = d ** (n + 1)
    q = [[None] * m for _ in range(m)]
    f = [[0] * m for _ in range(m)]
    for x in range(m):
        xt, xn = divmod(x, d)
        for y in range(m):
            yt, yn = divmod(y, d)
            zt = ditwise_add(xt, yt, d, n - 1)
            q[x][y] = spec.p[zt] / den
            f[x][y] = (spec.g[zt] * ((xn + yn) % d)) % d
    return LinearGame(d, m, m, tuple(map(tuple, q)), tuple(map(tuple, f)),
                      n=n, nlc=spec)


# ---------------------------------------------------------------------------
# Game matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GameMatrix:
    """Weighted Fourier matrix: entry = weight * zeta^phase, zeta = e^(2 pi i/d).

    Weights (rationals) and phase exponents (integers mod d) are stored
    exactly so that structural identities can be checked without floats;
    `to_complex` gives the numeric realization.
    """
    d: int
    k: int
    weights: tuple
    phases: tuple

    def to_complex(self) -> np.ndarray:
        w = np.array([[float(v) for v in row] for row in self.weights])
        ph = np.array(self.phases, dtype=float)
        return w * np.exp(2j * pi * ph / self.d)

    def block(self, rows, cols) -> np.ndarray:
        return self.to_complex()[np.ix_(rows, cols)]

    @property
    def shape(self):
        return (len(self.weights), len(self.weights[0]))


def game_matrix(g: LinearGame, k: int) -> GameMatrix:
    if not 1 <= k <= g.d - 1:
        raise ValueError(f"k must be in 1..{g.d - 1}, got {k}")
    weights = g.q
    phases = tuple(tuple((k * g.f[x][y]) % g.d for y in range(g.mb)) for x in range(g.ma))
    return GameMatrix(g.d, k, weights, phases)


def unique3_matrices(g: UniqueGame3, k: int):
    """The pair of coset matrices of a 3-output unique game.

    The permutation group splits into rotations (a -> a + c) and reflections
    (a -> c - a); each input pair feeds exactly one of the two matrices:
    rotation cells carry zeta^(-k * f_minus) where a - b = f_minus on a win,
    reflection cells carry zeta^(+k * f_plus) where a + b = f_plus on a win.
    The two weight tables partition q.
    """
    if not 1 <= k <= 2:
        raise ValueError(f"k must be 1 or 2, got {k}")
    zero = Fraction(0)
    w_rot = [[zero] * g.mb for _ in range(g.ma)]
    w_ref = [[zero] * g.mb for _ in range(g.ma)]
    ph_rot = [[0] * g.mb for _ in range(g.ma)]
    ph_ref = [[0] * g.mb for _ in range(g.ma)]
    for x in range(g.ma):
        for y in range(g.mb):
            name = g.perms[x][y]
            if name in ROTATIONS:
                f_minus = (-ROTATIONS[name]) % 3
                w_rot[x][y] = g.q[x][y]
                ph_rot[x][y] = (-k * f_minus) % 3
            else:
                f_plus = REFLECTIONS[name]
                w_ref[x][y] = g.q[x][y]
                ph_ref[x][y] = (k * f_plus) % 3
    rot = GameMatrix(3, k, tuple(map(tuple, w_rot)), tuple(map(tuple, ph_rot)))
    ref = GameMatrix(3, k, tuple(map(tuple, w_ref)), tuple(map(tuple, ph_ref)))
    return rot, ref


def rotation_game_to_linear(g: UniqueGame3) -> LinearGame:
    """Rewrite a rotations-only unique game as a linear game by relabeling
    Bob's outputs b -> -b mod 3; all game values are relabeling-invariant."""
    f = [[0] * g.mb for _ in range(g.ma)]
    for x in range(g.ma):
        for y in range(g.mb):
            name = g.perms[x][y]
            if name not in ROTATIONS:
                raise ValueError("game has reflection cells; no linear rewrite")
            # win b = a + c  <=>  a + (-b) = -c
            f[x][y] = (-ROTATIONS[name]) % 3
    return LinearGame(3, g.ma, g.mb, g.q, tuple(map(tuple, f)))


# ---------------------------------------------------------------------------
# Inequality views and subgames
# ---------------------------------------------------------------------------

def to_bell_inequality(g) -> BellInequality:
    """The game as a linear functional on behaviours, bounded by its exact
    classical value: sum q(x,y) P(win|x,y) <= omega_c."""
    from .values import classical_value  # deferred: values depends on games

    s = g.scenario
    zero = Fraction(0)
    coeffs = tuple(
        tuple(
            tuple(tuple(g.q[x][y] if g.win(a, b, x, y) else zero for b in range(s.db))
                  for a in range(s.da))
            for y in range(s.mb))
        for x in range(s.ma))
    bound = classical_value(g).value
    return BellInequality(s, coeffs, bound)


def to_correlator_inequality(g: LinearGame) -> BellInequality:
    """Correlator-space view of a binary game: the win probability is
    W/2 + (1/2) sum q(x,y) (-1)^f(x,y) <A_x B_y>, so the correlator
    coefficients are q(x,y)(-1)^f(x,y)/2 with bound omega_c - W/2."""
    from .values import classical_value

    if g.d != 2:
        raise ValueError("correlator form needs binary outputs")
    corr = tuple(
        tuple(g.q[x][y] * (1 if g.f[x][y] == 0 else -1) / 2 for y in range(g.mb))
        for x in range(g.ma))
    bound = classical_value(g).value - g.total_weight / 2
    from .scenario import correlator_inequality
    return correlator_inequality(g.scenario, corr, bound)


def subgame_restrict(g, fix_a=None, fix_b=None):
    """Zero out all weight outside a partial assignment of input dits.

    fix_a / fix_b map dit positions (0 = first = most significant) to values.
    The game shape is unchanged; only q is masked, so fragment inequalities
    live in the same scenario and sum cell-wise to the original.
    """
    fix_a = dict(fix_a or {})
    fix_b = dict(fix_b or {})
    if not fix_a and not fix_b:
        raise ValueError("empty restriction")
    n = getattr(g, "n", 1)
    d = g.d
    for fixes, m in ((fix_a, g.ma), (fix_b, g.mb)):
        for pos, val in fixes.items():
            if not 0 <= pos < n:
                raise ValueError(f"dit position {pos} out of range for n = {n}")
            if not 0 <= val < d:
                raise ValueError(f"dit value {val} out of range for d = {d}")

    def keep(index, fixes):
        dits = input_dits(index, d, n)
        return all(dits[pos] == val for pos, val in fixes.items())

    keep_x = [keep(x, fix_a) for x in range(g.ma)]
    keep_y = [keep(y, fix_b) for y in range(g.mb)]
    zero = Fraction(0)
    q = tuple(
        tuple(g.q[x][y] if (keep_x[x] and keep_y[y]) else zero for y in range(g.mb))
        for x in range(g.ma))
    if isinstance(g, UniqueGame3):
        return UniqueGame3(g.ma, g.mb, q, g.perms)
    return LinearGame(g.d, g.ma, g.mb, q, g.f, n=g.n, nlc=g.nlc)
