"""Cylinder measures on the boundary of F_n, Radon-Nikodym branches and cocycles.

A measure in the alpha family gives a cylinder ``Omega(w)`` the mass
``alpha_+`` or ``alpha_-`` for its first letter times ``alpha_1`` for every
sign switch and ``alpha_0`` for every other step.  The cocycle ``P(s, w)`` is
built from the multipliers ``p_j`` letter by letter; on cylinders one letter
deeper than ``|s|`` it is constant, so integrating it against the measure is a
finite exact sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from . import words as W
from .errors import LambdaOutOfRange, PrefixTooShort, TooDeep
from .states import evaluate_codes, phi_a

MAX_CYLINDERS = 10**7


@dataclass(frozen=True)
class AlphaParams:
    alpha_plus: float
    alpha_minus: float
    alpha_0: float
    alpha_1: float

    def normalization_errors(self, n: int):
        """Residuals of n(a+ + a-) = 1 and n a0 + (n-1) a1 = 1."""
        return (
            abs(n * (self.alpha_plus + self.alpha_minus) - 1.0),
            abs(n * self.alpha_0 + (n - 1) * self.alpha_1 - 1.0),
        )

    def check(self, n: int, tol: float = 1e-12) -> None:
        if min(self.alpha_plus, self.alpha_minus, self.alpha_0, self.alpha_1) <= 0:
            raise ValueError("alpha parameters must be positive")
        e1, e2 = self.normalization_errors(n)
        if e1 > tol or e2 > tol:
            raise ValueError(f"alpha parameters violate normalization ({e1:.3g}, {e2:.3g})")


def alphas_from_lambda(n: int, lam: float) -> AlphaParams:
    if not 0 < lam < math.sqrt(n):
        raise LambdaOutOfRange(f"lambda must lie in (0, sqrt({n})), got {lam}")
    l2 = lam * lam
    return AlphaParams(
        alpha_plus=(n - 1) * l2 / (n * (n * n - l2)),
        alpha_minus=(n - l2) / (n * n - l2),
        alpha_0=l2 / (n * n),
        alpha_1=(n - l2) / (n * (n - 1)),
    )


@dataclass(frozen=True)
class CylinderMeasure:
    n: int
    params: AlphaParams

    def __post_init__(self):
        self.params.check(self.n)

    @classmethod
    def from_lambda(cls, n: int, lam: float) -> "CylinderMeasure":
        return cls(n, alphas_from_lambda(n, lam))

    def masses(self, codes: np.ndarray) -> np.ndarray:
        p = self.params
        return kernels.cylinder_masses(codes, p.alpha_plus, p.alpha_minus, p.alpha_0, p.alpha_1)


def measure_of_cylinder(m: CylinderMeasure, s: W.ReducedWord) -> float:
    p = m.params
    if s.is_identity:
        return 1.0
    code = s.code
    out = p.alpha_plus if code[0] > 0 else p.alpha_minus
    for prev, x in zip(code, code[1:]):
        out *= p.alpha_1 if (prev > 0) != (x > 0) else p.alpha_0
    return out


def rn_derivative(m: CylinderMeasure, j: int, omega_prefix: W.ReducedWord) -> float:
    """d mu(u_j^{-1} omega) / d mu(omega) on the cylinder of ``omega_prefix``."""
    p = m.params
    code = omega_prefix.code
    if not code:
        raise PrefixTooShort("an empty prefix does not select a branch")
    first = code[0]
    if first == j:
        if len(code) < 2:
            raise PrefixTooShort(f"prefix u_{j} alone does not select a branch")
        if code[1] > 0:
            return 1.0 / p.alpha_0
        return p.alpha_minus / (p.alpha_plus * p.alpha_1)
    if first > 0:
        return p.alpha_minus * p.alpha_1 / p.alpha_plus
    return p.alpha_0


@dataclass(frozen=True)
class Cocycle:
    n: int
    lam: float

    def __post_init__(self):
        if not 0 < self.lam < math.sqrt(self.n):
            raise LambdaOutOfRange(f"lambda must lie in (0, sqrt({self.n})), got {self.lam}")

    @property
    def branches(self):
        """(value on Omega(u_i) i != j, on Omega(u_i^-1), on Omega(u_j))."""
        n, lam = self.n, self.lam
        return (lam - n / lam) / (n - 1), lam / n, n / lam

    def measure(self) -> CylinderMeasure:
        return CylinderMeasure.from_lambda(self.n, self.lam)


def p_value(c: Cocycle, j: int, omega_prefix: W.ReducedWord) -> float:
    if not omega_prefix.code:
        raise PrefixTooShort("p_j needs the first letter of omega")
    other, neg, own = c.branches
    first = omega_prefix.code[0]
    if first == j:
        return own
    return other if first > 0 else neg


def _shift_prefix(g: W.ReducedWord, w: tuple) -> tuple:
    """Known prefix of g^{-1} omega for omega in Omega(w); empty if undetermined."""
    inv = tuple(-x for x in reversed(g.code))
    k = 0
    while k < len(inv) and k < len(w) and inv[-1 - k] == -w[k]:
        k += 1
    if k == len(w) and k < len(inv):
        # the unseen tail of omega may keep cancelling
        return ()
    return inv[: len(inv) - k] + w[k:]


def cocycle_value(c: Cocycle, s: W.ReducedWord, omega_prefix: W.ReducedWord) -> float:
    """P(s, omega) for omega in Omega(omega_prefix), by the chain rule.

    Uses P(u_j, .) = p_j and P(u_j^{-1}, eta) = 1 / p_j(u_j eta).
    """
    w = omega_prefix.code
    val = 1.0
    for i, x in enumerate(s.code):
        eta = _shift_prefix(W.ReducedWord(s.n, s.code[:i]), w)
        j = abs(x)
        if not eta:
            raise PrefixTooShort(f"prefix {W.format_word(omega_prefix)} too short for {W.format_word(s)}")
        if x > 0:
            val *= p_value(c, j, W.ReducedWord(s.n, eta[:1]))
        else:
            shifted = eta[1:] if eta[0] == -j else (j,)
            if not shifted:
                raise PrefixTooShort(f"prefix {W.format_word(omega_prefix)} too short for {W.format_word(s)}")
            val /= p_value(c, j, W.ReducedWord(s.n, shifted[:1]))
    return val


def boundary_state(c: Cocycle, s: W.ReducedWord, extra_depth: int = 0) -> float:
    """Integral of P(s, .) against the alpha measure, as an exact cylinder sum."""
    depth = len(s) + 1 + extra_depth
    if kernels.sphere_size(c.n, depth) > MAX_CYLINDERS:
        raise TooDeep(f"{kernels.sphere_size(c.n, depth)} cylinders at depth {depth}")
    cyl = W.sphere_array(c.n, depth)
    return boundary_integral(c, s, cyl)


def _children(n: int, codes: np.ndarray) -> np.ndarray:
    """Every one-letter reduced extension of each row."""
    letters = np.array(kernels.letter_order(n), dtype=codes.dtype)
    rows = np.repeat(codes, len(letters), axis=0)
    tail = np.tile(letters, codes.shape[0])
    keep = tail != -rows[:, -1]
    return np.concatenate([rows, tail[:, None]], axis=1)[keep]


def boundary_integral(c: Cocycle, s: W.ReducedWord, cylinders: np.ndarray, max_extra: int = 4) -> float:
    """Sum over the given full-depth cylinders of P(s, w) mu(Omega(w)).

    Cylinders on which the cocycle is not yet constant are split one letter
    deeper, up to ``max_extra`` times.
    """
    s_code = np.array(s.code, dtype=kernels.CODE_DTYPE)
    measure = c.measure()
    total = 0.0
    for _ in range(max_extra + 1):
        vals = kernels.cocycle_on_cylinders(s_code, cylinders, c.n, c.lam)
        bad = np.isnan(vals)
        good = ~bad
        total += float(np.sum(vals[good] * measure.masses(cylinders[good])))
        if not bad.any():
            return total
        cylinders = _children(c.n, cylinders[bad])
    raise PrefixTooShort("cylinders too shallow to determine the cocycle")


@dataclass
class BoundaryRow:
    word: str
    integral: float
    phi: float
    abs_err: float


def verify_boundary(n: int, lam: float, max_len: int) -> list:
    """Compare the cylinder integral with phi_{lambda/n} on every word up to max_len."""
    c = Cocycle(n, lam)
    spec = phi_a(n, lam / n)
    rows = []
    cyl_cache: dict = {}
    for k in range(max_len + 1):
        words = W.sphere_array(n, k)
        phis = evaluate_codes(spec, words).real
        depth = k + 1
        if depth not in cyl_cache:
            cyl_cache[depth] = W.sphere_array(n, depth)
        for r in range(words.shape[0]):
            s = W.ReducedWord(n, tuple(int(x) for x in words[r]))
            got = boundary_integral(c, s, cyl_cache[depth])
            rows.append(BoundaryRow(W.format_word(s), got, float(phis[r]), abs(got - float(phis[r]))))
    return rows


# -- measure experiment (n = 2) ------------------------------------------------------


def alpha_weights(n: int, params: AlphaParams, depth: int) -> dict:
    """Depth-``depth`` cylinder weights of an alpha-family measure."""
    codes = W.sphere_array(n, depth)
    mass = kernels.cylinder_masses(codes, params.alpha_plus, params.alpha_minus, params.alpha_0, params.alpha_1)
    return {tuple(int(x) for x in row): float(m) for row, m in zip(codes, mass)}


def _all_depths(weights: dict, n: int) -> dict:
    """Close a full-depth weight table under prefix sums."""
    table = dict(weights)
    depth = max(len(w) for w in weights)
    level = weights
    for _ in range(depth):
        up: dict = {}
        for w, m in level.items():
            up[w[:-1]] = up.get(w[:-1], 0.0) + m
        table.update(up)
        level = up
    return table


@dataclass
class ExperimentResult:
    ess_sup_diff: float
    ess_inf_sum: float
    witness_cylinders: dict = field(default_factory=dict)

    @property
    def supports_conjecture(self) -> bool:
        return self.ess_sup_diff >= self.ess_inf_sum

    def to_dict(self) -> dict:
        return {
            "ess_sup_diff": self.ess_sup_diff,
            "ess_inf_sum": self.ess_inf_sum,
            "witness_cylinders": self.witness_cylinders,
        }


def measure_experiment(weights: dict, n: int = 2) -> ExperimentResult:
    """Compare sup |sqrt(q_1) - sqrt(q_2)| with inf (sqrt(q_1) + sqrt(q_2)).

    ``weights`` maps every reduced word of one fixed depth ``d`` to a positive
    mass.  Coarser cylinders get masses by summation, and the quotients
    ``q_j(w) = mu(Omega(u_j^{-1} w)) / mu(Omega(w))`` are read off on the
    depth ``d - 1`` cylinders, the finest level at which both are available.
    """
    if n != 2:
        raise ValueError("the experiment is defined for two generators")
    depths = {len(w) for w in weights}
    if len(depths) != 1:
        raise ValueError("weights must all sit at one depth")
    d = depths.pop()
    if d < 3:
        raise ValueError("need depth at least 3")
    if min(weights.values()) <= 0:
        raise ValueError("weights must be positive")
    total = sum(weights.values())
    table = {w: m / total for w, m in _all_depths(weights, n).items()}
    best_diff, best_sum = -math.inf, math.inf
    arg_diff = arg_sum = ()
    for w in sorted(k for k in table if len(k) == d - 1):
        roots = []
        for j in (1, 2):
            shifted = _shift_prefix(W.ReducedWord(n, (j,)), w)
            roots.append(math.sqrt(table[shifted] / table[w]))
        diff = abs(roots[0] - roots[1])
        sm = roots[0] + roots[1]
        if diff > best_diff:
            best_diff, arg_diff = diff, w
        if sm < best_sum:
            best_sum, arg_sum = sm, w
    witnesses = {"sup_diff": " ".join(map(str, arg_diff)), "inf_sum": " ".join(map(str, arg_sum))}
    return ExperimentResult(best_diff, best_sum, witnesses)


def perturbed_weights(base: dict, rng: np.random.Generator, strength: float = 0.2) -> dict:
    """Multiply each weight by an independent factor drawn from [1 - strength, 1 + strength]."""
    keys = sorted(base)
    factors = rng.uniform(1 - strength, 1 + strength, size=len(keys))
    return {k: base[k] * f for k, f in zip(keys, factors)}
