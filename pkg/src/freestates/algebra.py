"""Exact arithmetic in the complex group algebra of F_n and its action on l^2.

Elements are finitely supported ``{ReducedWord: complex}`` maps.  Each element
also carries a positive scalar tag ``scale = sqrt(scale_sq)`` with
``scale_sq`` a :class:`~fractions.Fraction`; this lets ``T = X / sqrt(n)`` be
multiplied symbolically so that ``T T*`` picks up the exact factor ``1/n``.
Coefficients stay integral through convolution of integral inputs and the tag
is applied once, when values are read out.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import RankMismatch
from .words import ReducedWord, format_word, generator, identity, multiply, inverse, parse_word

PRUNE = 1e-15


def _prune(terms: Mapping) -> dict:
    return {w: complex(c) for w, c in terms.items() if abs(c) >= PRUNE}


def _exact_sqrt(q: Fraction):
    """sqrt(q) as a Fraction when exact, else as a float."""
    num, den = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if num * num == q.numerator and den * den == q.denominator:
        return Fraction(num, den)
    return math.sqrt(q)


@dataclass(frozen=True)
class AlgebraElement:
    rank: int
    terms: dict = field(default_factory=dict)
    scale_sq: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "terms", _prune(self.terms))
        for w in self.terms:
            if w.n != self.rank:
                raise RankMismatch(f"rank {w.n} word in rank {self.rank} element")

    @property
    def scale(self):
        return _exact_sqrt(self.scale_sq)

    def materialize(self) -> "AlgebraElement":
        """Fold the scale tag into the coefficients."""
        if self.scale_sq == 1:
            return self
        k = self.scale
        return AlgebraElement(self.rank, {w: complex(c * k) for w, c in self.terms.items()})

    def coefficient(self, s: ReducedWord) -> complex:
        return complex(self.terms.get(s, 0.0) * self.scale)

    def support(self) -> list:
        return sorted(self.terms, key=lambda w: (len(w), w.code))

    def items(self):
        m = self.materialize()
        return [(w, m.terms[w]) for w in m.support()]

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            other = scalar(self.rank, other)
        _check(self.rank, other.rank)
        if self.scale_sq == other.scale_sq:
            out = dict(self.terms)
            for w, c in other.terms.items():
                out[w] = out.get(w, 0.0) + c
            return AlgebraElement(self.rank, out, self.scale_sq)
        return self.materialize() + other.materialize()

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.rank, {w: -c for w, c in self.terms.items()}, self.scale_sq)

    def __sub__(self, other):
        if not isinstance(other, AlgebraElement):
            other = scalar(self.rank, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return convolve(self, other)
        return AlgebraElement(self.rank, {w: c * other for w, c in self.terms.items()}, self.scale_sq)

    def __rmul__(self, other):
        return AlgebraElement(self.rank, {w: other * c for w, c in self.terms.items()}, self.scale_sq)

    def __pow__(self, k: int):
        out = scalar(self.rank, 1.0)
        for _ in range(k):
            out = convolve(out, self)
        return out

    def close_to(self, other: "AlgebraElement", tol: float = 1e-12) -> bool:
        return max_abs_diff(self, other) <= tol


@dataclass(frozen=True)
class L2Vector:
    rank: int
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "entries", _prune(self.entries))

    def __add__(self, other: "L2Vector") -> "L2Vector":
        _check(self.rank, other.rank)
        out = dict(self.entries)
        for w, c in other.entries.items():
            out[w] = out.get(w, 0.0) + c
        return L2Vector(self.rank, out)

    def __sub__(self, other: "L2Vector") -> "L2Vector":
        return self + L2Vector(other.rank, {w: -c for w, c in other.entries.items()})

    def __rmul__(self, c):
        return L2Vector(self.rank, {w: c * v for w, v in self.entries.items()})

    def inner(self, other: "L2Vector") -> complex:
        """<self, other>, linear in the first slot."""
        _check(self.rank, other.rank)
        return sum((c * other.entries[w].conjugate() for w, c in self.entries.items() if w in other.entries), 0j)

    def norm_sq(self) -> float:
        return sum(abs(c) ** 2 for c in self.entries.values())

    def max_abs(self) -> float:
        return max((abs(c) for c in self.entries.values()), default=0.0)


class HalfSpace(enum.Enum):
    """S+ = words starting with a positive letter; S- = the rest, identity included."""

    Splus = "Splus"
    Sminus = "Sminus"

    def contains(self, s: ReducedWord) -> bool:
        plus = s.first_sign > 0
        return plus if self is HalfSpace.Splus else not plus


def _check(a: int, b: int) -> None:
    if a != b:
        raise RankMismatch(f"rank {a} combined with rank {b}")


# -- constructors ------------------------------------------------------------


def delta(s: ReducedWord, coeff: complex = 1.0) -> AlgebraElement:
    return AlgebraElement(s.n, {s: coeff})


def scalar(n: int, c: complex) -> AlgebraElement:
    return AlgebraElement(n, {identity(n): c})


def generator_sum(n: int) -> AlgebraElement:
    """X = u_1 + ... + u_n."""
    return AlgebraElement(n, {generator(n, i): 1.0 for i in range(1, n + 1)})


def normalized_sum(n: int) -> AlgebraElement:
    """T = X / sqrt(n), with the 1/sqrt(n) carried as a tag."""
    return AlgebraElement(n, generator_sum(n).terms, Fraction(1, n))


def polynomial_in_u1(coeffs: Iterable[complex], n: int) -> AlgebraElement:
    """p(u_1) for p with coefficients given in ascending powers."""
    return AlgebraElement(n, {generator(n, 1, k): c for k, c in enumerate(coeffs)})


def basis_vector(s: ReducedWord, coeff: complex = 1.0) -> L2Vector:
    return L2Vector(s.n, {s: coeff})


# -- operations --------------------------------------------------------------


def convolve(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """(x y)(s) = sum_t x(t) y(t^{-1} s)."""
    _check(x.rank, y.rank)
    out: dict = {}
    for t, a in x.terms.items():
        for r, b in y.terms.items():
            w = multiply(t, r)
            out[w] = out.get(w, 0.0) + a * b
    return AlgebraElement(x.rank, out, x.scale_sq * y.scale_sq)


def adjoint(x: AlgebraElement) -> AlgebraElement:
    """x*(s) = conj(x(s^{-1}))."""
    return AlgebraElement(x.rank, {inverse(w): c.conjugate() for w, c in x.terms.items()}, x.scale_sq)


def act(x: AlgebraElement, v: L2Vector) -> L2Vector:
    """Left regular action: (x v)(s) = sum_t x(t) v(t^{-1} s)."""
    _check(x.rank, v.rank)
    out: dict = {}
    for t, a in x.terms.items():
        for r, b in v.entries.items():
            w = multiply(t, r)
            out[w] = out.get(w, 0.0) + a * b
    k = x.scale
    if k != 1:
        out = {w: c * k for w, c in out.items()}
    return L2Vector(x.rank, out)


def project(side: HalfSpace, v: L2Vector) -> L2Vector:
    return L2Vector(v.rank, {w: c for w, c in v.entries.items() if side.contains(w)})


def max_abs_diff(x: AlgebraElement, y: AlgebraElement) -> float:
    xm, ym = x.materialize(), y.materialize()
    keys = set(xm.terms) | set(ym.terms)
    return max((abs(xm.terms.get(w, 0.0) - ym.terms.get(w, 0.0)) for w in keys), default=0.0)


@dataclass
class ObsReport:
    n: int
    depth: int
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"n": self.n, "depth": self.depth, "checked": self.checked, "violations": self.violations}


def verify_obs_identities(n: int, depth: int, tol: float = 1e-12) -> ObsReport:
    """Check QTT*Q = Q and P u_i^{-1} u_j T* Q = 0 on every basis vector of length <= depth."""
    from .words import ball

    T = normalized_sum(n)
    Ts = adjoint(T)
    TTs = convolve(T, Ts)
    P, Q = HalfSpace.Splus, HalfSpace.Sminus
    shifts = {
        (i, j): delta(multiply(generator(n, i, -1), generator(n, j)))
        for i in range(1, n + 1)
        for j in range(1, n + 1)
        if i != j
    }
    report = ObsReport(n, depth)
    for s in ball(n, depth):
        qd = project(Q, basis_vector(s))
        lhs = project(Q, act(TTs, qd))
        err = (lhs - qd).max_abs()
        report.checked += 1
        if err > tol:
            report.violations.append({"identity": "QTT*Q=Q", "word": format_word(s), "residual": err})
        tsq = act(Ts, qd)
        for (i, j), shift in shifts.items():
            err = project(P, act(shift, tsq)).max_abs()
            report.checked += 1
            if err > tol:
                report.violations.append(
                    {"identity": "P u_i^-1 u_j T* Q=0", "word": format_word(s), "i": i, "j": j, "residual": err}
                )
    return report


def chi_limit_average(n: int, s: ReducedWord, k: int) -> complex:
    """(1/k) <s xi_k, xi_k> where xi_k is the indicator of {u_1, ..., u_1^k}."""
    if k < 1:
        raise ValueError("k must be positive")
    xi = L2Vector(n, {generator(n, 1, m): 1.0 for m in range(1, k + 1)})
    return act(delta(s), xi).inner(xi) / k


# -- text / JSON forms -------------------------------------------------------


def format_element(x: AlgebraElement) -> str:
    """One ``<re> <im> : <word>`` line per support word."""
    return "".join(f"{c.real!r} {c.imag!r} : {format_word(w)}\n" for w, c in x.items())


def parse_element(text: str, n: int) -> AlgebraElement:
    terms: dict = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        coeff, _, word = line.partition(":")
        re_, im_ = coeff.split()
        w = parse_word(word, n)
        terms[w] = terms.get(w, 0.0) + complex(float(re_), float(im_))
    return AlgebraElement(n, terms)


def element_to_json(x: AlgebraElement) -> str:
    return json.dumps(
        {"rank": x.rank, "terms": [{"re": c.real, "im": c.imag, "word": format_word(w)} for w, c in x.items()]}
    )


def element_from_json(text: str) -> AlgebraElement:
    data = json.loads(text)
    n = int(data["rank"])
    terms: dict = {}
    for t in data["terms"]:
        w = parse_word(t["word"], n)
        terms[w] = terms.get(w, 0.0) + complex(t["re"], t.get("im", 0.0))
    return AlgebraElement(n, terms)
