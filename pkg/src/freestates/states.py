"""State families on F_n, their evaluation, classification and growth series.

Every family here depends on a word only through ``(length, gamma, u1_length,
tau)``, so evaluation is written once over stat arrays (:func:`evaluate_stats`)
and the scalar :func:`evaluate` is the one-word case.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import words as W
from .algebra import AlgebraElement, adjoint, convolve, polynomial_in_u1
from .errors import RankMismatch, SphereTooLarge, WeightsNotConvex, ZeroNotOnCircle, NotAZero

BOUNDARY_TOL = 1e-12
MAX_SPHERE = 10**7


class StateKind(str, enum.Enum):
    PhiA = "PhiA"
    PsiAB = "PsiAB"
    U1Length = "U1Length"
    ChiZ = "ChiZ"
    SqrtNEigen = "SqrtNEigen"


@dataclass(frozen=True)
class StateSpec:
    """A parameterized state.  For ``PhiA`` the ``b`` field is ignored."""

    kind: StateKind
    n: int
    a: float = 0.0
    b: float = 0.0
    theta: float = 0.0
    z: complex = 1.0 + 0.0j

    def __post_init__(self):
        object.__setattr__(self, "kind", StateKind(self.kind))
        if self.n < 2:
            raise ValueError("rank must be at least 2")
        if self.kind is StateKind.PhiA:
            if not -1.0 <= self.a <= 1.0:
                raise ValueError(f"PhiA needs -1 <= a <= 1, got {self.a}")
            if self.a < 0:
                # a^m == (-1)^tau |a|^m because m and tau have the parity of |s|
                object.__setattr__(self, "a", -self.a)
                object.__setattr__(self, "theta", self.theta + math.pi)
        elif self.kind is StateKind.ChiZ:
            z = complex(self.z)
            if abs(abs(z) - 1.0) > 1e-12:
                raise ZeroNotOnCircle(f"|z| must be 1, got {abs(z)}")
            object.__setattr__(self, "z", z)

    @property
    def coupling(self) -> float:
        """The value at u_i^{-1} u_j (i != j), i.e. the second parameter b."""
        if self.kind is StateKind.PhiA:
            return (self.n * self.a**2 - 1.0) / (self.n - 1)
        if self.kind is StateKind.SqrtNEigen:
            return 0.0
        return self.b

    @property
    def eigenvalue(self) -> complex:
        """n a e^{i theta} for PhiA: the eigenvalue of right convolution by X."""
        return self.n * self.a * cmath.exp(1j * self.theta)

    def to_dict(self) -> dict:
        d = {"kind": self.kind.value, "n": self.n}
        if self.kind in (StateKind.PhiA, StateKind.PsiAB, StateKind.U1Length):
            d["a"] = self.a
        if self.kind is StateKind.PsiAB:
            d["b"] = self.b
        if self.kind is StateKind.PhiA:
            d["theta"] = self.theta
        if self.kind is StateKind.ChiZ:
            d["z"] = [self.z.real, self.z.imag]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "StateSpec":
        z = d.get("z", 1.0)
        if isinstance(z, (list, tuple)):
            z = complex(z[0], z[1])
        return cls(
            StateKind(d["kind"]),
            int(d["n"]),
            a=float(d.get("a", 0.0)),
            b=float(d.get("b", 0.0)),
            theta=float(d.get("theta", 0.0)),
            z=complex(z),
        )


def phi_a(n: int, a: float, theta: float = 0.0) -> StateSpec:
    return StateSpec(StateKind.PhiA, n, a=a, theta=theta)


def psi_ab(n: int, a: float, b: float) -> StateSpec:
    return StateSpec(StateKind.PsiAB, n, a=a, b=b)


def u1_length_state(n: int, a: float) -> StateSpec:
    return StateSpec(StateKind.U1Length, n, a=a)


def chi_z(n: int, z: complex) -> StateSpec:
    return StateSpec(StateKind.ChiZ, n, z=z)


def sqrt_n_eigen(n: int) -> StateSpec:
    return StateSpec(StateKind.SqrtNEigen, n)


@dataclass(frozen=True)
class StateMixture:
    """Convex combination sum_j weight_j * state_j."""

    n: int
    components: tuple

    def __post_init__(self):
        for _, spec in self.components:
            if spec.n != self.n:
                raise RankMismatch("mixture components must share a rank")


# -- evaluation ---------------------------------------------------------------


def evaluate_stats(spec, length, gamma, u1, tau) -> np.ndarray:
    """Vectorized evaluation from word statistics; returns complex values."""
    if isinstance(spec, StateMixture):
        out = np.zeros(np.shape(length), dtype=complex)
        for w, comp in spec.components:
            out = out + w * evaluate_stats(comp, length, gamma, u1, tau)
        return out
    length = np.asarray(length, dtype=np.int64)
    gamma = np.asarray(gamma, dtype=np.int64)
    u1 = np.asarray(u1, dtype=np.int64)
    tau = np.asarray(tau, dtype=np.int64)
    kind = spec.kind
    if kind in (StateKind.PhiA, StateKind.PsiAB):
        b = spec.coupling
        # numpy gives 0.0 ** 0 == 1, the convention needed at a = 0 and b = 0
        val = np.power(spec.a, length - 2 * gamma) * np.power(b, gamma)
        val = val.astype(complex)
        if kind is StateKind.PhiA and spec.theta != 0.0:
            val = val * np.exp(1j * spec.theta * tau)
        return val
    if kind is StateKind.U1Length:
        return np.power(spec.a, u1).astype(complex)
    if kind is StateKind.ChiZ:
        in_g1 = u1 == length
        return np.where(in_g1, np.power(complex(spec.z), tau), 0.0).astype(complex)
    if kind is StateKind.SqrtNEigen:
        return np.where(gamma == 0, np.power(float(spec.n), -length / 2.0), 0.0).astype(complex)
    raise ValueError(f"unknown state kind {kind}")


def _rank_of(state) -> int:
    return state.n


def evaluate(state, s: W.ReducedWord) -> complex:
    """Value of the state at a single reduced word."""
    if s.n != _rank_of(state):
        raise RankMismatch(f"rank {s.n} word, rank {_rank_of(state)} state")
    if isinstance(state, StateMixture):
        return sum((w * evaluate(c, s) for w, c in state.components), 0j)
    st = W.stats(s)
    kind = state.kind
    if kind in (StateKind.PhiA, StateKind.PsiAB):
        val = complex(state.a ** (st.length - 2 * st.gamma) * state.coupling ** st.gamma)
        if kind is StateKind.PhiA and state.theta != 0.0:
            val *= cmath.exp(1j * st.tau * state.theta)
        return val
    if kind is StateKind.U1Length:
        return complex(state.a ** st.u1_length)
    if kind is StateKind.ChiZ:
        if st.u1_length != st.length:
            return 0j
        return complex(state.z) ** st.tau
    if kind is StateKind.SqrtNEigen:
        return complex(state.n ** (-st.length / 2.0)) if st.gamma == 0 else 0j
    raise ValueError(f"unknown state kind {kind}")


def evaluate_codes(state, codes, lengths=None) -> np.ndarray:
    return evaluate_stats(state, *W.batch_stats(codes, lengths))


def apply_linear(state, x: AlgebraElement) -> complex:
    """The state extended linearly to the group algebra."""
    if x.rank != _rank_of(state):
        raise RankMismatch(f"rank {x.rank} element, rank {_rank_of(state)} state")
    items = x.items()
    if not items:
        return 0j
    codes, lengths = W.words_to_codes([w for w, _ in items])
    coeffs = np.array([c for _, c in items], dtype=complex)
    return complex(np.sum(coeffs * evaluate_codes(state, codes, lengths)))


def eigen_relation_residual(spec: StateSpec, depth: int) -> float:
    """max over |s| <= depth of |sum_j phi(s u_j) - n a e^{i theta} phi(s)|."""
    if spec.kind is not StateKind.PhiA:
        raise ValueError("eigen relation applies to PhiA states")
    lam = spec.eigenvalue
    worst = 0.0
    for k in range(depth + 1):
        codes = W.sphere_array(spec.n, k)
        lengths = np.full(codes.shape[0], k, dtype=np.int64)
        base = evaluate_codes(spec, codes, lengths)
        total = np.zeros_like(base)
        for j in range(1, spec.n + 1):
            c2, l2 = W.right_multiply_letter(codes, lengths, j)
            total = total + evaluate_codes(spec, c2, l2)
        worst = max(worst, float(np.max(np.abs(total - lam * base))))
    return worst


def left_kernel_residual(state, y: AlgebraElement) -> float:
    """state(y* y); zero exactly when y lies in the state's left kernel."""
    return apply_linear(state, convolve(adjoint(y), y)).real


# -- classification -----------------------------------------------------------


@dataclass(frozen=True)
class Classification:
    positive_definite: bool
    reduced: bool
    ell2: bool
    pure_family_member: bool

    def to_dict(self) -> dict:
        return {
            "positive_definite": self.positive_definite,
            "reduced": self.reduced,
            "ell2": self.ell2,
            "pure_family_member": self.pure_family_member,
        }


def pd_lower_bound(n: int, a: float) -> float:
    return (n * a * a - 1.0) / (n - 1)


def reduced_upper_bound(n: int, a: float) -> float:
    return (1.0 - n * a * a) / (n - 1)


def classify(spec: StateSpec, tol: float = BOUNDARY_TOL) -> Classification:
    """Positive-definiteness, reducedness and square-summability of psi_{a,b}."""
    if spec.kind is StateKind.PhiA:
        sign = math.cos(spec.theta)
        if abs(abs(sign) - 1.0) > 1e-12:
            raise ValueError("only real PhiA states (theta = 0 or pi) belong to the psi family")
        spec = psi_ab(spec.n, math.copysign(spec.a, sign), spec.coupling)
    if spec.kind is not StateKind.PsiAB:
        raise ValueError("classify expects a PsiAB (or PhiA) state")
    n, a, b = spec.n, spec.a, spec.b
    pd = -1.0 - tol <= a <= 1.0 + tol and pd_lower_bound(n, a) - tol <= b <= 1.0 + tol
    reduced = pd and b <= reduced_upper_bound(n, a) + tol
    ell2 = reduced and abs(b) < reduced_upper_bound(n, a) - tol
    pure = abs(b - pd_lower_bound(n, a)) <= tol and pd
    return Classification(pd, reduced, ell2, pure)


# -- growth series -------------------------------------------------------------


@dataclass
class GrowthSeries:
    """Sphere sums of |psi|^2; index k runs 0..K.  A_0 and B_0 are undefined (nan)."""

    C: np.ndarray
    A: np.ndarray
    B: np.ndarray
    lambda_plus: float
    lambda_minus: float


def growth_eigenvalues(n: int, a: float, b: float):
    return n * a * a + (n - 1) * b, n * a * a - (n - 1) * b


def _psi_params(spec: StateSpec):
    if spec.kind is StateKind.PhiA and spec.theta == 0.0:
        return spec.n, spec.a, spec.coupling
    if spec.kind is not StateKind.PsiAB:
        raise ValueError("growth series are defined for PsiAB states")
    return spec.n, spec.a, spec.b


def growth_series_closed_form(spec: StateSpec, K: int) -> GrowthSeries:
    if K < 1:
        raise ValueError("K must be at least 1")
    n, a, b = _psi_params(spec)
    lp, lm = growth_eigenvalues(n, a, b)
    A = np.full(K + 1, np.nan)
    B = np.full(K + 1, np.nan)
    a2 = a * a
    for k in range(1, K + 1):
        if b == 0.0:
            lam = n * a2
            A[k] = lam**k
            B[k] = (k * n - k + 1) / n * lam**k
        else:
            A[k] = n / 2 * (a2 + b) * lp ** (k - 1) + n / 2 * (a2 - b) * lm ** (k - 1)
            # a^4/b (lp^m - lm^m) rewritten as a divided difference, stable as b -> 0
            m = k - 1
            diff = 2 * (n - 1) * sum(lp**i * lm ** (m - 1 - i) for i in range(m))
            B[k] = n / 2 * a2 * (lp**m + lm**m) + n / 2 * a2 * a2 * diff
    C = A + B
    C[0] = 1.0
    return GrowthSeries(C, A, B, lp, lm)


def growth_series_brute(spec: StateSpec, K: int) -> GrowthSeries:
    n, a, b = _psi_params(spec)
    if W.kernels.sphere_size(n, K) > MAX_SPHERE:
        raise SphereTooLarge(f"sphere of radius {K} in F_{n} exceeds {MAX_SPHERE} words")
    psi = psi_ab(n, a, b)
    A = np.full(K + 1, np.nan)
    B = np.full(K + 1, np.nan)
    for k in range(1, K + 1):
        codes = W.sphere_array(n, k)
        sq = np.abs(evaluate_codes(psi, codes)) ** 2
        pos = codes[:, -1] > 0
        A[k] = np.sum(sq[pos])
        B[k] = np.sum(sq[~pos])
    C = A + B
    C[0] = 1.0
    lp, lm = growth_eigenvalues(n, a, b)
    return GrowthSeries(C, A, B, lp, lm)


# -- chi_z mixtures and polynomial kernels --------------------------------------


@dataclass
class PolyReport:
    residual: float
    table: list = field(default_factory=list)
    max_table_error: float = 0.0

    @property
    def ok(self) -> bool:
        return abs(self.residual) <= 1e-10 and self.max_table_error <= 1e-10


def poly_kernel_decomposition(coeffs: Sequence[complex], weights: Sequence, n: int = 2) -> PolyReport:
    """Check that sum_j alpha_j chi_{z_j} annihilates |p(u_1)|^2.

    ``coeffs`` lists p's coefficients in ascending powers; ``weights`` is a
    sequence of ``(z_j, alpha_j)`` pairs.
    """
    coeffs = [complex(c) for c in coeffs]
    total = 0.0
    comps = []
    for z, alpha in weights:
        z = complex(z)
        if abs(abs(z) - 1.0) > 1e-12:
            raise ZeroNotOnCircle(f"support point {z} is not on the unit circle")
        pz = sum(c * z**k for k, c in enumerate(coeffs))
        if abs(pz) > 1e-9:
            raise NotAZero(f"p({z}) = {pz} is not zero")
        if not alpha > 0:
            raise WeightsNotConvex(f"weight {alpha} is not positive")
        total += alpha
        comps.append((float(alpha), chi_z(n, z)))
    if abs(total - 1.0) > 1e-12:
        raise WeightsNotConvex(f"weights sum to {total}, not 1")
    mix = StateMixture(n, tuple(comps))
    residual = left_kernel_residual(mix, polynomial_in_u1(coeffs, n))
    table = []
    worst = 0.0
    for k in range(-10, 11):
        got = evaluate(mix, W.generator(n, 1, k))
        want = sum(alpha * complex(z) ** k for z, alpha in weights)
        worst = max(worst, abs(got - want))
        table.append({"k": k, "psi": got, "expected": want})
    return PolyReport(residual, table, worst)
