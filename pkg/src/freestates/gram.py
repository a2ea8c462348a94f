"""Gram matrices [psi(s^{-1} t)] over finite word sets and PSD certificates."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from . import words as W
from .errors import DuplicateWord, NotHermitian, RankMismatch, TooLarge
from .states import StateKind, StateSpec, evaluate_stats, u1_length_state

PSD_TOL = 1e-9
HERMITIAN_TOL = 1e-12
MAX_REAL_DIM = 2000


@dataclass
class GramMatrix:
    words: list
    entries: np.ndarray
    spec: object

    @property
    def dim(self) -> int:
        return len(self.words)

    def hermitian_residual(self) -> float:
        if self.dim == 0:
            return 0.0
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))


@dataclass
class PsdCertificate:
    min_eigenvalue: float
    spectrum: np.ndarray
    is_psd: bool
    tolerance: float
    sweeps: int = 0
    reconstruction_error: float = 0.0

    def to_dict(self, head: int = 8) -> dict:
        return {
            "dim": int(len(self.spectrum)),
            "min_eig": float(self.min_eigenvalue),
            "is_psd": bool(self.is_psd),
            "tolerance": self.tolerance,
            "spectrum_head": [float(x) for x in self.spectrum[:head]],
        }


def build(spec, words: list) -> GramMatrix:
    """Gram matrix with (i, j) entry spec(words[i]^{-1} words[j])."""
    seen = set()
    for w in words:
        if w.n != spec.n:
            raise RankMismatch(f"rank {w.n} word, rank {spec.n} state")
        if w in seen:
            raise DuplicateWord(f"word {W.format_word(w)} appears twice")
        seen.add(w)
    codes, lengths = W.words_to_codes(words)
    stats = kernels.pair_stats(codes, lengths)
    entries = evaluate_stats(spec, *stats)
    if not np.any(entries.imag):
        entries = entries.real.copy()
    return GramMatrix(list(words), entries, spec)


def eigh(matrix: np.ndarray):
    """Spectrum of a Hermitian matrix via Jacobi on its real embedding.

    Real input is diagonalized directly.  Complex input goes through the
    2m x 2m realification, whose spectrum is that of the input with every
    eigenvalue doubled; one copy of each pair is returned.
    """
    matrix = np.asarray(matrix)
    if np.iscomplexobj(matrix) and np.any(matrix.imag):
        big = kernels.realify(matrix)
        if big.shape[0] > MAX_REAL_DIM:
            raise TooLarge(f"realified dimension {big.shape[0]} exceeds {MAX_REAL_DIM}")
        w, V, sweeps = kernels.jacobi_eigh(big)
        m = matrix.shape[0]
        # eigenvalues come in equal pairs; eigenvector (x; y) maps to x + i y
        keep, basis = _pick_half(V[:m, :] + 1j * V[m:, :])
        return w[keep], basis, sweeps
    real = np.asarray(matrix.real if np.iscomplexobj(matrix) else matrix, dtype=np.float64)
    if real.shape[0] > MAX_REAL_DIM:
        raise TooLarge(f"dimension {real.shape[0]} exceeds {MAX_REAL_DIM}")
    return kernels.jacobi_eigh(real)


def _pick_half(vecs):
    """Choose m of the 2m realified eigenpairs spanning the complex eigenspaces.

    Returns the chosen column indices and an orthonormal complex basis built
    from them by Gram-Schmidt (columns of distinct eigenvalues are already
    orthogonal, so this only straightens out degenerate eigenspaces).
    """
    m = vecs.shape[0]
    chosen: list = []
    basis = np.zeros((m, 0), dtype=complex)
    for idx in range(vecs.shape[1]):
        v = vecs[:, idx]
        if basis.shape[1]:
            v = v - basis @ (basis.conj().T @ v)
        nv = np.linalg.norm(v)
        if nv > 1e-6:
            chosen.append(idx)
            basis = np.concatenate([basis, (v / nv)[:, None]], axis=1)
        if len(chosen) == m:
            break
    return np.array(chosen, dtype=np.int64), basis


def psd_check(m, tolerance: float = PSD_TOL, self_check: bool = False) -> PsdCertificate:
    """Full spectrum and PSD flag (min eigenvalue >= -tolerance)."""
    entries = m.entries if isinstance(m, GramMatrix) else np.asarray(m)
    if entries.size and np.max(np.abs(entries - np.conj(entries).T)) > HERMITIAN_TOL:
        raise NotHermitian("matrix is not Hermitian within 1e-12")
    if entries.shape[0] == 0:
        return PsdCertificate(0.0, np.zeros(0), True, tolerance)
    w, V, sweeps = eigh(entries)
    recon = 0.0
    if self_check:
        back = (V * w) @ V.conj().T
        recon = float(np.linalg.norm(back - entries) / max(np.linalg.norm(entries), 1e-300))
    lo = float(w[0])
    return PsdCertificate(lo, w, lo >= -tolerance, tolerance, sweeps, recon)


def word_set(spec_n: int, text: str) -> list:
    """Resolve ``sphere:k``, ``positive:k``, ``ball:r`` or ``@file`` into words."""
    kind, _, arg = text.partition(":")
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            return [W.parse_word(line, spec_n) for line in fh if line.strip() and not line.startswith("#")]
    k = int(arg)
    if kind == "sphere":
        return W.enumerate_sphere(spec_n, k)
    if kind == "positive":
        return W.enumerate_sphere(spec_n, k, "positive_only")
    if kind == "ball":
        return W.ball(spec_n, k)
    raise ValueError(f"unknown word set {text!r}")


# -- the A_k family --------------------------------------------------------------


@dataclass
class AkReport:
    n: int
    a: float
    k: int
    row_sum_error: float = 0.0
    diagonal_block_error: float = 0.0
    off_block_error: float = 0.0
    transfer_error: float = 0.0
    min_eigenvalue_k: float = 0.0
    min_eigenvalue_k1: float = 0.0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def positive_gram(spec: StateSpec, k: int) -> GramMatrix:
    return build(spec, W.enumerate_sphere(spec.n, k, "positive_only"))


def verify_Ak_structure(spec: StateSpec, k: int, psd_tol: float = PSD_TOL) -> AkReport:
    """Row sums, block recursion and eigenvalue transfer between A_k and A_{k+1}."""
    if spec.kind is not StateKind.PhiA:
        raise ValueError("A_k structure is stated for PhiA states")
    if k < 1:
        raise ValueError("k must be at least 1")
    n, a = spec.n, spec.a
    if n ** (k + 1) > 10**4:
        raise TooLarge(f"n^(k+1) = {n ** (k + 1)} exceeds 10^4")
    b = spec.coupling
    rep = AkReport(n, a, k)
    Ak = positive_gram(spec, k).entries
    Ak1 = positive_gram(spec, k + 1).entries
    A1 = positive_gram(spec, 1).entries
    lam = (n * a * a) ** k

    rep.row_sum_error = float(np.max(np.abs(Ak.sum(axis=1) - lam)))
    if rep.row_sum_error > 1e-10:
        rep.failures.append("row sums")

    size = n**k
    off_val = a ** (2 * k) * b
    diag_err = 0.0
    off_err = 0.0
    for i in range(n):
        for j in range(n):
            block = Ak1[i * size : (i + 1) * size, j * size : (j + 1) * size]
            if i == j:
                diag_err = max(diag_err, float(np.max(np.abs(block - Ak))))
            else:
                off_err = max(off_err, float(np.max(np.abs(block - off_val))))
    rep.diagonal_block_error = diag_err
    rep.off_block_error = off_err
    if diag_err > 1e-12 or off_err > 1e-12:
        rep.failures.append("block structure")

    spec_k = psd_check(Ak, psd_tol).spectrum
    spec_k1 = psd_check(Ak1, psd_tol).spectrum
    spec_1 = lam * psd_check(A1, psd_tol).spectrum
    rep.min_eigenvalue_k = float(spec_k[0])
    rep.min_eigenvalue_k1 = float(spec_k1[0])
    pool = np.concatenate([spec_k, spec_1])
    rep.transfer_error = float(np.max(np.min(np.abs(spec_k1[:, None] - pool[None, :]), axis=1)))
    if rep.transfer_error > 1e-8:
        rep.failures.append("eigenvalue transfer")
    if rep.min_eigenvalue_k < -psd_tol or rep.min_eigenvalue_k1 < -psd_tol:
        rep.failures.append("positive semidefinite")
    return rep


# -- the integer group and the u_1-length state ------------------------------------


@dataclass
class IntegerPdReport:
    a: float
    K: int
    toeplitz_min_eig: float
    density_error: float
    u1_min_eig: float
    tolerance: float

    @property
    def ok(self) -> bool:
        return self.toeplitz_min_eig >= -self.tolerance and self.u1_min_eig >= -self.tolerance


def poisson_density(a: float, theta):
    """(1 - a^2) / (1 + a^2 - 2 a cos theta)."""
    return (1 - a * a) / (1 + a * a - 2 * a * np.cos(theta))


def verify_integer_pd(a: float, K: int, n: int = 2, radius: int = 3, tolerance: float = PSD_TOL) -> IntegerPdReport:
    """k -> a^|k| on {-K..K} and s -> a^{|s|_1} on a ball are both PSD."""
    if not -1 < a < 1:
        raise ValueError("need -1 < a < 1")
    idx = np.arange(-K, K + 1)
    toeplitz = np.power(a, np.abs(idx[:, None] - idx[None, :]))
    t_min = psd_check(toeplitz, tolerance).min_eigenvalue
    # the Fourier series 1 + sum_k a^k 2 cos(k theta) against its closed form
    theta = np.linspace(0.0, 2 * np.pi, 65)
    terms = 200 if abs(a) < 0.9 else 2000
    ks = np.arange(1, terms + 1)
    series = 1 + np.sum(np.power(a, ks)[:, None] * 2 * np.cos(np.outer(ks, theta)), axis=0)
    dens_err = float(np.max(np.abs(series - poisson_density(a, theta))))
    g = build(u1_length_state(n, a), W.ball(n, radius))
    u_min = psd_check(g, tolerance).min_eigenvalue
    return IntegerPdReport(a, K, t_min, dens_err, u_min, tolerance)
