"""The acceptance suite: nine numbered checks and the report they produce."""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from . import algebra as A
from . import boundary as B
from . import gram as G
from . import kernels
from . import states as S
from . import words as W
from ._backend import backend_name

SCHEMA = "freestates.report/1"

PASS, FAIL, REPORTED = "pass", "fail", "reported"


@dataclass
class RunConfig:
    n: int | None = None
    seed: int = 42
    threads: int = 0
    psd_tol: float = G.PSD_TOL
    identity_tol: float = 1e-12
    series_tol: float = 1e-9
    boundary_tol: float = 1e-10
    eigen_depth: int = 6
    obs_depth: int = 4
    boundary_max_len: int = 5
    word_depth: int = 8
    output: str = "json"
    timings: bool = False

    def __post_init__(self):
        for name in ("psd_tol", "identity_tol", "series_tol", "boundary_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.n is not None and self.n not in (2, 3):
            raise ValueError("the suite sweeps ranks 2 and 3 only")
        if self.threads < 0:
            raise ValueError("threads must be >= 0")
        if self.output not in ("json", "csv", "human"):
            raise ValueError(f"unknown output format {self.output!r}")

    def ranks(self, default=(2, 3)) -> tuple:
        return default if self.n is None else (self.n,)

    @classmethod
    def from_mapping(cls, values: dict) -> "RunConfig":
        """Build from string values, as read from a key=value file."""
        kinds = {f.name: f.type for f in fields(cls)}
        out = {}
        for key, raw in values.items():
            key = key.replace("-", "_")
            if key not in kinds:
                raise ValueError(f"unknown config key {key!r}")
            t = str(kinds[key])
            if key == "n":
                out[key] = None if raw in ("", "none", "None") else int(raw)
            elif "bool" in t:
                out[key] = str(raw).lower() in ("1", "true", "yes", "on")
            elif "int" in t:
                out[key] = int(raw)
            elif "float" in t:
                out[key] = float(raw)
            else:
                out[key] = str(raw)
        return cls(**out)


def read_config_file(path: str) -> dict:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, val = line.partition("=")
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            values[key.strip()] = val.strip()
    return values


@dataclass
class Check:
    id: int
    title: str
    exercises: str
    status: str
    payload: dict
    witness: dict = field(default_factory=dict)
    budget_s: float | None = None
    wall_s: float = 0.0

    def to_dict(self, timings: bool = False) -> dict:
        d = {
            "id": self.id,
            "title": self.title,
            "exercises": self.exercises,
            "status": self.status,
            "payload": self.payload,
        }
        if self.witness:
            d["witness"] = self.witness
        if timings:
            d["wall_s"] = self.wall_s
            d["budget_s"] = self.budget_s
        return d


def _num(value, tolerance) -> dict:
    return {"value": float(value), "tolerance": tolerance}


def _status(ok: bool) -> str:
    return PASS if ok else FAIL


A_GRID_LABELS = ("0", "0.25", "1/sqrt(n)", "0.75", "1")


def a_grid(n: int) -> list:
    return [0.0, 0.25, 1 / math.sqrt(n), 0.75, 1.0]


# -- 1 ---------------------------------------------------------------------------


def check_eigen(cfg: RunConfig) -> Check:
    worst, arg = 0.0, {}
    for n in cfg.ranks():
        for a in a_grid(n):
            for theta in (0.0, math.pi / 3, math.pi):
                r = S.eigen_relation_residual(S.phi_a(n, a, theta), cfg.eigen_depth)
                if r >= worst:
                    worst, arg = r, {"n": n, "a": a, "theta": theta}
    ok = worst <= cfg.identity_tol
    return Check(
        1,
        "eigenstate identity",
        "sum_j phi(s u_j) = n a e^{i theta} phi(s)",
        _status(ok),
        {"max_residual": _num(worst, cfg.identity_tol), "depth": cfg.eigen_depth, "worst_at": arg},
        {} if ok else arg,
        5.0,
    )


# -- 2 ---------------------------------------------------------------------------


def check_ak(cfg: RunConfig) -> Check:
    kmax = {2: 4, 3: 3}
    rows = []
    bad = []
    for n in cfg.ranks():
        for a in a_grid(n):
            for k in range(1, kmax[n] + 1):
                rep = G.verify_Ak_structure(S.phi_a(n, a), k, cfg.psd_tol)
                rows.append(rep)
                if not rep.ok:
                    bad.append({"n": n, "a": a, "k": k, "failures": rep.failures})
    payload = {
        "cases": len(rows),
        "min_eigenvalue": _num(min(min(r.min_eigenvalue_k, r.min_eigenvalue_k1) for r in rows), -cfg.psd_tol),
        "row_sum_error": _num(max(r.row_sum_error for r in rows), 1e-10),
        "block_error": _num(max(max(r.diagonal_block_error, r.off_block_error) for r in rows), 1e-12),
        "transfer_error": _num(max(r.transfer_error for r in rows), 1e-8),
    }
    return Check(
        2,
        "positive words Gram matrices A_k",
        "PSD of A_k, row sums (n a^2)^k, block recursion, eigenvalue transfer",
        _status(not bad),
        payload,
        {"failing": bad} if bad else {},
        30.0,
    )


# -- 3 ---------------------------------------------------------------------------


def parabola_distance(n: int, a: float, b: float) -> float:
    """Distance from (a, b) to the arc b = (n x^2 - 1)/(n - 1), |x| <= 1."""
    c = n / (n - 1)
    d = 1 / (n - 1)
    # stationary points of (x - a)^2 + (c x^2 - d - b)^2
    roots = np.roots([2 * c * c, 0.0, 1 - 2 * c * (d + b), -a])
    xs = [r.real for r in roots if abs(r.imag) < 1e-9 and -1 <= r.real <= 1] + [-1.0, 1.0]
    return min(math.hypot(x - a, c * x * x - d - b) for x in xs)


def check_psi_region(cfg: RunConfig, n: int = 2, radius: int = 3, margin: float = 0.05) -> Check:
    words = W.ball(n, radius)
    grid = np.linspace(-1.0, 1.0, 21)
    inside_bad, outside_bad, near = [], [], 0
    inside = outside = 0
    min_inside = math.inf
    for a in grid:
        for b in grid:
            a, b = float(a), float(b)
            region = S.classify(S.psi_ab(n, a, b)).positive_definite
            if not region and parabola_distance(n, a, b) < margin:
                near += 1
                continue
            cert = G.psd_check(G.build(S.psi_ab(n, a, b), words), cfg.psd_tol)
            if region:
                inside += 1
                min_inside = min(min_inside, cert.min_eigenvalue)
                if not cert.is_psd:
                    inside_bad.append({"a": a, "b": b, "min_eig": cert.min_eigenvalue})
            else:
                outside += 1
                if cert.is_psd:
                    outside_bad.append({"a": a, "b": b, "min_eig": cert.min_eigenvalue})
    ok = not inside_bad and not outside_bad
    return Check(
        3,
        "psi_{a,b} positive-definiteness region",
        "psi_{a,b} is PD iff |a| <= 1 and (n a^2 - 1)/(n - 1) <= b <= 1",
        _status(ok),
        {
            "n": n,
            "ball_radius": radius,
            "inside_points": inside,
            "exterior_points": outside,
            "skipped_near_boundary": near,
            "min_eig_inside": _num(min_inside, -cfg.psd_tol),
            "exterior_margin": margin,
        },
        {"inside_not_psd": inside_bad, "exterior_psd": outside_bad} if not ok else {},
        60.0,
    )


# -- 4 ---------------------------------------------------------------------------

SERIES_CASES = {
    2: [(0.3, 0.2), (0.6, 0.5), (0.5, -0.4), (0.5, 0.0), (0.8, 0.0), (0.0, -0.5)],
    3: [(0.3, 0.1), (0.5, 0.6), (0.4, -0.2), (0.5, 0.0), (0.7, 0.0), (0.0, -0.4)],
}


def _rel_err(x: np.ndarray, y: np.ndarray) -> float:
    den = np.where(y == 0, 1.0, np.abs(y))
    return float(np.max(np.abs(x - y) / den))


def check_series(cfg: RunConfig, K: int = 8) -> Check:
    worst, arg = 0.0, {}
    flag_bad = []
    for n in cfg.ranks():
        for a, b in SERIES_CASES[n]:
            spec = S.psi_ab(n, a, b)
            brute = S.growth_series_brute(spec, K)
            closed = S.growth_series_closed_form(spec, K)
            err = _rel_err(brute.C, closed.C)
            if err >= worst:
                worst, arg = err, {"n": n, "a": a, "b": b}
            reduced = S.classify(spec).reduced
            if reduced != (closed.lambda_plus <= 1.0):
                flag_bad.append({"n": n, "a": a, "b": b, "lambda_plus": closed.lambda_plus, "reduced": reduced})
    ok = worst < cfg.series_tol and not flag_bad
    witness = {}
    if not ok:
        witness = {"worst_series": arg, "flag_mismatch": flag_bad}
    return Check(
        4,
        "reduced-state growth series",
        "closed form of sum_{|s|=k} |psi(s)|^2 via lambda_+- and the b = 0 case; reduced iff lambda_+ <= 1",
        _status(ok),
        {"K": K, "max_rel_err": _num(worst, cfg.series_tol), "worst_at": arg, "flag_mismatches": len(flag_bad)},
        witness,
        20.0,
    )


# -- 5 ---------------------------------------------------------------------------


def rn_branch_table(n: int, lam: float) -> list:
    """(branch prefix, p_j^2, RN derivative) on every branch for j = 1."""
    c = B.Cocycle(n, lam)
    m = c.measure()
    j = 1
    prefixes = []
    for i in range(1, n + 1):
        if i != j:
            prefixes.append((i,))
        prefixes.append((-i,))
        if i != j:
            prefixes.append((j, i))
            prefixes.append((j, -i))
    prefixes.append((j, j))
    rows = []
    for p in prefixes:
        w = W.ReducedWord(n, p)
        pj = B.p_value(c, j, w)
        rows.append((W.format_word(w), pj * pj, B.rn_derivative(m, j, w)))
    return rows


def check_boundary(cfg: RunConfig, n: int = 2, lams=(0.5, 1.0, 1.3)) -> Check:
    worst, arg = 0.0, {}
    norm_err = 0.0
    rn_err = 0.0
    for lam in lams:
        for row in B.verify_boundary(n, lam, cfg.boundary_max_len):
            if row.abs_err >= worst:
                worst, arg = row.abs_err, {"lambda": lam, "word": row.word}
        norm_err = max(norm_err, *B.alphas_from_lambda(n, lam).normalization_errors(n))
        for _, p2, rn in rn_branch_table(n, lam):
            rn_err = max(rn_err, abs(p2 - rn) / abs(rn))
    ok = worst < cfg.boundary_tol and norm_err <= 1e-14 and rn_err <= 1e-14
    return Check(
        5,
        "boundary realization of phi_{lambda/n}",
        "integral of the cocycle P(s, .) against the alpha measure equals phi_{lambda/n}(s)",
        _status(ok),
        {
            "n": n,
            "max_len": cfg.boundary_max_len,
            "max_abs_err": _num(worst, cfg.boundary_tol),
            "worst_at": arg,
            "normalization_error": _num(norm_err, 1e-14),
            "rn_relative_error": _num(rn_err, 1e-14),
        },
        {} if ok else arg,
        60.0,
    )


# -- 6 ---------------------------------------------------------------------------


def check_obs(cfg: RunConfig) -> Check:
    checked = 0
    violations = []
    for n in cfg.ranks():
        rep = A.verify_obs_identities(n, cfg.obs_depth, cfg.identity_tol)
        checked += rep.checked
        violations.extend(dict(v, n=n) for v in rep.violations)
    ok = not violations
    return Check(
        6,
        "half-space operator identities",
        "Q T T* Q = Q and P u_i^-1 u_j T* Q = 0 on l^2(F_n)",
        _status(ok),
        {"depth": cfg.obs_depth, "checked": checked, "violations": len(violations), "tolerance": cfg.identity_tol},
        {"violations": violations[:20]} if violations else {},
        10.0,
    )


# -- 7 ---------------------------------------------------------------------------

CHI_POINTS = (1.0, complex(math.cos(1.0), math.sin(1.0)), -1.0)


def check_chi(cfg: RunConfig, n: int = 2, k: int = 1000) -> Check:
    tol = 1e-10
    chi_err = 0.0
    for z in CHI_POINTS:
        st = S.chi_z(n, z)
        for j in range(-10, 11):
            chi_err = max(chi_err, abs(S.evaluate(st, W.generator(n, 1, j)) - complex(z) ** j))
    residuals = {}
    for label, coeffs, deg in (("t^2-1", [-1, 0, 1], 2), ("t^3-1", [-1, 0, 0, 1], 3)):
        roots = [complex(math.cos(2 * math.pi * m / deg), math.sin(2 * math.pi * m / deg)) for m in range(deg)]
        rep = S.poly_kernel_decomposition(coeffs, [(z, 1.0 / deg) for z in roots], n)
        residuals[label] = max(abs(rep.residual), rep.max_table_error)
    avg_bad = []
    for s in W.ball(n, 3):
        st = W.stats(s)
        got = A.chi_limit_average(n, s, k)
        if st.u1_length == st.length:
            ok_s = abs(got - 1.0) <= abs(st.tau) / k + 1e-15
        else:
            ok_s = got == 0
        if not ok_s:
            avg_bad.append({"word": W.format_word(s), "average": [got.real, got.imag]})
    ok = chi_err <= tol and max(residuals.values()) <= tol and not avg_bad
    return Check(
        7,
        "characters chi_z and polynomial kernels",
        "chi_z(u_1^j) = z^j; mixtures over zeros of p kill |p(u_1)|^2; averaging limit recovers chi_1",
        _status(ok),
        {
            "chi_error": _num(chi_err, tol),
            "kernel_residual": {key: _num(v, tol) for key, v in residuals.items()},
            "averaging_k": k,
            "averaging_failures": len(avg_bad),
        },
        {"averaging": avg_bad} if avg_bad else {},
        5.0,
    )


# -- 8 ---------------------------------------------------------------------------


def check_words(cfg: RunConfig, n: int = 2) -> Check:
    total = 0
    gamma_bad = beta_bad = 0
    eig_err = 0.0
    witness = {}
    sq = S.sqrt_n_eigen(n)
    ph = S.phi_a(n, 1 / math.sqrt(n))
    for k in range(cfg.word_depth + 1):
        codes = W.sphere_array(n, k)
        lengths = np.full(codes.shape[0], k, dtype=np.int64)
        total += codes.shape[0]
        _, g, _, _ = W.batch_stats(codes, lengths)
        inv = -codes[:, ::-1]
        _, g_inv, _, _ = W.batch_stats(np.ascontiguousarray(inv), lengths)
        mism = np.nonzero(g != g_inv)[0]
        gamma_bad += len(mism)
        if len(mism) and "gamma" not in witness:
            witness["gamma"] = " ".join(map(str, codes[mism[0]]))
        for r in range(codes.shape[0]):
            s = W.ReducedWord(n, tuple(int(x) for x in codes[r]))
            if W.stats(W.beta(s)).u1_length != k - 2 * int(g[r]):
                beta_bad += 1
                witness.setdefault("beta", W.format_word(s))
        eig_err = max(eig_err, float(np.max(np.abs(S.evaluate_codes(sq, codes, lengths) - S.evaluate_codes(ph, codes, lengths)))))
    tol = 1e-14
    ok = gamma_bad == 0 and beta_bad == 0 and eig_err <= tol
    return Check(
        8,
        "structural word identities",
        "gamma(s^-1) = gamma(s), |beta(s)|_1 = |s| - 2 gamma(s), SqrtNEigen = PhiA(1/sqrt(n))",
        _status(ok),
        {
            "n": n,
            "max_len": cfg.word_depth,
            "words": total,
            "gamma_mismatches": gamma_bad,
            "beta_mismatches": beta_bad,
            "sqrt_n_eigen_error": _num(eig_err, tol),
        },
        witness if not ok else {},
        60.0,
    )


# -- 9 ---------------------------------------------------------------------------


def check_experiment(cfg: RunConfig, lams=(0.5, 1.0, 1.3), depth: int = 5, trials: int = 200) -> Check:
    tol = 1e-9
    lam_rows = []
    for lam in lams:
        res = B.measure_experiment(B.alpha_weights(2, B.alphas_from_lambda(2, lam), depth))
        lam_rows.append(
            {
                "lambda": lam,
                "ess_sup_diff": res.ess_sup_diff,
                "ess_inf_sum": res.ess_inf_sum,
                "equal": abs(res.ess_sup_diff - res.ess_inf_sum) <= tol,
            }
        )
    uni = B.measure_experiment(B.alpha_weights(2, B.AlphaParams(0.25, 0.25, 1 / 3, 1 / 3), depth))
    rng = np.random.default_rng(cfg.seed)
    base = B.alpha_weights(2, B.alphas_from_lambda(2, 1.0), 3)
    failures = []
    for t in range(trials):
        res = B.measure_experiment(B.perturbed_weights(base, rng))
        if not res.supports_conjecture:
            failures.append({"trial": t, **res.to_dict()})
    frac = 1 - len(failures) / trials
    return Check(
        9,
        "measure experiment",
        "for a quasi-invariant measure, ess sup |sqrt(q_1) - sqrt(q_2)| >= ess inf (sqrt(q_1) + sqrt(q_2))",
        REPORTED,
        {
            "lambda_measures": lam_rows,
            "lambda_tolerance": tol,
            "uniform_measure": uni.to_dict(),
            "perturbed_trials": trials,
            "supporting_fraction": _num(frac, 0.95),
            "meets_expectation": all(r["equal"] for r in lam_rows) and frac >= 0.95,
        },
        {"perturbed_failures": failures[:20]} if failures else {},
    )


CHECKS = {
    1: check_eigen,
    2: check_ak,
    3: check_psi_region,
    4: check_series,
    5: check_boundary,
    6: check_obs,
    7: check_chi,
    8: check_words,
    9: check_experiment,
}


def warmup() -> None:
    """Compile the kernels once so timed runs exclude JIT cost."""
    codes = W.sphere_array(2, 2)
    lengths = np.full(codes.shape[0], 2, dtype=np.int64)
    kernels.word_stats(codes, lengths)
    kernels.pair_stats(codes, lengths)
    kernels.jacobi_eigh(np.eye(3) + 0.1)
    kernels.cylinder_masses(codes, 0.1, 0.4, 0.25, 0.5)
    kernels.cocycle_on_cylinders(np.array([1], dtype=kernels.CODE_DTYPE), codes, 2, 1.0)
    kernels.sphere_codes(2, 2)


def run_check(cid: int, cfg: RunConfig) -> Check:
    t0 = time.perf_counter()
    chk = CHECKS[cid](cfg)
    chk.wall_s = time.perf_counter() - t0
    return chk


def run_all(cfg: RunConfig, only=None) -> list:
    warmup()
    ids = sorted(only or CHECKS)
    if cfg.threads > 0:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            out = list(pool.map(lambda c: run_check(c, cfg), ids))
    else:
        out = [run_check(c, cfg) for c in ids]
    return sorted(out, key=lambda c: c.id)


def report(checks: list, cfg: RunConfig, command: list) -> dict:
    cfg_dict = asdict(cfg)
    cfg_dict.pop("timings")
    out = {
        "schema": SCHEMA,
        "command": list(command),
        "config": cfg_dict,
        "status": FAIL if any(c.status == FAIL for c in checks) else PASS,
        "checks": [c.to_dict(cfg.timings) for c in checks],
    }
    if cfg.timings:
        out["backend"] = backend_name()
    return out
