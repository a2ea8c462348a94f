"""Command-line entry point: ``freestates <group> <command> ...``.

Exit status is 0 when every asserted check passes, 1 when one fails (the
failing witness goes to stderr) and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import acceptance as AC
from . import algebra as A
from . import boundary as B
from . import gram as G
from . import states as S
from . import words as W
from .errors import FreeStatesError


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, default=_jsonable) + "\n"


def _jsonable(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, np.generic):
        return x.item()
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([f"{v:.17g}" if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _load_json_arg(text: str):
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            return json.load(fh)
    return json.loads(text)


def _rank_for(text: str, n) -> int:
    if n is not None:
        return n
    nums = [abs(int(t)) for t in text.split() if t not in ("e",)]
    return max([2] + nums)


# -- word ------------------------------------------------------------------------


def cmd_word(args, out) -> int:
    n = _rank_for(args.word, args.n)
    if args.action == "reduce":
        letters = [] if args.word.strip() in ("", "e") else [int(t) for t in args.word.split()]
        s = W.reduce(letters, n)
    else:
        s = W.parse_word(args.word, n)
    if args.action == "stats":
        st = W.stats(s)
        out.write(_dump({"length": st.length, "gamma": st.gamma, "u1_length": st.u1_length, "tau": st.tau}))
        return 0
    fn = {"reduce": lambda w: w, "inverse": W.inverse, "beta": W.beta, "sigma": W.sigma}[args.action]
    out.write(W.format_word(fn(s)) + "\n")
    return 0


# -- algebra ----------------------------------------------------------------------


def cmd_algebra(args, out) -> int:
    rep = A.verify_obs_identities(args.n, args.depth, args.tol)
    d = rep.to_dict()
    d["tolerance"] = args.tol
    out.write(_dump(d))
    if not rep.ok:
        sys.stderr.write(_dump({"failing": rep.violations[:10]}))
        return 1
    return 0


# -- state ------------------------------------------------------------------------


def cmd_state(args, out) -> int:
    if args.action == "eval":
        spec = S.StateSpec.from_dict(_load_json_arg(args.spec))
        val = S.evaluate(spec, W.parse_word(args.word, spec.n))
        out.write(_dump({"word": args.word, "value": [val.real, val.imag]}))
        return 0
    spec = S.psi_ab(args.n, args.a, args.b)
    if args.action == "classify":
        out.write(_dump(S.classify(spec).to_dict()))
        return 0
    # series
    brute = S.growth_series_brute(spec, args.K) if args.mode in ("brute", "both") else None
    closed = S.growth_series_closed_form(spec, args.K) if args.mode in ("closed", "both") else None
    rows = []
    worst = 0.0
    nan = float("nan")
    for k in range(1, args.K + 1):
        bv = (brute.A[k], brute.B[k], brute.C[k]) if brute else (nan,) * 3
        cv = (closed.A[k], closed.B[k], closed.C[k]) if closed else (nan,) * 3
        err = abs(bv[2] - cv[2]) if brute and closed else nan
        if brute and closed:
            worst = max(worst, err / (abs(cv[2]) or 1.0))
        rows.append([k, *map(float, bv), *map(float, cv), float(err)])
    out.write(_csv(["k", "A_brute", "B_brute", "C_brute", "A_closed", "B_closed", "C_closed", "abs_err"], rows))
    if worst >= args.tol:
        sys.stderr.write(_dump({"max_rel_err": worst, "tolerance": args.tol}))
        return 1
    return 0


# -- gram -------------------------------------------------------------------------


def cmd_gram(args, out) -> int:
    spec = S.StateSpec.from_dict(_load_json_arg(args.spec))
    words = G.word_set(spec.n, args.set)
    cert = G.psd_check(G.build(spec, words), args.tol)
    out.write(_dump(cert.to_dict()))
    if not cert.is_psd:
        sys.stderr.write(_dump({"min_eig": cert.min_eigenvalue, "tolerance": args.tol}))
        return 1
    return 0


# -- boundary ---------------------------------------------------------------------


def _load_weights(text: str) -> dict:
    raw = _load_json_arg(text)
    return {tuple(W.parse_word(k, 2).code): float(v) for k, v in raw.items()}


def cmd_boundary(args, out) -> int:
    if args.action == "verify":
        rows = B.verify_boundary(args.n, args.lam, args.max_len)
        out.write(_csv(["word", "integral", "phi", "abs_err"], [[r.word, r.integral, r.phi, r.abs_err] for r in rows]))
        bad = [r for r in rows if not r.abs_err < args.tol]
        if bad:
            sys.stderr.write(_dump({"failing": [r.__dict__ for r in bad[:10]], "tolerance": args.tol}))
            return 1
        return 0
    if args.weights:
        weights = _load_weights(args.weights)
    else:
        weights = B.alpha_weights(2, B.alphas_from_lambda(2, args.lam), args.depth)
    res = B.measure_experiment(weights)
    out.write(_dump(res.to_dict()))
    return 0


# -- reproduce --------------------------------------------------------------------


def _human(rep: dict) -> str:
    lines = [f"schema {rep['schema']}  status {rep['status']}"]
    for c in rep["checks"]:
        lines.append(f"[{c['status']:>8}] {c['id']}. {c['title']}  ({c['exercises']})")
    return "\n".join(lines) + "\n"


def cmd_reproduce(args, out) -> int:
    values = AC.read_config_file(args.config) if args.config else {}
    for key in ("n", "seed", "threads", "output"):
        v = getattr(args, key)
        if v is not None:
            values[key] = str(v)
    if args.timings:
        values["timings"] = "true"
    cfg = AC.RunConfig.from_mapping(values)
    only = [int(x) for x in args.only.split(",")] if args.only else None
    checks = AC.run_all(cfg, only)
    rep = AC.report(checks, cfg, ["reproduce", *args.argv_echo])
    if cfg.output == "human":
        out.write(_human(rep))
    elif cfg.output == "csv":
        out.write(_csv(["id", "title", "status"], [[c["id"], c["title"], c["status"]] for c in rep["checks"]]))
    else:
        out.write(_dump(rep))
    failed = [c for c in checks if c.status == AC.FAIL]
    if failed:
        sys.stderr.write(_dump({"failing": [{"id": c.id, "witness": c.witness} for c in failed]}))
        return 1
    return 0


# -- parser -----------------------------------------------------------------------


CHECK_HELP = "\n".join(
    f"  {i}. {fn.__name__.removeprefix('check_')}" for i, fn in AC.CHECKS.items()
)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="freestates",
        description="Word-length states on free groups: evaluation, classification and numerical certificates.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    w = sub.add_parser("word", help="reduced word arithmetic and the statistics |s|, gamma, |s|_1, tau")
    w.add_argument("action", choices=["stats", "reduce", "inverse", "beta", "sigma"])
    w.add_argument("word", help='signed generator indices, e.g. "-1 -1 2 2 2 -1"; "e" is the identity')
    w.add_argument("--n", type=int, default=None, help="rank (default: largest index used, at least 2)")
    w.set_defaults(fn=cmd_word)

    a = sub.add_parser(
        "algebra",
        help="exact group algebra checks: Q T T* Q = Q and P u_i^-1 u_j T* Q = 0 on l^2",
    )
    a.add_argument("action", choices=["verify-obs"])
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--depth", type=int, required=True)
    a.add_argument("--tol", type=float, default=1e-12)
    a.set_defaults(fn=cmd_algebra)

    s = sub.add_parser(
        "state",
        help="evaluate states, classify psi_{a,b} (PD, reduced, l^2) and compare growth series with closed forms",
    )
    s.add_argument("action", choices=["eval", "classify", "series"])
    s.add_argument("--spec", help="state as JSON, or @file")
    s.add_argument("--word")
    s.add_argument("--n", type=int)
    s.add_argument("--a", type=float)
    s.add_argument("--b", type=float)
    s.add_argument("--K", type=int, default=8)
    s.add_argument("--mode", choices=["brute", "closed", "both"], default="both")
    s.add_argument("--tol", type=float, default=1e-9, help="relative tolerance on C_k (mode both)")
    s.set_defaults(fn=cmd_state)

    g = sub.add_parser("gram", help="Gram matrix [psi(s^-1 t)] positivity on a word set via Jacobi")
    g.add_argument("action", choices=["check"])
    g.add_argument("--spec", required=True, help="state as JSON, or @file")
    g.add_argument("--set", required=True, help="sphere:k, positive:k, ball:r or @wordsfile")
    g.add_argument("--tol", type=float, default=G.PSD_TOL)
    g.set_defaults(fn=cmd_gram)

    b = sub.add_parser(
        "boundary",
        help="cylinder integral of the boundary cocycle against phi_{lambda/n}, and the measure experiment",
    )
    b.add_argument("action", choices=["verify", "experiment"])
    b.add_argument("--n", type=int, default=2)
    b.add_argument("--lambda", dest="lam", type=float, default=1.0)
    b.add_argument("--max-len", type=int, default=5)
    b.add_argument("--tol", type=float, default=1e-10)
    b.add_argument("--depth", type=int, default=5)
    b.add_argument("--weights", help="JSON {word: mass} at one depth, or @file")
    b.set_defaults(fn=cmd_boundary)

    r = sub.add_parser(
        "reproduce",
        help="run the acceptance suite and print a consolidated report",
        description="Checks run:\n" + CHECK_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    r.add_argument("--n", type=int, default=None, help="restrict the rank sweep to one rank")
    r.add_argument("--seed", type=int, default=None)
    r.add_argument("--threads", type=int, default=None, help="worker cap, 0 = serial")
    r.add_argument("--config", help="key=value file; flags win")
    r.add_argument("--output", choices=["json", "csv", "human"], default=None)
    r.add_argument("--only", help="comma-separated check ids")
    r.add_argument("--timings", action="store_true", help="include wall times (breaks byte-identity)")
    r.set_defaults(fn=cmd_reproduce)
    return p


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"missing required option(s): {', '.join('--' + m.replace('_', '-') for m in missing)}")


def main(argv=None, out=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.group == "state":
            if args.action == "eval":
                _require(args, "spec", "word")
            else:
                _require(args, "n", "a", "b")
        args.argv_echo = argv[1:]
        return args.fn(args, out)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return 2
    except (FreeStatesError, ValueError, KeyError, json.JSONDecodeError, OSError) as exc:
        sys.stderr.write(f"freestates: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
