"""Command-line front end.

Every subcommand takes its parameters as --flags or from a key=value config
file (--config); flags win.  Results go to <out>/<subcommand>.csv and
<out>/<subcommand>.json, where <out> is --out, else $XY1BENCH_OUT, else
./xy1bench-out.  Each CSV starts with "# key=value" manifest lines, so a CSV
can be passed back as --config to repeat the run.

Exit status: 0 success, 1 property failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__, acceptance, analytic, arith, envelope, experiments, forms, weights, zfourier

OUT_ENV = "XY1BENCH_OUT"
RESERVED = {"subcommand", "version"}


class UsageError(Exception):
    pass


class PropertyFailure(Exception):
    pass


def real(s: str) -> float:
    """Float, also accepting a ratio such as 3/7."""
    try:
        return float(s)
    except ValueError:
        try:
            return float(Fraction(s))
        except (ValueError, ZeroDivisionError):
            raise argparse.ArgumentTypeError(f"not a real number: {s!r}")


def integer(s: str) -> int:
    try:
        return int(float(s)) if ("e" in s.lower() and "." not in s) else int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {s!r}")


def boolean(s: str) -> bool:
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"not a boolean: {s!r}")


def int_list(s: str) -> list[int]:
    return [integer(x) for x in s.split(",") if x.strip()]


def kind(s: str) -> weights.Kind:
    try:
        return weights.Kind(s.upper().replace("-", "_"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"kind must be one of {[k.value for k in weights.Kind]}")


@dataclass
class Param:
    type: object
    default: object
    help: str


@dataclass
class Command:
    name: str
    help: str
    columns: str
    params: dict[str, Param]
    func: object


COMMANDS: dict[str, Command] = {}


def command(name: str, help: str, columns: str = "", **params: Param):
    def deco(fn):
        COMMANDS[name] = Command(name, help, columns, params, fn)
        return fn
    return deco


# -- output ---------------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, weights.Kind):
        return v.value
    if isinstance(v, (list, tuple)):
        return ",".join(_fmt(x) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, weights.Kind):
        return v.value
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, complex):
        return [v.real, v.imag]
    return v


class Run:
    def __init__(self, name: str, cfg: dict, out: Path, quiet: bool = False):
        self.name, self.cfg, self.out, self.quiet = name, cfg, out, quiet

    def manifest(self) -> dict:
        m = {"subcommand": self.name, "version": __version__}
        m.update({k: _fmt(v) for k, v in sorted(self.cfg.items()) if v is not None})
        return m

    def write_csv(self, header: list[str], rows) -> Path:
        self.out.mkdir(parents=True, exist_ok=True)
        path = self.out / f"{self.name}.csv"
        buf = io.StringIO()
        for k, v in self.manifest().items():
            buf.write(f"# {k}={v}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(x) for x in r])
        path.write_text(buf.getvalue())
        return path

    def write_json(self, summary: dict) -> Path:
        self.out.mkdir(parents=True, exist_ok=True)
        path = self.out / f"{self.name}.json"
        doc = {"manifest": self.manifest(), "summary": _jsonable(summary)}
        path.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")
        return path

    def say(self, msg: str) -> None:
        if not self.quiet:
            print(msg)


# -- subcommands ----------------------------------------------------------------

@command("primes", "primes up to a limit with P and P* membership", "p,in_P,in_Pstar",
         limit=Param(integer, 100, "upper limit"))
def cmd_primes(run: Run, limit: int):
    T = arith.sieve_primes(limit)
    ps, P, Ps = T.primes(), T.in_P_mask(), T.in_Pstar_mask()
    run.write_csv(["p", "in_P", "in_Pstar"], zip(ps.tolist(), P.astype(int).tolist(), Ps.astype(int).tolist()))
    s = {"limit": limit, "primes": int(ps.size), "P": int(P.sum()), "Pstar": int(Ps.sum())}
    run.write_json(s)
    run.say(f"pi({limit}) = {s['primes']}, |P| = {s['P']}, |P*| = {s['Pstar']}")


@command("membership", "sum-of-two-squares, S and s(n) for n in [lo, hi]", "n,sum_two_squares,in_S,s",
         lo=Param(integer, 1, "first n"), hi=Param(integer, 100, "last n"))
def cmd_membership(run: Run, lo: int, hi: int):
    if lo < 1 or hi < lo:
        raise UsageError("need 1 <= lo <= hi")
    rows = [(n, int(arith.is_sum_two_squares(n)), int(arith.in_S(n)), arith.s_of(n)) for n in range(lo, hi + 1)]
    run.write_csv(["n", "sum_two_squares", "in_S", "s"], rows)
    run.write_json({"count": len(rows), "in_S": sum(r[2] for r in rows)})
    run.say(f"{sum(r[2] for r in rows)} of {len(rows)} integers lie in S")


@command("amenable", "amenability of K n + b, and optionally all amenable b mod K", "b",
         K=Param(integer, 1296, "modulus"), b=Param(integer, 5, "offset"),
         list=Param(boolean, False, "also list every amenable residue mod K"))
def cmd_amenable(run: Run, K: int, b: int, list: bool):
    ev = forms.is_amenable(forms.LinearForm(K, b))
    s = {"K": K, "b": b, "amenable": ev.ok, "j": ev.j, "t": ev.t, "h": ev.h, "clause": ev.clause}
    if list:
        res = forms.amenable_residues(K)
        run.write_csv(["b"], ([r] for r in res))
        s["amenable_residues"] = len(res)
    run.write_json(s)
    run.say(f"{K}n+{b}: " + ("amenable" if ev else f"not amenable, {ev.clause}"))


@command("wbuild", "the moduli U = 2^J 27 and W = U * prod of 5 <= p <= w",
         J=Param(integer, 5, "2-adic exponent"), w=Param(integer, 5, "small-prime bound"))
def cmd_wbuild(run: Run, J: int, w: int):
    M = forms.build_W(J, w)
    run.write_json({"J": M.J, "w": M.w, "U": M.U, "W": M.W})
    run.say(f"U = {M.U}, W = {M.W}")


@command("lemma2adic", "exhaustive 2-adic decomposition check for J in [Jmin, Jmax]", "J,ok,counterexamples",
         Jmin=Param(integer, 5, "smallest J"), Jmax=Param(integer, 12, "largest J"))
def cmd_lemma2adic(run: Run, Jmin: int, Jmax: int):
    rows, bad = [], []
    for J in range(Jmin, Jmax + 1):
        r = forms.check_lemma_2adic(J)
        rows.append((J, int(r.ok), " ".join(map(str, r.counterexamples))))
        if not r.ok:
            bad.append(J)
    run.write_csv(["J", "ok", "counterexamples"], rows)
    run.write_json({"Jmin": Jmin, "Jmax": Jmax, "failed": bad})
    run.say(f"J = {Jmin}..{Jmax}: " + ("all pass" if not bad else f"fails for {bad}"))
    if bad:
        raise PropertyFailure(f"2-adic lemma fails for J in {bad}")


@command("lemma27", "mod 27 decompositions and the 5, 8 mod 9 obstruction", "m,a1,a2,x1,y1,x2,y2")
def cmd_lemma27(run: Run):
    adm = [m for m in range(27) if m % 9 not in (3, 6)]
    rows = []
    for m in adm:
        d = forms.check_lemma_27(m)
        if d is not None:
            rows.append((m, d.a1, d.a2, *d.witness1, *d.witness2))
    obs = forms.mod27_obstruction()
    run.write_csv(["m", "a1", "a2", "x1", "y1", "x2", "y2"], rows)
    run.write_json({"admissible": len(adm), "decomposed": len(rows), "obstruction": obs})
    run.say(f"{len(rows)}/{len(adm)} admissible residues decomposed; "
            f"obstruction for m = 5, 8 mod 9: {'confirmed' if not any(obs.values()) else 'FAILED'}")
    if len(rows) != len(adm) or any(obs.values()):
        raise PropertyFailure("mod 27 lemma")


@command("qset", "the residue set Q, its size formula and the exponential-sum ratio", "q,max_ratio",
         Q=Param(integer, 493, "modulus Q"), J=Param(integer, 5, "2-adic exponent of W"),
         w=Param(integer, 13, "small-prime bound of W"), b=Param(integer, None, "offset (default: first amenable)"))
def cmd_qset(run: Run, Q: int, J: int, w: int, b: int | None):
    W = forms.build_W(J, w).W
    if b is None:
        b = next(c for c in range(1, W) if forms.is_amenable(forms.LinearForm(W, c)))
    QS = forms.residue_set_Q(Q, W, b)
    formula = forms.q_cardinality_formula(Q, W)
    rep = forms.check_expsum_bound(QS, w)
    run.write_csv(["q", "max_ratio"], sorted(rep.per_q.items()))
    run.write_json({"Q": Q, "W": W, "b": b, "size": len(QS), "formula": formula,
                    "max_ratio": rep.max_ratio, "argmax": rep.argmax, "bound": rep.bound, "bound_holds": rep.holds})
    run.say(f"|Q| = {len(QS)} (formula {formula}); max ratio {rep.max_ratio:.4f} vs w^-1/2 = {rep.bound:.4f}")
    if len(QS) != formula:
        raise PropertyFailure("cardinality formula mismatch")


_SIEVE = dict(kind=Param(kind, weights.Kind.SEM_MINUS, "LIN_PLUS, SEM_MINUS or SEM_PLUS"),
              x=Param(real, 1e6, "sieve scale x"), theta=Param(real, 0.0, "theta"),
              eps=Param(real, 0.01, "epsilon"), z=Param(real, None, "sifting bound (default: largest admissible)"))


@command("weights-enum", "members of a sieve-weight support", "d,lambda", **_SIEVE)
def cmd_weights_enum(run: Run, kind, x, theta, eps, z):
    S = weights.SieveSupport.standard(kind, x, theta, eps, z)
    members = weights.enumerate_support(S)
    run.write_csv(["d", "lambda"], ((d, weights.weight(S, d)) for d in members))
    run.write_json({"members": len(members), "rho": S.rho, "z": S.z, "level": S.level, "flags": S.flags()})
    run.say(f"{len(members)} members (rho = {S.rho:.6f}, level {S.level:.3f})")


@command("weights-split", "split every member d = d1 d2 at level D", "d,d1,d2,fallback",
         D=Param(real, None, "split level (default: geometric middle of the admissible range)"),
         optimality=Param(boolean, False, "also search the inflated-rho counterexample at this x"), **_SIEVE)
def cmd_weights_split(run: Run, kind, x, theta, eps, z, D, optimality):
    S = weights.SieveSupport.standard(kind, x, theta, eps, z)
    lo, hi = weights.split_range(S)
    D = math.sqrt(lo * hi) if D is None else D
    rows, bad, fb = [], [], 0
    for d in weights.enumerate_support(S):
        try:
            r = weights.split(S, d, D)
        except weights.LemmaViolation:
            bad.append(d)
            continue
        fb += r.fallback
        rows.append((r.d, r.d1, r.d2, int(r.fallback)))
    s = {"D": D, "range": [lo, hi], "members": len(rows) + len(bad), "fallbacks": fb, "violations": bad}
    if optimality and kind is not weights.Kind.LIN_PLUS:
        ce = weights.optimality_counterexample(kind, x, theta, eps)
        s["counterexample"] = None if ce is None else list(ce.primes)
    run.write_csv(["d", "d1", "d2", "fallback"], rows)
    run.write_json(s)
    run.say(f"{s['members']} members, {fb} fallbacks, {len(bad)} without a split")
    if bad:
        raise PropertyFailure(f"no split for {bad[:5]}")


@command("singular", "the singular product of K n + b with its local factors", "p,factor",
         K=Param(integer, 1296, "modulus"), b=Param(integer, 5, "offset"))
def cmd_singular(run: Run, K: int, b: int):
    L = forms.LinearForm(K, b)
    rows = [(p, analytic.local_factor(L, p)) for p in arith.factorize(K).primes()]
    val = analytic.singular_product(L)
    run.write_csv(["p", "factor"], rows)
    run.write_json({"K": K, "b": b, "value": val, "float": float(val)})
    run.say(f"singular product of {K}n+{b} = {val}")


@command("hcheck", "the H(rho1, rho2, sigma) predicate by quadrature",
         rho1=Param(real, 0.5, "rho1"), rho2=Param(real, 3 / 7, "rho2"), sigma=Param(real, 3.0, "sigma"),
         tol=Param(real, 1e-6, "quadrature tolerance"))
def cmd_hcheck(run: Run, rho1, rho2, sigma, tol):
    try:
        r = analytic.check_H(analytic.HParams(rho1, rho2, sigma), tol)
    except analytic.DomainError as exc:
        raise UsageError(str(exc))
    run.write_json({"holds": r.holds, "margin": r.margin, "error": r.error, "I1": r.i1, "I2": r.i2,
                    "warnings": list(r.warnings)})
    run.say(f"H holds: {r.holds}; margin {r.margin:.6f} (I1 {r.i1:.6f}, I2 {r.i2:.6f}, error {r.error:.1e})")
    for w in r.warnings:
        run.say(f"warning: {w}")


@command("constants", "Euler-product constants and the sieve functions f, F", "s,f,F",
         P=Param(integer, 10**6, "prime truncation"), smax=Param(real, 6.0, "largest s in the f, F table"))
def cmd_constants(run: Run, P, smax):
    c = analytic.euler_products(P)
    grid = [1 + 0.25 * i for i in range(int((smax - 1) / 0.25) + 1)]
    run.write_csv(["s", "f", "F"], ((s, analytic.sieve_f(s), analytic.sieve_F(s)) for s in grid))
    run.write_json({"P": P, "A": c.A, "C41": c.C41, "C4m1": c.C4m1})
    run.say(f"A = {c.A:.10f}, C(4,1) = {c.C41:.10f}, C(4,-1) = {c.C4m1:.10f}")


@command("dft-selftest", "Parseval, round trip and convolution identities on random signals", "N,parseval,roundtrip,convolution",
         sizes=Param(int_list, [64, 512, 4096], "comma-separated N"), seed=Param(integer, 0, "RNG seed"))
def cmd_dft_selftest(run: Run, sizes, seed):
    rng = np.random.default_rng(seed)
    rows, worst = [], 0.0
    for N in sizes:
        f = zfourier.Signal.of(rng.normal(size=N))
        g = zfourier.Signal.of(rng.normal(size=N))
        F, G = zfourier.dft(f), zfourier.dft(g)
        pars = abs(np.sum(f.values**2) - N * np.sum(np.abs(F) ** 2)) / np.sum(f.values**2)
        rt = float(np.max(np.abs(zfourier.idft(F) - f.values)) / np.max(np.abs(f.values)))
        cv = float(np.max(np.abs(zfourier.dft(zfourier.convolve(f, g)) - F * G)) / np.max(np.abs(F * G)))
        rows.append((N, float(pars), rt, cv))
        worst = max(worst, pars, rt, cv)
    run.write_csv(["N", "parseval", "roundtrip", "convolution"], rows)
    run.write_json({"max_relative_error": worst})
    run.say(f"max relative error {worst:.2e}")
    if worst > 1e-9:
        raise PropertyFailure("Fourier identity error above 1e-9")


@command("chi", "the smoothed Bohr indicator and its property report", "n,chi,in_B,in_2B",
         N=Param(integer, 256, "group order"), omega=Param(int_list, [1], "comma-separated frequencies"),
         eta=Param(real, 0.125, "Bohr radius"))
def cmd_chi(run: Run, N, omega, eta):
    spec = zfourier.BohrSpec(N, tuple(omega), eta)
    try:
        chi = zfourier.build_chi(spec)
    except zfourier.ConstructionError as exc:
        raise PropertyFailure(str(exc))
    B1, B2 = zfourier.bohr_set(spec), zfourier.bohr_set(spec, 2.0)
    run.write_csv(["n", "chi", "in_B", "in_2B"],
                  zip(range(N), chi.values.tolist(), B1.astype(int).tolist(), B2.astype(int).tolist()))
    run.write_json({"mode": chi.mode, "m": chi.m, "deg": chi.deg, "k": chi.k, "complexity": chi.complexity,
                    "report": chi.report})
    run.say(f"{chi.mode} indicator, |B| = {chi.report['bohr_size']}, max off 2B {chi.report['max_off_2B']:.3g} "
            f"<= {chi.report['bound_off_2B']:.3g}, complexity {chi.complexity}")


@command("transfer", "the transference pipeline on a pair of signals", "n,f1_conv_f2,in_T",
         N=Param(integer, 4096, "group order"), delta=Param(real, 0.2, "delta"), eps=Param(real, 0.05, "epsilon"),
         K0=Param(real, 50.0, "spectral bound K0"), signal=Param(str, "random", "random, constant or bohr"),
         seed=Param(integer, 0, "RNG seed"), f1=Param(str, None, "CSV file for f1 (index,value)"),
         f2=Param(str, None, "CSV file for f2 (index,value)"))
def cmd_transfer(run: Run, N, delta, eps, K0, signal, seed, f1, f2):
    if f1 or f2:
        if not (f1 and f2):
            raise UsageError("give both f1 and f2")
        s1, s2 = zfourier.read_signal_csv(f1), zfourier.read_signal_csv(f2)
    elif signal == "random":
        rng = np.random.default_rng(seed)
        s1 = zfourier.Signal.of(6 * delta + rng.uniform(0, 2, N))
        s2 = zfourier.Signal.of(6 * delta + rng.uniform(0, 2, N))
    elif signal == "constant":
        s1 = s2 = zfourier.Signal.of(np.full(N, 2 * delta))
    elif signal == "bohr":
        t = ((math.sqrt(5) - 1) / 2 * np.arange(N)) % 1.0
        s1 = s2 = zfourier.Signal.of(np.where(np.minimum(t, 1 - t) < 0.01, 100.0, 0.0))
    else:
        raise UsageError("signal must be random, constant or bohr")
    try:
        r = zfourier.transference_demo(s1, s2, delta, eps, K0)
        failure = None
    except zfourier.TransferenceViolation as exc:
        r, failure = exc.report, str(exc)
    conv = zfourier.convolve(s1, s2).values
    T = set(r.T)
    run.write_csv(["n", "f1_conv_f2", "in_T"], ((n, float(conv[n % r.N]), int(n in T))
                                                for n in range(math.ceil(0.9 * r.N), r.N + 1)))
    summary = {k: getattr(r, k) for k in ("N", "delta", "eps", "K0", "eta", "chi_mode", "cond_i", "cond_i_margin",
                                           "cond_ii", "cond_ii_value", "cond_iii", "lr_norms", "T_size",
                                           "conditions_hold", "conclusion_holds", "report_only",
                                           "chi_hat_deviation", "h2_energy")}
    summary["Omega_size"] = len(r.Omega)
    run.write_json(summary)
    run.say(f"conditions (i) {r.cond_i}, (ii) {r.cond_ii}, (iii) {r.cond_iii}; |T| = {r.T_size} vs eps N = {eps * r.N:g}")
    if failure:
        raise PropertyFailure(failure)


@command("envelope", "the enveloping sieve: exact tables, expansion check, decay table", "q,max_abs_v_times_q",
         J=Param(integer, 5, "2-adic exponent of W"), w=Param(integer, 5, "small-prime bound"),
         B=Param(integer, None, "offset (default: first amenable)"), z=Param(real, 30.0, "sifting bound"),
         N=Param(integer, 10**4, "window [N, 2N)"), samples=Param(integer, 100, "sampled n for the expansion"),
         seed=Param(integer, 11, "sampling seed"), dump=Param(str, None, "write the model to this file"))
def cmd_envelope(run: Run, J, w, B, z, N, samples, seed, dump):
    W = forms.build_W(J, w).W
    if B is None:
        B = next(b for b in range(W) if forms.is_amenable(forms.LinearForm(W, b)))
    model = envelope.build_envelope(W, B, w, z, N)
    vals = envelope.compute_values(model)
    rng = np.random.default_rng(seed)
    sample = sorted(rng.choice(np.arange(N, 2 * N), size=min(samples, N), replace=False).tolist())
    disc = envelope.verify_expansion(model, vals, sample)
    v1 = envelope.fourier_v(model, 1, 1)
    if dump:
        Path(dump).write_text(envelope.dump_model(model))
    run.write_csv(["q", "max_abs_v_times_q"], envelope.decay_table(vals))
    run.write_json({"W": W, "B": B, "z": z, "N": N, "note": "z is set independently of N",
                    "primes": list(model.primes), "G1": model.G1, "v1": v1, "expansion_error": disc,
                    "window_mean_beta": envelope.window_mean(vals),
                    "max_beta": float(max(vals.beta.values())), "coefficients": len(vals.fourier)})
    run.say(f"G1 = {model.G1}, v(1) = {v1}, expansion error {disc:.2e}, window mean {envelope.window_mean(vals):.4f}")
    if v1 != 1 or disc > 1e-6:
        raise PropertyFailure("v(1) != 1 or expansion error above 1e-6")


@command("bv", "the Lambda(n) e(alpha n) sum over a sieve-weight support", "d,lambda,abs_inner",
         kind=Param(kind, weights.Kind.SEM_MINUS, "support kind"), N=Param(integer, 10**5, "n in [N, 2N)"),
         alpha=Param(real, math.sqrt(2), "phase"), b=Param(integer, 1, "residue b != 0"),
         theta=Param(real, 0.0, "theta"), eps=Param(real, 0.01, "epsilon"),
         Q=Param(integer, 6, "major-arc modulus"), A=Param(real, 3.0, "minor-arc exponent"),
         oracle=Param(boolean, False, "compare with the brute-force computation"))
def cmd_bv(run: Run, kind, N, alpha, b, theta, eps, Q, A, oracle):
    S = weights.SieveSupport.standard(kind, N, theta, eps)
    try:
        r = experiments.bv_harness(S, alpha, b, N, Q, A)
    except arith.InvalidArgument as exc:
        raise UsageError(str(exc))
    run.write_csv(["d", "lambda", "abs_inner"], r.rows)
    s = {"total": r.total, "normalized": r.total / N, "terms": len(r.rows),
         "arc": {"a": r.arc.a, "q": r.arc.q, "err": r.arc.err, "class": r.arc.classification}}
    if oracle:
        s["oracle"] = experiments.bv_bruteforce(S, alpha, b, N)
        s["bit_exact"] = s["oracle"] == r.total
    run.write_json(s)
    run.say(f"total {r.total!r} over {len(r.rows)} moduli; alpha is {r.arc.classification} (q = {r.arc.q})")
    if oracle and not s["bit_exact"]:
        raise PropertyFailure("harness differs from the brute-force oracle")


@command("goldbach", "binary Goldbach scan over P", "n,r",
         N=Param(integer, 10**6, "limit"), lo=Param(integer, 10**5, "statistic range start"))
def cmd_goldbach(run: Run, N, lo):
    rep = experiments.goldbach_scan(N)
    n = np.arange(N + 1)
    ev = np.flatnonzero(experiments.eligible(n))
    run.write_csv(["n", "r"], zip(ev.tolist(), rep.rep_counts[ev].tolist()))
    blocks = experiments.normalized_rep_statistic(rep, lo, N + 1)
    ok = experiments.verify_exceptions(rep)
    run.write_json({"N": N, "exceptions": len(rep.exceptions), "first_exceptions": rep.exceptions[:50],
                    "density_by_decade": rep.density_by_decade, "obstructed_use_3": rep.obstructed_ok,
                    "obstructed_checked_to": rep.obstructed_checked_to, "exceptions_verified": ok,
                    "blocks": [vars(b) for b in blocks]})
    run.say(f"{len(rep.exceptions)} exceptions up to {N}; decade densities "
            + ", ".join(f"{d:.4f}" for _, d in rep.density_by_decade))
    if not (ok and rep.obstructed_ok):
        raise PropertyFailure("exception re-check or 5, 8 mod 9 check failed")


@command("ternary", "ternary scan over P for odd n", "n",
         N=Param(integer, 10**5, "limit"))
def cmd_ternary(run: Run, N):
    rep = experiments.goldbach_scan(N, ternary=True)
    run.write_csv(["n"], ([e] for e in rep.exceptions))
    run.write_json({"N": N, "exceptions": rep.exceptions, "density_by_decade": rep.density_by_decade})
    run.say(f"{len(rep.exceptions)} odd n in [7, {N}] without a representation")


@command("ap3", "3-term progressions in P*", "N,count",
         N=Param(int_list, [10**3, 10**4, 10**5], "comma-separated limits"),
         oracle=Param(boolean, True, "brute-force check for limits up to 2000"))
def cmd_ap3(run: Run, N, oracle):
    rows, bad = [], []
    for n in N:
        c = experiments.ap3_count(n)
        rows.append((n, c))
        if oracle and n <= 2000 and experiments.ap3_bruteforce(n) != c:
            bad.append(n)
    run.write_csv(["N", "count"], rows)
    run.write_json({"counts": rows, "oracle_mismatch": bad})
    run.say(", ".join(f"ap3({n}) = {c}" for n, c in rows))
    if bad:
        raise PropertyFailure(f"brute force disagrees at {bad}")


@command("alphap", "primes in P with ||xi p + kappa|| <= p^-theta", "N,count,discrepancy",
         xi=Param(real, math.sqrt(2), "xi"), kappa=Param(real, 0.0, "kappa"), theta=Param(real, 1 / 80, "theta"),
         N=Param(int_list, [10**4, 10**5, 10**6], "comma-separated checkpoints"),
         class_mod=Param(integer, 0, "tally qualifying primes by residue mod this"))
def cmd_alphap(run: Run, xi, kappa, theta, N, class_mod):
    try:
        r = experiments.alphap_scan(xi, kappa, theta, N, class_mod)
    except arith.InvalidArgument as exc:
        raise UsageError(str(exc))
    run.write_csv(["N", "count", "discrepancy"], zip(r.checkpoints, r.counts, r.discrepancy))
    run.write_json({"checkpoints": r.checkpoints, "counts": r.counts, "discrepancy": r.discrepancy,
                    "classes": r.residue_classes})
    run.say(", ".join(f"N={n}: {c}" for n, c in zip(r.checkpoints, r.counts)))


@command("verify-all", "run the acceptance suite", "number,name,passed,seconds,detail",
         only=Param(int_list, [], "comma-separated criterion numbers (default: all)"))
def cmd_verify_all(run: Run, only):
    results = acceptance.run_all(only or None, echo=run.say)
    run.write_csv(["number", "name", "passed", "seconds", "detail"],
                  ((r.number, r.name, int(r.passed), round(r.seconds, 3), r.detail) for r in results))
    run.write_json({"passed": sum(r.passed for r in results), "total": len(results),
                    "failed": [r.number for r in results if not r.passed]})
    failed = [r.number for r in results if not r.passed]
    run.say(f"{len(results) - len(failed)}/{len(results)} criteria pass")
    if failed:
        raise PropertyFailure(f"criteria {failed} failed")


# -- driver ---------------------------------------------------------------------

def read_config(path: str) -> dict[str, str]:
    """key=value lines; '#' prefixes are stripped so CSV manifests work as configs.
    Reading stops at the first line without '='."""
    out = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if line.startswith("#"):
            line = line[1:].strip()
        if not line:
            continue
        if "=" not in line:
            break
        k, v = line.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="xy1bench", description=__doc__.split("\n\n")[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="subcommand", metavar="SUBCOMMAND")
    for c in COMMANDS.values():
        epilog = f"CSV columns: {c.columns}" if c.columns else "writes a JSON summary only"
        p = sub.add_parser(c.name, help=c.help, description=c.help, epilog=epilog)
        p.add_argument("--config", help="key=value file (flags win)")
        p.add_argument("--out", help=f"output directory (default ${OUT_ENV} or ./xy1bench-out)")
        p.add_argument("--threads", type=integer, default=None, help="thread count (recorded)")
        p.add_argument("--quiet", action="store_true")
        for name, prm in c.params.items():
            shown = _fmt(prm.default) if prm.default is not None else "unset"
            p.add_argument(f"--{name}", dest=f"p_{name}", type=prm.type, default=None,
                           help=f"{prm.help} (default {shown})")
    return ap


def resolve(c: Command, args: argparse.Namespace) -> dict:
    cfg = {k: p.default for k, p in c.params.items()}
    cfg["threads"] = os.cpu_count() or 1
    if args.config:
        try:
            raw = read_config(args.config)
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}")
        for k, v in raw.items():
            if k in RESERVED:
                if k == "subcommand" and v != c.name:
                    raise UsageError(f"config is for {v!r}, not {c.name!r}")
                continue
            if k == "threads":
                cfg[k] = integer(v)
                continue
            if k not in c.params:
                raise UsageError(f"unknown config key {k!r} for {c.name}")
            try:
                cfg[k] = c.params[k].type(v)
            except (argparse.ArgumentTypeError, ValueError) as exc:
                raise UsageError(f"bad value for {k}: {exc}")
    for k in c.params:
        v = getattr(args, f"p_{k}")
        if v is not None:
            cfg[k] = v
    if args.threads is not None:
        cfg["threads"] = args.threads
    return cfg


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not args.subcommand:
        ap.print_help()
        return 2
    c = COMMANDS[args.subcommand]
    try:
        cfg = resolve(c, args)
    except (UsageError, argparse.ArgumentTypeError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    out = Path(args.out or os.environ.get(OUT_ENV) or "xy1bench-out")
    run = Run(c.name, cfg, out, args.quiet)
    kwargs = {k: cfg[k] for k in c.params}
    try:
        c.func(run, **kwargs)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (arith.InvalidArgument, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except PropertyFailure as exc:
        print(f"property failure: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
