"""Fourier analysis on Z_N with the normalization

    f^(xi) = (1/N) sum_n f(n) e(-xi n / N),    f*g(n) = (1/N) sum_k f(k) g(n - k),

Bohr sets, a smoothed Bohr indicator chi of finite Fourier complexity, and an
executable version of the dense-model transference argument.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import binom

MAX_N = 1 << 22


@dataclass(frozen=True)
class Signal:
    N: int
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.ndim != 1 or v.size != self.N:
            raise ValueError(f"expected {self.N} values, got shape {v.shape}")
        object.__setattr__(self, "values", v)

    @classmethod
    def of(cls, values) -> "Signal":
        v = np.asarray(values)
        return cls(v.size, v)


def dft(f: Signal) -> np.ndarray:
    if f.N > MAX_N:
        raise ValueError("N beyond 2^22")
    return np.fft.fft(f.values) / f.N


def idft(spec: np.ndarray) -> np.ndarray:
    """Inverse of dft: f(n) = sum_xi f^(xi) e(xi n / N)."""
    return np.fft.ifft(spec) * spec.size


def _phase_table(N: int) -> np.ndarray:
    k = np.arange(N)
    return np.exp(-2j * np.pi * k / N)


def dft_direct(f: Signal, rows: int = 256) -> np.ndarray:
    """O(N^2) transform with exact integer reduction of xi n mod N; oracle for dft."""
    N = f.N
    tab = _phase_table(N)
    n = np.arange(N)
    out = np.empty(N, dtype=complex)
    for lo in range(0, N, rows):
        xi = np.arange(lo, min(lo + rows, N))
        out[lo : lo + xi.size] = tab[np.outer(xi, n) % N] @ f.values
    return out / N


def convolve(f: Signal, g: Signal) -> Signal:
    if f.N != g.N:
        raise ValueError("signals live on different groups")
    out = np.fft.ifft(np.fft.fft(f.values) * np.fft.fft(g.values)) / f.N
    if np.isrealobj(f.values) and np.isrealobj(g.values):
        out = out.real
    return Signal(f.N, out)


def convolve_direct(f: Signal, g: Signal) -> Signal:
    N = f.N
    gv = np.asarray(g.values)
    out = np.array([np.dot(f.values, gv[(n - np.arange(N)) % N]) for n in range(N)]) / N
    return Signal(N, out)


def lr_norm(f: Signal, r: float) -> float:
    return float(np.sum(np.abs(dft(f)) ** r))


def write_signal_csv(path, f: Signal) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "value"])
        for i, v in enumerate(f.values):
            w.writerow([i, repr(complex(v)) if np.iscomplexobj(f.values) else repr(float(v))])


def read_signal_csv(path) -> Signal:
    idx, vals = [], []
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    for r in rows[1:]:
        idx.append(int(r[0]))
        s = r[1]
        vals.append(complex(s.strip("()")) if "j" in s else float(s))
    if idx != list(range(len(idx))):
        raise ValueError("indices must be 0..N-1 in order")
    return Signal.of(np.array(vals))


# -- Bohr sets ----------------------------------------------------------------

@dataclass(frozen=True)
class BohrSpec:
    N: int
    Omega: tuple[int, ...]
    eta: float

    def __post_init__(self):
        if not 0 < self.eta < 0.5:
            raise ValueError("eta must lie in (0, 1/2)")
        object.__setattr__(self, "Omega", tuple(sorted({int(x) % self.N for x in self.Omega})))


def _dist(N: int, xi: int) -> np.ndarray:
    """N * ||xi n / N|| for every n, as integers."""
    r = (xi * np.arange(N, dtype=np.int64)) % N
    return np.minimum(r, N - r)


def bohr_set(spec: BohrSpec, scale: float = 1.0) -> np.ndarray:
    """Mask of n with ||xi n / N|| <= scale * eta for all xi in Omega."""
    N = spec.N
    mask = np.ones(N, dtype=bool)
    lim = scale * spec.eta * N
    for xi in spec.Omega:
        mask &= _dist(N, xi) <= lim
    return mask


# -- smoothed indicator -------------------------------------------------------

class ConstructionError(RuntimeError):
    pass


def fejer_normalized(m: int, t: np.ndarray) -> np.ndarray:
    """F_m(t) / m = (sin(pi m t) / (m sin(pi t)))^2, equal to 1 at integers."""
    t = np.asarray(t, dtype=float)
    s = np.sin(np.pi * t)
    with np.errstate(invalid="ignore", divide="ignore"):
        u = (np.sin(np.pi * m * t) / (m * s)) ** 2
    return np.where(np.abs(s) < 1e-300, 1.0, u)


@dataclass
class SmoothedIndicator:
    """chi(n) = prod_{xi in Omega} phi(xi n / N) / gamma.

    mode "fejer-step": phi = P(Bin(deg, u) >= k) with u the normalized Fejer
    kernel of order m; a trigonometric polynomial of degree deg * (m - 1).
    mode "subgroup": eta N < 1/2, so B(Omega, eta) = B(Omega, 2 eta) is a
    subgroup and chi is its indicator.
    """

    spec: BohrSpec
    mode: str
    values: np.ndarray
    m: int = 0
    deg: int = 0
    k: int = 0
    gamma: float = 1.0
    factor_coefficients: np.ndarray | None = field(default=None, repr=False)
    complexity: int = 0
    report: dict = field(default_factory=dict)

    @property
    def l1(self) -> float:
        return float(np.mean(self.values))

    def coefficient(self, freqs: tuple[int, ...]) -> float:
        """Amplitude of e(sum_i l_i xi_i n / N) in the product expansion (fejer-step mode)."""
        c = self.factor_coefficients
        D = (c.size - 1) // 2
        out = 1.0
        for l in freqs:
            out *= (c[l + D] if abs(l) <= D else 0.0) / self.gamma
        return out


def _property_report(spec: BohrSpec, chi: np.ndarray) -> dict:
    N, k = spec.N, len(spec.Omega)
    B1 = bohr_set(spec)
    B2 = bohr_set(spec, 2.0)
    rev = chi[(-np.arange(N)) % N]
    off = chi[~B2]
    bound_off = (spec.eta**2 / 8) ** k
    mean = float(np.mean(chi))
    return {
        "nonnegative": bool(np.all(chi >= 0)),
        "symmetric": bool(np.allclose(chi, rev, rtol=1e-12, atol=0)),
        "finite_max": float(np.max(chi)),
        "ge1_on_B": bool(np.all(chi[B1] >= 1 - 1e-12)),
        "small_off_2B": bool(off.size == 0 or np.max(off) <= bound_off),
        "max_off_2B": float(np.max(off)) if off.size else 0.0,
        "bound_off_2B": bound_off,
        "l1": mean,
        "l1_lower": (spec.eta / 2) ** k,
        "l1_ok": bool(mean >= (spec.eta / 2) ** k),
        "bohr_size": int(B1.sum()),
    }


_CLAUSES = ("nonnegative", "symmetric", "ge1_on_B", "small_off_2B", "l1_ok")


def _check(spec: BohrSpec, chi: np.ndarray) -> dict:
    rep = _property_report(spec, chi)
    bad = [c for c in _CLAUSES if not rep[c]] + ([] if math.isfinite(rep["finite_max"]) else ["finite_max"])
    if bad:
        raise ConstructionError(f"smoothed indicator fails: {', '.join(bad)}")
    return rep


def build_chi(spec: BohrSpec, max_deg: int = 20000) -> SmoothedIndicator:
    N, Om, eta = spec.N, spec.Omega, spec.eta
    k = len(Om)
    if k == 0:
        raise ValueError("Omega must be nonempty")
    if eta * N < 0.5:
        chi = bohr_set(spec).astype(float)
        rep = _check(spec, chi)
        terms = N // int(chi.sum())
        return SmoothedIndicator(spec, "subgroup", chi, complexity=max(terms, 1), report=rep)
    if k > 8 or eta < 1 / 64:
        raise ValueError("desk-scale construction needs |Omega| <= 8 and eta >= 1/64")

    m = math.ceil(1 / (2 * eta))
    d = np.arange(N // 2 + 1)
    u = fejer_normalized(m, d / N)
    u_eta = float(u[d <= eta * N].min())
    off = d > 2 * eta * N
    u_off = float(u[off].max()) if off.any() else 0.0
    if not u_off < u_eta:
        raise ConstructionError("Fejer kernel does not separate the Bohr sets")
    need = (eta**2 / 8) ** k * (1 - 1e-6)
    for deg in range(1, max_deg + 1):
        ks = np.unique(np.ceil(np.linspace(u_off, u_eta, 9)[1:-1] * deg)).astype(int)
        ks = ks[(ks >= 1) & (ks <= deg)]
        if ks.size == 0:
            continue
        g_off = binom.sf(ks - 1, deg, u_off)
        g_eta = binom.sf(ks - 1, deg, u_eta)
        ok = g_off * g_eta ** (-float(k)) <= need
        if ok.any():
            kk = int(ks[int(np.argmax(ok))])
            break
    else:
        raise ConstructionError("no step polynomial of admissible degree")

    phi_d = binom.sf(kk - 1, deg, u)              # phi at distance d / N
    gamma = float(phi_d[d <= eta * N].min())
    chi = np.ones(N)
    for xi in Om:
        chi *= phi_d[_dist(N, xi)] / gamma
    rep = _check(spec, chi)

    # Fourier coefficients of phi: it is a trigonometric polynomial of degree D
    D = deg * (m - 1)
    L = 2 * D + 1
    samples = binom.sf(kk - 1, deg, fejer_normalized(m, np.arange(L) / L))
    c = np.fft.fft(samples) / L
    coeffs = np.real(np.concatenate((c[-D:], c[: D + 1]))) if D else np.real(c)
    # consistency of the coefficient representation, on up to 64 grid points
    pick = np.unique(np.linspace(0, d.size - 1, min(64, d.size)).astype(int))
    recon = np.real(np.exp(2j * np.pi * np.outer(pick / N, np.arange(-D, D + 1))) @ coeffs)
    rep["coefficient_residual"] = float(np.max(np.abs(recon - phi_d[pick])))
    amp = float(np.max(np.abs(coeffs))) / gamma
    complexity = max(L**k, math.ceil(amp**k))
    rep.update(m=m, deg=deg, k=kk, u_eta=u_eta, u_off=u_off)
    return SmoothedIndicator(spec, "fejer-step", chi, m, deg, kk, gamma, coeffs, complexity, rep)


# -- transference -------------------------------------------------------------

class TransferenceViolation(AssertionError):
    def __init__(self, report):
        super().__init__(f"conditions hold but |T| = {report.T_size} > eps N")
        self.report = report


@dataclass
class TransferenceReport:
    N: int
    delta: float
    eps: float
    K0: float
    eta: float
    Omega: tuple[int, ...]
    chi_mode: str | None
    cond_i: bool | None
    cond_i_margin: float | None
    cond_ii: bool
    cond_ii_value: float
    cond_iii: bool
    lr_norms: dict
    T: list[int]
    T_size: int
    conditions_hold: bool
    conclusion_holds: bool
    report_only: bool
    chi_hat_deviation: float | None
    h2_energy: float | None


def transference_demo(f1: Signal, f2: Signal, delta: float, eps: float, K0: float) -> TransferenceReport:
    N = f1.N
    if f2.N != N:
        raise ValueError("signals live on different groups")
    if np.any(np.asarray(f1.values) < 0) or np.any(np.asarray(f2.values) < 0):
        raise ValueError("signals must be nonnegative")
    eta = delta**8 * eps**2 / (1e4 * K0**2)
    F1 = dft(f1)
    Omega = tuple(sorted(set(np.flatnonzero(np.abs(F1) >= eta).tolist()) | {1 % N}))
    spec = BohrSpec(N, Omega, min(eta, 0.49))

    chi = None
    try:
        chi = build_chi(spec)
    except (ValueError, ConstructionError):
        chi = None

    cond_i = margin_i = dev = h2e = None
    if chi is not None:
        l1 = chi.l1
        f2chi = convolve(f2, Signal(N, chi.values)).values
        mid = np.arange(N)
        mid = mid[(3 * mid > N) & (3 * mid < 2 * N)]
        margin_i = float(np.min(f2chi[mid]) - delta * l1)
        cond_i = margin_i >= 0
        g2 = f2chi / l1
        h2 = np.asarray(f2.values) - g2
        h2e = float(np.mean(np.abs(convolve(f1, Signal(N, h2)).values) ** 2))
        chat = dft(Signal(N, chi.values))
        dev = float(np.max(np.abs(1 - chat[list(Omega)] / l1)))

    idx = np.arange(N)
    s_ii = float(np.sum(np.asarray(f1.values)[(3 * idx > N) & (2 * idx < N)]))
    cond_ii = s_ii >= delta * N
    norms = {(j, r): lr_norm(f, r) for j, f in ((1, f1), (2, f2)) for r in (3, 4)}
    cond_iii = all(v <= K0 for v in norms.values())

    conv = convolve(f1, f2).values
    window = [n for n in range(math.ceil(0.9 * N), N + 1)]
    T = [n for n in window if conv[n % N] < delta**2 / 3]
    holds = bool(cond_i) and cond_ii and cond_iii
    concl = len(T) <= eps * N
    rep = TransferenceReport(
        N, delta, eps, K0, eta, Omega, chi.mode if chi else None, cond_i, margin_i,
        cond_ii, s_ii, cond_iii, {f"f{j}_r{r}": v for (j, r), v in norms.items()},
        T, len(T), holds, concl, chi is None, dev, h2e,
    )
    if holds and not concl:
        raise TransferenceViolation(rep)
    return rep
