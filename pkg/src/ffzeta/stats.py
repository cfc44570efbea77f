"""Family-level statistics and the explicit-constants ledger.

Everything here averages quantities over the squarefree family of a
fixed (q, n): ratio averages against main-term predictions, Dirichlet
coefficient limits, the inverse-series cancellation statistic, and the
one-level density of zero angles against the symplectic kernel.

Exact integer or rational accumulation is used wherever the quantity
is rational; floating reductions run over the family in enumeration
order through math.fsum, so results are bit-reproducible.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from .chartab import char_table
from .ffpoly import PolyQ, factor_poly, is_squarefree
from .kernels import TestKernel
from .lfamily import FamilyL, family_angles, family_inverse_coeffs, get_family

MIN_DENOMINATOR_MARGIN = 0.05   # default distance of Re(s) above 1/2 for 1/L slots
DENOM_FLOOR = 1e-12


class StatsError(ValueError):
    pass


# ---------------------------------------------------------------------------
# explicit constants
# ---------------------------------------------------------------------------

QUADRATIC_PRESET = {"C0": 1, "C1": 2, "C1p": 1, "C2": 12, "C3": 13}


@dataclass(frozen=True)
class ConstantsLedger:
    K: int
    Q: int
    C0: Fraction
    C1: Fraction
    C1p: Fraction
    C2: Fraction
    C3: Fraction
    C6: Fraction
    C7: Fraction
    C8: Fraction
    C9: Fraction
    delta: Fraction
    omega: Fraction
    qmin_log2: Fraction | float  # log2 of the q threshold 2^12 (2 C1)^(1/(2 delta))
    qmin_exact: bool

    def as_dict(self):
        def fmt(x):
            return str(x) if isinstance(x, Fraction) else repr(x)
        return {k: fmt(getattr(self, k)) for k in
                ("K", "Q", "C0", "C1", "C1p", "C2", "C3",
                 "C6", "C7", "C8", "C9", "delta", "omega", "qmin_log2")}


def theorem_constants(K: int, Q: int, C0=1, C1=2, C1p=1, C2=12, C3=13) -> ConstantsLedger:
    """Exact rational evaluation of the stability constants.

    With the quadratic preset the threshold delta collapses to
    max(576, 2016 (K+Q))^(-1) and the per-degree saving rate omega is
    1/84; the q threshold 2^12 (2 C1)^(1/(2 delta)) is reported as a
    base-2 exponent (exact whenever C1 is a power of two)."""
    if K < 0 or Q < 0:
        raise StatsError("K and Q must be nonnegative")
    C0, C1, C1p, C2, C3 = (Fraction(x) for x in (C0, C1, C1p, C2, C3))
    if min(C0, C1, C1p, C2, C3) < 1:
        raise StatsError("the C constants must be at least 1")
    C6 = 2 * C0 * max(Fraction(1), (K + Q) * C0)
    C7 = K * C0 * C2 + C6 * C0 * C2
    C8 = K * (C0 * C3 + 2 * Q) + C6 * (C0 * C3 + 4 * Q + 2)
    C9 = C8 / (6 * C7) + (C0 * C3 + 4 * Q + 2) / (2 * C0 * C2)
    delta = 1 / (24 * max(C7, 7 * (K + Q) * C0**3 * C2))
    omega = 1 / (7 * C0**2 * C2)
    two_c1 = 2 * C1
    exact = two_c1.denominator == 1 and (two_c1.numerator & (two_c1.numerator - 1)) == 0
    if exact:
        qmin_log2 = 12 + Fraction(two_c1.numerator.bit_length() - 1) / (2 * delta)
    else:
        qmin_log2 = 12 + math.log2(float(two_c1)) / (2 * float(delta))
    return ConstantsLedger(K=K, Q=Q, C0=C0, C1=C1, C1p=C1p, C2=C2, C3=C3,
                           C6=C6, C7=C7, C8=C8, C9=C9, delta=delta, omega=omega,
                           qmin_log2=qmin_log2, qmin_exact=exact)


# ---------------------------------------------------------------------------
# ratio configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RatioSpec:
    K: int
    Q: int
    shifts: tuple  # s_1..s_{K+Q}

    def __post_init__(self):
        if len(self.shifts) != self.K + self.Q:
            raise StatsError("need one shift per L-factor")

    def validate(self, margin: float = MIN_DENOMINATOR_MARGIN):
        for v in self.shifts[self.K:]:
            if complex(v).real < 0.5 + margin:
                raise StatsError(
                    f"denominator shift {v} too close to the critical line "
                    f"(need Re s >= {0.5 + margin})")

    def x_values(self, q: int):
        return tuple(-(q ** (0.5 - complex(s))) for s in self.shifts[:self.K])

    def y_values(self, q: int):
        return tuple(q ** (0.5 - complex(s)) for s in self.shifts[self.K:])


def _horner_rows(lhat: np.ndarray, u: complex) -> np.ndarray:
    acc = np.zeros(lhat.shape[0], dtype=complex)
    for k in range(lhat.shape[1] - 1, -1, -1):
        acc = acc * u + lhat[:, k]
    return acc


def _fsum_complex(values: np.ndarray) -> complex:
    return complex(math.fsum(values.real), math.fsum(values.imag))


def ratio_average_empirical(q: int, n: int, spec: RatioSpec, normalized: bool = True,
                            fam: FamilyL | None = None,
                            margin: float = MIN_DENOMINATOR_MARGIN) -> complex:
    """Family average of prod L(s_i) / prod L(s_{K+j}) at u = q^(-s)."""
    spec.validate(margin)
    if n % 2 == 0:
        raise StatsError("statistical sweeps are restricted to odd n")
    fam = fam or get_family(q, n)
    vals = np.ones(fam.size, dtype=complex)
    for s in spec.shifts[:spec.K]:
        vals = vals * _horner_rows(fam.lhat, q ** (-complex(s)))
    for s in spec.shifts[spec.K:]:
        den = _horner_rows(fam.lhat, q ** (-complex(s)))
        small = np.abs(den) < DENOM_FLOOR
        if small.any():
            row = int(np.flatnonzero(small)[0])
            raise StatsError(f"denominator vanishes near d = {fam.modulus(row)!r}")
        vals = vals / den
    total = _fsum_complex(vals)
    return total / q**n if normalized else total


# ---------------------------------------------------------------------------
# coefficient averages (Dirichlet side)
# ---------------------------------------------------------------------------

def estimate_C5(q: int, eps: tuple, Ns: tuple, n_list,
                fams: dict | None = None):
    """Empirical coefficient-average limits.

    eps holds the +-1 signs of the K numerator slots; Ns has K + Q
    entries (numerator indices first).  Returns a list of per-n
    records and the successive differences as a Cauchy diagnostic."""
    K = len(eps)
    Q = len(Ns) - K
    if Q < 0:
        raise StatsError("N-vector shorter than the sign vector")
    if sum(Ns) > 20:
        raise StatsError("coefficient indices too large for exact accumulation")
    estimates = []
    for n in n_list:
        if n % 2 == 0:
            raise StatsError("odd n only")
        fam = (fams or {}).get((q, n)) or get_family(q, n)
        c = n - 1
        acc = np.ones(fam.size, dtype=np.int64)
        for i, N in enumerate(Ns[:K]):
            a_N = fam.lhat[:, N] if N < n else np.zeros(fam.size, dtype=np.int64)
            if eps[i] == 1:
                acc = acc * a_N
            else:
                # (-1)^c w(d) conj(A_d(N)): real coefficients, w = +1, c even
                acc = acc * ((-1) ** c * a_N)
        if Q:
            b = family_inverse_coeffs(fam, max(Ns[K:]))
            for N in Ns[K:]:
                acc = acc * b[:, N]
        total = int(acc.sum(dtype=object))
        halfpow = sum(Ns)
        value = float(total) / q**n / q**(halfpow / 2.0)
        rec = {"n": n, "value": value, "numerator": total}
        if halfpow % 2 == 0:
            rec["exact_value"] = Fraction(total, q ** (n + halfpow // 2))
        estimates.append(rec)
    diffs = [abs(estimates[i + 1]["value"] - estimates[i]["value"])
             for i in range(len(estimates) - 1)]
    return estimates, diffs


def average_char(q: int, r: PolyQ, n_list):
    """Empirical family averages q^(-n) sum chi_d(r) next to the
    Euler-product model (nonzero only for perfect squares)."""
    maxn = max(n_list)
    table = char_table(q, maxn)
    chi = table.chi_denominator(r)
    sf = table.squarefree_flags()
    empirical = []
    for n in n_list:
        sl = table.degree_slice(n)
        tot = int(chi[sl][sf[sl]].sum(dtype=np.int64))
        empirical.append({"n": n, "value": Fraction(tot, q**n)})
    fac = factor_poly(r) if r.degree > 0 else None
    is_square = fac is not None and all(e % 2 == 0 for _, e in fac.factors)
    if r.degree == 0:
        is_square = True
    if is_square:
        model = Fraction(q - 1, q)
        if fac:
            for P, _ in fac.factors:
                model *= Fraction(1, 1) / (1 + Fraction(1, P.norm()))
    else:
        model = Fraction(0)
    return empirical, model


# ---------------------------------------------------------------------------
# the main-term machinery
# ---------------------------------------------------------------------------

def _int_mobius(n: int) -> int:
    out = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            out = -out
        d += 1
    if n > 1:
        out = -out
    return out


def count_irreducibles(q: int, k: int) -> int:
    """Number of monic irreducibles of degree k over F_q."""
    return sum(_int_mobius(d) * q ** (k // d) for d in range(1, k + 1) if k % d == 0) // k


def _euler_product_log(q: int, term_fn, radius: float, precision_exp: int = 24):
    """sum_k N_q(k) * log(term_k) for factors with |term_k - 1| ~ radius^k."""
    if radius >= 1 - 1e-9:
        raise StatsError("Euler product too close to its convergence boundary")
    kmax = max(8, int(math.ceil(precision_exp * math.log(10) / -math.log(radius))))
    if kmax > 5000:
        raise StatsError("Euler product needs too many degrees; move s away from 1/2")
    acc = mpmath.mpc(0)
    for k in range(1, kmax + 1):
        nk = count_irreducibles(q, k)
        acc += nk * mpmath.log(term_fn(k))
    return acc


def _square_sum_factor(q: int, t: complex):
    """sum over monic e of prod_{P | e}(1+|P|^-1)^-1 * t^(deg e)
    = Z(t) * prod_P (1 - t^(deg P)/(|P|+1)), Z(t) = 1/(1-qt)."""
    tm = mpmath.mpc(t)
    if abs(complex(1 - q * tm)) < 1e-9:
        raise StatsError("zeta factor of the diagonal sum blows up at this shift")
    def term(k):
        return 1 - tm**k / (q**k + 1)
    logs = _euler_product_log(q, term, abs(t))
    return mpmath.exp(logs) / (1 - q * tm)


def _pair_sum_factor(q: int, v: complex, u: complex):
    """The (1,1) diagonal sum Z(v)/Z(u) * prod_P local2 with both zeta
    factors pulled out:

        prod_P (1 - (v^dP + |P| u^dP)/(|P|+1))
            = (1 - q u) * prod_P (1 + (u^dP - v^dP)/((|P|+1)(1 - u^dP)))

    so the swap branch vanishes cleanly on the diagonal s1 = s2."""
    vm, um = mpmath.mpc(v), mpmath.mpc(u)
    if abs(complex(1 - q * vm)) < 1e-9:
        raise StatsError("zeta factor of the diagonal sum blows up at this shift")
    radius = max(abs(v), abs(u))
    def term(k):
        return 1 + (um**k - vm**k) / ((q**k + 1) * (1 - um**k))
    logs = _euler_product_log(q, term, radius)
    return mpmath.exp(logs) * (1 - q * um) / (1 - q * vm)


def model_F(q: int, K: int, Q: int, eps: tuple, shifts: tuple) -> complex:
    """Closed-form F(eps, s) for the quadratic family, (K, Q) small.

    Derived from the diagonal-square Euler products of the coefficient
    averages; the zeta pole is factored out so the formula continues
    meromorphically across the region where the raw series diverges."""
    c4 = 1 - 1 / q
    if K == 0 and Q == 0:
        return c4
    if K == 0 and Q == 1:
        return c4  # inverse coefficients average to the N = 0 term only
    if K == 1 and Q == 0:
        s1 = complex(shifts[0])
        t = q ** (2 * eps[0] * (0.5 - s1) - 1)
        return complex(c4 * _square_sum_factor(q, t))
    if K == 1 and Q == 1:
        s1, s2 = complex(shifts[0]), complex(shifts[1])
        v = q ** (2 * eps[0] * (0.5 - s1) - 1)
        u = q ** (eps[0] * (0.5 - s1) + (0.5 - s2) - 1)
        return complex(c4 * _pair_sum_factor(q, v, u))
    raise StatsError(f"no closed-form model for (K, Q) = ({K}, {Q})")


@dataclass
class MainTerm:
    value: complex
    rr_l: complex
    pieces: dict
    meta: dict = field(default_factory=dict)


def recipe_main_term(q: int, n: int, spec: RatioSpec, source: str = "model",
                     n_max: int | None = None, c5_n: int | None = None) -> MainTerm:
    """MT(s; n) = sum_eps F(eps, s) prod_{eps_i = -1} (-1)^c q^(c(1/2 - s_i)),
    plus the Ratios-Recipe normalization RR_L = |family| * MT / C4."""
    K, Q = spec.K, spec.Q
    if K + Q > 2:
        raise StatsError("main terms implemented for K + Q <= 2")
    if n % 2 == 0:
        raise StatsError("odd n only")
    spec.validate()
    c = n - 1
    c4 = 1 - 1 / q
    pieces = {}
    meta = {"source": source}
    total = 0j
    for eps in itertools.product((1, -1), repeat=K):
        if source == "model":
            f_val = model_F(q, K, Q, eps, spec.shifts)
        elif source == "empirical":
            f_val, info = _empirical_F(q, K, Q, eps, spec.shifts, n, n_max, c5_n)
            meta[f"trunc_{eps}"] = info
        else:
            raise StatsError(f"unknown coefficient source {source!r}")
        swap = 1.0 + 0j
        for i in range(K):
            if eps[i] == -1:
                swap *= (-1) ** c * q ** (c * (0.5 - complex(spec.shifts[i])))
        pieces[eps] = complex(f_val)
        total += f_val * swap
    size = q**n - q ** (n - 1)
    return MainTerm(value=complex(total), rr_l=complex(total) * size / c4,
                    pieces=pieces, meta=meta)


def _empirical_F(q, K, Q, eps, shifts, n, n_max, c5_n):
    """Truncated F series with coefficients estimated from a family.

    The eps = -1 numerator branch is summed only to N <= c/2 (its raw
    series diverges for Re s > 1/2; this is the cutoff the symmetric
    half of the approximate functional equation justifies)."""
    data_n = c5_n or n
    fam = get_family(q, data_n)
    cap = n_max or 4 * n
    caps = []
    for i in range(K):
        caps.append(min(cap, data_n - 1) if eps[i] == 1
                    else min((n - 1) // 2, data_n - 1))
    for _ in range(Q):
        caps.append(cap)
    grids = [range(c + 1) for c in caps]
    total = 0j
    b = family_inverse_coeffs(fam, max(caps[K:])) if Q else None
    for Nvec in itertools.product(*grids):
        prod = np.ones(fam.size, dtype=np.float64)
        for i in range(K):
            a_N = fam.lhat[:, Nvec[i]] if Nvec[i] < data_n else 0
            prod = prod * a_N
        for jj in range(Q):
            prod = prod * b[:, Nvec[K + jj]]
        c5 = math.fsum(prod) / q**data_n / q ** (sum(Nvec) / 2.0)
        w = 1.0 + 0j
        for i in range(K):
            w *= q ** (eps[i] * (0.5 - complex(shifts[i])) * Nvec[i])
        for jj in range(Q):
            w *= q ** ((0.5 - complex(shifts[K + jj])) * Nvec[K + jj])
        total += c5 * w
    return total, {"caps": caps, "data_n": data_n}


# ---------------------------------------------------------------------------
# cancellation statistic and one-level density
# ---------------------------------------------------------------------------

def moebius_cancellation(q: int, n: int, R: int, fam: FamilyL | None = None):
    """(1/|family|) sum_d q^(-R/2) b_d(R); exactly 1 at R = 0.

    Returns (float value, exact integer numerator, family size)."""
    if R < 0:
        raise StatsError("R must be nonnegative")
    if n % 2 == 0 or n < 3:
        raise StatsError("odd n >= 3 only")
    fam = fam or get_family(q, n)
    b = family_inverse_coeffs(fam, R)
    total = int(b[:, R].sum(dtype=object))
    value = total / (fam.size * q ** (R / 2.0))
    return value, total, fam.size


def one_level_density(q: int, n: int, kernel: TestKernel,
                      fam: FamilyL | None = None, tol: float = 1e-9):
    """(empirical, reference) for the low-lying zero statistic.

    empirical = family average of sum_j F(theta_j / log q; n) using the
    exact Poisson form of the periodization; reference is the kernel
    paired with 1 - sin(2 pi x)/(2 pi x) on the Fourier side."""
    if n % 2 == 0:
        raise StatsError("odd n only")
    fam = fam or get_family(q, n)
    angles, _resid = family_angles(fam, tol)
    width = n - 1
    c = angles.shape[1]
    mmax = int(math.floor(kernel.lam * width + 1e-12))
    acc = kernel.g(0.0) * c * np.ones(fam.size)
    for m in range(1, mmax + 1):
        gm = kernel.g(m / width)
        if gm:
            acc = acc + 2.0 * gm * np.cos(m * angles).sum(axis=1)
    per_d = acc / width
    empirical = math.fsum(per_d) / fam.size
    return empirical, kernel.density_reference()
