"""Vectorized Weil-polynomial sweeps over whole squarefree families.

The point-count path evaluates d(t) for every monic degree-n modulus
at once: for a fixed t in F_{q^j}, d(t) is an F_q-linear form in the
digit vector of d, so all q^n values come from one packed integer
matrix-vector product.  Field elements are packed base 256 (one byte
per F_p digit), which keeps digit sums carry-free for n <= 15.

A family cache file is plain text:

    FFZLFC1;q=<q>;n=<n>
    <a_1...a_n digits>;<ahat_0,...,ahat_{n-1}>

one line per squarefree modulus in enumeration (lex) order.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field

import numpy as np

from .chartab import char_table
from .fields import field_make
from .ffpoly import PolyQ, monic_digit_matrix, poly_from_index, squarefree_mask
from .lfunc import (LFuncError, LPolynomial, batched_zero_angles,
                    lpoly_charsum, newton_coeffs_from_power_sums,
                    reciprocity_parity)

CACHE_MAGIC = "FFZLFC1"


@dataclass
class FamilyL:
    """All squarefree monic degree-n moduli with their Weil polynomials."""
    q: int
    n: int
    indices: np.ndarray          # lex indices into the monic family, ascending
    digits: np.ndarray           # (M, n) uint8
    lhat: np.ndarray             # (M, n) int64, coefficients 0..n-1
    method: str = "pointcount"
    meta: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.indices)

    def lpolynomial(self, row: int) -> LPolynomial:
        return LPolynomial(q=self.q, n=self.n,
                           dcoeffs=tuple(int(x) for x in self.digits[row]),
                           lhat=tuple(int(x) for x in self.lhat[row]))

    def modulus(self, row: int) -> PolyQ:
        return poly_from_index(field_make(self.q, 1), self.n, int(self.indices[row]))


def _packed_encoding(ext):
    """enc[v] = base-256 packing of the base-p digit vector of v."""
    p, j = ext.p, ext.j
    enc = np.empty(ext.q, dtype=np.int64)
    for v in range(ext.q):
        acc = 0
        vv = v
        for k in range(j):
            acc += (vv % p) << (8 * k)
            vv //= p
        enc[v] = acc
    return enc


def _unpack_to_index(raw, p, j):
    """Inverse of the packing after digitwise reduction mod p."""
    idx = np.zeros_like(raw)
    mult = 1
    for k in range(j):
        idx += ((raw >> (8 * k)) & 0xFF) % p * mult
        mult *= p
    return idx


def family_power_sums(q: int, n: int, jmax: int, digit_cols=None) -> np.ndarray:
    """P_j = sum over t in F_{q^j} of chi(d(t)) for every monic d.

    Returns an (q^n, jmax) int64 matrix in lex order."""
    total = q**n
    if digit_cols is None:
        digits = monic_digit_matrix(q, n)
        digit_cols = [digits[:, i].astype(np.int64) for i in range(n)]
    out = np.zeros((total, jmax), dtype=np.int64)
    for j in range(1, jmax + 1):
        ext = field_make(q, j)
        enc = _packed_encoding(ext)
        chi = ext.chi_table().astype(np.int64)
        for t in range(ext.q):
            raw = np.full(total, int(enc[ext.pow(t, n)]), dtype=np.int64)
            for i in range(n):
                tp = enc[ext.pow(t, n - 1 - i)]
                if tp:
                    raw += digit_cols[i] * int(tp)
            vals = _unpack_to_index(raw, ext.p, j)
            out[:, j - 1] += chi[vals]
    return out


def build_family(q: int, n: int, method: str = "pointcount",
                 selfcheck_charsum: bool = True) -> FamilyL:
    """Compute the full squarefree family at (q, n).

    method 'pointcount' needs odd n and is the fast path; 'charsum'
    loops over moduli; 'both' runs the two independent algorithms and
    insists on exact agreement."""
    ctx = field_make(q, 1)
    if ctx.p % 2 == 0:
        raise LFuncError("q must be an odd prime")
    mask = squarefree_mask(q, n)
    indices = np.flatnonzero(mask)
    digits = monic_digit_matrix(q, n)[indices]
    if method not in ("pointcount", "charsum", "both"):
        raise ValueError(f"unknown method {method!r}")
    want_pc = method in ("pointcount", "both")
    if want_pc and n % 2 == 0:
        raise LFuncError("point-count path needs odd n; use method='charsum'")
    lhat_pc = _family_pointcount(q, n, indices, digits) if want_pc else None
    lhat_cs = None
    if method in ("charsum", "both"):
        lhat_cs = np.empty((len(indices), n), dtype=np.int64)
        for row in range(len(indices)):
            d = PolyQ.monic_from_digits(ctx, tuple(int(x) for x in digits[row]))
            lhat_cs[row] = lpoly_charsum(ctx, d, selfcheck=selfcheck_charsum).lhat
    if method == "both" and not np.array_equal(lhat_pc, lhat_cs):
        bad = np.flatnonzero((lhat_pc != lhat_cs).any(axis=1))[:5]
        raise LFuncError(f"charsum and point count disagree at rows {bad.tolist()}")
    lhat = lhat_pc if lhat_pc is not None else lhat_cs
    fam = FamilyL(q=q, n=n, indices=indices, digits=digits, lhat=lhat, method=method)
    verify_family(fam)
    return fam


def _family_pointcount(q, n, indices, digits):
    g = (n - 1) // 2
    total = q**n
    cols_full = monic_digit_matrix(q, n)
    digit_cols = [cols_full[:, i].astype(np.int64) for i in range(n)]
    psums_all = family_power_sums(q, n, g, digit_cols) if g else np.zeros((total, 0), np.int64)
    sigma = reciprocity_parity(q, n)
    psums = -psums_all[indices]  # sum(alpha^j) = -sigma^j P_j
    if sigma == -1:
        psums[:, 0::2] *= -1  # odd j sit at even column offsets
    m = len(indices)
    lhat = np.zeros((m, n), dtype=np.int64)
    lhat[:, 0] = 1
    e = [np.ones(m, dtype=np.int64)]
    for k in range(1, g + 1):
        acc = np.zeros(m, dtype=np.int64)
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * psums[:, i - 1]
        if (acc % k).any():
            raise LFuncError("vectorized Newton identity gave non-integers")
        e.append(acc // k)
        lhat[:, k] = (-1) ** k * e[k]
    for k in range(g + 1, 2 * g + 1):
        lhat[:, k] = q ** (k - g) * lhat[:, 2 * g - k]
    return lhat


def verify_family(fam: FamilyL) -> None:
    """Exact functional-equation symmetry for every member (odd n)."""
    if fam.n % 2 == 0:
        return
    c = fam.n - 1
    for N in range(c // 2 + 1):
        lhs = fam.lhat[:, c - N]
        rhs = fam.q ** (c // 2 - N) * fam.lhat[:, N]
        if not np.array_equal(lhs, rhs):
            raise LFuncError("functional equation fails inside family sweep")


def family_angles(fam: FamilyL, tol: float = 1e-9):
    """(M, c) zero-angle matrix plus the achieved residual bound."""
    if fam.n % 2 == 0:
        raise LFuncError("angle sweep expects odd n")
    return batched_zero_angles(fam.q, fam.lhat, tol)


def family_inverse_coeffs(fam: FamilyL, r_max: int) -> np.ndarray:
    """b(0..r_max) rows of 1/L via the exact integer recurrence."""
    m = fam.size
    b = np.zeros((m, r_max + 1), dtype=np.int64)
    b[:, 0] = 1
    for r in range(1, r_max + 1):
        acc = np.zeros(m, dtype=np.int64)
        for i in range(1, min(r, fam.n - 1) + 1):
            acc += fam.lhat[:, i] * b[:, r - i]
        b[:, r] = -acc
    return b


def sample_rows(fam: FamilyL, count: int, seed: int) -> np.ndarray:
    """Deterministic sample of row positions (sorted, no repeats)."""
    rng = random.Random(seed)
    if count >= fam.size:
        return np.arange(fam.size)
    return np.array(sorted(rng.sample(range(fam.size), count)), dtype=np.int64)


# ---------------------------------------------------------------------------
# cache file format
# ---------------------------------------------------------------------------

def write_cache(fam: FamilyL, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(f"{CACHE_MAGIC};q={fam.q};n={fam.n}\n")
        for row in range(fam.size):
            ds = "".join(str(int(x)) for x in fam.digits[row])
            cs = ",".join(str(int(x)) for x in fam.lhat[row])
            fh.write(f"{ds};{cs}\n")


def read_cache(path: str) -> FamilyL:
    with open(path) as fh:
        header = fh.readline().strip()
        parts = header.split(";")
        if len(parts) != 3 or parts[0] != CACHE_MAGIC:
            raise LFuncError(f"bad cache header {header!r}")
        q = int(parts[1].split("=")[1])
        n = int(parts[2].split("=")[1])
        digs, lhats = [], []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            dstr, cstr = line.split(";")
            digs.append([int(ch) for ch in dstr])
            lhats.append([int(x) for x in cstr.split(",")])
    digits = np.array(digs, dtype=np.uint8)
    lhat = np.array(lhats, dtype=np.int64)
    qpow = np.array([q**(n - 1 - i) for i in range(n)], dtype=np.int64)
    indices = digits.astype(np.int64) @ qpow
    fam = FamilyL(q=q, n=n, indices=indices, digits=digits, lhat=lhat, method="cache")
    verify_family(fam)
    return fam


def cache_dir() -> str:
    return os.environ.get("FFZ_CACHE_DIR", os.path.join(os.path.expanduser("~"), ".ffzeta"))


def cache_path(q: int, n: int, base: str | None = None) -> str:
    root = base or cache_dir()
    return os.path.join(root, f"lfun_q{q}_n{n}.ffzlfc")


_FAMILY_MEMO: dict = {}


def get_family(q: int, n: int, prefer_cache: bool = True, store: bool = False) -> FamilyL:
    """Family access with an in-process memo and the on-disk cache."""
    key = (q, n)
    if key in _FAMILY_MEMO:
        return _FAMILY_MEMO[key]
    path = cache_path(q, n)
    if prefer_cache and os.path.exists(path):
        fam = read_cache(path)
    else:
        method = "pointcount" if n % 2 else "charsum"
        fam = build_family(q, n, method=method)
        if store:
            os.makedirs(os.path.dirname(path), exist_ok=True)
            write_cache(fam, path)
    _FAMILY_MEMO[key] = fam
    return fam
