"""Exact Weil polynomials of quadratic characters over F_q[t].

For squarefree monic d of degree n, L(s, chi_d) is a polynomial in
u = q^(-s) with integer coefficients a_hat[N] = sum over monic r of
degree N of chi_d(r).  Two independent algorithms produce it:

* lpoly_charsum sums Jacobi symbols over all monic r directly;
* lpoly_pointcount (odd n) counts points of y^2 = d(t) over F_{q^j}
  for j = 1..g and recovers the coefficients through Newton's
  identities plus the functional equation.

Completion multiplies in the place at infinity (a factor only for
even n), after which the coefficient symmetry
a_hat[c-N] = w * q^(c/2-N) * a_hat[N] holds exactly over the integers.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .chartab import char_table
from .fields import field_make
from .ffpoly import PolyQ, PolyError, is_squarefree

DEFAULT_ZERO_TOL = 1e-9


class LFuncError(ValueError):
    pass


@dataclass(frozen=True)
class LPolynomial:
    q: int
    n: int                # degree of the modulus d
    dcoeffs: tuple        # digit tuple (a_1..a_n) of d
    lhat: tuple           # integer coefficients, constant term first
    completed: bool = False
    c: int | None = None  # conductor degree, set by complete()
    w: int | None = None  # root number, set by check_functional_equation()

    @property
    def modulus(self) -> PolyQ:
        return PolyQ.monic_from_digits(field_make(self.q, 1), self.dcoeffs)

    def evaluate(self, u: complex) -> complex:
        acc = 0j
        for a in reversed(self.lhat):
            acc = acc * u + a
        return acc

    def evaluate_at_s(self, s: complex) -> complex:
        return self.evaluate(self.q ** (-s))


@dataclass(frozen=True)
class ZeroSet:
    angles: tuple          # theta_j in (-pi, pi], root u_j = q^(-1/2) e^(-i theta_j)
    tolerance: float       # achieved residual bound


def _validate_modulus(ctx, d: PolyQ):
    if ctx.j != 1 or ctx.p % 2 == 0:
        raise LFuncError("q must be an odd prime")
    if not d.is_monic():
        raise LFuncError("modulus must be monic")
    if not is_squarefree(d):
        raise LFuncError(f"modulus {d!r} is not squarefree")


def lpoly_charsum(ctx, d: PolyQ, selfcheck: bool = True) -> LPolynomial:
    """Dirichlet coefficients by direct character sums over monic r.

    With selfcheck on, also verifies that the degree-n coefficient
    vanishes (the series is a polynomial of degree < n)."""
    _validate_modulus(ctx, d)
    n = int(d.degree)
    cap = n if selfcheck else n - 1
    table = char_table(ctx.p, max(cap, 1))
    chi = table.chi_for(d)
    lhat = [int(chi[table.degree_slice(N)].sum(dtype=np.int64)) for N in range(n)]
    if selfcheck:
        top = int(chi[table.degree_slice(n)].sum(dtype=np.int64))
        if top != 0:
            raise LFuncError(f"charsum self-check failed: degree-{n} sum is {top}")
    if lhat[0] != 1:
        raise LFuncError("constant coefficient must be 1")
    return LPolynomial(q=ctx.q, n=n, dcoeffs=d.digits(), lhat=tuple(lhat))


def newton_coeffs_from_power_sums(power_sums, g: int):
    """e_1..e_g of the Weil numbers from p_j = sum(alpha^j) = -P_j."""
    e = [1] + [0] * g
    for k in range(1, g + 1):
        acc = 0
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * power_sums[i - 1]
        if acc % k:
            raise LFuncError("Newton identity gave a non-integer coefficient")
        e[k] = acc // k
    return e[1:]


def reciprocity_parity(q: int, n: int) -> int:
    """Sign relating the (r/d) Dirichlet series to the curve L-function.

    Quadratic reciprocity gives (r/d) = (d/r) (-1)^(((q-1)/2) deg r deg d)
    for monic coprime r, d, so for q = 3 (mod 4) and odd n the two
    polynomials differ by the twist u -> -u."""
    return -1 if ((q - 1) // 2 * n) % 2 else 1


def lpoly_pointcount(ctx, d: PolyQ) -> LPolynomial:
    """Weil polynomial from point counts of y^2 = d(t) over F_{q^j}.

    Only odd-degree moduli: counts give the first g coefficients and
    the (unconditional, w = +1) functional equation fills the rest.
    Power sums carry the reciprocity parity so the result matches the
    (r/d) character sums exactly."""
    _validate_modulus(ctx, d)
    n = int(d.degree)
    if n % 2 == 0:
        raise LFuncError("point-count algorithm needs odd degree")
    g = (n - 1) // 2
    sigma = reciprocity_parity(ctx.q, n)
    psums = []
    for j in range(1, g + 1):
        ext = field_make(ctx.p, j)
        chi = ext.chi_table()
        total = 0
        for t in range(ext.q):
            total += int(chi[d(t, ctx=ext)])
        psums.append(-(sigma**j) * total)  # sum(alpha^j) = -sigma^j P_j
    e = newton_coeffs_from_power_sums(psums, g)
    lhat = [1] + [(-1) ** k * e[k - 1] for k in range(1, g + 1)]
    for k in range(g + 1, 2 * g + 1):
        lhat.append(ctx.q ** (k - g) * lhat[2 * g - k])
    return LPolynomial(q=ctx.q, n=n, dcoeffs=d.digits(), lhat=tuple(lhat))


def complete(L: LPolynomial) -> LPolynomial:
    """Multiply in the place at infinity: identity for odd n, exact
    division by (1 - u) for even n."""
    if L.completed:
        raise LFuncError("already completed")
    if L.n % 2 == 1:
        return replace(L, completed=True, c=L.n - 1)
    prefix = 0
    lam = []
    for a in L.lhat:
        prefix += a
        lam.append(prefix)
    if lam[-1] != 0:
        raise LFuncError("completion failed: (1 - u) does not divide L")
    return replace(L, lhat=tuple(lam[:-1]), completed=True, c=L.n - 2)


def check_functional_equation(L: LPolynomial) -> int:
    """Verify a_hat[c-N] = w q^(c/2-N) a_hat[N] exactly; returns w."""
    if not L.completed:
        raise LFuncError("complete() the L-function first")
    c = L.c
    assert c is not None and c % 2 == 0
    lhat = L.lhat
    if len(lhat) != c + 1:
        raise LFuncError("coefficient length does not match conductor degree")
    if c == 0:
        return 1
    qc = L.q ** (c // 2)
    if lhat[c] % qc:
        raise LFuncError("leading coefficient is not divisible by q^(c/2)")
    w = lhat[c] // qc
    if w not in (-1, 1):
        raise LFuncError(f"root number {w} is not a unit")
    for N in range(c + 1):
        if N <= c - N:
            if lhat[c - N] != w * L.q ** (c // 2 - N) * lhat[N]:
                raise LFuncError(f"functional equation fails at N={N}")
    if L.n % 2 == 1 and w != 1:
        raise LFuncError("odd-degree modulus must have root number +1")
    return w


def with_root_number(L: LPolynomial) -> LPolynomial:
    return replace(L, w=check_functional_equation(L))


# ---------------------------------------------------------------------------
# zeros
# ---------------------------------------------------------------------------

def _chebyshev_basis(g: int, w: np.ndarray):
    """Stack of v^k + v^(-k) as polynomials in w = v + 1/v, evaluated."""
    out = [np.full_like(w, 2.0), w.copy()]
    for _ in range(2, g + 1):
        out.append(w * out[-1] - out[-2])
    return out


def _real_palindrome_roots(bsym: np.ndarray, tol: float):
    """Roots w in [-2, 2] of the Chebyshev reduction of normalized
    palindromic coefficient rows bsym with shape (M, c+1)."""
    M, width = bsym.shape
    c = width - 1
    g = c // 2
    if g == 0:
        return np.zeros((M, 0)), 0.0
    # r(w) = b_g + sum_k b_{g+k} (v^k + v^-k), monic of degree g in w
    coeffs = np.zeros((M, g + 1))  # low-first in w
    coeffs[:, 0] = bsym[:, g]
    # basis[k] holds the w-coefficients of v^k + v^(-k)
    basis = [[2.0] + [0.0] * g, [0.0, 1.0] + [0.0] * (g - 1)]
    for k in range(2, g + 1):
        nxt = [0.0] * (g + 1)
        prev, pprev = basis[k - 1], basis[k - 2]
        for i in range(g):
            nxt[i + 1] += prev[i]
        for i in range(g + 1):
            nxt[i] -= pprev[i]
        basis.append(nxt)
    for k in range(1, g + 1):
        coeffs += np.outer(bsym[:, g + k], basis[k])
    lead = coeffs[:, g:g + 1]
    if np.abs(lead).min(initial=1.0) < 0.5:
        raise LFuncError("degenerate leading coefficient in reduced polynomial")
    coeffs = coeffs / lead
    comp = np.zeros((M, g, g))
    comp[:, 1:, :-1] = np.eye(g - 1)
    comp[:, :, -1] = -coeffs[:, :g]
    wroots = np.linalg.eigvals(comp)
    # genuinely complex roots would mean zeros off the circle; near-multiple
    # real roots only smear into conjugate pairs at the 1e-5 level
    if np.abs(wroots.imag).max(initial=0.0) > 1e-3:
        raise LFuncError("complex root of the reduced polynomial (zeros off the circle)")
    w = wroots.real
    der = coeffs[:, 1:] * np.arange(1, g + 1)
    for _ in range(2):  # Newton polish, skipped near multiple roots
        rv = _poly_eval_rows(coeffs, w)
        dv = _poly_eval_rows(der, w)
        safe = np.abs(dv) > 1e-8
        w = np.where(safe, w - rv / np.where(safe, dv, 1.0), w)
    resid = np.abs(_poly_eval_rows(coeffs, w))
    scale = 1.0 + np.abs(coeffs).sum(axis=1, keepdims=True)
    max_rel = float((resid / scale).max(initial=0.0))
    if max_rel > tol:
        raise LFuncError(f"zero residual {max_rel:.3e} above tolerance {tol:.1e}")
    if float(np.abs(w).max(initial=0.0)) > 2.0 + tol:
        raise LFuncError("reduced root outside [-2, 2]: zero off the critical circle")
    return np.clip(w, -2.0, 2.0), max_rel


def _poly_eval_rows(coeffs, x):
    acc = np.zeros_like(x)
    for k in range(coeffs.shape[1] - 1, -1, -1):
        acc = acc * x + coeffs[:, k:k + 1]
    return acc


def batched_zero_angles(q: int, lhat_rows: np.ndarray, tol: float = DEFAULT_ZERO_TOL):
    """Angle matrix (M, c) for completed coefficient rows (M, c+1)
    with root number +1.

    Row N is scaled by q^(-N/2); the palindrome symmetry then puts all
    roots at |u| = q^(-1/2) exactly, and the returned angles come in
    +/- pairs by construction."""
    rows = np.asarray(lhat_rows, dtype=np.int64)
    c = rows.shape[1] - 1
    if c and not np.array_equal(rows[:, -1], np.full(rows.shape[0], q ** (c // 2))):
        raise LFuncError("batched zero solver expects root number +1 rows")
    scale = q ** (-0.5 * np.arange(c + 1))
    bsym = rows.astype(np.float64) * scale
    w, resid = _real_palindrome_roots(bsym, tol)
    theta = np.arccos(np.clip(w / 2.0, -1.0, 1.0))
    angles = np.concatenate([-theta, theta], axis=1)
    angles.sort(axis=1)
    return angles, resid


def zero_angles(L: LPolynomial, tol: float = DEFAULT_ZERO_TOL) -> ZeroSet:
    """All c zeros of the completed polynomial as critical-circle angles."""
    if not L.completed:
        raise LFuncError("complete() the L-function first")
    w = check_functional_equation(L)
    if L.c == 0:
        return ZeroSet(angles=(), tolerance=0.0)
    extra = []
    bsym = np.array(L.lhat, dtype=np.float64) * L.q ** (-0.5 * np.arange(L.c + 1))
    if w == -1:
        # antisymmetric rows vanish at v = +1 and v = -1; deflate by v^2 - 1
        extra = [0.0, np.pi]
        deflated = _deflate_v2_minus_1(bsym)
        bsym = deflated
    wr, resid = _real_palindrome_roots(bsym[None, :], tol)
    theta = np.arccos(np.clip(wr[0] / 2.0, -1.0, 1.0))
    vals = sorted(list(-theta) + list(theta) + extra)
    # represent angles in (-pi, pi]: map -pi to +pi
    vals = [a if a > -np.pi + 1e-12 else np.pi for a in vals]
    return ZeroSet(angles=tuple(sorted(vals)), tolerance=resid)


def _deflate_v2_minus_1(b):
    # quotient of sum b_N v^N by (v^2 - 1), exact for w = -1 rows
    c = len(b) - 1
    quo = np.zeros(c - 1)
    rem = b.copy()
    for k in range(c, 1, -1):
        quo[k - 2] = rem[k]
        rem[k - 2] += rem[k]
        rem[k] = 0.0
    if max(abs(rem[0]), abs(rem[1])) > 1e-9:
        raise LFuncError("deflation by v^2 - 1 left a remainder")
    return quo


def invert_series(L: LPolynomial, r_max: int):
    """Integer coefficients b(0..r_max) of 1/L as a power series in u."""
    if L.lhat[0] != 1:
        raise LFuncError("series inversion needs constant term 1")
    a = L.lhat
    b = [1]
    for r in range(1, r_max + 1):
        acc = 0
        for i in range(1, min(r, len(a) - 1) + 1):
            acc += a[i] * b[r - i]
        b.append(-acc)
    return b


def point_count_curve(ctx, d: PolyQ, j: int):
    """(affine, projective) point counts of y^2 = d(t) over F_{q^j}."""
    _validate_modulus(ctx, d)
    if int(d.degree) % 2 == 0:
        raise LFuncError("odd-degree modulus required")
    ext = field_make(ctx.p, j)
    chi = ext.chi_table()
    affine = 0
    for t in range(ext.q):
        affine += 1 + int(chi[d(t, ctx=ext)])
    return affine, affine + 1
