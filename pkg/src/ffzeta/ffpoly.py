"""Dense polynomial arithmetic over F_q[t].

PolyQ values are immutable coefficient tuples (low degree first, no
trailing zeros; the zero polynomial is the empty tuple with degree
-inf).  Fast inner loops for prime fields work on raw tuples of
residues; the class methods delegate to them when the context is a
prime field and fall back to FieldCtx element ops otherwise.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

import numpy as np

from .fields import FieldCtx, FieldError, field_make

NEG_INF = float("-inf")

FACTOR_SEED = 0x5EED  # fixed so factorizations are reproducible


class PolyError(ValueError):
    pass


# ---------------------------------------------------------------------------
# raw tuple kernels, prime field (coefficients are ints mod p, low first)
# ---------------------------------------------------------------------------

def _trim(cs):
    n = len(cs)
    while n and cs[n - 1] == 0:
        n -= 1
    return tuple(cs[:n])


def _padd(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] = (out[i] + x) % p
    return _trim(out)


def _psub(a, b, p):
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, x in enumerate(b):
        out[i] = (out[i] - x) % p
    return _trim(out)


def _pmul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for k, y in enumerate(b):
                out[i + k] = (out[i + k] + x * y) % p
    return _trim(out)


def _pdivmod(a, b, p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    da, db = len(a) - 1, len(b) - 1
    if da < db:
        return (), a
    inv = pow(b[-1], p - 2, p)
    rem = list(a)
    quo = [0] * (da - db + 1)
    for i in range(da, db - 1, -1):
        c = rem[i] * inv % p
        if c:
            quo[i - db] = c
            for k in range(db + 1):
                rem[i - db + k] = (rem[i - db + k] - c * b[k]) % p
    return _trim(quo), _trim(rem)


def _pmod(a, b, p):
    return _pdivmod(a, b, p)[1]


def _pgcd(a, b, p):
    while b:
        a, b = b, _pmod(a, b, p)
    if not a:
        return ()
    inv = pow(a[-1], p - 2, p)
    return tuple(c * inv % p for c in a)


def _pderiv(a, p):
    return _trim([(i * c) % p for i, c in enumerate(a)][1:])


def _ppowmod(a, e, m, p):
    r = (1,)
    a = _pmod(a, m, p)
    while e:
        if e & 1:
            r = _pmod(_pmul(r, a, p), m, p)
        a = _pmod(_pmul(a, a, p), m, p)
        e >>= 1
    return r


def _jacobi_tuple(r, f, p):
    """Jacobi symbol (r/f) over F_p[t] for monic f, odd p.

    Euclid loop: reduce, pull out the leading unit via the constant
    symbol (c/f) = legendre(c)^(deg f), then swap the arguments with
    the quadratic reciprocity sign (-1)^(((p-1)/2) deg r deg f)."""
    s = (p - 1) // 2
    acc = 1
    while True:
        if len(f) == 1:
            return acc  # f == 1
        r = _pmod(r, f, p)
        if not r:
            return 0
        df = len(f) - 1
        if len(r) == 1:
            leg = 1 if pow(r[0], s, p) == 1 else -1
            return acc * (leg if df % 2 else 1)
        c = r[-1]
        if c != 1:
            if pow(c, s, p) != 1 and df % 2:
                acc = -acc
            cinv = pow(c, p - 2, p)
            r = tuple(x * cinv % p for x in r)
        if (s * (len(r) - 1) * df) % 2:
            acc = -acc
        r, f = f, r


# ---------------------------------------------------------------------------
# PolyQ
# ---------------------------------------------------------------------------

class PolyQ:
    """Immutable dense polynomial over a FieldCtx."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs):
        self.ctx = ctx
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(int(c) % ctx.q if ctx.j == 1 else int(c) for c in cs)

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, ctx):
        return cls(ctx, ())

    @classmethod
    def one(cls, ctx):
        return cls(ctx, (1,))

    @classmethod
    def t(cls, ctx):
        return cls(ctx, (0, 1))

    @classmethod
    def monic_from_digits(cls, ctx, digits):
        """t^n + a_1 t^{n-1} + ... + a_n from the digit tuple (a_1..a_n)."""
        return cls(ctx, tuple(reversed(digits)) + (1,))

    # -- basic properties --------------------------------------------------

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self):
        return not self.coeffs

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def leading(self):
        if not self.coeffs:
            raise PolyError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def norm(self):
        """|r| = q^deg r for nonzero r."""
        if not self.coeffs:
            raise PolyError("norm of zero polynomial")
        return self.ctx.q ** (len(self.coeffs) - 1)

    def digits(self):
        """High-first digit tuple (a_1..a_n) of a monic polynomial."""
        if not self.is_monic():
            raise PolyError("digits are defined for monic polynomials")
        return tuple(reversed(self.coeffs[:-1]))

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other):
        if self.ctx != other.ctx:
            raise PolyError("mixed field contexts")

    def __add__(self, other):
        self._check(other)
        if self.ctx.j == 1:
            return PolyQ(self.ctx, _padd(self.coeffs, other.coeffs, self.ctx.p))
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        out = [self.ctx.add(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)]
        return PolyQ(self.ctx, out)

    def __sub__(self, other):
        self._check(other)
        if self.ctx.j == 1:
            return PolyQ(self.ctx, _psub(self.coeffs, other.coeffs, self.ctx.p))
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        out = [self.ctx.sub(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)]
        return PolyQ(self.ctx, out)

    def __mul__(self, other):
        self._check(other)
        if self.ctx.j == 1:
            return PolyQ(self.ctx, _pmul(self.coeffs, other.coeffs, self.ctx.p))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return PolyQ.zero(self.ctx)
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for k, y in enumerate(b):
                    out[i + k] = self.ctx.add(out[i + k], self.ctx.mul(x, y))
        return PolyQ(self.ctx, out)

    def __divmod__(self, other):
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if self.ctx.j == 1:
            q, r = _pdivmod(self.coeffs, other.coeffs, self.ctx.p)
            return PolyQ(self.ctx, q), PolyQ(self.ctx, r)
        da, db = len(self.coeffs) - 1, len(other.coeffs) - 1
        if da < db:
            return PolyQ.zero(self.ctx), self
        ctx = self.ctx
        inv = ctx.inv(other.coeffs[-1])
        rem = list(self.coeffs)
        quo = [0] * (da - db + 1)
        for i in range(da, db - 1, -1):
            c = ctx.mul(rem[i], inv)
            if c:
                quo[i - db] = c
                for k in range(db + 1):
                    rem[i - db + k] = ctx.sub(rem[i - db + k], ctx.mul(c, other.coeffs[k]))
        return PolyQ(ctx, quo), PolyQ(ctx, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        return isinstance(other, PolyQ) and self.ctx == other.ctx and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.j, self.coeffs))

    def scale(self, c):
        ctx = self.ctx
        c = int(c) % ctx.q if ctx.j == 1 else int(c)
        return PolyQ(ctx, [ctx.mul(c, x) for x in self.coeffs])

    def monic(self):
        if self.is_zero():
            raise PolyError("zero polynomial cannot be made monic")
        return self.scale(self.ctx.inv(self.coeffs[-1]))

    def derivative(self):
        if self.ctx.j == 1:
            return PolyQ(self.ctx, _pderiv(self.coeffs, self.ctx.p))
        ctx = self.ctx
        out = []
        for i in range(1, len(self.coeffs)):
            c = self.coeffs[i]
            s = 0
            for _ in range(i % ctx.p):
                s = ctx.add(s, c)
            out.append(s)
        return PolyQ(ctx, out)

    def __call__(self, x, ctx=None):
        """Evaluate at x, optionally in a point-count target field F_{q^j}.

        The coefficients must lie in the prime subfield when a larger
        ctx is supplied (integer encoding embeds F_p into F_{p^j})."""
        f = ctx or self.ctx
        acc = 0
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, x), c)
        return acc

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                t = "t" if i == 1 else f"t^{i}"
                parts.append(t if c == 1 else f"{c}*{t}")
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# gcd, squarefree test, Moebius, Jacobi
# ---------------------------------------------------------------------------

def poly_gcd(a: PolyQ, b: PolyQ) -> PolyQ:
    """Monic gcd; inputs must not both be zero."""
    if a.ctx != b.ctx:
        raise PolyError("mixed field contexts")
    if a.is_zero() and b.is_zero():
        raise PolyError("gcd(0, 0) undefined")
    if a.ctx.j == 1:
        return PolyQ(a.ctx, _pgcd(a.coeffs, b.coeffs, a.ctx.p))
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def is_squarefree(f: PolyQ) -> bool:
    if f.is_zero():
        raise PolyError("zero polynomial")
    if f.degree <= 0:
        return True
    fp = f.derivative()
    if fp.is_zero():
        return False  # p-th power
    return poly_gcd(f, fp).degree == 0


def moebius_mu(f: PolyQ) -> int:
    """Moebius function on monic polynomials."""
    if f.is_zero() or not f.is_monic():
        raise PolyError("moebius_mu needs a monic nonzero polynomial")
    if f.degree == 0:
        return 1
    if not is_squarefree(f):
        return 0
    fac = factor_poly(f)
    return -1 if len(fac.factors) % 2 else 1


def jacobi_symbol(r: PolyQ, f: PolyQ) -> int:
    """Jacobi symbol (r/f), completely multiplicative in both slots."""
    if r.ctx != f.ctx:
        raise PolyError("mixed field contexts")
    ctx = f.ctx
    if ctx.q % 2 == 0:
        raise FieldError("Jacobi symbol needs odd q")
    if f.is_zero() or not f.is_monic():
        raise PolyError("denominator must be monic and nonzero")
    if ctx.j == 1:
        return _jacobi_tuple(r.coeffs, f.coeffs, ctx.p)
    return _jacobi_generic(r, f)


def _jacobi_generic(r: PolyQ, f: PolyQ) -> int:
    ctx = f.ctx
    s_odd = ((ctx.q - 1) // 2) % 2  # parity of (q-1)/2
    acc = 1
    while True:
        if f.degree == 0:
            return acc
        r = r % f
        if r.is_zero():
            return 0
        df = int(f.degree)
        if r.degree == 0:
            leg = ctx.quadratic_character(r.coeffs[0])
            return acc * (leg if df % 2 else 1)
        c = r.leading()
        if c != 1:
            if ctx.quadratic_character(c) == -1 and df % 2:
                acc = -acc
            r = r.monic()
        if (s_odd * int(r.degree) * df) % 2:
            acc = -acc
        r, f = f, r


def euler_criterion(r: PolyQ, f: PolyQ) -> int:
    """Legendre symbol oracle for irreducible f: r^((|f|-1)/2) mod f."""
    ctx = f.ctx
    if ctx.j != 1:
        raise PolyError("euler_criterion implemented for prime fields")
    p = ctx.p
    rr = _pmod(r.coeffs, f.coeffs, p)
    if not rr:
        return 0
    e = (p ** (len(f.coeffs) - 1) - 1) // 2
    v = _ppowmod(rr, e, f.coeffs, p)
    if v == (1,):
        return 1
    if v == (p - 1,):
        return -1
    raise PolyError("euler_criterion: modulus is not irreducible")


# ---------------------------------------------------------------------------
# factorization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Factorization:
    unit: int
    factors: tuple  # ((PolyQ monic irreducible, multiplicity), ...)

    def product(self, ctx) -> PolyQ:
        out = PolyQ(ctx, (self.unit,))
        for g, e in self.factors:
            for _ in range(e):
                out = out * g
        return out


def _pth_root(f: PolyQ) -> PolyQ:
    # f(t) = h(t^p); over F_{p^j} the coefficient root is c^(p^(j-1))
    ctx = f.ctx
    p = ctx.p
    out = []
    for i in range(0, len(f.coeffs), p):
        c = f.coeffs[i]
        out.append(c if ctx.j == 1 else ctx.pow(c, p ** (ctx.j - 1)))
    return PolyQ(ctx, out)


def _squarefree_parts(f: PolyQ):
    """Yield (squarefree monic g, multiplicity) pairs with product f."""
    if f.degree == 0:
        return
    fp = f.derivative()
    if fp.is_zero():
        for g, m in _squarefree_parts(_pth_root(f)):
            yield g, m * f.ctx.p
        return
    c = poly_gcd(f, fp)
    w = f // c
    m = 1
    while w.degree > 0:
        y = poly_gcd(w, c)
        z = w // y
        if z.degree > 0:
            yield z, m
        c = c // y
        w = y
        m += 1
    if c.degree > 0:
        for g, k in _squarefree_parts(c):
            yield g, k * f.ctx.p


def _distinct_degree(f: PolyQ):
    """Split squarefree monic f into (product of degree-d irreducibles, d)."""
    ctx = f.ctx
    x = PolyQ.t(ctx)
    h = x
    d = 0
    rest = f
    while rest.degree > 0:
        d += 1
        if 2 * d > rest.degree:
            yield rest, int(rest.degree)
            return
        h = _powmod_poly(h, ctx.q, rest)
        g = poly_gcd(rest, h - x)
        if g.degree > 0:
            yield g, d
            rest = rest // g
            h = h % rest


def _powmod_poly(a: PolyQ, e: int, m: PolyQ) -> PolyQ:
    ctx = a.ctx
    if ctx.j == 1:
        return PolyQ(ctx, _ppowmod(a.coeffs, e, m.coeffs, ctx.p))
    r = PolyQ.one(ctx)
    a = a % m
    while e:
        if e & 1:
            r = (r * a) % m
        a = (a * a) % m
        e >>= 1
    return r


def _equal_degree(f: PolyQ, d: int, rng: random.Random):
    """Cantor-Zassenhaus split of a product of degree-d irreducibles, odd q."""
    n = int(f.degree)
    if n == d:
        return [f]
    ctx = f.ctx
    e = (ctx.q**d - 1) // 2
    while True:
        r = PolyQ(ctx, [rng.randrange(ctx.q) for _ in range(n)])
        if r.degree < 1:
            continue
        g = poly_gcd(f, r) if not r.is_zero() else f
        if 0 < g.degree < n:
            break
        h = _powmod_poly(r, e, f) - PolyQ.one(ctx)
        g = poly_gcd(f, h) if not h.is_zero() else f
        if 0 < g.degree < n:
            break
    return _equal_degree(g, d, rng) + _equal_degree(f // g, d, rng)


def factor_poly(f: PolyQ, seed: int = FACTOR_SEED) -> Factorization:
    """Complete factorization into monic irreducibles, verified by
    re-multiplication; equal-degree splitting uses a fixed seed."""
    if f.is_zero():
        raise PolyError("cannot factor the zero polynomial")
    ctx = f.ctx
    unit = f.leading()
    g = f.monic() if unit != 1 else f
    rng = random.Random(seed)
    found = {}
    for sq, mult in _squarefree_parts(g):
        for block, d in _distinct_degree(sq):
            for irr in _equal_degree(block, d, rng):
                key = irr.coeffs
                found[key] = found.get(key, 0) + mult
    factors = tuple(sorted(((PolyQ(ctx, k), e) for k, e in found.items()),
                           key=lambda fe: (len(fe[0].coeffs), fe[0].digits())))
    fac = Factorization(unit=unit, factors=factors)
    if fac.product(ctx) != f:
        raise PolyError("factorization failed verification")
    return fac


# ---------------------------------------------------------------------------
# enumeration of monic families
# ---------------------------------------------------------------------------

def poly_from_index(ctx: FieldCtx, n: int, index: int) -> PolyQ:
    """Monic degree-n polynomial at a lex position (digits a_1..a_n base q)."""
    q = ctx.q
    digits = [(index // q**(n - 1 - i)) % q for i in range(n)]
    return PolyQ.monic_from_digits(ctx, digits)


def index_of_poly(f: PolyQ) -> int:
    q = f.ctx.q
    return sum(int(d) * q**(len(f.coeffs) - 2 - i) for i, d in enumerate(f.digits()))


def monic_digit_matrix(q: int, n: int) -> np.ndarray:
    """(q^n, n) uint8 matrix of digit tuples in lex (= index) order."""
    idx = np.arange(q**n, dtype=np.int64)
    out = np.empty((q**n, n), dtype=np.uint8)
    for i in range(n):
        out[:, i] = (idx // q**(n - 1 - i)) % q
    return out


def squarefree_mask(q: int, n: int) -> np.ndarray:
    """Boolean mask over all monic degree-n polynomials (lex order):
    True iff squarefree.  Marks every product e^2 * h instead of
    running per-polynomial gcds, so it doubles as an independent
    oracle for is_squarefree."""
    total = q**n
    mask = np.ones(total, dtype=bool)
    if n < 2:
        return mask
    qpow = np.array([q**(n - 1 - i) for i in range(n)], dtype=np.int64)
    for k in range(1, n // 2 + 1):
        m = n - 2 * k
        hmat = np.ones((q**m, m + 1), dtype=np.int64)  # high-first, monic lead
        hidx = np.arange(q**m, dtype=np.int64)
        for i in range(m):
            hmat[:, i + 1] = (hidx // q**(m - 1 - i)) % q
        for digs in itertools.product(range(q), repeat=k):
            e = (1,) + digs  # high-first coefficients of monic e
            e2 = _conv_high(e, e, q)
            dmat = np.zeros((q**m, n + 1), dtype=np.int64)
            for i, c in enumerate(e2):
                if c:
                    dmat[:, i:i + m + 1] += c * hmat
            dmat %= q
            indices = dmat[:, 1:] @ qpow
            mask[indices] = False
    return mask


def _conv_high(a, b, q):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for k, y in enumerate(b):
            out[i + k] = (out[i + k] + x * y) % q
    return out


def squarefree_count(q: int, n: int) -> int:
    """Exact count of squarefree monic polynomials of degree n.

    Equals q^n - q^(n-1) for n >= 2; the n = 1 count is q, which the
    closed formula misses, so callers should flag n = 1 in reports."""
    return int(squarefree_mask(q, n).sum())


def enumerate_squarefree_monic(ctx: FieldCtx, n: int):
    """Deterministic lex-ordered stream of squarefree monic degree-n polys."""
    if n < 1:
        raise PolyError("degree must be >= 1")
    if ctx.j != 1:
        raise PolyError("family enumeration is restricted to prime q")
    mask = squarefree_mask(ctx.q, n)
    for idx in np.flatnonzero(mask):
        yield poly_from_index(ctx, n, int(idx))


def irreducibles_of_degree(ctx: FieldCtx, d: int):
    """All monic irreducibles of degree d, lex order (small d only)."""
    out = []
    for idx in range(ctx.q**d):
        f = poly_from_index(ctx, d, idx)
        if _is_irreducible(f):
            out.append(f)
    return out


def _is_irreducible(f: PolyQ) -> bool:
    n = int(f.degree)
    if n == 1:
        return True
    ctx = f.ctx
    x = PolyQ.t(ctx)
    if (_powmod_poly(x, ctx.q**n, f) - x) % f != PolyQ.zero(ctx):
        return False
    for ell in {e for e in _small_prime_factors(n)}:
        g = poly_gcd(f, _powmod_poly(x, ctx.q**(n // ell), f) - x)
        if g.degree > 0:
            return False
    return True


def _small_prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out
