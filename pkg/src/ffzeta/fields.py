"""Finite field contexts F_{p^j} with dense tables for small orders.

Elements are integers in range(q).  For a prime field they are residues
mod p.  For an extension field F_{p^j} = F_p[t]/(m), the integer encodes
the coefficient vector of the residue polynomial in base p, low digit
first, so the constant c of the prime subfield is encoded as the
integer c itself.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

DEFAULT_ORDER_BOUND = 10**6

# Above this order we skip the exp/log tables and multiply polynomials
# per operation; all statistical code paths stay well below it.
_TABLE_LIMIT = 200_000


class FieldError(ValueError):
    pass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def _tuple_mulmod(a, b, modulus, p):
    # product of coefficient tuples (low first) reduced mod `modulus`
    res = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for k, bk in enumerate(b):
                res[i + k] = (res[i + k] + ai * bk) % p
    dm = len(modulus) - 1
    for i in range(len(res) - 1, dm - 1, -1):
        c = res[i]
        if c:
            res[i] = 0
            for k in range(dm):
                res[i - dm + k] = (res[i - dm + k] - c * modulus[k]) % p
    while len(res) > 1 and res[-1] == 0:
        res.pop()
    return tuple(res)


def _poly_is_irreducible(m, p):
    """Rabin test for a monic poly over F_p, without factoring it."""
    j = len(m) - 1
    if j < 1:
        return False
    x = (0, 1) if j > 1 else (0,)

    def powq(base, e):
        # base^(p^e) mod m by repeated p-th powers
        r = base
        for _ in range(e):
            acc = (1,)
            b = r
            k = p
            while k:
                if k & 1:
                    acc = _tuple_mulmod(acc, b, m, p)
                b = _tuple_mulmod(b, b, m, p)
                k >>= 1
            r = acc
        return r

    def sub_x(a):
        lst = list(a) + [0] * (2 - len(a))
        lst[1] = (lst[1] - 1) % p
        while len(lst) > 1 and lst[-1] == 0:
            lst.pop()
        return tuple(lst)

    def gcd(a, b):
        while any(b):
            # remainder of a by b (both tuples, b nonzero)
            a = _tuple_reduce(a, b, p)
            a, b = b, a
        return a

    if sub_x(powq((0, 1), j)) != (0,):
        return False
    for ell in {f for f in _prime_factors(j)}:
        g = gcd(m, sub_x(powq((0, 1), j // ell)))
        if len(g) > 1:
            return False
    return True


def _tuple_reduce(a, b, p):
    a = list(a)
    db = len(b) - 1
    inv = pow(b[-1], p - 2, p)
    while len(a) - 1 >= db and any(a):
        c = a[-1] * inv % p
        if c:
            s = len(a) - 1 - db
            for k in range(db + 1):
                a[s + k] = (a[s + k] - c * b[k]) % p
        while len(a) > 1 and a[-1] == 0:
            a.pop()
        if len(a) == 1 and a[0] == 0:
            break
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return tuple(a)


def _prime_factors(n):
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


class FieldCtx:
    """Arithmetic context for F_{p^j} with elements encoded as ints."""

    def __init__(self, p: int, j: int, modulus, bound: int):
        self.p = p
        self.j = j
        self.q = p**j
        self.modulus = modulus  # coefficient tuple, low first, monic; None for j == 1
        self.bound = bound
        self._exp = None
        self._log = None
        self._sq = None
        if j > 1 and self.q <= _TABLE_LIMIT:
            self._build_tables()

    # -- encoding helpers -------------------------------------------------

    def digits(self, a: int):
        p = self.p
        return tuple((a // p**k) % p for k in range(self.j))

    def from_digits(self, ds) -> int:
        p = self.p
        return sum(int(d) % p * p**k for k, d in enumerate(ds))

    # -- core arithmetic --------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.j == 1:
            return (a + b) % self.p
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.j):
            out += ((a + b) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def neg(self, a: int) -> int:
        if self.j == 1:
            return (-a) % self.p
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.j):
            out += (-a % p) * mult
            a //= p
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.j == 1:
            return (a * b) % self.p
        if self._exp is not None:
            if a == 0 or b == 0:
                return 0
            return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return self.from_digits(_tuple_mulmod(self.digits(a), self.digits(b), self.modulus, self.p))

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        if self.j == 1:
            return pow(a, self.p - 2, self.p)
        if self._exp is not None:
            return self._exp[(-self._log[a]) % (self.q - 1)]
        return self.pow(a, self.q - 2)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def elements(self):
        return range(self.q)

    # -- quadratic character ----------------------------------------------

    def quadratic_character(self, a: int) -> int:
        """0 at zero, +1 on squares of F_q*, -1 otherwise (q odd)."""
        if self.p == 2:
            raise FieldError("quadratic character needs odd characteristic")
        if a == 0:
            return 0
        if self._log is not None and self.j > 1:
            return 1 if self._log[a] % 2 == 0 else -1
        if self.j == 1:
            return 1 if pow(a, (self.p - 1) // 2, self.p) == 1 else -1
        return 1 if self.pow(a, (self.q - 1) // 2) == 1 else -1

    def chi_table(self) -> np.ndarray:
        """int8 vector of the quadratic character over all of F_q."""
        if self._sq is None:
            t = np.empty(self.q, dtype=np.int8)
            for a in range(self.q):
                t[a] = self.quadratic_character(a)
            self._sq = t
        return self._sq

    # -- internals ---------------------------------------------------------

    def _build_tables(self):
        q, p = self.q, self.p
        order_factors = _prime_factors(q - 1)
        g = None
        for cand in range(2, q):
            if all(self._pow_raw(cand, (q - 1) // f) != 1 for f in order_factors):
                g = cand
                break
        exp = np.zeros(q - 1, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        cur = 1
        for k in range(q - 1):
            exp[k] = cur
            log[cur] = k
            cur = self._mul_raw(cur, g)
        self._exp = exp
        self._log = log

    def _mul_raw(self, a, b):
        return self.from_digits(_tuple_mulmod(self.digits(a), self.digits(b), self.modulus, self.p))

    def _pow_raw(self, a, e):
        r = 1
        while e:
            if e & 1:
                r = self._mul_raw(r, a)
            a = self._mul_raw(a, a)
            e >>= 1
        return r

    def __repr__(self):
        return f"FieldCtx(p={self.p}, j={self.j}, q={self.q})"

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and (self.p, self.j) == (other.p, other.j)

    def __hash__(self):
        return hash((self.p, self.j))


@lru_cache(maxsize=None)
def field_make(p: int, j: int = 1, bound: int = DEFAULT_ORDER_BOUND) -> FieldCtx:
    """Build F_{p^j}.  The degree-j modulus is the lexicographically least
    monic irreducible (on the high-to-low coefficient digits), so the
    construction is deterministic."""
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if j < 1:
        raise FieldError("extension degree must be >= 1")
    if p**j > bound:
        raise FieldError(f"field order {p**j} exceeds bound {bound}")
    if j == 1:
        return FieldCtx(p, 1, None, bound)
    modulus = None
    for idx in range(p**j):
        # digits (a_1, ..., a_j) of t^j + a_1 t^{j-1} + ... + a_j, counting up
        digits_hi = [(idx // p**(j - 1 - k)) % p for k in range(j)]
        cand = tuple(reversed(digits_hi)) + (1,)
        if _poly_is_irreducible(cand, p):
            modulus = cand
            break
    if modulus is None:  # cannot happen: irreducibles exist in every degree
        raise FieldError("no irreducible modulus found")
    return FieldCtx(p, j, modulus, bound)


def check_field_axioms(ctx: FieldCtx) -> None:
    """Exhaustive associativity/commutativity/distributivity check.

    Meant for small q (vectorized, O(q^3) memory traffic)."""
    q = ctx.q
    add_t = np.empty((q, q), dtype=np.int32)
    mul_t = np.empty((q, q), dtype=np.int32)
    for a in range(q):
        for b in range(q):
            add_t[a, b] = ctx.add(a, b)
            mul_t[a, b] = ctx.mul(a, b)
    idx = np.arange(q, dtype=np.int32)
    a = idx[:, None, None]
    b = idx[None, :, None]
    c = idx[None, None, :]
    if not np.array_equal(add_t, add_t.T) or not np.array_equal(mul_t, mul_t.T):
        raise FieldError("commutativity fails")
    if not np.array_equal(add_t[add_t[a, b], c], add_t[a, add_t[b, c]]):
        raise FieldError("additive associativity fails")
    if not np.array_equal(mul_t[mul_t[a, b], c], mul_t[a, mul_t[b, c]]):
        raise FieldError("multiplicative associativity fails")
    if not np.array_equal(mul_t[a, add_t[b, c]], add_t[mul_t[a, b], mul_t[a, c]]):
        raise FieldError("distributivity fails")
    for x in range(1, q):
        if mul_t[x, ctx.inv(x)] != 1:
            raise FieldError("inverse fails")
