"""Sieve tables over the monic polynomials of F_p[t] up to a degree cap.

A CharTable indexes every monic polynomial of degree 0..maxdeg and
stores, per entry, the smallest irreducible factor and its cofactor
(as global indices).  Any completely multiplicative function that is
known on irreducibles then extends to the whole table with a few numpy
gathers per degree; this is the workhorse behind bulk Dirichlet
coefficients, the Moebius table, and family averages of characters.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .ffpoly import PolyQ, _jacobi_tuple, _pmul
from .fields import field_make


class CharTable:
    def __init__(self, p: int, maxdeg: int):
        self.p = p
        self.q = p
        self.maxdeg = maxdeg
        self.ctx = field_make(p, 1)
        q = p
        self.offsets = np.zeros(maxdeg + 2, dtype=np.int64)
        for m in range(maxdeg + 1):
            self.offsets[m + 1] = self.offsets[m] + q**m
        self.total = int(self.offsets[-1])
        self._build_sieve()
        self._mu = None

    # -- indexing -----------------------------------------------------------

    def gidx(self, deg: int, idx: int) -> int:
        return int(self.offsets[deg]) + idx

    def degree_slice(self, deg: int) -> slice:
        return slice(int(self.offsets[deg]), int(self.offsets[deg + 1]))

    def poly_at(self, g: int) -> PolyQ:
        deg = int(np.searchsorted(self.offsets, g, side="right")) - 1
        idx = g - int(self.offsets[deg])
        q = self.q
        digits = [(idx // q**(deg - 1 - i)) % q for i in range(deg)]
        return PolyQ.monic_from_digits(self.ctx, digits)

    def _coeffs_to_gidx(self, coeffs) -> int:
        # coeffs low-first, monic
        deg = len(coeffs) - 1
        q = self.q
        idx = 0
        for i in range(deg):
            idx = idx * q + coeffs[deg - 1 - i]
        return self.gidx(deg, idx)

    # -- sieve ----------------------------------------------------------------

    def _build_sieve(self):
        q = self.q
        spf = np.full(self.total, -1, dtype=np.int64)
        cof = np.full(self.total, -1, dtype=np.int64)
        spf[0] = 0  # the unit
        irr = []
        qpows = {m: np.array([q**(m - 1 - i) for i in range(m)], dtype=np.int64)
                 for m in range(1, self.maxdeg + 1)}
        hmats = {}
        for m in range(0, self.maxdeg):
            hm = np.ones((q**m, m + 1), dtype=np.int64)
            hidx = np.arange(q**m, dtype=np.int64)
            for i in range(m):
                hm[:, i + 1] = (hidx // q**(m - 1 - i)) % q
            hmats[m] = hm
        for a in range(1, self.maxdeg + 1):
            base = int(self.offsets[a])
            # products of lower-degree irreducibles are already marked, so
            # everything still unmarked at degree a is irreducible
            for idx in np.flatnonzero(spf[base:base + q**a] == -1):
                idx = int(idx)
                g = base + idx
                irr.append(g)
                spf[g] = g
                cof[g] = 0
                pc = self._high_coeffs(a, idx)
                for b in range(1, self.maxdeg - a + 1):
                    hm = hmats[b]
                    n = a + b
                    dmat = np.zeros((q**b, n + 1), dtype=np.int64)
                    for i, c in enumerate(pc):
                        if c:
                            dmat[:, i:i + b + 1] += c * hm
                    dmat %= q
                    target = dmat[:, 1:] @ qpows[n] + int(self.offsets[n])
                    fresh = spf[target] == -1
                    spf[target[fresh]] = g
                    cof[target[fresh]] = int(self.offsets[b]) + np.flatnonzero(fresh)
        self.spf = spf
        self.cof = cof
        self.irreducibles = np.array(irr, dtype=np.int64)
        self.is_irreducible = np.zeros(self.total, dtype=bool)
        self.is_irreducible[self.irreducibles] = True

    def _high_coeffs(self, deg, idx):
        q = self.q
        return [1] + [(idx // q**(deg - 1 - i)) % q for i in range(deg)]

    # -- multiplicative extension ---------------------------------------------

    def extend_multiplicative(self, values_on_irreducibles: np.ndarray) -> np.ndarray:
        """Extend chi(P) (aligned with self.irreducibles) to all entries."""
        out = np.zeros(self.total, dtype=values_on_irreducibles.dtype)
        out[0] = 1
        out[self.irreducibles] = values_on_irreducibles
        for m in range(2, self.maxdeg + 1):
            sl = self.degree_slice(m)
            comp = ~self.is_irreducible[sl]
            if comp.any():
                rows = np.arange(sl.start, sl.stop)[comp]
                out[rows] = out[self.spf[rows]] * out[self.cof[rows]]
        return out

    def chi_for(self, d: PolyQ, up_to: int | None = None) -> np.ndarray:
        """chi_d(r) = (r/d) over every table entry r (int8)."""
        if d.ctx.p != self.p or d.ctx.j != 1:
            raise ValueError("context mismatch")
        dc = d.coeffs
        p = self.p
        cap = self.maxdeg if up_to is None else up_to
        vals = np.zeros(len(self.irreducibles), dtype=np.int8)
        for i, g in enumerate(self.irreducibles):
            if g >= self.offsets[cap + 1]:
                break
            vals[i] = _jacobi_tuple(self._low_coeffs(int(g)), dc, p)
        return self.extend_multiplicative(vals)

    def chi_denominator(self, r: PolyQ) -> np.ndarray:
        """chi_d(r) = (r/d) as a function of the table entry d (int8).

        Uses multiplicativity of the Jacobi symbol in its denominator."""
        if r.ctx.p != self.p or r.ctx.j != 1:
            raise ValueError("context mismatch")
        rc = r.coeffs
        p = self.p
        vals = np.empty(len(self.irreducibles), dtype=np.int8)
        for i, g in enumerate(self.irreducibles):
            vals[i] = _jacobi_tuple(rc, self._low_coeffs(int(g)), p)
        return self.extend_multiplicative(vals)

    def _low_coeffs(self, g: int):
        deg = int(np.searchsorted(self.offsets, g, side="right")) - 1
        idx = g - int(self.offsets[deg])
        q = self.q
        return tuple((idx // q**i) % q for i in range(deg)) + (1,)

    # -- moebius ------------------------------------------------------------

    def mu_table(self) -> np.ndarray:
        if self._mu is None:
            mu = np.zeros(self.total, dtype=np.int8)
            mu[0] = 1
            mu[self.irreducibles] = -1
            for m in range(2, self.maxdeg + 1):
                sl = self.degree_slice(m)
                rows = np.arange(sl.start, sl.stop)[~self.is_irreducible[sl]]
                square = self.spf[self.cof[rows]] == self.spf[rows]
                mu[rows] = np.where(square, 0, -mu[self.cof[rows]])
            self._mu = mu
        return self._mu

    def squarefree_flags(self) -> np.ndarray:
        return self.mu_table() != 0


@lru_cache(maxsize=8)
def char_table(p: int, maxdeg: int) -> CharTable:
    return CharTable(p, maxdeg)
