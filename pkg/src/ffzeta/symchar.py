"""Partitions, Schur and symplectic characters, and the stable skew
multiplicity machinery.

The closed-form objects here are:

* M0_rho(x; c) = (x_1...x_K)^(c/2) * spchar_{(c/2-rho'_K,...,c/2-rho'_1)}
  for the symplectic group, with companion cases for O and K = 0;
* D_K(x) = prod_{i<j} (x_i-x_j)(x_i x_j-1) prod_i (1-x_i^2);
* the stable numerators N^eps_rho, the slope decomposition of
  M0_rho * D_K viewed as a function of the even parameter c.

Brute-force decompositions of prod det(1+x_i A) and
prod det(1-y_i A)^(-1) into symplectic characters (highest-weight
peeling in exact Laurent arithmetic) serve as independent oracles.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .laurent import LaurentError, LaurentPoly, ParamLaurentPoly


class SymcharError(ValueError):
    pass


# ---------------------------------------------------------------------------
# partitions
# ---------------------------------------------------------------------------

class Partition:
    """Weakly decreasing tuple of positive parts."""

    __slots__ = ("parts",)

    def __init__(self, parts=()):
        ps = tuple(int(p) for p in parts if int(p) != 0)
        if any(p < 0 for p in ps) or any(ps[i] < ps[i + 1] for i in range(len(ps) - 1)):
            raise SymcharError(f"not a partition: {parts!r}")
        self.parts = ps

    @property
    def size(self):
        return sum(self.parts)

    @property
    def length(self):
        return len(self.parts)

    def part(self, i):
        """1-based part with zero padding."""
        return self.parts[i - 1] if i <= len(self.parts) else 0

    def conjugate(self):
        if not self.parts:
            return Partition()
        cols = [0] * self.parts[0]
        for p in self.parts:
            for i in range(p):
                cols[i] += 1
        return Partition(cols)

    def contains(self, other):
        return all(self.part(i) >= other.part(i) for i in range(1, other.length + 1))

    def __eq__(self, other):
        return isinstance(other, Partition) and self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __lt__(self, other):
        return self.parts < other.parts

    def __iter__(self):
        return iter(self.parts)

    def __repr__(self):
        return f"Partition{self.parts}"


def partition_conjugate(lam: Partition) -> Partition:
    return lam.conjugate()


def partitions_up_to(max_size, max_length=None, max_part=None):
    """All partitions of size <= max_size within the given box."""
    out = [Partition()]
    def rec(prefix, remaining, cap):
        for p in range(min(cap, remaining), 0, -1):
            if max_length is not None and len(prefix) + 1 > max_length:
                return
            cur = prefix + [p]
            out.append(Partition(cur))
            rec(cur, remaining - p, p)
    rec([], max_size, max_part if max_part is not None else max_size)
    return out


# ---------------------------------------------------------------------------
# complete homogeneous bases
# ---------------------------------------------------------------------------

def _h_series(variables, arity, kmax):
    """h_0..h_kmax of the multiset `variables` (exponent-vector list)."""
    hs = [LaurentPoly.const(arity, 1)] + [LaurentPoly(arity) for _ in range(kmax)]
    for v in variables:
        mono = LaurentPoly.monomial(arity, v)
        # multiply the truncated series by 1/(1 - z*mono)
        for k in range(1, kmax + 1):
            hs[k] = hs[k] + hs[k - 1] * mono
    return hs


def _h_plain(m, kmax):
    return _h_series([tuple(1 if i == j else 0 for i in range(m)) for j in range(m)],
                     m, kmax)


def _h_symplectic(m, kmax):
    vs = []
    for j in range(m):
        vs.append(tuple(1 if i == j else 0 for i in range(m)))
        vs.append(tuple(-1 if i == j else 0 for i in range(m)))
    return _h_series(vs, m, kmax)


def _det(matrix):
    """Determinant of a small matrix of LaurentPolys (Laplace over rows,
    memoized on the surviving row set)."""
    n = len(matrix)
    if n == 0:
        return None  # caller supplies the arity-aware unit
    memo = {}

    def rec(rows, col):
        if col == n:
            return None
        key = rows
        if key in memo:
            return memo[key]
        acc = None
        sign = 1
        for pos, r in enumerate(rows):
            sub = rec(tuple(x for x in rows if x != r), col + 1)
            term = matrix[r][col] if sub is None else matrix[r][col] * sub
            term = term if sign > 0 else -term
            acc = term if acc is None else acc + term
            sign = -sign
        memo[key] = acc
        return acc

    return rec(tuple(range(n)), 0)


# ---------------------------------------------------------------------------
# Schur and symplectic characters
# ---------------------------------------------------------------------------

_schur_cache = {}
_sp_cache = {}


def schur_poly(lam: Partition, m: int) -> LaurentPoly:
    """Schur polynomial s_lambda(x_1..x_m), Jacobi-Trudi in the h basis."""
    if m < 1:
        raise SymcharError("need at least one variable")
    key = (lam.parts, m)
    if key in _schur_cache:
        return _schur_cache[key]
    if lam.length > m:
        out = LaurentPoly(m)
    elif lam.length == 0:
        out = LaurentPoly.const(m, 1)
    else:
        l = lam.length
        hs = _h_plain(m, lam.part(1) + l)
        def h(k):
            if k < 0 or k >= len(hs):
                return LaurentPoly(m)
            return hs[k]
        mat = [[h(lam.part(i) - i + j) for j in range(1, l + 1)] for i in range(1, l + 1)]
        out = _det(mat)
    _schur_cache[key] = out
    return out


def sp_character(lam: Partition, m: int, method: str = "jt") -> LaurentPoly:
    """Character of Sp(2m) with highest weight lambda, as a Laurent
    polynomial in x_1..x_m; the zero polynomial when l(lambda) > m.

    method 'jt' is the determinant in the complete homogeneous basis of
    {x_i, 1/x_i} (valid at repeated arguments); 'weyl' evaluates the
    Weyl character formula through exact Laurent division and exists as
    an independent cross-check."""
    if m == 0:
        return LaurentPoly.const(0, 1) if lam.length == 0 else LaurentPoly(0)
    key = (lam.parts, m, method)
    if key in _sp_cache:
        return _sp_cache[key]
    if lam.length > m:
        out = LaurentPoly(m)
    elif method == "jt":
        out = _sp_character_jt(lam, m)
    elif method == "weyl":
        out = _sp_character_weyl(lam, m)
    else:
        raise SymcharError(f"unknown method {method!r}")
    _sp_cache[key] = out
    return out


def _sp_character_jt(lam, m):
    if lam.length == 0:
        return LaurentPoly.const(m, 1)
    l = lam.length
    hs = _h_symplectic(m, lam.part(1) + l + 1)
    def h(k):
        if k < 0 or k >= len(hs):
            return LaurentPoly(m)
        return hs[k]
    mat = []
    for i in range(1, l + 1):
        row = [h(lam.part(i) - i + 1)]
        for j in range(2, l + 1):
            row.append(h(lam.part(i) - i + j) + h(lam.part(i) - i - j + 2))
        mat.append(row)
    return _det(mat)


def _sp_character_weyl(lam, m):
    def alt(exps):
        # det(x_j^{e_i} - x_j^{-e_i})
        acc = None
        for perm in itertools.permutations(range(m)):
            sign = _perm_sign(perm)
            term = LaurentPoly.const(m, sign)
            for i, j in enumerate(perm):
                e = exps[i]
                mono = [0] * m
                mono[j] = e
                pos = LaurentPoly.monomial(m, mono)
                mono[j] = -e
                neg = LaurentPoly.monomial(m, mono)
                term = term * (pos - neg)
            acc = term if acc is None else acc + term
        return acc

    num = alt([lam.part(i) + m - i + 1 for i in range(1, m + 1)])
    den = alt([m - i + 1 for i in range(1, m + 1)])
    return num.exact_div(den)


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        cl = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            cl += 1
        if cl % 2 == 0:
            sign = -sign
    return sign


def sp_dimension_king(lam: Partition, m: int) -> int:
    """Dimension oracle: exhaustive count of King symplectic tableaux.

    Alphabet 1 < 1' < 2 < 2' < ... (encoded 0..2m-1), rows weakly and
    columns strictly increasing, and entries in row i at least i."""
    if lam.length > m:
        return 0
    if lam.length == 0:
        return 1
    rows = lam.parts
    cells = [(r, c) for r, width in enumerate(rows) for c in range(width)]
    count = 0
    values = [[0] * w for w in rows]

    def fill(pos):
        nonlocal count
        if pos == len(cells):
            count += 1
            return
        r, c = cells[pos]
        lo = 2 * r  # symplectic condition: entry >= "r+1"
        if c > 0:
            lo = max(lo, values[r][c - 1])
        if r > 0:
            lo = max(lo, values[r - 1][c] + 1)
        for v in range(lo, 2 * m):
            values[r][c] = v
            fill(pos + 1)

    fill(0)
    return count


# ---------------------------------------------------------------------------
# Weyl denominator and stable skew multiplicities
# ---------------------------------------------------------------------------

def weyl_denominator(K: int) -> LaurentPoly:
    """D_K(x) = prod_{i<j} (x_i - x_j)(x_i x_j - 1) prod_i (1 - x_i^2)."""
    if K < 0:
        raise SymcharError("K must be >= 0")
    out = LaurentPoly.const(K, 1)
    for i in range(K):
        for j in range(i + 1, K):
            out = out * (LaurentPoly.var(K, i) - LaurentPoly.var(K, j))
            out = out * (LaurentPoly.var(K, i) * LaurentPoly.var(K, j) - 1)
    for i in range(K):
        out = out * (LaurentPoly.const(K, 1) - LaurentPoly.var(K, i, 2))
    return out


def _check_group(G):
    if G not in ("Sp", "O"):
        raise SymcharError(f"unsupported group tag {G!r}")


def skew_multiplicity(G: str, rho: Partition, K: int, c: int, i: int = 0) -> LaurentPoly:
    """Stable multiplicity M0_rho(x; c; i) as a Laurent polynomial in K
    variables.  Returns 0 outside the supported box (rho_1 > K, or for
    Sp when l(rho) > c/2)."""
    _check_group(G)
    if c < 0 or c % 2:
        raise SymcharError("conductor degree must be even and nonnegative")
    if K == 0:
        if i != 0:
            return LaurentPoly(0)
        return LaurentPoly.const(0, 1) if rho.length == 0 else LaurentPoly(0)
    if rho.part(1) > K:
        return LaurentPoly(K)
    if G == "Sp":
        if i != 0:
            raise SymcharError("determinant twists are trivial for Sp")
        if rho.length > c // 2:
            return LaurentPoly(K)
        rc = rho.conjugate()
        lam = Partition([c // 2 - rc.part(K - u) for u in range(K)])
        return LaurentPoly.monomial(K, (c // 2,) * K) * sp_character(lam, K)
    # G == "O"
    if K > 1:
        raise SymcharError("orthogonal case implemented for K <= 1 only")
    if i == 0:
        return LaurentPoly.monomial(1, (rho.length,))
    if i == 1:
        return LaurentPoly.monomial(1, (c - rho.length,))
    raise SymcharError("twist must be 0 or 1")


# ---------------------------------------------------------------------------
# brute-force decompositions (oracles)
# ---------------------------------------------------------------------------

def _embed(poly: LaurentPoly, arity: int, offset: int) -> LaurentPoly:
    return LaurentPoly(arity, {tuple([0] * offset) + k + tuple([0] * (arity - offset - poly.arity)): v
                               for k, v in poly.terms.items()})


def _peel_sp(poly: LaurentPoly, nx: int, m: int):
    """Decompose a symplectically invariant z-part: poly lives in
    arity nx + m, z block last.  Returns {Partition: coefficient poly
    in the first nx variables}."""
    out = {}
    rem = poly
    while not rem.is_zero():
        dominant = [k[nx:] for k in rem.terms
                    if all(e >= 0 for e in k[nx:])
                    and all(k[nx + i] >= k[nx + i + 1] for i in range(m - 1))]
        if not dominant:
            raise SymcharError("peeling failed: no dominant weight left")
        nu = max(dominant)
        coeff = LaurentPoly(nx, {k[:nx]: v for k, v in rem.terms.items() if k[nx:] == nu})
        part = Partition(nu)
        chi = _embed(sp_character(part, m), nx + m, nx)
        rem = rem - _embed(coeff, nx + m, 0) * chi
        out[part] = out.get(part, LaurentPoly(nx)) + coeff
    return {p: c for p, c in out.items() if not c.is_zero()}


WEDGE_K_CAP = 2
WEDGE_M_CAP = 4


def decompose_wedge_oracle(K: int, m: int):
    """Exact decomposition of prod_i det(1 + x_i A), A in Sp(2m), into
    symplectic characters of the eigenvalues: {rho: m0_rho(x)}."""
    if K > WEDGE_K_CAP or m > WEDGE_M_CAP:
        raise SymcharError(f"wedge oracle capped at K<={WEDGE_K_CAP}, m<={WEDGE_M_CAP}")
    arity = K + m
    if K == 0:
        return {Partition(): LaurentPoly.const(0, 1)}
    prod = LaurentPoly.const(arity, 1)
    for i in range(K):
        for j in range(m):
            x = LaurentPoly.var(arity, i)
            zp = LaurentPoly.var(arity, K + j)
            zm = LaurentPoly.var(arity, K + j, -1)
            prod = prod * (1 + x * zp) * (1 + x * zm)
    out = _peel_sp(prod, K, m)
    for rho, mult in out.items():
        if not mult.coefficients_nonnegative_integers():
            raise SymcharError(f"negative multiplicity for {rho}")
    # dimension bookkeeping: evaluating everything at 1 recovers 2^(2mK)
    total = sum(mult.substitute_values((1,) * K)
                * sp_character(rho, m).substitute_values((1,) * m)
                for rho, mult in out.items())
    if total != Fraction(2) ** (2 * m * K):
        raise SymcharError("wedge decomposition loses dimensions")
    return out


def decompose_sym_truncated(Q: int, m: int, cap: int, verify_rank_stability: bool = False):
    """Decomposition of prod_i det(1 - y_i A)^(-1), truncated at total
    y-degree `cap`: {mu: m1_mu(y)} with l(mu) <= Q.

    With verify_rank_stability the decomposition is recomputed at rank
    m + 1 and must agree (the multiplicities are rank-independent in
    the stable range)."""
    if Q < 0 or cap < 0:
        raise SymcharError("bad arguments")
    if Q == 0:
        return {Partition(): LaurentPoly.const(0, 1)}
    if m < Q:
        raise SymcharError("rank must be at least Q for a stable decomposition")
    if cap > 16 or m > 6:
        raise SymcharError("sym oracle cap exceeded")
    out = _decompose_sym_at_rank(Q, m, cap)
    for mu, mult in out.items():
        if mu.length > Q:
            raise SymcharError(f"support violation: l({mu}) > Q")
        if not mult.coefficients_nonnegative_integers():
            raise SymcharError(f"negative multiplicity for {mu}")
        if mult.total_degrees() and min(mult.total_degrees()) < mu.size:
            raise SymcharError(f"degree bound violated for {mu}")
    if verify_rank_stability:
        again = _decompose_sym_at_rank(Q, m + 1, cap)
        if {p.parts for p in out} != {p.parts for p in again} or any(
                out[p] != again[Partition(p.parts)] for p in out):
            raise SymcharError("rank dependence detected in sym decomposition")
    return out


def _decompose_sym_at_rank(Q, m, cap):
    arity = Q + m
    hs = _h_symplectic(m, cap)
    series = {(): LaurentPoly.const(arity, 1)}  # y-degree vector -> z poly
    for slot in range(Q):
        nxt = {}
        for ydeg, zpoly in series.items():
            used = sum(ydeg)
            for d in range(cap - used + 1):
                key = ydeg + (d,)
                term = zpoly * _embed(hs[d], arity, Q)
                nxt[key] = nxt.get(key, LaurentPoly(arity)) + term
        series = nxt
    total = LaurentPoly(arity)
    for ydeg, zpoly in series.items():
        mono = [0] * arity
        for i, d in enumerate(ydeg):
            mono[i] = d
        total = total + LaurentPoly.monomial(arity, mono) * zpoly
    return _peel_sp(total, Q, m)


# ---------------------------------------------------------------------------
# stable numerators
# ---------------------------------------------------------------------------

def stable_numerator_param(G: str, rho: Partition, K: int, i: int = 0) -> ParamLaurentPoly:
    """N_rho(x; c; i) = M0_rho(x; c; i) * D_K(x) with the conductor c
    kept formal (exponents affine in c/2)."""
    _check_group(G)
    if rho.part(1) > K:
        raise SymcharError("rho_1 must be at most K")
    if K == 0:
        return ParamLaurentPoly(0, {(): Fraction(1)})
    if G == "Sp":
        if i != 0:
            raise SymcharError("determinant twists are trivial for Sp")
        rc = rho.conjugate()
        # det(x_j^(-i) - x_j^i) = (-1)^(K(K+3)/2) (x_1..x_K)^(-K) D_K, so the
        # alternant needs this sign to make N = M0 * D_K with M0 the
        # (nonnegative) character form
        overall = -1 if (K * (K + 3) // 2) % 2 else 1
        terms = {}
        for perm in itertools.permutations(range(K)):
            base = overall * _perm_sign(perm)
            for signs in itertools.product((0, 1), repeat=K):
                coef = base * (-1) ** sum(signs)
                key = [None] * K
                for idx in range(K):
                    irow = idx + 1
                    j = perm[idx]
                    if signs[idx] == 0:
                        key[j] = (K - irow + rc.part(irow), 0)
                    else:
                        key[j] = (K + irow - rc.part(irow), 2)
                key = tuple(key)
                terms[key] = terms.get(key, 0) + coef
        return ParamLaurentPoly(K, terms)
    # (G, K) == ("O", 1)
    if K != 1:
        raise SymcharError("orthogonal case implemented for K <= 1 only")
    l = rho.length
    if i == 0:
        return ParamLaurentPoly(1, {((l, 0),): 1, ((l + 2, 0),): -1})
    if i == 1:
        return ParamLaurentPoly(1, {((-l, 2),): 1, ((2 - l, 2),): -1})
    raise SymcharError("twist must be 0 or 1")


def stable_numerators(G: str, rho: Partition, K: int, i: int = 0) -> dict:
    """The slope pieces N^eps_rho(x; i) indexed by eps in {+-1}^K."""
    pieces = stable_numerator_param(G, rho, K, i).slope_split()
    if K == 0:
        return {(): pieces.get((), LaurentPoly.const(0, 1))}
    out = {}
    for eps in itertools.product((1, -1), repeat=K):
        out[eps] = pieces.get(eps, LaurentPoly(K))
    return out


def reconstruct_numerator(G: str, rho: Partition, K: int, c: int, i: int = 0) -> LaurentPoly:
    """Sum of N^eps * prod x_u^((1-eps_u) c/2): must equal M0 * D_K."""
    pieces = stable_numerators(G, rho, K, i)
    acc = LaurentPoly(K)
    for eps, poly in pieces.items():
        mono = tuple((1 - e) * c // 2 for e in eps)
        acc = acc + poly * LaurentPoly.monomial(K, mono)
    return acc


# ---------------------------------------------------------------------------
# inequality checks
# ---------------------------------------------------------------------------

def check_multiplicity_bound(rho: Partition, K: int, c: int, points) -> list:
    """|M0_rho(x)| against |x_1..x_K|^(c/2) prod (|x|+1/|x|+2)^(c/2+l).

    Returns one (point, value, bound, ok) record per sample."""
    m0 = skew_multiplicity("Sp", rho, K, c)
    out = []
    for pt in points:
        val = abs(complex(m0.substitute_values(tuple(pt))))
        bound = 1.0
        for x in pt:
            ax = abs(x)
            bound *= ax ** (c / 2) * (ax + 1 / ax + 2) ** (c / 2 + rho.length)
        out.append((tuple(pt), val, bound, val <= bound * (1 + 1e-12)))
    return out


def near_zero_bounds_hold(xs) -> bool:
    """min(1,x) >= 1 - exp(-x) >= min(1,x)/2 for x >= 0."""
    for x in xs:
        lo = min(1.0, x) / 2.0
        hi = min(1.0, x)
        v = -math.expm1(-x)
        if not (lo <= v <= hi):
            return False
    return True
