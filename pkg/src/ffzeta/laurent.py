"""Sparse multivariate Laurent polynomials with exact coefficients.

Terms map integer exponent vectors to Fractions (ints are accepted and
normalized).  A ParamLaurentPoly additionally lets every exponent be an
affine form a + b*(c/2) in a formal even parameter c; specializing c
gives back an ordinary LaurentPoly.
"""

from __future__ import annotations

from fractions import Fraction


class LaurentError(ValueError):
    pass


def _coerce(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise LaurentError(f"coefficients must be exact, got {type(x).__name__}")


class LaurentPoly:
    """Laurent polynomial in `arity` variables, exact arithmetic."""

    __slots__ = ("arity", "terms")

    def __init__(self, arity: int, terms=None):
        self.arity = arity
        t = {}
        if terms:
            for mono, coef in (terms.items() if isinstance(terms, dict) else terms):
                coef = _coerce(coef)
                if coef:
                    key = tuple(int(e) for e in mono)
                    if len(key) != arity:
                        raise LaurentError("exponent arity mismatch")
                    c = t.get(key, Fraction(0)) + coef
                    if c:
                        t[key] = c
                    else:
                        t.pop(key, None)
        self.terms = t

    # -- constructors -------------------------------------------------------

    @classmethod
    def const(cls, arity, value):
        v = _coerce(value)
        return cls(arity, {tuple([0] * arity): v} if v else {})

    @classmethod
    def monomial(cls, arity, expo, coef=1):
        return cls(arity, {tuple(expo): _coerce(coef)})

    @classmethod
    def var(cls, arity, i, power=1):
        e = [0] * arity
        e[i] = power
        return cls(arity, {tuple(e): Fraction(1)})

    # -- predicates ----------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(self.arity, other)
        return isinstance(other, LaurentPoly) and self.arity == other.arity \
            and self.terms == other.terms

    def __hash__(self):
        return hash((self.arity, frozenset(self.terms.items())))

    # -- ring ops --------------------------------------------------------------

    def __add__(self, other):
        other = self._lift(other)
        t = dict(self.terms)
        for k, v in other.terms.items():
            c = t.get(k, Fraction(0)) + v
            if c:
                t[k] = c
            else:
                t.pop(k, None)
        out = LaurentPoly(self.arity)
        out.terms = t
        return out

    def __neg__(self):
        out = LaurentPoly(self.arity)
        out.terms = {k: -v for k, v in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __mul__(self, other):
        other = self._lift(other)
        t = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                c = t.get(k, Fraction(0)) + v1 * v2
                if c:
                    t[k] = c
                else:
                    t.pop(k, None)
        out = LaurentPoly(self.arity)
        out.terms = t
        return out

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return self._lift(other) - self

    def __pow__(self, e):
        if e < 0:
            raise LaurentError("negative powers only via monomials")
        out = LaurentPoly.const(self.arity, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def _lift(self, other):
        if isinstance(other, LaurentPoly):
            if other.arity != self.arity:
                raise LaurentError("arity mismatch")
            return other
        return LaurentPoly.const(self.arity, other)

    # -- structure ---------------------------------------------------------------

    def lead_term(self):
        """Lexicographically greatest exponent (a total, multiplicative order)."""
        if not self.terms:
            raise LaurentError("zero polynomial has no lead term")
        k = max(self.terms)
        return k, self.terms[k]

    def exact_div(self, other, max_steps=200_000):
        """Exact quotient self / other; raises if division leaves junk."""
        other = self._lift(other)
        if other.is_zero():
            raise ZeroDivisionError
        quo = LaurentPoly(self.arity)
        rem = self
        dk, dv = other.lead_term()
        steps = 0
        while not rem.is_zero():
            steps += 1
            if steps > max_steps:
                raise LaurentError("exact_div did not terminate: not divisible")
            rk, rv = rem.lead_term()
            mono = tuple(a - b for a, b in zip(rk, dk))
            coef = rv / dv
            t = LaurentPoly.monomial(self.arity, mono, coef)
            quo = quo + t
            rem = rem - t * other
        return quo

    def substitute_values(self, values):
        """Full evaluation at a point (exact for int/Fraction inputs)."""
        if len(values) != self.arity:
            raise LaurentError("need one value per variable")
        exact = all(isinstance(x, (int, Fraction)) for x in values)
        xs = [Fraction(x) for x in values] if exact else list(values)
        acc = Fraction(0) if exact else 0j
        for k, v in self.terms.items():
            term = v if exact else complex(v)
            for e, x in zip(k, xs):
                if e:
                    term = term * x**e
            acc = acc + term
        return acc

    def coefficients_nonnegative_integers(self):
        return all(v.denominator == 1 and v >= 0 for v in self.terms.values())

    def total_degrees(self):
        return [sum(k) for k in self.terms]

    def max_abs_on_circle(self, radii):
        """Upper bound sum |coef| * prod radii^e (triangle inequality)."""
        out = 0.0
        for k, v in self.terms.items():
            t = abs(float(v))
            for e, r in zip(k, radii):
                t *= r**e
            out += t
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for k in sorted(self.terms, reverse=True):
            v = self.terms[k]
            mono = "*".join(f"x{i}^{e}" for i, e in enumerate(k) if e)
            bits.append(f"{v}" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)


class ParamLaurentPoly:
    """Laurent polynomial whose exponents are affine forms a + b*(c/2).

    Keys are tuples of (a, b) pairs, one per variable; b is the slope
    in units of c/2 and must stay in {0, 2} for the supported groups
    (slope 0 or 1 per variable in units of c)."""

    __slots__ = ("arity", "terms")

    def __init__(self, arity, terms=None):
        self.arity = arity
        t = {}
        if terms:
            for key, coef in (terms.items() if isinstance(terms, dict) else terms):
                coef = _coerce(coef)
                if not coef:
                    continue
                key = tuple((int(a), int(b)) for a, b in key)
                if len(key) != arity:
                    raise LaurentError("exponent arity mismatch")
                c = t.get(key, Fraction(0)) + coef
                if c:
                    t[key] = c
                else:
                    t.pop(key, None)
        self.terms = t

    @classmethod
    def from_laurent(cls, lp: LaurentPoly):
        return cls(lp.arity, {tuple((e, 0) for e in k): v for k, v in lp.terms.items()})

    def __add__(self, other):
        if isinstance(other, LaurentPoly):
            other = ParamLaurentPoly.from_laurent(other)
        t = dict(self.terms)
        for k, v in other.terms.items():
            c = t.get(k, Fraction(0)) + v
            if c:
                t[k] = c
            else:
                t.pop(k, None)
        out = ParamLaurentPoly(self.arity)
        out.terms = t
        return out

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            other = ParamLaurentPoly.from_laurent(other)
        t = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple((a1 + a2, b1 + b2) for (a1, b1), (a2, b2) in zip(k1, k2))
                c = t.get(k, Fraction(0)) + v1 * v2
                if c:
                    t[k] = c
                else:
                    t.pop(k, None)
        out = ParamLaurentPoly(self.arity)
        out.terms = t
        return out

    def specialize(self, c: int) -> LaurentPoly:
        if c % 2:
            raise LaurentError("the conductor parameter must be even")
        half = c // 2
        return LaurentPoly(self.arity,
                           [(tuple(a + b * half for a, b in k), v)
                            for k, v in self.terms.items()])

    def slopes(self):
        return sorted({b for k in self.terms for _, b in k})

    def slope_split(self):
        """Group terms by the per-variable slope pattern.

        Returns {epsilon tuple: LaurentPoly of the slope-free parts},
        with epsilon_u = +1 for slope 0 and -1 for slope 2 (in units
        of c/2).  Any other slope is a structural bug."""
        out = {}
        for k, v in self.terms.items():
            eps = []
            mono = []
            for a, b in k:
                if b == 0:
                    eps.append(1)
                elif b == 2:
                    eps.append(-1)
                else:
                    raise LaurentError(f"slope {b} outside the supported set")
                mono.append(a)
            eps = tuple(eps)
            cur = out.setdefault(eps, LaurentPoly(self.arity))
            out[eps] = cur + LaurentPoly.monomial(self.arity, mono, v)
        return out

    def __repr__(self):
        bits = []
        for k in sorted(self.terms, reverse=True):
            mono = "*".join(f"x{i}^({a}+{b}c/2)" for i, (a, b) in enumerate(k))
            bits.append(f"{self.terms[k]}" + (f"*{mono}" if mono else ""))
        return " + ".join(bits) if bits else "0"
