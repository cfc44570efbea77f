"""Band-limited test kernels for zero statistics.

A kernel is the pair (g, f): g is even, compactly supported on
[-lam, lam], and f(x) = int g(xi) e(x xi) dxi is its inverse Fourier
transform.  The density statistic needs the q-adic periodization

    F(x; n) = sum_k f((log q^(n-1))/(2 pi) * (x + 2 pi k / log q)),

which collapses, via Poisson summation and the integrality of n - 1,
to the finite exact form

    F(x; n) = (1/(n-1)) * sum_{|m| <= lam (n-1)} g(m/(n-1)) e^(i m x log q).

The direct k-series (with its 1/x^2 tail bound) is kept as a slow
cross-check; its truncation certificate cannot reach 1e-12 in sane
time, the Poisson form can (its error is exactly zero).
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class KernelError(ValueError):
    pass


def _sinc(u: float) -> float:
    """sin(pi u) / (pi u), stable near zero."""
    if abs(u) < 1e-8:
        v = math.pi * u
        return 1.0 - v * v / 6.0
    return math.sin(math.pi * u) / (math.pi * u)


@dataclass(frozen=True)
class TestKernel:
    shape: str            # "triangle" | "cosine"
    lam: float            # support radius of g

    def __post_init__(self):
        if self.shape not in ("triangle", "cosine"):
            raise KernelError(f"unknown kernel shape {self.shape!r}")
        if self.lam <= 0:
            raise KernelError("support radius must be positive")

    # -- Fourier side -------------------------------------------------------

    def g(self, xi: float) -> float:
        a = abs(xi)
        if a >= self.lam:
            return 0.0
        if self.shape == "triangle":
            return 1.0 - a / self.lam
        return 0.5 * (1.0 + math.cos(math.pi * a / self.lam))

    def g_integral(self) -> float:
        return self.lam  # both shapes have unit height and mass lam

    def g_integral_window(self, r: float) -> float:
        """int_{-r}^{r} g, exact."""
        lam = self.lam
        r = min(r, lam)
        if self.shape == "triangle":
            return 2 * r - r * r / lam
        return r + (lam / math.pi) * math.sin(math.pi * r / lam)

    # -- x side ---------------------------------------------------------------

    def f(self, x: float) -> float:
        lam = self.lam
        if self.shape == "triangle":
            u = lam * x
            return lam * _sinc(u) * _sinc(u)
        # raised cosine: lam * [sinc(t) + (sinc(t+1) + sinc(t-1))/2]
        t = 2 * lam * x
        return lam * (_sinc(t) + 0.5 * (_sinc(t + 1.0) + _sinc(t - 1.0)))

    @property
    def m0(self) -> float:
        """int |g|."""
        return self.lam

    @property
    def m2(self) -> float:
        """int |g''| / (2 pi)^2, the 1/x^2 envelope constant of f."""
        if self.shape == "triangle":
            return 1.0 / (self.lam * math.pi**2)
        return 1.0 / (2.0 * math.pi * self.lam)

    def f_envelope(self, x: float) -> float:
        if x == 0:
            return self.m0
        return min(self.m0, self.m2 / (x * x))

    # -- density reference ----------------------------------------------------

    def density_reference(self) -> float:
        """int (1 - sin(2 pi x)/(2 pi x)) f(x) dx, evaluated on the
        Fourier side: g(0) - (1/2) int_{-1}^{1} g."""
        return self.g(0.0) - 0.5 * self.g_integral_window(1.0)


def periodize(kernel: TestKernel, q: int, n: int, x: float) -> float:
    """F(x; n) by the exact finite Poisson form; 2 pi / log q periodic
    in x by construction."""
    if n < 2:
        raise KernelError("need n >= 2")
    width = n - 1
    mmax = int(math.floor(kernel.lam * width + 1e-12))
    acc = kernel.g(0.0)
    lq = math.log(q)
    for m in range(1, mmax + 1):
        gm = kernel.g(m / width)
        if gm:
            acc += 2.0 * gm * math.cos(m * x * lq)
    return acc / width


def periodize_direct(kernel: TestKernel, q: int, n: int, x: float,
                     tol: float = 1e-6):
    """Direct k-series evaluation of F(x; n) with a certified tail.

    Returns (value, tail_bound); the bound comes from |f| <= M2/x^2.
    Only realistic for tolerances around 1e-6; the Poisson form is the
    production path."""
    width = n - 1
    lq = math.log(q)
    x0 = x * lq / (2 * math.pi)  # f argument is width * (x0 + k)
    m2 = kernel.m2 / width**2
    half = math.ceil(abs(x0)) + 1
    terms = max(8, math.ceil(2.0 * m2 / tol) + half)
    acc = 0.0
    for k in range(-terms, terms + 1):
        acc += kernel.f(width * (x0 + k))
    # integral comparison bound for the two discarded geometric-style tails
    tail = 2.0 * m2 / max(terms - half, 1)
    return acc, tail
