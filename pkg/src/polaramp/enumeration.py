"""Exhaustive enumeration of classes of given degree and square.

For L with L^2 > 0 on a hyperbolic lattice, the classes x with x.L = c form
a coset x0 + K of the orthogonal lattice K = L^perp, on which the form is
negative definite.  Writing x = x0 + K t turns x^2 = m into a shifted
definite problem q(t + s) = target, solved by Fincke-Pohst style interval
recursion over an exact LDL^T factorisation of -q.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Sequence, Union

from .lattice import Lattice, PolarizedSurface, Vector

Rational = Union[int, Fraction]


class NonDefiniteForm(ValueError):
    pass


class NotPositiveError(ValueError):
    """The degree class has nonpositive square, so the slice is not finite."""


# ---------------------------------------------------------------------------
# small exact linear algebra helpers


def _gram_of(cols: list[Vector], form: Sequence[Sequence[int]]) -> list[list[int]]:
    applied = [[sum(g * x for g, x in zip(row, c)) for row in form] for c in cols]
    return [[sum(a * b for a, b in zip(ac, c2)) for c2 in cols] for ac in applied]


def _ldl(p: Sequence[Sequence[Rational]]) -> tuple[list[Fraction], list[list[Fraction]]]:
    """LDL^T of a positive definite matrix without pivoting.

    Returns (d, mu) with x^T p x = sum_i d[i] * (x_i + sum_{j>i} mu[i][j] x_j)^2.
    """
    n = len(p)
    a = [[Fraction(v) for v in row] for row in p]
    d: list[Fraction] = []
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        di = a[i][i]
        if di <= 0:
            raise NonDefiniteForm("form is not definite")
        d.append(di)
        for j in range(i + 1, n):
            mu[i][j] = a[i][j] / di
        for r in range(i + 1, n):
            for s in range(i + 1, n):
                a[r][s] -= a[r][i] * a[i][s] / di
    return d, mu


def _solve(p: Sequence[Sequence[Rational]], b: Sequence[Rational]) -> list[Fraction]:
    """Solve p y = b exactly (p nonsingular)."""
    n = len(p)
    m = [[Fraction(v) for v in row] + [Fraction(bi)] for row, bi in zip(p, b)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col] / m[col][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[i][n] / m[i][i] for i in range(n)]


def lll_reduce(p: Sequence[Sequence[int]]) -> list[list[int]]:
    """LLL-reduce (delta = 3/4) the basis of a positive definite integral Gram matrix.

    Integral variant working only with the Gram matrix: ``d[i]`` are the
    leading principal minors and ``lam`` the scaled Gram-Schmidt
    coefficients, all integers.  Returns the unimodular transform as a list
    of columns; the reduced Gram matrix is T^T p T.  Used only to speed up
    the definite search.
    """
    n = len(p)
    basis = [[int(i == j) for j in range(n)] for i in range(n)]
    if n <= 1:
        return basis

    def ip(x, y):
        return sum(x[i] * p[i][j] * y[j] for i in range(n) if x[i] for j in range(n) if y[j])

    # 1-based bookkeeping, d[0] = 1
    d = [1] + [0] * n
    lam = [[0] * (n + 1) for _ in range(n + 1)]
    d[1] = ip(basis[0], basis[0])

    def red(k: int, l: int) -> None:
        if 2 * abs(lam[k][l]) <= d[l]:
            return
        q = (2 * lam[k][l] + d[l]) // (2 * d[l])
        basis[k - 1] = [a - q * b for a, b in zip(basis[k - 1], basis[l - 1])]
        lam[k][l] -= q * d[l]
        for i in range(1, l):
            lam[k][i] -= q * lam[l][i]

    def swap(k: int, kmax: int) -> None:
        basis[k - 1], basis[k - 2] = basis[k - 2], basis[k - 1]
        for j in range(1, k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        la = lam[k][k - 1]
        b = (d[k - 2] * d[k] + la * la) // d[k - 1]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k] * lam[i][k - 1] - la * t) // d[k - 1]
            lam[i][k - 1] = (b * t + la * lam[i][k]) // d[k]
        d[k - 1] = b

    k, kmax = 2, 1
    while k <= n:
        if k > kmax:
            kmax = k
            for j in range(1, k + 1):
                u = ip(basis[k - 1], basis[j - 1])
                for i in range(1, j):
                    u = (d[i] * u - lam[k][i] * lam[j][i]) // d[i - 1]
                if j < k:
                    lam[k][j] = u
                else:
                    if u <= 0:
                        raise NonDefiniteForm("form is not positive definite")
                    d[k] = u
        red(k, k - 1)
        if 4 * d[k] * d[k - 2] < 3 * d[k - 1] ** 2 - 4 * lam[k][k - 1] ** 2:
            swap(k, kmax)
            k = max(2, k - 1)
            continue
        for l in range(k - 2, 0, -1):
            red(k, l)
        k += 1
    return basis


def _integer_range(center: Fraction, radius_sq: Fraction) -> range:
    """Integers t with (t - center)^2 <= radius_sq."""
    if radius_sq < 0:
        return range(0)
    r = isqrt(radius_sq.numerator // radius_sq.denominator)
    lo = center.numerator // center.denominator - r - 1
    hi = -((-center.numerator) // center.denominator) + r + 1
    while lo <= hi and (lo - center) ** 2 > radius_sq:
        lo += 1
    while hi >= lo and (hi - center) ** 2 > radius_sq:
        hi -= 1
    return range(lo, hi + 1)


def _fincke_pohst(d: list[Fraction], mu: list[list[Fraction]], shift: list[Fraction], bound: Fraction) -> list[Vector]:
    """All integer t with sum_i d_i (t_i + s_i + sum_{j>i} mu_ij (t_j + s_j))^2 == bound."""
    n = len(d)
    if n == 0:
        return [()] if bound == 0 else []
    out: list[Vector] = []
    t = [0] * n
    y = [Fraction(0)] * n

    def rec(i: int, rem: Fraction) -> None:
        center = -shift[i] - sum((mu[i][j] * y[j] for j in range(i + 1, n)), Fraction(0))
        for ti in _integer_range(center, rem / d[i]):
            left = rem - d[i] * (ti - center) ** 2
            t[i] = ti
            y[i] = ti + shift[i]
            if i == 0:
                if left == 0:
                    out.append(tuple(t))
            else:
                rec(i - 1, left)

    rec(n - 1, bound)
    return out


def definite_enumerate(q: Sequence[Sequence[int]], shift: Sequence[Rational], target: Rational) -> list[Vector]:
    """Integer vectors v with q(v + shift) == target for negative definite q.

    Output is sorted lexicographically.  A positive target has no solutions.
    """
    n = len(q)
    lat = Lattice.from_rows(q)
    if lat.signature != (0, n, 0):
        raise NonDefiniteForm(f"form has signature {lat.signature}, expected (0, {n}, 0)")
    target = Fraction(target)
    if target > 0:
        return []
    p = [[-v for v in row] for row in lat.gram]
    cols = lll_reduce(p)
    red = _gram_of([tuple(c) for c in cols], p)
    # shift in reduced coordinates: v = T w, so v + s = T (w + T^{-1} s)
    tmat = [[cols[c][r] for c in range(n)] for r in range(n)]
    s_red = _solve(tmat, [Fraction(x) for x in shift])
    d, mu = _ldl(red)
    sols = _fincke_pohst(d, mu, s_red, -target)
    out = [tuple(sum(cols[c][r] * w[c] for c in range(n)) for r in range(n)) for w in sols]
    return sorted(out)


# ---------------------------------------------------------------------------
# slices {x : x.L = c, x^2 = m}


def _unimodular_for_form(v: Sequence[int]) -> tuple[int, list[list[int]]]:
    """Return (g, U) with U unimodular (list of columns) and v.U = (g, 0, ..., 0), g > 0."""
    n = len(v)
    v = list(v)
    cols = [[int(i == j) for j in range(n)] for i in range(n)]
    while sum(1 for a in v if a) > 1:
        i = min((j for j in range(n) if v[j]), key=lambda j: abs(v[j]))
        for j in range(n):
            if j != i and v[j]:
                q = v[j] // v[i]
                v[j] -= q * v[i]
                cols[j] = [a - q * b for a, b in zip(cols[j], cols[i])]
    i = next(j for j in range(n) if v[j])
    cols[0], cols[i] = cols[i], cols[0]
    v[0], v[i] = v[i], v[0]
    if v[0] < 0:
        v[0] = -v[0]
        cols[0] = [-a for a in cols[0]]
    return v[0], cols


class _Slicer:
    """Precomputed data for slicing a lattice along a fixed positive class L.

    With v = gram L, g = gcd(v) and a unimodular U with v U = (g, 0, ..., 0),
    the classes of degree c are (c / g) u0 + K t where u0 is the first column
    of U and K (the remaining columns, LLL-reduced) spans L^perp.
    """

    def __init__(self, lattice: Lattice, L: Vector):
        self.lattice = lattice
        self.L = L
        self.L_sq = lattice.square(L)
        if self.L_sq <= 0:
            raise NotPositiveError(f"slicing class has square {self.L_sq} <= 0")
        self.g, cols = _unimodular_for_form(lattice.apply(L))
        self.base = tuple(cols[0])
        kernel = [tuple(c) for c in cols[1:]]
        self.base_sq = lattice.square(self.base)
        if kernel:
            q = _gram_of(kernel, lattice.gram)
            if Lattice.from_rows(q).signature != (0, len(kernel), 0):
                raise NonDefiniteForm("orthogonal complement of the slicing class is not negative definite")
            red = lll_reduce([[-a for a in row] for row in q])
            kernel = [tuple(sum(k[r] * t for k, t in zip(kernel, col)) for r in range(lattice.rank)) for col in red]
            self.q = _gram_of(kernel, lattice.gram)
            self.d, self.mu = _ldl([[-a for a in row] for row in self.q])
            # x^2 = x0^2 + 2 b.t + t^T q t is linear in c through x0 = (c/g) base
            gbase = lattice.apply(self.base)
            b1 = [sum(a * k for a, k in zip(gbase, col)) for col in kernel]
            self.s1 = _solve(self.q, b1)
            self.s1_b1 = sum(s * b for s, b in zip(self.s1, b1))
        self.kernel = kernel

    def solve(self, c: int, m: int) -> list[Vector]:
        if c % self.g:
            return []
        lat = self.lattice
        scale = c // self.g
        x0 = tuple(scale * a for a in self.base)
        if not self.kernel:
            return [x0] if scale * scale * self.base_sq == m else []
        s = [scale * v for v in self.s1]
        # completing the square: q(t + s) = m - x0^2 + s.b
        target = m - scale * scale * (self.base_sq - self.s1_b1)
        if target > 0:
            return []
        n = lat.rank
        out = []
        for t in _fincke_pohst(self.d, self.mu, s, -target):
            x = tuple(x0[r] + sum(k[r] * tc for k, tc in zip(self.kernel, t)) for r in range(n))
            assert lat.pair(x, self.L) == c and lat.square(x) == m
            out.append(x)
        return sorted(out)


@lru_cache(maxsize=4096)
def _slicer(lattice: Lattice, L: Vector) -> _Slicer:
    return _Slicer(lattice, L)


def classes_with_degree_and_square(
    where: Lattice | PolarizedSurface,
    L: Sequence[int],
    c: int,
    m: int,
    positive: bool = False,
) -> list[Vector]:
    """All classes x with x.L == c and x^2 == m, sorted lexicographically.

    ``where`` is a lattice or a surface.  With ``positive=True`` (surfaces
    only) the result is restricted to classes with x.h > 0.  The lattice must
    be hyperbolic and L^2 > 0, which makes the answer finite.
    """
    if isinstance(where, PolarizedSurface):
        lattice, h = where.lattice, where.h
    else:
        lattice, h = where, None
    L = lattice.check(L)
    out = _slicer(lattice, L).solve(c, m)
    if positive:
        if h is None:
            raise ValueError("orientation filter needs a surface with a reference class")
        out = [x for x in out if lattice.pair(x, h) > 0]
    return out
