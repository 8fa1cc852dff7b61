"""Integer and combinatorial primitives.

Everything here works on Python ints, so counts never overflow.
"""
from dataclasses import dataclass, field
from functools import lru_cache, reduce
from itertools import product
from math import comb, gcd


def binomial(top, bottom):
    """Binomial coefficient with ``binomial(top, bottom) = 0`` when
    ``top < bottom`` or ``top < 0``.

    >>> binomial(7, 4), binomial(3, 5), binomial(-1, 0)
    (35, 0, 0)
    """
    if bottom < 0:
        raise ValueError("bottom must be non-negative")
    if top < 0 or top < bottom:
        return 0
    return comb(top, bottom)


def gcd_all(values):
    return reduce(gcd, values, 0)


def degree_counts(weights, max_degree):
    """List ``c`` with ``c[e]`` = number of monomials of weighted degree ``e``
    for ``0 <= e <= max_degree``."""
    if any(w < 1 for w in weights):
        raise ValueError("weights must be positive")
    counts = [0] * (max_degree + 1)
    if max_degree < 0:
        return counts
    counts[0] = 1
    for w in weights:
        for e in range(w, max_degree + 1):
            counts[e] += counts[e - w]
    return counts


def count_monomials(weights, degree):
    """Number of monomials of the given weighted degree."""
    if degree < 0:
        return 0
    return degree_counts(weights, degree)[degree]


@dataclass(frozen=True)
class WeightedDegreeTable:
    """Monomial counts per weighted degree, ``counts[e]`` for ``e <= max_degree``."""

    weights: tuple
    max_degree: int
    counts: tuple = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(self.weights))
        object.__setattr__(self, "counts", tuple(degree_counts(self.weights, self.max_degree)))

    def __getitem__(self, degree):
        if degree < 0:
            return 0
        return self.counts[degree]


@lru_cache(maxsize=4096)
def _monomials(weights, degree):
    if not weights:
        return ((),) if degree == 0 else ()
    w0, rest = weights[0], weights[1:]
    out = []
    for m in range(degree // w0, -1, -1):
        for tail in _monomials(rest, degree - m * w0):
            out.append((m,) + tail)
    return tuple(out)


def monomials(weights, degree):
    """Exponent vectors of weighted degree ``degree``, lexicographically
    descending (``x_0^degree`` first when ``weights[0] == 1``)."""
    if degree < 0:
        return ()
    return _monomials(tuple(weights), degree)


@lru_cache(maxsize=65536)
def _semigroup_mask(weights, bound):
    reach = 1
    full = (1 << (bound + 1)) - 1
    for w in weights:
        # closing under +w: shifts by w, 2w, 4w, ... reach every multiple
        step = w
        while step <= bound:
            reach |= (reach << step) & full
            step *= 2
    return reach


def representable(degree, weights):
    """True iff ``degree`` lies in the numerical semigroup generated by
    ``weights`` (0 is always representable)."""
    if degree < 0:
        return False
    if degree == 0:
        return True
    ws = tuple(sorted(set(w for w in weights if w <= degree)))
    if not ws:
        return False
    return bool(_semigroup_mask(ws, degree) >> degree & 1)


def poincare_ci_dimension(l, degrees, r):
    """Dimension of the degree-``r`` part of ``C[x_0..x_l] / (f_1..f_s)`` for a
    complete intersection of the given degrees, as the nested binomial sum."""
    s = len(degrees)
    if s > l:
        raise ValueError("need at most l relations in l+1 variables")
    total = 0
    for ts in product(*(range(d) for d in degrees)):
        total += binomial(r - sum(ts) + l - s, l - s)
    return total


def hypersurface_jacobian_series(weights, degree, top):
    """Coefficients up to ``top`` of ``prod (1 - t^(degree - a)) / (1 - t^a)``,
    the Hilbert series of the Jacobian ring of a quasi-smooth polynomial of the
    given degree."""
    c = [0] * (top + 1)
    c[0] = 1
    for a in weights:
        m = degree - a
        if m <= 0:
            raise ValueError("every weight must be smaller than the degree")
        for e in range(top, m - 1, -1):
            c[e] -= c[e - m]
        for e in range(a, top + 1):
            c[e] += c[e - a]
    return c
