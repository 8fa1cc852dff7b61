"""Bigraded Jacobian rings and primitive middle Hodge numbers.

For ``X = {f_1 = ... = f_k = 0}`` in ``P(a_0..a_N)`` put
``S = C[x_0..x_N, w_1..w_k]`` with ``deg x_i = (0, a_i)`` and
``deg w_j = (1, -d_j)``, ``F = sum w_j f_j`` and let ``J`` be generated by the
``f_j`` (bidegree ``(0, d_j)``) and ``G_i = dF/dx_i`` (bidegree ``(1, -a_i)``).
For quasi-smooth ``X`` one has ``h_pr^{q, n-q} = dim R_{q, -i_X}``, ``R = S/J``.

A graded piece is computed as the corank of its Macaulay matrix (multiplier
monomial times generator, in the monomial basis of the piece) for a random
member over a prime field. Random specialisation can only raise the corank, so
the minimum over a few trials is the generic value with high probability.
"""
import zlib
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import prod

import numpy as np

from . import kernels
from .arith import binomial, hypersurface_jacobian_series, monomials
from .family import Family, summarize

PRIMES = (2147483647, 2147483629, 2147483587)
DEFAULT_SEED = 1729
DEFAULT_TRIALS = 3
DEFAULT_CAPACITY = 200_000
# larger pieces inside middle_row use a series or Euler number instead of a rank
DEFAULT_RANK_LIMIT = 2500
# dense matrices beyond this many entries are refused rather than swapped
MAX_ENTRIES = 60_000_000


class CapacityError(RuntimeError):
    """A graded piece is too large for the dense rank computation."""


@dataclass(frozen=True)
class BigradedContext:
    family: Family

    @cached_property
    def summary(self):
        return summarize(self.family)

    @property
    def nvars(self):
        return self.family.k + self.family.N + 1

    def bidegree(self, exponents):
        """Bidegree of ``w^beta x^alpha`` given as one vector ``(beta, alpha)``."""
        k = self.family.k
        beta, alpha = exponents[:k], exponents[k:]
        return (
            sum(beta),
            sum(m * a for m, a in zip(alpha, self.family.weights))
            - sum(b * d for b, d in zip(beta, self.family.degrees)),
        )

    def basis(self, q, e):
        """Monomials of bidegree ``(q, e)`` as rows ``(beta, alpha)``, in
        descending lexicographic order."""
        fam = self.family
        rows = []
        if q >= 0:
            for beta in monomials((1,) * fam.k, q):
                xdeg = e + sum(b * d for b, d in zip(beta, fam.degrees))
                for alpha in monomials(fam.weights, xdeg):
                    rows.append(beta + alpha)
        return np.array(rows, dtype=np.int64).reshape(-1, self.nvars)

    def basis_size(self, q, e):
        fam = self.family
        if q < 0:
            return 0
        total = 0
        for beta in monomials((1,) * fam.k, q):
            xdeg = e + sum(b * d for b, d in zip(beta, fam.degrees))
            total += len(monomials(fam.weights, xdeg))
        return total

    @cached_property
    def _equation_supports(self):
        return tuple(
            np.array(monomials(self.family.weights, d), dtype=np.int64)
            for d in self.family.degrees
        )


def _random_member(ctx, rng, p):
    # dense coefficients in [1, p): every monomial, Fermat ones included, is present
    return [rng.integers(1, p, size=len(s), dtype=np.int64) for s in ctx._equation_supports]


def _generator_terms(ctx, coefs, p):
    """Term lists (exponents, coefficients) of ``f_1..f_k`` then ``G_0..G_N``."""
    fam = ctx.family
    k, V = fam.k, ctx.nvars
    out = []
    for j, supp in enumerate(ctx._equation_supports):
        ex = np.zeros((len(supp), V), dtype=np.int64)
        ex[:, k:] = supp
        out.append((j, ex, coefs[j] % p))
    for i in range(fam.N + 1):
        exs, cs = [], []
        for j, supp in enumerate(ctx._equation_supports):
            sel = supp[:, i] > 0
            if not sel.any():
                continue
            ex = np.zeros((int(sel.sum()), V), dtype=np.int64)
            ex[:, j] = 1
            ex[:, k:] = supp[sel]
            ex[:, k + i] -= 1
            exs.append(ex)
            cs.append((coefs[j][sel] * supp[sel, i]) % p)
        if exs:
            out.append((k + i, np.vstack(exs), np.concatenate(cs)))
    return out


def _generator_bidegree(ctx, g):
    fam = ctx.family
    if g < fam.k:
        return (0, fam.degrees[g])
    return (1, -fam.weights[g - fam.k])


class _Keyer:
    """Injective integer keys for monomials bounded by the column basis."""

    def __init__(self, cols):
        radix = cols.max(axis=0) + 1 if len(cols) else np.ones(cols.shape[1], np.int64)
        total = 1
        for r in radix:
            total *= int(r)
        self.packed = total < 2 ** 62
        if self.packed:
            self.stride = np.cumprod(np.concatenate(([1], radix[:-1]))).astype(np.int64)
            keys = cols @ self.stride
            self.order = np.argsort(keys, kind="stable")
            self.sorted_keys = keys[self.order]
        else:
            self.index = {tuple(row): c for c, row in enumerate(cols.tolist())}

    def columns(self, mults, terms):
        if self.packed:
            keys = (mults @ self.stride)[:, None] + (terms @ self.stride)[None, :]
            pos = np.searchsorted(self.sorted_keys, keys)
            return self.order[pos]
        out = np.empty((len(mults), len(terms)), dtype=np.int64)
        for r, m in enumerate(mults):
            for t, term in enumerate(terms):
                out[r, t] = self.index[tuple(m + term)]
        return out


def macaulay_matrix(ctx, q, e, coefs, p):
    """Rows: every multiplier monomial times every generator landing in
    bidegree ``(q, e)``; columns: ``ctx.basis(q, e)``."""
    cols = ctx.basis(q, e)
    keyer = _Keyer(cols)
    blocks = []
    for g, ex, cs in _generator_terms(ctx, coefs, p):
        gq, ge = _generator_bidegree(ctx, g)
        mults = ctx.basis(q - gq, e - ge)
        if len(mults) == 0:
            continue
        block = np.zeros((len(mults), len(cols)), dtype=np.int64)
        block[np.arange(len(mults))[:, None], keyer.columns(mults, ex)] = cs[None, :]
        blocks.append(block)
    if not blocks:
        return np.zeros((0, len(cols)), dtype=np.int64)
    return np.vstack(blocks)


def _row_count(ctx, q, e):
    fam = ctx.family
    rows = sum(ctx.basis_size(q, e - d) for d in fam.degrees)
    rows += sum(ctx.basis_size(q - 1, e + a) for a in fam.weights)
    return rows


def _stream(seed, family, q, e, trial, p):
    tag = zlib.crc32(str(family).encode())
    return np.random.default_rng(np.random.SeedSequence([seed, tag, q, e % 2 ** 32, trial, p]))


def dim_bigraded(ctx, q, e, trials=DEFAULT_TRIALS, seed=DEFAULT_SEED, prime=PRIMES[0],
                 capacity=DEFAULT_CAPACITY, backend=None):
    """``dim R_{q, e}`` for a general member (minimum corank over ``trials``)."""
    if trials < 1:
        raise ValueError("trials must be positive")
    ncols = ctx.basis_size(q, e)
    if ncols == 0:
        return 0
    if ncols > capacity:
        raise CapacityError(f"{ctx.family}: basis of R_({q},{e}) has {ncols} > {capacity} monomials")
    nrows = _row_count(ctx, q, e)
    if nrows * ncols > MAX_ENTRIES:
        raise CapacityError(f"{ctx.family}: Macaulay matrix {nrows}x{ncols} is too large")
    floor = max(0, ncols - nrows)
    best = ncols
    for trial in range(trials):
        rng = _stream(seed, ctx.family, q, e, trial, prime)
        A = macaulay_matrix(ctx, q, e, _random_member(ctx, rng, prime), prime)
        best = min(best, ncols - kernels.rank_mod_p(A, prime, backend))
        if best == floor:
            break
    return best


def dim_graded_piece(ctx, q, trials=DEFAULT_TRIALS, seed=DEFAULT_SEED, prime=PRIMES[0],
                     capacity=DEFAULT_CAPACITY, backend=None):
    """``dim R_{q, -i_X}``, the primitive Hodge number ``h_pr^{q, n-q}`` when
    the general member is quasi-smooth."""
    if q < 0:
        raise ValueError("q must be non-negative")
    fam = ctx.family
    if fam.index <= 0 and q > fam.dim:
        raise ValueError(f"q={q} exceeds n={fam.dim} for a family with i_X <= 0")
    return dim_bigraded(ctx, q, -fam.index, trials, seed, prime, capacity, backend)


def hypersurface_piece_dimension(weights, degree, q):
    """``dim R_{q, -i_X}`` for a quasi-smooth hypersurface, read off the Hilbert
    series of its Jacobian ring at ``(q + 1) * degree - sum(weights)``."""
    e = (q + 1) * degree - sum(weights)
    if e < 0:
        return 0
    return hypersurface_jacobian_series(weights, degree, e)[e]


def euler_number(family):
    """Topological Euler number of a smooth member that misses ``Sing P``:
    ``deg X * [h^n] prod (1 + a_i h) / prod (1 + d_j h)`` with
    ``deg X = prod d / prod a``."""
    n = family.dim
    c = [Fraction(0)] * (n + 1)
    c[0] = Fraction(1)
    for a in family.weights:
        for e in range(n, 0, -1):
            c[e] += a * c[e - 1]
    for d in family.degrees:
        # divide by (1 + d h)
        for e in range(1, n + 1):
            c[e] -= d * c[e - 1]
    deg = Fraction(prod(family.degrees), prod(family.weights))
    chi = deg * c[n]
    if chi.denominator != 1:
        raise ValueError(f"{family}: non-integral Euler number {chi}")
    return int(chi)


def middle_betti(family):
    """``b_n`` of a smooth member, from its Euler number (all other Betti
    numbers are those of projective space)."""
    n = family.dim
    others = sum(1 for i in range(0, 2 * n + 1, 2) if i != n)
    return (-1) ** n * (euler_number(family) - others)


@dataclass(frozen=True)
class MiddleRow:
    """``values[q] = h_pr^{q, n-q}``; ``sources[q]`` records how each entry was
    obtained: ``rank``, ``quadric``, ``series``, ``euler`` or ``symmetry``."""

    n: int
    values: tuple
    sources: tuple = None

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if len(self.values) != self.n + 1:
            raise ValueError("a middle row has n + 1 entries")
        if self.sources is None:
            object.__setattr__(self, "sources", ("rank",) * (self.n + 1))
        else:
            object.__setattr__(self, "sources", tuple(self.sources))

    def __getitem__(self, q):
        return self.values[q]

    def __iter__(self):
        return iter(self.values)

    def is_symmetric(self):
        return self.values == self.values[::-1]


def _is_quadric_hypersurface(family):
    return family.k == 1 and family.degrees[0] == 2 and family.straight


def middle_row(ctx, trials=DEFAULT_TRIALS, seed=DEFAULT_SEED, prime=PRIMES[0],
               capacity=DEFAULT_CAPACITY, backend=None, mirror=True,
               rank_limit=DEFAULT_RANK_LIMIT):
    """Primitive middle Hodge numbers ``h_pr^{q, n-q}``, ``q = 0..n``.

    With ``mirror`` only ``q <= n/2`` is computed and the rest filled in by
    Hodge symmetry. Pieces whose basis exceeds ``rank_limit`` are not ranked:
    for a quasi-smooth hypersurface they are read off the Jacobian series, and
    the central entry of a smooth member follows from its Euler number.
    Otherwise ``CapacityError`` is raised.
    """
    from .regularity import Verdict, quasi_smooth_general_member, smooth_general_member

    fam = ctx.family
    n = fam.dim
    if fam.index <= 0:
        raise ValueError("middle_row requires a Fano family (i_X > 0)")
    if _is_quadric_hypersurface(fam):
        return MiddleRow(n, [1 if 2 * q == n else 0 for q in range(n + 1)], ("quadric",) * (n + 1))
    top = n // 2 if mirror else n
    vals, srcs = [], []
    deferred = None
    for q in range(top + 1):
        size = ctx.basis_size(q, -fam.index)
        if size <= min(rank_limit, capacity):
            vals.append(dim_graded_piece(ctx, q, trials, seed, prime, capacity, backend))
            srcs.append("rank")
        elif fam.k == 1 and quasi_smooth_general_member(fam) is Verdict.CERTIFIED:
            vals.append(hypersurface_piece_dimension(fam.weights, fam.degrees[0], q))
            srcs.append("series")
        elif mirror and q == top and smooth_general_member(fam) is Verdict.CERTIFIED:
            deferred = q
            vals.append(0)
            srcs.append("euler")
        else:
            raise CapacityError(f"{fam}: R_({q},{-fam.index}) has {size} basis monomials")
    if mirror:
        vals += [vals[n - q] for q in range(top + 1, n + 1)]
        srcs += ["symmetry"] * (n - top)
    if deferred is not None:
        betti = middle_betti(fam)
        known = sum(v for q, v in enumerate(vals) if q != deferred and q != n - deferred)
        centre = (1 if n % 2 == 0 else 2)
        full = betti - known - (1 if n % 2 == 0 else 0)
        if full < 0 or full % centre:
            raise ValueError(f"{fam}: inconsistent Euler number")
        vals[deferred] = full // centre
        if n - deferred != deferred:
            vals[n - deferred] = vals[deferred]
    return MiddleRow(n, vals, srcs)


@dataclass(frozen=True)
class HodgeDiamond:
    """Full table ``h[p][q]``, ``0 <= p, q <= n``."""

    n: int
    h: tuple = field(repr=False)

    @classmethod
    def from_middle_row(cls, row):
        n = row.n
        h = [[0] * (n + 1) for _ in range(n + 1)]
        for p in range(n + 1):
            if 2 * p != n:
                h[p][p] = 1
            h[p][n - p] = row[p] + (1 if 2 * p == n else 0)
        return cls(n, tuple(tuple(r) for r in h))

    def __getitem__(self, pq):
        p, q = pq
        return self.h[p][q]

    def middle(self):
        return tuple(self.h[p][self.n - p] for p in range(self.n + 1))

    def primitive_middle(self):
        return tuple(v - (1 if 2 * p == self.n else 0) for p, v in enumerate(self.middle()))

    def hodge_level(self):
        """Largest ``|p - q|`` with ``h^{p,q} != 0`` and ``p + q = n``;
        ``-inf`` if the whole middle row vanishes."""
        spread = [abs(self.n - 2 * p) for p, v in enumerate(self.middle()) if v]
        return max(spread) if spread else float("-inf")

    def to_rows(self):
        return [list(r) for r in self.h]


def hodge_diamond(ctx, **kwargs):
    return HodgeDiamond.from_middle_row(middle_row(ctx, **kwargs))


# ---------------------------------------------------------------------------
# closed forms and bounds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClosedForm:
    value: int
    exact: bool  # False: ``value`` is only a lower bound


def quadric_cubic_closed_forms(N, k1, k2):
    """``h_pr^{p_X, n - p_X}`` for a smooth Fano intersection of ``k1`` quadrics
    and ``k2`` cubics in ``P^N``.

    Exact when ``i_X`` is even and there are no cubics (the count of degree
    ``p_X`` monomials in the ``k1`` quadric variables ``w_j``) and for cubics
    with ``r in (0, 1)``; a lower bound otherwise. For ``r = 1`` the piece has
    no relations at all, and besides the ``(N + 1) * C(k2 + p - 1, k2 - 1)``
    monomials ``w^gamma x_i`` it contains the ``k1 * C(k2 + p - 2, k2 - 1)``
    pure monomials with one quadric variable.
    """
    if k1 < 0 or k2 < 0 or k1 + k2 == 0:
        raise ValueError("need k1, k2 >= 0 and at least one equation")
    if k1 + k2 >= N:
        raise ValueError("codimension must be below N")
    i = N + 1 - 2 * k1 - 3 * k2
    if i <= 0:
        raise ValueError("not a Fano family")
    if k2 == 0:
        p = -(-i // 2)
        if k1 == 1:
            n = N - 1
            return ClosedForm(1 if n % 2 == 0 else 0, True)
        if i % 2 == 0:
            return ClosedForm(binomial(p + k1 - 1, k1 - 1), True)
        return ClosedForm(k1 * binomial(k1 + p - 2, p), False)
    p = -(-i // 3)
    r = 3 * p - i
    base = binomial(k2 + p - 1, k2 - 1)
    if r == 0:
        return ClosedForm(base, True)
    if r == 1:
        return ClosedForm((N + 1) * base + k1 * binomial(k2 + p - 2, k2 - 1), True)
    return ClosedForm(N * (N + 1) // 2 * base, False)


def closed_form_for(family):
    """Dispatch ``quadric_cubic_closed_forms`` on a family in ``P^N``."""
    if not family.straight:
        raise ValueError("closed forms cover straight projective spaces only")
    if family.degrees[-1] > 3:
        raise ValueError("closed forms need all degrees <= 3")
    return quadric_cubic_closed_forms(family.N, family.degrees.count(2), family.degrees.count(3))


def lower_bound(summary):
    """Lower bound for ``h_pr^{p_X, n - p_X}`` when ``d >= 3``; exactly 1 is
    returned when ``k = s + 1`` and ``r = 0`` (then the value is 1)."""
    if summary.index <= 0:
        raise ValueError("lower_bound requires i_X > 0")
    if summary.d < 3:
        raise ValueError("lower_bound requires d >= 3")
    p, r, k, s, l, d = summary.p, summary.r, summary.k, summary.s, summary.l, summary.d
    if k == s + 1 and r == 0:
        return 1
    head = binomial(p + k - s - 1, p)
    if r < d - 1:
        return head * binomial(r + l - s, r)
    return head * (binomial(d - 1 + l - s, d - 1) + s - l - 1)
