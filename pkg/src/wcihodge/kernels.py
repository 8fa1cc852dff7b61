"""Hot numeric kernels: rank over a prime field and the K3 candidate sieve.

Each kernel has a numba loop implementation (``*_nb``) and a numpy one
(``*_np``). The public wrappers dispatch on ``_accel.USE_NUMBA``.
"""
import itertools

import numpy as np

from . import _accel
from ._accel import njit

# ---------------------------------------------------------------------------
# rank over F_p
# ---------------------------------------------------------------------------


@njit
def _inv_mod(a, p):
    # extended Euclid; a is assumed to be a unit mod p
    t, new_t = 0, 1
    r, new_r = p, a % p
    while new_r != 0:
        q = r // new_r
        t, new_t = new_t, t - q * new_t
        r, new_r = new_r, r - q * new_r
    if t < 0:
        t += p
    return t


@njit
def _rank_nb(A, p):
    # row echelon form; entries stay in [0, p). For p = 2**31 - c with small c
    # the reduction is two folds x = lo + c * hi, which avoids integer division
    A = A.copy()
    m, n = A.shape
    c0 = (1 << 31) - p
    fold = 0 < c0 < (1 << 15)
    buf = np.empty(n, np.int64)
    rank = 0
    for c in range(n):
        if rank == m:
            break
        piv = -1
        for i in range(rank, m):
            if A[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != rank:
            for j in range(c, n):
                tmp = A[rank, j]
                A[rank, j] = A[piv, j]
                A[piv, j] = tmp
        inv = _inv_mod(A[rank, c], p)
        w = n - c
        for j in range(w):
            buf[j] = (A[rank, c + j] * inv) % p
        for i in range(rank + 1, m):
            f = A[i, c]
            if f == 0:
                continue
            f = p - f
            row = A[i, c:]
            if fold:
                for j in range(w):
                    x = row[j] + f * buf[j]
                    x = (x & 2147483647) + (x >> 31) * c0
                    x = (x & 2147483647) + (x >> 31) * c0
                    x -= p
                    row[j] = x + ((x >> 63) & p)
            else:
                for j in range(w):
                    row[j] = (row[j] + f * buf[j]) % p
        rank += 1
    return rank


def _rank_np(A, p):
    A = np.array(A, dtype=np.int64, copy=True)
    m, n = A.shape
    rank = 0
    for c in range(n):
        if rank == m:
            break
        nz = np.flatnonzero(A[rank:, c])
        if nz.size == 0:
            continue
        piv = rank + nz[0]
        if piv != rank:
            A[[rank, piv], c:] = A[[piv, rank], c:]
        inv = pow(int(A[rank, c]), -1, p)
        A[rank, c:] = (A[rank, c:] * inv) % p
        below = rank + 1 + np.flatnonzero(A[rank + 1:, c])
        if below.size:
            f = A[below, c][:, None]
            A[below, c:] = (A[below, c:] - f * A[rank, c:][None, :]) % p
        rank += 1
    return rank


def rank_mod_p(A, p, backend=None):
    """Rank of an integer matrix with entries in [0, p) over F_p.

    ``p`` must be below 2**31 so that products fit in int64.
    """
    if p >= 2 ** 31:
        raise ValueError("prime must be < 2**31")
    A = np.ascontiguousarray(A, dtype=np.int64)
    if A.size == 0:
        return 0
    # rank is invariant under transposition; eliminate along the short side
    if A.shape[0] > A.shape[1]:
        A = np.ascontiguousarray(A.T)
    backend = backend or _accel.backend_name()
    if backend == "numba":
        return int(_rank_nb(A, p))
    return _rank_np(A, p)


# ---------------------------------------------------------------------------
# K3 sieve for quasi-smooth hypersurfaces
# ---------------------------------------------------------------------------
#
# A candidate (a_0 <= ... <= a_N; d) survives the sieve when
#   * a_N < d < sum(a) and (q0 + 1) * d >= sum(a),
#   * every a_i divides d or d - a_j for some j != i (one-element subsets of
#     the quasi-smoothness criterion, a cheap necessary condition),
#   * the Jacobian ring series prod (1 - t^(d - a_j)) / (1 - t^a_j) has
#     coefficient 0 at (q + 1) d - sum(a) for 1 <= q < q0 and 1 at q = q0,
#   * the weights are well formed and the general member is quasi-smooth.
# With ``conventional`` two more conditions are imposed: (q0 + 1) d = sum(a),
# so that the K3 class is the unit of the Jacobian ring, and d >= 2 a_N.


@njit
def _pointer_ok_nb(w, d):
    nv = w.shape[0]
    for ii in range(nv):
        i = nv - 1 - ii  # large weights fail most often
        a = w[i]
        if d % a == 0:
            continue
        found = False
        for j in range(nv):
            if j != i and (d - w[j]) % a == 0:
                found = True
                break
        if not found:
            return False
    return True


@njit
def _k3_series_ok_nb(w, d, q0, buf):
    nv = w.shape[0]
    s = 0
    for i in range(nv):
        s += w[i]
    top = (q0 + 1) * d - s
    for e in range(top + 1):
        buf[e] = 0
    buf[0] = 1
    for i in range(nv):
        m = d - w[i]
        for e in range(top, m - 1, -1):
            buf[e] -= buf[e - m]
        a = w[i]
        for e in range(a, top + 1):
            buf[e] += buf[e - a]
    for q in range(1, q0):
        e = (q + 1) * d - s
        if e >= 0 and buf[e] != 0:
            return False
    return buf[top] == 1


@njit
def _gcd_nb(a, b):
    while b:
        a, b = b, a % b
    return a


@njit
def _wps_well_formed_nb(w):
    nv = w.shape[0]
    for skip in range(nv):
        g = 0
        for i in range(nv):
            if i != skip:
                g = _gcd_nb(g, w[i])
        if g != 1:
            return False
    return True


@njit
def _quasi_smooth_nb(w, d):
    # exact subset criterion for a general hypersurface of degree d; subsets are
    # bitmasks, reach[mask, e] says e lies in the semigroup of the mask weights
    nv = w.shape[0]
    nmask = 1 << nv
    reach = np.zeros((nmask, d + 1), np.bool_)
    reach[0, 0] = True
    for mask in range(1, nmask):
        low = mask & (-mask)
        i = 0
        while (1 << i) != low:
            i += 1
        prev = mask ^ low
        a = w[i]
        for e in range(d + 1):
            reach[mask, e] = reach[prev, e]
        for e in range(a, d + 1):
            if reach[mask, e - a]:
                reach[mask, e] = True
        if reach[mask, d]:
            continue
        size = 0
        hits = 0
        for j in range(nv):
            if mask & (1 << j):
                size += 1
            elif d >= w[j] and reach[mask, d - w[j]]:
                hits += 1
        if hits < size:
            return False
    return True


@njit
def _k3_candidate_nb(w, d, q0, buf):
    return (_pointer_ok_nb(w, d) and _k3_series_ok_nb(w, d, q0, buf)
            and _wps_well_formed_nb(w) and _quasi_smooth_nb(w, d))


@njit
def _k3_scan_nb(prefix, nvars, bound, q0, conventional, out):
    plen = prefix.shape[0]
    w = np.empty(nvars, np.int64)
    for i in range(plen):
        w[i] = prefix[i]
    lo = prefix[plen - 1]
    for i in range(plen, nvars):
        w[i] = lo
    buf = np.empty((q0 + 1) * nvars * bound + 1, np.int64)
    cap = out.shape[0]
    count = 0
    while True:
        s = 0
        for i in range(nvars):
            s += w[i]
        if conventional:
            dlo = s // (q0 + 1)
            dhi = dlo + 1
            if s % (q0 + 1) != 0 or dlo < 2 * w[nvars - 1]:
                dhi = dlo
        else:
            dlo = (s + q0) // (q0 + 1)
            if dlo < w[nvars - 1] + 1:
                dlo = w[nvars - 1] + 1
            dhi = s
        for d in range(dlo, dhi):
            if _k3_candidate_nb(w, d, q0, buf):
                if count < cap:
                    for i in range(nvars):
                        out[count, i] = w[i]
                    out[count, nvars] = d
                count += 1
        pos = nvars - 1
        while pos >= plen and w[pos] == bound:
            pos -= 1
        if pos < plen:
            break
        w[pos] += 1
        for i in range(pos + 1, nvars):
            w[i] = w[pos]
    return count


def _series_np(w, d, top):
    c = np.zeros(top + 1, dtype=np.int64)
    c[0] = 1
    for a in w:
        m = d - a
        if m <= top:
            c[m:] = c[m:] - c[: top + 1 - m].copy()
        for r in range(a):
            c[r::a] = np.cumsum(c[r::a])
    return c


def _quasi_smooth_np(w, d):
    nv = len(w)
    reach = np.zeros((1 << nv, d + 1), dtype=bool)
    reach[0, 0] = True
    for mask in range(1, 1 << nv):
        low = mask & -mask
        i = low.bit_length() - 1
        row = reach[mask ^ low].copy()
        a = int(w[i])
        for r in range(a):
            # closure under +a along each residue class
            row[r::a] = np.logical_or.accumulate(row[r::a])
        reach[mask] = row
        if row[d]:
            continue
        inside = [j for j in range(nv) if mask >> j & 1]
        hits = sum(1 for j in range(nv) if not mask >> j & 1 and d >= w[j] and row[d - w[j]])
        if hits < len(inside):
            return False
    return True


def _wps_well_formed_np(w):
    return all(np.gcd.reduce(np.delete(w, i)) == 1 for i in range(len(w)))


def _k3_scan_np(prefix, nvars, bound, q0, conventional):
    prefix = tuple(int(x) for x in prefix)
    tails = itertools.combinations_with_replacement(range(prefix[-1], bound + 1), nvars - len(prefix))
    T = np.array([prefix + t for t in tails], dtype=np.int64).reshape(-1, nvars)
    if T.shape[0] == 0:
        return np.zeros((0, nvars + 1), dtype=np.int64)
    S = T.sum(axis=1)
    if conventional:
        D = S // (q0 + 1)
        keep = (S % (q0 + 1) == 0) & (D >= 2 * T[:, -1])
        pairs = [(T[keep], D[keep])]
    else:
        dlo = np.maximum(T[:, -1] + 1, (S + q0) // (q0 + 1))
        pairs = []
        for d in range(int(dlo.min()), int(S.max())):
            sel = (dlo <= d) & (d < S)
            pairs.append((T[sel], np.full(int(sel.sum()), d, dtype=np.int64)))
    hits = []
    for sub, ds in pairs:
        if sub.shape[0] == 0:
            continue
        # one-element subsets, vectorised over candidates
        ok = np.ones(sub.shape[0], dtype=bool)
        for i in range(nvars):
            ai = sub[:, i]
            good = ds % ai == 0
            for j in range(nvars):
                if j != i:
                    good |= (ds - sub[:, j]) % ai == 0
            ok &= good
        for row, d in zip(sub[ok], ds[ok]):
            d = int(d)
            s = int(row.sum())
            top = (q0 + 1) * d - s
            c = _series_np(row, d, top)
            if any(c[(q + 1) * d - s] for q in range(1, q0) if (q + 1) * d - s >= 0) or c[top] != 1:
                continue
            if _wps_well_formed_np(row) and _quasi_smooth_np(row, d):
                hits.append(tuple(int(x) for x in row) + (d,))
    hits.sort()
    return np.array(hits, dtype=np.int64).reshape(-1, nvars + 1)


def k3_sieve(prefix, nvars, bound, q0, conventional=True, backend=None):
    """Candidates (weights..., degree) whose weights start with ``prefix``.

    Returns an int64 array of shape (m, nvars + 1) sorted by (weights, degree).
    """
    prefix = np.asarray(prefix, dtype=np.int64)
    if prefix.shape[0] == 0 or prefix.shape[0] > nvars:
        raise ValueError("prefix must be non-empty and at most nvars long")
    if np.any(np.diff(prefix) < 0) or prefix[-1] > bound:
        return np.zeros((0, nvars + 1), dtype=np.int64)
    backend = backend or _accel.backend_name()
    if backend != "numba":
        return _k3_scan_np(prefix, nvars, bound, q0, conventional)
    cap = 1024
    while True:
        out = np.empty((cap, nvars + 1), dtype=np.int64)
        count = _k3_scan_nb(prefix, nvars, bound, q0, conventional, out)
        if count <= cap:
            return out[:count]
        cap = count
