"""Acceptance criteria 1-7.

Each test prints one ``CRITERION k: PASS|FAIL`` line (collected again in the
terminal summary). Run standalone with ``python tests/test_acceptance.py``.
Set ``WCIHODGE_ACCEPTANCE_STRICT=1`` to also report the K3 counts under the
literal definition (about twenty minutes on one core).
"""
import os
import time
from math import ceil

import pytest

from wcihodge.classify import (
    NEG_INF,
    classify,
    hodge_level,
    hodge_level_floor,
    labels_from_diamond,
    small_index_case,
    structural_labels,
)
from wcihodge.family import Family, parse_family, summarize
from wcihodge.jacobian import (
    PRIMES,
    BigradedContext,
    HodgeDiamond,
    dim_graded_piece,
    lower_bound,
    middle_row,
    quadric_cubic_closed_forms,
)
from wcihodge.search import (
    CURVES,
    CY3_TYPE,
    SURFACES,
    THREEFOLDS,
    SearchOptions,
    enumerate_quasismooth_k3_hypersurfaces,
    enumerate_smooth_fano,
)

RESULTS = []

# time budgets in seconds
BUDGET = {1: 60, 2: 10, 3: 600, 4: 300, 6: 300, 7: 300}
K3_TARGETS = {(5, 50): 124, (7, 30): 122, (9, 20): 105}
CY3 = CY3_TYPE
EXAMPLES = [("P(1^4,2^2) : 4", 1, -4, 1), ("P(1,4,5,6,8^4) : 16", 2, -32, 1), ("P(1^3,3^3) : 6", 1, -6, 1)]

_CACHE = {}
_TIMES = {}


def report(criterion, ok, detail):
    line = f"CRITERION {criterion}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS.append(line)
    print(line)
    return ok


def smooth_records(n):
    if n not in _CACHE:
        t = time.perf_counter()
        _CACHE[n] = enumerate_smooth_fano(n)
        _TIMES[n] = time.perf_counter() - t
    return _CACHE[n]


def enumeration_time(dims):
    """Elapsed time of the (cached) enumerations a criterion depends on."""
    return sum(_TIMES[n] for n in dims)


def table_values(options=SearchOptions()):
    """Criterion 1 and 2 Hodge values under the given seed and prime."""
    out = {}
    for dim in (1, 2, 3):
        for rec in enumerate_smooth_fano(dim, options).records:
            p = 1 if dim > 1 else 0
            out[str(rec.family)] = rec.diamond[p][dim - p]
    kw = options.jacobian_kwargs()
    out["cubic fourfold h13"] = dim_graded_piece(BigradedContext(parse_family("P^5 : 3")), 1, **kw)
    for text in CY3:
        out[text] = middle_row(BigradedContext(parse_family(text)), **kw).values
    for text, q, _, _ in EXAMPLES:
        out[text] = dim_graded_piece(BigradedContext(parse_family(text)), q, **kw)
    return out


def test_criterion_1_tables():
    t = time.perf_counter()
    found = {}
    counts = {}
    for dim in (1, 2, 3):
        records = smooth_records(dim).records
        counts[dim] = len(records)
        for rec in records:
            p = 1 if dim > 1 else 0
            found[str(rec.family)] = rec.diamond[p][dim - p]
    elapsed = max(time.perf_counter() - t, enumeration_time((1, 2, 3)))
    expected = {**CURVES, **SURFACES, **THREEFOLDS}
    ok = found == expected and elapsed < BUDGET[1]
    h11 = [found.get(f) for f in SURFACES]
    h12 = [found.get(f) for f in THREEFOLDS]
    assert report(1, ok, f"families per dim {counts}; h11={h11}; h12={h12}; {elapsed:.1f}s < {BUDGET[1]}s")


def test_criterion_2_named_values():
    details, ok = [], True
    t = time.perf_counter()
    v = dim_graded_piece(BigradedContext(parse_family("P^5 : 3")), 1)
    ok &= v == 1
    details.append(f"cubic4 h13={v}")
    slowest = time.perf_counter() - t
    for text in CY3:
        t = time.perf_counter()
        fam = parse_family(text)
        row = middle_row(BigradedContext(fam))
        diamond = HodgeDiamond.from_middle_row(row)
        labels = labels_from_diamond(diamond)
        edge = (fam.dim - 3) // 2
        vals = list(row.values)
        edge_ok = vals[edge] == 1 == vals[fam.dim - edge] and not any(vals[:edge] + vals[fam.dim - edge + 1:])
        ok &= edge_ok and labels.cy_type == 3
        details.append(f"{text} row={vals}")
        slowest = max(slowest, time.perf_counter() - t)
    for text, q, e, want in EXAMPLES:
        t = time.perf_counter()
        fam = parse_family(text)
        assert -fam.index == e
        v = dim_graded_piece(BigradedContext(fam), q)
        ok &= v == want
        details.append(f"{text} dim R_({q},{e})={v}")
        slowest = max(slowest, time.perf_counter() - t)
    ok &= slowest < BUDGET[2]
    assert report(2, ok, "; ".join(details) + f"; slowest {slowest:.1f}s < {BUDGET[2]}s")


def test_criterion_3_classification():
    t = time.perf_counter()
    problems, checked, floors = [], 0, 0
    fresh = [n for n in range(1, 6) if n not in _CACHE]
    for n in range(1, 6):
        result = smooth_records(n)
        if result.needs_review:
            problems.append(f"needs review in dim {n}: {result.needs_review}")
        for rec in result.records:
            fam = rec.family
            checked += 1
            diamond = HodgeDiamond(n, tuple(tuple(r) for r in rec.diamond))
            structural = structural_labels(fam)
            if structural != labels_from_diamond(diamond):
                problems.append(f"{fam}: labels differ")
            classify(fam, diamond)
            level = hodge_level(fam)
            odd_quadric = fam.straight and fam.degrees == (2,) and n % 2
            expected = NEG_INF if odd_quadric else n - 2 * summarize(fam).p
            if level != expected or diamond.hodge_level() != expected:
                problems.append(f"{fam}: hodge level {level}")
            if not (fam.straight and set(fam.degrees) == {2}):
                floors += 1
                if level < ceil((n - 4) / 3):
                    problems.append(f"{fam}: below the floor")
                hodge_level_floor(fam)
                if small_index_case(fam) and level != n - 2:
                    problems.append(f"{fam}: small index but level {level}")
    elapsed = time.perf_counter() - t
    elapsed += enumeration_time(range(1, 6)) - sum(_TIMES[n] for n in range(1, 6) if n in fresh)
    ok = not problems and elapsed < BUDGET[3]
    assert report(3, ok, f"{checked} families, {floors} floor checks, problems={problems[:5]}; "
                         f"{elapsed:.1f}s < {BUDGET[3]}s")


def _unit_piece_case(s):
    # k = s + 1 and r = 0: the piece is spanned by one monomial
    return s.k == s.s + 1 and s.r == 0


def test_criterion_4_bounds():
    t = time.perf_counter()
    problems, compared, equal_documented, equal_other = [], 0, [], 0
    for n in range(1, 6):
        for rec in smooth_records(n).records:
            fam, row = rec.family, rec.middle_row
            s = summarize(fam)
            if tuple(row) != tuple(reversed(row)):
                problems.append(f"{fam}: asymmetric row")
            if any(row[q] for q in range(s.p)):
                problems.append(f"{fam}: nonzero below p_X")
            if s.d < 3:
                continue
            compared += 1
            lb, value = lower_bound(s), row[s.p]
            if lb > value:
                problems.append(f"{fam}: bound {lb} > {value}")
            documented = _unit_piece_case(s) or str(fam) in ("P(1^5) : 4", "P(1^4,3) : 6")
            if documented:
                if lb != value:
                    problems.append(f"{fam}: bound {lb} != {value}")
                equal_documented.append(value)
            elif lb == value:
                equal_other += 1
    # charged with the enumeration it reads from
    elapsed = time.perf_counter() - t + enumeration_time(range(1, 6))
    ok = not problems and {30, 52} <= set(equal_documented) and elapsed < BUDGET[4]
    assert report(4, ok, f"{compared} bounds; equality at documented cases {sorted(equal_documented)}"
                         f" (plus {equal_other} further equalities); problems={problems[:5]}; "
                         f"{elapsed:.1f}s < {BUDGET[4]}s")


def test_criterion_5_k3_counts():
    parts, ok = [], True
    for (N, bound), target in K3_TARGETS.items():
        t = time.perf_counter()
        res = enumerate_quasismooth_k3_hypersurfaces(N, bound)
        elapsed = time.perf_counter() - t
        ok &= res.count == target and not res.errors
        parts.append(f"N={N} b={bound}: {res.count} (target {target}, {elapsed:.1f}s)")
        if res.count != target:
            # without a published list the difference is reported against the literal definition
            strict = enumerate_quasismooth_k3_hypersurfaces(N, bound, conventional=False)
            missing, extra = res.symmetric_difference(strict.families)
            print(f"N={N} b={bound} families: {[str(f) for f in res.families]}")
            print(f"only under the literal definition: {[str(f) for f in missing]}")
        if os.environ.get("WCIHODGE_ACCEPTANCE_STRICT"):
            strict = enumerate_quasismooth_k3_hypersurfaces(N, bound, conventional=False, confirm="none")
            parts.append(f"literal definition {strict.count}")
    assert report(5, ok, "; ".join(parts))


def test_criterion_6_stability():
    t = time.perf_counter()
    runs = {}
    for seed in (1729, 20240601):
        for prime in PRIMES[:2]:
            runs[(seed, prime)] = table_values(SearchOptions(seed=seed, prime=prime))
    elapsed = time.perf_counter() - t
    first = next(iter(runs.values()))
    same = all(v == first for v in runs.values())
    ok = same and elapsed < BUDGET[6]
    assert report(6, ok, f"{len(first)} values x {len(runs)} (seed, prime) pairs identical={same}; "
                         f"{elapsed:.1f}s < {BUDGET[6]}s")


def test_criterion_7_closed_forms():
    t = time.perf_counter()
    problems, checked = [], 0
    p5 = None
    for N in range(2, 9):
        for k1 in range(0, N):
            for k2 in range(0, N - k1):
                if k1 + k2 == 0 or N + 1 - 2 * k1 - 3 * k2 <= 0:
                    continue
                cf = quadric_cubic_closed_forms(N, k1, k2)
                if not cf.exact:
                    continue
                fam = Family((1,) * (N + 1), (2,) * k1 + (3,) * k2)
                v = dim_graded_piece(BigradedContext(fam), summarize(fam).p)
                checked += 1
                if v != cf.value:
                    problems.append(f"{fam}: closed form {cf.value}, rank {v}")
                if (N, k1, k2) == (5, 2, 0):
                    p5 = (cf.value, v)
    elapsed = time.perf_counter() - t
    ok = not problems and p5 == (2, 2) and elapsed < BUDGET[7]
    assert report(7, ok, f"{checked} exact cases; X_2,2 in P^5 closed form/rank = {p5}; problems={problems}; "
                         f"{elapsed:.1f}s < {BUDGET[7]}s")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
