"""Enumeration drivers.

``enumerate_smooth_fano`` lists every smooth well formed Fano family of a given
dimension that is not a linear cone; ``enumerate_quasismooth_k3_hypersurfaces``
counts quasi-smooth well formed Fano hypersurfaces of K3 type under a weight
bound.

K3 scan conventions. Literally, a candidate ``X_d`` in ``P(a_0..a_N)`` (``N``
odd, ``n = N - 1``, ``q0 = (n - 2) / 2``) qualifies when it is quasi-smooth,
well formed, not a linear cone, Fano, and ``dim R_{q,-i_X}`` is 0 for
``1 <= q < q0`` and 1 for ``q = q0``. That set is large and keeps growing with
the weight bound. The reference counts are reproduced by two extra conditions,
on by default (``conventional=True``):

* ``i_X = q0 * d``: the K3 class is the unit of the Jacobian ring, i.e. the
  hypersurface is of K3 type for the numerical reason familiar from smooth
  families (``d`` divides ``i_X`` with ``n - 2 i_X / d = 2``);
* ``d >= 2 a_N``: the top variable is not forced to appear only linearly.
  When ``d < 2 a_N`` the equation is ``x_N g + h`` with ``g, h`` free of
  ``x_N``, and projecting from the vertex shows ``X`` is birational to a
  weighted blow-up of ``P(a_0..a_{N-1})`` along ``{g = h = 0}``.

Checkpoint layout (``checkpoint_dir``)::

    cursor.json           parameters and the list of finished shards
    shard-A0-A1.json      sorted candidates (weights..., degree) of the shard
"""
import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Optional

from . import __version__, kernels
from .arith import gcd_all
from .classify import ClassificationError, classify, labels_from_diamond
from .family import Family, is_wps_well_formed, smooth_fano_necessary, summarize, trichotomy_label
from .jacobian import (
    DEFAULT_RANK_LIMIT,
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    PRIMES,
    BigradedContext,
    CapacityError,
    HodgeDiamond,
    dim_graded_piece,
    hypersurface_piece_dimension,
    middle_row,
)
from .regularity import (
    Verdict,
    quasi_smooth_hypersurface,
    regularity_report,
    smooth_general_member,
    wci_well_formed,
)


@dataclass(frozen=True)
class SearchOptions:
    seed: int = DEFAULT_SEED
    prime: int = PRIMES[0]
    trials: int = DEFAULT_TRIALS
    jobs: int = 1
    hodge: bool = True
    rank_limit: int = DEFAULT_RANK_LIMIT
    backend: Optional[str] = None

    def jacobian_kwargs(self):
        return {
            "seed": self.seed,
            "prime": self.prime,
            "trials": self.trials,
            "backend": self.backend,
        }

    def provenance(self):
        return {"seed": self.seed, "prime": self.prime, "trials": self.trials, "version": __version__}


# ---------------------------------------------------------------------------
# records
# ---------------------------------------------------------------------------


def sort_key(family):
    return (family.dim, family.N, family.weights, family.degrees)


@dataclass
class FamilyRecord:
    family: Family
    invariants: dict
    regularity: dict
    trichotomy: str
    middle_row: Optional[list] = None
    middle_sources: Optional[list] = None
    diamond: Optional[list] = None
    labels: Optional[dict] = None
    pieces: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)
    error: Optional[str] = None

    @property
    def key(self):
        return str(self.family)

    def to_dict(self):
        return {
            "family": str(self.family),
            "invariants": self.invariants,
            "regularity": self.regularity,
            "trichotomy": self.trichotomy,
            "middle_row": self.middle_row,
            "middle_sources": self.middle_sources,
            "diamond": self.diamond,
            "labels": self.labels,
            "pieces": {str(q): v for q, v in sorted(self.pieces.items())},
            "provenance": self.provenance,
            "error": self.error,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


CSV_COLUMNS = ["family", "n", "i_X", "p_X", "hodge_level", "labels", "middle_row"]


def records_to_csv(records):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        labels = rec.labels or {}
        names = []
        if labels.get("q_homologically_minimal"):
            names.append("Q-minimal")
        if labels.get("diagonal"):
            names.append("diagonal")
        if labels.get("curve_type"):
            names.append("curve")
        if labels.get("cy_type"):
            m = labels["cy_type"]
            names.append("K3" if m == 2 else f"{m}-CY")
        writer.writerow([
            str(rec.family),
            rec.invariants["n"],
            rec.invariants["i_X"],
            "" if rec.invariants["p_X"] is None else rec.invariants["p_X"],
            labels.get("hodge_level", ""),
            ";".join(names),
            "" if rec.middle_row is None else " ".join(map(str, rec.middle_row)),
        ])
    return buf.getvalue()


def make_record(family, options=SearchOptions()):
    """Invariants, regularity and, for Fano families, Hodge data and labels.

    Labels come from ``classify`` (structural route cross-checked against the
    diamond) for certified smooth families and from the diamond alone for
    quasi-smooth hypersurfaces.
    """
    report = regularity_report(family)
    rec = FamilyRecord(
        family=family,
        invariants=summarize(family).to_dict(),
        regularity=report.to_dict(),
        trichotomy=trichotomy_label(family).value,
        provenance=options.provenance(),
    )
    smooth = report.smooth is Verdict.CERTIFIED
    qs = smooth or report.quasi_smooth is Verdict.CERTIFIED
    if not (options.hodge and family.index > 0 and qs and not report.linear_cone):
        return rec
    try:
        row = middle_row(BigradedContext(family), rank_limit=options.rank_limit, **options.jacobian_kwargs())
    except CapacityError as exc:
        rec.error = f"capacity: {exc}"
        return rec
    diamond = HodgeDiamond.from_middle_row(row)
    rec.middle_row = list(row.values)
    rec.middle_sources = list(row.sources)
    rec.diamond = diamond.to_rows()
    rec.pieces = {q: v for q, v in enumerate(row.values)}
    if smooth:
        rec.labels = classify(family, diamond).to_dict()
    else:
        rec.labels = labels_from_diamond(diamond).to_dict()
    return rec


# ---------------------------------------------------------------------------
# smooth Fano enumeration
# ---------------------------------------------------------------------------


def _partitions(total, parts, low):
    """Non-decreasing tuples of ``parts`` integers ``>= low`` summing to ``total``."""
    if parts == 1:
        if total >= low:
            yield (total,)
        return
    for x in range(low, total // parts + 1):
        for rest in _partitions(total - x, parts - 1, x):
            yield (x,) + rest


def _divisibility_requirements(weights, k):
    # (delta, t): at least t of the degrees must be divisible by delta
    reqs = []
    for delta in range(2, max(weights) + 1):
        c = sum(1 for a in weights if a % delta == 0)
        if c:
            reqs.append((delta, min(c, k)))
    return reqs


def smooth_fano_candidates(n):
    """Families passing the cheap necessary conditions: weights ``a_N <= N``
    with at least ``k + 1`` of them equal to 1, ``0 < i_X <= n``, well formed
    weights, no linear cone, the gcd condition and the numerical bounds."""
    if n < 1:
        raise ValueError("dimension must be positive")
    for k in range(1, n + 1):
        N = n + k
        for extra in range(0, N - k + 1):
            for tail in combinations_with_replacement(range(2, N + 1), extra):
                weights = (1,) * (N + 1 - extra) + tail
                if not is_wps_well_formed(weights):
                    continue
                reqs = _divisibility_requirements(weights, k)
                wset = set(weights)
                S = sum(weights)
                for total in range(max(2 * k, S - n), S):
                    for degrees in _partitions(total, k, 2):
                        if wset.intersection(degrees):
                            continue
                        if any(sum(1 for d in degrees if d % delta == 0) < t for delta, t in reqs):
                            continue
                        family = Family(weights, degrees)
                        if smooth_fano_necessary(family):
                            yield family


@dataclass
class EnumerationResult:
    records: list
    needs_review: list  # families whose smoothness could not be decided

    @property
    def families(self):
        return [r.family for r in self.records]


def _record_worker(args):
    family, options = args
    return make_record(family, options)


def _map(fn, items, jobs):
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=1))


def enumerate_smooth_fano(n, options=SearchOptions()):
    """All smooth well formed Fano families of dimension ``n`` that are not
    linear cones, sorted by ``(n, N, weights, degrees)``."""
    certified, review = set(), set()
    for family in smooth_fano_candidates(n):
        verdict = smooth_general_member(family)
        if verdict is Verdict.CERTIFIED:
            certified.add(family)
        elif verdict is Verdict.UNDETERMINED:
            review.add(family)
    families = sorted(certified, key=sort_key)
    records = _map(_record_worker, [(f, options) for f in families], options.jobs)
    return EnumerationResult(records, sorted(review, key=sort_key))


# ---------------------------------------------------------------------------
# K3 scan
# ---------------------------------------------------------------------------


@dataclass
class K3ScanResult:
    N: int
    weight_bound: int
    conventional: bool
    families: list
    rejected: list = field(default_factory=list)  # (family, reason) failing confirmation
    errors: list = field(default_factory=list)  # (family, message) left undecided

    @property
    def count(self):
        return len(self.families)

    def symmetric_difference(self, reference):
        """``(missing, extra)``: reference families not found, and found
        families absent from the reference."""
        ours = set(self.families)
        ref = set(reference)
        return sorted(ref - ours, key=sort_key), sorted(ours - ref, key=sort_key)


def _k3_shard(args):
    prefix, nvars, bound, q0, conventional, backend = args
    rows = kernels.k3_sieve(prefix, nvars, bound, q0, conventional, backend)
    return [tuple(int(v) for v in row) for row in rows]


class _Checkpoint:
    def __init__(self, root, params):
        self.root = root
        self.params = params
        os.makedirs(root, exist_ok=True)
        self.cursor_path = os.path.join(root, "cursor.json")
        self.done = []
        if os.path.exists(self.cursor_path):
            with open(self.cursor_path) as fh:
                state = json.load(fh)
            if state["params"] != params:
                raise ValueError(f"checkpoint in {root} was written for {state['params']}")
            self.done = [tuple(s) for s in state["done"]]

    def _shard_path(self, shard):
        return os.path.join(self.root, "shard-" + "-".join(map(str, shard)) + ".json")

    def load(self, shard):
        if shard not in self.done or not os.path.exists(self._shard_path(shard)):
            return None
        with open(self._shard_path(shard)) as fh:
            return [tuple(r) for r in json.load(fh)]

    def _write(self, path, obj):
        tmp = path + ".tmp"
        with open(tmp, "w") as fh:
            json.dump(obj, fh, separators=(",", ":"))
        os.replace(tmp, path)

    def store(self, shard, rows):
        self._write(self._shard_path(shard), sorted(rows))
        self.done.append(shard)
        self._write(self.cursor_path, {"params": self.params, "done": sorted(self.done)})


def _confirm_k3(family, q0, mode, options):
    """None if ``family`` qualifies, else a rejection reason. Raises
    ``CapacityError`` when a rank computation is too large."""
    weights, d = family.weights, family.degrees[0]
    if quasi_smooth_hypersurface(weights, d) is not Verdict.CERTIFIED:
        return "not quasi-smooth"
    if wci_well_formed(family) is not Verdict.CERTIFIED:
        return "not well formed"
    if mode == "none":
        return None
    ctx = BigradedContext(family)
    for q in range(1, q0 + 1):
        if mode == "rank":
            v = dim_graded_piece(ctx, q, **options.jacobian_kwargs())
        else:
            v = hypersurface_piece_dimension(weights, d, q)
        if v != (1 if q == q0 else 0):
            return f"dim R_({q},{-family.index}) = {v}"
    return None


def enumerate_quasismooth_k3_hypersurfaces(N, weight_bound, options=SearchOptions(), conventional=True,
                                           confirm=None, checkpoint_dir=None, progress=None):
    """Quasi-smooth well formed Fano hypersurfaces of K3 type in
    ``P(a_0..a_N)`` with all ``a_i <= weight_bound``.

    The weight space is sharded by ``(a_0, a_1)``; shards run on
    ``options.jobs`` processes and are merged in key order. Survivors of the
    sieve are confirmed with ``confirm`` = ``"rank"`` (Macaulay ranks,
    default for the conventional scan), ``"series"`` (Jacobian series, default
    otherwise) or ``"none"``.
    """
    if N < 5 or N % 2 == 0:
        raise ValueError("N must be odd and at least 5")
    if weight_bound < 1:
        raise ValueError("weight_bound must be positive")
    if confirm is None:
        confirm = "rank" if conventional else "series"
    if confirm not in ("rank", "series", "none"):
        raise ValueError(f"unknown confirmation mode {confirm!r}")
    nvars = N + 1
    q0 = (N - 3) // 2
    shards = [(a0, a1) for a0 in range(1, weight_bound + 1) for a1 in range(a0, weight_bound + 1)]
    ckpt = None
    if checkpoint_dir:
        ckpt = _Checkpoint(checkpoint_dir, {
            "N": N, "weight_bound": weight_bound, "conventional": conventional, "version": __version__,
        })
    results = {}
    todo = []
    for shard in shards:
        rows = ckpt.load(shard) if ckpt else None
        if rows is None:
            todo.append(shard)
        else:
            results[shard] = rows
    tasks = [(s, nvars, weight_bound, q0, conventional, options.backend) for s in todo]
    if options.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=options.jobs) as pool:
            for shard, rows in zip(todo, pool.map(_k3_shard, tasks, chunksize=4)):
                results[shard] = rows
                if ckpt:
                    ckpt.store(shard, rows)
                if progress:
                    progress(shard)
    else:
        for shard, task in zip(todo, tasks):
            rows = _k3_shard(task)
            results[shard] = rows
            if ckpt:
                ckpt.store(shard, rows)
            if progress:
                progress(shard)
    candidates = []
    for shard in shards:
        candidates.extend(results[shard])
    out = K3ScanResult(N, weight_bound, conventional, [])
    for row in sorted(candidates):
        family = Family(row[:-1], row[-1:])
        try:
            reason = _confirm_k3(family, q0, confirm, options)
        except CapacityError as exc:
            out.errors.append((family, str(exc)))
            continue
        if reason is None:
            out.families.append(family)
        else:
            out.rejected.append((family, reason))
    out.families.sort(key=sort_key)
    return out


# ---------------------------------------------------------------------------
# reference data
# ---------------------------------------------------------------------------

# smooth del Pezzo surfaces and Fano threefolds with their h^{1,1} and h^{1,2}
SURFACES = {
    "P(1^2,2,3) : 6": 9,
    "P(1^3,2) : 4": 8,
    "P(1^4) : 3": 7,
    "P(1^5) : 2,2": 6,
    "P(1^4) : 2": 2,
}
THREEFOLDS = {
    "P(1^4,3) : 6": 52,
    "P(1^5) : 4": 30,
    "P(1^6) : 2,3": 20,
    "P(1^7) : 2,2,2": 14,
    "P(1^3,2,3) : 6": 21,
    "P(1^4,2) : 4": 10,
    "P(1^5) : 3": 5,
    "P(1^6) : 2,2": 2,
    "P(1^5) : 2": 0,
}
CURVES = {"P(1^3) : 2": 0}
# families singled out by the classification
K3_TYPE = ["P(1^6) : 3"]
CY3_TYPE = ["P(1^6,2) : 4", "P(1^8) : 2,3", "P(1^9) : 3"]
QUASI_SMOOTH_EXAMPLES = {
    # family: (q, dim R_{q,-i_X})
    "P(1^4,2^2) : 4": (1, 1),
    "P(1,4,5,6,8^4) : 16": (2, 1),
    "P(1^3,3^3) : 6": (1, 1),
}
K3_COUNTS = {(5, 50): 124, (7, 30): 122, (9, 20): 105}


def gcd_is_one(weights):
    return gcd_all(weights) == 1


__all__ = [
    "ClassificationError",
    "EnumerationResult",
    "FamilyRecord",
    "K3ScanResult",
    "SearchOptions",
    "enumerate_quasismooth_k3_hypersurfaces",
    "enumerate_smooth_fano",
    "make_record",
    "records_to_csv",
    "smooth_fano_candidates",
]
