"""Weighted complete intersection families and their numerical invariants."""
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Optional

from .arith import gcd_all


class ParseError(ValueError):
    """Malformed family string; ``position`` is the 0-based offset of the problem."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ValidationError(ValueError):
    """A family violating one of the structural rules; ``rule`` names it."""

    def __init__(self, rule, message):
        super().__init__(f"{rule}: {message}")
        self.rule = rule


@dataclass(frozen=True, order=True)
class Family:
    """A family of weighted complete intersections of multidegree ``degrees``
    in ``P(weights)``. Both tuples are stored sorted ascending."""

    weights: tuple
    degrees: tuple

    def __post_init__(self):
        w = tuple(sorted(int(a) for a in self.weights))
        d = tuple(sorted(int(x) for x in self.degrees))
        if len(w) < 2:
            raise ValidationError("ambient-dimension", "need at least two weights (N >= 1)")
        if any(a < 1 for a in w):
            raise ValidationError("positive-weights", f"weights must be >= 1, got {w}")
        if not d:
            raise ValidationError("codimension", "need at least one degree (k >= 1)")
        if any(x < 2 for x in d):
            raise ValidationError("degree-at-least-2", f"degrees must be >= 2, got {d}")
        if len(d) > len(w) - 1:
            raise ValidationError("codimension", f"k={len(d)} exceeds N={len(w) - 1}")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "degrees", d)

    @property
    def N(self):
        return len(self.weights) - 1

    @property
    def k(self):
        return len(self.degrees)

    @property
    def dim(self):
        return self.N - self.k

    @property
    def index(self):
        """``sum(weights) - sum(degrees)``; the Fano index for ``dim >= 2``
        (a conic has index 2 but this value is 1)."""
        return sum(self.weights) - sum(self.degrees)

    @property
    def straight(self):
        """True when the ambient space is an ordinary projective space."""
        return all(a == 1 for a in self.weights)

    def __str__(self):
        return format_family(self)

    @classmethod
    def parse(cls, text):
        return parse_family(text)


# ---------------------------------------------------------------------------
# text form: "P(1^4,3) : 6", "P^4 : 2,2"
# ---------------------------------------------------------------------------


def _runs(values):
    out = []
    for v in values:
        if out and out[-1][0] == v:
            out[-1][1] += 1
        else:
            out.append([v, 1])
    return out


def _format_list(values):
    return ",".join(f"{v}^{c}" if c > 1 else str(v) for v, c in _runs(values))


def format_family(family):
    return f"P({_format_list(family.weights)}) : {','.join(map(str, family.degrees))}"


class _Reader:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            got = self.peek() or "end of input"
            raise ParseError(f"expected {ch!r}, got {got!r}", self.pos)
        self.pos += 1

    def integer(self):
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            got = self.text[start] if start < len(self.text) else "end of input"
            raise ParseError(f"expected an integer, got {got!r}", start)
        return int(self.text[start:self.pos])

    def item_list(self, stop):
        values = []
        while True:
            v = self.integer()
            count = 1
            if self.peek() == "^":
                self.pos += 1
                at = self.pos
                count = self.integer()
                if count < 1:
                    raise ParseError("repetition count must be positive", at)
            values.extend([v] * count)
            if self.peek() != ",":
                break
            self.pos += 1
        if stop and self.peek() not in stop:
            raise ParseError(f"unexpected {self.peek()!r}", self.pos)
        return values


def parse_family(text):
    """Parse ``"P(a_0,...,a_N) : d_1,...,d_k"``; ``"1^4"`` repeats a value and
    ``"P^n"`` abbreviates ``P(1^(n+1))``."""
    r = _Reader(text)
    r.expect("P")
    if r.peek() == "^":
        r.pos += 1
        n = r.integer()
        weights = [1] * (n + 1)
    else:
        r.expect("(")
        weights = r.item_list(")")
        r.expect(")")
    r.expect(":")
    degrees = r.item_list("")
    if r.peek():
        raise ParseError(f"trailing input {r.peek()!r}", r.pos)
    return Family(tuple(weights), tuple(degrees))


# ---------------------------------------------------------------------------
# invariants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InvariantSummary:
    N: int
    k: int
    n: int
    l: int  # number of unit weights minus one (-1 if there are none)
    s: int  # number of degrees strictly below the largest one
    d: int
    index: int
    p: Optional[int]  # ceil(index / d), only for index > 0
    r: Optional[int]  # p * d - index

    def to_dict(self):
        return {
            "N": self.N, "k": self.k, "n": self.n, "l": self.l, "s": self.s,
            "d": self.d, "i_X": self.index, "p_X": self.p, "r": self.r,
        }


def summarize(family):
    d = family.degrees[-1]
    index = family.index
    p = r = None
    if index > 0:
        p = -(-index // d)
        r = p * d - index
    return InvariantSummary(
        N=family.N,
        k=family.k,
        n=family.dim,
        l=family.weights.count(1) - 1,
        s=sum(1 for x in family.degrees if x < d),
        d=d,
        index=index,
        p=p,
        r=r,
    )


class Trichotomy(str, Enum):
    FANO = "Fano"
    CALABI_YAU = "CalabiYau"
    GENERAL_TYPE = "GeneralType"


def canonical_degree(family):
    """Degree ``t`` with canonical sheaf ``O_X(t)``: ``sum(d) - sum(a)``."""
    return -family.index


def trichotomy_label(family):
    i = family.index
    if i > 0:
        return Trichotomy.FANO
    if i == 0:
        return Trichotomy.CALABI_YAU
    return Trichotomy.GENERAL_TYPE


def is_wps_well_formed(weights):
    """Every set of weights obtained by deleting one weight has gcd 1."""
    weights = tuple(weights)
    return all(gcd_all(weights[:i] + weights[i + 1:]) == 1 for i in range(len(weights)))


def is_linear_cone(family):
    return bool(set(family.weights) & set(family.degrees))


def gcd_degree_condition(family):
    """Necessary condition for a smooth well formed member: whenever ``t <= k``
    weights share a factor ``delta > 1``, some ``t`` degrees are divisible by
    ``delta``.

    Checked for every ``delta`` in ``2..max(weights)``: with ``c`` weights
    divisible by ``delta`` we need ``min(c, k)`` degrees divisible by it.
    """
    k = family.k
    for delta in range(2, family.weights[-1] + 1):
        c = sum(1 for a in family.weights if a % delta == 0)
        if c == 0:
            continue
        e = sum(1 for x in family.degrees if x % delta == 0)
        if e < min(c, k):
            return False
    return True


def smooth_fano_necessary(family):
    """Numerical bounds satisfied by every smooth well formed Fano member that is
    not a linear cone: ``a_N <= N``, ``k <= n``, ``l >= k`` and ``i_X <= n``.
    False for families that are not Fano."""
    if family.index <= 0:
        return False
    summary = summarize(family)
    return (
        family.weights[-1] <= family.N
        and family.k <= family.dim
        and summary.l >= family.k
        and family.index <= family.dim
    )


def singular_strata(weights):
    """Index subsets ``I`` with ``gcd(weights[I]) > 1``; on a well formed space
    these are exactly the coordinate strata making up the singular locus."""
    idx = range(len(weights))
    for size in range(1, len(weights) + 1):
        for I in combinations(idx, size):
            if gcd_all(weights[i] for i in I) > 1:
                yield I
