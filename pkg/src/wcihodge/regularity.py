"""Regularity of the general member of a family.

Verdicts are about the *general* member: ``CERTIFIED`` means a dense open set
of members has the property, ``REFUTED`` means no member does (or, for
smoothness, no well formed member does), ``UNDETERMINED`` means the tests here
cannot decide.

Smoothness is certified along two routes, both sound:

* the general member misses ``Sing P`` and every linear system ``|O(d_j)|`` is
  base point free on the smooth locus of ``P`` (Bertini applied ``k`` times); or
* ``k = 1``, the general member is quasi-smooth and misses ``Sing P``.

On a well formed ``P`` the singular locus is the union of the coordinate strata
whose weights share a factor. The open torus orbit of the stratum ``I`` has
dimension ``|I| - 1``; every equation whose degree is representable by the
weights of ``I`` restricts to a base point free system there and cuts the
dimension by one, the others vanish on it identically.
"""
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from .arith import gcd_all, representable
from .family import (
    Family,
    gcd_degree_condition,
    is_linear_cone,
    is_wps_well_formed,
    smooth_fano_necessary,
)


class Verdict(str, Enum):
    CERTIFIED = "certified"
    REFUTED = "refuted"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class RegularityReport:
    wps_well_formed: bool
    linear_cone: bool
    wci_well_formed: Verdict
    quasi_smooth: Verdict
    smooth: Verdict

    def to_dict(self):
        return {
            "wps_well_formed": self.wps_well_formed,
            "linear_cone": self.linear_cone,
            "wci_well_formed": self.wci_well_formed.value,
            "quasi_smooth": self.quasi_smooth.value,
            "smooth": self.smooth.value,
        }


def _weight_classes(weights):
    # subsets of indices only matter through the multiset of their weights
    values = sorted(set(weights))
    return values, [weights.count(v) for v in values]


def _submultisets(values, mults):
    """Yield (weights, size) for every non-empty sub-multiset."""

    def rec(i):
        if i == len(values):
            yield ()
            return
        for tail in rec(i + 1):
            for c in range(mults[i] + 1):
                yield (values[i],) * c + tail

    for sub in rec(0):
        if sub:
            yield sub


@lru_cache(maxsize=8192)
def _quasi_smooth(weights, degree):
    values, mults = _weight_classes(list(weights))
    counts = dict(zip(values, mults))
    for sub in _submultisets(values, mults):
        support = set(sub)
        if representable(degree, support):
            continue
        # variables outside I: everything not used by the sub-multiset
        outside = 0
        for v in values:
            free = counts[v] - sub.count(v)
            if free and representable(degree - v, support):
                outside += free
        if outside < len(sub):
            return False
    return True


def quasi_smooth_hypersurface(weights, degree):
    """Quasi-smoothness of the general hypersurface of the given degree.

    For every non-empty index set ``I`` either some monomial in the ``I``
    variables has degree ``degree``, or there are ``|I|`` distinct variables
    ``x_e`` outside ``I`` each admitting a monomial ``x_I^m x_e`` of that degree.
    """
    weights = tuple(sorted(weights))
    if degree in weights:
        raise ValueError("criterion requires a family that is not a linear cone")
    return Verdict.CERTIFIED if _quasi_smooth(weights, degree) else Verdict.REFUTED


def stratum_dimension(weights, degrees, subset_weights):
    """Generic dimension of ``X`` meeting the open orbit of a coordinate stratum
    (negative when empty)."""
    support = set(subset_weights)
    hits = sum(1 for d in degrees if representable(d, support))
    return len(subset_weights) - 1 - hits


def _singular_submultisets(weights):
    values, mults = _weight_classes(list(weights))
    for sub in _submultisets(values, mults):
        if gcd_all(sub) > 1:
            yield sub


def wci_well_formed(family):
    """``X`` meets ``Sing P`` in codimension at least two."""
    n = family.dim
    for sub in _singular_submultisets(family.weights):
        if stratum_dimension(family.weights, family.degrees, sub) > n - 2:
            return Verdict.REFUTED
    return Verdict.CERTIFIED


def misses_singular_locus(family):
    return all(
        stratum_dimension(family.weights, family.degrees, sub) < 0
        for sub in _singular_submultisets(family.weights)
    )


def systems_free_on_smooth_locus(family):
    """Every ``|O(d_j)|`` is base point free away from ``Sing P``: each orbit
    with coprime weights carries a monomial of every degree."""
    values, mults = _weight_classes(list(family.weights))
    for sub in _submultisets(values, mults):
        if gcd_all(sub) == 1 and len(set(sub)) == len(sub):
            # repeated weights do not change the semigroup
            support = set(sub)
            if not all(representable(d, support) for d in family.degrees):
                return False
    return True


def smooth_general_member(family):
    """Smoothness verdict for the general member (see module docstring)."""
    if not is_wps_well_formed(family.weights):
        return Verdict.UNDETERMINED
    well_formed = wci_well_formed(family) is Verdict.CERTIFIED
    if not well_formed:
        # non well formed members can still be smooth varieties
        return Verdict.UNDETERMINED
    if not gcd_degree_condition(family):
        return Verdict.REFUTED
    if not misses_singular_locus(family):
        # a smooth well formed member lies in the smooth locus of P
        return Verdict.REFUTED
    linear_cone = is_linear_cone(family)
    if family.index > 0 and not linear_cone and not smooth_fano_necessary(family):
        return Verdict.REFUTED
    if family.k == 1 and not linear_cone:
        qs = quasi_smooth_hypersurface(family.weights, family.degrees[0])
        return Verdict.CERTIFIED if qs is Verdict.CERTIFIED else Verdict.REFUTED
    if systems_free_on_smooth_locus(family):
        return Verdict.CERTIFIED
    return Verdict.UNDETERMINED


def quasi_smooth_general_member(family, smooth=None):
    """Quasi-smoothness verdict for any codimension.

    Exact for hypersurfaces; in higher codimension only what follows from
    smoothness (smooth well formed members are quasi-smooth, and in an ordinary
    projective space the two notions agree).
    """
    if family.k == 1 and not is_linear_cone(family):
        return quasi_smooth_hypersurface(family.weights, family.degrees[0])
    smooth = smooth if smooth is not None else smooth_general_member(family)
    if smooth is Verdict.CERTIFIED:
        return Verdict.CERTIFIED
    if family.straight and smooth is Verdict.REFUTED:
        return Verdict.REFUTED
    return Verdict.UNDETERMINED


def regularity_report(family):
    wps = is_wps_well_formed(family.weights)
    wci = wci_well_formed(family) if wps else Verdict.UNDETERMINED
    smooth = smooth_general_member(family)
    return RegularityReport(
        wps_well_formed=wps,
        linear_cone=is_linear_cone(family),
        wci_well_formed=wci,
        quasi_smooth=quasi_smooth_general_member(family, smooth),
        smooth=smooth,
    )


__all__ = [
    "Family",
    "RegularityReport",
    "Verdict",
    "misses_singular_locus",
    "quasi_smooth_general_member",
    "quasi_smooth_hypersurface",
    "regularity_report",
    "smooth_general_member",
    "stratum_dimension",
    "systems_free_on_smooth_locus",
    "wci_well_formed",
]
