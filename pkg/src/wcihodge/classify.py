"""Hodge level and Hodge-theoretic types of Fano families.

Every label has two routes: a structural one, read off the numerical data of a
smooth family, and a computational one, read off a Hodge diamond. ``classify``
computes both and refuses to return if they disagree.
"""
from dataclasses import dataclass
from typing import Optional

from .family import Family, is_linear_cone, is_wps_well_formed, summarize
from .jacobian import BigradedContext, HodgeDiamond, hodge_diamond, middle_row
from .regularity import Verdict, quasi_smooth_hypersurface, smooth_general_member

NEG_INF = float("-inf")


class ClassificationError(ValueError):
    """Input outside the scope of a classification statement, or disagreement
    between the structural and computational routes."""


class LabelMismatchError(ClassificationError):
    """The structural and computational routes disagree."""


@dataclass(frozen=True)
class TypeLabels:
    hodge_level: float  # an int, or -inf
    q_homologically_minimal: bool
    diagonal: bool
    curve_type: bool
    cy_type: Optional[int]

    def to_dict(self):
        hl = self.hodge_level
        return {
            "hodge_level": "-inf" if hl == NEG_INF else int(hl),
            "q_homologically_minimal": self.q_homologically_minimal,
            "diagonal": self.diagonal,
            "curve_type": self.curve_type,
            "cy_type": self.cy_type,
        }

    def names(self):
        out = []
        if self.q_homologically_minimal:
            out.append("Q-minimal")
        if self.diagonal:
            out.append("diagonal")
        if self.curve_type:
            out.append("curve")
        if self.cy_type is not None:
            out.append("K3" if self.cy_type == 2 else f"{self.cy_type}-CY")
        return out


def _require_smooth_fano(family):
    if family.index <= 0:
        raise ClassificationError(f"{family} is not Fano")
    if is_linear_cone(family):
        raise ClassificationError(f"{family} is a linear cone")
    if smooth_general_member(family) is not Verdict.CERTIFIED:
        raise ClassificationError(f"smoothness of {family} is not certified")


def _quadric_hypersurface(family):
    return family.straight and family.degrees == (2,)


def _quadrics_only(family):
    return family.straight and set(family.degrees) == {2}


def _quadrics_and_cubics(family):
    return family.straight and set(family.degrees) <= {2, 3}


# ---------------------------------------------------------------------------
# structural route
# ---------------------------------------------------------------------------


def hodge_level(family):
    """``-inf`` for an odd-dimensional quadric, ``n - 2 p_X`` otherwise."""
    _require_smooth_fano(family)
    if _quadric_hypersurface(family) and family.dim % 2:
        return NEG_INF
    return family.dim - 2 * summarize(family).p


def is_q_homologically_minimal(family):
    _require_smooth_fano(family)
    return _quadric_hypersurface(family) and family.dim % 2 == 1


def is_diagonal(family):
    """Quadrics, even-dimensional intersections of two quadrics, and every
    smooth Fano curve or surface (``h^{0,n}`` vanishes for ``n <= 2``)."""
    _require_smooth_fano(family)
    n = family.dim
    if n <= 2 or _quadric_hypersurface(family):
        return True
    return family.straight and family.degrees == (2, 2) and n % 2 == 0


def is_curve_type(family):
    _require_smooth_fano(family)
    n = family.dim
    if n % 2 == 0:
        return False
    if n in (1, 3):
        return True
    if _quadrics_only(family) and family.k <= 3:
        return True
    return family.straight and family.degrees == (3,) and n == 5


def cy_type(family):
    """``m = n - 2 i_X / d_k`` when ``k = 1`` or ``d_{k-1} < d_k``, ``d_k``
    divides ``i_X`` and ``m > 0``; otherwise ``None``."""
    _require_smooth_fano(family)
    d = family.degrees
    if family.k > 1 and d[-2] == d[-1]:
        return None
    if family.index % d[-1]:
        return None
    m = family.dim - 2 * family.index // d[-1]
    return m if m > 0 else None


def small_index_case(family):
    """True when ``i_X <= 2``, or ``i_X <= 3`` and ``X`` is not cut out by
    quadrics in ``P^N``, or ``i_X <= 4`` and not by quadrics and cubics."""
    i = family.index
    return i <= 2 or (i <= 3 and not _quadrics_only(family)) or (
        i <= 4 and not _quadrics_and_cubics(family)
    )


def hodge_level_floor(family):
    """``ceil((n - 4) / 3)``, a lower bound for the Hodge level of any family
    not cut out by quadrics; in the small index cases the level is checked to
    be ``n - 2``."""
    _require_smooth_fano(family)
    if _quadrics_only(family):
        raise ClassificationError("the bound excludes complete intersections of quadrics")
    n = family.dim
    if small_index_case(family) and hodge_level(family) != n - 2:
        raise ClassificationError(f"{family}: small index but Hodge level is not n - 2")
    return -(-(n - 4) // 3)


def structural_labels(family):
    return TypeLabels(
        hodge_level=hodge_level(family),
        q_homologically_minimal=is_q_homologically_minimal(family),
        diagonal=is_diagonal(family),
        curve_type=is_curve_type(family),
        cy_type=cy_type(family),
    )


# ---------------------------------------------------------------------------
# computational route
# ---------------------------------------------------------------------------


def cy_type_from_diamond(diamond):
    """``m`` such that the middle row vanishes outside ``|p - q| <= m`` and is
    1 at the edge; ``None`` if there is no positive such ``m``."""
    hl = diamond.hodge_level()
    if hl == NEG_INF or hl < 1:
        return None
    n = diamond.n
    edge = (n - int(hl)) // 2
    return int(hl) if diamond[edge, n - edge] == 1 else None


def labels_from_diamond(diamond):
    hl = diamond.hodge_level()
    n = diamond.n
    return TypeLabels(
        hodge_level=hl,
        q_homologically_minimal=all(v == 0 for v in diamond.primitive_middle()),
        diagonal=hl <= 0,
        curve_type=n % 2 == 1 and hl <= 1,
        cy_type=cy_type_from_diamond(diamond),
    )


def classify(family, diamond=None, **options):
    """Structural labels, cross-checked against a diamond.

    Curves and surfaces skip the rank computation unless a diamond is given.
    ``options`` are passed to ``hodge_diamond``.
    """
    labels = structural_labels(family)
    if diamond is None:
        if family.dim <= 2:
            return labels
        diamond = hodge_diamond(BigradedContext(family), **options)
    computed = labels_from_diamond(diamond)
    if computed != labels:
        raise LabelMismatchError(
            f"{family}: structural labels {labels.to_dict()} differ from "
            f"computed labels {computed.to_dict()}"
        )
    return labels


def cy_type_quasismooth_hypersurface(weights, degree, **options):
    """Calabi-Yau type of a quasi-smooth well formed Fano hypersurface, from
    its diamond only."""
    family = Family(tuple(weights), (degree,))
    if not is_wps_well_formed(family.weights):
        raise ClassificationError(f"{family}: weights are not well formed")
    if is_linear_cone(family):
        raise ClassificationError(f"{family} is a linear cone")
    if family.index <= 0:
        raise ClassificationError(f"{family} is not Fano")
    if quasi_smooth_hypersurface(family.weights, degree) is not Verdict.CERTIFIED:
        raise ClassificationError(f"{family} is not quasi-smooth")
    row = middle_row(BigradedContext(family), **options)
    return cy_type_from_diamond(HodgeDiamond.from_middle_row(row))
