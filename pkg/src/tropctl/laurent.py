"""Laurent series in one variable over Q, their domination order, and the
phylogenetic tree of an ascending family.

The order compares p and q by the lowest-exponent term of p - q: p exceeds q
when that term belongs to p and is absent from q.  This is a partial order
(two series whose difference leads at an exponent where both have terms are
incomparable) and it is not translation invariant, but subtracting the same
series from both sides of a comparable pair preserves the comparison.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

from .errors import ValidationError
from .linalg import parse_rational


class LaurentSeries:
    """Finite sum of c * t^e with rational c; terms sorted by exponent."""

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        acc: dict[int, Fraction] = {}
        for e, c in terms:
            if not isinstance(e, int) or isinstance(e, bool):
                raise ValidationError("bad-series", f"exponent {e!r} is not an integer")
            c = Fraction(c)
            acc[e] = acc.get(e, Fraction(0)) + c
        object.__setattr__(
            self, "terms", tuple(sorted((e, c) for e, c in acc.items() if c != 0))
        )

    def __setattr__(self, *a):
        raise AttributeError("LaurentSeries is immutable")

    @classmethod
    def zero(cls) -> "LaurentSeries":
        return cls(())

    def is_zero(self) -> bool:
        return not self.terms

    def order(self):
        """Lowest exponent with a nonzero coefficient; +inf for the zero series."""
        return self.terms[0][0] if self.terms else math.inf

    def coeff(self, e: int) -> Fraction:
        for ee, c in self.terms:
            if ee == e:
                return c
            if ee > e:
                break
        return Fraction(0)

    def leading(self):
        return self.terms[0] if self.terms else None

    def minus_term(self, e: int, c) -> "LaurentSeries":
        return LaurentSeries(self.terms + ((e, -Fraction(c)),))

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return LaurentSeries(self.terms + tuple((e, -c) for e, c in other.terms))

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries(tuple((e, -c) for e, c in self.terms))

    def __eq__(self, other):
        return isinstance(other, LaurentSeries) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        if not self.terms:
            return "LaurentSeries(0)"
        body = " + ".join(f"({c})t^{e}" for e, c in self.terms)
        return f"LaurentSeries({body})"

    def evaluate(self, t0: Fraction) -> Fraction:
        t0 = Fraction(t0)
        if t0 <= 0:
            raise ValidationError("bad-evaluation-point", "series are evaluated at t > 0")
        return sum((c * t0**e for e, c in self.terms), Fraction(0))


# -- order ----------------------------------------------------------------------


def laurent_greater(p: LaurentSeries, q: LaurentSeries) -> bool:
    """p dominates q: the lowest term of p - q is p's alone."""
    diff = p - q
    if diff.is_zero():
        return False
    m = diff.order()
    return q.coeff(m) == 0


def laurent_less(p: LaurentSeries, q: LaurentSeries) -> bool:
    return laurent_greater(q, p)


def laurent_comparable(p: LaurentSeries, q: LaurentSeries) -> bool:
    diff = p - q
    if diff.is_zero():
        return True
    m = diff.order()
    return p.coeff(m) == 0 or q.coeff(m) == 0


def laurent_cmp(p: LaurentSeries, q: LaurentSeries) -> int:
    """-1, 0, or 1; raises when the pair is incomparable."""
    diff = p - q
    if diff.is_zero():
        return 0
    m = diff.order()
    if q.coeff(m) == 0:
        return 1
    if p.coeff(m) == 0:
        return -1
    raise ValidationError(
        "incomparable-series",
        "two series are incomparable in the domination order",
    )


def is_strictly_ascending(series: list[LaurentSeries]) -> bool:
    """Adjacent domination; by transitivity the whole family is a chain."""
    return all(laurent_less(a, b) for a, b in zip(series, series[1:]))


# -- rebasing -------------------------------------------------------------------


def rebase(items: list[tuple], base_label) -> list[tuple]:
    """Subtract the base point's series from every member and re-sort.

    items are (label, series) pairs; the result is ascending with the base
    label's (now zero) series first.  Raises when the shifted family fails to
    be totally ordered or contains repeats.
    """
    base = None
    for lab, s in items:
        if lab == base_label:
            base = s
    if base is None:
        raise ValidationError("unknown-label", f"no series labeled {base_label!r}")
    shifted = [(lab, s - base) for lab, s in items]
    import functools

    shifted.sort(key=functools.cmp_to_key(lambda a, b: laurent_cmp(a[1], b[1])))
    for (_, a), (_, b) in zip(shifted, shifted[1:]):
        if not laurent_less(a, b):
            raise ValidationError(
                "not-ascending", "rebased family is not strictly ascending"
            )
    return shifted


# -- phylogenetic tree ------------------------------------------------------------


class PhyloLeaf(NamedTuple):
    label: object


class PhyloNode(NamedTuple):
    first: object  # the subtree attached at this node (larger series)
    second: object  # the rest of the comb (smaller series, closer to the end)
    depth: object  # order of the first subtree's series when the node formed


def phylo_tree(items: list[tuple]):
    """Tree of an ascending (label, series) family.

    Maximal runs of equal order split the family; the runs become a comb
    with the largest series nearest the root, and a run with more than one
    member recurses after its common leading term is removed (equal orders
    inside an ascending chain force equal leading coefficients).
    """
    if not items:
        raise ValidationError("empty-family", "the series family is empty")
    series = [s for _lab, s in items]
    if not is_strictly_ascending(series):
        raise ValidationError(
            "not-ascending", "the series family must be strictly ascending"
        )
    return _phylo(list(items))


def _phylo(items):
    if len(items) == 1:
        return PhyloLeaf(items[0][0])
    groups = []
    for lab, s in items:
        if groups and groups[-1][0][1].order() == s.order():
            groups[-1].append((lab, s))
        else:
            groups.append([(lab, s)])
    if len(groups) == 1:
        e, c = items[0][1].leading()
        stripped = [(lab, s.minus_term(e, c)) for lab, s in items]
        return _phylo(stripped)
    tree = _phylo(groups[0])
    for grp in groups[1:]:
        tree = PhyloNode(first=_phylo(grp), second=tree, depth=grp[0][1].order())
    return tree


def leaf_labels(tree) -> frozenset:
    if isinstance(tree, PhyloLeaf):
        return frozenset([tree.label])
    return leaf_labels(tree.first) | leaf_labels(tree.second)


def clusters(tree) -> set[frozenset]:
    """Leaf-label sets of all internal nodes."""
    out = set()
    todo = [tree]
    while todo:
        t = todo.pop()
        if isinstance(t, PhyloNode):
            out.add(leaf_labels(t))
            todo.extend([t.first, t.second])
    return out


# -- file format ------------------------------------------------------------------


def parse_series(data) -> LaurentSeries:
    if not isinstance(data, list):
        raise ValidationError("bad-series", "a series must be a list of [exp, coeff] pairs")
    terms = []
    for item in data:
        if not isinstance(item, list) or len(item) != 2:
            raise ValidationError("bad-series", f"bad series term {item!r}")
        e, c = item
        if not isinstance(e, int) or isinstance(e, bool):
            raise ValidationError("bad-series", f"exponent {e!r} is not an integer")
        try:
            terms.append((e, parse_rational(c) if isinstance(c, str) else Fraction(c)))
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            raise ValidationError("bad-series", f"bad coefficient {c!r}") from exc
    return LaurentSeries(terms)


def parse_laurent_doc(doc: dict) -> dict:
    """{vertex id: [series, ...]} from the on-disk structure."""
    if not isinstance(doc, dict) or not isinstance(doc.get("vertices"), dict):
        raise ValidationError("schema", "laurent document needs a vertices object")
    out = {}
    for vid, body in doc["vertices"].items():
        if not isinstance(body, dict) or not isinstance(body.get("series"), list):
            raise ValidationError(
                "schema", f"vertex {vid} needs a series list", vertex=vid
            )
        out[vid] = [parse_series(s) for s in body["series"]]
    return out


def serialize_series(s: LaurentSeries) -> list:
    from .linalg import rational_str

    return [[e, rational_str(c)] for e, c in s.terms]
