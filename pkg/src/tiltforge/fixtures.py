"""Built-in fixture inputs used by the demos and the test suite."""

from __future__ import annotations

from typing import Dict, Tuple

from .presentation import Arrow, GradedPresentation, Quiver, Relation
from .skewgroup import CyclicGroupData, arrow_id


def cyclic_5_122() -> Tuple[CyclicGroupData, Dict[str, int], Tuple[str, ...]]:
    """1/5(1,2,2) with the grading that puts five arrows in degree 0.

    x1 is degree 0 only at vertex 2; x2 and x3 are degree 0 at vertices 1
    and 2. Every full cycle x1 x2 x3 then has degree 2, and the degree-0
    part is spanned by the trivial paths and the five degree-0 arrows.
    """
    g = CyclicGroupData(5, (1, 2, 2))
    grading: Dict[str, int] = {}
    for i in range(5):
        grading[arrow_id(1, i)] = 0 if i == 2 else 1
        for j in (2, 3):
            grading[arrow_id(j, i)] = 0 if i in (1, 2) else 1
    return g, grading, ("0",)


def cyclic_4_1133() -> Tuple[CyclicGroupData, Dict[str, int], Tuple[str, ...]]:
    """1/4(1,1,3,3) graded by vertex parity: arrows out of odd vertices in degree 1."""
    g = CyclicGroupData(4, (1, 1, 3, 3))
    grading: Dict[str, int] = {}
    for i in range(4):
        for j in range(1, 5):
            grading[arrow_id(j, i)] = i % 2
    return g, grading, ("0",)


def kronecker_presentation() -> GradedPresentation:
    """Two vertices, two parallel arrows in degree 1, no relations."""
    quiver = Quiver(
        ("0", "1"),
        (Arrow("x1@0", "0", "1", "x1"), Arrow("x2@0", "0", "1", "x2")),
    )
    return GradedPresentation(quiver=quiver, degree={"x1@0": 1, "x2@0": 1}, relations=())


def chain3_presentation(zero_relation: bool) -> GradedPresentation:
    """0 -> 1 -> 2, optionally with the composite arrow set to zero."""
    from fractions import Fraction

    quiver = Quiver(
        ("0", "1", "2"),
        (Arrow("a", "0", "1", "a"), Arrow("b", "1", "2", "b")),
    )
    relations = ()
    if zero_relation:
        relations = (Relation(((Fraction(1), quiver.path(["a", "b"])),)),)
    return GradedPresentation(quiver=quiver, degree={"a": 1, "b": 1}, relations=relations)
