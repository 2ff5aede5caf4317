"""Cyclic-group McKay quivers, gradings, and folded (Beilinson) quivers.

The group 1/r(a_1,...,a_d) acts diagonally on d variables; its McKay quiver
has vertex set Z/r with an arrow x_j : i -> i+a_j for every residue i and
variable j, and commutator relations at every vertex. A grading assigns
each arrow its own nonnegative degree; the folding construction turns a
graded McKay presentation into the quiver of the corresponding
lower-triangular matrix algebra of graded pieces.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Mapping, Sequence, Set, Tuple

from .presentation import (
    Arrow,
    GradedPresentation,
    Quiver,
    Relation,
    ValidationReport,
)


class GradingError(ValueError):
    pass


@dataclass(frozen=True)
class CyclicGroupData:
    """Order r and diagonal weights a_1..a_d, stored reduced mod r."""

    r: int
    weights: Tuple[int, ...]

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("group order must be positive")
        if len(self.weights) < 1:
            raise ValueError("need at least one weight")
        object.__setattr__(self, "weights", tuple(w % self.r for w in self.weights))

    @property
    def d(self) -> int:
        return len(self.weights)


def arrow_id(j: int, vertex: int) -> str:
    """Arrow id for variable j (1-based) at a residue vertex."""
    return f"x{j}@{vertex}"


def mckay_quiver(g: CyclicGroupData, grading: Mapping[str, int] | None = None) -> GradedPresentation:
    """McKay presentation: r vertices, d*r arrows, commutator relations.

    Without a grading every arrow gets degree 0; a grading maps arrow ids
    (``x<j>@<vertex>``) to nonnegative integers, missing ids default to 0.
    """
    r, d = g.r, g.d
    vertices = tuple(str(i) for i in range(r))
    arrows = []
    for i in range(r):
        for j in range(1, d + 1):
            arrows.append(Arrow(arrow_id(j, i), str(i), str((i + g.weights[j - 1]) % r), f"x{j}"))
    quiver = Quiver(vertices, tuple(arrows))
    relations: List[Relation] = []
    one = Fraction(1)
    for i in range(r):
        for j in range(1, d + 1):
            for k in range(j + 1, d + 1):
                first = quiver.path([arrow_id(j, i), arrow_id(k, (i + g.weights[j - 1]) % r)])
                second = quiver.path([arrow_id(k, i), arrow_id(j, (i + g.weights[k - 1]) % r)])
                relations.append(Relation(((one, first), (-one, second))))
    degree = {a.id: 0 for a in arrows}
    if grading:
        for aid, deg in grading.items():
            quiver.arrow(aid)
            if deg < 0:
                raise GradingError(f"negative degree for {aid}")
            degree[aid] = int(deg)
    return GradedPresentation(quiver=quiver, degree=degree, relations=tuple(relations))


def check_grading(g: CyclicGroupData, pres: GradedPresentation) -> ValidationReport:
    """Commutator homogeneity and positivity of every variable cycle."""
    problems: List[str] = []
    r, d = g.r, g.d

    def deg(j: int, i: int) -> int:
        return pres.arrow_degree(arrow_id(j, i % r))

    for i in range(r):
        for j in range(1, d + 1):
            for k in range(j + 1, d + 1):
                lhs = deg(j, i) + deg(k, i + g.weights[j - 1])
                rhs = deg(k, i) + deg(j, i + g.weights[k - 1])
                if lhs != rhs:
                    problems.append(
                        f"inhomogeneous commutator (x{j}, x{k}) at vertex {i}: {lhs} != {rhs}"
                    )
    for j in range(1, d + 1):
        step = g.weights[j - 1]
        cycle_len = r // gcd(step, r) if step else 1
        for start in range(r):
            total = sum(deg(j, start + t * step) for t in range(cycle_len))
            if total <= 0:
                problems.append(f"x{j}-cycle through vertex {start} has degree {total} (needs > 0)")
    return ValidationReport(ok=not problems, problems=problems)


def gorenstein_parameter(pres: GradedPresentation, g: CyclicGroupData) -> int:
    """Degree of the closed cycle x_1 x_2 ... x_d, checked from every vertex."""
    report = check_grading(g, pres)
    if not report.ok:
        raise GradingError("; ".join(report.problems))
    if sum(g.weights) % g.r != 0:
        raise GradingError("x_1..x_d is not a closed cycle (weights do not sum to 0 mod r)")
    values = set()
    for start in range(g.r):
        v = start
        total = 0
        for j in range(1, g.d + 1):
            total += pres.arrow_degree(arrow_id(j, v))
            v = (v + g.weights[j - 1]) % g.r
        values.add(total)
    if len(values) != 1:
        raise GradingError(f"grading not Gorenstein-consistent: cycle degrees {sorted(values)}")
    ell = values.pop()
    if ell <= 0:
        raise GradingError(f"cycle degree {ell} is not positive")
    return ell


def sl_check(g: CyclicGroupData) -> bool:
    """Determinant-one criterion: the weights sum to 0 mod r."""
    return sum(g.weights) % g.r == 0


def isolated_check(g: CyclicGroupData) -> bool:
    """No nontrivial group element fixes a nonzero vector: gcd(a_j, r) = 1 for all j."""
    return all(gcd(w, g.r) == 1 for w in g.weights)


def folded_vertex(i: int, p: int) -> str:
    return f"{i}^{p}"


def induced_idempotent(e_vertices: Iterable[int | str], ell: int, r: int) -> Set[str]:
    """Folded vertices (v, p) for every chosen residue v and 0 <= p < ell."""
    out: Set[str] = set()
    for v in e_vertices:
        iv = int(v)
        if not 0 <= iv < r:
            raise ValueError(f"vertex {v} out of range 0..{r - 1}")
        for p in range(ell):
            out.add(folded_vertex(iv, p))
    return out


def folded_quiver(
    pres: GradedPresentation, ell: int, g: CyclicGroupData | None = None
) -> GradedPresentation:
    """The ell-folded presentation.

    Vertices are (v, p) with 0 <= p < ell; an arrow of degree delta at v
    contributes a copy (v,p) -> (target, p+delta) whenever p+delta <= ell-1.
    A homogeneous relation folds at every start level where its endpoint
    level still exists (all its paths then exist too, degrees being
    nonnegative), and the result is regraded so every arrow has degree 1
    (path-length grading). When group data is given, the cycle degree is
    verified to equal ell first.
    """
    if g is not None and gorenstein_parameter(pres, g) != ell:
        raise GradingError(f"cycle degree is not {ell}")
    vertices = tuple(
        folded_vertex(v, p) for v in pres.quiver.vertices for p in range(ell)
    )
    arrows: List[Arrow] = []
    for a in sorted(pres.quiver.arrows, key=lambda a: a.id):
        delta = pres.arrow_degree(a.id)
        for p in range(ell):
            if p + delta <= ell - 1:
                arrows.append(
                    Arrow(
                        f"{a.id}^{p}",
                        f"{a.source}^{p}",
                        f"{a.target}^{p + delta}",
                        a.label,
                    )
                )
    quiver = Quiver(vertices, tuple(arrows))
    relations: List[Relation] = []
    for rel in pres.relations:
        total = sum(pres.arrow_degree(a) for a in rel.terms[0][1].arrows)
        for p in range(ell):
            if p + total > ell - 1:
                continue
            terms = []
            for coeff, path in rel.terms:
                level = p
                folded_ids = []
                for aid in path.arrows:
                    folded_ids.append(f"{aid}^{level}")
                    level += pres.arrow_degree(aid)
                terms.append((coeff, quiver.path(folded_ids)))
            relations.append(Relation(tuple(terms)))
    degree = {a.id: 1 for a in arrows}
    return GradedPresentation(quiver=quiver, degree=degree, relations=tuple(relations))


def degree_zero_part(pres: GradedPresentation) -> GradedPresentation:
    """Subquiver of degree-0 arrows with the relations entirely supported on it."""
    keep = {a.id for a in pres.quiver.arrows if pres.arrow_degree(a.id) == 0}
    arrows = tuple(a for a in pres.quiver.arrows if a.id in keep)
    quiver = Quiver(pres.quiver.vertices, arrows)
    relations = []
    for rel in pres.relations:
        if all(all(aid in keep for aid in p.arrows) for _, p in rel.terms):
            relations.append(Relation(tuple((c, quiver.path(p.arrows)) for c, p in rel.terms)))
    return GradedPresentation(quiver=quiver, degree={a.id: 0 for a in arrows}, relations=tuple(relations))
