"""Quivers, paths, and graded presentations of path algebras.

A presentation is a quiver together with a nonnegative integer degree for
every arrow and a list of homogeneous relations (rational linear
combinations of parallel paths of equal length and equal degree). All
values are immutable after construction; the canonical text format
round-trips exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

ID_RE = re.compile(r"[A-Za-z0-9_@^!~')(]+\Z")


class QuiverError(ValueError):
    pass


class CompositionError(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 0):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Arrow:
    id: str
    source: str
    target: str
    label: str


@dataclass(frozen=True)
class Quiver:
    vertices: Tuple[str, ...]
    arrows: Tuple[Arrow, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError("duplicate vertex id")
        # canonical arrow storage order: sorted by id (vertex order is data)
        object.__setattr__(self, "arrows", tuple(sorted(self.arrows, key=lambda a: a.id)))
        ids = [a.id for a in self.arrows]
        if len(set(ids)) != len(ids):
            raise QuiverError("duplicate arrow id")
        vset = set(self.vertices)
        for a in self.arrows:
            if a.source not in vset or a.target not in vset:
                raise QuiverError(f"arrow {a.id} has undeclared endpoint")
        object.__setattr__(self, "_by_id", {a.id: a for a in self.arrows})

    def arrow(self, arrow_id: str) -> Arrow:
        try:
            return self._by_id[arrow_id]
        except KeyError:
            raise QuiverError(f"unknown arrow id {arrow_id!r}") from None

    def has_vertex(self, v: str) -> bool:
        return v in set(self.vertices)

    def arrows_from(self, v: str) -> List[Arrow]:
        return [a for a in self.arrows if a.source == v]

    def arrows_into(self, v: str) -> List[Arrow]:
        return [a for a in self.arrows if a.target == v]

    def trivial_path(self, v: str) -> "Path":
        if v not in set(self.vertices):
            raise QuiverError(f"unknown vertex {v!r}")
        return Path(source=v, target=v, arrows=())

    def path(self, arrow_ids: Sequence[str]) -> "Path":
        """Build a path from arrow ids, checking head-to-tail composability."""
        if not arrow_ids:
            raise QuiverError("use trivial_path for the empty path")
        arrows = [self.arrow(i) for i in arrow_ids]
        for a, b in zip(arrows, arrows[1:]):
            if a.target != b.source:
                raise CompositionError(f"{a.id} ends at {a.target}, {b.id} starts at {b.source}")
        return Path(source=arrows[0].source, target=arrows[-1].target, arrows=tuple(arrow_ids))


@dataclass(frozen=True)
class Path:
    """A directed path; the trivial path has no arrows and records its vertex."""

    source: str
    target: str
    arrows: Tuple[str, ...]

    @property
    def length(self) -> int:
        return len(self.arrows)

    @property
    def is_trivial(self) -> bool:
        return not self.arrows

    def key(self) -> Tuple[str, Tuple[str, ...]]:
        return (self.source, self.arrows)


@dataclass(frozen=True)
class Relation:
    terms: Tuple[Tuple[Fraction, Path], ...]


@dataclass(frozen=True)
class GradedPresentation:
    quiver: Quiver
    degree: Mapping[str, int]
    relations: Tuple[Relation, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "degree", dict(self.degree))

    def arrow_degree(self, arrow_id: str) -> int:
        self.quiver.arrow(arrow_id)
        try:
            return self.degree[arrow_id]
        except KeyError:
            raise QuiverError(f"no degree assigned to arrow {arrow_id!r}") from None


def compose_paths(p: Path, q: Path) -> Path:
    """Concatenate p then q; lengths and degrees add."""
    if p.target != q.source:
        raise CompositionError(f"cannot compose: {p.target} != {q.source}")
    if p.is_trivial:
        return q
    if q.is_trivial:
        return p
    return Path(source=p.source, target=q.target, arrows=p.arrows + q.arrows)


def path_degree(pres: GradedPresentation, p: Path) -> int:
    return sum(pres.arrow_degree(a) for a in p.arrows)


@dataclass
class ValidationReport:
    ok: bool
    problems: List[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def validate_presentation(pres: GradedPresentation) -> ValidationReport:
    """Check the structural invariants; the report carries the first violation per relation."""
    problems: List[str] = []
    q = pres.quiver
    for v in q.vertices:
        if not ID_RE.match(v):
            problems.append(f"vertex id {v!r} contains unsupported characters")
    for a in q.arrows:
        if not ID_RE.match(a.id):
            problems.append(f"arrow id {a.id!r} contains unsupported characters")
        if a.id not in pres.degree:
            problems.append(f"arrow {a.id} has no degree")
        elif pres.degree[a.id] < 0:
            problems.append(f"arrow {a.id} has negative degree")
    for k, rel in enumerate(pres.relations):
        where = f"relation {k}"
        if not rel.terms:
            problems.append(f"{where}: empty relation")
            continue
        if all(c == 0 for c, _ in rel.terms):
            problems.append(f"{where}: all coefficients zero")
            continue
        paths = [p for _, p in rel.terms]
        try:
            for p in paths:
                if p.is_trivial:
                    raise QuiverError("zero-length relation path")
                q.path(p.arrows)
        except (QuiverError, CompositionError) as exc:
            problems.append(f"{where}: bad path ({exc})")
            continue
        src, tgt = paths[0].source, paths[0].target
        if any(p.source != src or p.target != tgt for p in paths):
            problems.append(f"{where}: non-parallel paths")
            continue
        n = paths[0].length
        if any(p.length != n for p in paths):
            problems.append(f"{where}: mixed path lengths")
            continue
        d = path_degree(pres, paths[0])
        if any(path_degree(pres, p) != d for p in paths):
            problems.append(f"{where}: inhomogeneous relation")
    return ValidationReport(ok=not problems, problems=problems)


# ---------------------------------------------------------------------------
# canonical text format
# ---------------------------------------------------------------------------

def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _format_term(c: Fraction, p: Path) -> str:
    body = ".".join(p.arrows)
    mag = abs(c)
    if mag != 1:
        body = f"{_format_coeff(mag)}*{body}"
    return body


def serialize(pres: GradedPresentation) -> str:
    """Canonical text format; vertex order then sorted arrow ids, bit-stable."""
    lines: List[str] = []
    for v in pres.quiver.vertices:
        lines.append(f"vertex {v}")
    for a in sorted(pres.quiver.arrows, key=lambda a: a.id):
        line = f"arrow {a.id} : {a.source} -> {a.target} @ {pres.arrow_degree(a.id)}"
        if a.label != a.id:
            line += f" label {a.label}"
        lines.append(line)
    for rel in pres.relations:
        parts: List[str] = []
        for i, (c, p) in enumerate(rel.terms):
            term = _format_term(c, p)
            if i == 0:
                parts.append(term if c > 0 else f"- {term}")
            else:
                parts.append(("+ " if c > 0 else "- ") + term)
        lines.append("relation " + " ".join(parts))
    return "\n".join(lines) + ("\n" if lines else "")


def parse(text: str) -> GradedPresentation:
    """Parse the canonical text format; errors carry line/column positions."""
    vertices: List[str] = []
    arrows: List[Arrow] = []
    degree: Dict[str, int] = {}
    relation_specs: List[Tuple[int, List[Tuple[Fraction, List[str]]]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "vertex":
            if not rest or not ID_RE.match(rest):
                raise ParseError(f"bad vertex id {rest!r}", lineno)
            vertices.append(rest)
        elif head == "arrow":
            m = re.match(
                r"(?P<id>\S+)\s*:\s*(?P<src>\S+)\s*->\s*(?P<tgt>\S+)\s*@\s*(?P<deg>\d+)"
                r"(?:\s+label\s+(?P<label>\S+))?\Z",
                rest,
            )
            if not m:
                raise ParseError(f"bad arrow line {rest!r}", lineno)
            aid = m.group("id")
            arrows.append(Arrow(aid, m.group("src"), m.group("tgt"), m.group("label") or aid))
            degree[aid] = int(m.group("deg"))
        elif head == "relation":
            relation_specs.append((lineno, _parse_relation(rest, lineno)))
        else:
            raise ParseError(f"unknown directive {head!r}", lineno)
    try:
        quiver = Quiver(tuple(vertices), tuple(arrows))
    except QuiverError as exc:
        raise ParseError(str(exc), 0) from exc
    relations: List[Relation] = []
    for lineno, spec in relation_specs:
        terms: List[Tuple[Fraction, Path]] = []
        for coeff, arrow_ids in spec:
            try:
                terms.append((coeff, quiver.path(arrow_ids)))
            except (QuiverError, CompositionError) as exc:
                raise ParseError(str(exc), lineno) from exc
        relations.append(Relation(tuple(terms)))
    return GradedPresentation(quiver=quiver, degree=degree, relations=tuple(relations))


def _parse_relation(rest: str, lineno: int) -> List[Tuple[Fraction, List[str]]]:
    tokens = rest.split()
    if not tokens:
        raise ParseError("empty relation", lineno)
    terms: List[Tuple[Fraction, List[str]]] = []
    sign = 1
    expect_term = True
    col = 0
    for tok in tokens:
        col += 1
        if tok in ("+", "-"):
            if expect_term and terms:
                raise ParseError("two consecutive signs", lineno, col)
            sign = 1 if tok == "+" else -1
            expect_term = True
            continue
        if not expect_term and terms:
            raise ParseError(f"missing sign before {tok!r}", lineno, col)
        coeff = Fraction(1)
        body = tok
        if "*" in tok:
            cpart, _, body = tok.partition("*")
            try:
                coeff = Fraction(cpart)
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"bad coefficient {cpart!r}", lineno, col) from None
        arrow_ids = body.split(".")
        if not all(ID_RE.match(a) for a in arrow_ids):
            raise ParseError(f"bad path {body!r}", lineno, col)
        terms.append((sign * coeff, arrow_ids))
        sign = 1
        expect_term = False
    if expect_term:
        raise ParseError("dangling sign", lineno)
    return terms


def export_dot(pres: GradedPresentation, name: str = "presentation") -> str:
    """GraphViz DOT text; degree-1 arrows are drawn bold."""
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    for v in pres.quiver.vertices:
        lines.append(f'  "{v}" [shape=circle];')
    for a in sorted(pres.quiver.arrows, key=lambda a: a.id):
        attrs = [f'label="{a.label}"']
        if pres.arrow_degree(a.id) == 1:
            attrs.append("style=bold")
            attrs.append("penwidth=2.0")
        lines.append(f'  "{a.source}" -> "{a.target}" [{", ".join(attrs)}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def presentation_to_json(pres: GradedPresentation) -> dict:
    """JSON-ready dict mirroring the text format, with stable orderings."""
    return {
        "vertices": list(pres.quiver.vertices),
        "arrows": [
            {
                "id": a.id,
                "source": a.source,
                "target": a.target,
                "degree": pres.arrow_degree(a.id),
                "label": a.label,
            }
            for a in sorted(pres.quiver.arrows, key=lambda a: a.id)
        ],
        "relations": [
            {
                "terms": [
                    {"coeff": _format_coeff(c), "path": list(p.arrows)}
                    for c, p in rel.terms
                ]
            }
            for rel in pres.relations
        ],
    }
