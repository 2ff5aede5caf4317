"""Minimal projective resolutions, Ext tables, levels, and quadratic duals.

Resolutions are computed by iterated projective covers of syzygies with
exact rational linear algebra, working slice by slice in the path-length
grading. The projective attached to a vertex v is spanned by the basis
elements starting at v; resolving the simple at v therefore pulls in
projectives at vertices reachable from v, one level per homological degree
when the algebra is levelled Koszul.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Set, Tuple, Union

from . import linalg
from .findim import AlgebraTable, nilpotency_index
from .presentation import (
    Arrow,
    GradedPresentation,
    Quiver,
    Relation,
    validate_presentation,
)

Coord = Tuple[int, int]  # (generator index, basis index)
SliceKey = Tuple[int, str]  # (internal degree, target vertex)


class NotQuadraticError(ValueError):
    pass


# ---------------------------------------------------------------------------
# levelled structures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LevelledStructure:
    order: Tuple[str, ...]
    s: Mapping[str, int]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "s", dict(self.s))


@dataclass(frozen=True)
class LevelFailure:
    reason: str
    arrow: Optional[str] = None
    cycle: Optional[Tuple[str, ...]] = None


def detect_levels(pres: GradedPresentation) -> Union[LevelledStructure, LevelFailure]:
    """Solve s(target) = s(source) + 1 along all arrows, or return a witness.

    Each weakly connected component is shifted so its minimum level is 0;
    the emitted vertex order is sorted by (level, vertex id).
    """
    quiver = pres.quiver
    cycle = _find_directed_cycle(quiver)
    if cycle is not None:
        return LevelFailure(reason="quiver has a directed cycle", cycle=tuple(cycle))

    adjacency: Dict[str, List[Tuple[str, int, str]]] = {v: [] for v in quiver.vertices}
    for a in quiver.arrows:
        adjacency[a.source].append((a.target, 1, a.id))
        adjacency[a.target].append((a.source, -1, a.id))

    s: Dict[str, int] = {}
    for start in quiver.vertices:
        if start in s:
            continue
        component = [start]
        s[start] = 0
        queue = [start]
        while queue:
            v = queue.pop()
            for w, step, aid in adjacency[v]:
                expected = s[v] + step
                if w not in s:
                    s[w] = expected
                    component.append(w)
                    queue.append(w)
                elif s[w] != expected:
                    return LevelFailure(
                        reason="inconsistent level potentials", arrow=aid
                    )
        low = min(s[v] for v in component)
        for v in component:
            s[v] -= low
    n = max(s.values()) if s else 0
    if set(s.values()) != set(range(n + 1)):
        return LevelFailure(reason="level values have a gap")
    order = tuple(sorted(quiver.vertices, key=lambda v: (s[v], v)))
    return LevelledStructure(order=order, s=s, n=n)


def _find_directed_cycle(quiver: Quiver) -> Optional[List[str]]:
    WHITE, GREY, BLACK = 0, 1, 2
    color = {v: WHITE for v in quiver.vertices}
    succ: Dict[str, List[str]] = {v: [] for v in quiver.vertices}
    for a in quiver.arrows:
        succ[a.source].append(a.target)
    stack_path: List[str] = []

    def visit(v: str) -> Optional[List[str]]:
        color[v] = GREY
        stack_path.append(v)
        for w in succ[v]:
            if color[w] == GREY:
                return stack_path[stack_path.index(w):] + [w]
            if color[w] == WHITE:
                found = visit(w)
                if found:
                    return found
        stack_path.pop()
        color[v] = BLACK
        return None

    for v in quiver.vertices:
        if color[v] == WHITE:
            found = visit(v)
            if found:
                return found
    return None


def check_levelled_structure(pres: GradedPresentation, lv: LevelledStructure) -> List[str]:
    """Violations of the levelled-structure invariants (empty list = OK)."""
    problems = []
    if set(lv.order) != set(pres.quiver.vertices):
        problems.append("order is not a permutation of the vertices")
    if set(lv.s.values()) != set(range(lv.n + 1)):
        problems.append("level map is not surjective onto 0..n")
    levels_in_order = [lv.s[v] for v in lv.order]
    if levels_in_order != sorted(levels_in_order):
        problems.append("level map is not monotonic along the order")
    for a in pres.quiver.arrows:
        if lv.s[a.target] != lv.s[a.source] + 1:
            problems.append(f"arrow {a.id} does not raise the level by one")
    return problems


# ---------------------------------------------------------------------------
# minimal projective resolutions
# ---------------------------------------------------------------------------

@dataclass
class ResolutionStep:
    generators: List[Tuple[str, int]]  # (vertex, internal degree)
    differential: List[Dict[Coord, Fraction]]  # one vector in the previous step per generator


@dataclass
class ProjectiveResolution:
    simple: str
    steps: List[ResolutionStep]
    truncated: bool

    def multiplicities(self, k: int) -> Dict[str, int]:
        out: Dict[str, int] = {}
        if k < len(self.steps):
            for v, _ in self.steps[k].generators:
                out[v] = out.get(v, 0) + 1
        return out

    def length(self) -> int:
        return len(self.steps) - 1

    def ladder(self) -> str:
        lines = []
        for k, step in enumerate(self.steps):
            mults: Dict[Tuple[str, int], int] = {}
            for v, d in step.generators:
                mults[(v, d)] = mults.get((v, d), 0) + 1
            terms = [
                f"P({v})^{m}(deg {d})" if m > 1 else f"P({v})(deg {d})"
                for (v, d), m in sorted(mults.items())
            ]
            lines.append(f"P^{k} = " + (" + ".join(terms) if terms else "0"))
        lines.append(f"--> S({self.simple})" + ("  [truncated]" if self.truncated else ""))
        return "\n".join(lines)


def min_proj_resolution(tab: AlgebraTable, simple: str, max_deg: int) -> ProjectiveResolution:
    """Iterated projective covers of syzygies; stops at zero syzygy or max_deg."""
    if simple not in tab.vertices():
        raise ValueError(f"unknown vertex {simple!r}")
    positive = [b.index for b in tab.basis if b.length >= 1]

    steps = [ResolutionStep(generators=[(simple, 0)], differential=[])]
    # syzygy of step 0: rad P_simple, sliced by (degree, target)
    syz: Dict[SliceKey, List[Dict[Coord, Fraction]]] = {}
    for b in tab.basis:
        if b.source == simple and b.length >= 1:
            syz.setdefault((b.length, b.target), []).append({(0, b.index): Fraction(1)})

    truncated = False
    k = 0
    while any(syz.values()):
        if k == max_deg:
            truncated = True
            break
        k += 1
        gens = steps[-1].generators
        omega_j = _module_radical_products(tab, syz, gens, positive)
        new_gens: List[Tuple[str, int]] = []
        new_diff: List[Dict[Coord, Fraction]] = []
        for key in sorted(syz):
            deg, tgt = key
            coords = _slice_coords(tab, gens, deg, tgt)
            cindex = {c: i for i, c in enumerate(coords)}
            jrows = [_densify(v, cindex) for v in omega_j.get(key, [])]
            j_rref, j_piv = linalg.rref(jrows)
            residues = []
            for v in syz[key]:
                r = linalg.reduce_row(_densify(v, cindex), j_rref, j_piv)
                if any(r):
                    residues.append(r)
            r_rref, _ = linalg.rref(residues)
            for row in r_rref:
                vec = {coords[c]: val for c, val in enumerate(row) if val}
                assert all(tab.basis[b].length >= 1 for _, b in vec), "differential not radical"
                new_gens.append((tgt, deg))
                new_diff.append(vec)
        steps.append(ResolutionStep(generators=new_gens, differential=new_diff))
        syz = _kernel_of_cover(tab, new_gens, new_diff, steps[-2].generators)
    return ProjectiveResolution(simple=simple, steps=steps, truncated=truncated)


def _slice_coords(tab: AlgebraTable, gens: List[Tuple[str, int]], deg: int, tgt: str) -> List[Coord]:
    coords: List[Coord] = []
    for g, (v, gdeg) in enumerate(gens):
        rem = deg - gdeg
        if rem < 0:
            continue
        for b in tab.basis:
            if b.source == v and b.target == tgt and b.length == rem:
                coords.append((g, b.index))
    return sorted(coords)


def _densify(vec: Dict[Coord, Fraction], cindex: Dict[Coord, int]) -> linalg.Row:
    row = linalg.zeros(len(cindex))
    for c, val in vec.items():
        row[cindex[c]] = val
    return row


def _module_radical_products(
    tab: AlgebraTable,
    subspace: Dict[SliceKey, List[Dict[Coord, Fraction]]],
    gens: List[Tuple[str, int]],
    positive: List[int],
) -> Dict[SliceKey, List[Dict[Coord, Fraction]]]:
    out: Dict[SliceKey, List[Dict[Coord, Fraction]]] = {}
    for key, vecs in subspace.items():
        for vec in vecs:
            for p in positive:
                bp = tab.basis[p]
                prod: Dict[Coord, Fraction] = {}
                for (g, b), val in vec.items():
                    if tab.basis[b].target != bp.source:
                        continue
                    for coeff, idx in tab.mult(b, p):
                        c = (g, idx)
                        nv = prod.get(c, Fraction(0)) + val * coeff
                        if nv:
                            prod[c] = nv
                        elif c in prod:
                            del prod[c]
                if prod:
                    gidx, bidx = next(iter(prod))
                    b0 = tab.basis[bidx]
                    newdeg = gens[gidx][1] + b0.length
                    out.setdefault((newdeg, b0.target), []).append(prod)
    return out


def _kernel_of_cover(
    tab: AlgebraTable,
    gens: List[Tuple[str, int]],
    diff: List[Dict[Coord, Fraction]],
    prev_gens: List[Tuple[str, int]],
) -> Dict[SliceKey, List[Dict[Coord, Fraction]]]:
    """Kernel of the cover ⊕_g P_{v_g} -> previous step, slice by slice."""
    slices: Dict[SliceKey, List[Coord]] = {}
    for g, (v, gdeg) in enumerate(gens):
        for b in tab.basis:
            if b.source == v:
                slices.setdefault((gdeg + b.length, b.target), []).append((g, b.index))
    out: Dict[SliceKey, List[Dict[Coord, Fraction]]] = {}
    for key in sorted(slices):
        deg, tgt = key
        coords = sorted(slices[key])
        images: List[Dict[Coord, Fraction]] = []
        for (g, b) in coords:
            img: Dict[Coord, Fraction] = {}
            for (pg, pb), val in diff[g].items():
                for coeff, idx in tab.mult(pb, b):
                    c = (pg, idx)
                    nv = img.get(c, Fraction(0)) + val * coeff
                    if nv:
                        img[c] = nv
                    elif c in img:
                        del img[c]
            images.append(img)
        target_coords = sorted({c for img in images for c in img})
        tindex = {c: i for i, c in enumerate(target_coords)}
        mat = [linalg.zeros(len(coords)) for _ in target_coords]
        for col, img in enumerate(images):
            for c, val in img.items():
                mat[tindex[c]][col] = val
        for vec in linalg.nullspace(mat, len(coords)):
            sparse = {coords[c]: val for c, val in enumerate(vec) if val}
            if sparse:
                out.setdefault(key, []).append(sparse)
    return out


# ---------------------------------------------------------------------------
# Ext tables and the Koszul criterion
# ---------------------------------------------------------------------------

@dataclass
class ExtTable:
    entries: Dict[Tuple[int, str, str], int]
    max_deg: int
    truncated: bool

    def dim(self, k: int, i: str, j: str) -> int:
        return self.entries.get((k, i, j), 0)

    def to_json(self) -> dict:
        nested: Dict[str, Dict[str, Dict[str, int]]] = {}
        for (k, i, j), val in sorted(self.entries.items()):
            nested.setdefault(str(k), {}).setdefault(i, {})[j] = val
        return {"max_deg": self.max_deg, "truncated": self.truncated, "table": nested}


def ext_table(tab: AlgebraTable, max_deg: int) -> ExtTable:
    """dim Ext^k(S_i, S_j) = multiplicity of P_j in step k of the resolution of S_i."""
    entries: Dict[Tuple[int, str, str], int] = {}
    truncated = False
    for v in tab.vertices():
        res = min_proj_resolution(tab, v, max_deg)
        truncated = truncated or res.truncated
        for k in range(len(res.steps)):
            for w, m in res.multiplicities(k).items():
                entries[(k, v, w)] = m
    return ExtTable(entries=entries, max_deg=max_deg, truncated=truncated)


@dataclass
class KoszulVerdict:
    ok: Optional[bool]  # True / False / None = inconclusive
    witness: Optional[Tuple[int, str, str]]
    bound: int
    table: ExtTable


def koszul_check_levelled(
    tab: AlgebraTable, lv: LevelledStructure, bound: Optional[int] = None
) -> KoszulVerdict:
    """Ext nonvanishing happens only at k = s(j) - s(i), up to the bound."""
    if bound is None:
        bound = max(lv.n, nilpotency_index(tab), len(tab.vertices()))
    table = ext_table(tab, bound)
    for (k, i, j) in sorted(table.entries):
        if table.entries[(k, i, j)] and k != lv.s[j] - lv.s[i]:
            return KoszulVerdict(ok=False, witness=(k, i, j), bound=bound, table=table)
    if table.truncated:
        return KoszulVerdict(ok=None, witness=None, bound=bound, table=table)
    return KoszulVerdict(ok=True, witness=None, bound=bound, table=table)


# ---------------------------------------------------------------------------
# quadratic (Koszul) duals
# ---------------------------------------------------------------------------

def dual_arrow_id(arrow_id: str) -> str:
    return arrow_id[:-1] if arrow_id.endswith("!") else arrow_id + "!"


def quadratic_dual(pres: GradedPresentation) -> GradedPresentation:
    """Opposite quiver with the annihilator relations.

    Requires a quadratic presentation in the path-length grading (every
    arrow in degree 1, every relation of path length 2). The pairing is
    <(ab)*, cd> = delta_ac delta_bd and (ab)* is realised as b* then a* on
    the opposite quiver, with no extra sign; taking the dual twice restores
    the original arrow ids.
    """
    report = validate_presentation(pres)
    if not report.ok:
        raise ValueError("invalid presentation: " + "; ".join(report.problems))
    for a in pres.quiver.arrows:
        if pres.arrow_degree(a.id) != 1:
            raise NotQuadraticError(f"arrow {a.id} not in degree 1 (not length-graded)")
    for k, rel in enumerate(pres.relations):
        if rel.terms[0][1].length != 2:
            raise NotQuadraticError(f"relation {k} has length != 2 (not quadratic)")

    quiver = pres.quiver
    dual_arrows = tuple(
        Arrow(dual_arrow_id(a.id), a.target, a.source, a.label)
        for a in sorted(quiver.arrows, key=lambda a: a.id)
    )
    dual_quiver = Quiver(quiver.vertices, dual_arrows)

    # enumerate length-2 paths per (source, target) slice
    paths2: Dict[Tuple[str, str], List[Tuple[str, str]]] = {}
    for a in sorted(quiver.arrows, key=lambda a: a.id):
        for b in sorted(quiver.arrows, key=lambda a: a.id):
            if a.target == b.source:
                paths2.setdefault((a.source, b.target), []).append((a.id, b.id))
    rels_by_slice: Dict[Tuple[str, str], List[Relation]] = {}
    for rel in pres.relations:
        p0 = rel.terms[0][1]
        rels_by_slice.setdefault((p0.source, p0.target), []).append(rel)

    dual_relations: List[Relation] = []
    for slc in sorted(paths2):
        cols = sorted(paths2[slc])
        cindex = {p: c for c, p in enumerate(cols)}
        rows = []
        for rel in rels_by_slice.get(slc, []):
            row = linalg.zeros(len(cols))
            for coeff, path in rel.terms:
                row[cindex[(path.arrows[0], path.arrows[1])]] += coeff
            rows.append(row)
        for vec in linalg.nullspace(rows, len(cols)):
            terms = []
            for c, val in enumerate(vec):
                if val:
                    a, b = cols[c]
                    terms.append((val, dual_quiver.path([dual_arrow_id(b), dual_arrow_id(a)])))
            terms.sort(key=lambda t: t[1].arrows)
            dual_relations.append(Relation(tuple(terms)))

    degree = {a.id: 1 for a in dual_arrows}
    return GradedPresentation(quiver=dual_quiver, degree=degree, relations=tuple(dual_relations))


def relation_span(pres: GradedPresentation) -> Dict[Tuple[str, str], List[linalg.Row]]:
    """Canonical rref of the quadratic relation space per slice (for comparisons)."""
    paths2: Dict[Tuple[str, str], List[Tuple[str, str]]] = {}
    for a in sorted(pres.quiver.arrows, key=lambda a: a.id):
        for b in sorted(pres.quiver.arrows, key=lambda a: a.id):
            if a.target == b.source:
                paths2.setdefault((a.source, b.target), []).append((a.id, b.id))
    out: Dict[Tuple[str, str], List[linalg.Row]] = {}
    for slc, cols in sorted(paths2.items()):
        cols = sorted(cols)
        cindex = {p: c for c, p in enumerate(cols)}
        rows = []
        for rel in pres.relations:
            p0 = rel.terms[0][1]
            if (p0.source, p0.target) != slc:
                continue
            row = linalg.zeros(len(cols))
            for coeff, path in rel.terms:
                row[cindex[(path.arrows[0], path.arrows[1])]] += coeff
            rows.append(row)
        out[slc] = linalg.rref(rows)[0]
    return out
