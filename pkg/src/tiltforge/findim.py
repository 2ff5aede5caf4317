"""Explicit bases and multiplication for finite-dimensional quotients.

``build_algebra`` realises a graded presentation as an AlgebraTable: for
each path length it spans the length-n paths and quotients by the degree-n
slice of the two-sided relation ideal, by exact Gaussian elimination over
the rationals. Construction stops at the first empty slice; hitting the
length bound with a nonzero slice raises (the partial table rides on the
exception).

Quotient bases are canonical: in every (source, target, length) slice the
surviving representatives are the lexicographically smallest paths under
arrow-id order, so tables, Cartan matrices and truncated presentations are
reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from . import linalg
from .presentation import (
    Arrow,
    GradedPresentation,
    Path,
    Quiver,
    Relation,
    validate_presentation,
)

PathKey = Tuple[str, ...]
Slice = Tuple[str, str]
SparseVec = Dict[int, Fraction]


class BoundExceededError(RuntimeError):
    """Raised when the slice at the length bound is still nonzero."""

    def __init__(self, table: "AlgebraTable"):
        super().__init__(
            f"dimension bound exceeded at length {table.pres_bound}; "
            "algebra may be infinite-dimensional"
        )
        self.table = table


@dataclass(frozen=True)
class BasisElement:
    index: int
    source: str
    target: str
    arrows: PathKey
    length: int
    degree: int


class AlgebraTable:
    """Basis, normal forms and multiplication of a finite-dimensional quotient."""

    def __init__(
        self,
        pres: GradedPresentation,
        basis: List[BasisElement],
        normal_form: Dict[Tuple[str, PathKey], Tuple[Tuple[Fraction, int], ...]],
        stop_length: Optional[int],
        bound: int,
    ):
        self.pres = pres
        self.basis = tuple(basis)
        self._nf = normal_form
        self.stop_length = stop_length
        self.pres_bound = bound
        self.bound_exceeded = stop_length is None
        self.units = {}
        self.slices: Dict[Slice, List[int]] = {}
        for b in self.basis:
            self.slices.setdefault((b.source, b.target), []).append(b.index)
            if b.length == 0:
                self.units[b.source] = b.index
        self._arrow_index = {}
        for b in self.basis:
            if b.length == 1:
                self._arrow_index[b.arrows[0]] = b.index
        self._mult_cache: Dict[Tuple[int, int], Tuple[Tuple[Fraction, int], ...]] = {}

    # -- queries ----------------------------------------------------------

    def dimension(self) -> int:
        return len(self.basis)

    def vertices(self) -> Tuple[str, ...]:
        return self.pres.quiver.vertices

    def slice_indices(self, source: str, target: str) -> List[int]:
        return self.slices.get((source, target), [])

    def arrow_basis_index(self, arrow_id: str) -> int:
        return self._arrow_index[arrow_id]

    def max_length(self) -> int:
        return max((b.length for b in self.basis), default=0)

    def mult(self, i: int, j: int) -> Tuple[Tuple[Fraction, int], ...]:
        """Product of two basis elements as a linear combination of basis elements."""
        key = (i, j)
        cached = self._mult_cache.get(key)
        if cached is not None:
            return cached
        bi, bj = self.basis[i], self.basis[j]
        if bi.target != bj.source:
            result: Tuple[Tuple[Fraction, int], ...] = ()
        else:
            arrows = bi.arrows + bj.arrows
            n = len(arrows)
            if self.stop_length is not None and n >= self.stop_length:
                result = ()
            else:
                nf = self._nf.get((bi.source, arrows))
                if nf is None:
                    if self.bound_exceeded:
                        raise BoundExceededError(self)
                    result = ()
                else:
                    result = nf
        self._mult_cache[key] = result
        return result

    def mult_vec(self, v: SparseVec, w: SparseVec) -> SparseVec:
        out: SparseVec = {}
        for i, ci in v.items():
            for j, cj in w.items():
                for coeff, k in self.mult(i, j):
                    val = out.get(k, Fraction(0)) + ci * cj * coeff
                    if val:
                        out[k] = val
                    elif k in out:
                        del out[k]
        return out


@dataclass(frozen=True)
class CartanMatrix:
    vertices: Tuple[str, ...]
    entries: Tuple[Tuple[int, ...], ...]

    def as_lists(self) -> List[List[int]]:
        return [list(r) for r in self.entries]


def build_algebra(pres: GradedPresentation, length_bound: Optional[int] = None) -> AlgebraTable:
    """Degreewise construction of kQ/(R) up to the length bound.

    The default bound is twice the number of vertices. Returns the table,
    or raises BoundExceededError (carrying the partial table) if the slice
    at the bound is still nonzero.
    """
    report = validate_presentation(pres)
    if not report.ok:
        raise ValueError("invalid presentation: " + "; ".join(report.problems))
    quiver = pres.quiver
    if length_bound is None:
        length_bound = max(2 * len(quiver.vertices), 2)

    arrows_from: Dict[str, List[Arrow]] = {v: [] for v in quiver.vertices}
    arrows_into: Dict[str, List[Arrow]] = {v: [] for v in quiver.vertices}
    for a in sorted(quiver.arrows, key=lambda a: a.id):
        arrows_from[a.source].append(a)
        arrows_into[a.target].append(a)

    rels_by_len: Dict[int, List[Relation]] = {}
    for rel in pres.relations:
        rels_by_len.setdefault(rel.terms[0][1].length, []).append(rel)

    basis: List[BasisElement] = []
    nf: Dict[Tuple[str, PathKey], Tuple[Tuple[Fraction, int], ...]] = {}

    def add_basis(source: str, target: str, arrows: PathKey, length: int) -> int:
        idx = len(basis)
        degree = sum(pres.arrow_degree(a) for a in arrows)
        basis.append(BasisElement(idx, source, target, arrows, length, degree))
        return idx

    for v in quiver.vertices:
        idx = add_basis(v, v, (), 0)
        nf[(v, ())] = ((Fraction(1), idx),)

    # paths_by_len[n]: slice -> list of (source, key); ideal_by_len[n]: slice -> rref data
    paths_by_len: List[Dict[Slice, List[Tuple[str, PathKey]]]] = [
        {(v, v): [(v, ())] for v in quiver.vertices}
    ]
    ideal_by_len: List[Dict[Slice, Tuple[List[linalg.Row], List[int], List[Tuple[str, PathKey]]]]] = [{}]

    stop_length: Optional[int] = None
    for n in range(1, length_bound + 1):
        paths_n: Dict[Slice, List[Tuple[str, PathKey]]] = {}
        for (u, w), plist in paths_by_len[n - 1].items():
            for src, key in plist:
                for a in arrows_from[w]:
                    paths_n.setdefault((src, a.target), []).append((src, key + (a.id,)))
        if not paths_n:
            stop_length = n
            break

        ideal_n: Dict[Slice, Tuple[List[linalg.Row], List[int], List[Tuple[str, PathKey]]]] = {}
        added = 0
        for slc in sorted(paths_n):
            u, w = slc
            cols = sorted(paths_n[slc], key=lambda p: p[1], reverse=True)
            col_index = {key: c for c, (src, key) in enumerate(cols)}
            ncols = len(cols)
            rows: List[linalg.Row] = []
            for rel in rels_by_len.get(n, []):
                p0 = rel.terms[0][1]
                if (p0.source, p0.target) != slc:
                    continue
                row = linalg.zeros(ncols)
                for coeff, path in rel.terms:
                    row[col_index[path.arrows]] += coeff
                rows.append(row)
            prev = ideal_by_len[n - 1]
            for a in arrows_from[u]:
                sub = prev.get((a.target, w))
                if not sub:
                    continue
                for row in sub[0]:
                    new = linalg.zeros(ncols)
                    for c, val in enumerate(row):
                        if val:
                            _, key = sub[2][c]
                            new[col_index[(a.id,) + key]] = val
                    rows.append(new)
            for a in arrows_into[w]:
                sub = prev.get((u, a.source))
                if not sub:
                    continue
                for row in sub[0]:
                    new = linalg.zeros(ncols)
                    for c, val in enumerate(row):
                        if val:
                            _, key = sub[2][c]
                            new[col_index[key + (a.id,)]] = val
                    rows.append(new)
            rrows, pivots = linalg.rref(rows)
            ideal_n[slc] = (rrows, pivots, cols)

            free_cols = linalg.complement_pivots(pivots, ncols)
            # free columns in descending path order; create basis in ascending order
            col_basis: Dict[int, int] = {}
            for c in sorted(free_cols, key=lambda c: cols[c][1]):
                src, key = cols[c]
                col_basis[c] = add_basis(src, w, key, n)
                added += 1
            for c, (src, key) in enumerate(cols):
                residue = linalg.reduce_row(linalg.unit(ncols, c), rrows, pivots)
                nf[(src, key)] = tuple(
                    (val, col_basis[cc]) for cc, val in enumerate(residue) if val
                )
        paths_by_len.append(paths_n)
        ideal_by_len.append(ideal_n)
        if added == 0:
            stop_length = n
            break

    table = AlgebraTable(pres, basis, nf, stop_length, length_bound)
    if stop_length is None:
        raise BoundExceededError(table)
    return table


def dimension(tab: AlgebraTable) -> int:
    return tab.dimension()


def cartan_matrix(tab: AlgebraTable, order: Optional[Sequence[str]] = None) -> CartanMatrix:
    """Entry (i, j) counts basis elements from vertex i to vertex j."""
    verts = tuple(order) if order else tab.vertices()
    rows = tuple(
        tuple(len(tab.slice_indices(u, w)) for w in verts)
        for u in verts
    )
    return CartanMatrix(verts, rows)


def radical_vectors(tab: AlgebraTable) -> List[SparseVec]:
    return [{b.index: Fraction(1)} for b in tab.basis if b.length >= 1]


def radical_power_slices(tab: AlgebraTable, k: int) -> Dict[Slice, List[SparseVec]]:
    """Basis of J^k per (source, target), J computed by iterated products."""
    series = radical_series(tab)
    vecs = series[k] if k < len(series) else []
    out: Dict[Slice, List[SparseVec]] = {}
    for v in vecs:
        b = tab.basis[next(iter(sorted(v)))]
        out.setdefault((b.source, b.target), []).append(v)
    return out


def radical_series(tab: AlgebraTable) -> List[List[SparseVec]]:
    """[J^0 stand-in, J^1, J^2, ...] until zero; J^0 is the full unit span."""
    series: List[List[SparseVec]] = [[{b.index: Fraction(1)} for b in tab.basis]]
    j1 = radical_vectors(tab)
    current = j1
    while current:
        series.append(current)
        nxt: List[SparseVec] = []
        for v in current:
            for w in j1:
                prod = tab.mult_vec(v, w)
                if prod:
                    nxt.append(prod)
        current = _echelon_sparse(tab, nxt)
    return series


def nilpotency_index(tab: AlgebraTable) -> int:
    """Least N with J^N = 0."""
    return len(radical_series(tab))


def _echelon_sparse(tab: AlgebraTable, vecs: List[SparseVec]) -> List[SparseVec]:
    if not vecs:
        return []
    coords = sorted({i for v in vecs for i in v})
    cindex = {c: i for i, c in enumerate(coords)}
    rows = []
    for v in vecs:
        row = linalg.zeros(len(coords))
        for c, val in v.items():
            row[cindex[c]] = val
        rows.append(row)
    rrows, _ = linalg.rref(rows)
    out = []
    for row in rrows:
        out.append({coords[c]: val for c, val in enumerate(row) if val})
    return out


# ---------------------------------------------------------------------------
# idempotent truncation
# ---------------------------------------------------------------------------

def truncate(tab: AlgebraTable, kept: Iterable[str]) -> GradedPresentation:
    """Quiver-with-relations presentation of the corner algebra at ``kept``.

    Arrows are a complement of (eJe)^2 inside eJe; an arrow through removed
    vertices is labelled by its representative path and graded by that
    path's length in the ambient algebra. Relations are a minimal
    homogeneous generating set of the kernel of the induced surjection,
    computed degree slice by degree slice.
    """
    kept_list = [v for v in tab.vertices() if v in set(kept)]
    if not kept_list:
        raise ValueError("empty kept set")
    unknown = set(kept) - set(tab.vertices())
    if unknown:
        raise ValueError(f"unknown vertices: {sorted(unknown)}")
    kept_set = set(kept_list)

    eje: Dict[Slice, List[int]] = {}
    for b in tab.basis:
        if b.length >= 1 and b.source in kept_set and b.target in kept_set:
            eje.setdefault((b.source, b.target), []).append(b.index)

    # (eJe)^2 spans, per slice, of products of eJe elements
    eje_all = [i for lst in eje.values() for i in lst]
    sq_by_slice: Dict[Slice, List[SparseVec]] = {}
    for i in eje_all:
        for j in eje_all:
            if tab.basis[i].target != tab.basis[j].source:
                continue
            prod = tab.mult(i, j)
            if prod:
                slc = (tab.basis[i].source, tab.basis[j].target)
                sq_by_slice.setdefault(slc, []).append({k: c for c, k in prod})

    new_arrows: List[Arrow] = []
    arrow_reps: Dict[str, int] = {}
    for slc in sorted(eje):
        idxs = sorted(eje[slc], key=lambda i: (tab.basis[i].length, tab.basis[i].arrows))
        cols = sorted(idxs, key=lambda i: (tab.basis[i].length, tab.basis[i].arrows), reverse=True)
        cindex = {b: c for c, b in enumerate(cols)}
        rows = []
        for v in sq_by_slice.get(slc, []):
            row = linalg.zeros(len(cols))
            for b, val in v.items():
                row[cindex[b]] = val
            rows.append(row)
        _, pivots = linalg.rref(rows)
        free = linalg.complement_pivots(pivots, len(cols))
        for c in sorted(free, key=lambda c: (tab.basis[cols[c]].length, tab.basis[cols[c]].arrows)):
            b = tab.basis[cols[c]]
            aid = "~".join(b.arrows)
            label = "".join(tab.pres.quiver.arrow(a).label for a in b.arrows)
            new_arrows.append(Arrow(aid, b.source, b.target, label))
            arrow_reps[aid] = b.index

    quiver = Quiver(tuple(kept_list), tuple(new_arrows))
    degree = {a.id: tab.basis[arrow_reps[a.id]].length for a in new_arrows}
    relations = _truncation_relations(tab, quiver, degree, arrow_reps, kept_set)
    return GradedPresentation(quiver=quiver, degree=degree, relations=tuple(relations))


def _truncation_relations(
    tab: AlgebraTable,
    quiver: Quiver,
    degree: Mapping[str, int],
    arrow_reps: Mapping[str, int],
    kept: Set[str],
) -> List[Relation]:
    if not quiver.arrows:
        return []
    maxdeg = max(degree.values())
    ebe_dim_by_deg: Dict[int, int] = {}
    top = 0
    for b in tab.basis:
        if b.source in kept and b.target in kept:
            ebe_dim_by_deg[b.length] = ebe_dim_by_deg.get(b.length, 0) + 1
            top = max(top, b.length)

    arrows_sorted = sorted(quiver.arrows, key=lambda a: a.id)
    # paths grouped by ambient degree, then slice; every path is (first arrow) + rest
    paths_deg: List[Dict[Slice, List[PathKey]]] = [
        {(v, v): [()] for v in quiver.vertices}
    ]
    images: Dict[Tuple[str, PathKey], SparseVec] = {}
    for v in quiver.vertices:
        images[(v, ())] = {tab.units[v]: Fraction(1)}

    ideal: List[Dict[Slice, Tuple[List[linalg.Row], List[int], List[PathKey]]]] = [{}]
    relations: List[Relation] = []

    for n in range(1, top + maxdeg + 1):
        layer: Dict[Slice, List[PathKey]] = {}
        for a in arrows_sorted:
            da = degree[a.id]
            if da > n or n - da >= len(paths_deg):
                continue
            for (u, w), plist in paths_deg[n - da].items():
                if u != a.target:
                    continue
                for key in plist:
                    full = (a.id,) + key
                    layer.setdefault((a.source, w), []).append(full)
                    prev = images[(u, key)]
                    img: SparseVec = {}
                    ai = arrow_reps[a.id]
                    for b, val in prev.items():
                        for coeff, k in tab.mult(ai, b):
                            nv = img.get(k, Fraction(0)) + val * coeff
                            if nv:
                                img[k] = nv
                            elif k in img:
                                del img[k]
                    images[(a.source, full)] = img
        paths_deg.append(layer)
        ideal_n: Dict[Slice, Tuple[List[linalg.Row], List[int], List[PathKey]]] = {}
        if n >= 2:
            for slc in sorted(layer):
                u, w = slc
                cols = sorted(layer[slc], reverse=True)
                cindex = {k: c for c, k in enumerate(cols)}
                # two-sided ideal slice generated by previously found relations
                irows: List[linalg.Row] = []
                for a in arrows_sorted:
                    da = degree[a.id]
                    if n - da <= 0 or n - da >= len(ideal):
                        continue
                    sub = ideal[n - da].get((a.target, w))
                    if sub and a.source == u:
                        for row in sub[0]:
                            new = linalg.zeros(len(cols))
                            for c, val in enumerate(row):
                                if val:
                                    new[cindex[(a.id,) + sub[2][c]]] = val
                            irows.append(new)
                    sub = ideal[n - da].get((u, a.source))
                    if sub and a.target == w:
                        for row in sub[0]:
                            new = linalg.zeros(len(cols))
                            for c, val in enumerate(row):
                                if val:
                                    new[cindex[sub[2][c] + (a.id,)]] = val
                            irows.append(new)
                i_rref, i_piv = linalg.rref(irows)

                coords = sorted({b for key in cols for b in images[(u, key)]})
                bindex = {b: i for i, b in enumerate(coords)}
                mat = [linalg.zeros(len(cols)) for _ in coords]
                for c, key in enumerate(cols):
                    for b, val in images[(u, key)].items():
                        mat[bindex[b]][c] = val
                kernel = linalg.nullspace(mat, len(cols))

                fresh = []
                for vec in kernel:
                    residue = linalg.reduce_row(vec, i_rref, i_piv)
                    if any(residue):
                        fresh.append(residue)
                fresh_rref, _ = linalg.rref(fresh)
                for row in fresh_rref:
                    terms = []
                    for c, val in enumerate(row):
                        if val:
                            terms.append((val, quiver.path(list(cols[c]))))
                    terms.sort(key=lambda t: t[1].arrows)
                    relations.append(Relation(tuple(terms)))
                k_rref, k_piv = linalg.rref(kernel)
                ideal_n[slc] = (k_rref, k_piv, cols)
        ideal.append(ideal_n)

    return relations
