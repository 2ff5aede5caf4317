"""Exceptional collection mutations on the Euler lattice.

Objects are tracked as integer K-theory classes in the basis of an initial
strong collection whose Gram matrix defines the Euler form; mutations act
by [L_E X] = chi(E,X)[E] - [X] and [R_E X] = chi(X,E)[E] - [X], and all
pairings are recomputed from the form. Dual collections are indexed by the
reversed original positions: position i of a dual collection corresponds
to position m-i of the input, also inside level blocks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .findim import AlgebraTable, cartan_matrix
from .homological import ExtTable, LevelledStructure, ext_table

Vec = Tuple[int, ...]
Mat = Tuple[Vec, ...]


class MutationError(ValueError):
    pass


def _pair(form: Mat, x: Sequence[int], y: Sequence[int]) -> int:
    return sum(x[i] * form[i][j] * y[j] for i in range(len(x)) for j in range(len(y)))


@dataclass(frozen=True)
class EulerCollection:
    """Labels, integer classes (rows), the Euler form, and optional levels."""

    labels: Tuple[str, ...]
    classes: Mat
    form: Mat
    levels: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if len(self.labels) != len(self.classes):
            raise MutationError("labels and classes disagree in length")
        if self.levels is not None and len(self.levels) != len(self.labels):
            raise MutationError("levels and labels disagree in length")

    def __len__(self) -> int:
        return len(self.labels)

    def chi(self) -> Mat:
        return tuple(
            tuple(_pair(self.form, x, y) for y in self.classes) for x in self.classes
        )

    def pairing(self, i: int, j: int) -> int:
        return _pair(self.form, self.classes[i], self.classes[j])

    def exceptional_violations(self) -> List[str]:
        chi = self.chi()
        out = []
        for i in range(len(self)):
            if chi[i][i] != 1:
                out.append(f"chi[{i}][{i}] = {chi[i][i]} != 1")
        for j in range(len(self)):
            for i in range(j):
                if chi[j][i] != 0:
                    out.append(f"chi[{j}][{i}] = {chi[j][i]} != 0 below the diagonal")
        if self.levels is not None:
            for i in range(len(self)):
                for j in range(len(self)):
                    if i != j and self.levels[i] == self.levels[j] and chi[i][j] != 0:
                        out.append(f"chi[{i}][{j}] != 0 within level {self.levels[i]}")
        return out

    def blocks(self) -> List[List[int]]:
        if self.levels is None:
            raise MutationError("collection has no levels")
        top = max(self.levels)
        return [[i for i, s in enumerate(self.levels) if s == lev] for lev in range(top + 1)]


def from_gram(labels: Sequence[str], gram: Sequence[Sequence[int]],
              levels: Optional[Sequence[int]] = None) -> EulerCollection:
    """Collection of a strong exceptional sequence: classes are the unit basis."""
    m = len(labels)
    classes = tuple(tuple(1 if i == j else 0 for j in range(m)) for i in range(m))
    return EulerCollection(
        labels=tuple(labels),
        classes=classes,
        form=tuple(tuple(int(x) for x in row) for row in gram),
        levels=tuple(levels) if levels is not None else None,
    )


def projective_collection(tab: AlgebraTable, lv: LevelledStructure) -> EulerCollection:
    """The projectives in level order, with the Cartan matrix as Euler form."""
    gram = cartan_matrix(tab, order=lv.order).as_lists()
    labels = [f"P({v})" for v in lv.order]
    levels = [lv.s[v] for v in lv.order]
    return from_gram(labels, gram, levels)


def _mutate_class_left(form: Mat, e: Vec, x: Vec) -> Vec:
    c = _pair(form, e, x)
    return tuple(c * e[k] - x[k] for k in range(len(x)))


def _mutate_class_right(form: Mat, e: Vec, x: Vec) -> Vec:
    c = _pair(form, x, e)
    return tuple(c * e[k] - x[k] for k in range(len(x)))


def left_mutate(c: EulerCollection, i: int) -> EulerCollection:
    """Replace (E_{i-1}, E_i) by (L_{E_{i-1}} E_i, E_{i-1})."""
    if not 0 < i <= len(c) - 1:
        raise MutationError(f"index {i} out of range for left mutation")
    e, x = c.classes[i - 1], c.classes[i]
    new_classes = list(c.classes)
    new_labels = list(c.labels)
    new_classes[i - 1] = _mutate_class_left(c.form, e, x)
    new_classes[i] = e
    new_labels[i - 1] = f"L[{c.labels[i - 1]}]({c.labels[i]})"
    new_labels[i] = c.labels[i - 1]
    return EulerCollection(tuple(new_labels), tuple(new_classes), c.form, None)


def right_mutate(c: EulerCollection, i: int) -> EulerCollection:
    """Replace (E_i, E_{i+1}) by (E_{i+1}, R_{E_{i+1}} E_i)."""
    if not 0 <= i < len(c) - 1:
        raise MutationError(f"index {i} out of range for right mutation")
    x, e = c.classes[i], c.classes[i + 1]
    new_classes = list(c.classes)
    new_labels = list(c.labels)
    new_classes[i] = e
    new_classes[i + 1] = _mutate_class_right(c.form, e, x)
    new_labels[i] = c.labels[i + 1]
    new_labels[i + 1] = f"R[{c.labels[i + 1]}]({c.labels[i]})"
    return EulerCollection(tuple(new_labels), tuple(new_classes), c.form, None)


def _right_through_block(form: Mat, block: List[Vec], x: Vec) -> Vec:
    # one triangle against the whole block: cone of the total coevaluation,
    # a single shift per block (members of a level block are orthogonal)
    out = [-x[k] for k in range(len(x))]
    for e in block:
        c = _pair(form, x, e)
        for k in range(len(x)):
            out[k] += c * e[k]
    return tuple(out)


def _left_through_block(form: Mat, block: List[Vec], x: Vec) -> Vec:
    # cone of the total evaluation map from the block, one shift per block
    out = [-x[k] for k in range(len(x))]
    for e in block:
        c = _pair(form, e, x)
        for k in range(len(x)):
            out[k] += c * e[k]
    return tuple(out)


def levelled_mutate_right(c: EulerCollection, level: int) -> EulerCollection:
    """Swap level blocks (i, i+1), mutating block i through the whole block i+1."""
    blocks = c.blocks()
    if not 0 <= level < len(blocks) - 1:
        raise MutationError(f"level {level} out of range for right levelled mutation")
    bi, bnext = blocks[level], blocks[level + 1]
    evecs = [c.classes[k] for k in bnext]
    order: List[Tuple[str, Vec]] = []
    for lev, block in enumerate(blocks):
        if lev == level:
            for k in bnext:
                order.append((c.labels[k], c.classes[k]))
        elif lev == level + 1:
            for k in bi:
                order.append(
                    (f"R[{level + 1}]({c.labels[k]})", _right_through_block(c.form, evecs, c.classes[k]))
                )
        else:
            for k in block:
                order.append((c.labels[k], c.classes[k]))
    sizes = [len(b) for b in blocks]
    sizes[level], sizes[level + 1] = sizes[level + 1], sizes[level]
    levels = tuple(lev for lev, size in enumerate(sizes) for _ in range(size))
    return EulerCollection(
        tuple(lbl for lbl, _ in order), tuple(v for _, v in order), c.form, levels
    )


def levelled_mutate_left(c: EulerCollection, level: int) -> EulerCollection:
    """Swap level blocks (i-1, i), mutating block i through the whole block i-1."""
    blocks = c.blocks()
    if not 0 < level < len(blocks):
        raise MutationError(f"level {level} out of range for left levelled mutation")
    bi, bprev = blocks[level], blocks[level - 1]
    evecs = [c.classes[k] for k in bprev]
    order: List[Tuple[str, Vec]] = []
    for lev, block in enumerate(blocks):
        if lev == level - 1:
            for k in bi:
                order.append(
                    (f"L[{level - 1}]({c.labels[k]})", _left_through_block(c.form, evecs, c.classes[k]))
                )
        elif lev == level:
            for k in bprev:
                order.append((c.labels[k], c.classes[k]))
        else:
            for k in block:
                order.append((c.labels[k], c.classes[k]))
    sizes = [len(b) for b in blocks]
    sizes[level - 1], sizes[level] = sizes[level], sizes[level - 1]
    levels = tuple(lev for lev, size in enumerate(sizes) for _ in range(size))
    return EulerCollection(
        tuple(lbl for lbl, _ in order), tuple(v for _, v in order), c.form, levels
    )


def left_dual(c: EulerCollection) -> EulerCollection:
    """(L^n B_n, ..., B_0), emitted in reversed position order."""
    blocks = c.blocks()
    n = len(blocks) - 1
    entries: List[Tuple[str, Vec, int]] = []
    for b in range(n, -1, -1):
        lower = [[c.classes[k] for k in blocks[lev]] for lev in range(b)]
        for k in reversed(blocks[b]):
            x = c.classes[k]
            for lev in range(b - 1, -1, -1):
                x = _left_through_block(c.form, lower[lev], x)
            entries.append((f"L^{b}({c.labels[k]})", x, n - b))
    return EulerCollection(
        tuple(lbl for lbl, _, _ in entries),
        tuple(v for _, v, _ in entries),
        c.form,
        tuple(lev for _, _, lev in entries),
    )


def right_dual(c: EulerCollection) -> EulerCollection:
    """(B_n, R^1 B_{n-1}, ..., R^n B_0), emitted in reversed position order."""
    blocks = c.blocks()
    n = len(blocks) - 1
    entries: List[Tuple[str, Vec, int]] = []
    for b in range(n, -1, -1):
        upper = [[c.classes[k] for k in blocks[lev]] for lev in range(len(blocks))]
        for k in reversed(blocks[b]):
            x = c.classes[k]
            for lev in range(b + 1, n + 1):
                x = _right_through_block(c.form, upper[lev], x)
            entries.append((f"R^{n - b}({c.labels[k]})", x, n - b))
    return EulerCollection(
        tuple(lbl for lbl, _, _ in entries),
        tuple(v for _, v, _ in entries),
        c.form,
        tuple(lev for _, _, lev in entries),
    )


# ---------------------------------------------------------------------------
# shifted simples and the Coxeter relation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ShiftedSimples:
    labels: Tuple[str, ...]
    gram: Mat
    collection: EulerCollection


def shifted_simples_collection(tab: AlgebraTable, lv: LevelledStructure,
                               table: Optional[ExtTable] = None) -> ShiftedSimples:
    """(S_m[-s(m)], ..., S_0) with its Hom Gram matrix read off the Ext table.

    Position i corresponds to the vertex at reversed level-order position i;
    Gram[i][j] = dim Ext^{s(a)-s(b)}(S_b, S_a) for a, b the vertices at
    positions i, j.
    """
    if table is None:
        from .findim import nilpotency_index

        bound = max(lv.n, nilpotency_index(tab), len(tab.vertices()))
        table = ext_table(tab, bound)
    if table.truncated:
        raise MutationError("Ext table truncated; shifted-simples Gram inconclusive")
    rev = list(reversed(lv.order))
    m = len(rev)
    gram = tuple(
        tuple(
            table.dim(lv.s[rev[i]] - lv.s[rev[j]], rev[j], rev[i]) if lv.s[rev[i]] >= lv.s[rev[j]] else 0
            for j in range(m)
        )
        for i in range(m)
    )
    for i in range(m):
        assert gram[i][i] == 1
    gramC = cartan_matrix(tab, order=lv.order).as_lists()
    inv = _unitriangular_inverse(gramC)
    classes = []
    labels = []
    levels = []
    for i, v in enumerate(rev):
        pos = lv.order.index(v)
        sgn = -1 if lv.s[v] % 2 else 1
        classes.append(tuple(sgn * inv[r][pos] for r in range(m)))
        labels.append(f"S({v})[{-lv.s[v]}]")
        levels.append(lv.n - lv.s[v])
    coll = EulerCollection(
        tuple(labels),
        tuple(classes),
        tuple(tuple(r) for r in gramC),
        tuple(levels),
    )
    return ShiftedSimples(labels=tuple(labels), gram=gram, collection=coll)


def _unitriangular_inverse(g: List[List[int]]) -> List[List[int]]:
    # plain Gauss-Jordan; the matrices here are small
    m = len(g)
    frac = [[Fraction(x) for x in row] for row in g]
    inv = [[Fraction(1 if i == j else 0) for j in range(m)] for i in range(m)]
    aug = [frac[i] + inv[i] for i in range(m)]
    rrows, piv = linalg.rref(aug)
    if piv != list(range(m)):
        raise MutationError("matrix not invertible")
    out = []
    for i in range(m):
        row = rrows[i][m:]
        if any(x.denominator != 1 for x in row):
            raise MutationError("inverse not integral")
        out.append([int(x) for x in row])
    return out


def coxeter_transformation(form: Mat) -> List[List[Fraction]]:
    """Matrix C with chi(Y, SX) = chi(X, Y); C = G^{-1} G^T for the form G."""
    m = len(form)
    g = [[Fraction(form[i][j]) for j in range(m)] for i in range(m)]
    gt = [[Fraction(form[j][i]) for j in range(m)] for i in range(m)]
    aug = [g[i] + gt[i] for i in range(m)]
    rrows, piv = linalg.rref(aug)
    if piv != list(range(m)):
        raise MutationError("Euler form is degenerate")
    return [row[m:] for row in rrows]


@dataclass
class CoxeterVerdict:
    ok: bool
    failures: List[str]


def coxeter_check(c: EulerCollection) -> CoxeterVerdict:
    """Classwise R^{n-s(i)}(E) = S_m^{-1} L^{s(i)}(E) on the Euler lattice.

    S_m is the Serre transform composed with the shift [-m]; on classes the
    shift contributes the global sign (-1)^m, m+1 the collection length.
    """
    if c.levels is None:
        raise MutationError("collection has no levels")
    mat = [[Fraction(x) for x in row] for row in c.classes]
    rr, piv = linalg.rref(mat)
    if len(piv) != len(c.classes[0]) or len(rr) != len(c):
        raise MutationError("collection not full")
    blocks = c.blocks()
    n = len(blocks) - 1
    m = len(c) - 1
    cox = coxeter_transformation(c.form)
    sign = -1 if m % 2 else 1
    failures = []
    for idx in range(len(c)):
        lam = c.levels[idx]
        x = c.classes[idx]
        rv = x
        for lev in range(lam + 1, n + 1):
            rv = _right_through_block(c.form, [c.classes[k] for k in blocks[lev]], rv)
        lv_ = x
        for lev in range(lam - 1, -1, -1):
            lv_ = _left_through_block(c.form, [c.classes[k] for k in blocks[lev]], lv_)
        # solve C * t = lv_, then compare rv with sign * t
        msize = len(lv_)
        aug = [list(cox[i]) + [Fraction(lv_[i])] for i in range(msize)]
        rrows, piv2 = linalg.rref(aug)
        if piv2 != list(range(msize)):
            raise MutationError("Coxeter transform not invertible")
        t = [rrows[i][msize] for i in range(msize)]
        if any(Fraction(rv[i]) != sign * t[i] for i in range(msize)):
            failures.append(
                f"object {c.labels[idx]}: R-side {list(rv)} != S_m^-1 L-side"
            )
    return CoxeterVerdict(ok=not failures, failures=failures)
