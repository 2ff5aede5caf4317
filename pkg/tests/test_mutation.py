import random
from fractions import Fraction

import pytest

from tiltforge.findim import build_algebra, cartan_matrix
from tiltforge.fixtures import kronecker_presentation
from tiltforge.homological import detect_levels
from tiltforge.mutation import (
    EulerCollection,
    MutationError,
    coxeter_check,
    coxeter_transformation,
    from_gram,
    left_dual,
    left_mutate,
    levelled_mutate_left,
    levelled_mutate_right,
    projective_collection,
    right_dual,
    right_mutate,
    shifted_simples_collection,
)


def kron_collection(kron_tab):
    lv = detect_levels(kronecker_presentation())
    return projective_collection(kron_tab, lv)


# ---------------------------------------------------------------------------
# single-object mutations
# ---------------------------------------------------------------------------

def test_orthogonal_left_mutation_is_shift():
    # chi(E, X) = 0 makes the triangle degenerate: [L_E X] = -[X]
    c = from_gram(["E", "X"], [[1, 0], [0, 1]])
    out = left_mutate(c, 1)
    assert out.classes[0] == (0, -1)
    assert out.classes[1] == (1, 0)


def test_projective_line_mutation(kron_tab):
    c = kron_collection(kron_tab)
    out = left_mutate(c, 1)
    assert out.classes[0] == (2, -1)
    assert out.chi() == ((1, 2), (0, 1))


def test_single_mutations_mutually_inverse_random():
    rng = random.Random(424242)
    checked = 0
    for _ in range(120):
        m = rng.randint(2, 5)
        gram = [[0] * m for _ in range(m)]
        for i in range(m):
            gram[i][i] = 1
            for j in range(i + 1, m):
                gram[i][j] = rng.randint(-4, 4)
        c = from_gram([f"E{i}" for i in range(m)], gram)
        i = rng.randint(1, m - 1)
        back = right_mutate(left_mutate(c, i), i - 1)
        assert back.classes == c.classes
        assert back.chi() == c.chi()
        j = rng.randint(0, m - 2)
        back = left_mutate(right_mutate(c, j), j + 1)
        assert back.classes == c.classes
        assert back.chi() == c.chi()
        checked += 1
    assert checked >= 100


def test_mutation_preserves_exceptional_shape(kron_tab):
    c = kron_collection(kron_tab)
    for out in (left_mutate(c, 1), right_mutate(c, 0)):
        assert out.exceptional_violations() == []


def test_mutation_index_errors(kron_tab):
    c = kron_collection(kron_tab)
    with pytest.raises(MutationError):
        left_mutate(c, 0)
    with pytest.raises(MutationError):
        right_mutate(c, 1)


# ---------------------------------------------------------------------------
# levelled mutations
# ---------------------------------------------------------------------------

def test_singleton_levels_reduce_to_single_mutation(kron_tab):
    c = kron_collection(kron_tab)
    blocked = levelled_mutate_right(c, 0)
    plain = right_mutate(c, 0)
    assert blocked.classes == plain.classes
    assert blocked.chi() == plain.chi()
    blocked = levelled_mutate_left(c, 1)
    plain = left_mutate(c, 1)
    assert blocked.classes == plain.classes
    assert blocked.chi() == plain.chi()


def _random_levelled_collection(rng):
    sizes = [rng.randint(1, 3) for _ in range(rng.randint(2, 4))]
    m = sum(sizes)
    levels = []
    for lev, size in enumerate(sizes):
        levels.extend([lev] * size)
    gram = [[0] * m for _ in range(m)]
    for i in range(m):
        gram[i][i] = 1
        for j in range(i + 1, m):
            if levels[i] != levels[j]:
                gram[i][j] = rng.randint(-3, 3)
    return from_gram([f"E{i}" for i in range(m)], gram, levels)


def test_levelled_mutations_preserve_levelled_invariant():
    rng = random.Random(1001)
    done = 0
    while done < 100:
        c = _random_levelled_collection(rng)
        top = max(c.levels)
        for _ in range(3):
            if rng.random() < 0.5:
                lev = rng.randint(0, top - 1)
                c = levelled_mutate_right(c, lev)
            else:
                lev = rng.randint(1, top)
                c = levelled_mutate_left(c, lev)
            assert c.exceptional_violations() == []
            done += 1


def test_levelled_right_mutation_block_formula_oracle(fix4_tab, fix4_levels):
    # oracle: one reflection per block, [R_B X] = sum chi(X,E)[E] - [X]
    c = projective_collection(fix4_tab, fix4_levels)
    out = levelled_mutate_right(c, 0)
    blocks = c.blocks()
    for pos_out, pos_in in zip(range(len(blocks[0])), blocks[0]):
        x = c.classes[pos_in]
        expected = [-v for v in x]
        for e_idx in blocks[1]:
            coeff = c.pairing(pos_in, e_idx)
            for k, ev in enumerate(c.classes[e_idx]):
                expected[k] += coeff * ev
        assert list(out.classes[len(blocks[1]) + pos_out]) == expected
    assert out.exceptional_violations() == []


def test_levelled_mutation_requires_levels(kron_tab):
    c = kron_collection(kron_tab)
    bare = EulerCollection(c.labels, c.classes, c.form, None)
    with pytest.raises(MutationError):
        levelled_mutate_right(bare, 0)


# ---------------------------------------------------------------------------
# dual collections and shifted simples
# ---------------------------------------------------------------------------

def test_single_level_duals_are_identity():
    c = from_gram(["A", "B"], [[1, 0], [0, 1]], levels=[0, 0])
    # reversed positions, but same classes as a set and same chi shape
    ld = left_dual(c)
    rd = right_dual(c)
    assert sorted(ld.classes) == sorted(c.classes)
    assert sorted(rd.classes) == sorted(c.classes)


def test_kronecker_left_dual_is_shifted_simples(kron_tab):
    c = kron_collection(kron_tab)
    ld = left_dual(c)
    assert ld.classes == ((2, -1), (1, 0))
    assert ld.chi() == ((1, 2), (0, 1))
    lv = detect_levels(kronecker_presentation())
    ss = shifted_simples_collection(kron_tab, lv)
    assert ss.gram == ((1, 2), (0, 1))
    assert ss.labels == ("S(1)[-1]", "S(0)[0]")
    assert ld.classes == ss.collection.classes


def test_triple_identity_final_example(fix4_tab, fix4_levels, fix4_dual_tab):
    lv = fix4_levels
    rev = list(reversed(lv.order))
    cartan_dual = cartan_matrix(fix4_dual_tab, order=rev).as_lists()
    coll = projective_collection(fix4_tab, lv)
    gram_ld = [list(r) for r in left_dual(coll).chi()]
    ss = shifted_simples_collection(fix4_tab, lv)
    ext_gram = [list(r) for r in ss.gram]
    assert gram_ld == ext_gram == cartan_dual
    assert left_dual(coll).classes == ss.collection.classes
    # the right dual carries the same endomorphism data
    assert [list(r) for r in right_dual(coll).chi()] == cartan_dual


def test_shifted_simples_semisimple():
    from tiltforge.presentation import GradedPresentation, Quiver

    pres = GradedPresentation(quiver=Quiver(("0", "1"), ()), degree={}, relations=())
    tab = build_algebra(pres)
    lv = detect_levels(pres)
    ss = shifted_simples_collection(tab, lv)
    assert ss.gram == ((1, 0), (0, 1))


# ---------------------------------------------------------------------------
# Coxeter relation
# ---------------------------------------------------------------------------

def test_coxeter_single_object():
    c = from_gram(["E"], [[1]], levels=[0])
    assert coxeter_check(c).ok


def test_coxeter_kronecker_frozen_arithmetic(kron_tab):
    # frozen 2x2 oracle: G = [[1,2],[0,1]], C = G^-1 G^T = [[-3,-2],[2,1]]
    c = kron_collection(kron_tab)
    cox = coxeter_transformation(c.form)
    assert [[int(x) for x in row] for row in cox] == [[-3, -2], [2, 1]]
    # R^1(E0) = 2[E1] - [E0]; S_m^-1 L^0(E0) = -C^-1 [E0] with C^-1 = [[1,2],[-2,-3]]
    assert coxeter_check(c).ok


def test_coxeter_final_example(fix4_tab, fix4_levels):
    c = projective_collection(fix4_tab, fix4_levels)
    verdict = coxeter_check(c)
    assert verdict.ok, verdict.failures


def test_coxeter_requires_full_collection():
    c = EulerCollection(
        labels=("A", "B"),
        classes=((1, 0, 0), (0, 1, 0)),
        form=((1, 0, 0), (0, 1, 0), (0, 0, 1)),
        levels=(0, 1),
    )
    with pytest.raises(MutationError):
        coxeter_check(c)
