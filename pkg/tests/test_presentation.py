import random
from fractions import Fraction

import pytest

from tiltforge.presentation import (
    Arrow,
    CompositionError,
    GradedPresentation,
    ParseError,
    Quiver,
    Relation,
    compose_paths,
    export_dot,
    parse,
    path_degree,
    serialize,
    validate_presentation,
)
from tiltforge.skewgroup import arrow_id


def test_trivial_path_is_identity(fix5):
    q = fix5["pres"].quiver
    p = q.path([arrow_id(1, 0)])
    assert compose_paths(q.trivial_path("0"), p) == p
    assert compose_paths(p, q.trivial_path("1")) == p


def test_closed_cycle_in_5_122(fix5):
    # x1 x2 x3 from vertex 0: 1 + 2 + 2 = 5 = 0 mod 5
    q = fix5["pres"].quiver
    p = q.path([arrow_id(1, 0), arrow_id(2, 1), arrow_id(3, 3)])
    assert p.source == p.target == "0"
    assert p.length == 3


def test_two_step_composition_endpoint_oracle(fix5):
    # oracle: endpoint of x1 then x1 from i is (i + a1 + a1) mod r
    q = fix5["pres"].quiver
    for i in range(5):
        p = q.path([arrow_id(1, i)])
        s = q.path([arrow_id(1, (i + 1) % 5)])
        assert compose_paths(p, s).target == str((i + 1 + 1) % 5)


def test_noncomposable_raises(fix5):
    q = fix5["pres"].quiver
    p = q.path([arrow_id(1, 0)])
    with pytest.raises(CompositionError):
        compose_paths(p, p)


def test_path_degree_trivial_and_cycles(fix5, fix4):
    pres5 = fix5["pres"]
    assert path_degree(pres5, pres5.quiver.trivial_path("3")) == 0
    for start in range(5):
        ids = []
        v = start
        for j, w in ((1, 1), (2, 2), (3, 2)):
            ids.append(arrow_id(j, v))
            v = (v + w) % 5
        assert path_degree(pres5, pres5.quiver.path(ids)) == 2
    pres4 = fix4["pres"]
    for start in range(4):
        ids = []
        v = start
        for j, w in ((1, 1), (2, 1), (3, 3), (4, 3)):
            ids.append(arrow_id(j, v))
            v = (v + w) % 4
        assert path_degree(pres4, pres4.quiver.path(ids)) == 2


def test_path_degree_additive_under_composition(fix5):
    pres = fix5["pres"]
    q = pres.quiver
    rng = random.Random(7)
    arrows_from = {v: [a for a in q.arrows if a.source == v] for v in q.vertices}
    for _ in range(50):
        v = rng.choice(q.vertices)
        ids = []
        for _ in range(rng.randint(1, 4)):
            a = rng.choice(arrows_from[v])
            ids.append(a.id)
            v = a.target
        cut = rng.randint(1, len(ids))
        p, s = q.path(ids[:cut]), (q.path(ids[cut:]) if ids[cut:] else q.trivial_path(v))
        whole = compose_paths(p, s)
        assert path_degree(pres, whole) == path_degree(pres, p) + path_degree(pres, s)


def test_validate_fixture_presentations(fix5, fix4):
    assert validate_presentation(fix5["pres"]).ok
    assert validate_presentation(fix4["pres"]).ok
    assert validate_presentation(fix5["nabla"]).ok
    assert validate_presentation(fix4["nabla"]).ok


def test_validate_flags_inhomogeneous_relation():
    q = Quiver(("0", "1"), (Arrow("a", "0", "1", "a"), Arrow("b", "0", "1", "b")))
    pres = GradedPresentation(
        quiver=q,
        degree={"a": 0, "b": 1},
        relations=(Relation(((Fraction(1), q.path(["a"])), (Fraction(-1), q.path(["b"])))),),
    )
    report = validate_presentation(pres)
    assert not report.ok
    assert any("inhomogeneous" in p for p in report.problems)


def test_validate_flags_non_parallel_relation():
    q = Quiver(("0", "1", "2"), (Arrow("a", "0", "1", "a"), Arrow("b", "0", "2", "b")))
    pres = GradedPresentation(
        quiver=q,
        degree={"a": 0, "b": 0},
        relations=(Relation(((Fraction(1), q.path(["a"])), (Fraction(-1), q.path(["b"])))),),
    )
    report = validate_presentation(pres)
    assert not report.ok
    assert any("non-parallel" in p for p in report.problems)


def test_roundtrip_fixture(fix5):
    pres = fix5["pres"]
    assert parse(serialize(pres)) == pres
    nabla = fix5["nabla"]
    assert parse(serialize(nabla)) == nabla


def test_roundtrip_empty():
    empty = GradedPresentation(quiver=Quiver((), ()), degree={}, relations=())
    assert serialize(empty) == ""
    assert parse("") == empty


def _random_presentation(rng):
    nv = rng.randint(1, 5)
    vertices = tuple(f"v{i}" for i in range(nv))
    arrows = []
    for k in range(rng.randint(0, 7)):
        arrows.append(
            Arrow(f"a{k}", rng.choice(vertices), rng.choice(vertices), f"a{k}")
        )
    q = Quiver(vertices, tuple(arrows))
    degree = {a.id: rng.randint(0, 2) for a in arrows}
    pres0 = GradedPresentation(quiver=q, degree=degree, relations=())
    # group length-2 paths into (slice, degree) buckets and draw relations
    buckets = {}
    for a in arrows:
        for b in arrows:
            if a.target == b.source:
                key = (a.source, b.target, degree[a.id] + degree[b.id])
                buckets.setdefault(key, []).append((a.id, b.id))
    relations = []
    for key, paths in sorted(buckets.items()):
        if len(paths) >= 2 and rng.random() < 0.6:
            chosen = rng.sample(paths, 2)
            coeffs = [Fraction(rng.randint(1, 5)), Fraction(-rng.randint(1, 5))]
            relations.append(
                Relation(tuple((c, q.path(list(p))) for c, p in zip(coeffs, chosen)))
            )
    return GradedPresentation(quiver=q, degree=degree, relations=tuple(relations))


def test_roundtrip_random_presentations():
    rng = random.Random(20240809)
    for _ in range(120):
        pres = _random_presentation(rng)
        assert parse(serialize(pres)) == pres


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as exc:
        parse("vertex 0\narrow oops\n")
    assert exc.value.line == 2


def test_dot_export_counts_final_nabla(fix4):
    dot = export_dot(fix4["nabla"])
    nodes = [l for l in dot.splitlines() if "shape=circle" in l]
    edges = [l for l in dot.splitlines() if "->" in l]
    assert len(nodes) == 8
    assert len(edges) == 24
    # folded presentations carry the path-length grading: all arrows bold
    assert all("style=bold" in l for l in edges)


def test_dot_marks_degree_one_arrows_only(fix5):
    dot = export_dot(fix5["pres"])
    bold = [l for l in dot.splitlines() if "style=bold" in l]
    plain = [l for l in dot.splitlines() if "->" in l and "style=bold" not in l]
    assert len(bold) == 10
    assert len(plain) == 5
