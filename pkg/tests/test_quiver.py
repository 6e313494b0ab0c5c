import numpy as np
import pytest

from path_oracle import algebra_dimension, loewy_length, projective_dimensions_by_vertex
from qalg.errors import (
    DuplicateArrow,
    NonParallelRelation,
    NotAdmissible,
    TooManyPaths,
    UnknownArrow,
)
from qalg.quiver import (
    Arrow,
    Path,
    Quiver,
    Relation,
    compile_presentation,
    trivial_path,
)

from conftest import a2_presentation, example1_presentation, example2_presentation


def as_arrow_triples(quiver):
    return [(a.name, a.source, a.target) for a in quiver.arrows]


def test_quiver_validation():
    with pytest.raises(DuplicateArrow):
        Quiver(2, [Arrow("a", 1, 2), Arrow("a", 2, 1)])
    with pytest.raises(UnknownArrow):
        Quiver(2, [Arrow("a", 1, 3)])


def test_path_from_names_composability():
    quiver = Quiver(3, [Arrow("a", 1, 2), Arrow("b", 2, 3), Arrow("c", 1, 3)])
    path = quiver.path_from_names(["a", "b"])
    assert path == Path(1, 3, (0, 1))
    assert quiver.path_from_names(["b", "a"]) is None
    with pytest.raises(UnknownArrow):
        quiver.path_from_names(["z"])


def test_a2_compiles_to_dimension_three(a2_algebra):
    A = a2_algebra
    assert A.dim == 3
    assert A.nilpotency == 2
    assert [(p.source, p.target, p.arrows) for p in A.basis] == [
        (1, 1, ()),
        (1, 2, (0,)),
        (2, 2, ()),
    ]


def test_semisimple_point_algebra():
    A = compile_presentation(Quiver(3, []), [])
    assert A.dim == 3
    assert A.nilpotency == 1
    assert A.loewy_length() == 1
    assert A.radical_ideal().dim == 0


def test_example1_dimension_against_oracle(ex1):
    A, words = ex1
    expected = algebra_dimension(A.quiver.n, as_arrow_triples(A.quiver), words)
    assert expected == 59
    assert A.dim == 59
    assert A.nilpotency == 9
    assert A.loewy_length() == 9


def test_example1_projective_dims_against_oracle(ex1):
    A, words = ex1
    oracle = projective_dimensions_by_vertex(A.quiver.n, as_arrow_triples(A.quiver), words)
    assert A.dims_of_projectives() == oracle
    assert oracle[1] == 12
    assert oracle[2] == 9
    assert oracle[10] == 1


def test_example2_dimension_against_oracle(ex2):
    A, words = ex2
    expected = algebra_dimension(A.quiver.n, as_arrow_triples(A.quiver), words)
    assert expected == 35
    assert A.dim == 35
    assert A.nilpotency == 6
    assert A.loewy_length() == 6
    assert loewy_length(A.quiver.n, as_arrow_triples(A.quiver), words) == 6
    assert A.dims_of_projectives()[7] == 2


def test_idempotents_multiply_like_units(ex1_algebra):
    A = ex1_algebra
    e1, e2 = A.idempotent(1), A.idempotent(2)
    assert np.array_equal(A.multiply(e1, e1), e1)
    assert not A.multiply(e1, e2).any()
    one = A.unit()
    a2 = A.arrow_element(1)
    assert np.array_equal(A.multiply(one, a2), a2)
    assert np.array_equal(A.multiply(a2, one), a2)


def test_loop_squares_to_zero(ex1_algebra):
    A = ex1_algebra
    loop = A.arrow_element(0)
    assert loop.any()
    assert not A.multiply(loop, loop).any()


def test_path_unit_laws_in_a2(a2_algebra):
    A = a2_algebra
    a = A.arrow_element(0)
    assert np.array_equal(A.multiply(A.idempotent(1), a), a)
    assert np.array_equal(A.multiply(a, A.idempotent(2)), a)


def test_associativity_on_random_triples(ex1_algebra, ex2_algebra):
    for A, seed in ((ex1_algebra, 5), (ex2_algebra, 6)):
        rng = np.random.default_rng(seed)
        for _ in range(200):
            x, y, z = (rng.integers(0, A.p, size=A.dim) for _ in range(3))
            left = A.multiply(A.multiply(x, y), z)
            right = A.multiply(x, A.multiply(y, z))
            assert np.array_equal(left, right)


def test_unit_is_two_sided(ex2_algebra):
    A = ex2_algebra
    one = A.unit()
    rng = np.random.default_rng(11)
    for _ in range(20):
        x = rng.integers(0, A.p, size=A.dim)
        assert np.array_equal(A.multiply(one, x), x % A.p)
        assert np.array_equal(A.multiply(x, one), x % A.p)


def test_radical_is_nilpotent_of_index_n(ex1_algebra):
    A = ex1_algebra
    rad = A.radical_ideal()
    assert rad.dim == A.dim - A.quiver.n
    assert rad.verify_two_sided()
    power = rad.rows
    for _ in range(A.nilpotency - 1):
        products = [A.multiply(x, y) for x in power for y in rad.rows]
        power = A.gf.row_space(np.vstack([np.zeros((0, A.dim), dtype=np.int64), *[
            pr.reshape(1, -1) for pr in products
        ]]))
    assert power.shape[0] == 0  # rad^N = 0
    # and rad^(N-1) != 0
    power = rad.rows
    for _ in range(A.nilpotency - 2):
        products = [A.multiply(x, y) for x in power for y in rad.rows]
        power = A.gf.row_space(np.vstack([pr.reshape(1, -1) for pr in products]))
    assert power.shape[0] > 0


def test_two_sided_closure_of_idempotent(a2_algebra):
    A = a2_algebra
    ideal = A.two_sided_closure([A.idempotent(1)])
    assert ideal.dim == 2  # e1 and the arrow through vertex 1
    assert ideal.contains(A.arrow_element(0))


def test_two_sided_closure_of_nothing(a2_algebra):
    assert a2_algebra.two_sided_closure([]).dim == 0


def test_two_sided_closure_of_loop_is_one_dimensional(ex1_algebra):
    A = ex1_algebra
    ideal = A.two_sided_closure([A.arrow_element(0)])
    assert ideal.dim == 1
    assert ideal.contains(A.arrow_element(0))
    assert ideal.verify_two_sided()


def test_unknown_arrow_in_relation():
    quiver = Quiver(2, [Arrow("a", 1, 2)])
    bogus = Relation(((1, Path(1, 2, (4, 4))),))
    with pytest.raises(UnknownArrow):
        compile_presentation(quiver, [bogus])


def test_non_parallel_relation_rejected():
    quiver = Quiver(3, [Arrow("a", 1, 2), Arrow("b", 2, 3), Arrow("c", 2, 1)])
    ab = quiver.path_from_names(["a", "b"])
    ac = quiver.path_from_names(["a", "c"])
    with pytest.raises(NonParallelRelation):
        compile_presentation(quiver, [Relation(((1, ab), (1, ac)))])


def test_short_relation_rejected():
    quiver = Quiver(2, [Arrow("a", 1, 2)])
    with pytest.raises(NonParallelRelation):
        compile_presentation(quiver, [Relation(((1, Path(1, 2, (0,))),))])


def test_loop_without_relations_is_not_admissible():
    quiver = Quiver(1, [Arrow("a", 1, 1)])
    with pytest.raises(NotAdmissible):
        compile_presentation(quiver, [], max_length=12)


def test_path_explosion_is_an_error_not_a_truncation():
    quiver = Quiver(1, [Arrow(f"l{i}", 1, 1) for i in range(6)])
    with pytest.raises(TooManyPaths):
        compile_presentation(quiver, [], max_length=10, path_cap=5000)


def test_homogeneous_combination_relation():
    # a*b = -c*d forces a 2-term reduction; dim = 4 trivial + 4 arrows + 1 class
    quiver = Quiver(3, [Arrow("a", 1, 2), Arrow("b", 2, 3), Arrow("c", 1, 2), Arrow("d", 2, 3)])
    ab = quiver.path_from_names(["a", "b"])
    cd = quiver.path_from_names(["c", "d"])
    A = compile_presentation(quiver, [Relation(((1, ab), (1, cd)))])
    # paths of length 2: ab, ad, cb, cd with one linear relation among them
    assert A.dim == 3 + 4 + 3
    vec_ab = A.path_normal_form(ab)
    vec_cd = A.path_normal_form(cd)
    assert np.array_equal((vec_ab + vec_cd) % A.p, np.zeros(A.dim, dtype=np.int64))


def test_loop_nilpotency_degree():
    quiver = Quiver(1, [Arrow("x", 1, 1)])
    xx = quiver.path_from_names(["x", "x", "x"])
    A = compile_presentation(quiver, [Relation(((1, xx),))])
    assert A.dim == 3  # e, x, x^2
    assert A.nilpotency == 3
    x = A.arrow_element(0)
    x2 = A.multiply(x, x)
    assert x2.any()
    assert not A.multiply(x2, x).any()


def test_compile_is_deterministic(ex1):
    A, _ = ex1
    quiver, relations, _ = example1_presentation()
    B = compile_presentation(quiver, relations)
    assert [p.arrows for p in A.basis] == [p.arrows for p in B.basis]
    assert A.basis == B.basis


def test_trivial_path_roundtrip(ex1_algebra):
    A = ex1_algebra
    for v in A.quiver.vertices:
        vec = A.path_normal_form(trivial_path(v))
        assert vec.sum() == 1
        assert vec[A.basis_index[trivial_path(v)]] == 1
