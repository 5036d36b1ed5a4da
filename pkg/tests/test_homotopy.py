import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from posetcoh.corpus import homotopic_pairs, random_loop, shortest_vertex_path, winding_zero_loops, Model
from posetcoh.homotopy import (
    PathFrame,
    build_path_frame,
    cyclic_reduce,
    deform_into_complement,
    free_reduce,
    h1_invariants,
    homotopic_bfs,
    inverse_word,
    loop_class,
    loop_generator,
    presentation,
    raw_h1_invariants,
    word_to_str,
)
from posetcoh.poset import (
    Poset,
    PosetError,
    build_circle_poset,
    build_directed_interval_poset,
    build_graph_interval_poset,
    disjoint_union,
    figure_eight_graph,
)
from posetcoh.simplicial import Path, Simplex1, SimplexError, compose_paths, concat, degenerate, path_from_vertices, reverse_path, reverse_simplex
from posetcoh.smith import abelian_invariants, smith_diagonal

from oracles import order_complex_betti1

# b1 over Q, F2 and F3 of each model's order complex (tests/oracles.py), frozen
MODELS = {
    "circle(4,2)": (build_circle_poset(4, 2), 1),
    "circle(5,3)": (build_circle_poset(5, 3), 1),
    "circle(6,4)": (build_circle_poset(6, 4), 1),
    "circle(8,4)": (build_circle_poset(8, 4), 1),
    "fig8(2)": (build_graph_interval_poset(figure_eight_graph(), 2), 2),
    "fig8(3)": (build_graph_interval_poset(figure_eight_graph(), 3), 2),
    "directed(5)": (build_directed_interval_poset(5), 0),
}


@pytest.mark.parametrize("name", list(MODELS))
def test_oracle_betti_numbers_frozen(name):
    p, b1 = MODELS[name]
    assert order_complex_betti1(p.leq) == b1
    assert order_complex_betti1(p.leq, 2) == b1


@pytest.mark.parametrize("name", list(MODELS))
def test_h1_matches_oracle_for_every_pole(name):
    p, b1 = MODELS[name]
    rng = np.random.default_rng(7)
    for pole in rng.choice(p.n, size=3, replace=False):
        g = presentation(p, build_path_frame(p, int(pole)))
        assert h1_invariants(g) == (b1, [])
        assert raw_h1_invariants(g) == (b1, [])
        assert g.is_free
        assert len(g.generators) == b1


def test_h1_independent_of_tree_choice():
    p, _ = MODELS["fig8(3)"]
    for seed in range(3):
        for strategy in ("bfs", "dfs"):
            f = build_path_frame(p, 4, seed=seed, strategy=strategy)
            assert h1_invariants(presentation(p, f)) == (2, [])


def test_frame_basic_contract():
    p = build_directed_interval_poset(3)
    o = p.index("[0,0]")
    f = build_path_frame(p, o)
    assert f.path(o) == Path((degenerate(o),))
    for a in range(p.n):
        assert (f.path(a).start, f.path(a).end) == (o, a)
        for b in f.path(a).steps:
            assert b.support in (b.face0, b.face1)  # inclusion steps only
    assert build_path_frame(p, o).tree == f.tree


def test_frame_covers_circle():
    p = build_circle_poset(6, 4)
    f = build_path_frame(p, 0)
    assert len(f.tree) == p.n - 1
    assert {f.path(a).end for a in range(p.n)} == set(range(p.n))


def test_frame_rejects_disconnected():
    d = build_directed_interval_poset(3)
    with pytest.raises(PosetError):
        build_path_frame(disjoint_union(d, d), 0)


def test_frame_json_roundtrip():
    p = build_circle_poset(6, 4)
    f = build_path_frame(p, 5, seed=1)
    g = PathFrame.from_json(p, f.to_json())
    assert g.tree == f.tree and g.pole == 5
    assert all(g.path(a) == f.path(a) for a in range(p.n))


def test_tree_loops_are_trivial():
    for name, (p, _) in MODELS.items():
        f = build_path_frame(p, 0)
        g = presentation(p, f)
        for u, l in f.tree:
            assert loop_class(g, loop_generator(f, Simplex1(u, u, l))) == (), name
        assert loop_class(g, loop_generator(f, degenerate(0))) == ()


def test_off_tree_generator_is_nontrivial_on_circle():
    p = build_circle_poset(6, 4)
    f = build_path_frame(p, 0)
    g = presentation(p, f)
    (u, l), = g.generator_pairs
    assert loop_class(g, loop_generator(f, Simplex1(u, u, l))) in ((g.generators[0] + 1,), (-(g.generators[0] + 1),))


def test_presentation_text():
    p = build_circle_poset(4, 2)
    g = presentation(p, build_path_frame(p, 0))
    text = g.to_text(p.labels)
    assert text.startswith("generators 1\n")
    assert "relations 0" in text
    assert len(g.raw_relations) == len(p.chains(strict=True)) + p.n - 1


def test_word_helpers():
    assert free_reduce((1, 2, -2, -1, 3)) == (3,)
    assert cyclic_reduce((-1, 2, 1)) == (2,)
    assert inverse_word((1, -2)) == (2, -1)
    assert word_to_str(()) == "e"
    assert word_to_str((1, -2)) == "g0*g1^-1"


def test_path_word_is_a_homomorphism(rng):
    p, _ = MODELS["fig8(2)"]
    f = build_path_frame(p, 0)
    g = presentation(p, f)
    a = random_loop(p, 0, 6, rng)
    b = random_loop(p, 0, 5, rng)
    assert loop_class(g, compose_paths(b, a)) == free_reduce(loop_class(g, b) + loop_class(g, a))
    assert loop_class(g, reverse_path(a)) == inverse_word(loop_class(g, a))


# ---------------------------------------------------------------------------
# Smith normal form


def _sympy_invariants(rows, n):
    if not rows:
        return (n, [])
    diag = smith_normal_form(Matrix(rows), domain=ZZ)
    d = [abs(int(diag[i, i])) for i in range(min(diag.shape)) if diag[i, i] != 0]
    return (n - len(d), sorted(x for x in d if x > 1))


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 6), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_smith_matches_sympy(n_rows, n_cols, seed):
    rng = np.random.default_rng(seed)
    rows = rng.integers(-6, 7, size=(n_rows, n_cols)).tolist()
    assert abelian_invariants(rows, n_cols) == _sympy_invariants(rows, n_cols)


def test_smith_known_cases():
    assert smith_diagonal([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]) == [2, 6, 12]
    assert abelian_invariants([[2, 0], [0, 3]], 2) == (0, [6])
    assert abelian_invariants([], 3) == (3, [])
    assert abelian_invariants([[0, 0]], 2) == (2, [])


def test_projective_plane_torsion():
    # <a | a^2>  ->  Z/2
    assert abelian_invariants([[2]], 1) == (0, [2])


# ---------------------------------------------------------------------------
# homotopy oracle


def test_bfs_identical_and_single_step():
    p = build_circle_poset(4, 2)
    q = path_from_vertices(p, [0, 1, 2])  # arc(0,1) < arc(0,2) > arc(1,1)
    assert homotopic_bfs(p, q, q).verdict == "yes"
    assert homotopic_bfs(p, q, q).depth == 0
    s = p.index("arc(0,2)")
    b = Simplex1(s, p.index("arc(0,1)"), p.index("arc(1,1)"))
    split = Path((Simplex1(s, s, b.face1), reverse_simplex(Simplex1(s, s, b.face0))))
    v = homotopic_bfs(p, Path((b,)), split)
    assert v.verdict == "yes" and v.depth == 1


def test_bfs_endpoint_mismatch():
    p = build_circle_poset(4, 2)
    with pytest.raises(SimplexError):
        homotopic_bfs(p, path_from_vertices(p, [0, 1]), path_from_vertices(p, [1, 0]))


def test_bfs_different_winding_not_certified():
    p = build_circle_poset(4, 2)
    f = build_path_frame(p, 0)
    g = presentation(p, f)
    (u, l), = g.generator_pairs
    gen = loop_generator(f, Simplex1(u, u, l))
    trivial = Path((degenerate(0),))
    v = homotopic_bfs(p, gen, trivial, budget=2000)
    assert v.verdict == "no-within-budget"
    assert v.expanded <= 2000


def test_bfs_certifies_generated_pairs(rng):
    p = build_circle_poset(4, 2)
    g = presentation(p, build_path_frame(p, 0))
    for p1, p2 in homotopic_pairs(p, 20, rng):
        assert homotopic_bfs(p, p1, p2).verdict == "yes"


def test_bfs_yes_implies_equal_loop_class(rng):
    p = build_circle_poset(4, 2)
    f = build_path_frame(p, 0)
    g = presentation(p, f)
    for p1, p2 in homotopic_pairs(p, 20, rng):
        if p1.start != 0:
            continue
        back = path_from_vertices(p, shortest_vertex_path(p, p1.end, 0))
        assert loop_class(g, compose_paths(back, p1)) == loop_class(g, compose_paths(back, p2))


def test_complement_already_inside():
    p = build_circle_poset(6, 2)
    o = p.index("arc(0,1)")
    a = p.index("arc(3,1)")
    loop = path_from_vertices(p, [a, p.index("arc(3,2)"), a])
    res = deform_into_complement(p, loop, o)
    assert res.verdict == "found" and res.path == loop and res.expanded == 0


def test_complement_near_o_found():
    model = Model.build("c62", build_circle_poset(6, 2))
    p = model.poset
    o = p.index("arc(0,1)")
    rng = np.random.default_rng(3)
    for loop in winding_zero_loops(model, o, 5, rng):
        res = deform_into_complement(p, loop, o)
        assert res.verdict == "found"
        assert all(p.disjoint[o, b.support] for b in res.path.steps)
        # same class once both are conjugated back to the pole
        to_base = model.frame.path(loop.start)
        back = reverse_path(to_base)
        assert loop_class(model.presentation, concat(to_base, res.path, back)) == ()


def test_complement_budget_never_lies():
    p = build_circle_poset(6, 2)
    f = build_path_frame(p, p.index("arc(3,1)"))
    g = presentation(p, f)
    (u, l), = g.generator_pairs
    winding = loop_generator(f, Simplex1(u, u, l))
    # a winding loop cannot avoid any unit arc: the search must run dry
    res = deform_into_complement(p, winding, p.index("arc(0,1)"), budget=300)
    assert res.verdict == "no-within-budget" and res.path is None


def test_complement_preconditions():
    p = build_circle_poset(6, 2)
    o = p.index("arc(0,1)")
    with pytest.raises(SimplexError):
        deform_into_complement(p, Path((degenerate(o),)), o)
    q = Poset(p.labels, p.leq)
    with pytest.raises(PosetError):
        deform_into_complement(q, Path((degenerate(3),)), o)
