import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from posetcoh.algebra import NotAFactorError, NotInAlgebraError, generated_algebra, trace_state
from posetcoh.cocycle import equivalent, evaluate, gauge_transform, random_unitary, trivial_cocycle, validate
from posetcoh.corpus import PAULI_X, PAULI_Y, PAULI_Z, pauli_cocycle, phase_cocycle, random_cocycle, random_loop
from posetcoh.holonomy import (
    RelationError,
    character,
    character_table,
    conjugate_cocycle,
    connect_charge,
    from_rep,
    holonomy_algebra,
    holonomy_matrices,
    holonomy_report,
    reduced_words,
    topological_dimension,
    word_matrix,
)
from posetcoh.homotopy import loop_generator
from posetcoh.simplicial import Path, Simplex1, concat, degenerate, reverse_path
from posetcoh.splitting import topological_component

from oracles import matrix_closure_dim


def _norm(a):
    return float(np.linalg.norm(a, ord=2))


def _gauge(model, d, rng):
    return np.stack([random_unitary(d, rng) for _ in range(model.poset.n)])


def _generator_loop(model, k):
    u, l = model.presentation.generator_pairs[k]
    return loop_generator(model.frame, Simplex1(u, u, l))


def test_generated_algebra_examples():
    one = generated_algebra([np.eye(3)])
    assert one.dim == 1 and one.is_factor and one.commutant_dim == 9
    full = generated_algebra([PAULI_X, PAULI_Z])
    assert full.dim == 4 and full.is_factor and full.commutant_dim == 1
    assert full.blocks == ((2, 1),)
    diag = generated_algebra([np.diag([1, -1])])
    assert diag.dim == 2 and not diag.is_factor and diag.center_dim == 2
    assert diag.blocks == ((1, 1), (1, 1))


def test_generated_algebra_with_multiplicity():
    a = generated_algebra([np.kron(PAULI_X, np.eye(2)), np.kron(PAULI_Z, np.eye(2))])
    assert a.dim == 4 and a.is_factor and a.commutant_dim == 4
    assert a.blocks == ((2, 2),)
    assert a.contains(np.kron(PAULI_Y, np.eye(2)))
    assert not a.contains(np.kron(np.eye(2), PAULI_X))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3), st.integers(1, 3))
def test_closure_dimension_matches_word_oracle(seed, d, k):
    rng = np.random.default_rng(seed)
    mats = []
    for _ in range(k):
        # mix in diagonal and permutation-like generators so proper subalgebras show up
        kind = int(rng.integers(3))
        if kind == 0:
            mats.append(np.diag(np.exp(1j * rng.choice([0.0, np.pi / 2, np.pi], size=d))))
        elif kind == 1:
            mats.append(np.eye(d)[rng.permutation(d)].astype(np.complex128))
        else:
            mats.append(random_unitary(d, rng))
    assert generated_algebra(mats).dim == matrix_closure_dim(mats)


def test_algebra_invariant_under_unitary_conjugation(rng):
    mats = [np.diag([1, 1j, -1]), np.eye(3)[[1, 0, 2]]]
    a = generated_algebra(mats)
    v = random_unitary(3, rng)
    b = generated_algebra([v @ m @ v.conj().T for m in mats])
    assert (a.dim, a.center_dim, a.commutant_dim, a.blocks) == (b.dim, b.center_dim, b.commutant_dim, b.blocks)


def test_trace_state():
    full = generated_algebra([PAULI_X, PAULI_Z])
    assert trace_state(full, PAULI_X) == 0
    assert trace_state(full, np.eye(2)) == 1
    a, b = PAULI_X @ PAULI_Z, (PAULI_Y + np.eye(2)) / 2
    assert abs(trace_state(full, a @ b) - trace_state(full, b @ a)) < 1e-14
    with pytest.raises(NotAFactorError):
        trace_state(generated_algebra([np.diag([1, -1])]), np.eye(2))
    with pytest.raises(NotInAlgebraError):
        trace_state(generated_algebra([np.eye(2)]), PAULI_X)


def test_topological_dimension(fig8, circle64):
    assert topological_dimension(pauli_cocycle(fig8), fig8.frame) == 2
    assert topological_dimension(phase_cocycle(circle64, 1.0), circle64.frame) == 1
    assert topological_dimension(trivial_cocycle(circle64.poset, 3), circle64.frame) == 1
    z = from_rep(fig8.poset, fig8.frame, fig8.sigma(PAULI_Z, np.diag([1, 1j])))
    with pytest.raises(NotAFactorError):
        topological_dimension(z, fig8.frame)


def test_topological_dimension_with_multiplicity(fig8):
    z = from_rep(fig8.poset, fig8.frame, fig8.sigma(np.kron(PAULI_X, np.eye(3)), np.kron(PAULI_Z, np.eye(3))))
    assert topological_dimension(z, fig8.frame) == 2
    assert holonomy_algebra(z, fig8.frame).blocks == ((2, 3),)


def test_phase_character(circle64):
    theta = 2 * np.pi / 3
    z = phase_cocycle(circle64, theta)
    loop = _generator_loop(circle64, 0)
    c = character(z, circle64.frame, loop)
    assert abs(abs(c) - 1) < 1e-12
    assert min(abs(c - np.exp(1j * theta)), abs(c - np.exp(-1j * theta))) < 1e-12
    assert abs(character(z, circle64.frame, Path((degenerate(circle64.frame.pole),))) - 1) < 1e-14


def test_character_rejects_unbased_loop(circle64):
    z = phase_cocycle(circle64, 0.5)
    other = (circle64.frame.pole + 1) % circle64.poset.n
    with pytest.raises(ValueError):
        character(z, circle64.frame, Path((degenerate(other),)))


def test_pauli_commutator_character(fig8):
    table = character_table(pauli_cocycle(fig8), fig8.frame, max_len=4)
    assert abs(table["g0*g1*g0^-1*g1^-1"] + 1) < 1e-12
    assert abs(table["e"] - 1) < 1e-14
    assert abs(table["g0"]) < 1e-14 and abs(table["g0*g0"] - 1) < 1e-14


def test_character_is_a_class_function(fig8, rng):
    z = random_cocycle(fig8, 2, rng)
    f = fig8.frame
    a, b = _generator_loop(fig8, 0), _generator_loop(fig8, 1)
    x = character(z, f, concat(a, b))
    y = character(z, f, concat(b, concat(a, b), reverse_path(b)))
    assert abs(x - y) < 1e-12


def test_reduced_words_count():
    # 1 + 4 + 4*3 + 4*9 reduced words of length <= 3 on two generators
    words = list(reduced_words(2, 3))
    assert len(words) == 1 + 4 + 12 + 36
    assert len(set(words)) == len(words)
    assert word_matrix((1, -1), {0: PAULI_X}, 2).tolist() == np.eye(2).tolist()


def test_conjugate_cocycle(circle64, fig8, rng):
    theta = 0.7
    z = phase_cocycle(circle64, theta)
    zc = conjugate_cocycle(z)
    assert validate(zc).valid
    loop = _generator_loop(circle64, 0)
    assert abs(character(zc, circle64.frame, loop) - np.conj(character(z, circle64.frame, loop))) < 1e-14
    real = from_rep(fig8.poset, fig8.frame, fig8.sigma(PAULI_X, PAULI_Z))
    assert np.array_equal(conjugate_cocycle(real).values, real.values)
    # Y is imaginary, but -Y = X Y X: the conjugate is gauge-equivalent
    y = from_rep(fig8.poset, fig8.frame, fig8.sigma(PAULI_Y, PAULI_Z))
    assert equivalent(y, conjugate_cocycle(y), fig8.frame) is not None


def test_from_rep_identity_is_trivial(fig8):
    z = from_rep(fig8.poset, fig8.frame, fig8.sigma(np.eye(2), np.eye(2)))
    assert np.allclose(z.values, trivial_cocycle(fig8.poset, 2).values)


def test_from_rep_reproduces_matrices(fig8, rng):
    a, b = random_unitary(3, rng), random_unitary(3, rng)
    z = from_rep(fig8.poset, fig8.frame, fig8.sigma(a, b))
    assert validate(z).valid
    hol = holonomy_matrices(z, fig8.frame)
    pairs = fig8.presentation.generator_pairs
    assert _norm(hol[pairs[0]] - a) < 1e-12 and _norm(hol[pairs[1]] - b) < 1e-12


def test_from_rep_errors(fig8, circle64):
    with pytest.raises(RelationError):
        from_rep(fig8.poset, fig8.frame, {fig8.presentation.generator_pairs[0]: PAULI_X})
    with pytest.raises(RelationError):
        from_rep(fig8.poset, fig8.frame, fig8.sigma(PAULI_X, np.eye(3)))
    with pytest.raises(RelationError):
        from_rep(fig8.poset, fig8.frame, fig8.sigma(PAULI_X, 2 * PAULI_Z))
    tree_pair = circle64.frame.tree[0]
    with pytest.raises(RelationError):
        from_rep(circle64.poset, circle64.frame, {**circle64.sigma(PAULI_X), tree_pair: PAULI_X})
    with pytest.raises(RelationError):
        from_rep(circle64.poset, circle64.frame, circle64.sigma(PAULI_X), dim=3)


def test_from_rep_on_simply_connected_poset(directed5):
    z = from_rep(directed5.poset, directed5.frame, {}, dim=2)
    assert z.dim == 2 and np.allclose(z.values, np.eye(2))


def test_connect_charge(circle64, rng):
    z_sigma = phase_cocycle(circle64, 0.8)
    u = gauge_transform(trivial_cocycle(circle64.poset, 2), _gauge(circle64, 2, rng))
    out = connect_charge(z_sigma, u, circle64.frame)
    assert out.dim == 2 and validate(out).valid
    h = holonomy_matrices(out, circle64.frame)
    h0 = holonomy_matrices(z_sigma, circle64.frame)
    for e in h:
        assert _norm(h[e] - h0[e][0, 0] * np.eye(2)) < 1e-12


def test_connect_charge_of_pauli(fig8, rng):
    u = gauge_transform(trivial_cocycle(fig8.poset, 1), _gauge(fig8, 1, rng))
    z = pauli_cocycle(fig8)
    out = connect_charge(z, u, fig8.frame)
    assert equivalent(topological_component(out, fig8.frame), topological_component(z, fig8.frame), fig8.frame) is not None


def test_holonomy_report_fields(fig8, circle64):
    r = holonomy_report(pauli_cocycle(fig8), fig8.frame, max_word_len=2, samples=200)
    assert r["tau"] == 2 and r["factor"] and r["algebra_dim"] == 4
    assert r["h1"] == {"rank": 2, "torsion": []}
    assert r["validation"]["valid"] and not r["coboundary"]
    assert set(r["generators"]) == {"g0", "g1"}
    assert len(r["characters"]) == 1 + 4 + 12
    q = holonomy_report(trivial_cocycle(circle64.poset, 1), circle64.frame, max_word_len=1, samples=10)
    assert q["coboundary"] and q["tau"] == 1
    z = from_rep(fig8.poset, fig8.frame, fig8.sigma(PAULI_Z, np.diag([1, 1j])))
    n = holonomy_report(z, fig8.frame, samples=10)
    assert n["tau"] is None and n["characters"] == {} and n["blocks"] == [[1, 1], [1, 1]]


def test_loop_holonomies_lie_in_algebra(fig8, rng):
    z = random_cocycle(fig8, 3, rng)
    alg = holonomy_algebra(z, fig8.frame)
    for _ in range(10):
        loop = random_loop(fig8.poset, fig8.frame.pole, int(rng.integers(3, 10)), rng)
        assert alg.contains(evaluate(z, loop))
