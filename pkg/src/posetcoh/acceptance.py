"""The nine acceptance checks, each returning a :class:`Result` with its measured numbers.

Thresholds live next to each check; the test-suite and ``posetcoh corpus``
both call :func:`run_all`.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .algebra import NotAFactorError
from .cocycle import evaluate, intertwiner_residual, intertwiner_space, is_coboundary, random_unitary, validate
from .corpus import (
    PAULI_X,
    PAULI_Z,
    Model,
    build_corpus,
    circle_model,
    directed_model,
    figure_eight_model,
    homotopic_pairs,
    pauli_cocycle,
    phase_cocycle,
    random_cocycle,
    random_loop,
    winding_zero_loops,
)
from .holonomy import (
    character,
    character_table,
    conjugate_cocycle,
    holonomy_algebra,
    topological_dimension,
)
from .homotopy import build_path_frame, deform_into_complement, h1_invariants, homotopic_bfs, loop_generator, presentation
from .net_bundle import NetConnection, transform_connection, trivialize
from .poset import build_circle_poset, build_directed_interval_poset, build_graph_interval_poset, figure_eight_graph
from .simplicial import Simplex1, concat, reverse_path
from .splitting import charge_component, embed_rho, split_join_roundtrip, topological_component

VALIDATE_TOL = 1e-9
CROSS_TOL = 1e-8
LOOP_TOL = 1e-10
SEARCH_BUDGET = 100_000


@dataclass
class Result:
    number: int
    title: str
    passed: bool
    detail: str
    metrics: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] criterion {self.number}: {self.title} ({self.detail}; {self.seconds:.2f}s)"


def _corpus(seed):
    return build_corpus(seed=seed, n_random=20)


def criterion_1(seed: int = 0) -> Result:
    rng = np.random.default_rng(seed)
    circle = circle_model(6, 4)
    worst_valid = 0.0
    all_valid = True
    for _ in range(20):
        z = random_cocycle(circle, int(rng.integers(1, 4)), rng)
        rep = validate(z, samples=1000, seed=int(rng.integers(2**31)))
        all_valid &= rep.valid
        worst_valid = max(worst_valid, rep.max_deviation)

    small = circle_model(4, 2)
    cocycles = [random_cocycle(small, d, rng) for d in (1, 2, 3, 2, 3)]
    certified = 0
    worst_path = 0.0
    while certified < 50:
        (p1, p2), = homotopic_pairs(small.poset, 1, rng)
        if not homotopic_bfs(small.poset, p1, p2, budget=SEARCH_BUDGET):
            continue
        certified += 1
        for z in cocycles:
            worst_path = max(worst_path, float(np.linalg.norm(evaluate(z, p1) - evaluate(z, p2), ord=2)))
    ok = all_valid and worst_valid <= VALIDATE_TOL and worst_path <= CROSS_TOL
    return Result(1, "cocycle identity and homotopy invariance", ok,
                  f"max validate deviation {worst_valid:.2e}, max path disagreement {worst_path:.2e} over {certified} pairs",
                  {"max_validate": worst_valid, "max_path": worst_path, "pairs": certified})


def criterion_2(seed: int = 0) -> Result:
    rng = np.random.default_rng(seed)
    model = directed_model(5)
    p = model.poset
    coboundaries = 0
    trivialized = 0
    trials = 20
    for k in range(trials):
        z = random_cocycle(model, 1 + k % 3, rng)
        # check against a frame other than the one used to build z
        f = build_path_frame(p, int(rng.integers(p.n)), seed=int(rng.integers(2**31)), strategy="dfs")
        coboundaries += validate(z, samples=200, seed=k).valid and is_coboundary(z, f) is not None
        t = np.stack([random_unitary(z.dim, rng) for _ in range(p.n)])
        c = transform_connection(NetConnection(p, z.values), t)
        trivialized += trivialize(c, f) is not None
    ok = coboundaries == trials and trivialized == trials
    return Result(2, "simply connected implies trivial", ok,
                  f"{coboundaries}/{trials} coboundaries, {trivialized}/{trials} connections trivialized",
                  {"coboundaries": coboundaries, "trivialized": trivialized, "trials": trials})


def _pole_loops(entry, rng, count=5):
    f = entry.model.frame
    gens = [loop_generator(f, Simplex1(u, u, l)) for u, l in f.off_tree_pairs()]
    loops = list(gens)
    for _ in range(count):
        loops.append(random_loop(entry.model.poset, f.pole, int(rng.integers(3, 10)), rng))
    return loops


def criterion_3(seed: int = 0) -> Result:
    rng = np.random.default_rng(seed)
    worst_rt = 0.0
    worst_loop = 0.0
    charge_ok = 0
    corpus = _corpus(seed)
    for e in corpus:
        f = e.model.frame
        worst_rt = max(worst_rt, split_join_roundtrip(e.cocycle, f))
        charge_ok += is_coboundary(charge_component(e.cocycle, f), f) is not None
        chi = topological_component(e.cocycle, f)
        for loop in _pole_loops(e, rng):
            worst_loop = max(worst_loop, float(np.linalg.norm(evaluate(chi, loop) - evaluate(e.cocycle, loop), ord=2)))
    ok = worst_rt <= CROSS_TOL and charge_ok == len(corpus) and worst_loop <= LOOP_TOL
    return Result(3, "split/join round trip", ok,
                  f"round trip {worst_rt:.2e}, {charge_ok}/{len(corpus)} charge parts trivial, loop equality {worst_loop:.2e}",
                  {"roundtrip": worst_rt, "charge_trivial": charge_ok, "corpus": len(corpus), "loop": worst_loop})


def criterion_4(seed: int = 0) -> Result:
    rng = np.random.default_rng(seed)
    models = [
        (build_circle_poset(5, 3), (1, [])),
        (build_circle_poset(6, 4), (1, [])),
        (build_circle_poset(8, 4), (1, [])),
        (build_graph_interval_poset(figure_eight_graph(), 2), (2, [])),
        (build_directed_interval_poset(5), (0, [])),
    ]
    bad = []
    checked = 0
    for p, want in models:
        for pole in rng.choice(p.n, size=3, replace=False):
            got = h1_invariants(presentation(p, build_path_frame(p, int(pole))))
            checked += 1
            if (got[0], list(got[1])) != want:
                bad.append((p.n, int(pole), got))
    return Result(4, "first homology of the bundled models", not bad,
                  f"{checked - len(bad)}/{checked} (model, pole) pairs match", {"mismatches": bad, "checked": checked})


def criterion_5(seed: int = 0) -> Result:
    fig8 = figure_eight_model(2)
    z = pauli_cocycle(fig8)
    f = fig8.frame
    rep = validate(z, samples=1000, seed=seed)
    self_dim = intertwiner_space(z, z, f).dim
    alg = holonomy_algebra(z, f)
    tau = topological_dimension(z, f, alg)
    comm = character_table(z, f, fig8.presentation, max_len=4)["g0*g1*g0^-1*g1^-1"]
    ok = rep.valid and self_dim == 1 and alg.is_factor and tau == 2 and abs(comm + 1) <= CROSS_TOL

    circle = circle_model(6, 4)
    worst_phase = 0.0
    taus = []
    (gen_pair,) = circle.presentation.generator_pairs
    gen_loop = loop_generator(circle.frame, Simplex1(gen_pair[0], gen_pair[0], gen_pair[1]))
    for theta in (np.pi / 3, 2 * np.pi / 3, 1.0):
        zt = phase_cocycle(circle, theta)
        taus.append(topological_dimension(zt, circle.frame))
        for k in range(-3, 4):
            if k == 0:
                continue
            loop = concat(*([gen_loop] * abs(k))) if k > 0 else concat(*([reverse_path(gen_loop)] * -k))
            worst_phase = max(worst_phase, abs(character(zt, circle.frame, loop) - np.exp(1j * k * theta)))
    ok = ok and taus == [1, 1, 1] and worst_phase <= CROSS_TOL
    return Result(5, "existence from a representation", ok,
                  f"Pauli: valid={rep.valid}, dim(z,z)={self_dim}, tau={tau}, commutator {comm.real:+.3f}; phases tau={taus}, winding error {worst_phase:.2e}",
                  {"self_dim": self_dim, "tau": tau, "commutator": comm, "phase_taus": taus, "phase_error": worst_phase})


def criterion_6(seed: int = 0) -> Result:
    rng = np.random.default_rng(seed)
    worst = 0.0
    tau_mismatch = []
    for e in _corpus(seed):
        f = e.model.frame
        zb = conjugate_cocycle(e.cocycle)
        a, ab = holonomy_algebra(e.cocycle, f), holonomy_algebra(zb, f)
        if a.is_factor != ab.is_factor or a.blocks != ab.blocks:
            tau_mismatch.append(e.name)
            continue
        if a.is_factor:
            if topological_dimension(e.cocycle, f, a) != topological_dimension(zb, f, ab):
                tau_mismatch.append(e.name)
            for loop in _pole_loops(e, rng):
                c, cb = character(e.cocycle, f, loop, a), character(zb, f, loop, ab)
                worst = max(worst, abs(cb - np.conj(c)))
        else:
            # tau is undefined off factors; compare the normalized traces instead
            for loop in _pole_loops(e, rng):
                d = e.cocycle.dim
                c, cb = np.trace(evaluate(e.cocycle, loop)) / d, np.trace(evaluate(zb, loop)) / d
                worst = max(worst, abs(cb - np.conj(c)))
    ok = not tau_mismatch and worst <= CROSS_TOL
    return Result(6, "conjugation invariants", ok, f"tau mismatches {tau_mismatch}, character error {worst:.2e}",
                  {"tau_mismatch": tau_mismatch, "character_error": worst})


def criterion_7(seed: int = 0) -> Result:
    mismatch = []
    schur = 0
    for e in _corpus(seed):
        f = e.model.frame
        alg = holonomy_algebra(e.cocycle, f)
        n = intertwiner_space(e.cocycle, e.cocycle, f).dim
        if n != alg.commutant_dim:
            mismatch.append((e.name, n, alg.commutant_dim))
        if alg.blocks == ((e.cocycle.dim, 1),):
            schur += 1
            if n != 1:
                mismatch.append((e.name, n, 1))
    return Result(7, "intertwiners equal the commutant", not mismatch,
                  f"{len(mismatch)} mismatches, {schur} irreducible members all with dim 1", {"mismatch": mismatch, "irreducible": schur})


def criterion_8(seed: int = 0) -> Result:
    worst_hat = 0.0
    worst_full = 0.0
    members = [e for e in _corpus(seed) if e.cocycle.dim > 1][:10]
    for e in members:
        f = e.model.frame
        z = e.cocycle
        hat = charge_component(z, f)
        alg = holonomy_algebra(z, f)
        for x in alg.basis:
            worst_hat = max(worst_hat, intertwiner_residual(embed_rho(z, f, x, alg), hat, hat))
        for x in alg.center_basis():
            worst_full = max(worst_full, intertwiner_residual(embed_rho(z, f, x, alg), z, z))
    ok = len(members) == 10 and worst_hat <= CROSS_TOL and worst_full <= CROSS_TOL
    return Result(8, "embedding of the holonomy algebra", ok,
                  f"{len(members)} cocycles, charge residual {worst_hat:.2e}, central residual {worst_full:.2e}",
                  {"members": len(members), "hat": worst_hat, "full": worst_full})


def criterion_9(seed: int = 0) -> Result:
    rng = np.random.default_rng(seed)
    model = Model.build("circle(6,2)", build_circle_poset(6, 2))
    p = model.poset
    units = [a for a in range(p.n) if p.labels[a].endswith(",1)")]
    found = 0
    total = 0
    worst = 0
    for o in units:
        for loop in winding_zero_loops(model, o, 10, rng):
            total += 1
            res = deform_into_complement(p, loop, o, budget=SEARCH_BUDGET)
            worst = max(worst, res.expanded)
            if res.verdict == "found" and all(p.disjoint[o, b.support] for b in res.path.steps):
                found += 1
    return Result(9, "deformation into the complement", found == total,
                  f"{found}/{total} loops deformed, worst search {worst} expansions", {"found": found, "total": total, "worst": worst})


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9]


def run(criterion, seed: int = 0) -> Result:
    t0 = time.perf_counter()
    try:
        res = criterion(seed)
    except (NotAFactorError, ValueError) as exc:
        n = CRITERIA.index(criterion) + 1
        res = Result(n, criterion.__name__, False, f"raised {type(exc).__name__}: {exc}")
    res.seconds = time.perf_counter() - t0
    return res


def run_all(seed: int = 0) -> list:
    return [run(c, seed) for c in CRITERIA]
