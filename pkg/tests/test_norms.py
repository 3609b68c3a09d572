"""Minkowski norms: values, Hessians, Cartan tensors, invariance."""

import itertools

import numpy as np
import pytest

from flagcurv.coset import preset
from flagcurv.norms import (
    GenericNorm,
    Quadratic,
    Quartic,
    Randers,
    cartan,
    check_invariance,
    evaluate,
    g_inner,
    fd_cartan,
    fd_g_inner,
    invariant_quadratic_space,
    norm_from_json,
    norm_to_json_str,
    random_invariant_norm,
)

RNG = np.random.default_rng(2024)


def _pd_matrix(d, rng):
    a = rng.standard_normal((d, d))
    return a @ a.T + 0.5 * np.eye(d)


def test_evaluate_examples():
    nq = Quadratic(np.eye(3))
    assert abs(evaluate(nq, [1.0, 0.0, 0.0]) - 1.0) < 1e-15
    nr = Randers(np.eye(2), np.array([0.2, 0.0]))
    assert abs(evaluate(nr, [1.0, 0.0]) - 1.2) < 1e-15
    n4 = Quartic([1.0, 1.0], [np.eye(2), np.eye(2)])
    assert abs(evaluate(n4, [1.0, 0.0]) - 2.0 ** 0.25) < 1e-15
    assert evaluate(nq, [0.0, 0.0, 0.0]) == 0.0
    y, u, v, w = (np.arange(1.0, 3.0), np.ones(2), np.eye(2)[0], np.eye(2)[1])
    assert abs(g_inner(nr, y, u, v) - nr.g_inner(y, u, v)) < 1e-15
    assert abs(cartan(nr, y, u, v, w) - nr.cartan3(y, u, v, w)) < 1e-15


def test_quadratic_gram_is_constant():
    q = _pd_matrix(4, RNG)
    n = Quadratic(q)
    for _ in range(3):
        y = RNG.standard_normal(4)
        assert np.allclose(n.gram(y), q)
        assert n.cartan3(y, RNG.standard_normal(4), y, y) == 0.0


@pytest.mark.parametrize("make", [
    lambda d: Quadratic(_pd_matrix(d, RNG)),
    lambda d: Randers(_pd_matrix(d, RNG), 0.1 * RNG.standard_normal(d)),
    lambda d: Quartic(0.5 + RNG.random(2), [_pd_matrix(d, RNG) for _ in range(2)]),
])
def test_euler_identity_and_homogeneity(make):
    d = 5
    norm = make(d)
    for _ in range(5):
        y = RNG.standard_normal(d)
        assert abs(norm.g_inner(y, y, y) - norm.value(y) ** 2) < 1e-9
        for lam in (0.5, 2.0, 10.0):
            assert abs(norm.value(lam * y) - lam * norm.value(y)) \
                < 1e-12 * lam * norm.value(y)


def test_quartic_gram_against_fd_oracle():
    d = 5
    norm = Quartic([1.0, 0.7], [_pd_matrix(d, RNG) for _ in range(2)])
    for _ in range(8):
        y = RNG.standard_normal(d)
        u = RNG.standard_normal(d)
        v = RNG.standard_normal(d)
        cf = norm.g_inner(y, u, v)
        fd = fd_g_inner(norm, y, u, v)
        assert abs(cf - fd) < 1e-7 * max(1.0, abs(cf))


def test_randers_gram_and_cartan_against_fd():
    d = 4
    norm = Randers(_pd_matrix(d, RNG), 0.15 * RNG.standard_normal(d))
    for _ in range(6):
        y, u, v, w = (RNG.standard_normal(d) for _ in range(4))
        assert abs(norm.g_inner(y, u, v) - fd_g_inner(norm, y, u, v)) < 1e-8
        assert abs(norm.cartan3(y, u, v, w) - fd_cartan(norm, y, u, v, w)) < 1e-6


def test_cartan_symmetry_and_base_annihilation():
    d = 4
    for norm in (Randers(np.eye(d), np.array([0.2, 0, 0, 0.0])),
                 Quartic([1.0, 1.0], [_pd_matrix(d, RNG) for _ in range(2)])):
        for _ in range(4):
            y, u, v, w = (RNG.standard_normal(d) for _ in range(4))
            vals = [norm.cartan3(y, *perm) for perm in itertools.permutations((u, v, w))]
            assert max(vals) - min(vals) < 1e-8 * max(1.0, abs(vals[0]))
            assert abs(norm.cartan3(y, y, v, w)) < 1e-9


def test_positive_definiteness_sampled():
    d = 5
    norms = [
        Quadratic(_pd_matrix(d, RNG)),
        Randers(np.eye(d), np.array([0.4, 0.2, 0, 0, 0.0])),
        Quartic([1.0, 0.3], [_pd_matrix(d, RNG) for _ in range(2)]),
    ]
    for norm in norms:
        for _ in range(100):
            y = RNG.standard_normal(d)
            assert np.linalg.eigvalsh(norm.gram(y)).min() > 0


def test_randers_bound_enforced():
    with pytest.raises(ValueError, match="positive definiteness"):
        Randers(np.eye(2), np.array([1.1, 0.0]))


def test_reversibility_flags():
    d = 3
    assert Quadratic(np.eye(d)).reversible
    assert Quartic([1.0], [np.eye(d)]).reversible
    nr = Randers(np.eye(d), np.array([0.3, 0, 0.0]))
    assert not nr.reversible
    y = RNG.standard_normal(d)
    assert abs(nr.value(y) - nr.value(-y)) > 1e-3
    n4 = Quartic([1.0, 2.0], [_pd_matrix(d, RNG), _pd_matrix(d, RNG)])
    assert n4.value(y) == n4.value(-y)


def test_generic_norm_fd_fallback():
    d = 3
    q = _pd_matrix(d, RNG)
    ref = Quadratic(q)
    gen = GenericNorm(ref.value, d, reversible=True)
    y, u, v, w = (RNG.standard_normal(d) for _ in range(4))
    assert abs(gen.g_inner(y, u, v) - ref.g_inner(y, u, v)) < 1e-6
    assert abs(gen.cartan3(y, u, v, w)) < 1e-5


def test_hessian_undefined_at_origin():
    n = Quartic([1.0], [np.eye(3)])
    with pytest.raises(ValueError, match="origin"):
        n.gram(np.zeros(3))


def test_json_roundtrip():
    d = 3
    for norm in (Quadratic(_pd_matrix(d, RNG)),
                 Randers(np.eye(d), np.array([0.1, 0, 0.0])),
                 Quartic([1.0, 2.0], [np.eye(d), _pd_matrix(d, RNG)])):
        back = norm_from_json(__import__("json").loads(norm_to_json_str(norm)))
        y = RNG.standard_normal(d)
        assert abs(back.value(y) - norm.value(y)) < 1e-12


@pytest.fixture(scope="module")
def bn2():
    return preset("bn_excluded_subcase1", 2)


def test_check_invariance_levels(bn2):
    quad = Quadratic(np.eye(bn2.dim_m))
    assert check_invariance(quad, bn2)["max_residual"] < 1e-9
    inv = random_invariant_norm(bn2, 11)
    assert check_invariance(inv, bn2)["max_residual"] < 1e-7
    bad = Quartic([1.0], [np.diag([2.0] + [1.0] * (bn2.dim_m - 1))])
    assert check_invariance(bad, bn2)["max_residual"] > 1e-3


def test_random_invariant_norm_determinism_and_reversibility(bn2):
    n1 = random_invariant_norm(bn2, 42)
    n2 = random_invariant_norm(bn2, 42)
    assert norm_to_json_str(n1) == norm_to_json_str(n2)
    assert norm_to_json_str(random_invariant_norm(bn2, 43)) != norm_to_json_str(n1)
    assert n1.reversible
    y = RNG.standard_normal(bn2.dim_m)
    assert n1.value(y) == n1.value(-y)
    assert np.linalg.eigvalsh(n1.gram(y)).min() > 0


def test_invariant_quadratics_commute_with_isotropy(bn2):
    _, _, kh = bn2.structure_tensors()
    for s in invariant_quadratic_space(bn2):
        for a in kh:
            assert np.abs(a @ s - s @ a).max() < 1e-9


def _block_orthogonality(space, norm, u, blocks):
    g = norm.gram(u)
    worst = 0.0
    for (i, bi), (j, bj) in itertools.combinations(list(enumerate(blocks)), 2):
        for x in bi:
            for y in bj:
                worst = max(worst, abs(x @ g @ y))
    return worst


def test_hat_blocks_orthogonal_at_central_pole(bn2):
    """For u in the zero block, the hat decomposition is orthogonal for the
    Hessian inner product of any invariant norm."""
    norm = random_invariant_norm(bn2, 5)
    hat = bn2.hat_decomposition()
    rng = np.random.default_rng(0)
    for _ in range(5):
        c = rng.standard_normal(len(hat.blocks[0].basis))
        u = sum(ci * bi for ci, bi in zip(c, hat.blocks[0].basis))
        u = u / np.linalg.norm(u)
        worst = _block_orthogonality(bn2, norm, u, [b.basis for b in hat.blocks])
        assert worst < 1e-7


def test_hat_block_pole_orthogonal_to_center(bn2):
    """For u inside a nonzero hat block of a reversible invariant norm, the
    block is Hessian-orthogonal to the zero block (odd-multiple rule)."""
    norm = random_invariant_norm(bn2, 9)
    hat = bn2.hat_decomposition()
    g0 = hat.blocks[0].basis
    blk = hat.blocks[1].basis
    rng = np.random.default_rng(1)
    for _ in range(5):
        c = rng.standard_normal(len(blk))
        u = sum(ci * bi for ci, bi in zip(c, blk))
        u = u / np.linalg.norm(u)
        g = norm.gram(u)
        worst = max(abs(x @ g @ y) for x in blk for y in g0)
        assert worst < 1e-7


def test_even_multiple_blocks_may_couple():
    """On the Berger space the projection ladder has an even multiple; the
    odd-multiple orthogonality applies to the odd levels."""
    sp = preset("berger_sp2")
    norm = random_invariant_norm(sp, 3)
    hat = sp.hat_decomposition()
    # blocks: g0, then levels 1, 2, 3 of the base projection
    lvl = {1: hat.blocks[1].basis, 2: hat.blocks[2].basis, 3: hat.blocks[3].basis}
    rng = np.random.default_rng(2)
    c = rng.standard_normal(2)
    u = sum(ci * bi for ci, bi in zip(c, lvl[1]))
    u = u / np.linalg.norm(u)
    g = norm.gram(u)
    for k in (1, 3):  # odd multiples of the pole's level are orthogonal to g0
        worst = max(abs(x @ g @ y) for x in lvl[k] for y in hat.blocks[0].basis)
        assert worst < 1e-7
