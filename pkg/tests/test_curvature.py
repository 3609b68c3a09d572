"""Flag curvature: implicit operators, oracles, the commutative fast path."""

from fractions import Fraction

import numpy as np
import pytest

from flagcurv.liealg import AlgebraSpec, realize
from flagcurv.coset import SubalgebraSpec, build_coset, preset
from flagcurv.norms import Quadratic, Randers, random_invariant_norm
from flagcurv.curvature import (
    CurvatureEngine,
    bi_invariant_oracle,
    connection_n,
    eta,
    exclusion_witness_pair,
    flag_curvature,
    flag_curvature_commutative,
    normal_homogeneous_oracle,
    riemann_quadratic,
    sample_flags,
    u_map,
    verify_exclusion_witness,
)


@pytest.fixture(scope="module")
def su2_group():
    alg = realize(AlgebraSpec((("A", 1, Fraction(1)),)))
    return build_coset(alg, SubalgebraSpec(), name="su(2) group")


@pytest.fixture(scope="module")
def su3_group():
    alg = realize(AlgebraSpec((("A", 2, Fraction(1)),)))
    return build_coset(alg, SubalgebraSpec(), name="su(3) group")


@pytest.fixture(scope="module")
def bn2():
    return preset("bn_excluded_subcase1", 2)


@pytest.fixture(scope="module")
def un3():
    return preset("sphere_un", 3)


def test_eta_vanishes_for_bi_invariant_metric(su3_group):
    norm = Quadratic(np.eye(su3_group.dim_m))
    rng = np.random.default_rng(0)
    for _ in range(5):
        u = rng.standard_normal(su3_group.dim_m)
        assert np.linalg.norm(eta(su3_group, norm, u)) < 1e-10


def test_eta_vanishes_on_central_pole_with_invariant_norm(un3):
    norm = random_invariant_norm(un3, 4)
    u = un3.to_m(un3.embed(un3.t_m[0]))
    assert np.linalg.norm(eta(un3, norm, u)) < 1e-8


def test_eta_nonzero_for_generic_randers(un3):
    b = un3.to_m(un3.embed(un3.t_m[0]))
    norm = Randers(np.eye(un3.dim_m), 0.25 * b / np.linalg.norm(b))
    rng = np.random.default_rng(1)
    u = rng.standard_normal(un3.dim_m)
    assert np.linalg.norm(eta(un3, norm, u)) > 1e-4


def test_connection_equals_u_map_on_eligible_pair(bn2):
    norm = random_invariant_norm(bn2, 7)
    u, v = exclusion_witness_pair(bn2, norm)
    nv = connection_n(bn2, norm, u, v)
    uv = u_map(bn2, norm, u, v)
    assert np.linalg.norm(nv - uv) < 1e-9


def test_connection_vanishes_on_commuting_cartan_pair(su3_group):
    norm = Quadratic(np.eye(su3_group.dim_m))
    t1 = su3_group.to_m(su3_group.embed(su3_group.t_m[0]))
    t2 = su3_group.to_m(su3_group.embed(su3_group.t_m[1]))
    assert np.linalg.norm(connection_n(su3_group, norm, t1, t2)) < 1e-9


def test_connection_is_linear_in_the_direction(bn2):
    norm = random_invariant_norm(bn2, 3)
    rng = np.random.default_rng(2)
    u = rng.standard_normal(bn2.dim_m)
    w1 = rng.standard_normal(bn2.dim_m)
    w2 = rng.standard_normal(bn2.dim_m)
    a, b = 0.7, -1.3
    lhs = connection_n(bn2, norm, u, a * w1 + b * w2)
    rhs = a * connection_n(bn2, norm, u, w1) + b * connection_n(bn2, norm, u, w2)
    assert np.linalg.norm(lhs - rhs) < 1e-9


def test_riemann_quadratic_vanishes_on_pole(su3_group, bn2):
    for sp, seed in ((su3_group, 0), (bn2, 1)):
        norm = random_invariant_norm(sp, seed)
        rng = np.random.default_rng(seed)
        u = rng.standard_normal(sp.dim_m)
        assert abs(riemann_quadratic(sp, norm, u, u)) < 1e-8


def test_riemann_quadratic_bi_invariant_oracle(su3_group):
    norm = Quadratic(np.eye(su3_group.dim_m))
    alg = su3_group.algebra
    rng = np.random.default_rng(3)
    for _ in range(10):
        u = rng.standard_normal(su3_group.dim_m)
        w = rng.standard_normal(su3_group.dim_m)
        q = riemann_quadratic(su3_group, norm, u, w)
        br = alg.bracket(su3_group.from_m(u), su3_group.from_m(w))
        assert abs(q - 0.25 * alg.inner(br, br)) < 1e-9 * max(1.0, abs(q))


def test_round_sphere_quadratic_form_and_positivity():
    sp = preset("sphere_so2n", 3)
    norm = Quadratic(np.eye(sp.dim_m))
    rng = np.random.default_rng(4)
    for _ in range(10):
        u = rng.standard_normal(sp.dim_m)
        w = rng.standard_normal(sp.dim_m)
        q = riemann_quadratic(sp, norm, u, w)
        uu, ww, uw = u @ u, w @ w, u @ w
        assert abs(q - (uu * ww - uw ** 2)) < 1e-8 * max(1.0, abs(q))
        assert q >= -1e-8


@pytest.mark.parametrize("seed", [0, 1])
def test_flag_curvature_oracles(su2_group, su3_group, seed):
    rng = np.random.default_rng(seed)
    for sp in (su2_group, su3_group):
        norm = Quadratic(np.eye(sp.dim_m))
        for _ in range(20):
            u = rng.standard_normal(sp.dim_m)
            v = rng.standard_normal(sp.dim_m)
            try:
                rep = flag_curvature(sp, norm, u, v)
            except ValueError:
                continue
            oracle = bi_invariant_oracle(sp, u, v)
            assert abs(rep.k - oracle) <= 1e-6 * max(abs(oracle), 1e-9)


def test_normal_homogeneous_oracle_agreement(un3):
    sp2 = preset("sphere_so2n", 3)
    rng = np.random.default_rng(5)
    for sp in (un3, sp2):
        norm = Quadratic(np.eye(sp.dim_m))
        for _ in range(15):
            u = rng.standard_normal(sp.dim_m)
            v = rng.standard_normal(sp.dim_m)
            try:
                rep = flag_curvature(sp, norm, u, v)
            except ValueError:
                continue
            oracle = normal_homogeneous_oracle(sp, u, v)
            assert abs(rep.k - oracle) <= 1e-6 * max(abs(oracle), 1e-9)


def test_flag_curvature_well_defined(bn2):
    norm = random_invariant_norm(bn2, 6)
    rng = np.random.default_rng(6)
    u = rng.standard_normal(bn2.dim_m)
    v = rng.standard_normal(bn2.dim_m)
    k0 = flag_curvature(bn2, norm, u, v).k
    for c in (0.5, -2.0):
        k1 = flag_curvature(bn2, norm, u, v + c * u).k
        assert abs(k1 - k0) < 1e-8 * max(1.0, abs(k0))
    for lam in (0.5, 3.0):
        k2 = flag_curvature(bn2, norm, u, lam * v).k
        assert abs(k2 - k0) < 1e-8 * max(1.0, abs(k0))


def test_flag_curvature_scale_covariance(bn2):
    norm = random_invariant_norm(bn2, 8)
    rng = np.random.default_rng(7)
    u = rng.standard_normal(bn2.dim_m)
    v = rng.standard_normal(bn2.dim_m)
    k0 = flag_curvature(bn2, norm, u, v).k
    for lam in (2.0, 5.0):
        k1 = flag_curvature(bn2, norm.rescale(lam), u, v).k
        assert abs(k1 - k0 / lam ** 2) < 1e-8 * max(1.0, abs(k0))


def test_degenerate_flag_rejected(bn2):
    norm = Quadratic(np.eye(bn2.dim_m))
    u = np.zeros(bn2.dim_m)
    u[0] = 1.0
    with pytest.raises(ValueError, match="degenerate"):
        flag_curvature(bn2, norm, u, 2.0 * u)


def test_u_map_examples(bn2):
    norm = random_invariant_norm(bn2, 9)
    u, v = exclusion_witness_pair(bn2, norm)
    # eta(u) = 0 forces U(u, u) = 0
    uu = u_map(bn2, norm, u, u)
    assert np.linalg.norm(uu) < 1e-9
    assert np.linalg.norm(u_map(bn2, norm, u, v)) < 1e-7


def test_commutative_formula_gates(bn2):
    norm = random_invariant_norm(bn2, 10)
    rng = np.random.default_rng(8)
    u = rng.standard_normal(bn2.dim_m)
    v = rng.standard_normal(bn2.dim_m)
    with pytest.raises(ValueError, match="inapplicable"):
        flag_curvature_commutative(bn2, norm, u, v)


def test_commutative_formula_nonnegative_and_cross_checked(bn2):
    for seed in range(4):
        rep = verify_exclusion_witness(bn2, seed)
        assert rep["u_map_norm"] < 1e-7
        assert rep["K_commutative"] >= -1e-8
        assert abs(rep["K_commutative"]) < 1e-6
        assert abs(rep["K_general"]) < 1e-6


@pytest.mark.parametrize("name,params", [
    ("bn_excluded_subcase1", (2,)),
    ("bn_excluded_subcase1", (3,)),
    ("a1a1_diagonal", (1,)),
    ("a1a1_diagonal", (2,)),
    ("cn_excluded_subcase1", (3,)),
])
def test_zero_curvature_witnesses(name, params):
    sp = preset(name, *params)
    rep = verify_exclusion_witness(sp, 0)
    assert rep["u_map_norm"] < 1e-7
    assert abs(rep["K_commutative"]) < 1e-6
    assert abs(rep["K_general"]) < 1e-6


def test_witness_holds_for_any_pole_in_the_plane(bn2):
    """The exclusion argument allows any pole in the first witness plane,
    with the direction re-gauged against it."""
    rng = np.random.default_rng(13)
    norm = random_invariant_norm(bn2, 31)
    eng = CurvatureEngine(bn2, norm)
    fu, ru = bn2.witness_planes["u"]
    fv, rv_ = bn2.witness_planes["v"]
    ub = bn2.plane_m_part(fu, ru)
    vb = bn2.plane_m_part(fv, rv_)
    for _ in range(5):
        c = rng.standard_normal(2)
        u = c[0] * ub[0] + c[1] * ub[1]
        u = u / np.linalg.norm(u)
        uprime = -c[1] * ub[0] + c[0] * ub[1]
        g = norm.gram(u)
        a = float(uprime @ g @ vb[0])
        b = float(uprime @ g @ vb[1])
        v = b * vb[0] - a * vb[1]
        if np.linalg.norm(v) < 1e-12:
            v = vb[0]
        rep = eng.flag_curvature_commutative(u, v / np.linalg.norm(v))
        assert abs(rep.k) < 1e-6 and abs(rep.cross_check_k) < 1e-6


def test_sampling_report_shape(bn2):
    norm = random_invariant_norm(bn2, 12)
    rep = sample_flags(bn2, norm, 15, seed=1)
    assert rep["flags"] == 15
    assert rep["K_min"] <= rep["K_max"]
    rep2 = sample_flags(bn2, norm, 15, seed=1, workers=2)
    assert rep2 == rep  # worker count cannot change the report


def test_engine_requires_matching_dimension(bn2):
    with pytest.raises(ValueError, match="dim m"):
        CurvatureEngine(bn2, Quadratic(np.eye(3)))


@pytest.mark.parametrize("name,params", [
    ("berger_sp2", ()), ("sphere_spn_sp1", (2,)), ("sphere_spn_u1", (2,)),
    ("aloff_wallach", (1, 1)), ("sphere_un", (3,)), ("sphere_so2n", (3,)),
])
def test_surviving_spaces_positively_curved_under_normal_metric(name, params):
    """Sampled flag curvature of the normal homogeneous metric stays
    strictly positive on every surviving preset."""
    sp = preset(name, *params)
    rep = sample_flags(sp, Quadratic(np.eye(sp.dim_m)), 60, seed=0)
    assert rep["K_min"] > 1e-3, (sp.name, rep["K_min"])
    assert not rep["zero_flags"]


def test_scaled_inner_product_consistency():
    from fractions import Fraction
    from flagcurv.liealg import inner
    from flagcurv.coset import lift_root, tvec_dot
    from flagcurv.rootsys import rv
    spec = AlgebraSpec((("B", 2, Fraction(3, 2)),))
    alg = realize(spec)
    v = lift_root(spec, 0, rv(1, 1))
    w = lift_root(spec, 0, rv(1, 0))
    got = inner(alg.cartan_embed(list(v.factors)), alg.cartan_embed(list(w.factors)))
    assert abs(got - float(tvec_dot(spec, v, w))) < 1e-12
