"""Matrix realizations: brackets, the invariant inner product, root planes."""

import itertools
from fractions import Fraction

import numpy as np
import pytest

from flagcurv.liealg import (
    AlgebraSpec,
    Quaternion,
    bracket,
    cartan_embed,
    gram_schmidt,
    inner,
    realize,
)
from flagcurv.rootsys import rv

TOL = 1e-12


@pytest.fixture(scope="module")
def algebras():
    return {
        (fam, rk): realize(AlgebraSpec(((fam, rk, Fraction(1)),)))
        for fam, rk in [("A", 3), ("B", 3), ("C", 3), ("D", 4)]
    }


def test_quaternion_algebra():
    i = Quaternion(0, 1, 0, 0)
    j = Quaternion(0, 0, 1, 0)
    k = Quaternion(0, 0, 0, 1)
    assert i * j == k and j * k == i and k * i == j
    a = Quaternion(1, 2, -1, 0.5)
    b = Quaternion(-2, 0, 3, 1)
    c = Quaternion(0.5, 1, 1, -3)
    lhs = (a * b) * c
    rhs = a * (b * c)
    assert abs(lhs.w - rhs.w) < TOL and abs(lhs.x - rhs.x) < TOL
    ab = (a * b).conj()
    ba = b.conj() * a.conj()
    assert abs(ab.w - ba.w) < TOL and abs(ab.z - ba.z) < TOL
    assert abs(a.norm2() - (a * a.conj()).w) < TOL


def test_su4_plane_matches_standard_presentation(algebras):
    f = algebras[("A", 3)].factors[0]
    p = f.plane(rv(1, -1, 0, 0))
    x = p.x.blocks[0] * np.sqrt(2.0)
    expected = np.zeros((4, 4), dtype=complex)
    expected[0, 1], expected[1, 0] = 1, -1
    assert np.allclose(x, expected, atol=TOL) or np.allclose(x, -expected, atol=TOL)


def test_sp3_long_plane_is_quaternionic_diagonal(algebras):
    f = algebras[("C", 3)].factors[0]
    p = f.plane(rv(2, 0, 0))
    for m in (p.x.blocks[0], p.y.blocks[0]):
        assert abs(m.w).max() < TOL and m.x[0, 0] == 0
        assert abs(m.y[0, 0]) + abs(m.z[0, 0]) == 1.0


def test_so7_cartan_generator(algebras):
    alg = algebras[("B", 3)]
    e1 = cartan_embed(alg, [rv(1, 0, 0)]).blocks[0]
    expected = np.zeros((7, 7))
    expected[1, 2], expected[2, 1] = 1, -1
    assert np.allclose(e1, expected, atol=TOL)


def test_bracket_examples(algebras):
    alg = algebras[("A", 3)]
    f = alg.factors[0]
    e12 = alg.single_block(0, np.zeros((4, 4), dtype=complex))
    e12.blocks[0][0, 1], e12.blocks[0][1, 0] = 1, -1
    e23 = alg.single_block(0, np.zeros((4, 4), dtype=complex))
    e23.blocks[0][1, 2], e23.blocks[0][2, 1] = 1, -1
    br = bracket(e12, e23)
    expected = np.zeros((4, 4), dtype=complex)
    expected[0, 2], expected[2, 0] = 1, -1
    assert np.allclose(br.blocks[0], expected, atol=TOL)
    rng = np.random.default_rng(0)
    x = alg.random_element(rng)
    assert bracket(x, x).norm() < TOL
    h1 = alg.cartan_embed([rv(1, 0, 0, 0)])
    h2 = alg.cartan_embed([rv(0, 1, 0, 0)])
    assert bracket(h1, h2).norm() < TOL


def test_inner_examples():
    su2 = realize(AlgebraSpec((("A", 1, Fraction(1)),)))
    e1 = su2.cartan_embed([rv(1, 0)])
    # trace oracle: the traceless part of i E_11 is i diag(1/2, -1/2)
    m = e1.blocks[0]
    oracle = float(-np.trace(m @ m).real)
    assert abs(inner(e1, e1) - oracle) < TOL
    assert abs(oracle - 0.5) < TOL


def test_inner_ad_invariance_and_plane_orthogonality(algebras):
    rng = np.random.default_rng(1)
    for alg in algebras.values():
        for _ in range(10):
            x, y, z = (alg.random_element(rng) for _ in range(3))
            assert abs(inner(bracket(x, y), z) + inner(y, bracket(x, z))) < TOL
        f = alg.factors[0]
        h = alg.cartan_embed([f.root_system.roots[0]])
        p = f.plane(f.root_system.roots[0])
        assert abs(inner(p.x, h)) < TOL and abs(inner(p.y, h)) < TOL


def test_cartan_embed_examples(algebras):
    alg = algebras[("A", 3)]
    m = alg.cartan_embed([rv(1, 1, -1, -1)]).blocks[0]
    assert np.allclose(m, 1j * np.diag([1, 1, -1, -1]), atol=TOL)
    z = alg.cartan_embed([rv(0, 0, 0, 0)])
    assert z.norm() < TOL
    b3 = algebras[("B", 3)]
    m = b3.cartan_embed([rv(0, 1, 0)]).blocks[0]
    expected = np.zeros((7, 7))
    expected[3, 4], expected[4, 3] = 1, -1
    assert np.allclose(m, expected, atol=TOL)
    # exact coordinates reproduced through the inner product
    for v in (rv(1, -1, 0, 0), rv(1, 1, -1, -1)):
        for w in (rv(1, -1, 0, 0), rv(0, 1, -1, 0)):
            got = inner(alg.cartan_embed([v]), alg.cartan_embed([w]))
            assert abs(got - float(v.dot(w))) < TOL


def test_exceptional_factor_rejected():
    with pytest.raises(ValueError, match="root-level only"):
        realize(AlgebraSpec((("G2", 2, Fraction(1)),)))


@pytest.mark.parametrize("fam,rank", [("A", 3), ("B", 3), ("C", 3), ("D", 4)])
def test_jacobi_and_ad_invariance_100_triples(algebras, fam, rank):
    alg = algebras[(fam, rank)]
    rng = np.random.default_rng(42)
    for _ in range(100):
        x, y, z = (alg.random_element(rng) for _ in range(3))
        jac = bracket(bracket(x, y), z) + bracket(bracket(y, z), x) \
            + bracket(bracket(z, x), y)
        assert jac.norm() < TOL
        assert abs(inner(bracket(x, y), z) + inner(y, bracket(x, z))) < TOL


def _residual_off_span(alg, elem, span):
    v = elem.copy()
    for b in span:
        v = v - inner(v, b) * b
    return v.norm()


@pytest.mark.parametrize("fam,rank", [("A", 3), ("B", 3), ("C", 3), ("D", 4)])
def test_root_plane_bracket_containment(algebras, fam, rank):
    """[g_a, g_b] lies inside g_{a+b} + g_{a-b} for all root pairs."""
    alg = algebras[(fam, rank)]
    f = alg.factors[0]
    planes = list(f.planes.values())
    for p, q in itertools.combinations(planes, 2):
        targets = []
        for s in (1, -1):
            key = f._canonical(p.root + q.root.scale(s))
            if key in f.planes:
                tp = f.planes[key]
                targets.extend([tp.x.copy(), tp.y.copy()])
        span = gram_schmidt(alg, targets) if targets else []
        for a in (p.x, p.y):
            for b in (q.x, q.y):
                assert _residual_off_span(alg, bracket(a, b), span) < TOL


@pytest.mark.parametrize("fam,rank", [("A", 3), ("B", 3), ("C", 3), ("D", 4)])
def test_plane_self_bracket_spans_root_line(algebras, fam, rank):
    alg = algebras[(fam, rank)]
    f = alg.factors[0]
    for p in f.planes.values():
        h = alg.cartan_embed([p.root])
        for a, b in [(p.x, p.y)]:
            br = bracket(a, b)
            resid = br - (inner(br, h) / inner(h, h)) * h
            assert resid.norm() < TOL
            assert br.norm() > 1e-6  # nonzero: the bracket spans the line


def test_ad_isomorphism_between_planes(algebras):
    """When exactly one of a+-b is a root, ad(v) maps g_b onto g_{gamma}
    isomorphically for any nonzero v in g_a."""
    alg = algebras[("B", 3)]
    f = alg.factors[0]
    pa = f.plane(rv(-1, 1, 0))
    pb = f.plane(rv(1, 0, 0))
    tgt = f.plane(rv(0, 1, 0))
    rng = np.random.default_rng(3)
    for _ in range(5):
        c = rng.standard_normal(2)
        v = float(c[0]) * pa.x + float(c[1]) * pa.y
        m = np.zeros((2, 2))
        for col, b in enumerate((pb.x, pb.y)):
            br = bracket(v, b)
            m[0, col] = inner(br, tgt.x)
            m[1, col] = inner(br, tgt.y)
            # image stays inside the target plane
            resid = br - m[0, col] * tgt.x - m[1, col] * tgt.y
            assert resid.norm() < TOL
        assert abs(np.linalg.det(m)) > 1e-8
