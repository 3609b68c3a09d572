"""Homogeneous-space construction: reductive decompositions g = h + m.

A CosetSpace pairs a realized matrix algebra with an orthonormal basis of a
verified subalgebra h and of its bi-invariant orthogonal complement m.
Exact Cartan data in the coordinate field Q(sqrt2, sqrt3) is carried
alongside the floating matrices; all projections of Cartan vectors are
exact, matrix projections are numeric with a fixed tolerance ladder
(closure gate 1e-8, reductivity 1e-10, orthogonality 1e-12).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.linalg import expm

from .rootsys import (
    Q0,
    Q1,
    QNum,
    RootVector,
    exact_nullspace,
    rv,
    solve_exact,
)
from .liealg import (
    AlgebraElement,
    AlgebraSpec,
    QuatMatrix,
    RealizedAlgebra,
    _eij,
    gram_schmidt,
    realize,
)

CLOSURE_TOL = 1e-8
REDUCTIVE_TOL = 1e-10
ORTHO_TOL = 1e-12


# ---------------------------------------------------------------------------
# Exact vectors in the Cartan subalgebra of a direct-sum algebra
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TVec:
    """Exact Cartan vector: one coordinate block per factor plus abelian
    coordinates.  A-factor blocks live in ambient sum-zero coordinates."""

    factors: tuple  # of RootVector
    abelian: tuple  # of QNum

    def __post_init__(self):
        object.__setattr__(self, "abelian", tuple(QNum.of(x) for x in self.abelian))

    def __add__(self, o: "TVec") -> "TVec":
        return TVec(
            tuple(a + b for a, b in zip(self.factors, o.factors)),
            tuple(a + b for a, b in zip(self.abelian, o.abelian)),
        )

    def __sub__(self, o: "TVec") -> "TVec":
        return TVec(
            tuple(a - b for a, b in zip(self.factors, o.factors)),
            tuple(a - b for a, b in zip(self.abelian, o.abelian)),
        )

    def __neg__(self) -> "TVec":
        return TVec(tuple(-a for a in self.factors), tuple(-a for a in self.abelian))

    def scale(self, c) -> "TVec":
        c = QNum.of(c)
        return TVec(
            tuple(a.scale(c) for a in self.factors),
            tuple(c * a for a in self.abelian),
        )

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.factors) and all(x.is_zero() for x in self.abelian)

    def floats(self) -> tuple:
        out = []
        for f in self.factors:
            out.extend(float(x) for x in f.coords)
        out.extend(float(x) for x in self.abelian)
        return tuple(out)

    def _sort_key(self):
        return self.floats()

    def canonical_sign(self) -> "TVec":
        return self if self._sort_key() >= (-self)._sort_key() else -self


def tvec_dot(spec: AlgebraSpec, u: TVec, v: TVec) -> QNum:
    """Bi-invariant inner product on t, exact (per-factor scales enter)."""
    out = Q0
    for (fam, rank, scale), a, b in zip(spec.factors, u.factors, v.factors):
        out = out + QNum.of(scale) * a.dot(b)
    for s, x, y in zip(spec.abelian_scales, u.abelian, v.abelian):
        out = out + QNum.of(s) * x * y
    return out


def zero_tvec(spec: AlgebraSpec) -> TVec:
    factors = []
    for fam, rank, _ in spec.factors:
        dim = rank + 1 if fam == "A" else rank
        factors.append(RootVector(tuple([Q0] * dim)))
    return TVec(tuple(factors), tuple([Q0] * spec.abelian_dim))


def lift_root(spec: AlgebraSpec, factor: int, root: RootVector) -> TVec:
    base = zero_tvec(spec)
    factors = list(base.factors)
    factors[factor] = root
    return TVec(tuple(factors), base.abelian)


def tvec_from_parts(spec: AlgebraSpec, parts: dict = None, abelian: Sequence = ()) -> TVec:
    """Assemble a TVec from {factor_index: coordinate list} plus abelian."""
    base = zero_tvec(spec)
    factors = list(base.factors)
    for idx, coords in (parts or {}).items():
        factors[idx] = rv(*coords)
    ab = list(base.abelian)
    for k, x in enumerate(abelian):
        ab[k] = QNum.of(x)
    return TVec(tuple(factors), tuple(ab))


def tvec_to_json(tv: TVec) -> dict:
    return {
        "factors": [f.to_json() for f in tv.factors],
        "abelian": [x.to_json() for x in tv.abelian],
    }


def tvec_from_json(spec: AlgebraSpec, obj: dict) -> TVec:
    factors = tuple(RootVector.from_json(f) for f in obj["factors"])
    abelian = tuple(QNum.from_json(x) for x in obj.get("abelian", []))
    base = zero_tvec(spec)
    if len(factors) != len(base.factors) or len(abelian) != len(base.abelian):
        raise ValueError("torus vector does not match the algebra spec")
    return TVec(factors, abelian)


def cartan_coordinate_basis(spec: AlgebraSpec) -> list:
    """Exact basis of t (sum-zero differences for A factors)."""
    out = []
    for idx, (fam, rank, _) in enumerate(spec.factors):
        if fam == "A":
            for i in range(rank):
                coords = [Q0] * (rank + 1)
                coords[i] = Q1
                coords[i + 1] = -Q1
                out.append(lift_root(spec, idx, RootVector(tuple(coords))))
        else:
            for i in range(rank):
                coords = [Q0] * rank
                coords[i] = Q1
                out.append(lift_root(spec, idx, RootVector(tuple(coords))))
    base = zero_tvec(spec)
    for k in range(spec.abelian_dim):
        ab = list(base.abelian)
        ab[k] = Q1
        out.append(TVec(base.factors, tuple(ab)))
    return out


def orthocomplement_in_t(spec: AlgebraSpec, vectors: Sequence[TVec]) -> list:
    """Exact basis of the orthocomplement of span(vectors) inside t."""
    basis = cartan_coordinate_basis(spec)
    if not vectors:
        return basis
    rows = [[tvec_dot(spec, b, v) for b in basis] for v in vectors]
    null = exact_nullspace(rows)
    out = []
    for coeffs in null:
        vec = zero_tvec(spec)
        for c, b in zip(coeffs, basis):
            if not c.is_zero():
                vec = vec + b.scale(c)
        out.append(vec)
    return out


def project_to_span(spec: AlgebraSpec, span: Sequence[TVec], v: TVec) -> TVec:
    """Exact orthogonal projection of v onto span(span)."""
    if not span:
        return zero_tvec(spec)
    gram = [[tvec_dot(spec, a, b) for b in span] for a in span]
    rhs = [tvec_dot(spec, a, v) for a in span]
    sol = solve_exact(gram, rhs)
    if sol is None:
        raise ArithmeticError("degenerate span in exact projection")
    out = zero_tvec(spec)
    for c, b in zip(sol, span):
        if not c.is_zero():
            out = out + b.scale(c)
    return out


def in_span(spec: AlgebraSpec, span: Sequence[TVec], v: TVec) -> bool:
    return (v - project_to_span(spec, span, v)).is_zero()


# ---------------------------------------------------------------------------
# Subalgebra specification and coset spaces
# ---------------------------------------------------------------------------

@dataclass
class SubalgebraSpec:
    """Data defining h: exact Cartan vectors, root planes assigned to h,
    and optional explicit extra generators (diagonal embeddings)."""

    cartan_h: tuple = ()
    h_roots: tuple = ()  # of (factor_index, RootVector)
    extra_generators: tuple = ()  # of AlgebraElement


class CosetSpace:
    """Verified bi-invariant orthogonal decomposition g = h + m."""

    def __init__(self, algebra: RealizedAlgebra, name: str,
                 h_basis: list, cartan_h: Sequence[TVec],
                 h_root_vectors: Sequence[TVec] = (),
                 plane_assignments: Optional[dict] = None,
                 witness_planes: Optional[dict] = None,
                 case_label: Optional[str] = None):
        self.algebra = algebra
        self.name = name
        self.h_basis = h_basis
        self.cartan_h = tuple(cartan_h)
        self.h_root_vectors = tuple(h_root_vectors)
        self.plane_assignments = plane_assignments
        self.witness_planes = witness_planes
        self.case_label = case_label

        alg = algebra
        self.dim_g = alg.dim
        self.dim_h = len(h_basis)
        ambient = alg.ambient_basis()
        full = gram_schmidt(alg, list(h_basis) + [b.copy() for b in ambient])
        if len(full) != self.dim_g:
            raise AssertionError("basis completion failed")
        self.m_basis = full[self.dim_h:]
        self.dim_m = len(self.m_basis)

        self._h_co = np.array([alg.coords(b) for b in h_basis]) if h_basis else np.zeros((0, self.dim_g))
        self._m_co = np.array([alg.coords(b) for b in self.m_basis])

        self.t_m = orthocomplement_in_t(alg.spec, self.cartan_h)

        self._verify()
        self._hat = None
        self._tensors = None

    # -- verification -----------------------------------------------------
    def _verify(self):
        alg = self.algebra
        for i, hi in enumerate(self.h_basis):
            for mj in self.m_basis:
                if abs(alg.inner(hi, mj)) > ORTHO_TOL:
                    raise AssertionError("h and m are not orthogonal")
        worst = 0.0
        for hi in self.h_basis:
            for mj in self.m_basis:
                br = alg.bracket(hi, mj)
                worst = max(worst, np.linalg.norm(self._h_co @ alg.coords(br)))
        if worst > REDUCTIVE_TOL:
            raise AssertionError(f"reductive condition violated: {worst:.2e}")
        for tv in self.t_m:
            e = self.embed(tv)
            resid = e - self.pr_m(e)
            if resid.norm() > 1e-9 * max(1.0, e.norm()):
                raise AssertionError("exact t cap m does not match matrix complement")

    # -- coordinates --------------------------------------------------------
    def embed(self, tv: TVec) -> AlgebraElement:
        return self.algebra.cartan_embed(list(tv.factors), np.array([float(x) for x in tv.abelian]))

    def to_m(self, x: AlgebraElement) -> np.ndarray:
        return self._m_co @ self.algebra.coords(x)

    def from_m(self, v: np.ndarray) -> AlgebraElement:
        out = self.algebra.zero()
        for c, b in zip(v, self.m_basis):
            out = out + float(c) * b
        return out

    def to_h(self, x: AlgebraElement) -> np.ndarray:
        return self._h_co @ self.algebra.coords(x)

    def pr_m(self, x: AlgebraElement) -> AlgebraElement:
        return self.from_m(self.to_m(x))

    def pr_h(self, x: AlgebraElement) -> AlgebraElement:
        out = self.algebra.zero()
        for c, b in zip(self.to_h(x), self.h_basis):
            out = out + float(c) * b
        return out

    # -- exact projections --------------------------------------------------
    def pr_h_exact(self, tv: TVec) -> TVec:
        return project_to_span(self.algebra.spec, self.cartan_h, tv)

    def g_root_list(self) -> list:
        """All (factor_index, root) pairs of the algebra."""
        out = []
        for f in self.algebra.factors:
            for root in f.planes:
                out.append((f.index, root))
        return out

    # -- structure tensors for the curvature engine -------------------------
    def structure_tensors(self):
        """(Cm, Ch, Kh): m-m brackets onto m and h, and h-m brackets onto m."""
        if self._tensors is None:
            alg = self.algebra
            d, dh = self.dim_m, self.dim_h
            Cm = np.zeros((d, d, d))
            Ch = np.zeros((d, d, dh))
            for i in range(d):
                for j in range(i + 1, d):
                    br = alg.bracket(self.m_basis[i], self.m_basis[j])
                    co = alg.coords(br)
                    mi = self._m_co @ co
                    hi = self._h_co @ co
                    Cm[i, j] = mi
                    Cm[j, i] = -mi
                    Ch[i, j] = hi
                    Ch[j, i] = -hi
            Kh = np.zeros((dh, d, d))
            for a in range(dh):
                for k in range(d):
                    br = alg.bracket(self.h_basis[a], self.m_basis[k])
                    Kh[a, k] = self._m_co @ alg.coords(br)
            self._tensors = (Cm, Ch, Kh)
        return self._tensors

    # -- decompositions -------------------------------------------------------
    def hat_decomposition(self) -> "HatDecomposition":
        if self._hat is None:
            self._hat = _build_hat(self)
        return self._hat

    def hathat_decomposition(self, alpha_prime: TVec) -> list:
        return _build_hathat(self, alpha_prime)

    def plane_m_part(self, factor: int, root: RootVector) -> list:
        """Orthonormal m-coordinates spanned by the m-part of a root plane."""
        f = self.algebra.factors[factor]
        p = f.plane(root)
        vecs = [self.to_m(p.x), self.to_m(p.y)]
        return _orthonormal_rows(vecs)

    def __repr__(self):
        return f"CosetSpace({self.name}: dim g={self.dim_g}, dim h={self.dim_h}, dim m={self.dim_m})"


def _orthonormal_rows(vecs: list, tol: float = 1e-9) -> list:
    out = []
    for v in vecs:
        w = v.copy()
        for b in out:
            w = w - (w @ b) * b
        n = np.linalg.norm(w)
        if n > tol:
            out.append(w / n)
    return out


@dataclass
class HatBlock:
    alpha_prime: TVec  # canonical sign; zero vector for the g0 block
    roots: tuple       # (factor, root) pairs contributing m-directions
    basis: list        # orthonormal m-coordinate vectors


@dataclass
class HatDecomposition:
    blocks: list  # of HatBlock; blocks[0] is the g0 block

    def block_of(self, alpha_prime: TVec, spec: AlgebraSpec) -> HatBlock:
        key = alpha_prime.canonical_sign().floats()
        for b in self.blocks:
            if np.allclose(b.alpha_prime.floats(), key, atol=1e-12):
                return b
        raise KeyError("no hat block with that projection")


def _build_hat(space: CosetSpace) -> HatDecomposition:
    spec = space.algebra.spec
    zero_key = None
    groups: dict = {}
    g0_roots = []
    g0_vecs = [space.to_m(space.embed(tv)) for tv in space.t_m]
    for factor, root in space.g_root_list():
        lifted = lift_root(spec, factor, root)
        if space.t_m and in_span(spec, space.t_m, lifted):
            g0_roots.append((factor, root))
            p = space.algebra.factors[factor].plane(root)
            g0_vecs.extend([space.to_m(p.x), space.to_m(p.y)])
            continue
        pr = space.pr_h_exact(lifted)
        key = tuple(pr.canonical_sign().floats())
        groups.setdefault(key, (pr.canonical_sign(), []))[1].append((factor, root))
    blocks = [HatBlock(zero_tvec(spec), tuple(g0_roots), _orthonormal_rows(g0_vecs))]
    for key in sorted(groups):
        pr, roots = groups[key]
        vecs = []
        for factor, root in roots:
            p = space.algebra.factors[factor].plane(root)
            vecs.extend([space.to_m(p.x), space.to_m(p.y)])
        basis = _orthonormal_rows(vecs)
        if basis:
            blocks.append(HatBlock(pr, tuple(roots), basis))
    return HatDecomposition(blocks)


def _build_hathat(space: CosetSpace, alpha_prime: TVec) -> list:
    if alpha_prime.is_zero():
        raise ValueError("hat-hat decomposition needs a nonzero projection vector")
    spec = space.algebra.spec
    t_prime = orthocomplement_in_t(spec, list(space.t_m) + [alpha_prime])
    # t' is the orthocomplement of alpha' inside t cap h
    zero_vecs = [space.to_m(space.embed(tv)) for tv in space.t_m]
    groups: dict = {}
    for factor, root in space.g_root_list():
        lifted = lift_root(spec, factor, root)
        pr = project_to_span(spec, t_prime, lifted) if t_prime else zero_tvec(spec)
        p = space.algebra.factors[factor].plane(root)
        vecs = [space.to_m(p.x), space.to_m(p.y)]
        if pr.is_zero():
            zero_vecs.extend(vecs)
            continue
        key = tuple(pr.canonical_sign().floats())
        groups.setdefault(key, (pr.canonical_sign(), []))[1].extend(vecs)
    out = [(zero_tvec(spec), _orthonormal_rows(zero_vecs))]
    for key in sorted(groups):
        pr, vecs = groups[key]
        basis = _orthonormal_rows(vecs)
        if basis:
            out.append((pr, basis))
    return out


# ---------------------------------------------------------------------------
# Construction and checks
# ---------------------------------------------------------------------------

def build_coset(algebra: RealizedAlgebra, spec: SubalgebraSpec,
                name: str = "custom", **kw) -> CosetSpace:
    """Build and verify a coset space from a subalgebra specification."""
    gens = []
    for tv in spec.cartan_h:
        gens.append(algebra.cartan_embed(list(tv.factors),
                                         np.array([float(x) for x in tv.abelian])))
    for factor, root in spec.h_roots:
        p = algebra.factors[factor].plane(root)
        gens.extend([p.x.copy(), p.y.copy()])
    gens.extend(g.copy() for g in spec.extra_generators)

    h_basis = gram_schmidt(algebra, gens)
    if len(h_basis) == algebra.dim:
        raise ValueError("h = g: degenerate coset space")
    h_co = np.array([algebra.coords(b) for b in h_basis])
    worst = 0.0
    for i in range(len(h_basis)):
        for j in range(i + 1, len(h_basis)):
            br = algebra.bracket(h_basis[i], h_basis[j])
            co = algebra.coords(br)
            worst = max(worst, np.linalg.norm(co - h_co.T @ (h_co @ co)))
    if worst > CLOSURE_TOL:
        raise ValueError(f"not a subalgebra: bracket closure residual {worst:.2e}")
    return CosetSpace(algebra, name, h_basis, spec.cartan_h, **kw)


def rank_check(space: CosetSpace):
    """(rk g, rk h, passes) with passes iff rk g = rk h + 1."""
    spec = space.algebra.spec
    rk_g = spec.abelian_dim + sum(r for _, r, _ in spec.factors)
    rk_h = len(space.cartan_h)
    return rk_g, rk_h, rk_g == rk_h + 1


def hat_decomposition(space: CosetSpace) -> "HatDecomposition":
    """The m-parts of the torus-isotypic decomposition of g, grouped by
    exact projections of the roots to t cap h (cached on the space)."""
    return space.hat_decomposition()


def hathat_decomposition(space: CosetSpace, alpha_prime: TVec) -> list:
    """The coarser decomposition of m by projections to the orthocomplement
    of alpha_prime inside t cap h."""
    return space.hathat_decomposition(alpha_prime)


# ---------------------------------------------------------------------------
# Diagonal A1 normalization (two commuting A1 factors)
# ---------------------------------------------------------------------------

def diagonal_a1_frame(algebra: RealizedAlgebra):
    """Standard bases {u1,u2,u3}, {v1,v2,v3} of the two A1 factors.

    Each triple is orthogonal with common length c and satisfies
    [a1,a2]=a3 cyclically; u* spans factor one, v* factor two.
    """
    if len(algebra.factors) != 2 or algebra.spec.abelian_dim != 0:
        raise ValueError("diagonal A1 normalization needs exactly two simple factors")
    frames = []
    for f in algebra.factors:
        if (f.family, f.rank) not in (("A", 1), ("C", 1)):
            raise ValueError("both factors must be of type A1")
        if f.family == "A":
            t_dir = algebra.single_block(f.index, f.cartan_block(rv(1, -1)))
            root = rv(1, -1)
        else:
            t_dir = algebra.single_block(f.index, f.cartan[0])
            root = rv(2)
        plane = f.plane(root)
        x = (1.0 / t_dir.norm()) * t_dir
        y = plane.x
        z = algebra.bracket(x, y)
        c = 1.0 / z.norm()  # scale making the triple standard
        a1, a2 = c * x, c * y
        a3 = algebra.bracket(a1, a2)
        assert abs(a3.norm() - c) < 1e-9
        frames.append([a1, a2, a3])
    return frames[0], frames[1]


def _factor_component(algebra: RealizedAlgebra, x: AlgebraElement, idx: int) -> AlgebraElement:
    blocks = [b.copy() if k == idx else algebra.factors[k].zero_block()
              for k, b in enumerate(x.blocks)]
    return algebra.from_blocks(blocks)


def _diagonal_a1_phase(algebra: RealizedAlgebra, h_list: list,
                       u_basis: list, v_basis: list):
    """Verify the diagonal-A1 conditions for h_list and return (hb, a, phase):
    the orthonormal basis, the Cartan mixing ratio a and the rotation phase
    of the factor-two off-Cartan component."""
    hb = gram_schmidt(algebra, [x.copy() for x in h_list])
    if len(hb) != 3:
        raise ValueError("not a diagonal A1 of the required form: dim != 3")
    co = np.array([algebra.coords(b) for b in hb])

    def combo_kernel(rows):
        # combinations c with sum c_i rows_i = 0
        _, s, vt = np.linalg.svd(np.asarray(rows).T)
        return [vt[k] for k in range(vt.shape[0]) if (s[k] if k < len(s) else 0.0) < 1e-8]

    u1, v1 = u_basis[0], v_basis[0]
    c1, c2 = u1.norm(), v1.norm()
    # condition (2): no nonzero intersection with a single factor
    for idx in range(2):
        comps = [algebra.coords(_factor_component(algebra, b, 1 - idx)) for b in hb]
        if combo_kernel(comps):
            raise ValueError("not a diagonal A1 of the required form: intersects a simple factor")
    # condition (1): Cartan intersection is the line R(u1 + a v1)
    g = np.array([
        [algebra.inner(u1, u1), 0.0],
        [0.0, algebra.inner(v1, v1)],
    ])
    proj = np.array([[algebra.inner(b, u1), algebra.inner(b, v1)] for b in hb])
    M = co - proj @ np.linalg.inv(g) @ np.array([algebra.coords(u1), algebra.coords(v1)])
    kern = combo_kernel(M)
    if len(kern) != 1:
        raise ValueError("not a diagonal A1 of the required form: Cartan intersection not 1-dimensional")
    t_int = algebra.zero()
    for cc, b in zip(kern[0], hb):
        t_int = t_int + float(cc) * b
    cu = algebra.inner(t_int, u1) / c1 ** 2
    cv = algebra.inner(t_int, v1) / c2 ** 2
    if abs(cu) < 1e-8 or abs(cv) < 1e-8:
        raise ValueError("not a diagonal A1 of the required form: Cartan part lies in one factor")
    a = cv / cu
    # off-Cartan part: solve for the h element whose factor-one component
    # is a positive multiple of u2, then read off the factor-two phase
    u2, u3 = u_basis[1], u_basis[2]
    rows = np.array([
        [algebra.inner(b, u1) for b in hb],
        [algebra.inner(b, v1) for b in hb],
        [algebra.inner(b, u3) for b in hb],
    ])
    rhs_fix = np.array([algebra.inner(b, u2) for b in hb])
    # want z = sum l_i hb_i with <z,u1>=<z,v1>=<z,u3>=0 and <z,u2>=c1^2
    A = np.vstack([rows, rhs_fix])
    sol, *_ = np.linalg.lstsq(A, np.array([0.0, 0.0, 0.0, c1 ** 2]), rcond=None)
    z = algebra.zero()
    for cc, b in zip(sol, hb):
        z = z + float(cc) * b
    z1 = _factor_component(algebra, z, 0)
    if (z1 - u2).norm() > 1e-8 * max(1.0, u2.norm()):
        raise ValueError("not a diagonal A1 of the required form: off-Cartan part misaligned")
    z2 = _factor_component(algebra, z, 1)
    b_par = z2.norm() / c2
    if abs(b_par - 1.0) > 1e-8:
        raise ValueError("not a diagonal A1 of the required form: scale b != 1")
    # condition (3) holds implicitly: z2 is orthogonal to v1 by the solve
    if abs(algebra.inner(z2, v1)) > 1e-8 * c2 ** 2:
        raise ValueError("not a diagonal A1 of the required form: off-Cartan part not orthogonal to t")
    v2, v3 = v_basis[1], v_basis[2]
    phase = math.atan2(algebra.inner(z2, v3) / c2 ** 2, algebra.inner(z2, v2) / c2 ** 2)
    return hb, a, phase


def normalize_diagonal_a1(algebra: RealizedAlgebra, h_prime: list,
                          reference: list, tol: float = 1e-10) -> float:
    """Conjugation parameter aligning a diagonal A1 with a reference one.

    Both h_prime and reference are bases of diagonal A1 subalgebras of an
    A1+A1 algebra satisfying: one-dimensional intersection with the Cartan,
    zero intersection with each simple factor, off-Cartan part orthogonal
    to the Cartan.  Returns t with Ad(exp(t*v1)) h_prime = reference,
    where v1 is the first factor-two vector of diagonal_a1_frame.
    """
    u_basis, v_basis = diagonal_a1_frame(algebra)
    hb1, a1, ph1 = _diagonal_a1_phase(algebra, h_prime, u_basis, v_basis)
    hb2, a2, ph2 = _diagonal_a1_phase(algebra, reference, u_basis, v_basis)
    if abs(a1 - a2) > 1e-8:
        raise ValueError("not a diagonal A1 of the required form: Cartan lines differ")
    # Ad(exp(s v1)) rotates (v2, v3) with unit angular speed: v2 -> cos s v2 + sin s v3
    t_par = ph2 - ph1
    t_par = math.atan2(math.sin(t_par), math.cos(t_par))
    conj = _ad_exp(algebra, t_par, v_basis[0])
    co_ref = np.array([algebra.coords(b) for b in hb2])
    worst = 0.0
    for b in hb1:
        c = algebra.coords(conj(b))
        worst = max(worst, np.linalg.norm(c - co_ref.T @ (co_ref @ c)))
    if worst > tol:
        raise ValueError(f"diagonal A1 normalization failed to verify: {worst:.2e}")
    return t_par


# ---------------------------------------------------------------------------
# Named presets
# ---------------------------------------------------------------------------

def _so_generators(algebra: RealizedAlgebra, factor: int, rows: list) -> list:
    f = algebra.factors[factor]
    out = []
    for ia, a in enumerate(rows):
        for b in rows[ia + 1:]:
            m = np.zeros((f.size, f.size))
            m[a, b] = 1.0
            m[b, a] = -1.0
            out.append(algebra.single_block(factor, m))
    return out


def _negclose(vectors: Iterable[TVec]) -> tuple:
    out = []
    seen = set()
    for v in vectors:
        for w in (v, -v):
            key = w.floats()
            if key not in seen:
                seen.add(key)
                out.append(w)
    return tuple(out)


def preset_sphere_so2n(n: int) -> CosetSpace:
    """S^{2n-1} = SO(2n)/SO(2n-1), n >= 3 (the n=3 model uses D3 = A3)."""
    if n < 3:
        raise ValueError("sphere_so2n needs n >= 3")
    spec = AlgebraSpec((("D", n, Fraction(1)),))
    alg = realize(spec)
    gens = _so_generators(alg, 0, list(range(1, 2 * n)))
    cart = [lift_root(spec, 0, _unit(n, i)) for i in range(1, n)]
    h_roots = []
    for i in range(1, n):
        h_roots.append(lift_root(spec, 0, _unit(n, i)))
        for j in range(i + 1, n):
            h_roots.append(lift_root(spec, 0, _unit(n, i) + _unit(n, j)))
            h_roots.append(lift_root(spec, 0, _unit(n, i) - _unit(n, j)))
    sub = SubalgebraSpec(cartan_h=tuple(cart), extra_generators=tuple(gens))
    return build_coset(
        alg, sub, name=f"S^{2*n-1} = SO({2*n})/SO({2*n-1})",
        h_root_vectors=_negclose(h_roots), case_label="III",
    )


def preset_sphere_un(n: int) -> CosetSpace:
    """S^{2n-1} = U(n)/U(n-1), n >= 2."""
    if n < 2:
        raise ValueError("sphere_un needs n >= 2")
    spec = AlgebraSpec((("A", n - 1, Fraction(1)),), abelian_dim=1,
                       abelian_scales=(Fraction(n),))
    alg = realize(spec)
    cart = []
    for j in range(1, n):
        coords = [Fraction(-1, n)] * n
        coords[j] = Fraction(n - 1, n)
        cart.append(tvec_from_parts(spec, {0: coords}, abelian=[Fraction(1, n)]))
    block = [_unit(n, i) - _unit(n, j) for i in range(1, n) for j in range(i + 1, n)]
    sub = SubalgebraSpec(cartan_h=tuple(cart), h_roots=tuple((0, r) for r in block))
    return build_coset(
        alg, sub, name=f"S^{2*n-1} = U({n})/U({n-1})",
        h_root_vectors=_negclose(lift_root(spec, 0, r) for r in block),
        case_label="I",
    )


def _sp_subblock_roots(n: int, lo: int) -> list:
    out = []
    for i in range(lo, n):
        out.append(_unit(n, i).scale(2))
        for j in range(i + 1, n):
            out.append(_unit(n, i) + _unit(n, j))
            out.append(_unit(n, i) - _unit(n, j))
    return out


def preset_sphere_spn_u1(n: int) -> CosetSpace:
    """S^{4n-1} = Sp(n)U(1)/Sp(n-1)U(1), n >= 2."""
    if n < 2:
        raise ValueError("sphere_spn_u1 needs n >= 2")
    spec = AlgebraSpec((("C", n, Fraction(1)),), abelian_dim=1)
    alg = realize(spec)
    cart = [tvec_from_parts(spec, {0: _coords_unit(n, 0)}, abelian=[1])]
    cart += [lift_root(spec, 0, _unit(n, i)) for i in range(1, n)]
    block = _sp_subblock_roots(n, 1)
    sub = SubalgebraSpec(cartan_h=tuple(cart), h_roots=tuple((0, r) for r in block))
    return build_coset(
        alg, sub, name=f"S^{4*n-1} = Sp({n})U(1)/Sp({n-1})U(1)",
        h_root_vectors=_negclose(lift_root(spec, 0, r) for r in block),
        case_label="I",
    )


def preset_sphere_spn_sp1(n: int) -> CosetSpace:
    """S^{4n-1} = Sp(n)Sp(1)/Sp(n-1)Sp(1), n >= 2."""
    if n < 2:
        raise ValueError("sphere_spn_sp1 needs n >= 2")
    spec = AlgebraSpec((("C", n, Fraction(1)), ("C", 1, Fraction(1))))
    alg = realize(spec)
    sz = alg.factors[0].size
    gens = []
    for part in ("x", "y", "z"):
        gens.append(alg.from_blocks([
            QuatMatrix.unit(sz, 0, 0, part),
            QuatMatrix.unit(1, 0, 0, part),
        ]))
    cart = [tvec_from_parts(spec, {0: _coords_unit(n, 0), 1: [1]})]
    cart += [lift_root(spec, 0, _unit(n, i)) for i in range(1, n)]
    block = _sp_subblock_roots(n, 1)
    sub = SubalgebraSpec(cartan_h=tuple(cart), h_roots=tuple((0, r) for r in block),
                         extra_generators=tuple(gens))
    hvecs = [cart[0]] + [lift_root(spec, 0, r) for r in block]
    return build_coset(
        alg, sub, name=f"S^{4*n-1} = Sp({n})Sp(1)/Sp({n-1})Sp(1)",
        h_root_vectors=_negclose(hvecs), case_label="II",
    )


def preset_aloff_wallach(k: int, l: int) -> CosetSpace:
    """Aloff-Wallach space U(3)/T^2 with torus parameters (k, l)."""
    if k * l * (k + l) == 0:
        raise ValueError("aloff_wallach needs kl(k+l) != 0")
    spec = AlgebraSpec((("A", 2, Fraction(1)),), abelian_dim=1,
                       abelian_scales=(Fraction(3),))
    alg = realize(spec)
    v1 = tvec_from_parts(spec, {0: [k, l, -k - l]})
    v2 = tvec_from_parts(spec, {0: [k + 2 * l, -2 * k - l, k - l]}, abelian=[1])
    sub = SubalgebraSpec(cartan_h=(v1, v2))
    return build_coset(
        alg, sub, name=f"Aloff-Wallach U(3)/T^2 (k={k}, l={l})",
        h_root_vectors=(), case_label="I",
    )


def preset_berger_sp2() -> CosetSpace:
    """Berger space Sp(2)/SU(2) = SO(5)/SO(3)_irr: the 5-dimensional
    irreducible orthogonal representation of so(3) inside so(5)."""
    spec = AlgebraSpec((("B", 2, Fraction(1)),))
    alg = realize(spec)
    # so(3) acting on traceless symmetric 3x3 matrices: rho(X)S = XS - SX
    s6 = 1.0 / np.sqrt(6.0)
    s2 = 1.0 / np.sqrt(2.0)
    sym_basis = [
        s6 * np.diag([-1.0, -1.0, 2.0]),                     # weight 0
        s2 * (_eij(3, 1, 2, float) + _eij(3, 2, 1, float)),  # weight-1 pair
        s2 * (_eij(3, 0, 2, float) + _eij(3, 2, 0, float)),
        s2 * (_eij(3, 0, 0, float) - _eij(3, 1, 1, float)),  # weight-2 pair
        s2 * (_eij(3, 0, 1, float) + _eij(3, 1, 0, float)),
    ]
    def rho(X):
        m = np.zeros((5, 5))
        for j, S in enumerate(sym_basis):
            img = X @ S - S @ X
            for i, T in enumerate(sym_basis):
                m[i, j] = float((img * T).sum())
        return m
    Lz = _eij(3, 0, 1, float) - _eij(3, 1, 0, float)
    Lx = _eij(3, 1, 2, float) - _eij(3, 2, 1, float)
    Ly = _eij(3, 2, 0, float) - _eij(3, 0, 2, float)
    target = np.zeros((5, 5))  # embed of the exact Cartan direction (-1, 2)
    target[1, 2], target[2, 1] = -1.0, 1.0
    target[3, 4], target[4, 3] = 2.0, -2.0
    rz = rho(Lz)
    # flip basis orientations so rho(Lz) matches the target exactly
    flips = np.ones(5)
    if rz[2, 1] * target[2, 1] < 0:
        flips[2] = -1.0
    if rz[4, 3] * target[4, 3] < 0:
        flips[4] = -1.0
    F = np.diag(flips)
    def rho_f(X):
        return F @ rho(X) @ F
    rz = rho_f(Lz)
    if np.abs(rz - target).max() > 1e-12:
        raise AssertionError("spin-2 Cartan alignment failed")
    gens = [alg.single_block(0, rho_f(X)) for X in (Lx, Ly, Lz)]
    alpha_prime = tvec_from_parts(spec, {0: [Fraction(-1, 5), Fraction(2, 5)]})
    cart = [tvec_from_parts(spec, {0: [-1, 2]})]
    sub = SubalgebraSpec(cartan_h=tuple(cart), extra_generators=tuple(gens))
    return build_coset(
        alg, sub, name="Sp(2)/SU(2) (Berger)",
        h_root_vectors=_negclose([alpha_prime]), case_label="III",
    )


def preset_bn_excluded_subcase1(n: int) -> CosetSpace:
    """so(2n+1)/so(2n-1) witness space: m = R e1 + g_{+-e1}
    + sum_{i>=2} (g_{+-(e_i+e_1)} + g_{+-(e_i-e_1)})."""
    if n < 2:
        raise ValueError("bn_excluded_subcase1 needs n >= 2")
    spec = AlgebraSpec((("B", n, Fraction(1)),))
    alg = realize(spec)
    cart = [lift_root(spec, 0, _unit(n, i)) for i in range(1, n)]
    block = []
    for i in range(1, n):
        block.append(_unit(n, i))
        for j in range(i + 1, n):
            block.append(_unit(n, i) + _unit(n, j))
            block.append(_unit(n, i) - _unit(n, j))
    sub = SubalgebraSpec(cartan_h=tuple(cart), h_roots=tuple((0, r) for r in block))
    return build_coset(
        alg, sub, name=f"SO({2*n+1})/SO({2*n-1}) zero-curvature witness",
        h_root_vectors=_negclose(lift_root(spec, 0, r) for r in block),
        case_label="III",
        witness_planes={"u": (0, _unit(n, 0) + _unit(n, 1)),
                        "v": (0, _unit(n, 1) - _unit(n, 0))},
    )


def preset_a1a1_diagonal(c) -> CosetSpace:
    """SU(2) x SU(2)/U(1)_c with slope parameter |c| >= 1 on the torus."""
    c = Fraction(c)
    if abs(c) < 1:
        raise ValueError("a1a1_diagonal needs |c| >= 1 (reorder the factors)")
    spec = AlgebraSpec((("A", 1, Fraction(1)), ("A", 1, Fraction(1))))
    alg = realize(spec)
    cart = [tvec_from_parts(spec, {0: [-c, c], 1: [1, -1]})]
    sub = SubalgebraSpec(cartan_h=tuple(cart))
    return build_coset(
        alg, sub, name=f"SU(2)xSU(2)/U(1) (c={c})",
        h_root_vectors=(), case_label="I",
        witness_planes={"u": (0, rv(1, -1)), "v": (1, rv(1, -1))},
    )


def preset_cn_excluded_subcase1(n: int) -> CosetSpace:
    """sp(n) witness space with h = A1(e1+e2) + sp(n-2)."""
    if n < 3:
        raise ValueError("cn_excluded_subcase1 needs n >= 3")
    spec = AlgebraSpec((("C", n, Fraction(1)),))
    alg = realize(spec)
    block = [_unit(n, 0) + _unit(n, 1)] + _sp_subblock_roots(n, 2)
    cart = [lift_root(spec, 0, _unit(n, 0) + _unit(n, 1))]
    cart += [lift_root(spec, 0, _unit(n, i)) for i in range(2, n)]
    sub = SubalgebraSpec(cartan_h=tuple(cart), h_roots=tuple((0, r) for r in block))
    return build_coset(
        alg, sub, name=f"Sp({n})/Sp(1)Sp({n-2})-type zero-curvature witness",
        h_root_vectors=_negclose(lift_root(spec, 0, r) for r in block),
        case_label="III",
        witness_planes={"u": (0, _unit(n, 0).scale(2)),
                        "v": (0, _unit(n, 1).scale(2))},
    )


def _unit(n: int, i: int) -> RootVector:
    coords = [Q0] * n
    coords[i] = Q1
    return RootVector(tuple(coords))


def _coords_unit(n: int, i: int) -> list:
    coords = [0] * n
    coords[i] = 1
    return coords


_PRESETS = {
    "sphere_so2n": (preset_sphere_so2n, 1),
    "sphere_un": (preset_sphere_un, 1),
    "sphere_spn_u1": (preset_sphere_spn_u1, 1),
    "sphere_spn_sp1": (preset_sphere_spn_sp1, 1),
    "aloff_wallach": (preset_aloff_wallach, 2),
    "berger_sp2": (preset_berger_sp2, 0),
    "bn_excluded_subcase1": (preset_bn_excluded_subcase1, 1),
    "a1a1_diagonal": (preset_a1a1_diagonal, 1),
    "cn_excluded_subcase1": (preset_cn_excluded_subcase1, 1),
}


def preset(name: str, *params) -> CosetSpace:
    """Build a named preset coset space."""
    if name not in _PRESETS:
        raise ValueError(f"unknown preset {name!r}; know {sorted(_PRESETS)}")
    fn, nargs = _PRESETS[name]
    if len(params) != nargs:
        raise ValueError(f"preset {name} takes {nargs} parameter(s)")
    return fn(*params)


def space_from_json(obj: dict, name: str = "from file") -> CosetSpace:
    """Build a coset space from the space-definition JSON schema."""
    from .liealg import QuatMatrix as _QM
    import numpy as _np

    spec = AlgebraSpec.from_json(obj["algebra"])
    alg = realize(spec)
    cartan_h = tuple(tvec_from_json(spec, tv) for tv in obj.get("cartan_h", []))
    h_roots = []
    for entry in obj.get("h_roots", []):
        h_roots.append((int(entry["factor"]), RootVector.from_json(entry["root"])))
    extra = []
    for gen in obj.get("extra_generators", []):
        blocks = []
        for blk, f in zip(gen["blocks"], alg.factors):
            kind, data = blk["kind"], blk["data"]
            if kind == "quaternion":
                blocks.append(_QM(*[_np.array(c, dtype=float) for c in data]))
            elif kind == "complex":
                blocks.append(_np.array(data[0], dtype=float)
                              + 1j * _np.array(data[1], dtype=float))
            else:
                blocks.append(_np.array(data, dtype=float))
        extra.append(alg.from_blocks(blocks, _np.array(gen.get("abelian", []), dtype=float)
                                     if gen.get("abelian") else None))
    sub = SubalgebraSpec(cartan_h=cartan_h, h_roots=tuple(h_roots),
                         extra_generators=tuple(extra))
    hvecs = _negclose([lift_root(spec, f, r) for f, r in h_roots]) if h_roots else ()
    more = obj.get("h_root_vectors")
    if more is not None:
        hvecs = _negclose([tvec_from_json(spec, tv) for tv in more])
    return build_coset(alg, sub, name=obj.get("name", name), h_root_vectors=hvecs)


def parse_preset(text: str) -> CosetSpace:
    """Parse 'preset:name(p1,p2)' or 'preset:name' strings."""
    if not text.startswith("preset:"):
        raise ValueError("expected a 'preset:...' string")
    body = text[len("preset:"):]
    if "(" in body:
        name, rest = body.split("(", 1)
        if not rest.endswith(")"):
            raise ValueError("malformed preset parameters")
        args = [a.strip() for a in rest[:-1].split(",") if a.strip()]
        params = [Fraction(a) for a in args]
        params = [int(p) if p.denominator == 1 else p for p in params]
    else:
        name, params = body, []
    return preset(name.strip(), *params)


def _ad_exp(algebra: RealizedAlgebra, t: float, v: AlgebraElement):
    """Ad(exp(t v)) as a map on algebra elements (matrix conjugation)."""
    exps = []
    for f, b in zip(algebra.factors, v.blocks):
        if isinstance(b, QuatMatrix):
            cm = _quat_to_complex(b)
            exps.append(("quat", expm(t * cm), None))
        else:
            exps.append(("mat", expm(t * np.asarray(b, dtype=complex)), None))

    def apply(x: AlgebraElement) -> AlgebraElement:
        blocks = []
        for (kind, e, _), bx in zip(exps, x.blocks):
            if kind == "quat":
                cm = _quat_to_complex(bx)
                blocks.append(_complex_to_quat(e @ cm @ np.conj(e.T)))
            else:
                out = e @ np.asarray(bx, dtype=complex) @ np.conj(e.T)
                blocks.append(out if np.iscomplexobj(bx) else out.real)
        return algebra.from_blocks(blocks, x.abelian.copy())

    return apply


def _quat_to_complex(q: QuatMatrix) -> np.ndarray:
    """Standard embedding of an n x n quaternion matrix into C^{2n x 2n}."""
    a = q.w + 1j * q.x
    b = q.y + 1j * q.z
    return np.block([[a, b], [-np.conj(b), np.conj(a)]])


def _complex_to_quat(m: np.ndarray) -> QuatMatrix:
    n = m.shape[0] // 2
    a = m[:n, :n]
    b = m[:n, n:]
    return QuatMatrix(a.real, a.imag, b.real, b.imag)
