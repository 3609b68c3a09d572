"""Matrix realizations of the classical compact Lie algebras.

su(n+1), so(m) and sp(n) are realized with the standard Cartan generators
and root-plane bases; sp(n) is kept in native quaternion scalars.  The
bi-invariant inner product is -Re tr(xy) per factor, normalized so that the
Cartan generators realize the root-system coordinates isometrically (factor
1/2 for the orthogonal families), with an optional positive scale per factor
and the Euclidean product on the abelian part.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .rootsys import RootVector, build_root_system


@dataclass(frozen=True)
class Quaternion:
    """Real quaternion w + x*i + y*j + z*k."""

    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __add__(self, o: "Quaternion") -> "Quaternion":
        return Quaternion(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)

    def __mul__(self, o: "Quaternion") -> "Quaternion":
        return Quaternion(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm2(self) -> float:
        return self.w ** 2 + self.x ** 2 + self.y ** 2 + self.z ** 2


class QuatMatrix:
    """Quaternionic matrix stored as four real component matrices."""

    __slots__ = ("w", "x", "y", "z")

    def __init__(self, w, x=None, y=None, z=None):
        self.w = np.asarray(w, dtype=float)
        sh = self.w.shape
        self.x = np.zeros(sh) if x is None else np.asarray(x, dtype=float)
        self.y = np.zeros(sh) if y is None else np.asarray(y, dtype=float)
        self.z = np.zeros(sh) if z is None else np.asarray(z, dtype=float)

    @staticmethod
    def zeros(n: int) -> "QuatMatrix":
        return QuatMatrix(np.zeros((n, n)))

    @staticmethod
    def unit(n: int, i: int, j: int, part: str, value: float = 1.0) -> "QuatMatrix":
        m = QuatMatrix.zeros(n)
        getattr(m, part)[i, j] = value
        return m

    def copy(self) -> "QuatMatrix":
        return QuatMatrix(self.w.copy(), self.x.copy(), self.y.copy(), self.z.copy())

    def __add__(self, o: "QuatMatrix") -> "QuatMatrix":
        return QuatMatrix(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)

    def __sub__(self, o: "QuatMatrix") -> "QuatMatrix":
        return QuatMatrix(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)

    def __rmul__(self, c: float) -> "QuatMatrix":
        return QuatMatrix(c * self.w, c * self.x, c * self.y, c * self.z)

    def matmul(self, o: "QuatMatrix") -> "QuatMatrix":
        # quaternion product expanded over the i,j,k components
        return QuatMatrix(
            self.w @ o.w - self.x @ o.x - self.y @ o.y - self.z @ o.z,
            self.w @ o.x + self.x @ o.w + self.y @ o.z - self.z @ o.y,
            self.w @ o.y - self.x @ o.z + self.y @ o.w + self.z @ o.x,
            self.w @ o.z + self.x @ o.y - self.y @ o.x + self.z @ o.w,
        )

    def conj_t(self) -> "QuatMatrix":
        return QuatMatrix(self.w.T.copy(), -self.x.T.copy(), -self.y.T.copy(), -self.z.T.copy())

    def re_trace(self) -> float:
        return float(np.trace(self.w))

    def frob2(self) -> float:
        return float((self.w ** 2 + self.x ** 2 + self.y ** 2 + self.z ** 2).sum())

    def entry(self, i: int, j: int) -> Quaternion:
        return Quaternion(self.w[i, j], self.x[i, j], self.y[i, j], self.z[i, j])

    def to_json(self):
        return [self.w.tolist(), self.x.tolist(), self.y.tolist(), self.z.tolist()]


@dataclass(frozen=True)
class AlgebraSpec:
    """Direct-sum description: classical simple factors plus an abelian part.

    abelian_scales are positive rational weights of the Euclidean product on
    the abelian coordinates; they keep Cartan bookkeeping exact for
    presentations like u(n) = R + su(n) at every rank.
    """

    factors: tuple  # of (family, rank, scale: Fraction)
    abelian_dim: int = 0
    abelian_scales: tuple = ()

    def __post_init__(self):
        norm = []
        for fam, rank, scale in self.factors:
            s = scale if isinstance(scale, Fraction) else Fraction(scale)
            if s <= 0:
                raise ValueError("factor scale must be positive")
            norm.append((fam.upper(), int(rank), s))
        object.__setattr__(self, "factors", tuple(norm))
        if self.abelian_dim < 0:
            raise ValueError("abelian_dim must be nonnegative")
        sc = tuple(Fraction(s) for s in self.abelian_scales)
        if not sc:
            sc = tuple(Fraction(1) for _ in range(self.abelian_dim))
        if len(sc) != self.abelian_dim or any(s <= 0 for s in sc):
            raise ValueError("abelian_scales must list one positive weight per abelian coordinate")
        object.__setattr__(self, "abelian_scales", sc)

    def to_json(self):
        return {
            "factors": [
                {"family": f, "rank": r, "scale": str(s)} for f, r, s in self.factors
            ],
            "abelian_dim": self.abelian_dim,
            "abelian_scales": [str(s) for s in self.abelian_scales],
        }

    @staticmethod
    def from_json(obj) -> "AlgebraSpec":
        return AlgebraSpec(
            tuple(
                (f["family"], f["rank"], Fraction(f["scale"]))
                for f in obj["factors"]
            ),
            obj.get("abelian_dim", 0),
            tuple(Fraction(s) for s in obj.get("abelian_scales", [])),
        )


class AlgebraElement:
    """Element of a realized algebra: one matrix block per factor, plus an
    abelian component vector."""

    __slots__ = ("algebra", "blocks", "abelian")

    def __init__(self, algebra: "RealizedAlgebra", blocks, abelian=None):
        self.algebra = algebra
        self.blocks = list(blocks)
        self.abelian = (
            np.zeros(algebra.spec.abelian_dim)
            if abelian is None
            else np.asarray(abelian, dtype=float)
        )

    def copy(self) -> "AlgebraElement":
        return AlgebraElement(
            self.algebra,
            [b.copy() for b in self.blocks],
            self.abelian.copy(),
        )

    def __add__(self, o: "AlgebraElement") -> "AlgebraElement":
        self._check(o)
        return AlgebraElement(
            self.algebra,
            [a + b for a, b in zip(self.blocks, o.blocks)],
            self.abelian + o.abelian,
        )

    def __sub__(self, o: "AlgebraElement") -> "AlgebraElement":
        self._check(o)
        return AlgebraElement(
            self.algebra,
            [a - b for a, b in zip(self.blocks, o.blocks)],
            self.abelian - o.abelian,
        )

    def __rmul__(self, c: float) -> "AlgebraElement":
        return AlgebraElement(
            self.algebra, [c * b for b in self.blocks], c * self.abelian
        )

    def __neg__(self) -> "AlgebraElement":
        return (-1.0) * self

    def _check(self, o: "AlgebraElement"):
        if o.algebra is not self.algebra:
            raise ValueError("algebra spec mismatch")

    def norm(self) -> float:
        return float(np.sqrt(max(self.algebra.inner(self, self), 0.0)))

    def frob2(self) -> float:
        """Plain component-wise squared magnitude, for residual reporting."""
        out = float(self.abelian @ self.abelian)
        for b in self.blocks:
            if isinstance(b, QuatMatrix):
                out += b.frob2()
            else:
                out += float((np.abs(b) ** 2).sum())
        return out

    def to_json(self):
        blocks = []
        for b in self.blocks:
            if isinstance(b, QuatMatrix):
                blocks.append({"kind": "quaternion", "data": b.to_json()})
            elif np.iscomplexobj(b):
                blocks.append(
                    {"kind": "complex", "data": [b.real.tolist(), b.imag.tolist()]}
                )
            else:
                blocks.append({"kind": "real", "data": b.tolist()})
        return {"blocks": blocks, "abelian": self.abelian.tolist()}


@dataclass
class RootPlanePair:
    """Root plane of a realized factor: two orthonormal basis matrices.

    Orientation is normalized so that bracketing with a Cartan element h
    sends x to <alpha, h>*y and y to -<alpha, h>*x.
    """

    factor: int
    root: RootVector
    x: AlgebraElement
    y: AlgebraElement


def _su_cartan(n1: int) -> list:
    return [1j * _eij(n1, i, i, complex) for i in range(n1)]


def _eij(n: int, i: int, j: int, dtype) -> np.ndarray:
    m = np.zeros((n, n), dtype=dtype)
    m[i, j] = 1
    return m


class RealizedAlgebra:
    """Concrete matrix model of an AlgebraSpec with root-plane bases."""

    def __init__(self, spec: AlgebraSpec):
        for fam, rank, _ in spec.factors:
            if fam not in ("A", "B", "C", "D"):
                raise ValueError(
                    f"no matrix realization for factor {fam}{rank}; root-level only"
                )
        self.spec = spec
        self.factors = []
        for idx, (fam, rank, scale) in enumerate(spec.factors):
            self.factors.append(_FactorRealization(self, idx, fam, rank, scale))
        for f in self.factors:
            f.init_planes()
        self.dim = sum(f.dim for f in self.factors) + spec.abelian_dim
        self._ambient_basis: Optional[list] = None

    # -- element constructors -------------------------------------------
    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, [f.zero_block() for f in self.factors])

    def from_blocks(self, blocks, abelian=None) -> AlgebraElement:
        return AlgebraElement(self, blocks, abelian)

    def single_block(self, factor: int, block, abelian=None) -> AlgebraElement:
        blocks = [f.zero_block() for f in self.factors]
        blocks[factor] = block
        return AlgebraElement(self, blocks, abelian)

    def abelian_unit(self, k: int) -> AlgebraElement:
        v = np.zeros(self.spec.abelian_dim)
        v[k] = 1.0 / float(self.spec.abelian_scales[k]) ** 0.5
        return AlgebraElement(self, [f.zero_block() for f in self.factors], v)

    # -- core operations --------------------------------------------------
    def bracket(self, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
        x._check(y)
        blocks = []
        for f, a, b in zip(self.factors, x.blocks, y.blocks):
            blocks.append(f.commutator(a, b))
        return AlgebraElement(self, blocks)  # abelian part of a bracket is zero

    def inner(self, x: AlgebraElement, y: AlgebraElement) -> float:
        x._check(y)
        out = 0.0
        for s, xa, ya in zip(self.spec.abelian_scales, x.abelian, y.abelian):
            out += float(s) * float(xa) * float(ya)
        for f, a, b in zip(self.factors, x.blocks, y.blocks):
            out += f.weight * f.re_trace_product(a, b)
        return out

    def cartan_embed(self, vectors: Sequence[Optional[RootVector]], abelian=None) -> AlgebraElement:
        """Element of t whose inner products against Cartan generators
        reproduce the given exact per-factor coordinates."""
        blocks = []
        for f, v in zip(self.factors, vectors):
            blocks.append(f.cartan_block(v))
        return AlgebraElement(self, blocks, abelian)

    def random_element(self, rng: np.random.Generator) -> AlgebraElement:
        basis = self.ambient_basis()
        coeff = rng.standard_normal(len(basis))
        out = self.zero()
        for c, b in zip(coeff, basis):
            out = out + float(c) * b
        return out

    def ambient_basis(self) -> list:
        """Orthonormal basis of the whole algebra under the bi-invariant
        inner product (cached)."""
        if self._ambient_basis is None:
            raw = []
            for f in self.factors:
                raw.extend(f.spanning_set())
            for k in range(self.spec.abelian_dim):
                raw.append(self.abelian_unit(k))
            self._ambient_basis = gram_schmidt(self, raw)
            assert len(self._ambient_basis) == self.dim
        return self._ambient_basis

    def coords(self, x: AlgebraElement) -> np.ndarray:
        basis = self.ambient_basis()
        return np.array([self.inner(x, b) for b in basis])

    def from_coords(self, c: np.ndarray) -> AlgebraElement:
        basis = self.ambient_basis()
        out = self.zero()
        for ci, b in zip(c, basis):
            out = out + float(ci) * b
        return out


class _FactorRealization:
    """One classical factor: Cartan generators and root planes."""

    def __init__(self, algebra: RealizedAlgebra, index: int, fam: str, rank: int, scale: Fraction):
        self.algebra = algebra
        self.index = index
        self.family = fam
        self.rank = rank
        self.scale = scale
        self.root_system = build_root_system(fam, rank, _relaxed=True)
        if fam == "A":
            self.kind = "complex"
            self.size = rank + 1
            self.dim = (rank + 1) ** 2 - 1
            self.kappa = Fraction(1)
        elif fam in ("B", "D"):
            self.kind = "real"
            self.size = 2 * rank + 1 if fam == "B" else 2 * rank
            self.dim = self.size * (self.size - 1) // 2
            self.kappa = Fraction(1, 2)
        else:  # C
            self.kind = "quaternion"
            self.size = rank
            self.dim = rank * (2 * rank + 1)
            self.kappa = Fraction(1)
        self.weight = float(self.kappa * scale)
        ncart = rank + 1 if fam == "A" else rank  # A uses ambient coordinates
        self.cartan = [self._cartan_matrix(i) for i in range(ncart)]
        self.planes = {}

    def init_planes(self):
        for root in self.root_system.roots:
            key = self._canonical(root)
            if key not in self.planes:
                self.planes[key] = self._build_plane(key)

    # -- block-level helpers ----------------------------------------------
    def zero_block(self):
        if self.kind == "complex":
            return np.zeros((self.size, self.size), dtype=complex)
        if self.kind == "real":
            return np.zeros((self.size, self.size))
        return QuatMatrix.zeros(self.size)

    def commutator(self, a, b):
        if isinstance(a, QuatMatrix):
            return a.matmul(b) - b.matmul(a)
        return a @ b - b @ a

    def re_trace_product(self, a, b) -> float:
        if isinstance(a, QuatMatrix):
            return -a.matmul(b).re_trace()
        return float(-np.trace(a @ b).real)

    def _canonical(self, root: RootVector) -> RootVector:
        return root if root._sort_key() >= (-root)._sort_key() else -root

    def _cartan_matrix(self, i: int):
        n = self.size
        if self.family == "A":
            return 1j * _eij(n, i, i, complex)
        if self.family == "B":
            # rows 2i+1, 2i+2 in zero-based indexing (row 0 is the extra axis)
            a, b = 2 * i + 1, 2 * i + 2
            return _eij(n, a, b, float) - _eij(n, b, a, float)
        if self.family == "D":
            a, b = 2 * i, 2 * i + 1
            return _eij(n, a, b, float) - _eij(n, b, a, float)
        return QuatMatrix.unit(self.size, i, i, "x")  # sp: i*E_ii

    def cartan_block(self, v: Optional[RootVector]):
        if v is None:
            return self.zero_block()
        if self.family == "A":
            if v.ambient_dim != self.rank + 1:
                raise ValueError("dimension mismatch for A-factor Cartan vector")
        elif v.ambient_dim != self.rank:
            raise ValueError("dimension mismatch for Cartan vector")
        out = self.zero_block()
        for coef, h in zip(v.coords, self.cartan):
            out = out + float(coef) * h
        if self.family == "A":
            tr = np.trace(out) / self.size
            out = out - tr * np.eye(self.size)
        return out

    def spanning_set(self) -> list:
        """Natural spanning elements of the factor, as AlgebraElements."""
        out = []
        n = self.size
        alg = self.algebra

        def put(block):
            out.append(alg.single_block(self.index, block))

        if self.kind == "complex":
            for i in range(n - 1):
                d = np.zeros((n, n), dtype=complex)
                d[i, i] = 1j
                d[i + 1, i + 1] = -1j
                put(d)
            for i in range(n):
                for j in range(i + 1, n):
                    put(_eij(n, i, j, complex) - _eij(n, j, i, complex))
                    put(1j * (_eij(n, i, j, complex) + _eij(n, j, i, complex)))
        elif self.kind == "real":
            for i in range(n):
                for j in range(i + 1, n):
                    put(_eij(n, i, j, float) - _eij(n, j, i, float))
        else:
            for i in range(n):
                for part in ("x", "y", "z"):
                    put(QuatMatrix.unit(n, i, i, part))
            for i in range(n):
                for j in range(i + 1, n):
                    m = QuatMatrix.zeros(n)
                    m.w[i, j] = 1.0
                    m.w[j, i] = -1.0
                    put(m)
                    for part in ("x", "y", "z"):
                        m = QuatMatrix.zeros(n)
                        getattr(m, part)[i, j] = 1.0
                        getattr(m, part)[j, i] = 1.0
                        put(m)
        return out

    # -- root planes --------------------------------------------------------
    def _plane_span(self, root: RootVector) -> tuple:
        """Raw spanning matrices of the root plane, straight from the
        standard presentations."""
        f = self.family
        n = self.size
        cf = root.floats()
        if f == "A":
            idx = [k for k, c in enumerate(cf) if abs(c) > 0.5]
            i, j = idx
            if cf[i] < 0:
                i, j = j, i
            return (
                _eij(n, i, j, complex) - _eij(n, j, i, complex),
                1j * (_eij(n, i, j, complex) + _eij(n, j, i, complex)),
            )
        if f in ("B", "D"):
            off = 1 if f == "B" else 0

            def rows(k):  # zero-based row pair carrying e_{k+1}
                return 2 * k + off, 2 * k + off + 1

            nz = [k for k, c in enumerate(cf) if abs(c) > 0.5]
            if len(nz) == 1:
                k = nz[0]
                a, b = rows(k)
                return (
                    _eij(n, a, 0, float) - _eij(n, 0, a, float),
                    _eij(n, b, 0, float) - _eij(n, 0, b, float),
                )
            ki, kj = nz
            ai, bi = rows(ki)
            aj, bj = rows(kj)
            same = cf[ki] * cf[kj] < 0  # e_i - e_j type
            if same:
                x = (
                    _eij(n, ai, aj, float) + _eij(n, bi, bj, float)
                    - _eij(n, aj, ai, float) - _eij(n, bj, bi, float)
                )
                y = (
                    _eij(n, ai, bj, float) - _eij(n, bi, aj, float)
                    + _eij(n, aj, bi, float) - _eij(n, bj, ai, float)
                )
            else:
                x = (
                    _eij(n, ai, aj, float) - _eij(n, bi, bj, float)
                    - _eij(n, aj, ai, float) + _eij(n, bj, bi, float)
                )
                y = (
                    _eij(n, ai, bj, float) + _eij(n, bi, aj, float)
                    - _eij(n, aj, bi, float) - _eij(n, bj, ai, float)
                )
            return x, y
        # sp(n)
        nz = [k for k, c in enumerate(cf) if abs(c) > 0.5]
        if len(nz) == 1:
            i = nz[0]
            return (
                QuatMatrix.unit(n, i, i, "y"),
                QuatMatrix.unit(n, i, i, "z"),
            )
        i, j = nz
        if cf[i] * cf[j] < 0:
            if cf[i] < 0:
                i, j = j, i
            x = QuatMatrix.zeros(n)
            x.w[i, j] = 1.0
            x.w[j, i] = -1.0
            y = QuatMatrix.zeros(n)
            y.x[i, j] = 1.0
            y.x[j, i] = 1.0
            return x, y
        x = QuatMatrix.zeros(n)
        x.y[i, j] = 1.0
        x.y[j, i] = 1.0
        y = QuatMatrix.zeros(n)
        y.z[i, j] = 1.0
        y.z[j, i] = 1.0
        return x, y

    def _build_plane(self, root: RootVector) -> RootPlanePair:
        alg = self.algebra
        xr, yr = self._plane_span(root)
        x = alg.single_block(self.index, xr)
        y = alg.single_block(self.index, yr)
        nx = x.norm()
        x = (1.0 / nx) * x
        y = y - alg.inner(y, x) * x
        y = (1.0 / y.norm()) * y
        # orientation: [h, x] = <root, h> y for Cartan elements h
        h = alg.cartan_embed(
            [root if k == self.index else None for k in range(len(alg.factors))]
        )
        speed = float(root.dot(root)) * float(self.scale)
        bx = alg.bracket(h, x)
        if alg.inner(bx, y) < 0:
            y = -1.0 * y
        resid = (bx - alg.inner(bx, y) * y).norm()
        if resid > 1e-9 * max(1.0, speed):
            raise AssertionError(f"root plane misaligned for {self.family}{self.rank} root {root}")
        return RootPlanePair(self.index, root, x, y)

    def plane(self, root: RootVector) -> RootPlanePair:
        return self.planes[self._canonical(root)]


def realize(spec: AlgebraSpec) -> RealizedAlgebra:
    """Realize all classical factors of the spec as matrices."""
    return RealizedAlgebra(spec)


def bracket(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return x.algebra.bracket(x, y)


def inner(x: AlgebraElement, y: AlgebraElement) -> float:
    return x.algebra.inner(x, y)


def cartan_embed(algebra: RealizedAlgebra, vectors, abelian=None) -> AlgebraElement:
    """Cartan element whose inner products against the generators reproduce
    the given exact per-factor coordinates (su blocks made traceless)."""
    return algebra.cartan_embed(vectors, abelian)


def gram_schmidt(alg: RealizedAlgebra, elements: Iterable[AlgebraElement],
                 tol: float = 1e-10) -> list:
    """Orthonormalize under the bi-invariant inner product, dropping
    numerically dependent elements."""
    basis: list = []
    for e in elements:
        v = e.copy()
        for _ in range(2):  # two passes for numerical stability
            for b in basis:
                v = v - alg.inner(v, b) * b
        nv = v.norm()
        if nv > tol:
            basis.append((1.0 / nv) * v)
    return basis
