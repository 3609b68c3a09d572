"""Minkowski norms on m: values, Hessian inner products, Cartan tensors.

Three built-in families, all with closed-form derivatives:

  Quadratic(Q)            F(y) = sqrt(y'Qy)                  (Riemannian)
  Randers(Q, b)           F(y) = sqrt(y'Qy) + b'y            (non-reversible)
  Quartic(w_k, Q_k)       F(y) = (sum_k w_k (y'Q_k y)^2)^(1/4)  (reversible)

The Quartic family is positive definite whenever every Q_k is; it is this
library's reversible non-Riemannian test family.  A GenericNorm wrapper
provides finite-difference derivatives (central differences, relative step
1e-5, one Richardson level) for user-supplied norm callables; the same
machinery doubles as an independent cross-check oracle in the tests.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

FD_REL_STEP = 1e-5


class MinkowskiNorm:
    """Interface: value, gram (Hessian inner product matrix), cartan3."""

    dim: int
    reversible: bool

    def value(self, y: np.ndarray) -> float:
        raise NotImplementedError

    def gram(self, y: np.ndarray) -> np.ndarray:
        """Matrix of <u,v>_y over the declared m-basis."""
        raise NotImplementedError

    def cartan3(self, y, u, v, w) -> float:
        """Cartan tensor C_y(u,v,w)."""
        raise NotImplementedError

    def rescale(self, lam: float) -> "MinkowskiNorm":
        """The norm lam*F."""
        raise NotImplementedError

    def g_inner(self, y, u, v) -> float:
        g = self.gram(np.asarray(y, dtype=float))
        return float(np.asarray(u) @ g @ np.asarray(v))


def _check_nonzero(y: np.ndarray):
    if not np.any(np.abs(y) > 0):
        raise ValueError("Hessian undefined at the origin")


@dataclass
class Quadratic(MinkowskiNorm):
    q: np.ndarray

    def __post_init__(self):
        self.q = np.asarray(self.q, dtype=float)
        self.dim = self.q.shape[0]
        self.reversible = True

    def value(self, y) -> float:
        y = np.asarray(y, dtype=float)
        return float(np.sqrt(max(y @ self.q @ y, 0.0)))

    def gram(self, y) -> np.ndarray:
        _check_nonzero(np.asarray(y))
        return self.q.copy()

    def cartan3(self, y, u, v, w) -> float:
        _check_nonzero(np.asarray(y))
        return 0.0

    def rescale(self, lam: float) -> "Quadratic":
        return Quadratic(lam ** 2 * self.q)

    def to_json(self):
        return {"family": "quadratic", "gram": self.q.tolist()}


@dataclass
class Randers(MinkowskiNorm):
    q: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        self.q = np.asarray(self.q, dtype=float)
        self.b = np.asarray(self.b, dtype=float)
        self.dim = self.q.shape[0]
        self.reversible = bool(np.allclose(self.b, 0.0))
        qinv = np.linalg.solve(self.q, self.b)
        if self.b @ qinv >= 1.0:
            raise ValueError("Randers norm needs |b|_Q < 1 for positive definiteness")

    def value(self, y) -> float:
        y = np.asarray(y, dtype=float)
        return float(np.sqrt(max(y @ self.q @ y, 0.0)) + self.b @ y)

    def gram(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        _check_nonzero(y)
        qy = self.q @ y
        alpha = np.sqrt(y @ qy)
        beta = float(self.b @ y)
        g = (1.0 + beta / alpha) * self.q
        g -= (beta / alpha ** 3) * np.outer(qy, qy)
        mix = qy / alpha + self.b
        g += np.outer(mix, self.b) + np.outer(self.b, qy / alpha)
        # symmetric by construction: b b' appears once in `mix` @ b
        return 0.5 * (g + g.T)

    def cartan3(self, y, u, v, w) -> float:
        y = np.asarray(y, dtype=float)
        _check_nonzero(y)
        u, v, w = (np.asarray(t, dtype=float) for t in (u, v, w))
        qy = self.q @ y
        alpha = np.sqrt(y @ qy)
        beta = float(self.b @ y)
        au, av, aw = qy @ u / alpha, qy @ v / alpha, qy @ w / alpha

        def d2(x1, x2, a1, a2):
            return (x1 @ self.q @ x2) / alpha - a1 * a2 / alpha

        d3 = (
            -((u @ self.q @ v) * aw + (u @ self.q @ w) * av + (v @ self.q @ w) * au) / alpha ** 2
            + 3.0 * au * av * aw / alpha ** 2
        )
        # C = 1/4 D^3[F^2] with F^2 = alpha^2 + 2 alpha beta + beta^2
        val = 2.0 * (
            beta * d3
            + d2(u, v, au, av) * float(self.b @ w)
            + d2(u, w, au, aw) * float(self.b @ v)
            + d2(v, w, av, aw) * float(self.b @ u)
        )
        return 0.25 * val

    def rescale(self, lam: float) -> "Randers":
        return Randers(lam ** 2 * self.q, lam * self.b)

    def to_json(self):
        return {"family": "randers", "gram": self.q.tolist(), "b": self.b.tolist()}


@dataclass
class Quartic(MinkowskiNorm):
    weights: np.ndarray
    qs: Sequence[np.ndarray]

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        self.qs = [np.asarray(q, dtype=float) for q in self.qs]
        if np.any(self.weights < 0):
            raise ValueError("Quartic weights must be nonnegative")
        if not np.any(self.weights > 0):
            raise ValueError("Quartic needs at least one positive weight")
        self.dim = self.qs[0].shape[0]
        self.reversible = True

    def _p(self, y):
        vals = np.array([y @ q @ y for q in self.qs])
        return vals, float(self.weights @ vals ** 2)

    def value(self, y) -> float:
        y = np.asarray(y, dtype=float)
        _, p = self._p(y)
        return float(p ** 0.25)

    def _derivs(self, y):
        qy = [q @ y for q in self.qs]
        vals = np.array([float(y @ g) for g in qy])
        p = float(self.weights @ vals ** 2)
        return qy, vals, p

    def gram(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        _check_nonzero(y)
        qy, vals, p = self._derivs(y)
        dp = 4.0 * sum(w * v * g for w, v, g in zip(self.weights, vals, qy))
        d2p = sum(
            4.0 * w * (2.0 * np.outer(g, g) + v * q)
            for w, v, q, g in zip(self.weights, vals, self.qs, qy)
        )
        sp = np.sqrt(p)
        # half the Hessian of F^2 = sqrt(P)
        g = d2p / (4.0 * sp) - np.outer(dp, dp) / (8.0 * p * sp)
        return 0.5 * (g + g.T)

    def cartan3(self, y, u, v, w) -> float:
        y = np.asarray(y, dtype=float)
        _check_nonzero(y)
        u, v, w = (np.asarray(t, dtype=float) for t in (u, v, w))
        qy, vals, p = self._derivs(y)
        sp = np.sqrt(p)

        def dP(x):
            return 4.0 * float(sum(wk * vk * (gk @ x) for wk, vk, gk in zip(self.weights, vals, qy)))

        def d2P(x1, x2):
            return 4.0 * float(sum(
                wk * (2.0 * (gk @ x1) * (gk @ x2) + vk * (x1 @ qk @ x2))
                for wk, vk, qk, gk in zip(self.weights, vals, self.qs, qy)
            ))

        def d3P(x1, x2, x3):
            return 8.0 * float(sum(
                wk * ((x1 @ qk @ x2) * (gk @ x3) + (x1 @ qk @ x3) * (gk @ x2)
                      + (x2 @ qk @ x3) * (gk @ x1))
                for wk, qk, gk in zip(self.weights, self.qs, qy)
            ))

        du, dv, dw = dP(u), dP(v), dP(w)
        term = d3P(u, v, w) / (2.0 * sp)
        term -= (d2P(u, v) * dw + d2P(u, w) * dv + d2P(v, w) * du) / (4.0 * p * sp)
        term += 3.0 * du * dv * dw / (8.0 * p ** 2 * sp)
        return 0.25 * term

    def rescale(self, lam: float) -> "Quartic":
        return Quartic(lam ** 4 * self.weights, [q.copy() for q in self.qs])

    def to_json(self):
        return {
            "family": "quartic",
            "weights": self.weights.tolist(),
            "quadratics": [q.tolist() for q in self.qs],
        }


class GenericNorm(MinkowskiNorm):
    """Wrap a positively 1-homogeneous callable; derivatives by central
    finite differences with one Richardson extrapolation level."""

    def __init__(self, fn: Callable[[np.ndarray], float], dim: int,
                 reversible: bool = False, rel_step: float = FD_REL_STEP):
        self.fn = fn
        self.dim = dim
        self.reversible = reversible
        self.rel_step = rel_step

    def value(self, y) -> float:
        return float(self.fn(np.asarray(y, dtype=float)))

    def _f2(self, y):
        v = self.fn(y)
        return v * v

    def _d2(self, y, u, v, h):
        f = self._f2
        return (
            f(y + h * u + h * v) - f(y + h * u - h * v)
            - f(y - h * u + h * v) + f(y - h * u - h * v)
        ) / (4.0 * h * h)

    def g_fd(self, y, u, v) -> float:
        y = np.asarray(y, dtype=float)
        _check_nonzero(y)
        h = self.rel_step * np.linalg.norm(y)
        a = self._d2(y, u, v, h)
        b = self._d2(y, u, v, h / 2.0)
        return 0.5 * (4.0 * b - a) / 3.0

    def gram(self, y) -> np.ndarray:
        e = np.eye(self.dim)
        g = np.zeros((self.dim, self.dim))
        for i in range(self.dim):
            for j in range(i, self.dim):
                g[i, j] = g[j, i] = self.g_fd(y, e[i], e[j])
        return g

    def cartan3(self, y, u, v, w) -> float:
        y = np.asarray(y, dtype=float)
        _check_nonzero(y)
        u, v, w = (np.asarray(t, dtype=float) for t in (u, v, w))
        # direct 8-point stencil; nesting two central differences at the
        # gram step would lose everything to roundoff
        h = max(self.rel_step, 1e-3) * np.linalg.norm(y)
        tot = 0.0
        for su in (1.0, -1.0):
            for sv in (1.0, -1.0):
                for sw in (1.0, -1.0):
                    tot += su * sv * sw * self._f2(y + h * (su * u + sv * v + sw * w))
        return tot / (32.0 * h ** 3)

    def rescale(self, lam: float) -> "GenericNorm":
        return GenericNorm(lambda y: lam * self.fn(y), self.dim, self.reversible, self.rel_step)


# ---------------------------------------------------------------------------
# Finite-difference oracles (also used as the fallback path above).  For the
# built-in families the oracle evaluates F^2 in extended precision so the
# documented step 1e-5 is not drowned by float64 cancellation; user-supplied
# callables get the float64 path of GenericNorm.
# ---------------------------------------------------------------------------

def _mp_f2(norm: MinkowskiNorm):
    import mpmath
    if isinstance(norm, Quadratic):
        q = norm.q

        def f2(z):
            return sum(z[i] * sum(mpmath.mpf(q[i, j]) * z[j] for j in range(len(z)))
                       for i in range(len(z)))
        return f2
    if isinstance(norm, Randers):
        q, b = norm.q, norm.b

        def f2(z):
            quad = sum(z[i] * sum(mpmath.mpf(q[i, j]) * z[j] for j in range(len(z)))
                       for i in range(len(z)))
            lin = sum(mpmath.mpf(b[i]) * z[i] for i in range(len(z)))
            return (mpmath.sqrt(quad) + lin) ** 2
        return f2
    if isinstance(norm, Quartic):
        ws, qs = norm.weights, norm.qs

        def f2(z):
            p = mpmath.mpf(0)
            for w, q in zip(ws, qs):
                quad = sum(z[i] * sum(mpmath.mpf(q[i, j]) * z[j] for j in range(len(z)))
                           for i in range(len(z)))
                p += mpmath.mpf(w) * quad ** 2
            return mpmath.sqrt(p)
        return f2
    return None


def fd_g_inner(norm: MinkowskiNorm, y, u, v, rel_step: float = FD_REL_STEP) -> float:
    """Independent FD evaluation of <u,v>_y from norm values only."""
    y = np.asarray(y, dtype=float)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    f2 = _mp_f2(norm)
    if f2 is None:
        return GenericNorm(norm.value, norm.dim, norm.reversible, rel_step).g_fd(y, u, v)
    import mpmath
    with mpmath.workdps(40):
        h0 = mpmath.mpf(rel_step) * mpmath.mpf(float(np.linalg.norm(y)))
        ym = [mpmath.mpf(t) for t in y]

        def d2(h):
            def at(su, sv):
                z = [ym[i] + h * (su * mpmath.mpf(u[i]) + sv * mpmath.mpf(v[i]))
                     for i in range(len(ym))]
                return f2(z)
            return (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4 * h * h)

        a, b = d2(h0), d2(h0 / 2)
        return float(0.5 * (4 * b - a) / 3)


def fd_cartan(norm: MinkowskiNorm, y, u, v, w, rel_step: float = FD_REL_STEP) -> float:
    """Independent FD evaluation of C_y(u,v,w) from norm values only."""
    y = np.asarray(y, dtype=float)
    f2 = _mp_f2(norm)
    if f2 is None:
        return GenericNorm(norm.value, norm.dim, norm.reversible, rel_step).cartan3(y, u, v, w)
    import mpmath
    u, v, w = (np.asarray(t, dtype=float) for t in (u, v, w))
    with mpmath.workdps(40):
        h = mpmath.mpf(rel_step) * mpmath.mpf(float(np.linalg.norm(y)))
        ym = [mpmath.mpf(t) for t in y]
        tot = mpmath.mpf(0)
        for su in (1, -1):
            for sv in (1, -1):
                for sw in (1, -1):
                    z = [ym[i] + h * (su * mpmath.mpf(u[i]) + sv * mpmath.mpf(v[i])
                                      + sw * mpmath.mpf(w[i]))
                         for i in range(len(ym))]
                    tot += su * sv * sw * f2(z)
        return float(tot / (32 * h ** 3))


def evaluate(norm: MinkowskiNorm, y) -> float:
    """Norm value at y (0 at the origin)."""
    return norm.value(y)


def g_inner(norm: MinkowskiNorm, y, u, v) -> float:
    """Hessian inner product <u, v>_y."""
    return norm.g_inner(y, u, v)


def cartan(norm: MinkowskiNorm, y, u, v, w) -> float:
    """Cartan tensor C_y(u, v, w): half the derivative of <u,v>_. at y in
    the direction w."""
    return norm.cartan3(y, u, v, w)


def norm_from_json(obj) -> MinkowskiNorm:
    fam = obj["family"]
    if fam == "quadratic":
        return Quadratic(np.array(obj["gram"]))
    if fam == "randers":
        return Randers(np.array(obj["gram"]), np.array(obj["b"]))
    if fam == "quartic":
        return Quartic(np.array(obj["weights"]), [np.array(q) for q in obj["quadratics"]])
    raise ValueError(f"unknown norm family {fam!r}")


def norm_to_json_str(norm: MinkowskiNorm) -> str:
    return json.dumps(norm.to_json(), sort_keys=True)


# ---------------------------------------------------------------------------
# Invariance
# ---------------------------------------------------------------------------

def check_invariance(norm: MinkowskiNorm, space, n_samples: int = 20,
                     seed: int = 0) -> dict:
    """Infinitesimal invariance of the norm under the h-action on m.

    Verifies <[h,u],v>_y + <u,[h,v]>_y + 2 C_y([h,y],u,v) = 0 over the
    h-basis and random y, u, v; returns the max residual (scale-normalized).
    """
    rng = np.random.default_rng(seed)
    _, _, Kh = space.structure_tensors()
    worst = 0.0
    for _ in range(n_samples):
        y = rng.standard_normal(space.dim_m)
        y /= np.linalg.norm(y)
        u = rng.standard_normal(space.dim_m)
        v = rng.standard_normal(space.dim_m)
        g = norm.gram(y)
        scale = max(np.abs(g).max(), 1.0)
        for a in range(space.dim_h):
            hu = Kh[a] @ u
            hv = Kh[a] @ v
            hy = Kh[a] @ y
            r = hu @ g @ v + u @ g @ hv + 2.0 * norm.cartan3(y, u, v, hy)
            worst = max(worst, abs(r) / scale)
    return {"max_residual": worst, "samples": n_samples}


def invariant_quadratic_space(space, tol: float = 1e-8) -> list:
    """Basis of Ad(h)-invariant symmetric forms on m: symmetric matrices
    commuting with every ad(h)|_m (the m-basis is bi-invariant orthonormal,
    so ad(h)|_m is skew and invariance reads [ad(h), S] = 0)."""
    _, _, Kh = space.structure_tensors()
    d = space.dim_m
    pairs = [(i, j) for i in range(d) for j in range(i, d)]
    rows = []
    for A in Kh:
        # map S -> A S - S A, restricted to symmetric S
        M = np.zeros((d * d, len(pairs)))
        for idx, (i, j) in enumerate(pairs):
            S = np.zeros((d, d))
            S[i, j] = S[j, i] = 1.0
            M[:, idx] = (A @ S - S @ A).ravel()
        rows.append(M)
    stack = np.vstack(rows) if rows else np.zeros((1, len(pairs)))
    _, sv, vt = np.linalg.svd(stack)
    null = [vt[k] for k in range(vt.shape[0]) if (sv[k] if k < len(sv) else 0.0) < tol]
    out = []
    for coeffs in null:
        S = np.zeros((d, d))
        for c, (i, j) in zip(coeffs, pairs):
            S[i, j] += c
            S[j, i] += c if i != j else 0.0
        out.append(0.5 * (S + S.T))
    return out


def random_invariant_norm(space, seed: int, k: int = 3) -> Quartic:
    """Deterministic reversible quartic norm built from random positive
    combinations of Ad(h)-invariant quadratics (each made positive
    definite by an identity shift)."""
    rng = np.random.default_rng(seed)
    basis = invariant_quadratic_space(space)
    d = space.dim_m
    qs = []
    for _ in range(k):
        coeffs = rng.standard_normal(len(basis))
        S = sum(c * B for c, B in zip(coeffs, basis))
        S = 0.5 * (S + S.T)
        lo = float(np.linalg.eigvalsh(S).min())
        S = S + (abs(lo) + 0.35 + 0.4 * rng.random()) * np.eye(d)
        qs.append(S)
    weights = 0.25 + rng.random(k)
    return Quartic(weights, qs)
