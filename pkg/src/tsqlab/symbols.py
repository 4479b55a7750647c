"""Anti-Wick symbol calculus on bosonic phase space.

Polynomial symbols in the complex mode amplitudes (alpha, alpha*) supply
everything downstream modules consume: Wirtinger derivatives, the real
drift field of the first-order (continuity) part of the Husimi evolution
equation, the traceless diffusion matrix of its second-order part, and
the orthogonal quadrature frame in which that matrix becomes
diag(+d*I, -d*I).

Conventions, fixed once and used everywhere in this package:

    alpha_i = (x_i + 1j * y_i) / sqrt(2)
    phi     = (x_1..x_N, y_1..y_N), a real vector of length 2N

Phase-space densities are taken with respect to d phi.  For a symbol H
the evolution equation of a density q(phi) truncates, when H is at most
quadratic in the alphas jointly and in the alpha*s jointly, to

    dq/dt = -sum_mu d_mu (A_mu q) + (1/2) sum_ab d_a d_b (D_ab q)

with drift A and diffusion D as produced by :func:`drift_field` and
:func:`diffusion_matrix`:

    v_i  = -1j * dH/dalpha*_i            (complex velocity, dalpha_i/dt)
    A    = (sqrt(2) Re v, sqrt(2) Im v)  (quadrature components)
    B_ij = d^2 H / dalpha_i dalpha_j
    D    = hbar * [[Im B, Re B], [Re B, -Im B]]

trace(D) = 0 holds identically for every hermitian symbol.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

HERMITIAN_TOL = 1e-12
ZERO_COEF_TOL = 0.0  # stored coefficients are exact; drop only exact zeros


class DimensionMismatchError(ValueError):
    """Mode counts of two symbol-calculus objects disagree."""


class UnsupportedHamiltonianError(ValueError):
    """Symbol outside the class an operation supports."""


class NonTracelessDiffusionError(ValueError):
    """Constant diffusion matrix whose spectrum is not balanced +/- d."""


@dataclass(frozen=True)
class MultiIndex:
    """Pair of per-mode power vectors for alpha and alpha*."""

    powers_alpha: tuple
    powers_alpha_star: tuple

    def __post_init__(self):
        a, b = self.powers_alpha, self.powers_alpha_star
        if len(a) != len(b):
            raise DimensionMismatchError(
                f"power vectors have lengths {len(a)} and {len(b)}")
        if any(p < 0 for p in a) or any(p < 0 for p in b):
            raise ValueError("powers must be nonnegative")
        object.__setattr__(self, "powers_alpha", tuple(int(p) for p in a))
        object.__setattr__(self, "powers_alpha_star", tuple(int(p) for p in b))

    @property
    def num_modes(self):
        return len(self.powers_alpha)

    def swapped(self):
        """Multi-index with alpha and alpha* powers exchanged."""
        return MultiIndex(self.powers_alpha_star, self.powers_alpha)


class ComplexPolynomial:
    """Finitely supported map from multi-indices to complex coefficients.

    Immutable after construction.  ``hbar`` is a dimensionless parameter
    carried along so the second-order (diffusion) part of the evolution
    equation can be scaled without touching coefficients.
    """

    def __init__(self, num_modes, terms, hbar=1.0):
        if num_modes < 1:
            raise ValueError("num_modes must be positive")
        if hbar <= 0:
            raise ValueError("hbar must be positive")
        clean = {}
        for mi, coef in terms.items():
            if not isinstance(mi, MultiIndex):
                mi = MultiIndex(tuple(mi[0]), tuple(mi[1]))
            if mi.num_modes != num_modes:
                raise DimensionMismatchError(
                    f"term {mi} has {mi.num_modes} modes, expected {num_modes}")
            c = complex(coef)
            if c != 0:
                clean[mi] = clean.get(mi, 0.0 + 0.0j) + c
        self._num_modes = int(num_modes)
        self._terms = {mi: c for mi, c in clean.items() if c != 0}
        self._hbar = float(hbar)

    @property
    def num_modes(self):
        return self._num_modes

    @property
    def hbar(self):
        return self._hbar

    @property
    def terms(self):
        return dict(self._terms)

    def with_hbar(self, hbar):
        return ComplexPolynomial(self._num_modes, self._terms, hbar=hbar)

    @classmethod
    def zero(cls, num_modes, hbar=1.0):
        return cls(num_modes, {}, hbar=hbar)

    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = ComplexPolynomial(
                self._num_modes,
                {MultiIndex((0,) * self._num_modes, (0,) * self._num_modes): other},
                hbar=self._hbar)
        if other.num_modes != self._num_modes:
            raise DimensionMismatchError("mode counts differ")
        out = dict(self._terms)
        for mi, c in other._terms.items():
            out[mi] = out.get(mi, 0.0 + 0.0j) + c
        return ComplexPolynomial(self._num_modes, out, hbar=self._hbar)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return ComplexPolynomial(
                self._num_modes,
                {mi: c * other for mi, c in self._terms.items()},
                hbar=self._hbar)
        if other.num_modes != self._num_modes:
            raise DimensionMismatchError("mode counts differ")
        out = {}
        for mi1, c1 in self._terms.items():
            for mi2, c2 in other._terms.items():
                mi = MultiIndex(
                    tuple(p + q for p, q in zip(mi1.powers_alpha, mi2.powers_alpha)),
                    tuple(p + q for p, q in zip(mi1.powers_alpha_star,
                                                mi2.powers_alpha_star)))
                out[mi] = out.get(mi, 0.0 + 0.0j) + c1 * c2
        return ComplexPolynomial(self._num_modes, out, hbar=self._hbar)

    __rmul__ = __mul__
    __radd__ = __add__

    def __sub__(self, other):
        return self + (other * -1.0)

    def conjugate_symbol(self):
        """Complex conjugate as a phase-space function (swap powers)."""
        return ComplexPolynomial(
            self._num_modes,
            {mi.swapped(): np.conj(c) for mi, c in self._terms.items()},
            hbar=self._hbar)

    def is_hermitian_symbol(self, tol=HERMITIAN_TOL):
        """True when the symbol is real-valued on the physical slice."""
        scale = max((abs(c) for c in self._terms.values()), default=1.0)
        for mi, c in self._terms.items():
            partner = self._terms.get(mi.swapped(), 0.0 + 0.0j)
            if abs(partner - np.conj(c)) > tol * max(scale, 1.0):
                return False
        return True

    def degree_alpha(self):
        """Total degree in the unstarred variables."""
        return max((sum(mi.powers_alpha) for mi in self._terms), default=0)

    def degree_alpha_star(self):
        return max((sum(mi.powers_alpha_star) for mi in self._terms), default=0)

    def degree_per_mode(self):
        """Max power of any single alpha_i or alpha*_i."""
        deg = 0
        for mi in self._terms:
            deg = max(deg, max(mi.powers_alpha), max(mi.powers_alpha_star))
        return deg

    def evaluate(self, alpha):
        """Evaluate at complex amplitudes, shape (..., N) -> (...)."""
        alpha = np.asarray(alpha, dtype=complex)
        if alpha.shape[-1] != self._num_modes:
            raise DimensionMismatchError(
                f"expected last axis {self._num_modes}, got {alpha.shape[-1]}")
        out = np.zeros(alpha.shape[:-1], dtype=complex)
        ac = np.conj(alpha)
        for mi, c in self._terms.items():
            term = np.full(alpha.shape[:-1], c, dtype=complex)
            for i, p in enumerate(mi.powers_alpha):
                if p:
                    term = term * alpha[..., i] ** p
            for i, p in enumerate(mi.powers_alpha_star):
                if p:
                    term = term * ac[..., i] ** p
            out += term
        return out

    def evaluate_phi(self, phi):
        """Evaluate at quadrature points, shape (..., 2N) -> (...)."""
        return self.evaluate(alpha_from_phi(phi, self._num_modes))

    def to_text(self):
        """One term per line: N alpha powers, N alpha* powers, re, im."""
        lines = [f"# modes={self._num_modes} hbar={self._hbar!r}"]
        for mi in sorted(self._terms,
                         key=lambda m: (m.powers_alpha, m.powers_alpha_star)):
            c = self._terms[mi]
            pa = " ".join(str(p) for p in mi.powers_alpha)
            pb = " ".join(str(p) for p in mi.powers_alpha_star)
            lines.append(f"{pa} {pb} {c.real!r} {c.imag!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text, hbar=None):
        num_modes = None
        file_hbar = 1.0
        terms = {}
        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                for tok in line[1:].split():
                    if tok.startswith("modes="):
                        num_modes = int(tok[6:])
                    elif tok.startswith("hbar="):
                        file_hbar = float(tok[5:])
                continue
            parts = line.split()
            if len(parts) < 4 or (len(parts) - 2) % 2 != 0:
                raise ValueError(f"malformed symbol line: {line!r}")
            n = (len(parts) - 2) // 2
            if num_modes is None:
                num_modes = n
            elif n != num_modes:
                raise DimensionMismatchError(
                    f"line has {n} modes, expected {num_modes}")
            pa = tuple(int(p) for p in parts[:n])
            pb = tuple(int(p) for p in parts[n:2 * n])
            coef = float(parts[2 * n]) + 1j * float(parts[2 * n + 1])
            mi = MultiIndex(pa, pb)
            terms[mi] = terms.get(mi, 0.0 + 0.0j) + coef
        if num_modes is None:
            raise ValueError("no terms found in symbol text")
        return cls(num_modes, terms, hbar=file_hbar if hbar is None else hbar)

    def __repr__(self):
        return (f"ComplexPolynomial(modes={self._num_modes}, "
                f"terms={len(self._terms)}, hbar={self._hbar})")


def wirtinger_derivative(p, orders, conjugate=False):
    """Apply d^orders w.r.t. alpha (or alpha* when ``conjugate``).

    ``orders`` is a per-mode tuple of nonnegative derivative orders.
    Coefficients are exact falling factorials.
    """
    orders = tuple(int(o) for o in orders)
    if len(orders) != p.num_modes:
        raise DimensionMismatchError(
            f"order vector has {len(orders)} modes, expected {p.num_modes}")
    if any(o < 0 for o in orders):
        raise ValueError("derivative orders must be nonnegative")
    out = {}
    for mi, c in p.terms.items():
        pa = list(mi.powers_alpha)
        pb = list(mi.powers_alpha_star)
        target = pb if conjugate else pa
        coef = c
        ok = True
        for i, o in enumerate(orders):
            if o == 0:
                continue
            if target[i] < o:
                ok = False
                break
            coef *= math.perm(target[i], o)
            target[i] -= o
        if ok and coef != 0:
            key = MultiIndex(tuple(pa), tuple(pb))
            out[key] = out.get(key, 0.0 + 0.0j) + coef
    return ComplexPolynomial(p.num_modes, out, hbar=p.hbar)


# ---------------------------------------------------------------------------
# Real polynomials on phase space and drift fields
# ---------------------------------------------------------------------------

def alpha_from_phi(phi, num_modes):
    phi = np.asarray(phi, dtype=float)
    if phi.shape[-1] != 2 * num_modes:
        raise DimensionMismatchError(
            f"expected last axis {2 * num_modes}, got {phi.shape[-1]}")
    x = phi[..., :num_modes]
    y = phi[..., num_modes:]
    return (x + 1j * y) / np.sqrt(2.0)


def phi_from_alpha(alpha):
    alpha = np.asarray(alpha, dtype=complex)
    return np.concatenate(
        [np.sqrt(2.0) * alpha.real, np.sqrt(2.0) * alpha.imag], axis=-1)


class RealPoly:
    """Real polynomial in 2N variables, dict of exponent tuple -> coef."""

    def __init__(self, nvars, coefs=None):
        self.nvars = int(nvars)
        self.coefs = {}
        for exps, c in (coefs or {}).items():
            c = float(c)
            if c != 0.0:
                self.coefs[tuple(int(e) for e in exps)] = \
                    self.coefs.get(tuple(exps), 0.0) + c

    def __call__(self, phi):
        phi = np.asarray(phi, dtype=float)
        out = np.zeros(phi.shape[:-1])
        for exps, c in self.coefs.items():
            term = np.full(phi.shape[:-1], c)
            for i, e in enumerate(exps):
                if e:
                    term = term * phi[..., i] ** e
            out += term
        return out

    def diff(self, var):
        out = {}
        for exps, c in self.coefs.items():
            e = exps[var]
            if e == 0:
                continue
            new = list(exps)
            new[var] = e - 1
            key = tuple(new)
            out[key] = out.get(key, 0.0) + c * e
        return RealPoly(self.nvars, out)

    def degree(self):
        return max((sum(e) for e in self.coefs), default=0)

    def scaled(self, s):
        return RealPoly(self.nvars, {e: c * s for e, c in self.coefs.items()})

    def plus(self, other):
        out = dict(self.coefs)
        for e, c in other.coefs.items():
            out[e] = out.get(e, 0.0) + c
        return RealPoly(self.nvars, out)

    def times(self, other):
        out = {}
        for e1, c1 in self.coefs.items():
            for e2, c2 in other.coefs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0.0) + c1 * c2
        return RealPoly(self.nvars, out)


def _complex_poly_to_real(p, imag_tol=1e-10):
    """Expand a symbol into a real polynomial of phi; imaginary part must cancel."""
    n = p.num_modes
    nv = 2 * n
    acc = {}

    def _mono_expand(mi, coef):
        # product over modes of ((x+iy)/sqrt2)^a * ((x-iy)/sqrt2)^b
        terms = {(0,) * nv: coef}
        for i in range(n):
            a = mi.powers_alpha[i]
            b = mi.powers_alpha_star[i]
            if a == 0 and b == 0:
                continue
            factor = {}
            for k in range(a + 1):
                ca = math.comb(a, k) * (1j) ** k
                for m in range(b + 1):
                    cb = math.comb(b, m) * (-1j) ** m
                    key = (a + b - k - m, k + m)  # (x power, y power) for mode i
                    factor[key] = factor.get(key, 0.0 + 0.0j) + ca * cb
            scale = 2.0 ** (-(a + b) / 2.0)
            new_terms = {}
            for exps, c0 in terms.items():
                for (px, py), cf in factor.items():
                    e = list(exps)
                    e[i] += px
                    e[n + i] += py
                    key = tuple(e)
                    new_terms[key] = new_terms.get(key, 0.0 + 0.0j) \
                        + c0 * cf * scale
            terms = new_terms
        return terms

    for mi, coef in p.terms.items():
        for exps, c in _mono_expand(mi, coef).items():
            acc[exps] = acc.get(exps, 0.0 + 0.0j) + c
    scale = max((abs(c) for c in acc.values()), default=1.0)
    for exps, c in acc.items():
        if abs(c.imag) > imag_tol * max(scale, 1.0):
            raise ValueError(
                f"expansion not real: residual imaginary part {c.imag:.3e}")
    return RealPoly(nv, {e: c.real for e, c in acc.items()})


class PolynomialDrift:
    """Polynomial vector field on phase space with exact derivatives."""

    def __init__(self, components):
        self.dim = len(components)
        self.components = list(components)
        self._jac = [[components[i].diff(j) for j in range(self.dim)]
                     for i in range(self.dim)]
        div = RealPoly(self.dim)
        for i in range(self.dim):
            div = div.plus(self._jac[i][i])
        self.div_poly = div
        self._div_grad = [div.diff(j) for j in range(self.dim)]

    def __call__(self, phi):
        phi = np.asarray(phi, dtype=float)
        out = np.empty(phi.shape[:-1] + (self.dim,))
        for i, comp in enumerate(self.components):
            out[..., i] = comp(phi)
        return out

    def jacobian(self, phi):
        phi = np.asarray(phi, dtype=float)
        out = np.empty(phi.shape[:-1] + (self.dim, self.dim))
        for i in range(self.dim):
            for j in range(self.dim):
                out[..., i, j] = self._jac[i][j](phi)
        return out

    def divergence(self, phi):
        return self.div_poly(np.asarray(phi, dtype=float))

    def divergence_gradient(self, phi):
        phi = np.asarray(phi, dtype=float)
        out = np.empty(phi.shape[:-1] + (self.dim,))
        for j in range(self.dim):
            out[..., j] = self._div_grad[j](phi)
        return out

    def max_degree(self):
        return max((c.degree() for c in self.components), default=0)

    def is_affine(self):
        return self.max_degree() <= 1

    def as_affine(self):
        """Exact (M, c) with A(phi) = M phi + c; requires affine field."""
        if not self.is_affine():
            raise UnsupportedHamiltonianError("drift is not affine")
        M = np.zeros((self.dim, self.dim))
        c = np.zeros(self.dim)
        for i, comp in enumerate(self.components):
            for exps, coef in comp.coefs.items():
                if sum(exps) == 0:
                    c[i] = coef
                else:
                    j = next(k for k, e in enumerate(exps) if e)
                    M[i, j] = coef
        return M, c

    def rotated(self, O):
        """Field in coordinates phi' = O phi:  A'(phi') = O A(O^T phi')."""
        O = np.asarray(O, dtype=float)
        nv = self.dim
        # linear substitution polynomials phi_j = sum_k O[k? ...]
        # phi = O^T phi'  =>  phi_j = sum_k O[k, j]? no: (O^T phi')_j = sum_k O[k,j] phi'_k
        subs = []
        for j in range(nv):
            coefs = {}
            for k in range(nv):
                if O[k, j] != 0.0:
                    e = [0] * nv
                    e[k] = 1
                    coefs[tuple(e)] = O[k, j]
            subs.append(RealPoly(nv, coefs))

        def substitute(poly):
            out = RealPoly(nv)
            for exps, c in poly.coefs.items():
                term = RealPoly(nv, {(0,) * nv: c})
                for j, e in enumerate(exps):
                    for _ in range(e):
                        term = term.times(subs[j])
                out = out.plus(term)
            return out

        rotated_comps = [substitute(c) for c in self.components]
        new_comps = []
        for i in range(nv):
            acc = RealPoly(nv)
            for j in range(nv):
                if O[i, j] != 0.0:
                    acc = acc.plus(rotated_comps[j].scaled(O[i, j]))
            new_comps.append(acc)
        return PolynomialDrift(new_comps)


class AffineDrift:
    """A(phi) = M phi + c with exact constant Jacobian."""

    def __init__(self, M, c=None):
        self.M = np.array(M, dtype=float)
        self.dim = self.M.shape[0]
        if self.M.shape != (self.dim, self.dim):
            raise ValueError("M must be square")
        self.c = np.zeros(self.dim) if c is None else np.array(c, dtype=float)

    def __call__(self, phi):
        phi = np.asarray(phi, dtype=float)
        return phi @ self.M.T + self.c

    def jacobian(self, phi):
        phi = np.asarray(phi, dtype=float)
        return np.broadcast_to(self.M, phi.shape[:-1] + self.M.shape).copy()

    def divergence(self, phi):
        phi = np.asarray(phi, dtype=float)
        return np.full(phi.shape[:-1], np.trace(self.M))

    def divergence_gradient(self, phi):
        phi = np.asarray(phi, dtype=float)
        return np.zeros(phi.shape[:-1] + (self.dim,))

    def max_degree(self):
        return 1

    def is_affine(self):
        return True

    def as_affine(self):
        return self.M.copy(), self.c.copy()

    def rotated(self, O):
        O = np.asarray(O, dtype=float)
        return AffineDrift(O @ self.M @ O.T, O @ self.c)


def drift_field(H):
    """Real drift field of the continuity part, in quadrature coordinates.

    Requires a hermitian symbol.  The complex velocity is
    v_i = -1j dH/dalpha*_i and the returned field carries components
    (sqrt(2) Re v, sqrt(2) Im v).
    """
    if not H.is_hermitian_symbol():
        raise UnsupportedHamiltonianError("drift_field needs a hermitian symbol")
    n = H.num_modes
    x_comps, y_comps = [], []
    for i in range(n):
        orders = tuple(1 if j == i else 0 for j in range(n))
        v = wirtinger_derivative(H, orders, conjugate=True) * (-1j)
        vbar = v.conjugate_symbol()
        # sqrt(2) Re v = (v + conj v)/sqrt(2), sqrt(2) Im v = (v - conj v)/(i sqrt 2)
        re_part = (v + vbar) * (1.0 / np.sqrt(2.0))
        im_part = (v - vbar) * (-1j / np.sqrt(2.0))
        x_comps.append(_complex_poly_to_real(re_part))
        y_comps.append(_complex_poly_to_real(im_part))
    return PolynomialDrift(x_comps + y_comps)


def diffusion_matrix(H, phi):
    """Traceless diffusion matrix at phi (shape (..., 2N, 2N)).

    Scaled so the second-order term of the evolution equation reads
    (1/2) sum_ab d_a d_b (D_ab q).  D = hbar [[Im B, Re B], [Re B, -Im B]]
    with B_ij = d^2 H / dalpha_i dalpha_j.
    """
    if not H.is_hermitian_symbol():
        raise UnsupportedHamiltonianError(
            "diffusion_matrix needs a hermitian symbol")
    n = H.num_modes
    phi = np.asarray(phi, dtype=float)
    alpha = alpha_from_phi(phi, n)
    B = np.zeros(phi.shape[:-1] + (n, n), dtype=complex)
    for i in range(n):
        for j in range(i, n):
            orders = [0] * n
            orders[i] += 1
            orders[j] += 1
            d2 = wirtinger_derivative(H, tuple(orders), conjugate=False)
            val = d2.evaluate(alpha)
            B[..., i, j] = val
            B[..., j, i] = val
    hbar = H.hbar
    D = np.zeros(phi.shape[:-1] + (2 * n, 2 * n))
    D[..., :n, :n] = hbar * B.imag
    D[..., n:, n:] = -hbar * B.imag
    D[..., :n, n:] = hbar * B.real
    D[..., n:, :n] = hbar * B.real
    return D


def diffusion_is_constant(H, tol=0.0):
    """True when every second alpha-derivative of H is a constant symbol."""
    n = H.num_modes
    for i in range(n):
        for j in range(i, n):
            orders = [0] * n
            orders[i] += 1
            orders[j] += 1
            d2 = wirtinger_derivative(H, tuple(orders), conjugate=False)
            for mi in d2.terms:
                if sum(mi.powers_alpha) + sum(mi.powers_alpha_star) > 0:
                    return False
    return True


class QuadratureFrame:
    """Orthogonal map from base quadratures to diffusion-diagonal coordinates.

    forward(alpha) -> phi' with the first N components carrying diffusion
    +d and the last N carrying -d.  ``degenerate`` flags d = 0.
    """

    def __init__(self, num_modes, rotation, d, degenerate=False):
        self.num_modes = int(num_modes)
        self.rotation = np.array(rotation, dtype=float)
        dim = 2 * self.num_modes
        if self.rotation.shape != (dim, dim):
            raise DimensionMismatchError("rotation has wrong shape")
        if not np.allclose(self.rotation @ self.rotation.T, np.eye(dim),
                           atol=1e-12):
            raise ValueError("rotation is not orthogonal")
        self.d = float(d)
        if self.d < 0:
            raise ValueError("diffusion magnitude must be nonnegative")
        self.degenerate = bool(degenerate)

    @classmethod
    def identity(cls, num_modes, d):
        return cls(num_modes, np.eye(2 * num_modes), d)

    def forward(self, alpha):
        return phi_from_alpha(alpha) @ self.rotation.T

    def inverse(self, phi):
        base = np.asarray(phi, dtype=float) @ self.rotation
        return alpha_from_phi(base, self.num_modes)

    def to_frame(self, phi_base):
        return np.asarray(phi_base, dtype=float) @ self.rotation.T

    def from_frame(self, phi_frame):
        return np.asarray(phi_frame, dtype=float) @ self.rotation

    def drift_in_frame(self, H):
        """Drift field of H expressed in frame coordinates."""
        return drift_field(H).rotated(self.rotation)


def diagonalize_diffusion(H, tol=1e-10):
    """Frame in which the (constant) diffusion matrix is diag(+d I, -d I).

    Raises UnsupportedHamiltonianError for field-dependent diffusion and
    NonTracelessDiffusionError when the spectrum is not balanced +/- d.
    A zero matrix yields the identity frame with d = 0 and a warning.
    """
    n = H.num_modes
    if not diffusion_is_constant(H):
        raise UnsupportedHamiltonianError(
            "diffusion depends on phase-space location; only constant "
            "diffusion (symbols quadratic in alpha and alpha*) is supported")
    D = diffusion_matrix(H, np.zeros(2 * n))
    scale = np.max(np.abs(D))
    if scale == 0.0:
        warnings.warn("zero diffusion matrix: degenerate frame with d = 0")
        return QuadratureFrame(n, np.eye(2 * n), 0.0, degenerate=True)
    w, V = np.linalg.eigh(D)
    order = np.argsort(-w)
    w = w[order]
    V = V[:, order]
    d_pos = w[:n]
    d_neg = -w[n:]
    d = float(np.mean(d_pos))
    if (np.max(np.abs(d_pos - d)) > tol * scale
            or np.max(np.abs(d_neg - d)) > tol * scale):
        raise NonTracelessDiffusionError(
            f"diffusion spectrum {w} is not balanced +/- d")
    O = V.T
    if np.linalg.det(O) < 0:
        O[-1, :] *= -1.0
    return QuadratureFrame(n, O, d)
