"""Independent brute-force oracles for the derived-value tests.

Everything here is deliberately slow and self-contained: oracles never
import the modules they validate (only numpy and the standard library),
so each comparison in the test suite is a genuine two-route check.
Results are cached by an input digest; cache hits return the stored
arrays unchanged.
"""

from __future__ import annotations

import hashlib
import io
from dataclasses import dataclass, field

import numpy as np

_CACHE = {}


@dataclass(frozen=True)
class OracleResult:
    oracle: str
    digest: str
    value: object
    notes: str = ""
    tolerance: float = 0.0

    def to_csv(self):
        buf = io.StringIO()
        buf.write("oracle,digest,notes,tolerance\n")
        buf.write(f"{self.oracle},{self.digest},{self.notes},{self.tolerance!r}\n")
        return buf.getvalue()


def _digest(*parts):
    h = hashlib.sha256()
    for p in parts:
        if isinstance(p, np.ndarray):
            h.update(np.ascontiguousarray(p).tobytes())
            h.update(str(p.shape).encode())
        else:
            h.update(repr(p).encode())
    return h.hexdigest()


def _cached(name, digest, builder, notes="", tolerance=0.0):
    key = (name, digest)
    if key not in _CACHE:
        _CACHE[key] = OracleResult(name, digest, builder(), notes, tolerance)
    return _CACHE[key]


# ---------------------------------------------------------------------------
# Fock-space operator construction by explicit matrix products
# ---------------------------------------------------------------------------

def _lowering(dim):
    a = np.zeros((dim, dim), dtype=complex)
    for k in range(1, dim):
        a[k - 1, k] = np.sqrt(k)
    return a


def oracle_normal_ordering(terms, cutoff):
    """Matrix of an operator polynomial in (a, a+) on a truncated basis.

    ``terms`` is a list of (coef, word) pairs; each word is a sequence of
    the tokens 'a' and 'adag' in operator order (leftmost acts last on a
    ket read right-to-left, i.e. the matrices are multiplied in the order
    written).  Products are formed in an enlarged space and cut back, so
    matrix elements up to the cutoff are exact.
    """
    words = [tuple(word) for _, word in terms]
    coefs = [complex(c) for c, _ in terms]
    dig = _digest(coefs, words, cutoff)

    def build():
        pad = max((len(w) for w in words), default=0)
        dim = cutoff + 1 + pad
        a = _lowering(dim)
        adag = a.conj().T
        out = np.zeros((dim, dim), dtype=complex)
        for coef, word in zip(coefs, words):
            m = np.eye(dim, dtype=complex)
            for tok in word:
                if tok == "a":
                    m = m @ a
                elif tok == "adag":
                    m = m @ adag
                else:
                    raise ValueError(f"unknown token {tok!r}")
            out += coef * m
        return out[:cutoff + 1, :cutoff + 1]

    return _cached("normal_ordering", dig, build,
                   notes="matrix products in enlarged truncated space")


def oracle_antiwick_operator(symbol_terms, cutoff):
    """Operator with the given anti-Wick symbol, one mode, brute force.

    ``symbol_terms`` maps (m, n) -> coef for the monomial
    alpha^m alpha*^n; the corresponding operator term is the
    anti-normally ordered product a^m adag^n.
    """
    items = sorted((int(m), int(n), complex(c))
                   for (m, n), c in symbol_terms.items())
    dig = _digest(items, cutoff)

    def build():
        word_terms = []
        for m, n, c in items:
            word_terms.append((c, ("a",) * m + ("adag",) * n))
        return oracle_normal_ordering(word_terms, cutoff).value

    return _cached("antiwick_operator", dig, build,
                   notes="anti-normal ordered products a^m adag^n")


# ---------------------------------------------------------------------------
# Discretized path action as an explicit quadratic form
# ---------------------------------------------------------------------------

def _midpoint_action(path, M, c, d, dt):
    """Midpoint-rule action for affine drift M phi + c, constant diffusion d."""
    S = 0.0
    div = np.trace(M)  # V = -div/2, constant for affine drift
    for k in range(path.shape[0] - 1):
        mid = 0.5 * (path[k] + path[k + 1])
        r = (path[k + 1] - path[k]) / dt - (M @ mid + c)
        S += dt * (float(r @ r) / (2.0 * d) + 0.5 * div)
    return S


def _free_layout(K, n):
    """Index map of free path variables into the full (K+1, 2n) array.

    Layout: [y-block at step 0, full phi at steps 1..K-1, x-block at K].
    Returns a list of (step, coordinate) pairs.
    """
    idx = [(0, n + j) for j in range(n)]
    for k in range(1, K):
        idx.extend((k, j) for j in range(2 * n))
    idx.extend((K, j) for j in range(n))
    return idx


def _embed(z, x0, yf, K, n):
    path = np.zeros((K + 1, 2 * n))
    path[0, :n] = x0
    path[K, n:] = yf
    for val, (k, j) in zip(z, _free_layout(K, n)):
        path[k, j] += val
    return path


def oracle_gaussian_quadratic_form(M, c, d, x0, yf, t0, tf, n_steps):
    """(P, b, c0) of the free-variable action S(z) = z P z / 2 - b z + c0.

    Assembled purely from black-box evaluations of the midpoint-rule
    action (polarization identities), independent of any linear-algebra
    assembly elsewhere.
    """
    M = np.asarray(M, dtype=float)
    c = np.asarray(c, dtype=float)
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    yf = np.atleast_1d(np.asarray(yf, dtype=float))
    n = x0.shape[0]
    K = int(n_steps)
    dt = (tf - t0) / K
    dig = _digest(M, c, d, x0, yf, t0, tf, K)

    def build():
        nfree = 2 * n * K
        ee = np.eye(nfree)

        def S(z):
            return _midpoint_action(_embed(z, x0, yf, K, n), M, c, d, dt)

        c0 = S(np.zeros(nfree))
        s_plus = np.array([S(ee[i]) for i in range(nfree)])
        s_minus = np.array([S(-ee[i]) for i in range(nfree)])
        b = 0.5 * (s_minus - s_plus)
        P = np.empty((nfree, nfree))
        for i in range(nfree):
            P[i, i] = s_plus[i] + s_minus[i] - 2.0 * c0
            for j in range(i + 1, nfree):
                sij = S(ee[i] + ee[j])
                P[i, j] = P[j, i] = sij - s_plus[i] - s_plus[j] + c0
        return P, b, c0

    return _cached("gaussian_quadratic_form", dig, build,
                   notes="polarization of midpoint-rule action evaluations")


def oracle_affine_bridge_shooting(M, c, d, x0, yf, t0, tf, n_steps):
    """Minimizer of the discretized action by linear shooting.

    Propagates the stationarity recursion of the midpoint discretization
    forward in time instead of solving the global normal equations, so it
    is an independent route to the same discrete minimizer.
    """
    M = np.asarray(M, dtype=float)
    c = np.asarray(c, dtype=float)
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    yf = np.atleast_1d(np.asarray(yf, dtype=float))
    n = x0.shape[0]
    K = int(n_steps)
    dt = (tf - t0) / K
    dig = _digest(M, c, d, x0, yf, t0, tf, K, "shoot")

    def build():
        dim = 2 * n
        Gp = np.eye(dim) / dt - 0.5 * M
        Gm = -np.eye(dim) / dt - 0.5 * M
        # interior stationarity: Gm^T r_k + Gp^T r_{k-1} = 0
        T = -np.linalg.solve(Gm.T, Gp.T)

        def march(y0, r0):
            path = np.zeros((K + 1, dim))
            path[0, :n] = x0
            path[0, n:] = y0
            r = r0.copy()
            for k in range(K):
                # r_k = Gp phi_{k+1} + Gm phi_k - c
                path[k + 1] = np.linalg.solve(Gp, c + r - Gm @ path[k])
                if k < K - 1:
                    r = T @ r
            # residual conditions: y_K = yf, x-block of Gp^T r_{K-1} = 0,
            # y-block of Gm^T r_0 = 0
            res = np.concatenate([
                path[K, n:] - yf,
                (Gp.T @ r)[:n],
                (Gm.T @ r0)[n:],
            ])
            return path, res

        # unknown u = (y0, r0), affine residual: solve by basis shots
        nu = n + dim
        u0 = np.zeros(nu)
        _, res0 = march(u0[:n], u0[n:])
        A = np.empty((res0.shape[0], nu))
        for i in range(nu):
            ui = np.zeros(nu)
            ui[i] = 1.0
            _, res_i = march(ui[:n], ui[n:])
            A[:, i] = res_i - res0
        u = np.linalg.solve(A, -res0)
        path, res = march(u[:n], u[n:])
        assert np.max(np.abs(res)) < 1e-9
        return path

    return _cached("affine_bridge_shooting", dig, build,
                   notes="forward recursion of discrete stationarity")


# ---------------------------------------------------------------------------
# Gaussian conditional independence ground truth
# ---------------------------------------------------------------------------

def oracle_schur_ci(cov, block_a, block_b, block_c):
    """Normalized conditional cross-covariance of blocks a, b given c.

    Conditions the joint Gaussian covariance on the ``block_c`` indices
    via the Schur complement, then returns the largest absolute partial
    correlation between a and b coordinates (0 exactly iff a and b are
    conditionally independent in the Gaussian).
    """
    cov = np.asarray(cov, dtype=float)
    a = list(block_a)
    b = list(block_b)
    cset = list(block_c)
    dig = _digest(cov, a, b, cset)

    def build():
        ab = a + b
        S_ab = cov[np.ix_(ab, ab)]
        if cset:
            S_ac = cov[np.ix_(ab, cset)]
            S_cc = cov[np.ix_(cset, cset)]
            cond = S_ab - S_ac @ np.linalg.solve(S_cc, S_ac.T)
        else:
            cond = S_ab
        na = len(a)
        cross = cond[:na, na:]
        sd_a = np.sqrt(np.clip(np.diag(cond)[:na], 1e-300, None))
        sd_b = np.sqrt(np.clip(np.diag(cond)[na:], 1e-300, None))
        pcorr = cross / np.outer(sd_a, sd_b)
        return float(np.max(np.abs(pcorr)))

    return _cached("schur_ci", dig, build,
                   notes="partial correlation from Schur complement")
