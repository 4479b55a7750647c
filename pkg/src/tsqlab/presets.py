"""Named Hamiltonian symbols used by the test suite and the CLI.

All values here are harness defaults chosen for desk-scale runs.
"""

from __future__ import annotations

from .symbols import ComplexPolynomial, MultiIndex


def harmonic(omega=1.0, hbar=1.0):
    """H = omega (alpha alpha* - 1): rigid rotation, zero diffusion."""
    return ComplexPolynomial(1, {
        MultiIndex((1,), (1,)): omega,
        MultiIndex((0,), (0,)): -omega,
    }, hbar=hbar)


def paramp(kappa=0.5, hbar=1.0):
    """H = (i kappa / 2)(alpha*^2 - alpha^2): quadrature amplifier.

    The drift amplifies the x quadrature and attenuates y; the constant
    diffusion matrix is diag(-hbar kappa, +hbar kappa), so the attenuated
    quadrature carries the forward (positive) diffusion.
    """
    return ComplexPolynomial(1, {
        MultiIndex((0,), (2,)): 0.5j * kappa,
        MultiIndex((2,), (0,)): -0.5j * kappa,
    }, hbar=hbar)


def rotamp(omega=1.0, kappa=0.5, hbar=1.0):
    """Rotation plus amplification: drift mixes x and y, diffusion constant."""
    return harmonic(omega, hbar=hbar) + paramp(kappa, hbar=hbar)


def coupled(g=0.5, hbar=1.0):
    """Two-mode squeezing H = g(alpha1 alpha2 + alpha1* alpha2*).

    Drift and diffusion couple the modes and mix the x/y blocks; the
    diffusion spectrum is balanced +/- g, with a mode-mixing frame.
    """
    return ComplexPolynomial(2, {
        MultiIndex((1, 1), (0, 0)): g,
        MultiIndex((0, 0), (1, 1)): g,
    }, hbar=hbar)


def quartic(omega=1.0, lam=0.1, hbar=1.0):
    """Harmonic rotation plus lam (alpha^4 + alpha*^4).

    Degree four in the alphas jointly, so the evolution series carries
    genuine third- and fourth-order terms beyond the quadratic truncation.
    """
    return harmonic(omega, hbar=hbar) + ComplexPolynomial(1, {
        MultiIndex((4,), (0,)): lam,
        MultiIndex((0,), (4,)): lam,
    }, hbar=hbar)


def kerr_symbol(lam=0.1, hbar=1.0):
    """H = lam (alpha alpha*)^2: quartic overall yet jointly quadratic.

    Its evolution series truncates at second order exactly; the induced
    diffusion matrix depends on phase-space location.
    """
    return ComplexPolynomial(1, {MultiIndex((2,), (2,)): lam}, hbar=hbar)


PRESETS = {
    "harmonic": harmonic,
    "paramp": paramp,
    "rotamp": rotamp,
    "coupled": coupled,
    "quartic": quartic,
}


def get_preset(name, hbar=1.0, **params):
    try:
        factory = PRESETS[name]
    except KeyError:
        raise KeyError(
            f"unknown preset {name!r}; available: {sorted(PRESETS)}") from None
    return factory(hbar=hbar, **params)
