"""Tests for the symbol calculus: Wirtinger derivatives, drift, diffusion."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tsqlab import presets
from tsqlab.symbols import (
    AffineDrift,
    ComplexPolynomial,
    DimensionMismatchError,
    MultiIndex,
    NonTracelessDiffusionError,
    QuadratureFrame,
    UnsupportedHamiltonianError,
    alpha_from_phi,
    diagonalize_diffusion,
    diffusion_matrix,
    drift_field,
    phi_from_alpha,
    wirtinger_derivative,
)


def poly1(terms, hbar=1.0):
    return ComplexPolynomial(1, {MultiIndex(*k): v for k, v in terms.items()},
                             hbar=hbar)


def random_hermitian_quadratic(rng, num_modes=1, hbar=1.0):
    """Random symbol with alpha-degree <= 2 and alpha*-degree <= 2."""
    n = num_modes
    terms = {}

    def add(pa, pb, c):
        mi = MultiIndex(pa, pb)
        terms[mi] = terms.get(mi, 0.0) + c
        sw = mi.swapped()
        terms[sw] = terms.get(sw, 0.0) + np.conj(c)

    def unit(i, n):
        return tuple(1 if j == i else 0 for j in range(n))

    def pair(i, j, n):
        e = [0] * n
        e[i] += 1
        e[j] += 1
        return tuple(e)

    zero = (0,) * n
    for i in range(n):
        add(unit(i, n), zero, rng.normal() + 1j * rng.normal())
        for j in range(i, n):
            add(pair(i, j, n), zero, rng.normal() + 1j * rng.normal())
            add(pair(i, j, n), unit(j, n) if False else zero, 0.0)
    for i in range(n):
        for j in range(n):
            c = rng.normal() + 1j * rng.normal()
            if i == j:
                c = complex(c.real, 0.0)  # diagonal alpha_i alpha*_i real
            add(unit(i, n), unit(j, n), 0.5 * c)
    return ComplexPolynomial(n, terms, hbar=hbar)


class TestWirtinger:
    def test_d_alpha_of_alpha2_alphastar(self):
        p = poly1({((2,), (1,)): 1.0})
        d = wirtinger_derivative(p, (1,))
        assert d.terms == {MultiIndex((1,), (1,)): 2.0 + 0.0j}

    def test_d_alphastar_of_holomorphic_term(self):
        p = poly1({((2,), (0,)): 1.0})
        d = wirtinger_derivative(p, (1,), conjugate=True)
        assert d.terms == {}

    def test_second_derivative(self):
        p = poly1({((2,), (2,)): 1.0})
        d = wirtinger_derivative(p, (2,))
        assert d.terms == {MultiIndex((0,), (2,)): 2.0 + 0.0j}

    def test_mode_count_mismatch(self):
        p = poly1({((1,), (1,)): 1.0})
        with pytest.raises(DimensionMismatchError):
            wirtinger_derivative(p, (1, 0))

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2),
           st.integers(0, 2))
    def test_mixed_partials_commute(self, a, b, m, k):
        p = poly1({((a,), (b,)): 1.3 - 0.7j, ((1,), (1,)): 2.0})
        d1 = wirtinger_derivative(wirtinger_derivative(p, (m,)), (k,),
                                  conjugate=True)
        d2 = wirtinger_derivative(wirtinger_derivative(p, (k,), conjugate=True),
                                  (m,))
        assert d1.terms == d2.terms


class TestHermitianFlag:
    def test_presets_are_hermitian(self):
        for name in presets.PRESETS:
            assert presets.get_preset(name).is_hermitian_symbol(), name

    def test_non_hermitian_detected(self):
        p = poly1({((2,), (0,)): 1.0})
        assert not p.is_hermitian_symbol()


class TestDriftField:
    def test_harmonic_rotation(self):
        # clockwise rotation at angular frequency omega; at alpha=1 the
        # complex velocity has magnitude omega and is tangent to |alpha|=1
        omega = 1.7
        H = presets.harmonic(omega)
        A = drift_field(H)
        phi = phi_from_alpha(np.array([1.0 + 0.0j]))
        a = A(phi)
        v = (a[0] + 1j * a[1]) / np.sqrt(2.0)
        assert abs(abs(v) - omega) < 1e-12
        # tangent: v orthogonal to alpha = 1, i.e. purely imaginary
        assert abs(v.real) < 1e-12
        # rigid rotation: A(phi) = omega (y, -x)
        rng = np.random.default_rng(3)
        pts = rng.normal(size=(50, 2))
        a = A(pts)
        expect = omega * np.stack([pts[:, 1], -pts[:, 0]], axis=-1)
        np.testing.assert_allclose(a, expect, atol=1e-12)

    def test_constant_symbol_zero_drift(self):
        H = poly1({((0,), (0,)): 4.2})
        A = drift_field(H)
        assert np.allclose(A(np.random.default_rng(0).normal(size=(9, 2))), 0.0)

    def test_two_uncoupled_modes_block_diagonal(self):
        rng = np.random.default_rng(7)
        H = ComplexPolynomial(2, {
            MultiIndex((1, 0), (1, 0)): 1.0,
            MultiIndex((0, 1), (0, 1)): 2.0,
            MultiIndex((2, 0), (0, 0)): 0.3j,
            MultiIndex((0, 0), (2, 0)): -0.3j,
        })
        A = drift_field(H)
        J = A.jacobian(rng.normal(size=4))
        # coordinates (x1, x2, y1, y2): no coupling between mode 1 and 2
        for i_mode1 in (0, 2):
            for j_mode2 in (1, 3):
                assert abs(J[i_mode1, j_mode2]) < 1e-12
                assert abs(J[j_mode2, i_mode1]) < 1e-12

    def test_linearity_in_hamiltonian(self):
        rng = np.random.default_rng(11)
        H1 = random_hermitian_quadratic(rng)
        H2 = random_hermitian_quadratic(rng)
        pts = rng.normal(size=(20, 2))
        lhs = drift_field(H1 + H2)(pts)
        rhs = drift_field(H1)(pts) + drift_field(H2)(pts)
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)

    def test_hermitian_drift_is_divergence_free(self):
        rng = np.random.default_rng(13)
        H = random_hermitian_quadratic(rng)
        A = drift_field(H)
        pts = rng.normal(size=(30, 2))
        np.testing.assert_allclose(A.divergence(pts), 0.0, atol=1e-12)

    def test_rejects_non_hermitian(self):
        with pytest.raises(UnsupportedHamiltonianError):
            drift_field(poly1({((2,), (0,)): 1.0}))


class TestDiffusionMatrix:
    def test_harmonic_zero(self):
        D = diffusion_matrix(presets.harmonic(), np.zeros(2))
        np.testing.assert_allclose(D, 0.0, atol=1e-15)

    def test_paramp_constant_diag(self):
        # second alpha-derivative of (i k/2)(a*^2 - a^2) is -i k, so
        # D = hbar [[Im B, Re B], [Re B, -Im B]] = diag(-k, +k)
        kappa = 0.5
        D = diffusion_matrix(presets.paramp(kappa), np.zeros(2))
        np.testing.assert_allclose(D, np.diag([-kappa, kappa]), atol=1e-14)
        w = np.linalg.eigvalsh(D)
        np.testing.assert_allclose(np.sort(w), [-kappa, kappa], atol=1e-14)

    def test_quadratic_gives_phi_independent(self):
        rng = np.random.default_rng(5)
        H = random_hermitian_quadratic(rng)
        pts = rng.normal(size=(6, 2))
        D = diffusion_matrix(H, pts)
        for k in range(1, 6):
            np.testing.assert_allclose(D[k], D[0], atol=1e-13)

    def test_trace_zero_random(self):
        rng = np.random.default_rng(17)
        for _ in range(100):
            H = random_hermitian_quadratic(rng, num_modes=rng.integers(1, 3))
            phi = rng.normal(size=2 * H.num_modes)
            D = diffusion_matrix(H, phi)
            assert abs(np.trace(D)) <= 1e-12

    def test_hbar_scaling(self):
        H1 = presets.paramp(0.5, hbar=1.0)
        H2 = presets.paramp(0.5, hbar=2.0)
        D1 = diffusion_matrix(H1, np.zeros(2))
        D2 = diffusion_matrix(H2, np.zeros(2))
        np.testing.assert_allclose(D2, 2.0 * D1, rtol=1e-12)


class TestDiagonalizeDiffusion:
    def test_paramp_frame_swaps_quadratures(self):
        # amplified x carries -kappa, attenuated y carries +kappa, so the
        # frame must route the attenuated quadrature to the positive block
        kappa = 0.5
        H = presets.paramp(kappa)
        frame = diagonalize_diffusion(H)
        assert abs(frame.d - kappa) < 1e-12
        D = diffusion_matrix(H, np.zeros(2))
        Dp = frame.rotation @ D @ frame.rotation.T
        np.testing.assert_allclose(Dp, np.diag([kappa, -kappa]), atol=1e-12)
        # frame x-axis is the physical y quadrature (up to sign)
        assert abs(abs(frame.rotation[0, 1]) - 1.0) < 1e-12

    def test_zero_diffusion_degenerate(self):
        with pytest.warns(UserWarning):
            frame = diagonalize_diffusion(presets.harmonic())
        assert frame.degenerate and frame.d == 0.0

    def test_two_mode_coupling_mixes_modes(self):
        H = presets.coupled(0.5)
        frame = diagonalize_diffusion(H)
        D = diffusion_matrix(H, np.zeros(4))
        Dp = frame.rotation @ D @ frame.rotation.T
        target = np.diag([frame.d, frame.d, -frame.d, -frame.d])
        np.testing.assert_allclose(Dp, target, atol=1e-12)
        assert abs(frame.d - 0.5) < 1e-12

    def test_field_dependent_diffusion_rejected(self):
        with pytest.raises(UnsupportedHamiltonianError):
            diagonalize_diffusion(presets.kerr_symbol())

    def test_unbalanced_spectrum_rejected(self):
        # two uncoupled amplifiers with different gains: spectrum
        # (k1, -k1, k2, -k2) is traceless but not balanced +/- d
        H = ComplexPolynomial(2, {
            MultiIndex((0, 0), (2, 0)): 0.5j * 0.5,
            MultiIndex((2, 0), (0, 0)): -0.5j * 0.5,
            MultiIndex((0, 0), (0, 2)): 0.5j * 0.25,
            MultiIndex((0, 2), (0, 0)): -0.5j * 0.25,
        })
        with pytest.raises(NonTracelessDiffusionError):
            diagonalize_diffusion(H)


class TestQuadratureFrame:
    def test_round_trip_random_amplitudes(self):
        rng = np.random.default_rng(23)
        frame = diagonalize_diffusion(presets.coupled(0.4))
        alpha = rng.normal(size=(1000, 2)) + 1j * rng.normal(size=(1000, 2))
        back = frame.inverse(frame.forward(alpha))
        assert np.max(np.abs(back - alpha)) < 1e-14

    def test_rotated_drift_consistency(self):
        rng = np.random.default_rng(29)
        H = presets.rotamp()
        frame = diagonalize_diffusion(H)
        A = drift_field(H)
        Af = frame.drift_in_frame(H)
        pts = rng.normal(size=(40, 2))
        lhs = Af(pts)
        rhs = A(pts @ frame.rotation) @ frame.rotation.T
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)


class TestAffineDrift:
    def test_matches_polynomial_drift(self):
        rng = np.random.default_rng(31)
        H = random_hermitian_quadratic(rng)
        A = drift_field(H)
        M, c = A.as_affine()
        aff = AffineDrift(M, c)
        pts = rng.normal(size=(25, 2))
        np.testing.assert_allclose(A(pts), aff(pts), atol=1e-12)
        np.testing.assert_allclose(A.jacobian(pts[0]), aff.jacobian(pts[0]),
                                   atol=1e-12)


class TestSerialization:
    def test_text_round_trip(self):
        rng = np.random.default_rng(37)
        H = random_hermitian_quadratic(rng, num_modes=2, hbar=0.5)
        H2 = ComplexPolynomial.from_text(H.to_text())
        assert H2.num_modes == 2 and H2.hbar == 0.5
        assert H2.terms == H.terms

    def test_single_line(self):
        p = ComplexPolynomial.from_text("1 1 2.0 0.0\n0 0 -2.0 0.0\n")
        assert p.num_modes == 1
        alpha = np.array([1.5 + 0.5j])
        expect = 2.0 * (abs(alpha[0]) ** 2) - 2.0
        assert abs(p.evaluate(alpha) - expect) < 1e-12


def test_alpha_phi_round_trip():
    rng = np.random.default_rng(41)
    alpha = rng.normal(size=(64, 3)) + 1j * rng.normal(size=(64, 3))
    np.testing.assert_allclose(alpha_from_phi(phi_from_alpha(alpha), 3), alpha,
                               atol=1e-15)
