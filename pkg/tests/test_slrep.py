# Copyright (C) 2019-2020 Petr Pavlu <setup@dagobah.cz>
# SPDX-License-Identifier: MIT

"""Tests for the representations of SL(2,R) and of the circle."""

import math

import numpy as np

import hitchindod.exc
import hitchindod.hpoly
import hitchindod.slrep
from . import utils


def _random_poly(rng, n, basis=hitchindod.hpoly.XY):
    """Draw a random complex form of degree 2n-1."""
    coeffs = rng.normal(size=2 * n) + 1j * rng.normal(size=2 * n)
    return hitchindod.hpoly.HPoly(n, coeffs, basis)


class TestGroupElements(utils.HitchinDodTestCase):
    """Tests for group element helpers."""
    def test_sl2_validation(self):
        """Check that non-SL(2,R) matrices are rejected."""
        self.assertArrayClose(hitchindod.slrep.sl2([[2, 0], [0, 0.5]]),
                              [[2, 0], [0, 0.5]])
        with self.assertRaises(hitchindod.exc.RepresentationException) as cm:
            hitchindod.slrep.sl2([[2, 0], [0, 1]])
        self.assertIn("has determinant", str(cm.exception))
        with self.assertRaises(hitchindod.exc.RepresentationException):
            hitchindod.slrep.sl2([[1, 0, 0], [0, 1, 0]])
        with self.assertRaises(hitchindod.exc.RepresentationException):
            hitchindod.slrep.sl2([[1j, 0], [0, -1j]])

    def test_random_sl2(self):
        """Check that random elements have determinant 1."""
        for _ in range(10):
            g = hitchindod.slrep.random_sl2(self.rng, 0.5)
            self.assertAlmostEqual(np.linalg.det(g), 1.0, places=10)


class TestActions(utils.HitchinDodTestCase):
    """Tests for the actions on forms."""
    def test_homomorphism(self):
        """Check that (gh).P = g.(h.P)."""
        for n in (1, 2, 3):
            poly = _random_poly(self.rng, n)
            g = hitchindod.slrep.random_sl2(self.rng, 0.5)
            h = hitchindod.slrep.random_sl2(self.rng, 0.5)
            self.assertPolyClose(
                hitchindod.slrep.act(g @ h, poly),
                hitchindod.slrep.act(g, hitchindod.slrep.act(h, poly)),
                atol=1e-9)

    def test_sym_rep_matrix(self):
        """Check that the representation matrix applies the action."""
        poly = _random_poly(self.rng, 2)
        g = hitchindod.slrep.random_sl2(self.rng)
        self.assertArrayClose(
            hitchindod.slrep.sym_rep_matrix(g, 2) @ poly.coeffs,
            hitchindod.slrep.act(g, poly).coeffs,
            atol=1e-9)

    def test_act_keeps_basis(self):
        """Check that the action agrees in both bases."""
        poly = _random_poly(self.rng, 2)
        g = hitchindod.slrep.random_sl2(self.rng)
        zw = hitchindod.slrep.act(g,
                                  hitchindod.hpoly.to_basis(
                                      poly, hitchindod.hpoly.ZW))
        self.assertEqual(zw.basis, hitchindod.hpoly.ZW)
        self.assertPolyClose(hitchindod.hpoly.to_basis(zw, hitchindod.hpoly.XY),
                             hitchindod.slrep.act(g, poly),
                             atol=1e-9)

    def test_lie_action_is_derivative(self):
        """Check that g0 is the derivative of the geodesic flow at 0."""
        poly = _random_poly(self.rng, 2)
        step = 1e-6
        difference = (
            hitchindod.slrep.act(hitchindod.slrep.geodesic_flow(step), poly) -
            hitchindod.slrep.act(hitchindod.slrep.geodesic_flow(-step),
                                 poly)) * (1 / (2 * step))
        self.assertPolyClose(difference,
                             hitchindod.slrep.lie_act_g0(poly),
                             atol=1e-6)

    def test_lie_action_bases(self):
        """Check that g0 agrees in the XY and ZW bases."""
        poly = _random_poly(self.rng, 3)
        zw = hitchindod.slrep.lie_act_g0(
            hitchindod.hpoly.to_basis(poly, hitchindod.hpoly.ZW))
        self.assertPolyClose(hitchindod.hpoly.to_basis(zw, hitchindod.hpoly.XY),
                             hitchindod.slrep.lie_act_g0(poly),
                             atol=1e-10)

    def test_circle_action(self):
        """Check that the circle action agrees with the rotation action."""
        for n in (1, 2, 3):
            poly = _random_poly(self.rng, n)
            theta = self.rng.uniform(0, 2 * math.pi)
            self.assertPolyClose(
                hitchindod.slrep.circle_act(theta, poly),
                hitchindod.slrep.act(hitchindod.slrep.rotation(theta), poly),
                atol=1e-10)

    def test_tau_real(self):
        """Check that real forms are fixed by the real structure."""
        real = hitchindod.hpoly.HPoly(2, self.rng.normal(size=4))
        self.assertPolyClose(hitchindod.slrep.tau_real(real), real)
        poly = _random_poly(self.rng, 2)
        parts = (hitchindod.slrep.real_part(poly) +
                 1j * hitchindod.slrep.imag_part(poly))
        self.assertPolyClose(parts, poly)


class TestSymmetricPower(utils.HitchinDodTestCase):
    """Tests for symmetric powers."""
    def test_normalized_unitary(self):
        """Check that unitary matrices have unitary normalized powers."""
        unitary = np.array([[1, 1j], [1j, 1]]) / math.sqrt(2)
        power = hitchindod.slrep.symmetric_power(unitary, 3, normalized=True)
        self.assertArrayClose(power.conj().T @ power, np.eye(4), atol=1e-12)

    def test_anti_homomorphism(self):
        """Check that substitutions compose in reverse order."""
        first = self.rng.normal(size=(2, 2))
        second = self.rng.normal(size=(2, 2))
        self.assertArrayClose(
            hitchindod.slrep.symmetric_power(first, 3) @
            hitchindod.slrep.symmetric_power(second, 3),
            hitchindod.slrep.symmetric_power(second @ first, 3),
            atol=1e-10)


class TestRepMatrices(utils.HitchinDodTestCase):
    """Tests for the representations phi, phi' and delta."""
    def test_conjugation(self):
        """Check A phi'(theta) A^-1 = phi(theta) for several half-ranks."""
        for n in range(1, 7):
            change = hitchindod.slrep.basis_change_A(n)
            theta = self.rng.uniform(0, 2 * math.pi)
            sample = hitchindod.slrep.rep_matrices(theta, n)
            self.assertArrayClose(
                change @ sample.phi_prime @ np.linalg.inv(change),
                sample.phi_embedded(),
                atol=1e-10)

    def test_basis_change_unitary(self):
        """Check that the basis change is unitary."""
        for n in range(1, 6):
            change = hitchindod.slrep.basis_change_A(n)
            self.assertArrayClose(change.conj().T @ change,
                                  np.eye(2 * n),
                                  atol=1e-12)

    def test_real_on_tau_fixed(self):
        """Check that tau0-fixed vectors are mapped to real vectors."""
        for n in range(1, 6):
            t = utils.tau_fixed(self.rng, n)
            image = hitchindod.slrep.basis_change_A(n) @ t
            self.assertArrayClose(image.imag, np.zeros(2 * n), atol=1e-12)

    def test_compose(self):
        """Check that samples compose like angles."""
        first = hitchindod.slrep.rep_matrices(0.4, 3)
        second = hitchindod.slrep.rep_matrices(-1.3, 3)
        product = first.compose(second)
        direct = hitchindod.slrep.rep_matrices(0.4 - 1.3, 3)
        self.assertArrayClose(product.L, direct.L)
        self.assertArrayClose(product.R, direct.R)
        self.assertArrayClose(product.phi_prime, direct.phi_prime)

        with self.assertRaises(hitchindod.exc.RepresentationException) as cm:
            first.compose(hitchindod.slrep.rep_matrices(0.1, 2))
        self.assertEqual(str(cm.exception), "Half-rank mismatch: '3' and '2'")

    def test_delta(self):
        """Check that delta acts trivially on the first factor."""
        sample = hitchindod.slrep.rep_matrices(0.7, 2)
        identity, rotation = sample.delta
        self.assertArrayClose(identity, np.eye(2))
        self.assertArrayClose(rotation, hitchindod.slrep.rotation(0.7))


class TestInterleave(utils.HitchinDodTestCase):
    """Tests for interleaving of (v, w)."""
    def test_interleave(self):
        """Check the interleaved layout."""
        x = hitchindod.slrep.interleave([1, 2], [3, 4])
        self.assertArrayClose(x, [1, 3, 2, 4])
        v, w = hitchindod.slrep.deinterleave(x)
        self.assertArrayClose(v, [1, 2])
        self.assertArrayClose(w, [3, 4])

    def test_invalid_shapes(self):
        """Check that mismatched shapes are rejected."""
        with self.assertRaises(hitchindod.exc.RepresentationException):
            hitchindod.slrep.interleave([1, 2], [3])
        with self.assertRaises(hitchindod.exc.RepresentationException):
            hitchindod.slrep.deinterleave([1, 2, 3])
