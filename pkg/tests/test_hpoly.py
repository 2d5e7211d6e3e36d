# Copyright (C) 2019-2020 Petr Pavlu <setup@dagobah.cz>
# SPDX-License-Identifier: MIT

"""Tests for homogeneous polynomials and their roots."""

import dataclasses
import math

import hitchindod.exc
import hitchindod.hpoly
from . import utils

XY = hitchindod.hpoly.XY
ZW = hitchindod.hpoly.ZW


class TestForms(utils.HitchinDodTestCase):
    """Tests for the BinaryForm and HPoly classes."""
    def test_hpoly_size(self):
        """Check that HPoly validates the number of coefficients."""
        poly = hitchindod.hpoly.HPoly(2, [1, 2, 3, 4])
        self.assertEqual(poly.n, 2)
        self.assertEqual(poly.degree, 3)
        self.assertEqual(poly.basis, XY)

        with self.assertRaises(hitchindod.exc.PolynomialException) as cm:
            hitchindod.hpoly.HPoly(2, [1, 2, 3])
        self.assertEqual(
            str(cm.exception),
            "Polynomial with half-rank '2' needs 4 coefficients, got '3'")

    def test_invalid_basis(self):
        """Check that an unknown basis tag is rejected."""
        with self.assertRaises(hitchindod.exc.PolynomialException) as cm:
            hitchindod.hpoly.BinaryForm([1, 0], 'UV')
        self.assertEqual(str(cm.exception), "Unknown polynomial basis 'UV'")

    def test_coefficients_read_only(self):
        """Check that the coefficient vector cannot be modified."""
        poly = hitchindod.hpoly.HPoly(1, [1, 2])
        with self.assertRaises(ValueError):
            poly.coeffs[0] = 5

    def test_arithmetic(self):
        """Check addition, subtraction and scaling."""
        first = hitchindod.hpoly.HPoly(1, [1, 2])
        second = hitchindod.hpoly.HPoly(1, [3, -1j])
        self.assertArrayClose((first + second).coeffs, [4, 2 - 1j])
        self.assertArrayClose((first - second).coeffs, [-2, 2 + 1j])
        self.assertArrayClose((2j * first).coeffs, [2j, 4j])
        self.assertArrayClose((-first).coeffs, [-1, -2])
        self.assertIsInstance(first + second, hitchindod.hpoly.HPoly)

    def test_mismatch(self):
        """Check that forms of different bases or degrees do not combine."""
        first = hitchindod.hpoly.HPoly(1, [1, 2])
        with self.assertRaises(hitchindod.exc.PolynomialException) as cm:
            first + hitchindod.hpoly.HPoly(1, [1, 2], ZW)
        self.assertEqual(str(cm.exception), "Basis mismatch: 'XY' and 'ZW'")
        with self.assertRaises(hitchindod.exc.PolynomialException) as cm:
            first + hitchindod.hpoly.HPoly(2, [1, 2, 3, 4])
        self.assertEqual(str(cm.exception), "Degree mismatch: '1' and '3'")

    def test_from_form(self):
        """Check conversion of odd and even forms."""
        poly = hitchindod.hpoly.HPoly.from_form(
            hitchindod.hpoly.BinaryForm([1, 0, 0, 1]))
        self.assertEqual(poly.n, 2)
        with self.assertRaises(hitchindod.exc.PolynomialException):
            hitchindod.hpoly.HPoly.from_form(
                hitchindod.hpoly.BinaryForm([1, 0, 1]))


class TestBases(utils.HitchinDodTestCase):
    """Tests for the change between the XY and ZW bases."""
    def test_x_in_zw(self):
        """Check that X = Z + W and Y = i(Z - W)."""
        x = hitchindod.hpoly.to_basis(hitchindod.hpoly.HPoly(1, [1, 0]), ZW)
        # Index k holds the coefficient of Z^k W^(d-k).
        self.assertArrayClose(x.coeffs, [1, 1])
        y = hitchindod.hpoly.to_basis(hitchindod.hpoly.HPoly(1, [0, 1]), ZW)
        self.assertArrayClose(y.coeffs, [-1j, 1j])

    def test_roundtrip(self):
        """Check that XY -> ZW -> XY is the identity."""
        for n in (1, 2, 4):
            coeffs = (self.rng.normal(size=2 * n) +
                      1j * self.rng.normal(size=2 * n))
            poly = hitchindod.hpoly.HPoly(n, coeffs)
            back = hitchindod.hpoly.to_basis(
                hitchindod.hpoly.to_basis(poly, ZW), XY)
            self.assertPolyClose(back, poly, atol=1e-12)

    def test_evaluate_agrees(self):
        """Check that evaluation does not depend on the basis."""
        poly = hitchindod.hpoly.HPoly(2, [1, -2j, 0.5, 3])
        x, y = 0.3 - 1.1j, 2.0 + 0.4j
        zw = hitchindod.hpoly.to_basis(poly, ZW)
        value = hitchindod.hpoly.evaluate(poly, x, y)
        self.assertAlmostEqual(
            hitchindod.hpoly.evaluate(zw, (x - 1j * y) / 2, (x + 1j * y) / 2),
            value)

    def test_unknown_target(self):
        """Check that an unknown target basis is rejected."""
        with self.assertRaises(hitchindod.exc.PolynomialException):
            hitchindod.hpoly.to_basis(hitchindod.hpoly.HPoly(1, [1, 0]), 'UV')


class TestProducts(utils.HitchinDodTestCase):
    """Tests for products of forms."""
    def test_linear_form_power(self):
        """Check the expansion of (X + 2Y)^2."""
        power = hitchindod.hpoly.linear_form_power(1, 2, 2)
        self.assertArrayClose(power.coeffs, [1, 4, 4])

    def test_poly_mul(self):
        """Check that a product evaluates to the product of values."""
        first = hitchindod.hpoly.BinaryForm([1, 2j, -1])
        second = hitchindod.hpoly.BinaryForm([0.5, 3])
        product = hitchindod.hpoly.poly_mul(first, second)
        self.assertEqual(product.degree, 3)
        x, y = 1.2 + 0.3j, -0.7
        self.assertAlmostEqual(
            hitchindod.hpoly.evaluate(product, x, y),
            hitchindod.hpoly.evaluate(first, x, y) *
            hitchindod.hpoly.evaluate(second, x, y))

    def test_norms(self):
        """Check norm, normalization and the projective distance."""
        poly = hitchindod.hpoly.HPoly(1, [3, 4])
        self.assertAlmostEqual(hitchindod.hpoly.norm(poly), 5.0)
        self.assertAlmostEqual(
            hitchindod.hpoly.norm(hitchindod.hpoly.normalized(poly)), 1.0)
        self.assertAlmostEqual(
            hitchindod.hpoly.projective_distance(poly, (1 - 2j) * poly), 0.0)
        self.assertAlmostEqual(
            hitchindod.hpoly.projective_distance(
                poly, hitchindod.hpoly.to_basis(poly, ZW)), 0.0)

        zero = hitchindod.hpoly.HPoly(1, [0, 0])
        with self.assertRaises(hitchindod.exc.PolynomialException) as cm:
            hitchindod.hpoly.normalized(zero)
        self.assertEqual(str(cm.exception),
                         "Cannot normalize the zero polynomial")


class TestRoots(utils.HitchinDodTestCase):
    """Tests for the real root multiplicity report."""
    def test_from_roots(self):
        """Check that from_roots vanishes at its roots."""
        form = hitchindod.hpoly.from_roots([(2, 1), (1j, 2)])
        self.assertEqual(form.degree, 3)
        self.assertAlmostEqual(abs(hitchindod.hpoly.evaluate(form, 2, 1)), 0)
        self.assertAlmostEqual(abs(hitchindod.hpoly.evaluate(form, 1j, 1)), 0)

        infinite = hitchindod.hpoly.from_roots([(math.inf, 1), (0, 2)])
        # Y X^2 has coefficients of X^2 Y only.
        self.assertArrayClose(infinite.coeffs, [0, 1, 0, 0])

    def test_simple_roots(self):
        """Check a form with three simple roots, one of them real."""
        poly = hitchindod.hpoly.HPoly.from_form(
            hitchindod.hpoly.from_roots([(0.5, 1), (1 + 1j, 1), (1 - 1j, 1)]))
        report = hitchindod.hpoly.real_root_multiplicity(poly)
        self.assertEqual(report.degree, 3)
        self.assertEqual(report.max_real_mult, 1)
        self.assertFalse(report.ambiguous)
        real = [cluster for cluster in report.clusters if cluster.is_real]
        self.assertEqual(len(real), 1)
        self.assertAlmostEqual(real[0].center.real, 0.5)

    def test_multiple_real_root(self):
        """Check that a triple real root forms one cluster."""
        for center in (0.0, -1.7, 3.25):
            poly = hitchindod.hpoly.HPoly.from_form(
                hitchindod.hpoly.from_roots([(center, 3), (2j, 1),
                                             (-2j, 1)]))
            report = hitchindod.hpoly.real_root_multiplicity(poly)
            self.assertEqual(report.degree, 5)
            self.assertEqual(report.max_real_mult, 3)
            low, high = report.real_mult_bounds()
            self.assertEqual((low, high), (3, 3))

    def test_root_at_infinity(self):
        """Check that a double root at [1:0] is located."""
        poly = hitchindod.hpoly.HPoly.from_form(
            hitchindod.hpoly.from_roots([(math.inf, 2), (1j, 1)]))
        report = hitchindod.hpoly.real_root_multiplicity(poly)
        self.assertEqual(report.max_real_mult, 2)
        double = [cluster for cluster in report.clusters if cluster.size == 2]
        self.assertEqual(len(double), 1)
        self.assertTrue(double[0].is_real)
        self.assertTrue(double[0].is_infinite or abs(double[0].center) > 1e8)

    def test_rotation_invariance(self):
        """Check that the report does not depend on the basis of the input."""
        poly = hitchindod.hpoly.HPoly.from_form(
            hitchindod.hpoly.from_roots([(-0.25, 2), (0.5 + 0.5j, 1)]))
        first = hitchindod.hpoly.real_root_multiplicity(poly)
        second = hitchindod.hpoly.real_root_multiplicity(
            hitchindod.hpoly.to_basis(poly, ZW))
        self.assertEqual(first.max_real_mult, 2)
        self.assertEqual(second.max_real_mult, 2)

    def test_near_real_is_ambiguous(self):
        """Check that a root at the realness tolerance is ambiguous."""
        poly = hitchindod.hpoly.HPoly.from_form(
            hitchindod.hpoly.from_roots([(0.3 + 2e-6j, 1), (0.3 - 2e-6j, 1),
                                         (4j, 1)]))
        report = hitchindod.hpoly.real_root_multiplicity(poly)
        self.assertTrue(report.ambiguous)

    def test_zero_polynomial(self):
        """Check that the zero polynomial has no root report."""
        with self.assertRaises(hitchindod.exc.PolynomialException) as cm:
            hitchindod.hpoly.real_root_multiplicity(
                hitchindod.hpoly.HPoly(1, [0, 0]))
        self.assertEqual(str(cm.exception),
                         "Cannot locate roots of the zero polynomial")

    def test_random_reconstruction(self):
        """Check multiplicities of forms rebuilt from random root sets."""
        for n in (2, 3, 4):
            for mult in range(1, n + 1):
                roots = [(self.rng.uniform(-2, 2), mult)]
                for _ in range(2 * n - 1 - mult):
                    roots.append((complex(self.rng.uniform(-2, 2),
                                          self.rng.uniform(0.5, 2)), 1))
                poly = hitchindod.hpoly.HPoly.from_form(
                    hitchindod.hpoly.from_roots(roots))
                report = hitchindod.hpoly.real_root_multiplicity(poly)
                self.assertEqual(report.degree, 2 * n - 1)
                self.assertEqual(report.max_real_mult, mult)
                self.assertLessEqual(
                    hitchindod.hpoly.reconstruction_error(poly, report), 1e-8)

    def test_reconstruction_error(self):
        """Check the rebuilt form for finite, infinite and wrong roots."""
        poly = hitchindod.hpoly.HPoly.from_form(
            hitchindod.hpoly.from_roots([(1, 1), (2, 1), (3, 1)]))
        report = hitchindod.hpoly.real_root_multiplicity(poly)
        self.assertLessEqual(
            hitchindod.hpoly.reconstruction_error(poly, report), 1e-9)
        # A root at infinity shows up as a lower chart degree.
        poly = hitchindod.hpoly.HPoly.from_form(
            hitchindod.hpoly.from_roots([(math.inf, 1), (-1, 1), (1j, 1)]))
        report = hitchindod.hpoly.real_root_multiplicity(poly)
        self.assertLessEqual(
            hitchindod.hpoly.reconstruction_error(poly, report), 1e-8)
        # Shifting every center keeps the counts but not the form.
        shifted = hitchindod.hpoly.RootReport(
            clusters=tuple(
                dataclasses.replace(cluster, center=cluster.center + 0.01)
                for cluster in report.clusters if not cluster.is_infinite) +
            tuple(cluster for cluster in report.clusters
                  if cluster.is_infinite),
            max_real_mult=report.max_real_mult,
            ambiguous=report.ambiguous)
        self.assertEqual(shifted.degree, report.degree)
        self.assertGreater(
            hitchindod.hpoly.reconstruction_error(poly, shifted), 1e-3)

    def test_reconstruction_degree_mismatch(self):
        """Check that a report of the wrong degree is rejected."""
        poly = hitchindod.hpoly.HPoly(2, [1, 0, 0, 1])
        report = hitchindod.hpoly.real_root_multiplicity(
            hitchindod.hpoly.HPoly(1, [1, 1]))
        with self.assertRaises(hitchindod.exc.PolynomialException) as cm:
            hitchindod.hpoly.reconstruction_error(poly, report)
        self.assertEqual(
            str(cm.exception),
            "Reported roots of total multiplicity '1' do not match degree "
            "'3'")
