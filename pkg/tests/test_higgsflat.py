# Copyright (C) 2019-2020 Petr Pavlu <setup@dagobah.cz>
# SPDX-License-Identifier: MIT

"""Tests for the Higgs bundle data and its flat connection."""

import fractions
import math

import numpy as np

import hitchindod.exc
import hitchindod.higgsflat
import hitchindod.stiefel
from . import utils

REAL = hitchindod.stiefel.REAL
COMPLEX = hitchindod.stiefel.COMPLEX

POINTS = (1j, 0.3 + 2j, -1.5 + 0.25j)


class TestHiggsData(utils.HitchinDodTestCase):
    """Tests for the bundle data."""
    def test_upper_half_plane(self):
        """Check that points off the upper half-plane are rejected."""
        point = hitchindod.higgsflat.UHPoint.from_complex(2 + 3j)
        self.assertEqual((point.x, point.y), (2.0, 3.0))
        self.assertEqual(point.z, 2 + 3j)
        with self.assertRaises(hitchindod.exc.ConnectionException) as cm:
            hitchindod.higgsflat.UHPoint(0, -1)
        self.assertEqual(str(cm.exception),
                         "Point '0.0+-1.0i' is not in the upper half-plane")

    def test_rank1_data(self):
        """Check the metric and Higgs field of the rank 2 bundle."""
        data = hitchindod.higgsflat.HiggsData(1)
        self.assertEqual(data.size, 2)
        self.assertArrayClose(data.exponents, [-1, 1])
        self.assertArrayClose(data.phi, [[0, 0], [1 / math.sqrt(2), 0]])
        self.assertArrayClose(data.q, [[0, 1], [1, 0]])
        h = 1 / (math.sqrt(2) * 2)
        self.assertArrayClose(data.metric(2j), np.diag([1 / h, h]))

    def test_r_squares(self):
        """Check r_k^2 = k(2n-k)/2."""
        F = fractions.Fraction
        self.assertEqual(hitchindod.higgsflat.r_squares(2),
                         [F(0), F(3, 2), F(2), F(3, 2), F(0)])
        data = hitchindod.higgsflat.HiggsData(2)
        self.assertArrayClose(data.r**2, [1.5, 2, 1.5])

    def test_invalid(self):
        """Check that invalid bundle data is rejected."""
        with self.assertRaises(hitchindod.exc.ConnectionException) as cm:
            hitchindod.higgsflat.HiggsData(0)
        self.assertEqual(str(cm.exception), "Invalid half-rank '0'")
        with self.assertRaises(hitchindod.exc.ConnectionException) as cm:
            hitchindod.higgsflat.HiggsData(2, exponents=[1, 2])
        self.assertEqual(
            str(cm.exception),
            "Exponent vector of shape '(2,)' does not match rank '4'")


class TestHitchinEquation(utils.HitchinDodTestCase):
    """Tests for Hitchin's equation and the curvature convention."""
    def test_residual(self):
        """Check that the Fuchsian data solves Hitchin's equation."""
        for n in (1, 2, 3):
            data = hitchindod.higgsflat.HiggsData(n)
            for z in POINTS:
                self.assertLess(hitchindod.higgsflat.hitchin_residual(data, z),
                                1e-8)

    def test_calibration(self):
        """Check that calibration finds the frozen convention."""
        data = hitchindod.higgsflat.HiggsData(2)
        self.assertEqual(
            hitchindod.higgsflat.calibrate_hitchin_convention(data, POINTS),
            (hitchindod.higgsflat.HITCHIN_SIGN,
             hitchindod.higgsflat.HITCHIN_SCALE))

    def test_negative_controls(self):
        """Check that perturbed data violates the equation."""
        data = hitchindod.higgsflat.HiggsData(1, phi_scale=0.0)
        self.assertAlmostEqual(hitchindod.higgsflat.hitchin_residual(data, 1j),
                               math.sqrt(2) / 4)
        data = hitchindod.higgsflat.HiggsData(2, exponents=[-1, -1, 1, 3])
        self.assertGreater(hitchindod.higgsflat.hitchin_residual(data, 1j),
                           1e-2)
        with self.assertRaises(hitchindod.exc.ConnectionException):
            hitchindod.higgsflat.calibrate_hitchin_convention(data, POINTS)

    def test_sne_inequality(self):
        """Check the exact inequality on the Higgs field entries."""
        for n in range(1, 21):
            for record in hitchindod.higgsflat.sne_inequality(n):
                self.assertTrue(record.identity, msg=f"n={n}, i={record.i}")
                self.assertTrue(record.inequality, msg=f"n={n}, i={record.i}")
                self.assertTrue(record.witness, msg=f"n={n}, i={record.i}")
        with self.assertRaises(hitchindod.exc.ConnectionException):
            hitchindod.higgsflat.sne_inequality(0)


class TestFlatness(utils.HitchinDodTestCase):
    """Tests for flatness of the connection."""
    def test_curvature(self):
        """Check that the finite-difference curvature vanishes."""
        for n in (1, 2):
            data = hitchindod.higgsflat.HiggsData(n)
            for z in POINTS:
                self.assertLess(
                    hitchindod.higgsflat.curvature_residual(data, z),
                    1e-6 * max(1.0, 1 / z.imag**2))

    def test_circle_holonomy(self):
        """Check that holonomy around small circles is trivial."""
        data = hitchindod.higgsflat.HiggsData(2)
        self.assertLess(hitchindod.higgsflat.flatness_residual(data, 0.3 + 1j),
                        1e-6)
        self.assertLess(
            hitchindod.higgsflat.flatness_residual(data, 2j, radius=1.5),
            1e-6)
        self.assertEqual(
            hitchindod.higgsflat.flatness_residual(data, 1j, radius=0), 0.0)

    def test_invalid_loops(self):
        """Check that loops leaving the half-plane are rejected."""
        data = hitchindod.higgsflat.HiggsData(1)
        with self.assertRaises(hitchindod.exc.ConnectionException) as cm:
            hitchindod.higgsflat.circle_holonomy(data, 1j, 1.0)
        self.assertEqual(
            str(cm.exception),
            "Loop of radius '1.0' around '1j' leaves the upper half-plane")
        with self.assertRaises(hitchindod.exc.ConnectionException) as cm:
            hitchindod.higgsflat.flatness_residual(data, 1j, radius=-0.1)
        self.assertEqual(str(cm.exception), "Invalid loop radius '-0.1'")

    def test_triangle_holonomy(self):
        """Check that holonomy around a triangle is trivial."""
        data = hitchindod.higgsflat.HiggsData(2)
        path = [1j, 1.5 + 0.5j, -0.5 + 2j, 1j]
        hol = hitchindod.higgsflat.holonomy(data, path)
        self.assertLess(np.linalg.norm(hol - np.eye(4), 2), 1e-6)

    def test_stepped_transport(self):
        """Check the exponential midpoint rule against the integrator."""
        data = hitchindod.higgsflat.HiggsData(1)
        adaptive = hitchindod.higgsflat.transport_segment(data, 1j, 1 + 2j)
        stepped = hitchindod.higgsflat.transport_segment(data,
                                                         1j,
                                                         1 + 2j,
                                                         steps=400)
        self.assertLess(
            np.linalg.norm(adaptive - stepped) / np.linalg.norm(adaptive),
            1e-3)
        with self.assertRaises(hitchindod.exc.ConnectionException) as cm:
            hitchindod.higgsflat.transport_segment(data, 1j, 2j, steps=0)
        self.assertEqual(str(cm.exception), "Invalid number of steps '0'")

    def test_parallel_sections(self):
        """Check that the rank 2 sections are parallel."""
        data = hitchindod.higgsflat.HiggsData(1)
        for z in POINTS:
            a, b = self.rng.normal(size=2) + 1j * self.rng.normal(size=2)

            def section(point, a=a, b=b):
                return hitchindod.higgsflat.parallel_section_n1(point, a, b)

            nabla_z, nabla_zbar = hitchindod.higgsflat.covariant_derivative(
                data, z, section)
            scale = max(1.0, np.linalg.norm(section(z)))
            self.assertLess(np.linalg.norm(nabla_z) / scale, 1e-7)
            self.assertLess(np.linalg.norm(nabla_zbar) / scale, 1e-7)


class TestRealStructure(utils.HitchinDodTestCase):
    """Tests for the real structure and unitary coordinates."""
    def test_coordinates(self):
        """Check that the unitary and holomorphic coordinates invert."""
        data = hitchindod.higgsflat.HiggsData(2)
        t = self.rng.normal(size=4) + 1j * self.rng.normal(size=4)
        s = hitchindod.higgsflat.unitary_to_holomorphic(data, 0.5 + 3j, t)
        self.assertArrayClose(
            hitchindod.higgsflat.holomorphic_to_unitary(data, 0.5 + 3j, s), t)

    def test_tau_fixed_at_base(self):
        """Check that tau0-fixed unitary vectors are tau-fixed sections."""
        data = hitchindod.higgsflat.HiggsData(2)
        t = utils.tau_fixed(self.rng, 2)
        for z in POINTS:
            s = hitchindod.higgsflat.unitary_to_holomorphic(data, z, t)
            self.assertArrayClose(
                hitchindod.higgsflat.real_structure_tau(data, z, s), s)

    def test_transport_keeps_real(self):
        """Check that transport preserves the real structure."""
        for n in (1, 2):
            data = hitchindod.higgsflat.HiggsData(n)
            t = utils.tau_fixed(self.rng, n)
            self.assertLess(
                hitchindod.higgsflat.tau_transport_check(
                    data, 1j, 0.7 + 1.8j, t), 1e-8)

    def test_rejects_non_fixed(self):
        """Check that a vector not fixed by tau0 is rejected."""
        data = hitchindod.higgsflat.HiggsData(2)
        with self.assertRaises(hitchindod.exc.ConeException) as cm:
            hitchindod.higgsflat.tau_transport_check(data, 1j, 2j,
                                                     [1, 0, 0, 0])
        self.assertEqual(str(cm.exception),
                         "Unitary coordinates are not fixed by tau0")
        with self.assertRaises(hitchindod.exc.ConnectionException):
            hitchindod.higgsflat.real_structure_tau(data, 1j, [1, 0])


class TestTransversality(utils.HitchinDodTestCase):
    """Tests for the Jacobian of the tautological section."""
    def test_transverse(self):
        """Check transversality for both fields."""
        for n in (1, 2, 3):
            data = hitchindod.higgsflat.HiggsData(n)
            for field in hitchindod.stiefel.FIELDS:
                if field == REAL and n < 2:
                    continue
                t = hitchindod.stiefel.sample_cone_prime(n, field, self.rng)
                report = hitchindod.higgsflat.tautological_jacobian(
                    data, field, 0.4 + 1.3j, t)
                self.assertEqual(report.dim, 4 * n if field == COMPLEX else
                                 2 * n)
                self.assertTrue(report.transverse)
                self.assertGreater(report.min_sv / report.max_sv, 1e-6)

    def test_outside_cone(self):
        """Check that points outside the cone are rejected."""
        data = hitchindod.higgsflat.HiggsData(1)
        with self.assertRaises(hitchindod.exc.ConeException):
            hitchindod.higgsflat.tautological_jacobian(
                data, COMPLEX, 1j, np.array([1, 1, 0, 0]))
        with self.assertRaises(hitchindod.exc.ConeException):
            hitchindod.higgsflat.tautological_jacobian(
                data, COMPLEX, 1j, np.array([1, 1]))
