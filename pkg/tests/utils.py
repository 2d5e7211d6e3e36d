# Copyright (C) 2019-2020 Petr Pavlu <setup@dagobah.cz>
# SPDX-License-Identifier: MIT

"""Test helper classes and functions."""

import os
import shutil
import tempfile
import unittest

import numpy as np

# Set up expected test environment:
# Force COLUMNS=80 so argparse produces consistent help output on all systems.
os.environ['COLUMNS'] = '80'

# Seed of the per-test random generator.
TEST_SEED = 20200101


class HitchinDodTestCase(unittest.TestCase):
    """Base test case class."""
    def setUp(self):
        """Initialize a test environment before a test starts."""
        self.testdir = tempfile.mkdtemp()
        self.rng = np.random.default_rng(TEST_SEED)

    def tearDown(self):
        """Clean up a test environment after a test finishes."""
        shutil.rmtree(self.testdir)

    def assertArrayClose(self, actual, expected, atol=1e-10, msg=None):
        """Check that two arrays agree entrywise within atol."""
        actual = np.asarray(actual)
        expected = np.asarray(expected)
        self.assertEqual(actual.shape, expected.shape, msg)
        deviation = float(np.max(np.abs(actual - expected), initial=0.0))
        if deviation > atol:
            self.fail(
                self._formatMessage(
                    msg, f"Arrays differ by {deviation:.3g} > {atol:.3g}:\n"
                    f"{actual}\n{expected}"))

    def assertPolyClose(self, actual, expected, atol=1e-10, msg=None):
        """Check that two forms share a basis and have close coefficients."""
        self.assertEqual(actual.basis, expected.basis, msg)
        self.assertArrayClose(actual.coeffs, expected.coeffs, atol, msg)


def read_file(filename):
    """Read text content of a specified file."""
    with open(filename, 'r', encoding='utf-8') as fh:
        return fh.read()


def tau_fixed(rng, n):
    """Draw a vector t of length 2n with t = (conj(t_2n), ..., conj(t_1))."""
    half = rng.normal(size=n) + 1j * rng.normal(size=n)
    return np.concatenate([half, np.conj(half[::-1])])
