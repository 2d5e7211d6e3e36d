# Copyright (C) 2019-2020 Petr Pavlu <setup@dagobah.cz>
# SPDX-License-Identifier: MIT

"""End-to-end command-line tests."""

import contextlib
import io
import json
import os
import os.path
import unittest.mock

import hitchindod
import hitchindod.cli.__main__
from . import utils


class CLIMock:
    """Class grouping mocked functions and variables."""
    def __init__(self, stdout, stderr):
        """Initialize a CLI mock object."""
        self.stdout = stdout
        self.stderr = stderr


@contextlib.contextmanager
def cli_context(args, environ=None):
    """Create a mocked CLI context."""
    if environ is None:
        environ = {}
    with unittest.mock.patch('sys.stdout', new_callable=io.StringIO) as out, \
         unittest.mock.patch('sys.stderr', new_callable=io.StringIO) as err, \
         unittest.mock.patch('sys.argv', args), \
         unittest.mock.patch.dict(os.environ, environ):
        if 'VERIFY_SEED' not in environ:
            os.environ.pop('VERIFY_SEED', None)
        yield CLIMock(out, err)


class TestCLI(utils.HitchinDodTestCase):
    """End-to-end command-line tests."""
    def test_help(self):
        """Check the basic --help output."""
        with cli_context(['verify', '--help']) as cli_mock:
            res = hitchindod.cli.__main__.main()
            self.assertEqual(res, 0)
            output = cli_mock.stdout.getvalue()
            self.assertTrue(output.startswith("usage: verify [-h] [--n N]"))
            self.assertIn("--tol-cluster X", output)
            self.assertIn("--dump-csv PATH", output)
            self.assertIn("VERIFY_SEED", output)
            self.assertEqual(cli_mock.stderr.getvalue(), "")

    def test_version(self):
        """Check the --version output."""
        with cli_context(['verify', '--version']) as cli_mock:
            res = hitchindod.cli.__main__.main()
            self.assertEqual(res, 0)
            self.assertEqual(cli_mock.stdout.getvalue(),
                             f"verify {hitchindod.__version__}\n")

    def test_unknown_suite(self):
        """Check rejection of an unknown suite."""
        with cli_context(['verify', 'bogus']) as cli_mock:
            res = hitchindod.cli.__main__.main()
            self.assertEqual(res, 2)
            self.assertEqual(cli_mock.stdout.getvalue(), "")
            self.assertIn("Input error: argument SUITE: invalid choice: "
                          "'bogus'", cli_mock.stderr.getvalue())

    def test_invalid_options(self):
        """Check rejection of invalid option values."""
        cases = (
            (['--n', '0'], "argument --n: value '0' is not positive"),
            (['--samples', '-3'], "argument --samples: value '-3' is negative"),
            (['--seed', 'x'], "argument --seed: invalid seed value: 'x'"),
            (['--seed', str(2**64)],
             f"argument --seed: seed '{2**64}' is not a 64-bit unsigned "
             f"integer"),
            (['--tol-real', '0'],
             "argument --tol-real: tolerance '0' is not positive and finite"),
            (['--threads', 'many'],
             "argument --threads: invalid integer value: 'many'"),
        )
        for options, message in cases:
            with cli_context(['verify', 'n2'] + options) as cli_mock:
                res = hitchindod.cli.__main__.main()
                self.assertEqual(res, 2)
                self.assertEqual(cli_mock.stdout.getvalue(), "")
                self.assertEqual(cli_mock.stderr.getvalue().splitlines()[-1],
                                 f"Input error: {message}")

    def test_dump_csv_needs_roots(self):
        """Check that --dump-csv is limited to the roots suite."""
        path = os.path.join(self.testdir, 'roots.csv')
        with cli_context(['verify', 'n2', '--dump-csv', path]) as cli_mock:
            res = hitchindod.cli.__main__.main()
            self.assertEqual(res, 2)
            self.assertEqual(cli_mock.stdout.getvalue(), "")
            self.assertEqual(
                cli_mock.stderr.getvalue(),
                "Option --dump-csv needs the roots suite, not 'n2'\n")
        self.assertFalse(os.path.exists(path))

    def test_invalid_environment_seed(self):
        """Check rejection of an invalid VERIFY_SEED value."""
        with cli_context(['verify', 'n2', '--samples', '0'],
                         {'VERIFY_SEED': 'seven'}) as cli_mock:
            res = hitchindod.cli.__main__.main()
            self.assertEqual(res, 2)
            self.assertEqual(cli_mock.stdout.getvalue(), "")
            self.assertEqual(
                cli_mock.stderr.getvalue(),
                "Input error: Environment variable VERIFY_SEED has invalid "
                "value 'seven'\n")

    def test_environment_seed(self):
        """Check that VERIFY_SEED selects the seed."""
        with cli_context(['verify', 'n2', '--samples', '0'],
                         {'VERIFY_SEED': '0x2a'}) as cli_mock:
            res = hitchindod.cli.__main__.main()
            self.assertEqual(res, 0)
            self.assertTrue(cli_mock.stdout.getvalue().endswith(
                "Suite 'n2' passed: 2 passed, 0 failed, 2 skipped (seed 42)\n"))

    def test_skipped_run(self):
        """Check the output of a run without samples."""
        with cli_context(['verify', 'n2', '--samples', '0',
                          '--seed', '3']) as cli_mock:
            res = hitchindod.cli.__main__.main()
            self.assertEqual(res, 0)
            lines = cli_mock.stdout.getvalue().splitlines()
            self.assertEqual(len(lines), 5)
            self.assertTrue(lines[0].startswith("PASS n2.groupoid "))
            self.assertTrue(lines[1].startswith("PASS n2.infinity_branch "))
            self.assertEqual(lines[2], f"SKIP {'n2.omega1_roundtrip':40} -")
            self.assertEqual(lines[3], f"SKIP {'n2.omega2_roundtrip':40} -")
            self.assertEqual(
                lines[4],
                "Suite 'n2' passed: 2 passed, 0 failed, 2 skipped (seed 3)")
            self.assertEqual(cli_mock.stderr.getvalue(), "")

    def test_report_and_csv(self):
        """Check that a small roots run writes its report and CSV file."""
        report = os.path.join(self.testdir, 'report.json')
        rows = os.path.join(self.testdir, 'roots.csv')
        with cli_context([
                'verify', 'roots', '--samples', '4', '--seed', '9', '--field',
                'c', '--report', report, '--dump-csv', rows, '--threads', '2'
        ]) as cli_mock:
            res = hitchindod.cli.__main__.main()
            self.assertEqual(res, 0)
            self.assertTrue(cli_mock.stdout.getvalue().endswith(
                "Suite 'roots' passed: 4 passed, 0 failed, 0 skipped "
                "(seed 9)\n"))
            self.assertEqual(cli_mock.stderr.getvalue(), "")

        data = json.loads(utils.read_file(report))
        self.assertTrue(data['pass'])
        self.assertEqual(data['seed'], 9)
        self.assertEqual(data['config']['fields'], ['C'])
        self.assertEqual(data['config']['samples'], 4)
        lines = utils.read_file(rows).splitlines()
        self.assertEqual(len(lines), 5)
        self.assertTrue(lines[0].startswith("n,field,z_re,z_im,t1_re,"))

    def test_unwritable_report(self):
        """Check the error when the report cannot be written."""
        report = os.path.join(self.testdir, 'missing', 'report.json')
        with cli_context(['verify', 'n2', '--samples', '0', '--report',
                          report]) as cli_mock:
            res = hitchindod.cli.__main__.main()
            self.assertEqual(res, 1)
            self.assertIn("Failed to write output: ",
                          cli_mock.stderr.getvalue())
