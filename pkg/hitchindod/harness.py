# Copyright (C) 2019-2020 Petr Pavlu <setup@dagobah.cz>
# SPDX-License-Identifier: MIT

"""
Verification suites.

A suite is a named group of checks. Every check draws its random inputs from
its own child seed, spawned from the run seed in the sorted order of the check
names, so a report does not depend on the number of worker threads. A check
records the worst value of the quantity it measures together with the input
that produced it.
"""

import concurrent.futures
import csv
import dataclasses
import json
import logging
import math
import os
import time

import numpy as np

import hitchindod
import hitchindod.devmap
import hitchindod.dod
import hitchindod.exc
import hitchindod.higgsflat
import hitchindod.hpoly
import hitchindod.qform
import hitchindod.slrep
import hitchindod.stiefel
import hitchindod.utils

_logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

ALL = 'all'
SUITES = ('qform', 'nonintersect', 'equivariance', 'hitchin', 'flatness',
          'transversality', 'roots', 'stiefel', 'n2')

STATUS_PASS = 'pass'
STATUS_FAIL = 'fail'
STATUS_SKIP = 'skip'

DEFAULT_SAMPLES = 10000
SEED_ENVIRONMENT = 'VERIFY_SEED'

# Exact certificates run for every half-rank up to this bound.
EXACT_MAX_N = 20

# Tolerances of the individual checks.
COVARIANCE_TOL = 1e-10
CLOSED_FORM_TOL = 1e-10
EQUIVARIANCE_TOL = 1e-8
FRAME_TOL = 1e-10
HITCHIN_TOL = 1e-8
NEGATIVE_CONTROL_MIN = 1e-2
HOLONOMY_TOL = 1e-6
SECTION_TOL = 1e-7
TAU_TOL = 1e-8
TRANSPORT_TOL = 1e-6
JACOBIAN_MIN = 1e-6
TRANSVERSALITY_MIN = 1e-4
RECONSTRUCTION_TOL = 1e-8
CONE_TOL = 1e-10
ROUNDTRIP_TOL = 1e-12
CONJUGATION_TOL = 1e-10
STIEFEL_CONE_TOL = 1e-9
FIBER_TOL = 1e-10
N2_TOL = 1e-9
ROOT_MATCH_TOL = 1e-6
GROUPOID_TOL = 1e-9


class SuiteConfig:
    """Configuration of one verification run."""
    def __init__(self,
                 suite,
                 n=2,
                 fields=hitchindod.stiefel.FIELDS,
                 samples=DEFAULT_SAMPLES,
                 seed=0,
                 tol_cluster=hitchindod.hpoly.DEFAULT_TOL_CLUSTER,
                 tol_real=hitchindod.hpoly.DEFAULT_TOL_REAL,
                 report=None,
                 dump_csv=None,
                 threads=1):
        """Initialize the configuration, validating every value."""
        if suite != ALL and suite not in SUITES:
            raise hitchindod.exc.SuiteException(f"Unknown suite '{suite}'")
        if not isinstance(n, int) or n < 1:
            raise hitchindod.exc.SuiteException(f"Invalid half-rank '{n}'")
        fields = tuple(fields)
        if len(fields) == 0 or any(field not in hitchindod.stiefel.FIELDS
                                   for field in fields):
            raise hitchindod.exc.SuiteException(
                f"Invalid field selection '{fields}'")
        if not isinstance(samples, int) or samples < 0:
            raise hitchindod.exc.SuiteException(
                f"Invalid sample count '{samples}'")
        if not isinstance(seed, int) or not 0 <= seed < 2**64:
            raise hitchindod.exc.SuiteException(
                f"Seed '{seed}' is not a 64-bit unsigned integer")
        for name, value in (('cluster', tol_cluster), ('real', tol_real)):
            if not math.isfinite(value) or value <= 0:
                raise hitchindod.exc.SuiteException(
                    f"Invalid {name} tolerance '{value}'")
        if not isinstance(threads, int) or threads < 1:
            raise hitchindod.exc.SuiteException(
                f"Invalid thread count '{threads}'")

        self.suite = suite
        self.n = n
        # Keep the canonical order so that equal selections give equal
        # reports.
        self.fields = tuple(field for field in hitchindod.stiefel.FIELDS
                            if field in fields)
        self.samples = samples
        self.seed = seed
        self.tol_cluster = float(tol_cluster)
        self.tol_real = float(tol_real)
        self.report = report
        self.dump_csv = dump_csv
        self.threads = threads

    def echo(self):
        """Obtain the configuration values that determine the results."""
        return {
            'suite': self.suite,
            'n': self.n,
            'fields': list(self.fields),
            'samples': self.samples,
            'seed': self.seed,
            'tol_cluster': self.tol_cluster,
            'tol_real': self.tol_real,
        }


def resolve_seed(seed=None, environ=None):
    """
    Select the run seed.

    An explicit seed wins, then the VERIFY_SEED environment variable, then 0.
    An unparsable or out-of-range environment value raises SuiteException.
    """
    if seed is not None:
        return seed
    if environ is None:
        environ = os.environ
    value = environ.get(SEED_ENVIRONMENT)
    if value is None:
        return 0
    try:
        parsed = int(value, 0)
    except ValueError:
        raise hitchindod.exc.SuiteException(
            f"Environment variable {SEED_ENVIRONMENT} has invalid value "
            f"'{value}'") from None
    if not 0 <= parsed < 2**64:
        raise hitchindod.exc.SuiteException(
            f"Environment variable {SEED_ENVIRONMENT} value '{value}' is not "
            f"a 64-bit unsigned integer")
    return parsed


@dataclasses.dataclass(frozen=True)
class CheckRecord:
    """Outcome of one check."""
    name: str
    status: str
    worst_value: object
    worst_witness: object
    elapsed_ms: float
    detail: dict

    @property
    def passed(self):
        """Check that the record does not fail the run."""
        return self.status != STATUS_FAIL

    def to_dict(self):
        """Obtain the record as plain data."""
        return {
            'name': self.name,
            'status': self.status,
            'worst_value': hitchindod.utils.to_jsonable(self.worst_value),
            'worst_witness': _serialize(self.worst_witness),
            'elapsed_ms': round(self.elapsed_ms, 3),
            'detail': _serialize(self.detail),
        }


class ReportVisitor:
    """Base report visitor."""
    def visit_record(self, record):
        """Process one check record."""

    def visit_summary(self, report):
        """Process the report after all its records."""


@dataclasses.dataclass(frozen=True)
class SuiteReport:
    """Result of one verification run."""
    suite: str
    config: dict
    records: tuple
    version: str
    seed: int
    rows: tuple = ()

    @property
    def passed(self):
        """Check that no check failed."""
        return all(record.passed for record in self.records)

    def counts(self):
        """Obtain the number of records per status."""
        result = {STATUS_PASS: 0, STATUS_FAIL: 0, STATUS_SKIP: 0}
        for record in self.records:
            result[record.status] += 1
        return result

    def visit_all(self, visitor):
        """Pass every record and then the report itself to a visitor."""
        for record in self.records:
            visitor.visit_record(record)
        visitor.visit_summary(self)

    def to_dict(self):
        """Obtain the report as plain data."""
        return {
            'schema': SCHEMA_VERSION,
            'suite': self.suite,
            'config': self.config,
            'pass': self.passed,
            'records': [record.to_dict() for record in self.records],
            'version': self.version,
            'seed': self.seed,
        }

    def dumps(self):
        """Serialize the report to JSON text."""
        return json.dumps(self.to_dict(),
                          ensure_ascii=False,
                          indent=2,
                          sort_keys=True) + "\n"

    def write(self, path):
        """Write the JSON report to a file."""
        with open(path, 'w', encoding='utf-8') as fh:
            fh.write(self.dumps())
        _logger.info("Report written to '%s'", path)

    def write_csv(self, path):
        """Write the sampled developing-map rows to a CSV file."""
        fieldnames = csv_fieldnames(self.config['n'])
        with open(path, 'w', encoding='utf-8', newline='') as fh:
            writer = csv.DictWriter(fh,
                                    fieldnames=fieldnames,
                                    extrasaction='ignore',
                                    lineterminator="\n")
            writer.writeheader()
            for row in self.rows:
                writer.writerow({key: row.get(key, '') for key in fieldnames})
        _logger.info("Wrote '%d' rows to '%s'", len(self.rows), path)


def _serialize(value):
    """Convert a witness or detail value to plain data."""
    if isinstance(value, hitchindod.hpoly.BinaryForm):
        return {
            'basis': value.basis,
            'coeffs': hitchindod.utils.to_jsonable(np.asarray(value.coeffs)),
        }
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return _serialize(dataclasses.asdict(value))
    if isinstance(value, dict):
        return {str(key): _serialize(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_serialize(item) for item in value]
    return hitchindod.utils.to_jsonable(value)


def csv_fieldnames(n):
    """Obtain the CSV columns of the roots suite for half-rank n."""
    names = ['n', 'field', 'z_re', 'z_im']
    for k in range(1, 2 * n + 1):
        names += [f't{k}_re', f't{k}_im']
    for j in range(1, 2 * n):
        names += [f'root{j}_re', f'root{j}_im', f'root{j}_mult']
    names.append('max_real_mult')
    return names


def _csv_row(n, field, z, t, report):
    """Obtain one CSV row for a developed form."""
    row = {'n': n, 'field': field, 'z_re': z.real, 'z_im': z.imag}
    for k, value in enumerate(t, start=1):
        row[f't{k}_re'] = value.real
        row[f't{k}_im'] = value.imag
    for j, cluster in enumerate(report.clusters, start=1):
        if cluster.is_infinite:
            row[f'root{j}_re'] = 'inf'
            row[f'root{j}_im'] = 0.0
        else:
            row[f'root{j}_re'] = cluster.center.real
            row[f'root{j}_im'] = cluster.center.imag
        row[f'root{j}_mult'] = cluster.size
    row['max_real_mult'] = report.max_real_mult
    return row


@dataclasses.dataclass
class _Outcome:
    """Raw result returned by a check function."""
    passed: bool
    worst_value: object = None
    witness: object = None
    detail: dict = dataclasses.field(default_factory=dict)
    skipped: bool = False
    rows: list = dataclasses.field(default_factory=list)

    @classmethod
    def skip(cls, reason):
        """Create the outcome of a check that has nothing to verify."""
        return cls(passed=True, detail={'reason': reason}, skipped=True)


class _Worst:
    """Track the worst value of a quantity and the input that produced it."""
    def __init__(self, larger_is_worse=True):
        self._sign = 1 if larger_is_worse else -1
        self.value = None
        self.witness = None

    def update(self, value, witness=None):
        """Record a value if it is worse than all previous ones."""
        value = float(value)
        if self.value is None or self._sign * (value - self.value) > 0 or (
                math.isnan(value) and not math.isnan(self.value)):
            self.value = value
            self.witness = witness

    def within(self, bound):
        """Check that the worst value respects a bound."""
        if self.value is None:
            return True
        if math.isnan(self.value):
            return False
        return self._sign * (self.value - bound) <= 0


class _CheckContext:
    """Inputs available to one check."""
    def __init__(self, config, field, seed_sequence):
        self.config = config
        self.field = field
        self.rng = np.random.default_rng(seed_sequence)

    @property
    def n(self):
        """Obtain the configured half-rank."""
        return self.config.n

    def count(self, cap=None):
        """Obtain the number of samples, limited by a cap."""
        if cap is None:
            return self.config.samples
        return min(self.config.samples, cap)

    def child_seed(self):
        """Draw a seed for a library sampler."""
        return int(self.rng.integers(2**63))

    def point(self):
        """Draw a point of the upper half-plane."""
        x = self.rng.uniform(-2, 2)
        y = math.exp(self.rng.uniform(math.log(0.2), math.log(5)))
        return complex(x, y)

    def group_element(self, scale=0.5):
        """Draw an element of SL(2,R) of moderate norm."""
        return hitchindod.slrep.random_sl2(self.rng, scale)


def _qform_equation_certificate(ctx):
    """Verify both inequality families exactly for n up to the bound."""
    top = max(EXACT_MAX_N, ctx.n)
    failures = []
    first = _Worst(larger_is_worse=False)
    second = _Worst(larger_is_worse=False)
    for n in range(1, top + 1):
        certificate = hitchindod.qform.certify_equations(n)
        for record in certificate.records:
            tracker = first if record.name == 'equation1' else second
            tracker.update(float(record.slack), {'n': n, 'k': record.k})
            if not record.holds:
                failures.append({
                    'n': n,
                    'name': record.name,
                    'k': record.k,
                    'slack': record.slack
                })
    return _Outcome(passed=not failures,
                    worst_value=first.value,
                    witness=first.witness,
                    detail={
                        'max_n': top,
                        'failures': failures,
                        'equation2_min_slack': second.value,
                    })


def _qform_transversality(ctx):
    """Certify the canonical parameters transverse to g0."""
    n = ctx.n
    report = hitchindod.qform.certify_transverse(
        hitchindod.qform.default_lambda(n), n, ctx.count(), ctx.child_seed(),
        TRANSVERSALITY_MIN)
    return _Outcome(passed=report.holds,
                    worst_value=report.min_margin if report.samples else None,
                    witness=report.witness,
                    detail={
                        'samples': report.samples,
                        'equations_hold': report.equations.holds,
                        'margin_floor': TRANSVERSALITY_MIN,
                    })


def _qform_covariance(ctx):
    """Check the phase of q_lambda under both circle action conventions."""
    n = ctx.n
    lam = hitchindod.qform.default_lambda(n)
    worst = _Worst()
    for _ in range(ctx.count(1000)):
        first = hitchindod.qform.random_form(n, ctx.rng)
        second = hitchindod.qform.random_form(n, ctx.rng)
        theta = ctx.rng.uniform(0, 2 * math.pi)
        value = hitchindod.qform.q_lambda(lam, first, second)
        for sign in (1, -1):
            moved = hitchindod.qform.q_lambda(
                lam, hitchindod.slrep.circle_act(sign * theta, first),
                hitchindod.slrep.circle_act(sign * theta, second))
            error = abs(moved - np.exp(-2j * sign * theta) * value)
            worst.update(error, (first, second, theta))
    return _Outcome(passed=worst.within(COVARIANCE_TOL),
                    worst_value=worst.value,
                    witness=worst.witness)


def _qform_real_closed_form(ctx):
    """Compare q_lambda(P, g0.P) with its closed form on real forms."""
    n = ctx.n
    lam = hitchindod.qform.default_lambda(n)
    worst = _Worst()
    for _ in range(ctx.count(1000)):
        poly = hitchindod.qform.random_form(n, ctx.rng, real=True)
        generic = hitchindod.qform.q_lambda(
            lam, poly, hitchindod.slrep.lie_act_g0(poly))
        worst.update(abs(generic - hitchindod.qform.closed_form_real(lam,
                                                                    poly)),
                     poly)
    return _Outcome(passed=worst.within(CLOSED_FORM_TOL),
                    worst_value=worst.value,
                    witness=worst.witness)


def _qform_real_split(ctx):
    """Check that the margin of A + iB splits into those of A and B."""
    n = ctx.n
    lam = hitchindod.qform.default_lambda(n)
    worst = _Worst()
    for _ in range(ctx.count(1000)):
        poly = hitchindod.qform.random_form(n, ctx.rng)
        total = hitchindod.qform.transversality_value(lam, poly)
        parts = (hitchindod.qform.transversality_value(
            lam, hitchindod.slrep.real_part(poly)) +
                 hitchindod.qform.transversality_value(
                     lam, hitchindod.slrep.imag_part(poly)))
        worst.update(abs(total - parts), poly)
    return _Outcome(passed=worst.within(CLOSED_FORM_TOL),
                    worst_value=worst.value,
                    witness=worst.witness)


def _nonintersect_field(ctx):
    """Sample the null cone over one field and check it avoids K."""
    n = ctx.n
    try:
        report = hitchindod.qform.nonintersect_check(
            hitchindod.qform.default_lambda(n), n, ctx.field, ctx.count(),
            ctx.child_seed(), 0.0, ctx.config.tol_cluster,
            ctx.config.tol_real)
    except hitchindod.exc.AmbiguityException as e:
        return _Outcome(passed=False,
                        witness=e.witness,
                        detail={'error': f"{e}"})
    if report.samples == 0:
        return _Outcome.skip(f"The null cone over '{ctx.field}' is trivial")
    return _Outcome(passed=report.holds and report.min_margin >= 1,
                    worst_value=report.min_margin,
                    witness=report.witness,
                    detail={
                        'samples': report.samples,
                        'members': report.members,
                        'ambiguous': report.ambiguous,
                        'min_gap': report.min_gap,
                    })


def _nonintersect_flow(ctx):
    """Check that Re q(g_t P, g_t P) increases through zero on the cone."""
    n = ctx.n
    lam = hitchindod.qform.default_lambda(n)
    times = np.linspace(-2, 2, 41)
    polys = hitchindod.qform.sample_C_lambda(lam, n,
                                             hitchindod.stiefel.COMPLEX,
                                             ctx.count(100), ctx.child_seed())
    worst = _Worst()
    failures = 0
    for poly in polys:
        report = hitchindod.qform.flow_monotone(lam, poly, times)
        if not report.holds:
            failures += 1
            worst.update(math.inf, poly)
        worst.update(report.max_slope_error, poly)
    return _Outcome(passed=failures == 0 and worst.within(1e-6),
                    worst_value=worst.value,
                    witness=worst.witness,
                    detail={
                        'samples': len(polys),
                        'failures': failures
                    })


def _nonintersect_phi_injectivity(ctx):
    """Test the fibration map for tangency, K hits and collisions."""
    n = ctx.n
    lam = hitchindod.qform.default_lambda(n)
    count = ctx.count(1000)
    polys = hitchindod.qform.sample_C_lambda(lam, n,
                                             hitchindod.stiefel.COMPLEX,
                                             2 * count, ctx.child_seed())
    worst = _Worst(larger_is_worse=False)
    members = 0
    for i in range(count):
        g1, g2 = ctx.group_element(), ctx.group_element()
        p1, p2 = polys[2 * i], polys[2 * i + 1]
        image = hitchindod.qform.phi_map(lam, g1, p1)
        worst.update(image.witness, p1)
        moved = hitchindod.slrep.act(g1, p1)
        if hitchindod.dod.in_K(moved, ctx.config.tol_cluster,
                               ctx.config.tol_real).member:
            members += 1
        other = hitchindod.qform.phi_map(lam, g2, p2)
        distance = hitchindod.utils.fubini_study(image.point.representative,
                                                 other.point.representative)
        worst.update(distance, (g1, p1, g2, p2))
    return _Outcome(passed=members == 0 and worst.within(1e-12),
                    worst_value=worst.value,
                    witness=worst.witness,
                    detail={
                        'samples': count,
                        'members': members
                    })


def _sampled_fields(ctx):
    """Obtain the selected fields whose cone C' is not trivial."""
    return [
        field for field in ctx.config.fields
        if field == hitchindod.stiefel.COMPLEX or ctx.n >= 2
    ]


def _equivariance_developing(ctx):
    """Check D(gamma.p) = gamma.D(p) for random points and group elements."""
    n = ctx.n
    worst = _Worst()
    for field in _sampled_fields(ctx):
        for _ in range(ctx.count(1000)):
            z = ctx.point()
            t = hitchindod.stiefel.sample_cone_prime(n, field, ctx.rng)
            gamma = ctx.group_element()
            distance = hitchindod.devmap.equivariance_check(
                gamma, z, t, n, field)
            worst.update(distance, (field, gamma, z, t))
    return _Outcome(passed=worst.within(EQUIVARIANCE_TOL),
                    worst_value=worst.value,
                    witness=worst.witness)


def _equivariance_k_consistency(ctx):
    """
    Check K membership at random z against the prediction from i.

    The developed form at (z, t) is compared with gamma applied to the form
    developed at the preimage of (z, t) over i.
    """
    n = ctx.n
    inconsistent = 0
    members = 0
    witness = None
    for field in _sampled_fields(ctx):
        for _ in range(ctx.count(1000)):
            z = ctx.point()
            t = hitchindod.stiefel.sample_cone_prime(n, field, ctx.rng)
            angle = ctx.rng.uniform(0, 2 * math.pi)
            result = hitchindod.devmap.k_consistency(z, t, n, field, angle,
                                                     ctx.config.tol_cluster,
                                                     ctx.config.tol_real)
            members += result.direct.member
            if not result.consistent:
                inconsistent += 1
                witness = witness or (field, z, t, angle)
    return _Outcome(passed=inconsistent == 0,
                    worst_value=inconsistent,
                    witness=witness,
                    detail={
                        'inconsistent': inconsistent,
                        'members': members
                    })


def _equivariance_left_action(ctx):
    """Check the phase cocycle of the unitary frame."""
    worst = _Worst()
    for _ in range(ctx.count(1000)):
        z = ctx.point()
        gamma = ctx.group_element()
        worst.update(hitchindod.devmap.left_action_frame_check(gamma, z),
                     (gamma, z))
    return _Outcome(passed=worst.within(FRAME_TOL),
                    worst_value=worst.value,
                    witness=worst.witness)


def _equivariance_v_curve(ctx):
    """Check v(g.t) = g.v(t) through principal angles."""
    n = ctx.n
    worst = _Worst()
    for _ in range(ctx.count(1000)):
        point = hitchindod.dod.RP1Point.from_angle(ctx.rng.uniform(
            0, math.pi))
        g = ctx.group_element()
        worst.update(hitchindod.dod.v_curve_equivariance(g, point, n),
                     (g, point.pair))
    return _Outcome(passed=worst.within(EQUIVARIANCE_TOL),
                    worst_value=worst.value,
                    witness=worst.witness)


def _equivariance_k_invariance(ctx):
    """Check that K is preserved by the group and by the circle action."""
    n = ctx.n
    count = ctx.count(1000)
    failures = 0
    witness = None
    for poly in hitchindod.dod.sample_K(n, count, ctx.child_seed()):
        g = ctx.group_element()
        theta = ctx.rng.uniform(0, 2 * math.pi)
        for image in (hitchindod.slrep.act(g, poly),
                      hitchindod.slrep.circle_act(theta, poly)):
            membership = hitchindod.dod.in_K(image, ctx.config.tol_cluster,
                                             ctx.config.tol_real)
            if not membership.member:
                failures += 1
                witness = witness or image
    return _Outcome(passed=failures == 0,
                    worst_value=failures,
                    witness=witness,
                    detail={'samples': count})


_CALIBRATION_POINTS = (1j, 1 + 2j, -0.5 + 0.5j)


def _hitchin_residual(ctx):
    """Calibrate the curvature convention and check Hitchin's equation."""
    data = hitchindod.higgsflat.HiggsData(ctx.n)
    convention = hitchindod.higgsflat.calibrate_hitchin_convention(
        data, _CALIBRATION_POINTS)
    frozen = (hitchindod.higgsflat.HITCHIN_SIGN,
              hitchindod.higgsflat.HITCHIN_SCALE)
    worst = _Worst()
    for z in _CALIBRATION_POINTS:
        worst.update(hitchindod.higgsflat.hitchin_residual(data, z), z)
    for _ in range(ctx.count(100)):
        z = ctx.point()
        worst.update(hitchindod.higgsflat.hitchin_residual(data, z), z)
    return _Outcome(passed=convention == frozen and worst.within(HITCHIN_TOL),
                    worst_value=worst.value,
                    witness=worst.witness,
                    detail={
                        'sign': convention[0],
                        'scale': convention[1]
                    })


def _hitchin_negative_control(ctx):
    """Check that perturbed data violates Hitchin's equation."""
    n = ctx.n
    exponents = [2 * k - 2 * n - 1 for k in range(1, 2 * n + 1)]
    exponents[0] += 2
    controls = {
        'exponent': hitchindod.higgsflat.HiggsData(n, exponents=exponents),
        'phi_scale': hitchindod.higgsflat.HiggsData(n, phi_scale=0.0),
    }
    worst = _Worst(larger_is_worse=False)
    residuals = {}
    for name, data in controls.items():
        residual = hitchindod.higgsflat.hitchin_residual(data, 1j)
        residuals[name] = residual
        worst.update(residual, name)
    return _Outcome(passed=worst.value > NEGATIVE_CONTROL_MIN,
                    worst_value=worst.value,
                    witness=worst.witness,
                    detail={'residuals': residuals})


def _hitchin_sne_inequality(ctx):
    """Verify 2 r_2i-1 > r_2i + r_2i-2 exactly for n up to the bound."""
    top = max(EXACT_MAX_N, ctx.n)
    failures = []
    for n in range(1, top + 1):
        for record in hitchindod.higgsflat.sne_inequality(n):
            if not (record.identity and record.inequality and
                    record.witness):
                failures.append({'n': n, 'i': record.i})
    return _Outcome(passed=not failures,
                    worst_value=len(failures),
                    witness=failures[0] if failures else None,
                    detail={'max_n': top})


def _flatness_holonomy(ctx):
    """Check trivial holonomy around circles and triangles."""
    data = hitchindod.higgsflat.HiggsData(ctx.n)
    identity = np.eye(data.size)
    worst = _Worst()
    for _ in range(ctx.count(20)):
        z = ctx.point()
        radius = ctx.rng.uniform(0.05, 0.5) * z.imag
        worst.update(
            hitchindod.higgsflat.flatness_residual(data, z, radius),
            ('circle', z, radius))
        path = [ctx.point() for _ in range(3)]
        hol = hitchindod.higgsflat.holonomy(data, path + path[:1])
        worst.update(np.linalg.norm(hol - identity, 2), ('triangle', path))
    return _Outcome(passed=worst.within(HOLONOMY_TOL),
                    worst_value=worst.value,
                    witness=worst.witness)


def _flatness_parallel_sections(ctx):
    """Check that the rank 2 sections are parallel."""
    data = hitchindod.higgsflat.HiggsData(1)
    worst = _Worst()
    for _ in range(ctx.count(100)):
        z = ctx.point()
        a, b = ctx.rng.normal(size=2) + 1j * ctx.rng.normal(size=2)

        def section(point, a=a, b=b):
            return hitchindod.higgsflat.parallel_section_n1(point, a, b)

        nabla_z, nabla_zbar = hitchindod.higgsflat.covariant_derivative(
            data, z, section)
        scale = max(1.0, np.linalg.norm(section(z)))
        worst.update(
            max(np.linalg.norm(nabla_z), np.linalg.norm(nabla_zbar)) / scale,
            (z, a, b))
    return _Outcome(passed=worst.within(SECTION_TOL),
                    worst_value=worst.value,
                    witness=worst.witness)


def _flatness_tau_compatibility(ctx):
    """Check that transport keeps tau-fixed vectors fixed."""
    n = ctx.n
    data = hitchindod.higgsflat.HiggsData(n)
    worst = _Worst()
    for _ in range(ctx.count(20)):
        half = ctx.rng.normal(size=n) + 1j * ctx.rng.normal(size=n)
        t = np.concatenate([half, np.conj(half[::-1])])
        z_from, z_to = ctx.point(), ctx.point()
        worst.update(
            hitchindod.higgsflat.tau_transport_check(data, z_from, z_to, t),
            (z_from, z_to, t))
    return _Outcome(passed=worst.within(TAU_TOL),
                    worst_value=worst.value,
                    witness=worst.witness)


def _flatness_transport_agreement(ctx):
    """Compare closed-form transport and development with the integrator."""
    n = ctx.n
    data = hitchindod.higgsflat.HiggsData(n)
    worst = _Worst()
    development = _Worst()
    for _ in range(ctx.count(20)):
        z = ctx.point()
        closed = hitchindod.devmap.transport_sym(hitchindod.devmap.Z0, z, n)
        integrated = hitchindod.higgsflat.transport_segment(
            data, z, hitchindod.devmap.Z0)
        worst.update(
            np.linalg.norm(closed - integrated) /
            max(1.0, np.linalg.norm(integrated)), z)

        t = hitchindod.stiefel.sample_cone_prime(n,
                                                 hitchindod.stiefel.COMPLEX,
                                                 ctx.rng)
        direct = hitchindod.devmap.developing(z, t, n)
        transported = hitchindod.devmap.developing_via_transport(z, t, n)
        development.update(
            hitchindod.hpoly.norm(direct - transported) /
            hitchindod.hpoly.norm(transported), (z, t))
    return _Outcome(passed=worst.within(TRANSPORT_TOL) and
                    development.within(TRANSPORT_TOL),
                    worst_value=worst.value,
                    witness=worst.witness,
                    detail={
                        'developing_deviation': development.value,
                        'developing_witness': development.witness,
                    })


def _transversality_field(ctx):
    """Check that the tautological section is transverse."""
    n = ctx.n
    if ctx.field == hitchindod.stiefel.REAL and n < 2:
        return _Outcome.skip("The real cone is trivial for half-rank 1")
    data = hitchindod.higgsflat.HiggsData(n)
    worst = _Worst(larger_is_worse=False)
    failures = 0
    for _ in range(ctx.count()):
        z = ctx.point()
        t = hitchindod.stiefel.sample_cone_prime(n, ctx.field, ctx.rng)
        report = hitchindod.higgsflat.tautological_jacobian(
            data, ctx.field, z, t)
        if not report.transverse:
            failures += 1
        worst.update(report.min_sv / report.max_sv, (z, t))
    return _Outcome(passed=failures == 0 and worst.within(JACOBIAN_MIN),
                    worst_value=worst.value,
                    witness=worst.witness,
                    detail={'failures': failures})


def _roots_avoid_k(ctx):
    """Check that developed forms avoid K and collect their roots."""
    n = ctx.n
    if ctx.field == hitchindod.stiefel.REAL and n < 2:
        return _Outcome.skip("The real cone is trivial for half-rank 1")
    worst = _Worst(larger_is_worse=False)
    members = 0
    ambiguous = 0
    rows = []
    for _ in range(ctx.count()):
        z = ctx.point()
        t = hitchindod.stiefel.sample_cone_prime(n, ctx.field, ctx.rng)
        poly = hitchindod.devmap.developing(z, t, n, ctx.field)
        membership = hitchindod.dod.in_K(poly, ctx.config.tol_cluster,
                                         ctx.config.tol_real)
        members += membership.member
        ambiguous += membership.ambiguous
        worst.update(n - membership.mult, (z, t))
        rows.append(_csv_row(n, ctx.field, z, t, membership.report))
    return _Outcome(passed=members == 0 and ambiguous == 0,
                    worst_value=worst.value,
                    witness=worst.witness,
                    detail={
                        'members': members,
                        'ambiguous': ambiguous
                    },
                    rows=rows)


def _roots_cone_identity(ctx):
    """Check that development at i lands in the null cone."""
    n = ctx.n
    lam = hitchindod.qform.default_lambda(n)
    worst = _Worst()
    for _ in range(ctx.count(1000)):
        t = hitchindod.stiefel.sample_cone_prime(n,
                                                 hitchindod.stiefel.COMPLEX,
                                                 ctx.rng)
        poly = hitchindod.devmap.developing(hitchindod.devmap.Z0, t, n)
        worst.update(hitchindod.qform.cone_residual(lam, poly), t)
    return _Outcome(passed=worst.within(CONE_TOL),
                    worst_value=worst.value,
                    witness=worst.witness)


def _roots_basis_roundtrip(ctx):
    """Check basis changes, g0 in both bases and the circle action."""
    n = ctx.n
    worst = _Worst()
    for _ in range(ctx.count(1000)):
        poly = hitchindod.qform.random_form(n, ctx.rng)
        back = hitchindod.hpoly.to_basis(
            hitchindod.hpoly.to_basis(poly, hitchindod.hpoly.ZW),
            hitchindod.hpoly.XY)
        worst.update(hitchindod.hpoly.norm(back - poly), poly)

        zw = hitchindod.hpoly.to_basis(poly, hitchindod.hpoly.ZW)
        g0_xy = hitchindod.slrep.lie_act_g0(poly)
        g0_zw = hitchindod.hpoly.to_basis(hitchindod.slrep.lie_act_g0(zw),
                                          hitchindod.hpoly.XY)
        worst.update(hitchindod.hpoly.norm(g0_xy - g0_zw) / (2 * n), poly)

        theta = ctx.rng.uniform(0, 2 * math.pi)
        circle = hitchindod.hpoly.to_basis(
            hitchindod.slrep.circle_act(theta, zw), hitchindod.hpoly.XY)
        rotated = hitchindod.slrep.act(hitchindod.slrep.rotation(theta), poly)
        worst.update(hitchindod.hpoly.norm(circle - rotated), (poly, theta))
    return _Outcome(passed=worst.within(ROUNDTRIP_TOL * 100),
                    worst_value=worst.value,
                    witness=worst.witness)


def _roots_reconstruction(ctx):
    """
    Rebuild forms from root multisets and recover them from their reports.

    The multiplicities must match and the monic form rebuilt from the reported
    roots must match the original coefficients.
    """
    n = ctx.n
    degree = 2 * n - 1
    failures = 0
    witness = None
    worst = _Worst()
    for _ in range(ctx.count(1000)):
        mult = int(ctx.rng.integers(1, n + 1))
        if ctx.rng.uniform() < 0.1:
            center = math.inf
        else:
            center = ctx.rng.uniform(-2, 2)
        roots = [(center, mult)]
        for _ in range(degree - mult):
            roots.append((complex(ctx.rng.uniform(-2, 2),
                                  ctx.rng.uniform(0.5, 2) *
                                  ctx.rng.choice((-1, 1))), 1))
        poly = hitchindod.hpoly.HPoly.from_form(
            hitchindod.hpoly.from_roots(roots))
        report = hitchindod.hpoly.real_root_multiplicity(
            poly, ctx.config.tol_cluster, ctx.config.tol_real)
        error = hitchindod.hpoly.reconstruction_error(poly, report)
        worst.update(error, roots)
        if (report.max_real_mult != mult or report.degree != degree or
                not error <= RECONSTRUCTION_TOL):
            failures += 1
            witness = witness or roots
    return _Outcome(passed=failures == 0,
                    worst_value=worst.value,
                    witness=witness or worst.witness,
                    detail={'failures': failures})


def _random_orthogonal(rng, size, real):
    """Draw a random orthogonal or unitary matrix."""
    matrix = rng.normal(size=(size, size))
    if not real:
        matrix = matrix + 1j * rng.normal(size=(size, size))
    q, r = np.linalg.qr(matrix)
    return q * (np.diag(r) / np.abs(np.diag(r)))[None, :]


def _stiefel_conjugation(ctx):
    """Check A phi'(theta) A^-1 = phi(theta) and realness on tau0-fixed
    vectors."""
    worst = _Worst()
    top = max(6, ctx.n)
    for n in range(1, top + 1):
        change = hitchindod.slrep.basis_change_A(n)
        inverse = np.linalg.inv(change)
        for _ in range(ctx.count(100)):
            theta = ctx.rng.uniform(0, 2 * math.pi)
            sample = hitchindod.slrep.rep_matrices(theta, n)
            error = np.linalg.norm(change @ sample.phi_prime @ inverse -
                                   sample.phi_embedded())
            worst.update(error, (n, theta))
            half = ctx.rng.normal(size=n) + 1j * ctx.rng.normal(size=n)
            t = np.concatenate([half, np.conj(half[::-1])])
            worst.update(
                np.max(np.abs((change @ t).imag)) / np.linalg.norm(t),
                (n, t))
    return _Outcome(passed=worst.within(CONJUGATION_TOL),
                    worst_value=worst.value,
                    witness=worst.witness,
                    detail={'max_n': top})


def _stiefel_cone_map(ctx):
    """Check that basis_change_A maps C' onto C."""
    n = ctx.n
    fields = [
        field for field in ctx.config.fields
        if not (field == hitchindod.stiefel.REAL and n < 2)
    ]
    if not fields:
        return _Outcome.skip("The real cone is trivial for half-rank 1")
    change = hitchindod.slrep.basis_change_A(n)
    worst = _Worst()
    for field in fields:
        for _ in range(ctx.count(1000)):
            t = hitchindod.stiefel.sample_cone_prime(n, field, ctx.rng)
            point = hitchindod.stiefel.StiefelPoint.from_interleaved(
                field, change @ t)
            check = hitchindod.stiefel.in_cone(point, STIEFEL_CONE_TOL)
            worst.update(check.worst, (field, t))
    return _Outcome(passed=worst.within(STIEFEL_CONE_TOL),
                    worst_value=worst.value,
                    witness=worst.witness)


def _stiefel_diag_fiber(ctx):
    """Check the equivariance and the fiber over Id of h(A)."""
    n = ctx.n
    worst = _Worst()
    for _ in range(ctx.count(1000)):
        matrix = (ctx.rng.normal(size=(n, 2)) +
                  1j * ctx.rng.normal(size=(n, 2)))
        g = ctx.group_element()
        inverse = np.linalg.inv(g)
        form = hitchindod.stiefel.diag_fiber_map(matrix)
        moved = hitchindod.stiefel.diag_fiber_map(
            hitchindod.stiefel.diag_fiber_act(matrix, g))
        scale = np.linalg.norm(form) * np.linalg.norm(inverse)**2
        worst.update(
            np.linalg.norm(moved - inverse.T @ form @ inverse) / scale,
            (matrix, g))
        point = hitchindod.stiefel.sample_cone(n, hitchindod.stiefel.COMPLEX,
                                               ctx.rng)
        worst.update(
            np.linalg.norm(
                hitchindod.stiefel.diag_fiber_map(point.as_matrix()) -
                np.eye(2)), point.interleaved())
    return _Outcome(passed=worst.within(FIBER_TOL),
                    worst_value=worst.value,
                    witness=worst.witness)


def _stiefel_cone_preservation(ctx):
    """Check that the structure group preserves the cone."""
    n = ctx.n
    fields = [
        field for field in ctx.config.fields
        if not (field == hitchindod.stiefel.REAL and n < 2)
    ]
    if not fields:
        return _Outcome.skip("The real cone is trivial for half-rank 1")
    worst = _Worst()
    for field in fields:
        real = field == hitchindod.stiefel.REAL
        for _ in range(ctx.count(1000)):
            point = hitchindod.stiefel.sample_cone(n, field, ctx.rng)
            a = _random_orthogonal(ctx.rng, n, real)
            b = hitchindod.slrep.rotation(ctx.rng.uniform(0, 2 * math.pi))
            if ctx.rng.uniform() < 0.5:
                b = b @ np.diag([1.0, -1.0])
            moved = hitchindod.stiefel.act_group(point, a, b)
            worst.update(
                hitchindod.stiefel.in_cone(moved, STIEFEL_CONE_TOL).worst,
                (field, point.interleaved()))
            if not real:
                unitary = hitchindod.stiefel.act_group(point, a, np.eye(2))
                worst.update(
                    abs(
                        hitchindod.stiefel.unitary_invariant(unitary) -
                        hitchindod.stiefel.unitary_invariant(point)),
                    (field, point.interleaved()))
    return _Outcome(passed=worst.within(STIEFEL_CONE_TOL),
                    worst_value=worst.value,
                    witness=worst.witness)


def _random_n2_params(rng):
    """Draw parameters of the first n = 2 component."""
    theta_prime = rng.uniform(hitchindod.devmap.THETA_MIN,
                              hitchindod.devmap.THETA_MAX)
    r = math.exp(rng.uniform(math.log(0.2), math.log(5)))
    phi = rng.uniform(0.05, math.pi - 0.05)
    return hitchindod.devmap.N2Params(theta_prime, r, phi)


def _params_error(first, second):
    """Obtain the largest deviation between two parameter triples."""
    return max(abs(first.theta_prime - second.theta_prime),
               abs(first.z - second.z) / abs(second.z))


def _real_roots(poly, ctx):
    """Obtain the real cluster centers of a developed form as unit pairs."""
    report = hitchindod.hpoly.real_root_multiplicity(poly,
                                                     ctx.config.tol_cluster,
                                                     ctx.config.tol_real)
    return [
        _affine_pair(cluster.center.real if not cluster.is_infinite else math.
                     inf) for cluster in report.clusters if cluster.is_real
    ], report


def _affine_pair(value):
    """Obtain the unit pair of the point [value:1] of RP^1."""
    if math.isinf(value):
        return np.array([1.0, 0.0])
    return hitchindod.utils.unit_pair(value, 1).real


def _match_roots(expected, found):
    """Obtain the worst chordal distance between two root lists."""
    if len(expected) != len(found):
        return math.inf
    return max(
        min(hitchindod.utils.chordal_distance(_affine_pair(value), pair)
            for pair in found) for value in expected)


def _n2_omega1_roundtrip(ctx):
    """Round-trip parameters through the real roots of the first
    component."""
    worst = _Worst()
    roots_worst = _Worst()
    for _ in range(ctx.count(1000)):
        params = _random_n2_params(ctx.rng)
        roots = hitchindod.devmap.n2_forward(params)
        worst.update(
            _params_error(hitchindod.devmap.n2_inverse(*roots), params),
            params)
        shuffled = list(roots)
        ctx.rng.shuffle(shuffled)
        worst.update(
            _params_error(hitchindod.devmap.n2_inverse_roots(shuffled),
                          params), params)

        t = hitchindod.devmap.n2_omega1_point(
            hitchindod.devmap.n2_omega1_theta(params))
        poly = hitchindod.devmap.developing(params.z, t, 2,
                                            hitchindod.stiefel.REAL)
        found, _ = _real_roots(poly, ctx)
        roots_worst.update(_match_roots(roots, found), params)
    return _Outcome(passed=worst.within(N2_TOL) and
                    roots_worst.within(ROOT_MATCH_TOL),
                    worst_value=worst.value,
                    witness=worst.witness,
                    detail={
                        'root_deviation': roots_worst.value,
                        'root_witness': roots_worst.witness,
                    })


def _n2_infinity_branch(ctx):
    """Check the branch theta' = pi/2 where a1 sits at infinity."""
    points = [1j] + [ctx.point() for _ in range(ctx.count(1000))]
    worst = _Worst()
    for z in points:
        params = hitchindod.devmap.N2Params.from_z(math.pi / 2, z)
        roots = hitchindod.devmap.n2_forward(params)
        if not math.isinf(roots[0]):
            worst.update(math.inf, params)
            continue
        worst.update(
            _params_error(hitchindod.devmap.n2_inverse(*roots), params),
            params)
    poly = hitchindod.devmap.developing(
        1j, hitchindod.devmap.n2_omega1_point(math.pi / 4), 2,
        hitchindod.stiefel.REAL)
    found, _ = _real_roots(poly, ctx)
    expected = (math.inf, -1 / math.sqrt(3), 1 / math.sqrt(3))
    root_deviation = _match_roots(expected, found)
    return _Outcome(passed=worst.within(N2_TOL) and
                    root_deviation <= ROOT_MATCH_TOL,
                    worst_value=worst.value,
                    witness=worst.witness,
                    detail={'root_deviation': root_deviation})


def _n2_omega2_roundtrip(ctx):
    """Round-trip the fiber angle through the real root of the second
    component."""
    worst = _Worst()
    roots_worst = _Worst()
    for _ in range(ctx.count(1000)):
        z = ctx.point()
        theta = ctx.rng.uniform(0, math.pi)
        root = hitchindod.devmap.n2_omega2_root(z, theta)
        back = hitchindod.devmap.n2_inverse_omega2(z, root)
        error = abs(back - theta)
        worst.update(min(error, math.pi - error), (z, theta))

        t = hitchindod.devmap.n2_omega2_point(theta)
        poly = hitchindod.devmap.developing(z, t, 2, hitchindod.stiefel.REAL)
        found, report = _real_roots(poly, ctx)
        deviation = _match_roots([root], found)
        if report.max_real_mult != 1:
            deviation = math.inf
        roots_worst.update(deviation, (z, theta))
    return _Outcome(passed=worst.within(N2_TOL) and
                    roots_worst.within(ROOT_MATCH_TOL),
                    worst_value=worst.value,
                    witness=worst.witness,
                    detail={
                        'root_deviation': roots_worst.value,
                        'root_witness': roots_worst.witness,
                    })


_GROUPOID_POINTS = (1j, 0.5 + 2j, -1 + 0.3j, 2 + 1j)
_GROUPOID_ANGLES = (0.0, 0.3, 1.1, -2.5)


def _n2_groupoid(ctx):
    """Check the composition laws of transport and of the circle actions."""
    del ctx
    worst = _Worst()
    n = 2
    for z in _GROUPOID_POINTS:
        worst.update(
            np.linalg.norm(
                hitchindod.devmap.transport_sym(z, z, n) - np.eye(2 * n)),
            ('identity', z))
    for z1 in _GROUPOID_POINTS:
        for z2 in _GROUPOID_POINTS:
            for z3 in _GROUPOID_POINTS:
                composed = (hitchindod.devmap.transport_sym(z1, z2, n)
                            @ hitchindod.devmap.transport_sym(z2, z3, n))
                direct = hitchindod.devmap.transport_sym(z1, z3, n)
                worst.update(
                    np.linalg.norm(composed - direct) /
                    max(1.0, np.linalg.norm(direct)), ('compose', z1, z2, z3))
    for first in _GROUPOID_ANGLES:
        for second in _GROUPOID_ANGLES:
            product = hitchindod.slrep.rep_matrices(first, n).compose(
                hitchindod.slrep.rep_matrices(second, n))
            direct = hitchindod.slrep.rep_matrices(first + second, n)
            error = max(np.linalg.norm(product.L - direct.L),
                        np.linalg.norm(product.R - direct.R),
                        np.linalg.norm(product.phi_prime - direct.phi_prime))
            worst.update(error, ('rotation', first, second))
    return _Outcome(passed=worst.within(GROUPOID_TOL),
                    worst_value=worst.value,
                    witness=worst.witness)


@dataclasses.dataclass(frozen=True)
class _Check:
    """Registered check."""
    name: str
    suite: str
    func: object
    per_field: bool = False
    deterministic: bool = False


_CHECKS = (
    _Check('qform.equation_certificate',
           'qform',
           _qform_equation_certificate,
           deterministic=True),
    _Check('qform.transversality',
           'qform',
           _qform_transversality,
           deterministic=True),
    _Check('qform.covariance', 'qform', _qform_covariance),
    _Check('qform.real_closed_form', 'qform', _qform_real_closed_form),
    _Check('qform.real_split', 'qform', _qform_real_split),
    _Check('nonintersect', 'nonintersect', _nonintersect_field,
           per_field=True),
    _Check('nonintersect.flow', 'nonintersect', _nonintersect_flow),
    _Check('nonintersect.phi_injectivity', 'nonintersect',
           _nonintersect_phi_injectivity),
    _Check('equivariance.developing', 'equivariance',
           _equivariance_developing),
    _Check('equivariance.left_action', 'equivariance',
           _equivariance_left_action),
    _Check('equivariance.v_curve', 'equivariance', _equivariance_v_curve),
    _Check('equivariance.k_consistency', 'equivariance',
           _equivariance_k_consistency),
    _Check('equivariance.k_invariance', 'equivariance',
           _equivariance_k_invariance),
    _Check('hitchin.residual',
           'hitchin',
           _hitchin_residual,
           deterministic=True),
    _Check('hitchin.negative_control',
           'hitchin',
           _hitchin_negative_control,
           deterministic=True),
    _Check('hitchin.sne_inequality',
           'hitchin',
           _hitchin_sne_inequality,
           deterministic=True),
    _Check('flatness.holonomy', 'flatness', _flatness_holonomy),
    _Check('flatness.parallel_sections', 'flatness',
           _flatness_parallel_sections),
    _Check('flatness.tau_compatibility', 'flatness',
           _flatness_tau_compatibility),
    _Check('flatness.transport_agreement', 'flatness',
           _flatness_transport_agreement),
    _Check('transversality',
           'transversality',
           _transversality_field,
           per_field=True),
    _Check('roots.avoid_k', 'roots', _roots_avoid_k, per_field=True),
    _Check('roots.cone_identity', 'roots', _roots_cone_identity),
    _Check('roots.basis_roundtrip', 'roots', _roots_basis_roundtrip),
    _Check('roots.reconstruction', 'roots', _roots_reconstruction),
    _Check('stiefel.conjugation', 'stiefel', _stiefel_conjugation),
    _Check('stiefel.cone_map', 'stiefel', _stiefel_cone_map),
    _Check('stiefel.diag_fiber', 'stiefel', _stiefel_diag_fiber),
    _Check('stiefel.cone_preservation', 'stiefel',
           _stiefel_cone_preservation),
    _Check('n2.omega1_roundtrip', 'n2', _n2_omega1_roundtrip),
    _Check('n2.infinity_branch',
           'n2',
           _n2_infinity_branch,
           deterministic=True),
    _Check('n2.omega2_roundtrip', 'n2', _n2_omega2_roundtrip),
    _Check('n2.groupoid', 'n2', _n2_groupoid, deterministic=True),
)


def plan(config):
    """
    Obtain the checks selected by a configuration.

    The result is a list of (name, check, field) tuples sorted by name. Checks
    that depend on the field are expanded to one check per selected field,
    named with the lower-case field tag.
    """
    checks = []
    for check in _CHECKS:
        if config.suite not in (ALL, check.suite):
            continue
        if check.per_field:
            for field in config.fields:
                checks.append((f"{check.name}.{field.lower()}", check, field))
        else:
            checks.append((check.name, check, None))
    return sorted(checks, key=lambda item: item[0])


def check_names(config):
    """Obtain the sorted names of the checks selected by a configuration."""
    return [name for name, _check, _field in plan(config)]


def _run_check(config, name, check, field, seed_sequence):
    """Run one check and convert its outcome to a record."""
    _logger.debug("Starting check '%s'", name)
    start = time.perf_counter()
    if config.samples == 0 and not check.deterministic:
        outcome = _Outcome.skip("No samples requested")
    else:
        ctx = _CheckContext(config, field, seed_sequence)
        try:
            outcome = check.func(ctx)
        except hitchindod.exc.HitchinDodException as e:
            _logger.debug("Check '%s' raised: %s", name, e)
            outcome = _Outcome(passed=False,
                               witness=getattr(e, 'witness', None),
                               detail={'error': f"{e}"})
    elapsed_ms = (time.perf_counter() - start) * 1000

    if outcome.skipped:
        status = STATUS_SKIP
    elif outcome.passed:
        status = STATUS_PASS
    else:
        status = STATUS_FAIL
    _logger.info("Check '%s' finished with status '%s'", name, status)
    record = CheckRecord(name=name,
                         status=status,
                         worst_value=outcome.worst_value,
                         worst_witness=outcome.witness,
                         elapsed_ms=elapsed_ms,
                         detail=outcome.detail)
    return record, outcome.rows


def run(config):
    """
    Run the checks selected by a configuration.

    Checks are distributed over config.threads worker threads. The returned
    report has its records sorted by name and, for the roots suite, the
    sampled CSV rows in the same order.
    """
    checks = plan(config)
    _logger.info("Running suite '%s' with '%d' checks, seed '%d'",
                 config.suite, len(checks), config.seed)
    children = np.random.SeedSequence(config.seed).spawn(len(checks))

    with concurrent.futures.ThreadPoolExecutor(
            max_workers=config.threads) as executor:
        futures = [
            executor.submit(_run_check, config, name, check, field, child)
            for (name, check, field), child in zip(checks, children)
        ]
        results = [future.result() for future in futures]

    records = tuple(record for record, _rows in results)
    rows = tuple(row for _record, check_rows in results for row in check_rows)
    report = SuiteReport(suite=config.suite,
                         config=config.echo(),
                         records=records,
                         version=hitchindod.__version__,
                         seed=config.seed,
                         rows=rows)
    _logger.info("Suite '%s' finished, pass '%s'", config.suite,
                 report.passed)
    return report
