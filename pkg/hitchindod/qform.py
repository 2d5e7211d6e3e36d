# Copyright (C) 2019-2020 Petr Pavlu <setup@dagobah.cz>
# SPDX-License-Identifier: MIT

"""
The quadratic form q_lambda and its transversality to g0.

For a palindromic positive vector lambda of length n, the symmetric R-bilinear
form on forms of degree 2n-1 is

  q(P, Q) = 1/2 sum_k lambda_k (p_2k conj(q_2k+1) + q_2k conj(p_2k+1))

in ZW coefficients. Its null cone C^lambda contains no form with a real root
of multiplicity n when lambda is transverse to g0, that is when
Re q(P, g0.P) > 0 for all nonzero P.
"""

import dataclasses
import fractions
import logging
import math

import numpy as np

import hitchindod.dod
import hitchindod.exc
import hitchindod.hpoly
import hitchindod.slrep
import hitchindod.stiefel
import hitchindod.utils

_logger = logging.getLogger(__name__)

PALINDROME_TOL = 1e-12
CONE_TOL = 1e-10


class Lambda:
    """Positive palindromic parameter vector of q_lambda."""
    def __init__(self, values):
        """Initialize the vector, checking positivity and palindromy."""
        values = np.array(values, dtype=float).ravel()
        if values.size == 0:
            raise hitchindod.exc.QuadraticFormException(
                "Parameter vector is empty")
        if np.any(values <= 0) or not np.all(np.isfinite(values)):
            raise hitchindod.exc.QuadraticFormException(
                f"Parameter vector '{values.tolist()}' is not positive")
        scale = np.max(values)
        if np.max(np.abs(values - values[::-1])) > PALINDROME_TOL * scale:
            raise hitchindod.exc.QuadraticFormException(
                f"Parameter vector '{values.tolist()}' is not palindromic")
        values.setflags(write=False)
        self._values = values

    @property
    def values(self):
        """Obtain the read-only parameter values."""
        return self._values

    @property
    def n(self):
        """Obtain the half-rank the vector belongs to."""
        return self._values.size

    def scaled(self, factor):
        """Obtain the vector multiplied by a positive factor."""
        return Lambda(factor * self._values)

    def __repr__(self):
        return f"Lambda({self._values.tolist()})"


def exact_lambda_squares(n):
    """
    Obtain the squares of the canonical parameters as exact fractions.

    lambda_k^2 = 1 / (C(2n-1, 2k) C(2n-1, 2k+1)).
    """
    return [
        fractions.Fraction(
            1,
            hitchindod.utils.binomial(2 * n - 1, 2 * k) *
            hitchindod.utils.binomial(2 * n - 1, 2 * k + 1)) for k in range(n)
    ]


def default_lambda(n):
    """Obtain the canonical transverse parameters for half-rank n."""
    if n < 1:
        raise hitchindod.exc.QuadraticFormException(
            f"Invalid half-rank '{n}'")
    # The integer product is exact, one square root is taken per entry.
    values = [
        1 / math.sqrt(
            hitchindod.utils.binomial(2 * n - 1, 2 * k) *
            hitchindod.utils.binomial(2 * n - 1, 2 * k + 1))
        for k in range(n)
    ]
    return Lambda(values)


def _zw_coeffs(lam, poly):
    """Obtain the ZW coefficients of a form matching a parameter vector."""
    if poly.degree != 2 * lam.n - 1:
        raise hitchindod.exc.QuadraticFormException(
            f"Form of degree '{poly.degree}' does not match half-rank "
            f"'{lam.n}'")
    return np.asarray(
        hitchindod.hpoly.to_basis(poly, hitchindod.hpoly.ZW).coeffs)


def q_lambda(lam, first, second):
    """Evaluate the bilinear form q_lambda(P, Q)."""
    p = _zw_coeffs(lam, first)
    q = _zw_coeffs(lam, second)
    weights = lam.values
    return complex(0.5 * np.sum(weights * (p[0::2] * np.conj(q[1::2]) +
                                           q[0::2] * np.conj(p[1::2]))))


def transversality_value(lam, poly):
    """Obtain Re q_lambda(P, g0.P) without normalization."""
    return q_lambda(lam, poly, hitchindod.slrep.lie_act_g0(poly)).real


def transversality_margin(lam, poly):
    """Obtain Re q_lambda(P, g0.P) for P rescaled to unit ZW norm."""
    norm = np.linalg.norm(_zw_coeffs(lam, poly))
    if norm == 0:
        raise hitchindod.exc.PolynomialException(
            "Transversality margin of the zero polynomial")
    return transversality_value(lam, poly) / norm**2


def closed_form_real(lam, poly):
    """
    Evaluate q_lambda(P, g0.P) for a real form through its closed form.

    The sum is sum_k lambda_k ((2n-2k-1) |p_2k|^2 + (2k+2) p_2k conj(p_2k+2)),
    with p_2n taken as zero.
    """
    p = _zw_coeffs(lam, poly)
    n = lam.n
    total = 0j
    for k in range(n):
        following = p[2 * k + 2] if 2 * k + 2 < p.size else 0
        total += lam.values[k] * ((2 * n - 2 * k - 1) * abs(p[2 * k])**2 +
                                  (2 * k + 2) * p[2 * k] * np.conj(following))
    return complex(total)


@dataclasses.dataclass(frozen=True)
class InequalityRecord:
    """One exact inequality of the transversality certificate."""
    name: str
    k: int
    holds: bool
    strict: bool
    slack: fractions.Fraction


@dataclasses.dataclass(frozen=True)
class EquationCertificate:
    """Exact certificate of the two inequality families for one n."""
    n: int
    records: tuple

    @property
    def holds(self):
        """Check that every inequality holds."""
        return all(record.holds for record in self.records)

    def failures(self):
        """Obtain the records of violated inequalities."""
        return [record for record in self.records if not record.holds]


def _b_square(n, k):
    """Obtain b_k^2 = (2n-2k-1)(2n-2k) 2k / (2k+1)."""
    return fractions.Fraction((2 * n - 2 * k - 1) * (2 * n - 2 * k) * 2 * k,
                              2 * k + 1)


def _c_square(n, k):
    """Obtain c_k^2 = (2n-2k-2)(2n-2k-1)(2k+2) / (2k+1)."""
    return fractions.Fraction(
        (2 * n - 2 * k - 2) * (2 * n - 2 * k - 1) * (2 * k + 2), 2 * k + 1)


def _lambda_squares(lam):
    """
    Obtain exact squares of the parameters, or None for the canonical vector.

    Floats are converted exactly, so a rounded canonical vector would not
    reproduce the equality case of the second family.
    """
    if lam is None or np.array_equal(lam.values,
                                     default_lambda(lam.n).values):
        return None
    return [fractions.Fraction(float(value))**2 for value in lam.values]


def certify_equations(n, lam=None):
    """
    Verify the inequality families of the transversality proof exactly.

    The first family is 2n-2k-1 > (b_k + c_k)/2 for 0 <= k < n, checked as
    sqrt(4(2n-2k-1)^2) > sqrt(b_k^2) + sqrt(c_k^2). The second is
    lambda_k+1^2 / lambda_k^2 >= (2k+2)^4 / (b_k+1^2 c_k^2) for
    0 <= k <= n-2. For the canonical parameters the second family holds with
    equality, so it is certified in non-strict form and its slack is
    recorded.
    """
    if n < 1:
        raise hitchindod.exc.QuadraticFormException(
            f"Invalid half-rank '{n}'")
    if lam is not None and lam.n != n:
        raise hitchindod.exc.QuadraticFormException(
            f"Parameter vector of length '{lam.n}' does not match half-rank "
            f"'{n}'")
    squares = _lambda_squares(lam)
    if squares is None:
        squares = exact_lambda_squares(n)

    records = []
    for k in range(n):
        m = 2 * n - 2 * k - 1
        left = fractions.Fraction(4 * m * m)
        b_sq, c_sq = _b_square(n, k), _c_square(n, k)
        outcome = hitchindod.utils.compare_sqrt_sum(left, b_sq, c_sq)
        records.append(
            InequalityRecord(name='equation1',
                             k=k,
                             holds=outcome > 0,
                             strict=True,
                             slack=left - b_sq - c_sq))
    for k in range(n - 1):
        ratio = squares[k + 1] / squares[k]
        bound = fractions.Fraction((2 * k + 2)**4,
                                   _b_square(n, k + 1) * _c_square(n, k))
        records.append(
            InequalityRecord(name='equation2',
                             k=k,
                             holds=ratio >= bound,
                             strict=False,
                             slack=ratio - bound))
    return EquationCertificate(n, tuple(records))


def random_form(n, rng, real=False):
    """Draw a unit form of degree 2n-1 with Gaussian XY coefficients."""
    coeffs = rng.normal(size=2 * n)
    if not real:
        coeffs = coeffs + 1j * rng.normal(size=2 * n)
    return hitchindod.hpoly.normalized(hitchindod.hpoly.HPoly(n, coeffs))


@dataclasses.dataclass(frozen=True)
class TransversalityReport:
    """Outcome of a transversality certification."""
    n: int
    equations: EquationCertificate
    samples: int
    min_margin: float
    witness: object
    floor: float = 0.0

    @property
    def holds(self):
        """Check that both certificates pass."""
        return self.equations.holds and (self.samples == 0 or
                                         self.min_margin > self.floor)


def certify_transverse(lam, n, samples, seed, floor=0.0):
    """
    Certify transversality of lambda by exact and statistical means.

    The exact part verifies the inequality families of the proof. The
    statistical part records the smallest margin over random unit forms,
    together with the minimizing form, and passes when it exceeds floor.
    """
    if lam.n != n:
        raise hitchindod.exc.QuadraticFormException(
            f"Parameter vector of length '{lam.n}' does not match half-rank "
            f"'{n}'")
    equations = certify_equations(n, lam)
    rng = np.random.default_rng(seed)
    min_margin = math.inf
    witness = None
    for _ in range(samples):
        poly = random_form(n, rng)
        margin = transversality_margin(lam, poly)
        if margin < min_margin:
            min_margin = margin
            witness = poly
    _logger.debug("Transversality of '%s': minimum margin '%s'", lam,
                  min_margin)
    return TransversalityReport(n, equations, samples, min_margin, witness,
                                floor)


def cone_residual(lam, poly):
    """Obtain |q_lambda(P, P)| relative to the squared ZW norm."""
    coeffs = _zw_coeffs(lam, poly)
    norm = np.linalg.norm(coeffs)
    if norm == 0:
        raise hitchindod.exc.PolynomialException(
            "Cone residual of the zero polynomial")
    return abs(q_lambda(lam, poly, poly)) / norm**2


def _sample_complex(lam, n, rng):
    """Draw a complex form of C^lambda."""
    weights = lam.values
    while True:
        p = rng.normal(size=2 * n) + 1j * rng.normal(size=2 * n)
        if abs(p[0]) >= 0.1:
            break
        _logger.debug("Redrawing a cone sample with small pivot '%s'", p[0])
    rest = np.sum(weights[1:] * p[2::2] * np.conj(p[3::2]))
    p[1] = np.conj(-rest / (weights[0] * p[0]))
    return p


def _sample_real(lam, n, rng):
    """
    Draw a real form of C^lambda.

    Real forms satisfy p_d-k = conj(p_k). The constraint then reads
    2 lambda_0 p_0 conj(p_1) + rest = 0 where rest does not involve p_0 or
    p_1. Either p_0 or p_1 is solved for, at random, so that both signs of
    Re(p_0 conj(p_1)) occur.
    """
    weights = lam.values
    degree = 2 * n - 1
    while True:
        p = rng.normal(size=2 * n) + 1j * rng.normal(size=2 * n)
        # Mirror the lower half onto the upper one.
        for k in range(n):
            p[degree - k] = np.conj(p[k])
        rest = sum(weights[k] * p[2 * k] * np.conj(p[2 * k + 1])
                   for k in range(1, n - 1))
        solve_first = rng.integers(2) == 0
        pivot = p[1] if solve_first else p[0]
        if abs(pivot) < 0.1:
            _logger.debug("Redrawing a real cone sample with small pivot "
                          "'%s'", pivot)
            continue
        if solve_first:
            p[0] = -rest / (2 * weights[0] * np.conj(p[1]))
        else:
            p[1] = np.conj(-rest / (2 * weights[0] * p[0]))
        p[degree] = np.conj(p[0])
        p[degree - 1] = np.conj(p[1])
        return p


def sample_C_lambda(lam, n, field, count, seed):  # pylint: disable=invalid-name
    """
    Draw unit forms of the null cone C^lambda.

    Complex samples solve the single constraint for p_1. Real samples are
    built from mirrored coefficients; for n = 1 the real cone is {0} and no
    samples are returned.
    """
    if lam.n != n:
        raise hitchindod.exc.QuadraticFormException(
            f"Parameter vector of length '{lam.n}' does not match half-rank "
            f"'{n}'")
    if field not in hitchindod.stiefel.FIELDS:
        raise hitchindod.exc.QuadraticFormException(
            f"Unknown field '{field}'")
    if field == hitchindod.stiefel.REAL and n == 1:
        return []
    rng = np.random.default_rng(seed)
    samples = []
    for _ in range(count):
        if field == hitchindod.stiefel.REAL:
            p = _sample_real(lam, n, rng)
        else:
            p = _sample_complex(lam, n, rng)
        poly = hitchindod.hpoly.HPoly(n, p / np.linalg.norm(p),
                                      hitchindod.hpoly.ZW)
        samples.append(poly)
    return samples


@dataclasses.dataclass(frozen=True)
class FlowReport:
    """Monotonicity of f(t) = Re q(g_t P, g_t P) along the geodesic flow."""
    times: tuple
    values: tuple
    slopes: tuple
    max_slope_error: float
    increasing: bool
    signs_ok: bool

    @property
    def holds(self):
        """Check all monotonicity properties."""
        return (self.increasing and self.signs_ok and min(self.slopes) > 0 and
                self.max_slope_error <= 1e-6)


def flow_monotone(lam, poly, times, step=1e-5):
    """
    Check that f(t) = Re q(g_t P, g_t P) is increasing through zero.

    The slope f'(t) = 2 Re q(g_t P, g0.g_t P) is compared against central
    finite differences of f, relative to max(1, |f'(t)|).
    """
    if cone_residual(lam, poly) > 1e-8:
        raise hitchindod.exc.ConeException(
            f"Form is not in the null cone, residual "
            f"'{cone_residual(lam, poly):.3g}'")

    def flow_value(t):
        moved = hitchindod.slrep.act(hitchindod.slrep.geodesic_flow(t), poly)
        return q_lambda(lam, moved, moved).real

    values = []
    slopes = []
    max_error = 0.0
    for t in times:
        moved = hitchindod.slrep.act(hitchindod.slrep.geodesic_flow(t), poly)
        value = q_lambda(lam, moved, moved).real
        slope = 2 * transversality_value(lam, moved)
        difference = (flow_value(t + step) - flow_value(t - step)) / (2 * step)
        max_error = max(max_error,
                        abs(difference - slope) / max(1.0, abs(slope)))
        values.append(value)
        slopes.append(slope)

    increasing = all(later > earlier
                     for earlier, later in zip(values, values[1:]))
    # Values within rounding of zero do not decide a sign.
    tiny = 1e-12 * max(1.0, max(abs(value) for value in values))
    signs_ok = all((t < 0 and value < tiny) or (t > 0 and value > -tiny) or
                   (t == 0 and abs(value) <= 1e-8)
                   for t, value in zip(times, values))
    return FlowReport(tuple(times), tuple(values), tuple(slopes), max_error,
                      increasing, signs_ok)


@dataclasses.dataclass(frozen=True)
class NonIntersectReport:
    """Outcome of sampling C^lambda against K."""
    n: int
    field: str
    samples: int
    members: int
    ambiguous: int
    min_margin: int
    min_gap: float
    witness: object

    @property
    def holds(self):
        """Check that no sample is in K and none is ambiguous."""
        return self.members == 0 and self.ambiguous == 0


def nonintersect_check(lam,
                       n,
                       field,
                       samples,
                       seed,
                       allowed_ambiguous=0.0,
                       tol_cluster=hitchindod.hpoly.DEFAULT_TOL_CLUSTER,
                       tol_real=hitchindod.hpoly.DEFAULT_TOL_REAL):
    """
    Check that sampled forms of C^lambda lie outside K.

    The report holds the number of members and ambiguous decisions, the
    smallest n - max_real_mult and the smallest root cluster gap. The witness
    is the first member found, or else the sample with the smallest gap. An
    ambiguous fraction above allowed_ambiguous raises AmbiguityException.
    """
    polys = sample_C_lambda(lam, n, field, samples, seed)
    members = 0
    ambiguous = 0
    min_margin = n
    min_gap = math.inf
    witness = None
    ambiguous_witness = None
    for poly in polys:
        membership = hitchindod.dod.in_K(poly, tol_cluster, tol_real)
        if membership.ambiguous:
            ambiguous += 1
            ambiguous_witness = ambiguous_witness or poly
        if membership.member:
            if members == 0:
                witness = poly
            members += 1
        min_margin = min(min_margin, n - membership.mult)
        gaps = [cluster.gap for cluster in membership.report.clusters]
        gap = min(gaps, default=math.inf)
        if gap < min_gap:
            min_gap = gap
            if members == 0:
                witness = poly
    if polys and ambiguous / len(polys) > allowed_ambiguous:
        raise hitchindod.exc.AmbiguityException(
            f"Ambiguous root decisions in '{ambiguous}' of '{len(polys)}' "
            f"samples", ambiguous_witness)
    _logger.debug("Non-intersection for n='%d', field '%s': '%d' members",
                  n, field, members)
    return NonIntersectReport(n, field, len(polys), members, ambiguous,
                              min_margin, min_gap, witness)


@dataclasses.dataclass(frozen=True)
class PhiImage:
    """Image of (g, P) under the fibration map."""
    point: hitchindod.stiefel.ProjClass
    witness: float


def phi_map(lam, g, poly):
    """
    Map (g, P) with P in C^lambda to the projective class of g.P.

    The witness |q_lambda(P, g0.P)| is nonzero exactly when g0.P is not
    tangent to the null cone at P.
    """
    if cone_residual(lam, poly) > 1e-8:
        raise hitchindod.exc.ConeException(
            f"Form is not in the null cone, residual "
            f"'{cone_residual(lam, poly):.3g}'")
    image = hitchindod.slrep.act(g, poly)
    witness = abs(q_lambda(lam, poly, hitchindod.slrep.lie_act_g0(poly)))
    return PhiImage(hitchindod.stiefel.ProjClass(image.coeffs), witness)
