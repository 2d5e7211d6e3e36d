# Copyright (C) 2019-2020 Petr Pavlu <setup@dagobah.cz>
# SPDX-License-Identifier: MIT

"""
Limit set K and domain Omega of the Fuchsian model.

For [a:b] in RP^1 the curve v assigns the n-dimensional subspace of forms
divisible by (aX + bY)^n. A form lies in K when it has a real projective root
of multiplicity at least n, and in Omega otherwise.
"""

import dataclasses
import logging
import math

import numpy as np
import scipy.linalg

import hitchindod.exc
import hitchindod.hpoly
import hitchindod.slrep

_logger = logging.getLogger(__name__)


class RP1Point:
    """Point [a:b] of the real projective line."""
    def __init__(self, a, b):
        """Initialize a point, normalizing its representative."""
        pair = np.array([a, b], dtype=float)
        norm = np.linalg.norm(pair)
        if norm == 0 or not np.all(np.isfinite(pair)):
            raise hitchindod.exc.PolynomialException(
                f"Pair '[{a}:{b}]' is not a point of RP^1")
        pair = pair / norm
        first = pair[0] if pair[0] != 0 else pair[1]
        if first < 0:
            pair = -pair
        self._pair = pair

    @classmethod
    def from_angle(cls, angle):
        """Create the point [cos(angle):sin(angle)]."""
        return cls(math.cos(angle), math.sin(angle))

    @property
    def a(self):
        """Obtain the first coordinate."""
        return float(self._pair[0])

    @property
    def b(self):
        """Obtain the second coordinate."""
        return float(self._pair[1])

    @property
    def pair(self):
        """Obtain a copy of the normalized pair."""
        return self._pair.copy()

    def distance(self, other):
        """Obtain the chordal distance to another point."""
        return abs(self.a * other.b - self.b * other.a)

    def __repr__(self):
        return f"RP1Point({self.a}, {self.b})"


def rp1_act(g, point):
    """
    Apply g to a point of RP^1, compatibly with the curve v.

    The point [a:b] stands for the linear form aX + bY. The substitution action
    maps this form to the one with coefficients (g^-1)^T (a, b), so that
    v(g.t) = g.v(t).
    """
    g = hitchindod.slrep.sl2(g)
    pair = np.linalg.inv(g).T @ point.pair
    return RP1Point(pair[0], pair[1])


@dataclasses.dataclass(frozen=True)
class SubspaceBasis:
    """Basis of an n-dimensional subspace of forms of degree 2n-1."""
    polys: tuple

    def __post_init__(self):
        singular = np.linalg.svd(self.normalized_matrix(), compute_uv=False)
        if singular.size == 0 or singular[-1] <= 1e-8:
            raise hitchindod.exc.PolynomialException(
                "Polynomials do not form a basis")

    def matrix(self):
        """Obtain the XY coefficient matrix with one column per form."""
        return np.column_stack([
            hitchindod.hpoly.to_basis(poly, hitchindod.hpoly.XY).coeffs
            for poly in self.polys
        ])

    def normalized_matrix(self):
        """Obtain the coefficient matrix with unit columns."""
        matrix = self.matrix()
        return matrix / np.linalg.norm(matrix, axis=0)[None, :]

    def angle_to(self, other):
        """Obtain the largest principal angle to another subspace."""
        return float(
            np.max(
                scipy.linalg.subspace_angles(self.matrix(), other.matrix())))


def v_curve(point, n):
    """Obtain the basis (aX + bY)^n X^j Y^(n-1-j), j = 0..n-1, of v([a:b])."""
    power = hitchindod.hpoly.linear_form_power(point.a, point.b, n)
    polys = []
    for j in range(n):
        cofactor = hitchindod.hpoly.BinaryForm(
            np.eye(n, dtype=complex)[n - 1 - j])
        polys.append(
            hitchindod.hpoly.HPoly.from_form(
                hitchindod.hpoly.poly_mul(power, cofactor)))
    return SubspaceBasis(tuple(polys))


def act_subspace(g, basis):
    """Apply g to every form of a subspace basis."""
    return SubspaceBasis(
        tuple(hitchindod.slrep.act(g, poly) for poly in basis.polys))


def v_curve_equivariance(g, point, n):
    """Obtain the principal-angle defect of v(g.t) = g.v(t)."""
    return v_curve(rp1_act(g, point), n).angle_to(
        act_subspace(g, v_curve(point, n)))


@dataclasses.dataclass(frozen=True)
class Membership:
    """Outcome of a K or Omega membership test."""
    member: bool
    mult: int
    ambiguous: bool
    report: hitchindod.hpoly.RootReport


def _half_rank(poly):
    """Obtain n for a form of degree 2n-1."""
    if poly.degree % 2 != 1:
        raise hitchindod.exc.PolynomialException(
            f"Form of degree '{poly.degree}' is not of odd degree")
    return (poly.degree + 1) // 2


def in_K(poly,
         tol_cluster=hitchindod.hpoly.DEFAULT_TOL_CLUSTER,
         tol_real=hitchindod.hpoly.DEFAULT_TOL_REAL):
    """
    Check whether a form has a real root of multiplicity at least n.

    The result is ambiguous when some root decision within tolerance of
    flipping could change membership.
    """
    n = _half_rank(poly)
    report = hitchindod.hpoly.real_root_multiplicity(poly, tol_cluster,
                                                     tol_real)
    low, high = report.real_mult_bounds()
    ambiguous = (low >= n) != (high >= n)
    if ambiguous:
        _logger.debug("Ambiguous K membership, multiplicity bounds '%d..%d'",
                      low, high)
    return Membership(member=report.max_real_mult >= n,
                      mult=report.max_real_mult,
                      ambiguous=ambiguous,
                      report=report)


def in_omega(poly,
             tol_cluster=hitchindod.hpoly.DEFAULT_TOL_CLUSTER,
             tol_real=hitchindod.hpoly.DEFAULT_TOL_REAL):
    """Check whether a form lies in Omega, the complement of K."""
    membership = in_K(poly, tol_cluster, tol_real)
    return dataclasses.replace(membership, member=not membership.member)


def sample_K(n, count, seed, field='C'):
    """
    Draw forms (aX + bY)^n Q with random real [a:b].

    The cofactor Q of degree n-1 has Gaussian coefficients, complex for
    field 'C' and real for field 'R'.
    """
    rng = np.random.default_rng(seed)
    samples = []
    for _ in range(count):
        point = RP1Point.from_angle(rng.uniform(0, math.pi))
        coeffs = rng.normal(size=n)
        if field == 'C':
            coeffs = coeffs + 1j * rng.normal(size=n)
        cofactor = hitchindod.hpoly.BinaryForm(coeffs)
        power = hitchindod.hpoly.linear_form_power(point.a, point.b, n)
        samples.append(
            hitchindod.hpoly.HPoly.from_form(
                hitchindod.hpoly.poly_mul(power, cofactor)))
    return samples
