# Copyright (C) 2019-2020 Petr Pavlu <setup@dagobah.cz>
# SPDX-License-Identifier: MIT

"""
Homogeneous polynomials in two variables.

A binary form of degree d is stored as a vector of d+1 complex coefficients
together with a basis tag:

  XY: index k holds the coefficient of X^(d-k) Y^k,
  ZW: index k holds the coefficient of Z^k W^(d-k),

where Z = (X - iY)/2 and W = (X + iY)/2, or equivalently X = Z + W and
Y = i(Z - W). The odd-degree forms of degree 2n-1 used throughout the package
are represented by HPoly, which additionally carries the half-rank n.

Real projective roots are located by real_root_multiplicity() which rotates
RP^1 to a chart where no root lies near infinity, computes the companion-matrix
roots of the dehomogenization and clusters them into multiple roots. All
decisions that fall within tolerance of flipping are reported as ambiguous.
"""

import dataclasses
import functools
import logging
import math

import numpy as np

import hitchindod.exc
import hitchindod.utils

_logger = logging.getLogger(__name__)

XY = 'XY'
ZW = 'ZW'
BASES = (XY, ZW)

DEFAULT_TOL_CLUSTER = 1e-6
DEFAULT_TOL_REAL = 1e-6

# Relative backward error attributed to the companion-matrix eigenvalues.
_ROOT_BACKWARD_ERROR = 1e-14

# A decision is ambiguous when its margin is within this factor of the
# tolerance.
_AMBIGUITY_FACTOR = 10

# Cluster centers closer than this chordal distance to [1:0] are at infinity.
_INFINITY_TOL = 1e-12

# Images of the old variables in the new ones. The old monomial with index k
# is A^(d-k) B^k and the new one with index j is S^(d-j) T^j.
_XY_TO_ZW = ((1, 1), (-1j, 1j))  # X = W + Z, Y = -iW + iZ
_ZW_TO_XY = ((0.5, 0.5j), (0.5, -0.5j))  # W = (X + iY)/2, Z = (X - iY)/2


class BinaryForm:
    """Homogeneous polynomial of any degree in two variables."""
    def __init__(self, coeffs, basis=XY):
        """Initialize a form from its coefficient vector."""
        coeffs = np.array(coeffs, dtype=complex)
        if coeffs.ndim != 1 or coeffs.size == 0:
            raise hitchindod.exc.PolynomialException(
                f"Invalid coefficient vector of shape '{coeffs.shape}'")
        if basis not in BASES:
            raise hitchindod.exc.PolynomialException(
                f"Unknown polynomial basis '{basis}'")
        coeffs.setflags(write=False)
        self._coeffs = coeffs
        self._basis = basis

    @property
    def coeffs(self):
        """Obtain the read-only coefficient vector."""
        return self._coeffs

    @property
    def basis(self):
        """Obtain the basis tag of the coefficient vector."""
        return self._basis

    @property
    def degree(self):
        """Obtain the degree of the form."""
        return self._coeffs.size - 1

    def is_zero(self):
        """Check whether all coefficients vanish."""
        return not np.any(self._coeffs)

    def with_coeffs(self, coeffs, basis):
        """Create a form of the same kind with different coefficients."""
        return BinaryForm(coeffs, basis)

    def _check_compatible(self, other):
        """Check that another form can be added to this one."""
        if not isinstance(other, BinaryForm):
            raise hitchindod.exc.PolynomialException(
                f"Cannot combine a polynomial with '{type(other).__name__}'")
        if other.basis != self._basis:
            raise hitchindod.exc.PolynomialException(
                f"Basis mismatch: '{self._basis}' and '{other.basis}'")
        if other.degree != self.degree:
            raise hitchindod.exc.PolynomialException(
                f"Degree mismatch: '{self.degree}' and '{other.degree}'")

    def __add__(self, other):
        self._check_compatible(other)
        return self.with_coeffs(self._coeffs + other.coeffs, self._basis)

    def __sub__(self, other):
        self._check_compatible(other)
        return self.with_coeffs(self._coeffs - other.coeffs, self._basis)

    def __neg__(self):
        return self.with_coeffs(-self._coeffs, self._basis)

    def __mul__(self, scalar):
        if isinstance(scalar, BinaryForm):
            return NotImplemented
        return self.with_coeffs(complex(scalar) * self._coeffs, self._basis)

    __rmul__ = __mul__

    def __repr__(self):
        return f"{type(self).__name__}({self._coeffs.tolist()}, {self._basis})"


class HPoly(BinaryForm):
    """Homogeneous polynomial of odd degree 2n-1."""
    def __init__(self, n, coeffs, basis=XY):
        """Initialize a polynomial with half-rank n."""
        super().__init__(coeffs, basis)
        if n < 1 or self.degree != 2 * n - 1:
            raise hitchindod.exc.PolynomialException(
                f"Polynomial with half-rank '{n}' needs {2 * n} coefficients, "
                f"got '{self._coeffs.size}'")
        self._n = n

    @classmethod
    def from_form(cls, form):
        """Create a polynomial from a binary form of odd degree."""
        if form.degree % 2 != 1:
            raise hitchindod.exc.PolynomialException(
                f"Form of degree '{form.degree}' is not of odd degree")
        return cls((form.degree + 1) // 2, form.coeffs, form.basis)

    @classmethod
    def monomial(cls, n, k, basis=XY):
        """Create the k-th basis monomial for the given basis."""
        coeffs = np.zeros(2 * n, dtype=complex)
        coeffs[k] = 1
        return cls(n, coeffs, basis)

    @property
    def n(self):
        """Obtain the half-rank of the polynomial."""
        return self._n

    def with_coeffs(self, coeffs, basis):
        return HPoly(self._n, coeffs, basis)


def _linear_power(pair, exponent):
    """Expand (pair[0] + pair[1]*u)^exponent in ascending powers of u."""
    result = np.ones(1, dtype=complex)
    for _ in range(exponent):
        result = np.convolve(result, pair)
    return result


def substitution_matrix(images, degree):
    """
    Obtain the matrix of a linear substitution of variables.

    The old variables A, B are replaced by A = alpha*S + beta*T and
    B = gamma*S + delta*T where images = ((alpha, beta), (gamma, delta)). The
    returned matrix maps coefficients of A^(d-k) B^k to coefficients of
    S^(d-j) T^j.
    """
    (alpha, beta), (gamma, delta) = images
    first = np.array([alpha, beta], dtype=complex)
    second = np.array([gamma, delta], dtype=complex)
    matrix = np.empty((degree + 1, degree + 1), dtype=complex)
    for k in range(degree + 1):
        matrix[:, k] = np.convolve(_linear_power(first, degree - k),
                                   _linear_power(second, k))
    return matrix


@functools.lru_cache(maxsize=None)
def _basis_change_matrix(source, target, degree):
    """Obtain a cached read-only basis change matrix."""
    images = _XY_TO_ZW if (source, target) == (XY, ZW) else _ZW_TO_XY
    matrix = substitution_matrix(images, degree)
    matrix.setflags(write=False)
    return matrix


def to_basis(poly, target):
    """Express a polynomial in the target basis."""
    if target not in BASES:
        raise hitchindod.exc.PolynomialException(
            f"Unknown polynomial basis '{target}'")
    if poly.basis == target:
        return poly
    matrix = _basis_change_matrix(poly.basis, target, poly.degree)
    return poly.with_coeffs(matrix @ poly.coeffs, target)


def evaluate(poly, x, y):
    """
    Evaluate a polynomial at a point.

    The pair (x, y) gives values of (X, Y) for a polynomial in the XY basis and
    values of (Z, W) for one in the ZW basis.
    """
    x = complex(x)
    y = complex(y)
    degree = poly.degree
    total = 0j
    for k, coeff in enumerate(poly.coeffs):
        if poly.basis == XY:
            total += coeff * x**(degree - k) * y**k
        else:
            total += coeff * x**k * y**(degree - k)
    return total


def poly_mul(first, second):
    """Multiply two forms given in the same basis."""
    if first.basis != second.basis:
        raise hitchindod.exc.PolynomialException(
            f"Basis mismatch: '{first.basis}' and '{second.basis}'")
    return BinaryForm(np.convolve(first.coeffs, second.coeffs), first.basis)


def linear_form_power(a, b, exponent):
    """Obtain the form (aX + bY)^exponent in the XY basis."""
    return BinaryForm(_linear_power(np.array([a, b], dtype=complex), exponent),
                      XY)


def norm(poly):
    """Obtain the Euclidean norm of the coefficient vector."""
    return float(np.linalg.norm(poly.coeffs))


def normalized(poly):
    """Rescale a nonzero polynomial to unit coefficient norm."""
    scale = norm(poly)
    if scale == 0:
        raise hitchindod.exc.PolynomialException(
            "Cannot normalize the zero polynomial")
    return poly * (1 / scale)


def projective_distance(first, second):
    """Obtain the Fubini-Study distance between two projective classes."""
    if first.is_zero() or second.is_zero():
        raise hitchindod.exc.PolynomialException(
            "The zero polynomial has no projective class")
    second = to_basis(second, first.basis)
    return hitchindod.utils.fubini_study(first.coeffs, second.coeffs)


def from_roots(roots, basis=XY):
    """
    Rebuild a form from its roots.

    Each root is a pair (center, multiplicity) where a finite center c stands
    for the linear factor X - cY and math.inf for the factor Y. The result is
    the product of the factors, expressed in the requested basis.
    """
    coeffs = np.ones(1, dtype=complex)
    for center, multiplicity in roots:
        if center == math.inf:
            factor = np.array([0, 1], dtype=complex)
        else:
            factor = np.array([1, -complex(center)], dtype=complex)
        for _ in range(multiplicity):
            coeffs = np.convolve(coeffs, factor)
    return to_basis(BinaryForm(coeffs, XY), basis)


@dataclasses.dataclass(frozen=True)
class RootCluster:
    """Group of numerical roots identified as one multiple root."""
    center: complex
    size: int
    is_real: bool
    gap: float
    real_distance: float
    real_ambiguous: bool

    @property
    def is_infinite(self):
        """Check whether the cluster sits at the point [1:0]."""
        return self.center == math.inf


@dataclasses.dataclass(frozen=True)
class RootReport:
    """Multiplicity report of the projective roots of a form."""
    clusters: tuple
    max_real_mult: int
    ambiguous: bool
    ambiguous_pairs: tuple = ()

    @property
    def degree(self):
        """Obtain the total multiplicity, which equals the form's degree."""
        return sum(cluster.size for cluster in self.clusters)

    def real_mult_bounds(self):
        """
        Bound the largest real multiplicity over all ambiguous decisions.

        The lower bound only counts clusters that are real with a safe margin.
        The upper bound merges every ambiguously separated pair of clusters and
        counts a merged group as real when any of its clusters could be real.
        """
        low = max((cluster.size for cluster in self.clusters
                   if cluster.is_real and not cluster.real_ambiguous),
                  default=0)

        parent = list(range(len(self.clusters)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i, j in self.ambiguous_pairs:
            parent[find(i)] = find(j)

        sizes = {}
        possibly_real = set()
        for i, cluster in enumerate(self.clusters):
            root = find(i)
            sizes[root] = sizes.get(root, 0) + cluster.size
            if cluster.is_real or cluster.real_ambiguous:
                possibly_real.add(root)
        high = max((sizes[root] for root in possibly_real), default=0)
        return low, max(high, self.max_real_mult)


def _chart_angle(coeffs):
    """
    Choose a rotation of RP^1 that keeps roots away from the chart's infinity.

    The angle maximizing |P(cos a, sin a)| over a grid of d+1 angles is
    returned. A form of degree d has at most d roots on RP^1, so at least one
    grid point stays away from all of them.
    """
    degree = coeffs.size - 1
    best_angle = 0.0
    best_value = -1.0
    powers = np.arange(degree + 1)
    for j in range(degree + 1):
        angle = math.pi * j / (degree + 1)
        value = abs(np.sum(coeffs * math.cos(angle)**(degree - powers) *
                           math.sin(angle)**powers))
        if value > best_value:
            best_angle = angle
            best_value = value
    return best_angle


def _abs_eval(coeffs, modulus):
    """Evaluate sum_k |c_k| modulus^(d-k) for a coefficient vector c."""
    degree = coeffs.size - 1
    return float(
        np.sum(np.abs(coeffs) * modulus**(degree - np.arange(degree + 1))))


class _RootClusterer:
    """Clustering of the chart roots of a dehomogenized form."""
    def __init__(self, chart_coeffs, roots, tol_cluster):
        self._coeffs = chart_coeffs
        self._roots = roots
        self._tol_cluster = tol_cluster
        self._lead = abs(chart_coeffs[0])

    @staticmethod
    def pair(value):
        """Map a chart value to a unit pair."""
        return hitchindod.utils.unit_pair(value, 1)

    def center(self, members):
        """Obtain the chart center of a group of roots."""
        return complex(np.mean(self._roots[members]))

    def radius(self, members):
        """
        Obtain the backward-error radius of a group of roots.

        An m-fold root c of p spreads under a coefficient perturbation of size
        delta to a circle of radius (delta/|q(c)|)^(1/m), q being the cofactor
        p(x)/(x - c)^m.
        """
        center = self.center(members)
        others = np.delete(self._roots, members)
        cofactor = self._lead * float(np.prod(np.abs(center - others)))
        delta = _ROOT_BACKWARD_ERROR * _abs_eval(self._coeffs,
                                                 max(1.0, abs(center)))
        if cofactor == 0:
            return math.inf
        return (delta / cofactor)**(1 / len(members))

    def diameter(self, members):
        """Obtain the largest chart distance within a group of roots."""
        values = self._roots[members]
        return float(np.max(np.abs(values[:, None] - values[None, :])))

    def cluster(self):
        """Group the roots, returning lists of root indices."""
        count = self._roots.size

        # Single linkage at the chordal tolerance.
        parent = list(range(count))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        pairs = [self.pair(value) for value in self._roots]
        for i in range(count):
            for j in range(i + 1, count):
                distance = hitchindod.utils.chordal_distance(
                    pairs[i], pairs[j])
                if distance < self._tol_cluster:
                    parent[find(i)] = find(j)
        groups = {}
        for i in range(count):
            groups.setdefault(find(i), []).append(i)
        clusters = list(groups.values())

        # Merge groups whose spread is explained by a multiple root.
        merged = True
        while merged and len(clusters) > 1:
            merged = False
            candidates = []
            for i in range(len(clusters)):
                for j in range(i + 1, len(clusters)):
                    distance = abs(
                        self.center(clusters[i]) - self.center(clusters[j]))
                    candidates.append((distance, i, j))
            for _, i, j in sorted(candidates):
                union = clusters[i] + clusters[j]
                if self.diameter(union) <= 2 * self.radius(union):
                    clusters = [
                        members for k, members in enumerate(clusters)
                        if k not in (i, j)
                    ] + [union]
                    merged = True
                    break
        return clusters


def real_root_multiplicity(poly,
                           tol_cluster=DEFAULT_TOL_CLUSTER,
                           tol_real=DEFAULT_TOL_REAL):
    """
    Locate the projective roots of a form and their multiplicities.

    Roots are clustered when their chordal distance is below tol_cluster or
    when their spread is explained by the numerical splitting of a multiple
    root. A cluster is real when its chordal distance to RP^1 is below
    tol_real. Cluster centers are returned as the affine coordinate X/Y, with
    math.inf for the point [1:0].
    """
    form = to_basis(poly, XY)
    coeffs = np.asarray(form.coeffs)
    scale = np.linalg.norm(coeffs)
    if scale == 0:
        raise hitchindod.exc.PolynomialException(
            "Cannot locate roots of the zero polynomial")
    degree = form.degree
    if degree == 0:
        return RootReport((), 0, False)
    coeffs = coeffs / scale

    # Rotate RP^1 so that [1:0] of the chart is far from all roots.
    angle = _chart_angle(coeffs)
    cos_a, sin_a = math.cos(angle), math.sin(angle)
    chart = substitution_matrix(((cos_a, -sin_a), (sin_a, cos_a)),
                                degree) @ coeffs
    if np.max(np.abs(chart.imag)) <= 1e-14 * np.max(np.abs(chart)):
        chart = chart.real
    roots = np.asarray(np.roots(chart), dtype=complex)
    if roots.size != degree:
        raise hitchindod.exc.PolynomialException(
            f"Root finder returned '{roots.size}' roots for degree "
            f"'{degree}'")
    _logger.debug("Chart angle '%.6f' for a form of degree '%d'", angle,
                  degree)

    clusterer = _RootClusterer(chart, roots, tol_cluster)
    groups = clusterer.cluster()

    centers = []
    for members in groups:
        center = clusterer.center(members)
        # Map the chart point [center:1] back to the original coordinates.
        point = hitchindod.utils.unit_pair(cos_a * center - sin_a,
                                           sin_a * center + cos_a)
        centers.append((center, point))

    ambiguous = False
    ambiguous_pairs = []
    for i in range(len(groups)):
        for j in range(i + 1, len(groups)):
            chordal = hitchindod.utils.chordal_distance(
                centers[i][1], centers[j][1])
            union_radius = clusterer.radius(groups[i] + groups[j])
            chart_distance = abs(centers[i][0] - centers[j][0])
            if (chordal < _AMBIGUITY_FACTOR * tol_cluster or
                    chart_distance < 2 * _AMBIGUITY_FACTOR * union_radius):
                ambiguous_pairs.append((i, j))

    clusters = []
    for i, members in enumerate(groups):
        point = centers[i][1]
        gap = min((hitchindod.utils.chordal_distance(point, other[1])
                   for j, other in enumerate(centers) if j != i),
                  default=math.inf)
        real_distance = hitchindod.utils.distance_to_real_line(point)
        real_ambiguous = (tol_real / _AMBIGUITY_FACTOR < real_distance <
                          _AMBIGUITY_FACTOR * tol_real)
        if abs(point[1]) <= _INFINITY_TOL:
            center = math.inf
        else:
            center = complex(point[0] / point[1])
        clusters.append(
            RootCluster(center=center,
                        size=len(members),
                        is_real=real_distance < tol_real,
                        gap=gap,
                        real_distance=real_distance,
                        real_ambiguous=real_ambiguous))
        ambiguous = ambiguous or real_ambiguous
    ambiguous = ambiguous or len(ambiguous_pairs) > 0

    max_real_mult = max(
        (cluster.size for cluster in clusters if cluster.is_real), default=0)
    return RootReport(clusters=tuple(clusters),
                      max_real_mult=max_real_mult,
                      ambiguous=ambiguous,
                      ambiguous_pairs=tuple(ambiguous_pairs))


def reconstruction_error(form, report):
    """
    Obtain the relative coefficient error of a form rebuilt from its roots.

    The product of the reported root factors is compared with the form made
    monic in the chart x = X/Y. Roots at infinity lower the chart degree, so
    the leading coefficient is the one of Y^m, m being their multiplicity.
    """
    coeffs = to_basis(form, XY).coeffs
    rebuilt = from_roots([(cluster.center, cluster.size)
                          for cluster in report.clusters]).coeffs
    if rebuilt.size != coeffs.size:
        raise hitchindod.exc.PolynomialException(
            f"Reported roots of total multiplicity '{rebuilt.size - 1}' do "
            f"not match degree '{coeffs.size - 1}'")
    at_infinity = sum(cluster.size for cluster in report.clusters
                      if cluster.is_infinite)
    lead = coeffs[at_infinity]
    if lead == 0:
        return math.inf
    return float(
        np.max(np.abs(coeffs / lead - rebuilt)) / np.max(np.abs(rebuilt)))
