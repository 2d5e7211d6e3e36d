# Copyright (C) 2019-2020 Petr Pavlu <setup@dagobah.cz>
# SPDX-License-Identifier: MIT

"""
Developing map of the Fuchsian structure.

The rank 2 bundle has the parallel frame

  e1(z) = (h zbar/lambda, z lambda),  e2(z) = (h/lambda, lambda),

with lambda = e^(i pi/4), written in the holomorphic frame. Parallel transport
in rank 2n is the symmetric power of the rank 2 transport. The developing map
sends a point (z, t), t the unitary coordinates of a vector of the fiber, to
the form of degree 2n-1 in the variables X = e1, Y = e2 that the transported
vector defines at the base point i.

For n = 2 the images of the two real components are described by the roots
of the developed polynomial, and the parameters (theta', r, phi) of a point
can be recovered from them.
"""

import dataclasses
import functools
import logging
import math

import numpy as np

import hitchindod.dod
import hitchindod.exc
import hitchindod.higgsflat
import hitchindod.hpoly
import hitchindod.slrep
import hitchindod.stiefel
import hitchindod.utils

_logger = logging.getLogger(__name__)

Z0 = 1j
LAMBDA_PHASE = hitchindod.higgsflat.LAMBDA_PHASE


def _point(z):
    """Convert to a point of the upper half-plane."""
    return hitchindod.higgsflat.UHPoint.from_complex(z)


def mobius(gamma, z):
    """Apply a matrix of SL(2,R) to z by (az + b)/(cz + d)."""
    gamma = hitchindod.slrep.sl2(gamma)
    z = _point(z).z
    (a, b), (c, d) = gamma
    return _point((a * z + b) / (c * z + d))


def frame_matrix(z):
    """Obtain the matrix with columns e1(z) and e2(z)."""
    z = _point(z)
    h = hitchindod.higgsflat.metric_h(z.y)
    return np.array([[h * np.conj(z.z) / LAMBDA_PHASE, h / LAMBDA_PHASE],
                     [z.z * LAMBDA_PHASE, LAMBDA_PHASE]])


@dataclasses.dataclass(frozen=True)
class Frame2:
    """Parallel frame of the rank 2 bundle at one point."""
    e1: np.ndarray
    e2: np.ndarray
    at: hitchindod.higgsflat.UHPoint

    def matrix(self):
        """Obtain the matrix with columns e1 and e2."""
        return np.column_stack([self.e1, self.e2])


def frames(z):
    """Obtain the parallel frame at z."""
    z = _point(z)
    matrix = frame_matrix(z)
    if abs(np.linalg.det(matrix)) <= 1e-10:
        raise hitchindod.exc.ConnectionException(
            f"Degenerate frame at '{z.z}'")
    return Frame2(matrix[:, 0], matrix[:, 1], z)


def m_matrix(z):
    """
    Obtain the coordinates of the unitary frame in the parallel frame.

    The unitary frame is (h^(1/2), 0), (0, h^(-1/2)) in the holomorphic frame,
    so the matrix is F(z)^-1 diag(h^(1/2), h^(-1/2)).
    """
    z = _point(z)
    h = hitchindod.higgsflat.metric_h(z.y)
    return np.linalg.solve(frame_matrix(z),
                           np.diag([math.sqrt(h), 1 / math.sqrt(h)]))


def transport2(z0, z):
    """Obtain F(z0) F(z)^-1, the rank 2 transport from z to z0."""
    return frame_matrix(z0) @ np.linalg.inv(frame_matrix(z))


@functools.lru_cache(maxsize=4096)
def _transport_sym_cached(z0, z, n):
    """Cached read-only transport in the normalized basis."""
    matrix = hitchindod.slrep.symmetric_power(transport2(z0, z).T,
                                              2 * n - 1,
                                              normalized=True)
    matrix.setflags(write=False)
    return matrix


def transport_sym(z0, z, n):
    """
    Obtain the rank 2n transport from z to z0.

    The matrix acts on the holomorphic frame dz^((2n+1-2k)/2), which matches
    the normalized monomials C(2n-1, k-1)^(1/2) X^(2n-k) Y^(k-1) of the rank 2
    frame.
    """
    return _transport_sym_cached(_point(z0).z, _point(z).z, n).copy()


def _check_cone(t, n, field):
    """Check that unitary coordinates lie in the cone C'."""
    t = np.asarray(t, dtype=complex)
    if t.shape != (2 * n,):
        raise hitchindod.exc.ConeException(
            f"Vector of shape '{t.shape}' does not match half-rank '{n}'")
    check = hitchindod.stiefel.in_cone_prime(t, field, tol=1e-9)
    if not check.member:
        raise hitchindod.exc.ConeException(
            f"Point is not in the cone, residuals '{check.residuals}'")
    return t


def developing(z, t, n, field=hitchindod.stiefel.COMPLEX, check=True):
    """
    Obtain the developed form of the point (z, t).

    The closed form is

      -(2 sqrt(2) y)^((1-2n)/2) sum_k C(2n-1, k-1)^(1/2) t_k
          L1^(2n-k) L2^(k-1),

    where L1 = (X - zY)/lambda and L2 = lambda (X - zbar Y). The result is in
    the XY basis with X = e1 and Y = e2.
    """
    z = _point(z)
    t = np.asarray(t, dtype=complex)
    if check:
        t = _check_cone(t, n, field)
    degree = 2 * n - 1
    first = np.array([1, -z.z]) / LAMBDA_PHASE
    second = np.array([1, -np.conj(z.z)]) * LAMBDA_PHASE
    coeffs = np.zeros(2 * n, dtype=complex)
    for k in range(1, 2 * n + 1):
        if t[k - 1] == 0:
            continue
        term = hitchindod.hpoly.poly_mul(
            hitchindod.hpoly.linear_form_power(first[0], first[1], 2 * n - k),
            hitchindod.hpoly.linear_form_power(second[0], second[1], k - 1))
        weight = math.sqrt(hitchindod.utils.binomial(degree, k - 1))
        coeffs += weight * t[k - 1] * term.coeffs
    factor = -(2 * math.sqrt(2) * z.y)**((1 - 2 * n) / 2)
    return hitchindod.hpoly.HPoly(n, factor * coeffs)


def developing_via_transport(z, t, n):
    """
    Obtain the developed form by transporting the vector to the base point.

    The vector h^a t is transported from z to i, rewritten in monomials of the
    holomorphic rank 2 frame and then in monomials of the parallel frame.
    """
    data = hitchindod.higgsflat.HiggsData(n)
    degree = 2 * n - 1
    s = hitchindod.higgsflat.unitary_to_holomorphic(data, z, t)
    moved = transport_sym(Z0, z, n) @ s
    weights = np.sqrt([
        float(hitchindod.utils.binomial(degree, k)) for k in range(degree + 1)
    ])
    change = hitchindod.slrep.symmetric_power(
        np.linalg.inv(frame_matrix(Z0)).T, degree)
    return hitchindod.hpoly.HPoly(n, change @ (moved * weights))


def lift_point(gamma, z, t):
    """
    Apply gamma to a point (z, t) of the total space.

    The base point moves to gamma z and the unitary coordinates pick up the
    phases e^(i(2n+1-2k) theta), theta = arg(cz + d).
    """
    gamma = hitchindod.slrep.sl2(gamma)
    z = _point(z)
    t = np.asarray(t, dtype=complex)
    size = t.size
    theta = np.angle(gamma[1, 0] * z.z + gamma[1, 1])
    exponents = size + 1 - 2 * np.arange(1, size + 1)
    return mobius(gamma, z), t * np.exp(1j * exponents * theta)


def left_action_frame_check(gamma, z):
    """
    Measure the cocycle of the unitary frame under gamma.

    The frame h^(1/2) dz^(1/2) at gamma z pulls back to the frame at z times
    |cz + d|/(cz + d). The residual combines the deviation from this phase
    with the deviation of (cz + d)^2 gamma'(z) from 1.
    """
    gamma = hitchindod.slrep.sl2(gamma)
    z = _point(z)
    (a, b), (c, d) = gamma
    factor = c * z.z + d
    derivative = (a * d - b * c) / factor**2
    moved = mobius(gamma, z)
    ratio = math.sqrt(
        hitchindod.higgsflat.metric_h(moved.y) /
        hitchindod.higgsflat.metric_h(z.y)) / factor
    expected = abs(factor) / factor
    return max(abs(ratio - expected), abs(factor**2 * derivative - 1))


def equivariance_check(gamma, z, t, n, field=hitchindod.stiefel.COMPLEX):
    """Obtain the projective distance between D(gamma.p) and gamma.D(p)."""
    moved_z, moved_t = lift_point(gamma, z, t)
    first = developing(moved_z, moved_t, n, field)
    second = hitchindod.slrep.act(gamma, developing(z, t, n, field))
    return hitchindod.hpoly.projective_distance(first, second)


def base_point_element(z, angle=0.0):
    """Obtain gamma in SL(2,R) with gamma i = z, rotated by angle about i."""
    z = _point(z)
    root = math.sqrt(z.y)
    translate = np.array([[root, z.x / root], [0, 1 / root]])
    return translate @ hitchindod.slrep.rotation(angle)


@dataclasses.dataclass(frozen=True)
class KConsistency:
    """K membership of a developed form and its base point prediction."""
    direct: object
    predicted: object

    @property
    def consistent(self):
        """
        Check that the membership and the real multiplicity agree.

        Multiplicities are compared through their bounds over ambiguous root
        decisions, so a root within tolerance of realness counts for both.
        """
        if self.direct.member != self.predicted.member:
            return False
        direct_low, direct_high = self.direct.report.real_mult_bounds()
        low, high = self.predicted.report.real_mult_bounds()
        return max(direct_low, low) <= min(direct_high, high)


def k_consistency(z,
                  t,
                  n,
                  field=hitchindod.stiefel.COMPLEX,
                  angle=0.0,
                  tol_cluster=hitchindod.hpoly.DEFAULT_TOL_CLUSTER,
                  tol_real=hitchindod.hpoly.DEFAULT_TOL_REAL):
    """
    Compare K membership at (z, t) with its prediction from the base point.

    With gamma i = z, the point (z, t) is gamma applied to some (i, t'). The
    prediction is the membership of gamma acting on the form developed at
    (i, t').
    """
    gamma = base_point_element(z, angle)
    base, base_t = lift_point(np.linalg.inv(gamma), z, t)
    direct = developing(z, t, n, field)
    predicted = hitchindod.slrep.act(gamma,
                                     developing(base, base_t, n, field))
    return KConsistency(
        direct=hitchindod.dod.in_K(direct, tol_cluster, tol_real),
        predicted=hitchindod.dod.in_K(predicted, tol_cluster, tol_real))


# The fundamental domain of theta' is [pi/4, 7pi/12).
THETA_MIN = math.pi / 4
THETA_MAX = 7 * math.pi / 12

_DOMAIN_SLACK = 1e-9
_COS_ZERO = 1e-12


@dataclasses.dataclass(frozen=True)
class N2Params:
    """Parameters (theta', r, phi) of a point of the first n = 2 component."""
    theta_prime: float
    r: float
    phi: float

    def __post_init__(self):
        if not THETA_MIN <= self.theta_prime < THETA_MAX:
            raise hitchindod.exc.RootSystemException(
                f"Angle theta' '{self.theta_prime}' is outside "
                f"[pi/4, 7pi/12)")
        if not self.r > 0:
            raise hitchindod.exc.RootSystemException(
                f"Radius '{self.r}' is not positive")
        if not 0 < self.phi < math.pi:
            raise hitchindod.exc.RootSystemException(
                f"Angle phi '{self.phi}' is outside (0, pi)")

    @classmethod
    def from_z(cls, theta_prime, z):
        """Create parameters from theta' and the point z = r e^(i phi)."""
        z = _point(z)
        return cls(theta_prime, abs(z.z), math.atan2(z.y, z.x))

    @property
    def x(self):
        """Obtain r cos(phi)."""
        return self.r * math.cos(self.phi)

    @property
    def y(self):
        """Obtain r sin(phi)."""
        return self.r * math.sin(self.phi)

    @property
    def z(self):
        """Obtain the base point."""
        return complex(self.x, self.y)


def _tangent_root(x, y, angle):
    """Obtain x + y tan(angle), or math.inf where the cosine vanishes."""
    if abs(math.cos(angle)) < _COS_ZERO:
        return math.inf
    return x + y * math.tan(angle)


def n2_forward(params):
    """
    Obtain the real roots (a1, a2, a3) of the developed form of params.

    The roots are a_j = x + y tan(theta' + (j-1) pi/3) in the affine
    coordinate X/Y. On the fundamental domain a2 < a3 always holds, and a1
    lies above a3 for theta' < pi/2, at infinity for theta' = pi/2 and below
    a2 for theta' > pi/2.
    """
    return tuple(
        _tangent_root(params.x, params.y, params.theta_prime + j * math.pi / 3)
        for j in range(3))


def _fold_theta(theta):
    """Move an angle into the fundamental domain, with a little slack."""
    theta = theta % math.pi
    if THETA_MIN - _DOMAIN_SLACK <= theta < THETA_MIN:
        theta = THETA_MIN
    return theta


def n2_inverse(a1, a2, a3):
    """
    Recover (theta', r, phi) from the labelled roots.

    The labels must satisfy a2 < a3 with a2, a3 finite; a1 = math.inf selects
    theta' = pi/2. Equal roots and labels that put theta' outside the
    fundamental domain raise RootSystemException.
    """
    if math.isinf(a2) or math.isinf(a3):
        raise hitchindod.exc.RootSystemException(
            "Only the root a1 may be at infinity")
    scale = max(1.0, abs(a2), abs(a3))
    if a3 - a2 <= 1e-12 * scale:
        raise hitchindod.exc.RootSystemException(
            f"Roots '{a2}' and '{a3}' are not ordered as a2 < a3")
    if math.isinf(a1):
        x = (a2 + a3) / 2
        y = math.sqrt(3) * (a3 - a2) / 2
        return N2Params.from_z(math.pi / 2, complex(x, y))
    if min(abs(a1 - a2), abs(a1 - a3)) <= 1e-12 * max(scale, abs(a1)):
        raise hitchindod.exc.RootSystemException(
            f"Roots '{a1}', '{a2}', '{a3}' are not distinct")

    xi = (2 * a1 - a2 - a3) / (math.sqrt(3) * (a3 - a2))
    theta = _fold_theta(math.atan(xi))
    if not THETA_MIN <= theta < THETA_MAX:
        raise hitchindod.exc.RootSystemException(
            f"Roots '{a1}', '{a2}', '{a3}' give theta' '{theta}' outside the "
            f"fundamental domain")
    y = 2 * (a2 - a1) * (a3 - a1) / (math.sqrt(3) * (1 + xi * xi) * (a3 - a2))
    if y <= 0:
        raise hitchindod.exc.RootSystemException(
            f"Roots '{a1}', '{a2}', '{a3}' give a point off the half-plane")
    x = a1 - xi * y
    return N2Params.from_z(theta, complex(x, y))


def n2_inverse_roots(roots):
    """
    Recover (theta', r, phi) from an unordered triple of real roots.

    The root a1 is infinity when present, else the largest or the smallest
    root, whichever labelling lands in the fundamental domain.
    """
    roots = list(roots)
    if len(roots) != 3:
        raise hitchindod.exc.RootSystemException(
            f"Expected three roots, got '{len(roots)}'")
    finite = sorted(root for root in roots if not math.isinf(root))
    if len(finite) == 2:
        return n2_inverse(math.inf, finite[0], finite[1])
    if len(finite) != 3:
        raise hitchindod.exc.RootSystemException(
            "More than one root is at infinity")
    low, mid, high = finite
    for a1, a2, a3 in ((high, low, mid), (low, mid, high)):
        try:
            return n2_inverse(a1, a2, a3)
        except hitchindod.exc.RootSystemException as e:
            _logger.debug("Labelling a1 = '%s' rejected: %s", a1, e)
            last_error = e
    raise last_error


def n2_omega1_point(theta):
    """Obtain the unitary coordinates (e^(-3i theta), 0, 0, e^(3i theta))."""
    return np.array(
        [np.exp(-3j * theta), 0, 0, np.exp(3j * theta)], dtype=complex)


def n2_omega2_point(theta):
    """Obtain the unitary coordinates (0, e^(-i theta), e^(i theta), 0)."""
    return np.array([0, np.exp(-1j * theta), np.exp(1j * theta), 0],
                    dtype=complex)


def n2_omega1_theta(params):
    """Obtain the fiber angle theta = theta' - pi/4 of the first component."""
    return params.theta_prime - math.pi / 4


def n2_omega2_root(z, theta):
    """Obtain the real root x + y tan(theta + pi/4) of the second component."""
    z = _point(z)
    return _tangent_root(z.x, z.y, theta + math.pi / 4)


def n2_inverse_omega2(z, a):
    """
    Recover the fiber angle of the second component from the real root.

    theta = arctan((a - x)/y) - pi/4 modulo pi, with theta = pi/4 for a root
    at infinity.
    """
    z = _point(z)
    if math.isinf(a):
        return math.pi / 4
    return (math.atan((a - z.x) / z.y) - math.pi / 4) % math.pi


OMEGA1 = 'omega1'
OMEGA2 = 'omega2'


def n2_roots(params, branch, theta=None):
    """
    Obtain the roots of the developed form on one of the n = 2 components.

    For OMEGA1 these are the three real roots of n2_forward(params). For OMEGA2
    the point params only supplies the base point z, theta is the fiber angle
    and the roots are z, conj(z) and the real root x + y tan(theta + pi/4).
    """
    if branch == OMEGA1:
        return n2_forward(params)
    if branch == OMEGA2:
        if theta is None:
            raise hitchindod.exc.RootSystemException(
                "The second component needs a fiber angle")
        return (params.z, params.z.conjugate(),
                n2_omega2_root(params.z, theta))
    raise hitchindod.exc.RootSystemException(f"Unknown component '{branch}'")
