# Copyright (C) 2019-2020 Petr Pavlu <setup@dagobah.cz>
# SPDX-License-Identifier: MIT

"""
The Fuchsian Higgs bundle over the upper half-plane and its flat connection.

In the holomorphic frame dz^((2n+1-2k)/2), k = 1..2n, the harmonic metric is
H = diag(h^m_k) with h = 1/(sqrt(2) y) and m_k = 2k-2n-1. The Higgs field phi
is the constant lower subdiagonal matrix with entries
r_k = sqrt(k(2n-k)/2). The flat connection is

  nabla = d + Az dz + Azbar dzbar,  Az = H^-1 dH/dz + phi,  Azbar = phi^*H,

where phi^*H = H^-1 conj(phi)^T H. Parallel transport along a path solves
T' = -(Az z' + Azbar conj(z')) T.
"""

import dataclasses
import fractions
import logging
import math

import numpy as np
import scipy.integrate
import scipy.linalg

import hitchindod.exc
import hitchindod.slrep
import hitchindod.stiefel
import hitchindod.utils

_logger = logging.getLogger(__name__)

# Frozen result of calibrate_hitchin_convention(): the curvature of the
# Chern connection enters as HITCHIN_SIGN * HITCHIN_SCALE * d/dzbar(H^-1 dH/dz).
HITCHIN_SIGN = -1
HITCHIN_SCALE = 1

# Singular value threshold for the tangent space of the cone fiber.
TANGENT_RCOND = 1e-10

# Tolerances of the adaptive transport integrator.
TRANSPORT_RTOL = 1e-12
TRANSPORT_ATOL = 1e-12


class UHPoint:
    """Point z = x + iy of the upper half-plane."""
    def __init__(self, x, y):
        """Initialize a point, checking that y > 0."""
        x = float(x)
        y = float(y)
        if not math.isfinite(x) or not math.isfinite(y) or y <= 0:
            raise hitchindod.exc.ConnectionException(
                f"Point '{x}+{y}i' is not in the upper half-plane")
        self._x = x
        self._y = y

    @classmethod
    def from_complex(cls, z):
        """Create a point from a complex number."""
        if isinstance(z, UHPoint):
            return z
        z = complex(z)
        return cls(z.real, z.imag)

    @property
    def x(self):
        """Obtain the real part."""
        return self._x

    @property
    def y(self):
        """Obtain the imaginary part."""
        return self._y

    @property
    def z(self):
        """Obtain the point as a complex number."""
        return complex(self._x, self._y)

    def __repr__(self):
        return f"UHPoint({self._x}, {self._y})"


def metric_h(y):
    """Obtain h = 1/(sqrt(2) y)."""
    return 1 / (math.sqrt(2) * y)


def r_squares(n):
    """Obtain r_k^2 = k(2n-k)/2 for k = 0..2n as exact fractions."""
    return [fractions.Fraction(k * (2 * n - k), 2) for k in range(2 * n + 1)]


class HiggsData:
    """Data of the Fuchsian Higgs bundle of rank 2n."""
    def __init__(self, n, exponents=None, phi_scale=1.0):
        """
        Initialize the bundle data.

        The exponents replace the metric exponents m_k and phi_scale multiplies
        the Higgs field; both exist to build negative controls.
        """
        if n < 1:
            raise hitchindod.exc.ConnectionException(
                f"Invalid half-rank '{n}'")
        self._n = n
        size = 2 * n
        if exponents is None:
            exponents = [2 * k - 2 * n - 1 for k in range(1, size + 1)]
        exponents = np.array(exponents, dtype=float)
        if exponents.shape != (size,):
            raise hitchindod.exc.ConnectionException(
                f"Exponent vector of shape '{exponents.shape}' does not match "
                f"rank '{size}'")
        self._exponents = exponents
        self._r = np.array(
            [math.sqrt(k * (2 * n - k) / 2) for k in range(1, size)])
        self._phi = phi_scale * np.diag(self._r, k=-1).astype(complex)
        self._q = np.fliplr(np.eye(size))

    @property
    def n(self):
        """Obtain the half-rank."""
        return self._n

    @property
    def size(self):
        """Obtain the rank 2n."""
        return 2 * self._n

    @property
    def exponents(self):
        """Obtain a copy of the metric exponents."""
        return self._exponents.copy()

    @property
    def gauge_exponents(self):
        """Obtain a_k = -m_k/2, the exponents of the unitary frame."""
        return -self._exponents / 2

    @property
    def r(self):
        """Obtain a copy of the subdiagonal entries r_1..r_2n-1."""
        return self._r.copy()

    @property
    def phi(self):
        """Obtain a copy of the Higgs field."""
        return self._phi.copy()

    @property
    def q(self):
        """Obtain a copy of the anti-diagonal bilinear form Q."""
        return self._q.copy()

    def metric(self, z):
        """Obtain H(z) = diag(h^m_k)."""
        z = UHPoint.from_complex(z)
        return np.diag(metric_h(z.y)**self._exponents)


@dataclasses.dataclass(frozen=True)
class ConnSample:
    """Coefficients of dz and dzbar of the connection at one point."""
    Az: np.ndarray
    Azbar: np.ndarray
    at: UHPoint

    @property
    def Ax(self):  # pylint: disable=invalid-name
        """Obtain the coefficient of dx."""
        return self.Az + self.Azbar

    @property
    def Ay(self):  # pylint: disable=invalid-name
        """Obtain the coefficient of dy."""
        return 1j * (self.Az - self.Azbar)


def higgs_adjoint(data, z):
    """Obtain phi^*H = H^-1 conj(phi)^T H at z."""
    metric = np.diag(data.metric(z))
    return (data.phi.conj().T * metric[None, :]) / metric[:, None]


def conn_matrices(data, z):
    """
    Obtain the connection matrices at z.

    The diagonal of Az is m_k d/dz log h = m_k i/(2y).
    """
    z = UHPoint.from_complex(z)
    az = np.diag(data.exponents * 1j / (2 * z.y)) + data.phi
    return ConnSample(Az=az, Azbar=higgs_adjoint(data, z), at=z)


def _chern_curvature(data, z):
    """Obtain d/dzbar(H^-1 dH/dz) = diag(m_k/(4y^2))."""
    return np.diag(data.exponents / (4 * z.y**2)).astype(complex)


def hitchin_residual(data, z, sign=HITCHIN_SIGN, scale=HITCHIN_SCALE):
    """Obtain the norm of F_H + [phi, phi^*H] in the given convention."""
    z = UHPoint.from_complex(z)
    adjoint = higgs_adjoint(data, z)
    phi = data.phi
    residual = (sign * scale * _chern_curvature(data, z) + phi @ adjoint -
                adjoint @ phi)
    return float(np.linalg.norm(residual))


def curvature_residual(data, z, step=1e-6):
    """
    Obtain the norm of the curvature of the full connection by finite
    differences.

    The curvature coefficient of dz ^ dzbar is
    dAzbar/dz - dAz/dzbar + [Az, Azbar], with d/dz = (d/dx - i d/dy)/2.
    """
    z = UHPoint.from_complex(z)
    step = step * z.y

    def shifted(dx, dy):
        return conn_matrices(data, UHPoint(z.x + dx, z.y + dy))

    plus_x, minus_x = shifted(step, 0), shifted(-step, 0)
    plus_y, minus_y = shifted(0, step), shifted(0, -step)
    d_azbar_x = (plus_x.Azbar - minus_x.Azbar) / (2 * step)
    d_azbar_y = (plus_y.Azbar - minus_y.Azbar) / (2 * step)
    d_az_x = (plus_x.Az - minus_x.Az) / (2 * step)
    d_az_y = (plus_y.Az - minus_y.Az) / (2 * step)
    conn = conn_matrices(data, z)
    curvature = (0.5 * (d_azbar_x - 1j * d_azbar_y) - 0.5 *
                 (d_az_x + 1j * d_az_y) + conn.Az @ conn.Azbar -
                 conn.Azbar @ conn.Az)
    return float(np.linalg.norm(curvature))


def calibrate_hitchin_convention(data, points, flat_tol=1e-6, tol=1e-8):
    """
    Select the sign and scale of the Chern curvature term.

    Flatness of the full connection is checked first, since it does not
    depend on any 2-form convention. Among sign in {+1, -1} and scale in
    {1/4, 1/2, 1}, the pair with the smallest worst residual over the points is
    returned; ConnectionException is raised when none is below tol.
    """
    points = [UHPoint.from_complex(z) for z in points]
    for z in points:
        residual = curvature_residual(data, z)
        if residual > flat_tol * max(1.0, 1 / z.y**2):
            raise hitchindod.exc.ConnectionException(
                f"Connection is not flat at '{z.z}', residual "
                f"'{residual:.3g}'")

    best = None
    for sign in (1, -1):
        for scale in (0.25, 0.5, 1):
            worst = max(
                (hitchin_residual(data, z, sign, scale) for z in points),
                default=0.0)
            if best is None or worst < best[0]:
                best = (worst, sign, scale)
    worst, sign, scale = best
    if worst > tol:
        raise hitchindod.exc.ConnectionException(
            f"No convention solves the Hitchin equation, best residual "
            f"'{worst:.3g}'")
    _logger.debug("Hitchin convention calibrated to sign '%d', scale '%s'",
                  sign, scale)
    return sign, scale


def _check_point(z):
    """Check that the path stays in the half-plane."""
    if z.imag <= 0:
        raise hitchindod.exc.ConnectionException(
            f"Path leaves the upper half-plane at '{z}'")


def _transport(data, path, velocity, length, steps=None):
    """
    Obtain the transport matrix along a parametrized path.

    The path is s -> path(s) for s in [0, length]. With steps unset the
    transport equation is integrated adaptively, otherwise with steps
    exponential midpoint factors.
    """
    size = data.size

    def generator(s):
        z = path(s)
        _check_point(z)
        conn = conn_matrices(data, z)
        dz = velocity(s)
        return -(conn.Az * dz + conn.Azbar * np.conj(dz))

    if steps is not None:
        if steps < 1:
            raise hitchindod.exc.ConnectionException(
                f"Invalid number of steps '{steps}'")
        result = np.eye(size, dtype=complex)
        width = length / steps
        for index in range(steps):
            mid = (index + 0.5) * width
            result = scipy.linalg.expm(width * generator(mid)) @ result
        return result

    def rhs(s, flat):
        return (generator(s) @ flat.reshape(size, size)).ravel()

    solution = scipy.integrate.solve_ivp(rhs, (0, length),
                                         np.eye(size, dtype=complex).ravel(),
                                         method='DOP853',
                                         rtol=TRANSPORT_RTOL,
                                         atol=TRANSPORT_ATOL)
    if not solution.success:
        raise hitchindod.exc.ConnectionException(
            f"Transport integration failed: {solution.message}")
    return solution.y[:, -1].reshape(size, size)


def transport_segment(data, z_from, z_to, steps=None):
    """
    Obtain the parallel transport along the straight segment z_from -> z_to.

    The returned matrix T maps the value of a parallel section at z_from to its
    value at z_to, in the holomorphic frame.
    """
    start = UHPoint.from_complex(z_from).z
    delta = UHPoint.from_complex(z_to).z - start
    return _transport(data, lambda s: start + s * delta, lambda s: delta, 1.0,
                      steps)


def holonomy(data, path, steps=None):
    """Obtain the transport along a polygonal path of points."""
    points = [UHPoint.from_complex(z) for z in path]
    result = np.eye(data.size, dtype=complex)
    for z_from, z_to in zip(points, points[1:]):
        result = transport_segment(data, z_from, z_to, steps) @ result
    return result


def circle_holonomy(data, z, radius, steps=None):
    """Obtain the holonomy around the circle of a radius about z, based at
    z + radius."""
    z = UHPoint.from_complex(z)
    if radius >= z.y:
        raise hitchindod.exc.ConnectionException(
            f"Loop of radius '{radius}' around '{z.z}' leaves the upper "
            f"half-plane")
    center = z.z
    return _transport(data, lambda s: center + radius * np.exp(1j * s),
                      lambda s: 1j * radius * np.exp(1j * s), 2 * math.pi,
                      steps)


def flatness_residual(data, z, radius=None, steps=None):
    """
    Obtain |Hol - Id| for the circular loop of a radius around z.

    The default radius is 0.1 y. A degenerate loop of radius 0 has residual 0.
    """
    z = UHPoint.from_complex(z)
    if radius is None:
        radius = 0.1 * z.y
    if radius < 0:
        raise hitchindod.exc.ConnectionException(
            f"Invalid loop radius '{radius}'")
    if radius == 0:
        return 0.0
    hol = circle_holonomy(data, z, radius, steps)
    return float(np.linalg.norm(hol - np.eye(data.size), 2))


def real_structure_tau(data, z, s):
    """Apply tau(s)_k = h^-m_k conj(s_2n+1-k) at z."""
    z = UHPoint.from_complex(z)
    s = np.asarray(s, dtype=complex)
    if s.shape != (data.size,):
        raise hitchindod.exc.ConnectionException(
            f"Vector of shape '{s.shape}' does not match rank '{data.size}'")
    return metric_h(z.y)**(-data.exponents) * np.conj(s[::-1])


def unitary_to_holomorphic(data, z, t):
    """Map unitary coordinates t to s_k = h^a_k t_k with a_k = -m_k/2."""
    z = UHPoint.from_complex(z)
    return metric_h(z.y)**data.gauge_exponents * np.asarray(t, dtype=complex)


def holomorphic_to_unitary(data, z, s):
    """Map holomorphic coordinates s to unitary ones t_k = h^-a_k s_k."""
    z = UHPoint.from_complex(z)
    return metric_h(z.y)**(-data.gauge_exponents) * np.asarray(s,
                                                               dtype=complex)


def tau_transport_check(data, z_from, z_to, t, steps=None):
    """
    Transport a tau-fixed vector and measure its distance to the fixed locus.

    The vector at z_from has unitary coordinates t, which must be fixed by
    tau0. The result is |tau(s) - s|/|s| at z_to.
    """
    t = np.asarray(t, dtype=complex)
    if np.linalg.norm(t - hitchindod.stiefel.tau0(t)) > 1e-10 * np.linalg.norm(
            t):
        raise hitchindod.exc.ConeException(
            "Unitary coordinates are not fixed by tau0")
    start = unitary_to_holomorphic(data, z_from, t)
    moved = transport_segment(data, z_from, z_to, steps) @ start
    residual = real_structure_tau(data, z_to, moved) - moved
    return float(np.linalg.norm(residual) / np.linalg.norm(moved))


LAMBDA_PHASE = complex(math.cos(math.pi / 4), math.sin(math.pi / 4))


def parallel_section_n1(z, a, b):
    """Obtain the parallel section ((a zbar + b) h/lambda, (a z + b) lambda)
    of the rank 2 bundle, lambda = e^(i pi/4)."""
    z = UHPoint.from_complex(z)
    h = metric_h(z.y)
    return np.array([(a * np.conj(z.z) + b) * h / LAMBDA_PHASE,
                     (a * z.z + b) * LAMBDA_PHASE])


def covariant_derivative(data, z, section, step=1e-6, conn=None):
    """
    Obtain (nabla_z s, nabla_zbar s) of a section given as a function of z.

    The partial derivatives are central finite differences with a step
    relative to y.
    """
    z = UHPoint.from_complex(z)
    step = step * z.y
    d_x = (np.asarray(section(UHPoint(z.x + step, z.y))) -
           np.asarray(section(UHPoint(z.x - step, z.y)))) / (2 * step)
    d_y = (np.asarray(section(UHPoint(z.x, z.y + step))) -
           np.asarray(section(UHPoint(z.x, z.y - step)))) / (2 * step)
    value = np.asarray(section(z))
    if conn is None:
        conn = conn_matrices(data, z)
    nabla_z = 0.5 * (d_x - 1j * d_y) + conn.Az @ value
    nabla_zbar = 0.5 * (d_x + 1j * d_y) + conn.Azbar @ value
    return nabla_z, nabla_zbar


@dataclasses.dataclass(frozen=True)
class JacobianReport:
    """Singular values of the tautological-section Jacobian."""
    dim: int
    min_sv: float
    max_sv: float
    at: tuple
    transverse: bool


def _constraint_differential(t, directions):
    """
    Obtain the real differential of g(t) = sum t_2j-1 conj(t_2j).

    Each column holds (Re dg, Im dg) applied to one direction.
    """
    columns = []
    for delta in directions:
        value = np.sum(delta[0::2] * np.conj(t[1::2]) +
                       t[0::2] * np.conj(delta[1::2]))
        columns.append([value.real, value.imag])
    return np.array(columns).T


def tautological_jacobian(data, field, z, t, conn=None, threshold=1e-8):
    """
    Assemble the Jacobian of the tautological section at (z, t).

    The section has unitary coordinates t, so its holomorphic coordinates are
    s = h^a t. In unitary coordinates, scaled by y, the columns are the images
    of a = 1 and a = i under a -> a nabla_z s + conj(a) nabla_zbar s, followed
    by an orthonormal basis of the tangent space of the cone fiber at t. Over
    the real field, coordinates are taken through basis_change_A, which maps
    tau0-fixed vectors to real ones. The section is transverse when the
    smallest singular value exceeds threshold relative to the largest one.
    """
    z = UHPoint.from_complex(z)
    t = np.asarray(t, dtype=complex)
    if t.shape != (data.size,):
        raise hitchindod.exc.ConeException(
            f"Vector of shape '{t.shape}' does not match rank '{data.size}'")
    check = hitchindod.stiefel.in_cone_prime(t, field, tol=1e-10)
    if not check.member:
        raise hitchindod.exc.ConeException(
            f"Point is not in the cone, residuals '{check.residuals}'")
    t = t / np.linalg.norm(t)
    if conn is None:
        conn = conn_matrices(data, z)

    gauge = data.gauge_exponents
    s = unitary_to_holomorphic(data, z, t)
    nabla_z = gauge * (1j / (2 * z.y)) * s + conn.Az @ s
    nabla_zbar = gauge * (-1j / (2 * z.y)) * s + conn.Azbar @ s
    u_z = holomorphic_to_unitary(data, z, nabla_z) * z.y
    u_zbar = holomorphic_to_unitary(data, z, nabla_zbar) * z.y
    moves = [u_z + u_zbar, 1j * (u_z - u_zbar)]

    size = data.size
    if field == hitchindod.stiefel.COMPLEX:
        identity = np.eye(size, dtype=complex)
        directions = list(identity) + list(1j * identity)
        tangent = scipy.linalg.null_space(_constraint_differential(
            t, directions),
                                          rcond=TANGENT_RCOND)
        columns = [np.concatenate([move.real, move.imag]) for move in moves]
    else:
        basis_change = hitchindod.slrep.basis_change_A(data.n)
        inverse = np.linalg.inv(basis_change)
        directions = list(inverse.T)
        tangent = scipy.linalg.null_space(_constraint_differential(
            t, directions),
                                          rcond=TANGENT_RCOND)
        columns = [(basis_change @ move).real for move in moves]

    matrix = np.column_stack(columns + [tangent])
    if matrix.shape[0] != matrix.shape[1]:
        raise hitchindod.exc.ConnectionException(
            f"Jacobian assembly has shape '{matrix.shape}', the cone fiber is "
            f"singular at this point")
    singular = np.linalg.svd(matrix, compute_uv=False)
    min_sv = float(singular[-1])
    max_sv = float(singular[0])
    return JacobianReport(dim=matrix.shape[0],
                          min_sv=min_sv,
                          max_sv=max_sv,
                          at=(z.z, t),
                          transverse=min_sv > threshold * max(1.0, max_sv))


@dataclasses.dataclass(frozen=True)
class SneRecord:
    """Exact check of 2 r_2i-1 > r_2i + r_2i-2 for one index."""
    i: int
    identity: bool
    inequality: bool
    witness: bool


def sne_inequality(n):
    """
    Verify 2 r_2i-1 > r_2i + r_2i-2 exactly for i = 1..n, with r_0 = r_2n = 0.

    The proof rests on 4 r_2i-1^2 - 2 (r_2i^2 + r_2i-2^2) = 2. The record also
    checks 4 r_2i-1^2 - (r_2i + r_2i-2)^2 >= 2 with square roots isolated and
    squared away.
    """
    if n < 1:
        raise hitchindod.exc.ConnectionException(f"Invalid half-rank '{n}'")
    squares = r_squares(n)
    records = []
    for i in range(1, n + 1):
        centre = squares[2 * i - 1]
        upper = squares[2 * i]
        lower = squares[2 * i - 2]
        identity = 4 * centre - 2 * (upper + lower) == 2
        inequality = hitchindod.utils.compare_sqrt_sum(
            4 * centre, upper, lower) > 0
        # 4c - 2 - a - b >= 2 sqrt(ab)
        rest = 4 * centre - 2 - upper - lower
        witness = rest >= 0 and rest * rest >= 4 * upper * lower
        records.append(SneRecord(i, identity, inequality, witness))
    return records
