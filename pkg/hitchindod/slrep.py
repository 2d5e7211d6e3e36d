# Copyright (C) 2019-2020 Petr Pavlu <setup@dagobah.cz>
# SPDX-License-Identifier: MIT

"""
Representations of SL(2,R) and of the circle on binary forms.

Group elements are plain 2x2 numpy arrays. The action on forms is the
substitution action

  g.P(X, Y) = P(aX + bY, cX + dY), where g^-1 = [[a, b], [c, d]],

and every other matrix in this module is derived from it: the Lie algebra
action of g0 = diag(-1, 1), the circle action on the ZW basis and the matrices
of the representations phi, phi' and delta on C^2n.
"""

import dataclasses
import logging
import math

import numpy as np
import scipy.linalg

import hitchindod.exc
import hitchindod.hpoly
import hitchindod.utils

_logger = logging.getLogger(__name__)

# Allowed deviation of det(g) from 1.
DET_TOL = 1e-10


def sl2(matrix):
    """Validate a matrix as an element of SL(2,R) and return it as an array."""
    matrix = np.array(matrix, dtype=complex)
    if matrix.shape != (2, 2):
        raise hitchindod.exc.RepresentationException(
            f"Group element has shape '{matrix.shape}', expected '(2, 2)'")
    if np.max(np.abs(matrix.imag)) > DET_TOL * max(1.0,
                                                    np.max(np.abs(matrix))):
        raise hitchindod.exc.RepresentationException(
            f"Group element '{matrix.tolist()}' is not real")
    matrix = matrix.real
    det = np.linalg.det(matrix)
    if abs(det - 1) > DET_TOL * max(1.0, np.max(np.abs(matrix))**2):
        raise hitchindod.exc.RepresentationException(
            f"Group element '{matrix.tolist()}' has determinant '{det}'")
    return matrix


def rotation(theta):
    """Obtain the rotation R_theta = [[cos, -sin], [sin, cos]]."""
    cos, sin = math.cos(theta), math.sin(theta)
    return np.array([[cos, -sin], [sin, cos]])


def geodesic_flow(t):
    """Obtain the one-parameter subgroup g_t = diag(e^-t, e^t)."""
    return np.diag([math.exp(-t), math.exp(t)])


def random_sl2(rng, scale=1.0):
    """Draw an element of SL(2,R) as the exponential of a random traceless
    matrix."""
    a, b, c = rng.normal(scale=scale, size=3)
    return scipy.linalg.expm(np.array([[a, b], [c, -a]]))


def symmetric_power(matrix, degree, normalized=False):
    """
    Obtain the matrix of the substitution P(A, B) -> P(m00 A + m01 B,
    m10 A + m11 B) on forms of the given degree.

    The basis is the monomial basis A^(d-k) B^k. With normalized set, the basis
    is instead C(d, k)^(1/2) A^(d-k) B^k, in which unitary 2x2 matrices have
    unitary symmetric powers.
    """
    matrix = np.asarray(matrix, dtype=complex)
    result = hitchindod.hpoly.substitution_matrix(
        ((matrix[0, 0], matrix[0, 1]), (matrix[1, 0], matrix[1, 1])), degree)
    if normalized:
        scales = np.sqrt([
            float(hitchindod.utils.binomial(degree, k))
            for k in range(degree + 1)
        ])
        result = result * scales[None, :] / scales[:, None]
    return result


def sym_rep_matrix(g, n):
    """Obtain the matrix of P -> g.P on the XY coefficients of degree 2n-1."""
    g = sl2(g)
    return symmetric_power(np.linalg.inv(g), 2 * n - 1)


def iota_bar(g, n):
    """Obtain the matrix of the dual representation g -> ((g^-1)^T).P."""
    g = sl2(g)
    return sym_rep_matrix(np.linalg.inv(g).T, n)


def act(g, poly):
    """Apply the substitution action of g to a form, keeping its basis."""
    g = sl2(g)
    form = hitchindod.hpoly.to_basis(poly, hitchindod.hpoly.XY)
    coeffs = symmetric_power(np.linalg.inv(g), form.degree) @ form.coeffs
    result = form.with_coeffs(coeffs, hitchindod.hpoly.XY)
    return hitchindod.hpoly.to_basis(result, poly.basis)


def lie_act_g0(poly):
    """
    Apply the Lie algebra element g0 = diag(-1, 1).

    In the XY basis this is X dP/dX - Y dP/dY, in the ZW basis it is
    W dP/dZ + Z dP/dW. The result is in the basis of the input.
    """
    coeffs = np.asarray(poly.coeffs)
    degree = poly.degree
    if poly.basis == hitchindod.hpoly.XY:
        new_coeffs = coeffs * (degree - 2 * np.arange(degree + 1))
    else:
        new_coeffs = np.zeros_like(coeffs)
        # W dP/dZ lowers the power of Z, Z dP/dW raises it.
        new_coeffs[:-1] += np.arange(1, degree + 1) * coeffs[1:]
        new_coeffs[1:] += np.arange(degree, 0, -1) * coeffs[:-1]
    return poly.with_coeffs(new_coeffs, poly.basis)


def circle_act(theta, poly):
    """
    Apply the rotation R_theta through its diagonal action on the ZW basis.

    The action multiplies Z by e^(i theta) and W by e^(-i theta), so it agrees
    with act(rotation(theta), poly). The result is in the basis of the input.
    """
    form = hitchindod.hpoly.to_basis(poly, hitchindod.hpoly.ZW)
    degree = form.degree
    phases = np.exp(1j * (2 * np.arange(degree + 1) - degree) * theta)
    result = form.with_coeffs(phases * form.coeffs, hitchindod.hpoly.ZW)
    return hitchindod.hpoly.to_basis(result, poly.basis)


@dataclasses.dataclass(frozen=True)
class RepMatrices:
    """Matrices of the representations phi, phi' and delta at one angle."""
    theta: float
    n: int
    L: np.ndarray
    R: np.ndarray
    phi_prime: np.ndarray

    @property
    def phi(self):
        """Obtain phi(theta) as the pair (L_theta, R_theta)."""
        return self.L, self.R

    @property
    def delta(self):
        """Obtain delta(theta) as the pair (Id, R_theta)."""
        return np.eye(self.n), self.R

    def phi_embedded(self):
        """
        Obtain phi(theta) acting on interleaved coordinates.

        The pair (L, R) acts by (v, w) -> L (v, w) R^-1 on the n x 2 matrix with
        columns v and w. On the interleaved vector (v1, w1, v2, w2, ...) this
        is the Kronecker product of L and R.
        """
        return np.kron(self.L, self.R)

    def compose(self, other):
        """Multiply two samples componentwise."""
        if other.n != self.n:
            raise hitchindod.exc.RepresentationException(
                f"Half-rank mismatch: '{self.n}' and '{other.n}'")
        return RepMatrices(theta=self.theta + other.theta,
                           n=self.n,
                           L=self.L @ other.L,
                           R=self.R @ other.R,
                           phi_prime=self.phi_prime @ other.phi_prime)


def rep_matrices(theta, n):
    """Obtain the matrices of phi, phi' and delta at angle theta."""
    big_l = np.eye(n)
    for i in range(1, n // 2 + 1):
        block = slice(2 * i - 2, 2 * i)
        big_l[block, block] = rotation((2 * n + 2 - 4 * i) * theta)
    exponents = 2 * n + 1 - 2 * np.arange(1, 2 * n + 1)
    return RepMatrices(theta=theta,
                       n=n,
                       L=big_l,
                       R=rotation(theta),
                       phi_prime=np.diag(np.exp(1j * exponents * theta)))


_A_BLOCK = 0.5 * np.array([[1, 1, 1, 1], [-1j, 1j, -1j, 1j],
                           [-1j, -1j, 1j, 1j], [-1, 1, 1, -1]])
_B_BLOCK = math.sqrt(2) / 2 * np.array([[1, 1], [-1j, 1j]])


def basis_change_A(n):  # pylint: disable=invalid-name
    """
    Obtain the matrix conjugating phi' to phi.

    Block i takes (t_2i-1, t_2i, t_2n+1-2i, t_2n+2-2i) to the interleaved
    coordinates (v_2i-1, w_2i-1, v_2i, w_2i). For odd n the middle pair
    (t_n, t_n+1) is taken to (v_n, w_n).
    """
    if n < 1:
        raise hitchindod.exc.RepresentationException(
            f"Invalid half-rank '{n}'")
    matrix = np.zeros((2 * n, 2 * n), dtype=complex)
    for i in range(1, n // 2 + 1):
        rows = [4 * i - 4, 4 * i - 3, 4 * i - 2, 4 * i - 1]
        cols = [2 * i - 2, 2 * i - 1, 2 * n - 2 * i, 2 * n + 1 - 2 * i]
        matrix[np.ix_(rows, cols)] = _A_BLOCK
    if n % 2 == 1:
        rows = [2 * n - 2, 2 * n - 1]
        cols = [n - 1, n]
        matrix[np.ix_(rows, cols)] = _B_BLOCK
    return matrix


def tau_real(poly):
    """Apply the real structure whose fixed points are the real forms."""
    form = hitchindod.hpoly.to_basis(poly, hitchindod.hpoly.ZW)
    result = form.with_coeffs(np.conj(form.coeffs[::-1]), hitchindod.hpoly.ZW)
    return hitchindod.hpoly.to_basis(result, poly.basis)


def real_part(poly):
    """Obtain the real form A with poly = A + iB."""
    form = hitchindod.hpoly.to_basis(poly, hitchindod.hpoly.XY)
    result = form.with_coeffs(form.coeffs.real, hitchindod.hpoly.XY)
    return hitchindod.hpoly.to_basis(result, poly.basis)


def imag_part(poly):
    """Obtain the real form B with poly = A + iB."""
    form = hitchindod.hpoly.to_basis(poly, hitchindod.hpoly.XY)
    result = form.with_coeffs(form.coeffs.imag, hitchindod.hpoly.XY)
    return hitchindod.hpoly.to_basis(result, poly.basis)


def interleave(v, w):
    """Merge (v, w) into the vector (v1, w1, v2, w2, ...)."""
    v = np.asarray(v, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if v.shape != w.shape or v.ndim != 1:
        raise hitchindod.exc.RepresentationException(
            f"Cannot interleave vectors of shapes '{v.shape}' and '{w.shape}'")
    result = np.empty(2 * v.size, dtype=complex)
    result[0::2] = v
    result[1::2] = w
    return result


def deinterleave(x):
    """Split the vector (v1, w1, v2, w2, ...) into (v, w)."""
    x = np.asarray(x, dtype=complex)
    if x.ndim != 1 or x.size % 2 != 0:
        raise hitchindod.exc.RepresentationException(
            f"Cannot deinterleave a vector of shape '{x.shape}'")
    return x[0::2].copy(), x[1::2].copy()
