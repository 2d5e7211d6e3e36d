# Copyright (C) 2019-2020 Petr Pavlu <setup@dagobah.cz>
# SPDX-License-Identifier: MIT

"""
Stiefel cones, their group actions and projections.

A point (v, w) of K^n x K^n is stored as a StiefelPoint. Its interleaved form
(v1, w1, v2, w2, ...) is the 2n-coordinate vector on which the representation
phi acts; the t-coordinates of the cone C' are related to it by
hitchindod.slrep.basis_change_A().
"""

import dataclasses
import logging
import math

import numpy as np
import scipy.linalg

import hitchindod.exc
import hitchindod.slrep

_logger = logging.getLogger(__name__)

REAL = 'R'
COMPLEX = 'C'
FIELDS = (REAL, COMPLEX)

# Tolerance for unitary, orthogonal and realness checks on group inputs.
GROUP_TOL = 1e-8
# Relative singular value threshold for rank decisions.
RANK_TOL = 1e-8
# Tolerance for comparing canonical representatives.
CLASS_TOL = 1e-10

DEFAULT_CONE_TOL = 1e-9


def _check_field(field):
    """Check that a field tag is known."""
    if field not in FIELDS:
        raise hitchindod.exc.StiefelException(f"Unknown field '{field}'")


class StiefelPoint:
    """Pair of vectors (v, w) over the real or complex numbers."""
    def __init__(self, field, v, w):
        """Initialize a point from its two halves."""
        _check_field(field)
        v = np.array(v, dtype=complex).ravel()
        w = np.array(w, dtype=complex).ravel()
        if v.shape != w.shape or v.size == 0:
            raise hitchindod.exc.StiefelException(
                f"Vectors of shapes '{v.shape}' and '{w.shape}' do not form "
                f"a point")
        if field == REAL:
            scale = max(1.0, np.max(np.abs(v)), np.max(np.abs(w)))
            if max(np.max(np.abs(v.imag)), np.max(np.abs(
                    w.imag))) > GROUP_TOL * scale:
                raise hitchindod.exc.StiefelException(
                    "Real point has complex coordinates")
            v = v.real.astype(complex)
            w = w.real.astype(complex)
        self._field = field
        self._v = v
        self._w = w

    @classmethod
    def from_interleaved(cls, field, x):
        """Create a point from the vector (v1, w1, v2, w2, ...)."""
        v, w = hitchindod.slrep.deinterleave(x)
        return cls(field, v, w)

    @property
    def field(self):
        """Obtain the field tag."""
        return self._field

    @property
    def n(self):
        """Obtain the half-rank."""
        return self._v.size

    @property
    def v(self):
        """Obtain a copy of the first vector."""
        return self._v.copy()

    @property
    def w(self):
        """Obtain a copy of the second vector."""
        return self._w.copy()

    def interleaved(self):
        """Obtain the vector (v1, w1, v2, w2, ...)."""
        return hitchindod.slrep.interleave(self._v, self._w)

    def as_matrix(self):
        """Obtain the n x 2 matrix with columns v and w."""
        return np.column_stack([self._v, self._w])

    def __repr__(self):
        return (f"StiefelPoint({self._field}, {self._v.tolist()}, "
                f"{self._w.tolist()})")


@dataclasses.dataclass(frozen=True)
class ConeCheck:
    """Outcome of a cone membership test."""
    member: bool
    residuals: dict

    @property
    def worst(self):
        """Obtain the largest residual."""
        return max(self.residuals.values(), default=0.0)


def in_cone(point, tol=DEFAULT_CONE_TOL):
    """
    Check whether a point lies in the cone C_K.

    The cone is Re<v, w> = 0 and |v|^2 = |w|^2, and for the real field also
    <v, w> real with v, w real. Residuals are relative to |v|^2 + |w|^2.
    """
    v, w = point.v, point.w
    scale = float(np.vdot(v, v).real + np.vdot(w, w).real)
    if scale == 0:
        raise hitchindod.exc.ConeException("The zero point has no cone class")
    inner = np.vdot(v, w)
    residuals = {
        'orthogonality': abs(inner.real) / scale,
        'norms': abs(np.vdot(v, v).real - np.vdot(w, w).real) / scale,
    }
    if point.field == REAL:
        residuals['imaginary'] = abs(inner.imag) / scale
        residuals['realness'] = float(
            max(np.max(np.abs(v.imag)), np.max(np.abs(w.imag))) /
            math.sqrt(scale))
    member = all(value <= tol for value in residuals.values())
    return ConeCheck(member, residuals)


def tau0(t):
    """Apply t -> (conj(t_2n), ..., conj(t_1))."""
    return np.conj(np.asarray(t, dtype=complex)[::-1])


def in_cone_prime(t, field, tol=DEFAULT_CONE_TOL):
    """
    Check whether a coordinate vector lies in the cone C'_K.

    The cone is sum_j t_2j-1 conj(t_2j) = 0, and for the real field the point
    must also be fixed by tau0. Residuals are relative to |t|^2 and |t|.
    """
    _check_field(field)
    t = np.asarray(t, dtype=complex)
    if t.ndim != 1 or t.size % 2 != 0:
        raise hitchindod.exc.ConeException(
            f"Coordinate vector of shape '{t.shape}' has no even length")
    scale = float(np.vdot(t, t).real)
    if scale == 0:
        raise hitchindod.exc.ConeException("The zero point has no cone class")
    residuals = {
        'constraint': abs(np.sum(t[0::2] * np.conj(t[1::2]))) / scale,
    }
    if field == REAL:
        residuals['tau0'] = float(np.linalg.norm(t - tau0(t)) /
                                  math.sqrt(scale))
    member = all(value <= tol for value in residuals.values())
    return ConeCheck(member, residuals)


def _check_group_matrix(matrix, size, real, what):
    """Check that a matrix is unitary, and real when requested."""
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.shape != (size, size):
        raise hitchindod.exc.StiefelException(
            f"{what} has shape '{matrix.shape}', expected '({size}, {size})'")
    if real and np.max(np.abs(matrix.imag)) > GROUP_TOL:
        raise hitchindod.exc.StiefelException(f"{what} is not real")
    error = np.linalg.norm(matrix.conj().T @ matrix - np.eye(size))
    if error > GROUP_TOL:
        kind = 'orthogonal' if real else 'unitary'
        raise hitchindod.exc.StiefelException(
            f"{what} is not {kind}, deviation '{error:.3g}'")
    return matrix.real.astype(complex) if real else matrix


def act_group(point, a, b):
    """
    Apply the structure group action (v, w) -> A (v, w) B^-1.

    A is in O(n) for the real field and in U(n) for the complex one, B is in
    O(2).
    """
    a = _check_group_matrix(a, point.n, point.field == REAL, "Matrix A")
    b = _check_group_matrix(b, 2, True, "Matrix B")
    result = a @ point.as_matrix() @ b.T
    return StiefelPoint(point.field, result[:, 0], result[:, 1])


def unitary_invariant(point):
    """Obtain the U(n)-invariant Im<v, w>/(|v||w|)."""
    v, w = point.v, point.w
    denominator = np.linalg.norm(v) * np.linalg.norm(w)
    if denominator == 0:
        raise hitchindod.exc.StiefelException(
            "The invariant needs nonzero vectors")
    return float(np.vdot(v, w).imag / denominator)


def diag_fiber_map(matrix):
    """Obtain h(A) = Re(conj(A)^T A) for an n x 2 matrix A."""
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[1] != 2:
        raise hitchindod.exc.StiefelException(
            f"Matrix of shape '{matrix.shape}' is not n x 2")
    return (matrix.conj().T @ matrix).real


def diag_fiber_act(matrix, g):
    """Apply (Id, g) to an n x 2 matrix, giving A g^-1."""
    return np.asarray(matrix, dtype=complex) @ np.linalg.inv(g)


def is_positive_definite(form, tol=RANK_TOL):
    """Check that a symmetric 2x2 matrix is positive definite."""
    eigenvalues = np.linalg.eigvalsh(form)
    return bool(eigenvalues[0] > tol * max(1.0, abs(eigenvalues[-1])))


class SphereClass:
    """Class of a nonzero vector modulo positive real scaling."""
    def __init__(self, vector):
        vector = np.array(vector, dtype=complex).ravel()
        norm = np.linalg.norm(vector)
        if norm == 0:
            raise hitchindod.exc.StiefelException(
                "The zero vector has no class")
        self._representative = self._canonical(vector / norm)

    def _canonical(self, vector):
        return vector

    @property
    def representative(self):
        """Obtain a copy of the canonical representative."""
        return self._representative.copy()

    def same_as(self, other, tol=CLASS_TOL):
        """Check whether two classes agree."""
        other = other.representative
        if other.shape != self._representative.shape:
            return False
        return bool(np.linalg.norm(self._representative - other) <= tol)


class ProjClass(SphereClass):
    """Class of a nonzero vector modulo nonzero scalars."""
    def _canonical(self, vector):
        # Entries within rounding of the largest modulus are tied; the first
        # one wins.
        moduli = np.abs(vector)
        index = int(np.argmax(moduli >= moduli.max() * (1 - 1e-12)))
        phase = vector[index] / moduli[index]
        return vector / phase


def realify(vector, field):
    """Obtain the real coordinates of a vector."""
    vector = np.asarray(vector, dtype=complex)
    if field == REAL:
        return vector.real.copy()
    return np.concatenate([vector.real, vector.imag])


class OrientedPlane:
    """Oriented real 2-plane given by an orthonormal ordered frame."""
    def __init__(self, frame):
        """Initialize a plane from a real m x 2 orthonormal frame."""
        frame = np.array(frame, dtype=float)
        if frame.ndim != 2 or frame.shape[1] != 2:
            raise hitchindod.exc.StiefelException(
                f"Frame of shape '{frame.shape}' is not m x 2")
        if np.linalg.norm(frame.T @ frame - np.eye(2)) > CLASS_TOL:
            raise hitchindod.exc.StiefelException("Frame is not orthonormal")
        self._frame = frame

    @classmethod
    def from_pair(cls, first, second):
        """
        Create the plane spanned by two real vectors.

        The frame is the Gram-Schmidt orthonormalization of (first, second), so
        it carries the orientation of the ordered pair.
        """
        first = np.asarray(first, dtype=float)
        second = np.asarray(second, dtype=float)
        singular = np.linalg.svd(np.column_stack([first, second]),
                                 compute_uv=False)
        if singular[0] == 0 or singular[1] <= RANK_TOL * singular[0]:
            raise hitchindod.exc.StiefelException(
                "Vectors do not span a 2-plane")
        e1 = first / np.linalg.norm(first)
        e2 = second - np.dot(e1, second) * e1
        e2 = e2 / np.linalg.norm(e2)
        return cls(np.column_stack([e1, e2]))

    @property
    def frame(self):
        """Obtain a copy of the orthonormal frame."""
        return self._frame.copy()

    @property
    def dimension(self):
        """Obtain the dimension of the ambient space."""
        return self._frame.shape[0]

    def orientation(self, first, second):
        """Obtain the sign of a pair of vectors relative to the frame."""
        coords = self._frame.T @ np.column_stack([first, second])
        return int(np.sign(np.linalg.det(coords)))

    def same_as(self, other, tol=CLASS_TOL):
        """Check that two oriented planes coincide."""
        if other.dimension != self.dimension:
            return False
        if plane_distance(self, other) > tol:
            return False
        return bool(np.linalg.det(self._frame.T @ other.frame) > 0)


def plane_distance(first, second):
    """Obtain the largest principal angle between two planes."""
    return float(np.max(scipy.linalg.subspace_angles(first.frame,
                                                     second.frame)))


def _complex_structure(vector):
    """Multiply realified complex coordinates (Re, Im) by i."""
    half = vector.size // 2
    return np.concatenate([-vector[half:], vector[:half]])


def u1_rotate_plane(plane, theta):
    """Apply multiplication by e^(i theta) to a plane in realified C^n."""
    if plane.dimension % 2 != 0:
        raise hitchindod.exc.StiefelException(
            "The U(1) action needs a plane in realified complex space")
    half = plane.dimension // 2
    frame = plane.frame
    complex_frame = frame[:half] + 1j * frame[half:]
    rotated = np.exp(1j * theta) * complex_frame
    return OrientedPlane(np.vstack([rotated.real, rotated.imag]))


def is_complex_line(plane, tol=CLASS_TOL):
    """Check whether a plane in realified C^n is a complex line."""
    if plane.dimension % 2 != 0:
        return False
    frame = plane.frame
    image = _complex_structure(frame[:, 0])
    residual = image - frame @ (frame.T @ image)
    return bool(np.linalg.norm(residual) <= tol)


def projective_base_point(point):
    """Obtain the class [v] of a point, the image of [(v, w)] in KP^n-1."""
    return ProjClass(point.v)


@dataclasses.dataclass(frozen=True)
class Projections:
    """Images of a point under the span and base point projections."""
    plane: OrientedPlane
    base_point: ProjClass


def projections(point):
    """Obtain the oriented span of (v, w) and the class of v."""
    first = realify(point.v, point.field)
    second = realify(point.w, point.field)
    try:
        plane = OrientedPlane.from_pair(first, second)
    except hitchindod.exc.StiefelException as e:
        raise hitchindod.exc.StiefelException(
            f"Point has rank-deficient halves: {e}") from e
    return Projections(plane, projective_base_point(point))


def sample_cone(n, field, rng):
    """Draw a point of C_K with |v| = |w| = 1."""
    _check_field(field)
    if field == REAL:
        if n < 2:
            raise hitchindod.exc.StiefelException(
                f"The real cone is empty for half-rank '{n}'")
        v = rng.normal(size=n)
        w = rng.normal(size=n)
        v = v / np.linalg.norm(v)
        w = w - np.dot(v, w) * v
        w = w / np.linalg.norm(w)
        return StiefelPoint(REAL, v, w)

    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    w = rng.normal(size=n) + 1j * rng.normal(size=n)
    w = w - (np.vdot(v, w).real / np.vdot(v, v).real) * v
    return StiefelPoint(COMPLEX, v / np.linalg.norm(v), w / np.linalg.norm(w))


def sample_cone_prime(n, field, rng):
    """Draw a unit point of C'_K."""
    _check_field(field)
    if field == REAL:
        point = sample_cone(n, REAL, rng)
        t = np.linalg.solve(hitchindod.slrep.basis_change_A(n),
                            point.interleaved())
        return t / np.linalg.norm(t)

    while True:
        t = rng.normal(size=2 * n) + 1j * rng.normal(size=2 * n)
        if abs(t[0]) >= 0.1:
            break
        _logger.debug("Redrawing a cone sample with small pivot '%s'", t[0])
    rest = np.sum(t[2::2] * np.conj(t[3::2]))
    t[1] = np.conj(-rest / t[0])
    return t / np.linalg.norm(t)
