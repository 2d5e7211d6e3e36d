# Copyright (C) 2020 Petr Pavlu <setup@dagobah.cz>
# SPDX-License-Identifier: MIT

"""Helper classes and functions."""

import fractions
import math
import numbers

import numpy as np

import hitchindod.exc


def binomial(m, k):
    """Return the exact binomial coefficient C(m, k), zero outside 0..m."""
    if k < 0 or k > m:
        return 0
    return math.comb(m, k)


def fubini_study(x, y):
    """
    Obtain the Fubini-Study distance between two nonzero complex vectors.

    The distance is the angle between the complex lines spanned by x and y, so
    it is invariant under rescaling either vector by any nonzero complex number.
    The sine of the angle is computed as a residual norm which stays accurate
    for nearly equal lines.
    """
    x = np.asarray(x, dtype=complex).ravel()
    y = np.asarray(y, dtype=complex).ravel()
    x_norm = np.linalg.norm(x)
    y_norm = np.linalg.norm(y)
    if x_norm == 0 or y_norm == 0:
        raise hitchindod.exc.ProjectiveException(
            "Fubini-Study distance of a zero vector")
    x = x / x_norm
    y = y / y_norm
    overlap = np.vdot(x, y)
    sine = np.linalg.norm(y - overlap * x)
    return float(math.atan2(sine, abs(overlap)))


def chordal_distance(u, v):
    """Return the chordal distance between two unit pairs on CP^1."""
    return abs(u[0] * v[1] - u[1] * v[0])


def distance_to_real_line(u):
    """Return the chordal distance of a unit pair on CP^1 from RP^1."""
    return abs((u[0] * np.conj(u[1])).imag)


def unit_pair(x, y):
    """Normalize homogeneous coordinates [x:y] to a unit complex pair."""
    pair = np.array([x, y], dtype=complex)
    norm = np.linalg.norm(pair)
    if norm == 0:
        raise hitchindod.exc.ProjectiveException(
            "Point [0:0] is not in the projective line")
    return pair / norm


def compare_sqrt_sum(c_sq, a_sq, b_sq):
    """
    Compare sqrt(c_sq) against sqrt(a_sq) + sqrt(b_sq) exactly.

    All arguments are non-negative rationals. Returns 1 if the left side is
    larger, 0 if the two sides are equal and -1 otherwise. The comparison
    squares twice with sign tracking, so no floating square root is taken:
    sqrt(c) > sqrt(a) + sqrt(b) iff c - a - b > 0 and (c - a - b)^2 > 4ab.
    """
    c_sq = fractions.Fraction(c_sq)
    a_sq = fractions.Fraction(a_sq)
    b_sq = fractions.Fraction(b_sq)
    if min(a_sq, b_sq, c_sq) < 0:
        raise hitchindod.exc.CertificateException(
            "Square roots of negative rationals")

    slack = c_sq - a_sq - b_sq
    if slack < 0:
        return -1
    cross = 4 * a_sq * b_sq
    if slack * slack > cross:
        return 1
    if slack * slack == cross:
        return 0
    return -1


def to_jsonable(value):
    """
    Convert a value to plain data accepted by the json module.

    Complex numbers become [re, im] pairs, numpy arrays become nested lists and
    fractions become strings so that their exact value is kept.
    """
    if isinstance(value, fractions.Fraction):
        return str(value)
    if isinstance(value, np.ndarray):
        return [to_jsonable(item) for item in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [to_jsonable(item) for item in value]
    if isinstance(value, dict):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, numbers.Integral):
        return int(value)
    if isinstance(value, numbers.Real):
        value = float(value)
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        if math.isnan(value):
            return 'nan'
        return value
    if isinstance(value, numbers.Complex):
        return [to_jsonable(value.real), to_jsonable(value.imag)]
    return value
