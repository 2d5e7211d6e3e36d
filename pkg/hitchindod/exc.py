# Copyright (C) 2019-2020 Petr Pavlu <setup@dagobah.cz>
# SPDX-License-Identifier: MIT

"""HitchinDod exceptions."""


class HitchinDodException(Exception):
    """Base HitchinDod exception."""


class PolynomialException(HitchinDodException):
    """Exception when working with a homogeneous polynomial."""


class AmbiguityException(PolynomialException):
    """Too many root decisions fell within tolerance of flipping."""
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class RepresentationException(HitchinDodException):
    """Invalid group element passed to a representation."""


class StiefelException(HitchinDodException):
    """Exception when working with Stiefel cones and their group actions."""


class ConeException(HitchinDodException):
    """Point violates a cone constraint."""


class QuadraticFormException(HitchinDodException):
    """Invalid parameter of the invariant quadratic form."""


class ConnectionException(HitchinDodException):
    """Exception when working with the flat connection."""


class RootSystemException(HitchinDodException):
    """Degenerate root data of the rank-two explorer."""


class SuiteException(HitchinDodException):
    """Invalid verification suite configuration."""


class ProjectiveException(HitchinDodException):
    """Invalid point of a projective space."""


class CertificateException(HitchinDodException):
    """Invalid input of an exact certificate."""
