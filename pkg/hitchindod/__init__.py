# Copyright (C) 2019-2020 Petr Pavlu <setup@dagobah.cz>
# SPDX-License-Identifier: MIT

"""Explicit constructions and checks for Fuchsian domains of discontinuity."""

__version__ = '1.0.0'
