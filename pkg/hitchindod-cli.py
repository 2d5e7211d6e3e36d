#!/usr/bin/env python3

# Copyright (C) 2019-2020 Petr Pavlu <setup@dagobah.cz>
# SPDX-License-Identifier: MIT

"""Local launcher for the HitchinDod command-line interface."""

import sys
import hitchindod.cli.__main__

sys.exit(hitchindod.cli.__main__.main())
