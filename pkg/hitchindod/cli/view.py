# Copyright (C) 2019-2020 Petr Pavlu <setup@dagobah.cz>
# SPDX-License-Identifier: MIT

"""Textual views suitable for the console."""

import math

import hitchindod.harness

_STATUS_LABELS = {
    hitchindod.harness.STATUS_PASS: 'PASS',
    hitchindod.harness.STATUS_FAIL: 'FAIL',
    hitchindod.harness.STATUS_SKIP: 'SKIP',
}


def _format_value(value):
    """Format a worst value for one report line."""
    if value is None:
        return "-"
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, int):
        return f"{value}"
    if isinstance(value, float):
        if math.isinf(value) or math.isnan(value):
            return f"{value}"
        return f"{value:.3e}"
    return f"{value}"


class ReportView(hitchindod.harness.ReportVisitor):
    """View that prints one line about each check and a summary."""
    def visit_record(self, record):
        """Print one-line information about a check."""
        label = _STATUS_LABELS[record.status]
        print(f"{label} {record.name:40} {_format_value(record.worst_value)}")
        if record.status == hitchindod.harness.STATUS_FAIL:
            error = record.detail.get('error')
            if error is not None:
                print(f"  - Error: {error}")
            if record.worst_witness is not None:
                print(f"  - Witness: {record.worst_witness}")

    def visit_summary(self, report):
        """Print the final summary line."""
        counts = report.counts()
        outcome = "passed" if report.passed else "failed"
        print(f"Suite '{report.suite}' {outcome}: "
              f"{counts[hitchindod.harness.STATUS_PASS]} passed, "
              f"{counts[hitchindod.harness.STATUS_FAIL]} failed, "
              f"{counts[hitchindod.harness.STATUS_SKIP]} skipped "
              f"(seed {report.seed})")
