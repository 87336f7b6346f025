"""Shared test setup.

BLAS thread caps are pinned before numpy is first imported so numeric
results do not depend on the host's core count; the determinism checks
compare CSV bytes across serial and parallel runs and need every
process, parent and pool worker alike, to execute identical kernels.
"""

import os

for _var in (
    "OMP_NUM_THREADS",
    "OPENBLAS_NUM_THREADS",
    "MKL_NUM_THREADS",
    "NUMEXPR_NUM_THREADS",
):
    os.environ.setdefault(_var, "1")


def pytest_terminal_summary(terminalreporter):
    """Repeat the acceptance checklist lines where capture cannot eat them."""
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance checklist")
        for line in RESULTS:
            terminalreporter.write_line(line)
