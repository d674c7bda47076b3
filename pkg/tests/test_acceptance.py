"""One test per acceptance criterion; each prints a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -s`` or ``python tests/test_acceptance.py``.
"""

import pytest

from apfluct import repro
from conftest import ACCEPTANCE_LINES


@pytest.mark.parametrize("number", [c[0] for c in repro.CRITERIA], ids=[f"criterion_{c[0]:02d}_{c[1].replace(' ', '_')}" for c in repro.CRITERIA])
def test_criterion(number):
    result = repro.run_criterion(number)
    print(result.line)
    ACCEPTANCE_LINES.append(result.line)
    assert result.passed, result.line


if __name__ == "__main__":
    print(repro.summary_table(repro.run_all()), end="")
