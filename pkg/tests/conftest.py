import sys

import pytest

# several oracles compare against len(str(big)) for multi-thousand-digit values
sys.set_int_max_str_digits(1_000_000)


@pytest.fixture
def report(capfd):
    """Emit a line on the live terminal, bypassing capture."""
    def go(line):
        with capfd.disabled():
            print(line, flush=True)
    return go
