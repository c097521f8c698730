import contextlib
import time

import pytest

_RESULTS: dict[int, str] = {}


class _Record:
    def __init__(self):
        self.detail = ""


@pytest.fixture
def acceptance():
    """Context manager recording one PASS/FAIL line for a numbered criterion."""

    @contextlib.contextmanager
    def criterion(number: int, title: str):
        rec = _Record()
        start = time.perf_counter()
        try:
            yield rec
        except BaseException as exc:
            msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
            _RESULTS[number] = f"criterion {number} FAIL  {title}: {msg}"
            raise
        took = time.perf_counter() - start
        _RESULTS[number] = f"criterion {number} PASS  {title}: {rec.detail} ({took:.2f} s)"

    return criterion


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        terminalreporter.write_line(_RESULTS[n])
