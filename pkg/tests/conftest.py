import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def circ_dist(a, b):
    """Absolute circular distance between angle arrays."""
    return np.abs(np.angle(np.exp(1j * (np.asarray(a) - np.asarray(b)))))


def nyquist_free(shape, rng):
    """Random real field with zero DC and zero content on every Nyquist bin."""
    spectrum = np.fft.fftn(rng.standard_normal(shape))
    for axis, n in enumerate(shape):
        if n % 2 == 0:
            idx = [slice(None)] * len(shape)
            idx[axis] = n // 2
            spectrum[tuple(idx)] = 0
    spectrum[(0,) * len(shape)] = 0
    return np.fft.ifftn(spectrum).real


_criteria = {}


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    if report.when == "call" or report.outcome != "passed":
        ok = _criteria.get(marker, True) and report.outcome == "passed"
        _criteria[marker] = ok


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    m = item.get_closest_marker("criterion")
    if m is not None:
        outcome.get_result().criterion = (m.args[0], m.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), ok in sorted(_criteria.items()):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}")
