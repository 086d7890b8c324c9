import time

import pytest
import torch

from mrparse.model import train

from toydata import overfit_configs, toy_corpus

RESULTS = []


@pytest.fixture
def report():
    """Record one acceptance line, then fail the test if the criterion failed."""

    def _report(number, title, ok, detail):
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
        RESULTS.append((number, line))
        print(line)
        assert ok, line

    return _report


@pytest.fixture(scope="session")
def trained_toy():
    """Multitask model overfit on the toy corpus, with its wall-clock training time."""
    torch.set_num_threads(1)
    corpus = toy_corpus()
    mc, tc = overfit_configs()
    start = time.perf_counter()
    result = train(corpus, corpus, mc, tc)
    return result, time.perf_counter() - start


def pytest_terminal_summary(terminalreporter):
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(RESULTS):
            terminalreporter.write_line(line)
