import numpy as np
import pytest

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(cid, text): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    cid, text = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        prev = _criteria.get(cid, (text, True, ""))
        ok = prev[1] and rep.passed
        detail = getattr(item, "criterion_detail", "")
        _criteria[cid] = (text, ok, detail or prev[2])


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_criteria, key=lambda c: int(c[2:])):
        text, ok, detail = _criteria[cid]
        line = f"{'PASS' if ok else 'FAIL'} {cid} {text}"
        if detail:
            line += f" | {detail}"
        terminalreporter.write_line(line)


@pytest.fixture
def detail(request):
    """Attach a measured-value summary to the acceptance line of this test."""
    def record(text):
        request.node.criterion_detail = text
        print(text)
    return record


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

