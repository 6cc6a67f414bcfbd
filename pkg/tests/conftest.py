import math

import pytest

from tdres.oscillator import SecondOrderOscillator

# criterion number -> (title, node ids), filled at collection time
_CRITERIA = {}
# criterion number -> {node id: (outcome, detail)}
_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number")


def pytest_collection_modifyitems(session, config, items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _CRITERIA.setdefault(m.args[0], (m.args[1], set()))[1].add(item.nodeid)


def pytest_runtest_logreport(report):
    for n, (_, nodeids) in _CRITERIA.items():
        if report.nodeid not in nodeids:
            continue
        if report.when != "call" and report.outcome == "passed":
            continue
        detail = "; ".join(v for k, v in report.user_properties if k == "detail")
        runs = _RESULTS.setdefault(n, {})
        prev = runs.get(report.nodeid)
        if prev is None or prev[0] == "passed":
            runs[report.nodeid] = (report.outcome, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, nodeids = _CRITERIA[n]
        runs = _RESULTS.get(n, {})
        outcomes = [runs.get(i, ("not run", ""))[0] for i in sorted(nodeids)]
        outcome = next((o for o in ("failed", "not run", "skipped") if o in outcomes), "passed")
        detail = " || ".join(runs[i][1] for i in sorted(nodeids) if i in runs and runs[i][1])
        tag = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}.get(outcome, outcome.upper())
        tr.write_line(f"[{tag}] AC{n:02d} {title}" + (f" | {detail}" if detail else ""))


@pytest.fixture
def detail(request):
    """Attach a measured-value summary to the acceptance line of this test."""
    def add(text):
        request.node.user_properties.append(("detail", text))
    return add


@pytest.fixture
def osc10():
    return SecondOrderOscillator.from_q(10, 1.0)


@pytest.fixture
def lossless():
    return SecondOrderOscillator(0.0, 1.0)


TWO_PI = 2 * math.pi
