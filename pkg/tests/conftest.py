import pytest

from quickpath.network import parse_network

_RESULTS_KEY = pytest.StashKey[dict]()

ONE_ROAD = "qpn v1\nroad -10 0 30 0 0.6 directed\n"


@pytest.fixture
def one_road():
    """Horizontal road (-10,0)->(30,0) at alpha 0.6."""
    return parse_network(ONE_ROAD)


@pytest.fixture
def empty_net():
    return parse_network("qpn v1\n")


def pytest_configure(config):
    config.stash[_RESULTS_KEY] = {}


@pytest.fixture
def acceptance(request):
    """Record one line per acceptance criterion for the terminal summary."""
    results = request.config.stash[_RESULTS_KEY]

    def record(number: int, title: str, ok: bool, detail: str = "") -> None:
        results[(number, title)] = (ok, detail)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_RESULTS_KEY, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number, title in sorted(results):
        ok, detail = results[(number, title)]
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {number} {status}: {title} ({detail})")
