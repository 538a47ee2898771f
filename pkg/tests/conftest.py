import pytest

CRITERIA = {
    1: "golden examples",
    2: "polynomial check agrees with brute force",
    3: "equational check agrees with brute force",
    4: "eliminations are redundant",
    5: "confluence",
    6: "flipping repairs",
    7: "pure predicate elimination is subsumed",
    8: "approximation is sound",
    9: "parser round trip",
    10: "bundled problem set",
}

_RESULTS = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_RESULTS] = {}


@pytest.fixture
def record(request):
    """Store one acceptance verdict; the terminal summary prints them all."""
    results = request.config.stash[_RESULTS]

    def _record(number, ok, detail=""):
        results[number] = (bool(ok), detail)
        return ok

    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash[_RESULTS]
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in CRITERIA.items():
        ok, detail = results.get(n, (False, "did not run to completion"))
        line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {title}"
        terminalreporter.write_line(line + (f" ({detail})" if detail else ""))
