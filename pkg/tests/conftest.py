import pytest

from graphdist.counting import KappaStore


@pytest.fixture(scope="session")
def store(tmp_path_factory):
    """Shared count cache so the expensive enumerations run once per session."""
    return KappaStore(tmp_path_factory.mktemp("kappa"))


_ACCEPTANCE: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    if "test_acceptance.py" in report.nodeid and name.startswith("test_ac"):
        label = "AC%d" % int(name[len("test_ac"):].split("_", 1)[0])
        prev = _ACCEPTANCE.get(label, "PASS")
        _ACCEPTANCE[label] = "PASS" if prev == "PASS" and report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_ACCEPTANCE, key=lambda s: int(s[2:])):
        terminalreporter.write_line("%s %s" % (label, _ACCEPTANCE[label]))
