"""Print a one-line verdict per acceptance criterion after the run."""
import re

_ACCEPTANCE = re.compile(r"test_acceptance\.py::test_criterion_(\d+)")
_results = {}
_notes = {}


def record_note(criterion: int, text: str) -> None:
    """Stash a short detail string to show next to the criterion verdict."""
    _notes[criterion] = text


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    m = _ACCEPTANCE.search(report.nodeid)
    if m:
        _results[int(m.group(1))] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for n in sorted(_results):
        verdict = "PASS" if _results[n] == "passed" else "FAIL"
        note = _notes.get(n, "")
        suffix = f"  ({note})" if note else ""
        terminalreporter.write_line(f"criterion {n:02d}: {verdict}{suffix}")
