import os

from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

CRITERIA = []


def record(label, ok, detail=""):
    """Collect a criterion outcome for the end-of-run summary."""
    CRITERIA.append((label, "PASS" if ok else "FAIL", detail))


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label, status, detail in CRITERIA:
        terminalreporter.write_line(f"{label}: {status}" + (f"  ({detail})" if detail else ""))
