import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when != "call" and outcome != "error":
                continue
            name = rep.nodeid.split("::")[-1]
            if "test_acceptance.py" in rep.nodeid and name.startswith("test_criterion_"):
                number = int(name.split("_")[2])
                lines.append((number, name, "PASS" if outcome == "passed" else "FAIL"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for number, name, verdict in sorted(lines):
            terminalreporter.write_line(f"criterion {number:2d}: {verdict}  {name}")
