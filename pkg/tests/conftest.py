import os
import sys

from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default", max_examples=150, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.register_profile("ci", max_examples=500, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import CRITERIA
    outcomes = {}
    for key in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(key, []):
            name = rep.nodeid.rpartition("::")[2]
            if "test_acceptance.py::" in rep.nodeid and name.startswith("test_criterion_"):
                n = int(name.split("_")[2])
                if rep.when == "call" or rep.outcome != "passed":
                    outcomes[n] = outcomes.get(n, True) and rep.outcome == "passed"
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(outcomes):
        terminalreporter.write_line(f"criterion {n}: {'PASS' if outcomes[n] else 'FAIL'} - {CRITERIA[n]}")
