from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

import helpers


def pytest_terminal_summary(terminalreporter):
    if helpers.CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(helpers.CRITERIA.values()):
            terminalreporter.write_line(line)
