import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "lpgp", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", parent=settings.get_profile("lpgp"), max_examples=300)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "lpgp"))


def pytest_terminal_summary(terminalreporter):
    from support import ACCEPTANCE

    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
