import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=500, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


_ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture
def acceptance(request):
    """Record ``(criterion, ok, detail)`` for the end-of-run acceptance summary."""
    log = request.config.stash.setdefault(_ACCEPTANCE, {})

    def record(criterion: int, ok: bool, detail: str) -> None:
        log.setdefault(criterion, []).append((ok, detail))
        print(f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}")

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash.get(_ACCEPTANCE, None)
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(log):
        entries = log[criterion]
        bad = [d for ok, d in entries if not ok]
        if bad:
            line = f"FAIL criterion {criterion}: {len(bad)} of {len(entries)} checks red (strict xfails carry the reasons); first: {bad[0]}"
        else:
            summary = entries[0][1] if len(entries) == 1 else f"all {len(entries)} checks passed"
            line = f"PASS criterion {criterion}: {summary}"
        terminalreporter.write_line(line)
