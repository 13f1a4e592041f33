import os

import pytest
from hypothesis import HealthCheck, settings

from spectra.geometry import AffineGeometry, ContinuedFractionGeometry
from spectra.potentials import AffineCoordinatePotential, ClassicalCFPotential
from spectra.symbolic import TransitionSystem

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("SPECTRA_CACHE_DIR", str(tmp_path / "cache"))


@pytest.fixture(scope="session")
def ts2():
    return TransitionSystem.full_shift(2)


@pytest.fixture(scope="session")
def cf():
    return ContinuedFractionGeometry()


@pytest.fixture(scope="session")
def pot(ts2):
    return ClassicalCFPotential(ts2)


@pytest.fixture(scope="session")
def affine():
    return AffineGeometry.uniform([1, 2], "1/3")


@pytest.fixture(scope="session")
def affine_pot(ts2, affine):
    return AffineCoordinatePotential(ts2, affine)


@pytest.fixture(scope="session")
def extracted(ts2, cf, pot):
    """The desk-scale extraction at t = 3.1 (about 15 s, shared by several modules)."""
    from spectra.extraction import ExtractionParams, extract

    return extract(ExtractionParams(t=3.1, k=6), ts2, cf, pot)


_CRITERIA = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_CRITERIA] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    report = outcome.get_result()
    number, title = marker.args
    entry = item.config.stash[_CRITERIA].setdefault(number, {"title": title, "ok": True, "props": {}})
    if report.failed:
        entry["ok"] = False
    if report.when == "teardown":
        entry["props"] = dict(item.user_properties)


def pytest_terminal_summary(terminalreporter, config):
    criteria = config.stash[_CRITERIA]
    if not criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(criteria):
        entry = criteria[number]
        props = dict(entry["props"])
        seconds = props.pop("seconds", None)
        timing = f" ({seconds} s)" if seconds is not None else ""
        details = "; ".join(f"{k}={v}" for k, v in props.items())
        line = f"{'PASS' if entry['ok'] else 'FAIL'} criterion {number}: {entry['title']}{timing}"
        terminalreporter.write_line(line + (f"  [{details}]" if details else ""))
