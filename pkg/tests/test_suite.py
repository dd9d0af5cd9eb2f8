import json
import time

import pytest

from netorient.fixtures import NAMES, MissingFixture, fixture_text, load_fixture
from netorient.suite import run_acceptance, run_property, run_suite


def copy_fixtures(dest):
    for name in NAMES:
        (dest / f"{name}.net").write_text(fixture_text(name))


def test_property_suite_is_deterministic():
    first = run_property(count=30, seed=3)
    second = run_property(count=30, seed=3)
    assert first.to_json() == second.to_json()
    assert first.passed


def test_property_suite_within_budget():
    t0 = time.perf_counter()
    report = run_suite("property", budget=60)
    assert time.perf_counter() - t0 < 60
    assert not report.budget_exceeded
    assert len(report.cases) >= 200
    failed = [c.case_id for c in report.cases if not c.passed]
    assert failed == []


def test_property_suite_budget_cut_short():
    report = run_property(budget=1e-9, count=50)
    assert report.budget_exceeded and not report.passed


def test_report_json_shape():
    report = run_acceptance(only={1, 10})
    data = json.loads(report.to_json())
    assert data["suite"] == "acceptance"
    assert [c["id"] for c in data["cases"]] == ["criterion/01", "criterion/10"]
    assert "seconds" not in data["cases"][0]
    assert "seconds" in report.to_dict(timings=True)["cases"][0]
    assert all(line.startswith(("PASS ", "FAIL ")) for line in report.lines())


def test_acceptance_report_is_deterministic():
    picks = {1, 2, 5, 10}
    assert run_acceptance(only=picks).to_json() == run_acceptance(only=picks).to_json()


def test_corrupted_fixture_is_missing(tmp_path):
    copy_fixtures(tmp_path)
    (tmp_path / "fix_a.net").write_text("edge x a\nedge a\n")
    with pytest.raises(MissingFixture):
        load_fixture("fix_a", tmp_path)
    with pytest.raises(MissingFixture):
        run_suite("acceptance", fixture_dir=tmp_path)


def test_absent_fixture_is_missing(tmp_path):
    copy_fixtures(tmp_path)
    (tmp_path / "wfence.net").unlink()
    with pytest.raises(MissingFixture):
        run_suite("acceptance", fixture_dir=tmp_path)


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("smoke")
