import pytest

from cavity_engines.validation import GridSpec, validate_closed_forms


@pytest.fixture(scope="module")
def report():
    return validate_closed_forms(60, seed=7)


def test_overall(report):
    assert report.overall
    assert not report.implementation_failures
    assert report.grid["draws"] == 60 and report.seed == 7


def test_discrepancies_are_flagged(report):
    by_name = {c.name: c for c in report.checks}
    for name in (
        "printed_rho_ab_vs_oracle",
        "printed_jc_eigenvalues_vs_oracle",
        "printed_alpha_literal_reading_vs_oracle",
    ):
        assert by_name[name].note.startswith("documented discrepancy")
        assert by_name[name].passed


def test_report_keys(report):
    doc = report.to_dict()
    assert set(doc) == {"checks", "grid", "seed", "overall"}
    assert set(doc["checks"][0]) == {"name", "max_abs_error", "tolerance", "pass", "note"}


def test_reproducible():
    a = validate_closed_forms(15, seed=3).to_json()
    b = validate_closed_forms(15, seed=3).to_json()
    assert a == b and a.endswith("\n")
    assert validate_closed_forms(15, seed=4).to_json() != a


def test_rejects_empty_grid():
    with pytest.raises(ValueError):
        validate_closed_forms(0)
    with pytest.raises(ValueError):
        GridSpec(size=-3)
