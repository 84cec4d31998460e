from fractions import Fraction as Q

import pytest

from pseudobound.construction import (
    ConfigError,
    ConstructionConfig,
    CountSource,
    RegionSpec,
    amplify,
    assemble_bound,
    contribution,
    density_from_areas,
    floor_places,
    format_report,
    load_config,
    parse_config,
    summary_line,
)
from pseudobound.verify import data_path

F4 = 10233480626615962155895931163981261674


def region(name, density, kind, value):
    return RegionSpec(name, Q(density), CountSource(kind, value))


def test_contribution_rows():
    row = contribution(region("R_4", "1/1024", "count", F4))
    assert row.contribution == Q("0.12006")
    assert row.count == F4
    row = contribution(region("R_3*", "1/32000000", "log2_bound", Q(1397192)))
    assert row.contribution == Q("0.04366")
    assert contribution(region("x", 1, "count", 2)).contribution == 1


def test_contribution_from_generated_sources(tmp_path):
    assert contribution(region("c", 1, "complete", 5)).count == 62
    assert contribution(region("g", 1, "grid3", 2)).count == 20
    row = contribution(region("p", 1, "patch", "fig5.patch"), base_dir=data_path("patches"))
    assert row.count == 3 and row.runtime is not None


def test_amplify():
    assert amplify(Q("0.16373"), 4) == Q("0.21830")
    # 12/11 * 0.24946 = 0.272138..., floored
    assert amplify(Q("0.24946"), 12) == Q("0.27213")
    assert amplify(Q("0.12345"), 2) == Q("0.24690")
    with pytest.raises(ValueError):
        amplify(Q(1, 10), 1)
    with pytest.raises(ValueError):
        amplify(0, 4)


def test_density_from_areas():
    assert density_from_areas(Q(1, 32), 32) == Q(1, 1024)
    assert density_from_areas(Q(1, 144), 7) == Q(1, 1008)
    assert density_from_areas(1, 1) == 1
    with pytest.raises(ValueError):
        density_from_areas(0, 1)


def test_floor_places_rounds_down():
    assert floor_places(Q(2, 3), 5) == Q("0.66666")
    assert floor_places(Q(-1, 3), 2) == Q("-0.34")


def test_shipped_configs():
    expect = {
        "k4": ("0.16372", "0.21830"),
        "k6": ("0.21189", "0.25427"),
        "k12": ("0.24946", "0.27214"),
    }
    for name, (c, c_final) in expect.items():
        report = assemble_bound(load_config(data_path("tables", f"{name}.cfg")))
        assert report.c == Q(c)
        assert report.c_final == Q(c_final)
        # each floored row is a lower bound of its exact product
        assert all(r.contribution <= r.exact_product for r in report.rows)
        assert sum(r.contribution for r in report.rows) <= report.c


def test_report_text():
    report = assemble_bound(load_config(data_path("tables", "k4.cfg")))
    text = format_report(report)
    assert text.splitlines()[-1] == summary_line(report) == "SUMMARY c=0.16372 k=4 c_final=0.21830"
    assert "122.94" in text and "1397192.00" in text and "1/1024" in text


def test_parse_config():
    cfg = parse_config("k 6  # six\nregion A density 1/2 count 8\nregion B density 1 log2_bound 3.5\n")
    assert cfg.k == 6
    assert [r.name for r in cfg.regions] == ["A", "B"]
    assert cfg.regions[1].source == CountSource("log2_bound", Q(7, 2))


@pytest.mark.parametrize(
    "text, message",
    [
        ("region A density 1 count 2\n", "missing 'k'"),
        ("k 4\n", "no regions"),
        ("k x\nregion A density 1 count 2\n", "line 1"),
        ("k 4\nregion A density 0 count 2\n", "positive"),
        ("k 4\nregion A density 1/0 count 2\n", "bad density"),
        ("k 4\nregion A density 1 guess 2\n", "unknown count source"),
        ("k 4\nregion A density 1 count -2\n", "nonnegative integer"),
        ("k 4\nregion A density 1 log2_bound 1e5\n", "bad decimal"),
        ("k 4\nregion A density 1 count 2\nregion A density 1 count 2\n", "duplicate"),
        ("k 1\nregion A density 1 count 2\n", "at least 2"),
        ("k 4\nbogus\n", "unknown statement"),
    ],
)
def test_config_errors(text, message):
    with pytest.raises(ConfigError, match=message):
        parse_config(text)


def test_zero_count_and_missing_patch_rejected(tmp_path):
    cfg = ConstructionConfig(4, (region("A", 1, "count", 0),))
    with pytest.raises(ConfigError, match="positive"):
        assemble_bound(cfg)
    cfg = ConstructionConfig(4, (region("A", 1, "patch", "nope.patch"),))
    with pytest.raises(ConfigError, match="cannot read patch"):
        assemble_bound(cfg, base_dir=str(tmp_path))
