"""Table readers: schema validation, pivoting, grouping."""

import numpy as np
import pytest

from platoonplots.io import (
    SchemaError,
    provenance_line,
    read_stability,
    read_table,
    read_trajectory,
    stability_groups,
    summary_path_for,
)


def test_trajectory_pivot_shapes(tables):
    t = tables["unstable"]
    table = read_trajectory(t)
    assert table.n_vehicles == 120
    assert table.times[0] == 0.0 and table.times[-1] == 4000.0
    assert table.headway.shape == table.speed.shape == (len(table.times), 120)
    assert sorted(set(table.platoon_id)) == list(range(60))


def test_equilibrium_run_is_flat(tables):
    table = read_trajectory(tables["eq"])
    assert np.abs(table.headway - 22.0).max() < 1e-9
    assert np.abs(table.speed - 10.0).max() < 1e-9


def test_header_mismatch_names_columns(tables, tmp_path):
    lines = tables["stable"].read_text().splitlines()
    lines[0] = lines[0].replace("headway_m", "gap_m")
    bad = tmp_path / "bad.csv"
    bad.write_text("\n".join(lines) + "\n")
    with pytest.raises(SchemaError) as err:
        read_trajectory(bad)
    assert "headway_m" in str(err.value) and "gap_m" in str(err.value)


def test_non_numeric_cell_names_column(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("headway_m,speed_mps,density_veh_per_m,flow_veh_per_s\n10,oops,0.1,1\n")
    with pytest.raises(SchemaError, match="speed_mps"):
        read_table(bad, ("headway_m", "speed_mps", "density_veh_per_m", "flow_veh_per_s"))


def test_empty_table_rejected(tmp_path):
    bad = tmp_path / "empty.csv"
    bad.write_text("model,size,p,t_d,h_m,a_star\n")
    with pytest.raises(SchemaError, match="no data rows"):
        read_stability(bad)


def test_stability_groups_keep_order(tables):
    groups = stability_groups(read_stability(tables["thm_lines"]))
    assert [key[1] for key, _, _ in groups] == [2, 3, 4, 5, 6]
    for _, h, a_star in groups:
        assert len(h) == len(a_star) == 200


def test_infinite_thresholds_parse(tables):
    cols = read_stability(tables["delay_gap"])
    assert np.isinf(cols["a_star"]).any()
    assert np.isfinite(cols["a_star"]).any()


def test_provenance_comes_from_bundle(tables):
    assert summary_path_for(tables["stable"]) is not None
    line = provenance_line(tables["stable"])
    assert "seed 1" in line and "platoonsim" in line
    # a bare table has no bundle, so the footnote falls back to the filename
    assert summary_path_for(tables["ovcurve"]) is None
    assert provenance_line(tables["ovcurve"]) == "source: ovcurve.csv"
