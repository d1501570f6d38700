"""Renderer tests against golden scenario CSVs (fixtures under tests/data)."""

from pathlib import Path

import pytest

from homfigs.cli import main
from homfigs.render import ColumnMismatchError, FigureSpec, read_table, render

DATA = Path(__file__).parent / "data"
GOLDEN = ("dip", "maps", "dephasing_summary", "intensities", "dephasing_curve_00")
KINDS = {
    "dip": "curves",
    "maps": "heatmap",
    "dephasing_summary": "sweep",
    "intensities": "intensities",
    "dephasing_curve_00": "curves",
}


def test_read_table_parses_metadata_and_gaps(tmp_path):
    meta, columns, data = read_table(DATA / "dip.csv")
    assert meta is not None and meta["scenario"] == "dip"
    assert columns == ("tau", "r_hat", "g2")
    assert data.shape[1] == 3

    gap = tmp_path / "gap.csv"
    gap.write_text("# {}\ntau,r_hat,g2\n0,1,\n1,0.5,0.25\n", encoding="utf-8")
    _, _, arr = read_table(gap)
    import math

    assert math.isnan(arr[0, 2])
    assert arr[1, 2] == 0.25


@pytest.mark.parametrize("stem", GOLDEN)
def test_golden_csvs_render_without_error(tmp_path, stem):
    spec = FigureSpec(
        input_path=DATA / f"{stem}.csv",
        kind=KINDS[stem],
        out_stem=tmp_path / stem,
    )
    paths = render(spec)
    assert [p.suffix for p in paths] == [".png", ".svg"]
    for p in paths:
        assert p.exists() and p.stat().st_size > 0


@pytest.mark.parametrize("stem", ("dip", "maps", "dephasing_summary"))
def test_reruns_are_pixel_identical(tmp_path, stem):
    spec_a = FigureSpec(DATA / f"{stem}.csv", KINDS[stem], tmp_path / "a" / stem)
    spec_b = FigureSpec(DATA / f"{stem}.csv", KINDS[stem], tmp_path / "b" / stem)
    first = render(spec_a)
    second = render(spec_b)
    for pa, pb in zip(first, second):
        assert pa.read_bytes() == pb.read_bytes(), f"{stem}{pa.suffix} differs between runs"


def test_column_mismatch_names_expected_and_found(tmp_path):
    bad = tmp_path / "dip.csv"
    bad.write_text("tau,rate\n0,1\n", encoding="utf-8")
    spec = FigureSpec(bad, "curves", tmp_path / "out" / "dip")
    with pytest.raises(ColumnMismatchError) as err:
        render(spec)
    message = str(err.value)
    assert "tau,r_hat,g2" in message
    assert "tau,rate" in message


def test_missing_g2_cells_render_as_breaks(tmp_path):
    path = tmp_path / "dip.csv"
    path.write_text(
        "# {}\ntau,r_hat,g2\n0,0,\n0.5,0.2,\n1.0,0.4,0.4\n", encoding="utf-8"
    )
    spec = FigureSpec(path, "curves", tmp_path / "out" / "dip")
    paths = render(spec)
    assert all(p.exists() for p in paths)


def test_cli_renders_directory(tmp_path, capsys):
    rc = main(["--in", str(DATA), "--out", str(tmp_path)])
    out = capsys.readouterr().out
    assert rc == 0
    for stem in GOLDEN:
        assert (tmp_path / f"{stem}.png").exists()
        assert (tmp_path / f"{stem}.svg").exists()
        assert stem in out


def test_cli_single_panel(tmp_path):
    rc = main(["--in", str(DATA), "--out", str(tmp_path), "--panel", "dip"])
    assert rc == 0
    assert (tmp_path / "dip.png").exists()
    assert not (tmp_path / "maps.png").exists()


def test_cli_unknown_panel(tmp_path, capsys):
    rc = main(["--in", str(DATA), "--out", str(tmp_path), "--panel", "nope"])
    assert rc == 2
    assert "nope" in capsys.readouterr().err


def test_cli_column_mismatch_exit_code(tmp_path, capsys):
    src = tmp_path / "in"
    src.mkdir()
    (src / "dip.csv").write_text("tau,wrong\n0,1\n", encoding="utf-8")
    rc = main(["--in", str(src), "--out", str(tmp_path / "out")])
    assert rc == 2
    assert "expected columns" in capsys.readouterr().err


def test_cli_missing_directory(tmp_path, capsys):
    rc = main(["--in", str(tmp_path / "missing"), "--out", str(tmp_path)])
    assert rc == 2
