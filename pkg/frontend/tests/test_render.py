"""Rendering behavior: the four kinds, determinism, and failure modes."""

import hashlib
from pathlib import Path

import pytest

from udnfig import FigureSpec, MissingSeriesError, RenderError, SchemaError, render
from udnfig.cli import main as cli_main
from udnfig.figspec import series_label

DATA = Path(__file__).parent / "data"

GOLDEN = {
    "sinr_cdf": DATA / "sinr_cdf.csv",
    "tput_vs_isd": DATA / "summary.csv",
    "sched_bars": DATA / "sched.csv",
    "ee_vs_isd": DATA / "ee.csv",
}


def _sha(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


@pytest.mark.parametrize("kind", sorted(GOLDEN))
def test_renders_every_kind_from_golden_csv(kind, tmp_path):
    out = tmp_path / f"{kind}.png"
    got = render(FigureSpec(kind=kind, in_csv=str(GOLDEN[kind]), out_path=str(out)))
    assert got == out
    assert out.is_file()
    assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


@pytest.mark.parametrize("kind", sorted(GOLDEN))
def test_same_csv_twice_is_byte_identical(kind, tmp_path):
    a = tmp_path / "a.png"
    b = tmp_path / "b.png"
    render(FigureSpec(kind=kind, in_csv=str(GOLDEN[kind]), out_path=str(a)))
    render(FigureSpec(kind=kind, in_csv=str(GOLDEN[kind]), out_path=str(b)))
    assert a.read_bytes() == b.read_bytes()


def test_rendering_never_mutates_the_input(tmp_path):
    before = _sha(GOLDEN["sinr_cdf"])
    render(
        FigureSpec(
            kind="sinr_cdf",
            in_csv=str(GOLDEN["sinr_cdf"]),
            out_path=str(tmp_path / "x.png"),
        )
    )
    assert _sha(GOLDEN["sinr_cdf"]) == before


def test_empty_csv_is_an_error_and_writes_no_image(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    out = tmp_path / "never.png"
    with pytest.raises(SchemaError):
        render(FigureSpec(kind="sinr_cdf", in_csv=str(empty), out_path=str(out)))
    assert not out.exists()


def test_missing_column_is_named_and_writes_no_image(tmp_path):
    # strip the cdf column out of the golden file
    lines = GOLDEN["sinr_cdf"].read_text().splitlines()
    broken = tmp_path / "broken.csv"
    broken.write_text(
        "\n".join(
            line if line.startswith("#") else line.rsplit(",", 1)[0]
            for line in lines
        )
        + "\n"
    )
    out = tmp_path / "never.png"
    with pytest.raises(SchemaError, match="cdf"):
        render(FigureSpec(kind="sinr_cdf", in_csv=str(broken), out_path=str(out)))
    assert not out.exists()


def test_non_numeric_cell_is_a_column_level_error(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("isd_m,mean_ue_tput_bps\n200,fast\n")
    with pytest.raises(SchemaError, match="mean_ue_tput_bps"):
        render(
            FigureSpec(
                kind="tput_vs_isd",
                in_csv=str(bad),
                out_path=str(tmp_path / "x.png"),
                series_columns=("isd_m",),
            )
        )


def test_scheduler_figure_requires_both_schedulers(tmp_path):
    lines = GOLDEN["sched_bars"].read_text().splitlines()
    rr_only = tmp_path / "rr_only.csv"
    rr_only.write_text(
        "\n".join(
            line
            for line in lines
            if line.startswith("#") or line.startswith("isd_m") or ",rr," in line
        )
        + "\n"
    )
    out = tmp_path / "never.png"
    with pytest.raises(MissingSeriesError, match="'pf'"):
        render(FigureSpec(kind="sched_bars", in_csv=str(rr_only), out_path=str(out)))
    assert not out.exists()


def test_expected_series_must_be_present(tmp_path):
    out = tmp_path / "never.png"
    with pytest.raises(MissingSeriesError, match="i999"):
        render(
            FigureSpec(
                kind="sinr_cdf",
                in_csv=str(GOLDEN["sinr_cdf"]),
                out_path=str(out),
                expect_series=("i999 d300 ud1 s1 f2 a1 t12",),
            )
        )
    assert not out.exists()


def test_expected_series_present_renders(tmp_path):
    out = tmp_path / "ok.png"
    render(
        FigureSpec(
            kind="sinr_cdf",
            in_csv=str(GOLDEN["sinr_cdf"]),
            out_path=str(out),
            expect_series=("i35 d300 ud1 s1 f2 a1 t12", "i10 d300 ud1 s0 f2 a1 t12"),
        )
    )
    assert out.is_file()


def test_unknown_kind_rejected():
    with pytest.raises(ValueError, match="unknown figure kind"):
        FigureSpec(kind="pie", in_csv="x.csv", out_path="y.png")


def test_series_label_canonical_order():
    cols = (
        "isd_m",
        "ue_density_per_km2",
        "ue_distribution",
        "idle_mode",
        "carrier_ghz",
        "num_bs_antennas",
        "target_edge_snr_db",
    )
    label = series_label(cols, ("35.0", "300.0", "nonuniform", "1", "3.5", "4", "12.0"))
    assert label == "i35 d300 ud1 s1 f3.5 a4 t12"


def test_series_label_appends_letterless_columns():
    assert series_label(("isd_m", "scheduler"), ("150.0", "pf")) == "i150 pf"


# ---------------------------------------------------------------------------
# command line
# ---------------------------------------------------------------------------


def test_cli_happy_path(tmp_path, capsys):
    out = tmp_path / "fig.png"
    rc = cli_main(
        ["--kind", "sched_bars", "--in", str(GOLDEN["sched_bars"]), "--out", str(out)]
    )
    assert rc == 0
    assert out.is_file()
    assert str(out) in capsys.readouterr().out


def test_cli_schema_error_exits_nonzero(tmp_path, capsys):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    out = tmp_path / "never.png"
    rc = cli_main(["--kind", "sinr_cdf", "--in", str(empty), "--out", str(out)])
    assert rc == 1
    assert not out.exists()
    assert "error" in capsys.readouterr().err


def test_cli_missing_expected_series_exits_nonzero(tmp_path, capsys):
    out = tmp_path / "never.png"
    rc = cli_main(
        [
            "--kind",
            "sinr_cdf",
            "--in",
            str(GOLDEN["sinr_cdf"]),
            "--out",
            str(out),
            "--expect",
            "i999 d300 ud1 s1 f2 a1 t12",
        ]
    )
    assert rc == 1
    assert not out.exists()
    assert "i999" in capsys.readouterr().err


def test_cli_bad_kind_exits_2(tmp_path):
    with pytest.raises(SystemExit) as exc:
        cli_main(["--kind", "pie", "--in", "x.csv", "--out", "y.png"])
    assert exc.value.code == 2


def test_cli_series_by_override(tmp_path):
    out = tmp_path / "fig.png"
    rc = cli_main(
        [
            "--kind",
            "tput_vs_isd",
            "--in",
            str(GOLDEN["tput_vs_isd"]),
            "--out",
            str(out),
            "--series-by",
            "carrier_ghz",
        ]
    )
    assert rc == 0
    assert out.is_file()
