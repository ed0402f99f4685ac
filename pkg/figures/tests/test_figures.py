import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from scarfigs.fig_ord import main as ord_main
from scarfigs.fig_otoc import main as otoc_main
from scarfigs.fig_page import main as page_main
from scarfigs.fig_s2_plateau_growth import main as plateau_main
from scarfigs.fig_s2_vs_t import main as s2t_main
from scarfigs.io import ColumnError, load_table
from scarfigs.render import FigureSpec, render

CLI = shutil.which("scarcircuit") or [sys.executable, "-m", "scarcircuit"]


def _cli(args):
    cmd = ([CLI] if isinstance(CLI, str) else CLI) + args
    subprocess.run(cmd, check=True)


@pytest.fixture(scope="session")
def csv_dir(tmp_path_factory):
    """Small default-shaped outputs produced through the simulator CLI."""
    root = tmp_path_factory.mktemp("csv")
    _cli(["order-param", "--q", "2", "--t-max", "120",
          "--lambda-grid", "0.25,0.5,1.0", "--out", str(root / "op.csv")])
    _cli(["renyi", "--q", "2", "--L", "8", "--L-grid", "4,6,8", "--t-max", "12",
          "--lambda-grid", "0.2,0.5,0.8", "--out", str(root / "renyi.csv")])
    _cli(["otoc", "--q", "2", "--t-max", "8", "--out", str(root / "otoc_q2.csv")])
    _cli(["otoc", "--q", "3", "--t-max", "8", "--out", str(root / "otoc_q3.csv")])
    return root


def _assert_written(paths, tmp_path):
    for p in paths:
        assert Path(p).exists()
        assert Path(p).stat().st_size > 1000


def test_ord_panel(csv_dir, tmp_path):
    out = tmp_path / "ord.png"
    code = ord_main(["--in", str(csv_dir / "op.csv"),
                     "--in", str(csv_dir / "op_rates.csv"), "--out", str(out)])
    assert code == 0
    _assert_written([tmp_path / "ord.png", tmp_path / "ord.svg"], tmp_path)


def test_s2_vs_t_panel(csv_dir, tmp_path):
    out = tmp_path / "s2.png"
    assert s2t_main(["--in", str(csv_dir / "renyi_s2_vs_t.csv"),
                     "--out", str(out)]) == 0
    _assert_written([tmp_path / "s2.png", tmp_path / "s2.svg"], tmp_path)


def test_plateau_growth_panel(csv_dir, tmp_path):
    out = tmp_path / "pg.png"
    assert plateau_main(["--in", str(csv_dir / "renyi_plateau.csv"),
                         "--in", str(csv_dir / "renyi_growth.csv"),
                         "--out", str(out)]) == 0
    _assert_written([tmp_path / "pg.png", tmp_path / "pg.svg"], tmp_path)


def test_otoc_panel_two_dimensions(csv_dir, tmp_path):
    out = tmp_path / "otoc.png"
    assert otoc_main(["--in", str(csv_dir / "otoc_q2.csv"),
                      "--in", str(csv_dir / "otoc_q3.csv"),
                      "--out", str(out)]) == 0
    _assert_written([tmp_path / "otoc.png", tmp_path / "otoc.svg"], tmp_path)


def test_page_panel(csv_dir, tmp_path):
    out = tmp_path / "page.png"
    assert page_main(["--in", str(csv_dir / "renyi_page.csv"),
                      "--out", str(out)]) == 0
    _assert_written([tmp_path / "page.png", tmp_path / "page.svg"], tmp_path)


def test_dashed_overlays_present(csv_dir, tmp_path):
    # the analytic overlays are dashed lines; SVG encodes them via
    # stroke-dasharray
    out = tmp_path / "otoc.png"
    otoc_main(["--in", str(csv_dir / "otoc_q2.csv"), "--out", str(out)])
    svg = (tmp_path / "otoc.svg").read_text()
    assert "stroke-dasharray" in svg


def test_rendering_is_deterministic(csv_dir, tmp_path):
    a, b = tmp_path / "a.png", tmp_path / "b.png"
    page_main(["--in", str(csv_dir / "renyi_page.csv"), "--out", str(a)])
    page_main(["--in", str(csv_dir / "renyi_page.csv"), "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()


def test_empty_body_is_an_error(tmp_path):
    bad = tmp_path / "empty.csv"
    bad.write_text("# header=1\nlambda,t,S2\n")
    assert s2t_main(["--in", str(bad), "--out", str(tmp_path / "x.png")]) == 1
    assert not (tmp_path / "x.png").exists()


def test_missing_column_is_an_error(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("lambda,t,entropy\n0.5,1,0.2\n")
    assert s2t_main(["--in", str(bad), "--out", str(tmp_path / "y.png")]) == 1
    with pytest.raises(ColumnError) as err:
        load_table(bad).require("S2")
    assert "S2" in str(err.value)


def test_spec_validates_figure_id(tmp_path):
    with pytest.raises(ValueError):
        FigureSpec(figure_id="nope", input_paths=[], output_image_path="x.png")


def test_json_mirror_input(csv_dir, tmp_path):
    _cli(["otoc", "--q", "2", "--t-max", "5", "--format", "json",
          "--out", str(tmp_path / "otoc.json")])
    spec = FigureSpec(
        figure_id="otoc",
        input_paths=[str(tmp_path / "otoc.json")],
        output_image_path=str(tmp_path / "oj.png"),
    )
    written = render(spec)
    assert len(written) == 2
