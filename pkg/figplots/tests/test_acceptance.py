"""Secondary acceptance: render every figure CSV produced by the stalab CLI.

The CSVs are generated through the primary package's command-line
interface (its external surface), with coarse sweep grids to keep the
run short, then rendered panel by panel; fig6 must come out with exactly
the three mapped curves.
"""

import subprocess
import sys

import pytest

import matplotlib.pyplot as plt

from figplots import PlotJob, build_figure, render
from figplots.render import FIG6_STYLES, FIGURE_SCHEMAS

pytest.importorskip("stalab")

SWEEP_GRIDS = {
    "fig1a": "0:10:3", "fig1b": "0:10:3", "fig1c": "0:10:3",
    "fig2a": "0:10:3", "fig2b": "0:10:3", "fig2c": "0:10:3",
    "fig4": "0:1:3",
}


@pytest.fixture(scope="module")
def csv_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("csv")
    for figure in FIGURE_SCHEMAS:
        cmd = [sys.executable, "-m", "stalab", "figure", figure, "--out", str(out)]
        if figure in SWEEP_GRIDS:
            cmd += ["--grid", SWEEP_GRIDS[figure]]
        subprocess.run(cmd, check=True, capture_output=True)
    return out


@pytest.mark.parametrize("figure", sorted(FIGURE_SCHEMAS))
def test_renders_every_figure_csv(figure, csv_dir, tmp_path):
    out = render(PlotJob(csv_dir / f"{figure}.csv", figure, tmp_path / f"{figure}.png"))
    assert out.exists() and out.stat().st_size > 0


def test_fig6_has_three_mapped_curves(csv_dir, tmp_path):
    fig = build_figure(PlotJob(csv_dir / "fig6.csv", "fig6", tmp_path / "fig6.png"))
    try:
        lines = fig.axes[0].lines
        assert len(lines) == 3
        styles = {(ln.get_color(), ln.get_linestyle()) for ln in lines}
        assert styles == {("blue", ":"), ("red", "-"), ("green", "--")}
    finally:
        plt.close(fig)
