import numpy as np
import pytest

from figplots import PlotJob, build_figure, load_columns, render
from figplots.render import FIG6_STYLES

import matplotlib.pyplot as plt


def write_fig6_csv(path, labels=("0", "0.5", "1/(2+t^2)")):
    lines = ["gamma_label,t,im_a12"]
    for label in labels:
        for t in (-1.0, 0.0, 1.0):
            lines.append(f"{label},{t},{-abs(t)}")
    path.write_text("\n".join(lines) + "\n")


def write_sweep_csv(path):
    lines = ["sweep_value,t,P1,P2,P1rel,P2rel,norm"]
    for v in (0.0, 1.0):
        for t in (-1.0, 0.0, 1.0):
            lines.append(f"{v},{t},0.5,0.5,,,1")
    path.write_text("\n".join(lines) + "\n")


def write_single_csv(path):
    lines = ["t,P1,P2,P1rel,P2rel,norm"]
    for t in (-1.0, 0.0, 1.0):
        lines.append(f"{t},0.4,0.4,0.5,0.5,0.8")
    path.write_text("\n".join(lines) + "\n")


def test_fig6_three_curves_with_style_mapping(tmp_path):
    csv_path = tmp_path / "fig6.csv"
    write_fig6_csv(csv_path)
    fig = build_figure(PlotJob(csv_path, "fig6", tmp_path / "fig6.png"))
    try:
        lines = fig.axes[0].lines
        assert len(lines) == 3
        by_label = {ln.get_label(): ln for ln in lines}
        for key, style in FIG6_STYLES.items():
            ln = by_label[style["label"]]
            assert ln.get_color() == style["color"]
            assert ln.get_linestyle() == style["linestyle"]
    finally:
        plt.close(fig)


def test_fig3_two_panel_layout(tmp_path):
    csv_path = tmp_path / "fig3.csv"
    write_single_csv(csv_path)
    fig = build_figure(PlotJob(csv_path, "fig3", tmp_path / "fig3.png"))
    try:
        assert len(fig.axes) == 2
        assert len(fig.axes[0].lines) == 2  # P1, P2
        assert len(fig.axes[1].lines) == 2  # relative populations
    finally:
        plt.close(fig)


def test_render_writes_image(tmp_path):
    csv_path = tmp_path / "fig1b.csv"
    write_sweep_csv(csv_path)
    out = render(PlotJob(csv_path, "fig1b", tmp_path / "out" / "fig1b.png"))
    assert out.exists() and out.stat().st_size > 0


def test_render_deterministic(tmp_path):
    csv_path = tmp_path / "fig6.csv"
    write_fig6_csv(csv_path)
    a = render(PlotJob(csv_path, "fig6", tmp_path / "a.png"))
    b = render(PlotJob(csv_path, "fig6", tmp_path / "b.png"))
    assert a.read_bytes() == b.read_bytes()


def test_empty_csv_is_error_no_image(tmp_path):
    csv_path = tmp_path / "fig6.csv"
    csv_path.write_text("gamma_label,t,im_a12\n")
    out = tmp_path / "fig6.png"
    with pytest.raises(ValueError, match="empty"):
        render(PlotJob(csv_path, "fig6", out))
    assert not out.exists()
    csv_path.write_text("")
    with pytest.raises(ValueError, match="empty"):
        render(PlotJob(csv_path, "fig6", out))
    assert not out.exists()


def test_schema_mismatch_names_missing_column(tmp_path):
    csv_path = tmp_path / "fig3.csv"
    csv_path.write_text("t,P1,P2,norm\n0,1,0,1\n")
    with pytest.raises(ValueError, match="P1rel"):
        load_columns(csv_path, "fig3")


def test_unknown_figure_id(tmp_path):
    csv_path = tmp_path / "x.csv"
    write_single_csv(csv_path)
    with pytest.raises(ValueError, match="unknown figure id"):
        load_columns(csv_path, "fig9")
