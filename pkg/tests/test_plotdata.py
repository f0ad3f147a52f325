"""Tests for plot-ready series files."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from swbeam.errors import InvalidParameterError, MissingColumnError
from swbeam.plotdata import FIT_SAMPLES, emit_plotdata, load_series


def _rand_p_frame(models: tuple[str, ...] = ("sector",)) -> pd.DataFrame:
    rows = []
    for model in models:
        for p, apl, c in [(0.0, 4.0, 0.5), (0.0, 4.0, 0.5), (0.5, 3.0, 0.4), (0.5, 2.0, 0.3)]:
            rows.append(
                {"model": model, "p": p, "apl0": 4.0, "apl": apl, "c0": 0.5, "c": c, "uni_frac": p / 10}
            )
    return pd.DataFrame(rows)


def _region_frame(betas: tuple[float, ...] = (math.nan,)) -> pd.DataFrame:
    rows = []
    for beta in betas:
        for width, d in [(8.0, 11.0), (4.0, 5.5), (16.0, 22.0)]:
            for jitter in (-0.1, 0.1):
                rows.append(
                    {
                        "width": width,
                        "height": width,
                        "beta": beta,
                        "d": d + jitter,
                        "apl0": 2.0 * d,
                        "apl": math.log(d) + 1.0 + jitter,
                        "uni_frac": 0.01,
                    }
                )
    return pd.DataFrame(rows)


class TestRandPFigures:
    def test_ratio_series(self, tmp_path: Path) -> None:
        paths = emit_plotdata(_rand_p_frame(), "fig2a", tmp_path)
        assert [p.name for p in paths] == ["fig2a_L_ratio.dat", "fig2a_C_ratio.dat"]

        ratios = load_series(paths[0])
        assert ratios[:, 0].tolist() == [0.0, 0.5]
        assert ratios[:, 1] == pytest.approx([1.0, 0.625])
        assert ratios[:, 2] == pytest.approx([0.0, 0.176777], rel=1e-5)
        assert paths[0].read_text().splitlines()[0] == "# p L_ratio std"

    def test_models_get_their_own_series(self, tmp_path: Path) -> None:
        paths = emit_plotdata(_rand_p_frame(("sector", "ula")), "fig2b", tmp_path)
        assert [p.name for p in paths] == [
            "fig2b_unidirectional_sector.dat",
            "fig2b_unidirectional_ula.dat",
        ]
        assert load_series(paths[1])[:, 1] == pytest.approx([0.0, 0.05])


class TestRegionFigures:
    def test_growth_and_fit(self, tmp_path: Path) -> None:
        apl_path, fit_path = emit_plotdata(_region_frame(), "fig3", tmp_path)
        table = load_series(apl_path)
        assert table[:, 0] == pytest.approx([5.5, 11.0, 22.0])
        assert table[:, 1] == pytest.approx([math.log(d) + 1.0 for d in (5.5, 11.0, 22.0)], rel=1e-5)

        fit = load_series(fit_path)
        assert len(fit) == FIT_SAMPLES
        assert fit[0, 0] == pytest.approx(5.5, rel=1e-5)
        assert fit[-1, 0] == pytest.approx(22.0, rel=1e-5)
        assert fit[-1, 1] == pytest.approx(math.log(22.0) + 1.0, rel=1e-4)

    def test_series_per_beta(self, tmp_path: Path) -> None:
        paths = emit_plotdata(_region_frame((0.0, 0.2)), "fig5a", tmp_path)
        assert [p.name for p in paths] == [
            "fig5a_apl_reduction_beta0.dat",
            "fig5a_apl_reduction_beta0.2.dat",
        ]
        reduction = load_series(paths[0])
        expected = [
            np.mean([1.0 - (math.log(d) + 1.0 + j) / (2.0 * d) for j in (-0.1, 0.1)])
            for d in (5.5, 11.0, 22.0)
        ]
        assert reduction[:, 1] == pytest.approx(expected, rel=1e-5)

    def test_unidirectional_by_region(self, tmp_path: Path) -> None:
        (path,) = emit_plotdata(_region_frame((0.2,)), "fig5b", tmp_path)
        assert path.name == "fig5b_uni.dat"
        assert load_series(path)[:, 1] == pytest.approx([0.01] * 3)


class TestErrors:
    def test_unknown_figure(self, tmp_path: Path) -> None:
        with pytest.raises(InvalidParameterError, match="fig9"):
            emit_plotdata(_rand_p_frame(), "fig9", tmp_path)

    def test_missing_column(self, tmp_path: Path) -> None:
        frame = _rand_p_frame().drop(columns=["c0"])
        with pytest.raises(MissingColumnError, match="c0"):
            emit_plotdata(frame, "fig2a", tmp_path)

    def test_empty_table(self, tmp_path: Path) -> None:
        with pytest.raises(InvalidParameterError, match="no rows"):
            emit_plotdata(_rand_p_frame().iloc[0:0], "fig2b", tmp_path)

    def test_unreadable_series(self, tmp_path: Path) -> None:
        with pytest.raises(InvalidParameterError, match="plot series"):
            load_series(tmp_path / "absent.dat")
        garbled = tmp_path / "garbled.dat"
        garbled.write_text("# p L_ratio std\n0 1 x\n")
        with pytest.raises(InvalidParameterError, match="plot series"):
            load_series(garbled)
