"""End-to-end tests of the command line."""

from __future__ import annotations

import io
from pathlib import Path

import pandas as pd
import pytest

from swbeam import __version__
from swbeam.cli import main
from swbeam.metrics import REPORT_COLUMNS
from swbeam.topology import load_topology, meta_path


def _generate(tmp_path: Path, *extra: str) -> Path:
    path = tmp_path / "topo.csv"
    main(
        [
            "--quiet",
            "generate",
            "--nodes",
            "40",
            "--width",
            "3",
            "--seed",
            "11",
            "--connected",
            "--out",
            str(path),
            *extra,
        ]
    )
    return path


def _stdout_frame(capsys: pytest.CaptureFixture[str]) -> pd.DataFrame:
    return pd.read_csv(io.StringIO(capsys.readouterr().out), float_precision="round_trip")


def test_version(capsys: pytest.CaptureFixture[str]) -> None:
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert __version__ in capsys.readouterr().out


class TestGenerate:
    @pytest.mark.parametrize("seed", ["-1", "x"])
    def test_rejects_bad_seed(self, tmp_path: Path, seed: str) -> None:
        argv = ["generate", "--nodes", "10", "--width", "1", "--seed", seed]
        with pytest.raises(SystemExit) as exc:
            main([*argv, "--out", str(tmp_path / "t.csv")])
        assert exc.value.code == 2

    def test_writes_topology_and_sidecar(self, tmp_path: Path) -> None:
        path = _generate(tmp_path)
        topo = load_topology(path)
        assert topo.n_nodes == 40
        assert (topo.width, topo.height) == (3.0, 3.0)
        assert topo.seed is not None and topo.seed >= 11
        assert meta_path(path).exists()

    def test_summary_goes_to_stderr(
        self, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        main(
            [
                "generate",
                "--nodes",
                "5",
                "--width",
                "2",
                "--height",
                "1",
                "--seed",
                "1",
                "--out",
                str(tmp_path / "t.csv"),
            ]
        )
        captured = capsys.readouterr()
        assert captured.out == ""
        assert "mean degree" in captured.err


class TestRandbeam:
    def test_report_on_stdout(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        topo = _generate(tmp_path)
        main(["--quiet", "randbeam", "--topo", str(topo), "--p", "0.3", "--seed", "4"])
        frame = _stdout_frame(capsys)
        assert list(frame.columns) == list(REPORT_COLUMNS)
        assert len(frame) == 1
        assert frame.loc[0, "beamformer_frac"] == 0.3
        assert frame.loc[0, "seed"] == 4

    def test_zero_p_reproduces_baseline(
        self, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        topo = _generate(tmp_path)
        main(["--quiet", "randbeam", "--topo", str(topo), "--p", "0"])
        row = _stdout_frame(capsys).iloc[0]
        assert row["apl"] == row["apl0"]
        assert row["uni_frac"] == 0.0

    def test_same_seed_same_report(self, tmp_path: Path) -> None:
        topo = _generate(tmp_path)
        for name in ("a.csv", "b.csv"):
            main(
                [
                    "--quiet",
                    "randbeam",
                    "--topo",
                    str(topo),
                    "--p",
                    "0.5",
                    "--model",
                    "ula",
                    "--seed",
                    "9",
                    "--out",
                    str(tmp_path / name),
                ]
            )
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_edges_feed_the_metrics_command(
        self, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        topo = _generate(tmp_path)
        edges = tmp_path / "edges.csv"
        main(
            [
                "--quiet",
                "randbeam",
                "--topo",
                str(topo),
                "--p",
                "0.4",
                "--theta",
                "0.4",
                "--edges-out",
                str(edges),
            ]
        )
        direct = _stdout_frame(capsys).iloc[0]
        main(["--quiet", "metrics", "--topo", str(topo), "--edges", str(edges)])
        measured = _stdout_frame(capsys).iloc[0]
        for column in ("apl0", "apl", "c0", "c", "uni_frac", "unreach_frac", "d"):
            assert measured[column] == direct[column]

    def test_fixed_element_count(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        topo = _generate(tmp_path)
        main(
            [
                "--quiet",
                "randbeam",
                "--topo",
                str(topo),
                "--p",
                "0.2",
                "--model",
                "ula",
                "--elements",
                "4",
            ]
        )
        assert _stdout_frame(capsys).loc[0, "model"] == "ula"

    @pytest.mark.parametrize(
        "flags",
        [
            ["--p", "1.5"],
            ["--p", "0.5", "--model", "ula", "--theta", "0.3"],
            ["--p", "0.5", "--elements", "3"],
            ["--p", "0.5", "--gain-pattern-out", "g.csv"],
        ],
    )
    def test_gain_pattern_out(self, tmp_path: Path) -> None:
        topo = _generate(tmp_path)
        pattern = tmp_path / "pattern.csv"
        main(
            [
                "--quiet",
                "randbeam",
                "--topo",
                str(topo),
                "--p",
                "0.2",
                "--model",
                "ula",
                "--elements",
                "3",
                "--out",
                str(tmp_path / "report.csv"),
                "--gain-pattern-out",
                str(pattern),
            ]
        )
        frame = pd.read_csv(pattern)
        assert list(frame.columns) == ["phi", "gain"]
        assert frame["gain"].max() == pytest.approx(3.0)

    def test_summary_shows_node_and_link_fractions(
        self, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        topo = _generate(tmp_path)
        capsys.readouterr()
        main(["randbeam", "--topo", str(topo), "--p", "0.3", "--out", str(tmp_path / "r.csv")])
        err = capsys.readouterr().err
        assert "unidirectional nodes" in err
        assert "long links" in err

    def test_usage_errors(self, tmp_path: Path, flags: list[str]) -> None:
        with pytest.raises(SystemExit) as exc:
            main(["randbeam", "--topo", str(tmp_path / "topo.csv"), *flags])
        assert exc.value.code == 2

    def test_negative_seed_is_a_usage_error(self, tmp_path: Path) -> None:
        topo = _generate(tmp_path)
        for cmd in (["randbeam", "--p", "0.1"], ["wfb"]):
            with pytest.raises(SystemExit) as exc:
                main([*cmd, "--topo", str(topo), "--seed", "-3"])
            assert exc.value.code == 2

    def test_missing_topology_fails(self, tmp_path: Path) -> None:
        with pytest.raises(SystemExit) as exc:
            main(["--quiet", "randbeam", "--topo", str(tmp_path / "absent.csv"), "--p", "0.1"])
        assert exc.value.code == 1


class TestWfb:
    def test_logs_and_report(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        topo = _generate(tmp_path)
        events = tmp_path / "events.csv"
        decisions = tmp_path / "decisions.csv"
        main(
            [
                "--quiet",
                "wfb",
                "--topo",
                str(topo),
                "--seed",
                "2",
                "--beta",
                "0.5",
                "--events-out",
                str(events),
                "--decisions-out",
                str(decisions),
            ]
        )
        row = _stdout_frame(capsys).iloc[0]
        assert row["beta"] == 0.5
        assert row["p"] == row["beamformer_frac"]
        assert events.read_text().startswith("slot,transmitter,")
        assert len(decisions.read_text().splitlines()) == 41

    def test_rank_correlation_row(
        self, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        topo = _generate(tmp_path)
        capsys.readouterr()
        main(
            [
                "wfb",
                "--topo",
                str(topo),
                "--beta",
                "0.3",
                "--rank-correlation",
                "--out",
                str(tmp_path / "r.csv"),
            ]
        )
        err = capsys.readouterr().err
        assert "WFB rank correlation" in err
        assert "long links" in err

    def test_no_rank_correlation_by_default(
        self, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        topo = _generate(tmp_path)
        capsys.readouterr()
        main(["wfb", "--topo", str(topo), "--out", str(tmp_path / "r.csv")])
        assert "rank correlation" not in capsys.readouterr().err


class TestSweep:
    def test_diameter_study_writes_fits(self, tmp_path: Path) -> None:
        config = tmp_path / "diameter.cfg"
        config.write_text("study = diameter\nn_nodes = 20\nwidths = 2.5, 3, 3.5\np = 0.5\n")
        out = tmp_path / "out" / "results.csv"
        main(["--quiet", "sweep", "--config", str(config), "--replicates", "2", "--out", str(out)])

        assert len(pd.read_csv(out)) == 6
        assert (tmp_path / "out" / "results_summary.csv").exists()
        fits = pd.read_csv(tmp_path / "out" / "fit.csv")
        assert fits["study"].tolist()[0] == "diameter_sweep"

    def test_wfb_study_writes_decision_logs(self, tmp_path: Path) -> None:
        config = tmp_path / "wfb.cfg"
        config.write_text("study = wfb\nn_nodes = 25\nwidths = 3\nbetas = 0, 0.3\n")
        decisions = tmp_path / "decisions"
        main(
            [
                "--quiet",
                "--threads",
                "2",
                "sweep",
                "--config",
                str(config),
                "--replicates",
                "1",
                "--out",
                str(tmp_path / "wfb.csv"),
                "--decisions-dir",
                str(decisions),
            ]
        )
        assert sorted(p.name for p in decisions.iterdir()) == [
            "decisions_r0_rep0_beta0.3.csv",
            "decisions_r0_rep0_beta0.csv",
        ]

    def test_plotdata_from_sweep(self, tmp_path: Path) -> None:
        config = tmp_path / "rand.cfg"
        config.write_text("n_nodes = 30\nwidths = 3\np_values = 0, 0.5, 1\n")
        results = tmp_path / "rand.csv"
        main(
            [
                "--quiet",
                "sweep",
                "--study",
                "rand_p",
                "--config",
                str(config),
                "--replicates",
                "1",
                "--out",
                str(results),
            ]
        )
        main(
            [
                "--quiet",
                "plotdata",
                "--results",
                str(results),
                "--figure",
                "fig2a",
                "--out-dir",
                str(tmp_path / "plots"),
            ]
        )
        assert sorted(p.name for p in (tmp_path / "plots").iterdir()) == [
            "fig2a_C_ratio.dat",
            "fig2a_L_ratio.dat",
        ]

    def test_bad_study_fails(self, tmp_path: Path) -> None:
        with pytest.raises(SystemExit) as exc:
            main(["--quiet", "sweep", "--study", "mesh", "--out", str(tmp_path / "x.csv")])
        assert exc.value.code == 1

    def test_negative_threads_is_a_usage_error(self, tmp_path: Path) -> None:
        with pytest.raises(SystemExit) as exc:
            main(["--threads", "-1", "sweep", "--study", "wfb", "--out", str(tmp_path / "x.csv")])
        assert exc.value.code == 2


class TestMetrics:
    def test_summary_shows_node_and_link_fractions(
        self, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        topo = _generate(tmp_path)
        edges = tmp_path / "edges.csv"
        main(["--quiet", "randbeam", "--topo", str(topo), "--p", "0.5", "--edges-out", str(edges)])
        capsys.readouterr()
        main(["metrics", "--topo", str(topo), "--edges", str(edges)])
        captured = capsys.readouterr()
        assert list(pd.read_csv(io.StringIO(captured.out)).columns) == list(REPORT_COLUMNS)
        assert "unidirectional nodes" in captured.err
        assert "long links" in captured.err


class TestReadme:
    readme = Path(__file__).parents[1] / "README.md"

    def test_lists_report_columns_in_order(self) -> None:
        assert ",".join(REPORT_COLUMNS) in self.readme.read_text(encoding="utf-8")

    def test_names_the_sidecar_file(self) -> None:
        text = self.readme.read_text(encoding="utf-8")
        assert meta_path(Path("topo.csv")) == Path("topo.meta")
        assert "`topo.meta`" in text
        assert "topo.csv.meta" not in text

    def test_expands_wfb(self) -> None:
        assert "Wireless Flow Betweenness" in self.readme.read_text(encoding="utf-8")
