from hybridqc import cli
from hybridqc.errors import ResourceLimitError


def run_cli(*argv):
    return cli.main(list(argv))


class TestGen:
    def test_tm(self, capsys):
        assert run_cli("gen", "tm", "16") == 0
        assert capsys.readouterr().out.strip() == "abbabaabbaababba"

    def test_periodic(self, capsys):
        assert run_cli("gen", "periodic:ab", "6") == 0
        assert capsys.readouterr().out.strip() == "ababab"

    def test_pd(self, capsys):
        assert run_cli("gen", "pd", "8") == 0
        assert capsys.readouterr().out.strip() == "abaaabab"

    def test_to_file(self, tmp_path, capsys):
        out = tmp_path / "word.txt"
        assert run_cli("gen", "fcc", "5", "--output", str(out)) == 0
        assert out.read_text().strip() == "abaab"

    def test_unknown_source(self, capsys):
        assert run_cli("gen", "nope", "4") == 2
        assert "unknown source" in capsys.readouterr().err


class TestMatrix:
    def test_tm(self, capsys):
        assert run_cli("matrix", "tm") == 0
        out = capsys.readouterr().out
        assert "dominant eigenvalue: 2" in out
        assert "pisot: yes" in out

    def test_pd_not_pisot(self, capsys):
        assert run_cli("matrix", "pd") == 0
        out = capsys.readouterr().out
        assert "dominant eigenvalue: 2" in out
        assert "pisot: no" in out

    def test_fcc_golden(self, capsys):
        assert run_cli("matrix", "fcc") == 0
        assert "1.61803398875" in capsys.readouterr().out

    def test_periodic_rejected(self, capsys):
        assert run_cli("matrix", "periodic:ab") == 2


class TestSimulate:
    def test_pure_source_run(self, tmp_path, capsys):
        code = run_cli(
            "simulate", "--parent-a", "tm", "--N", "512", "--T-max", "30",
            "--output", str(tmp_path),
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "beta" in out
        assert (tmp_path / "tm-x-tm-j0-k1.csv").is_file()

    def test_hybrid_run_with_potential_dump(self, tmp_path, capsys):
        pot_csv = tmp_path / "potential.csv"
        code = run_cli(
            "simulate", "--parent-a", "tm", "--parent-b", "fcc", "--kappa", "0.5",
            "--N", "512", "--T-max", "30", "--output", str(tmp_path),
            "--potential-csv", str(pot_csv),
        )
        assert code == 0
        assert pot_csv.read_text().startswith("n,V_n")

    def test_unstable_dt_exits_3(self, tmp_path, capsys):
        code = run_cli(
            "simulate", "--parent-a", "tm", "--N", "512", "--T-max", "30",
            "--dt", "5.0", "--output", str(tmp_path),
        )
        assert code == 3
        assert "reduce dt" in capsys.readouterr().err


class TestSweep:
    def test_config_sweep(self, tmp_path, capsys):
        ini = tmp_path / "exp.ini"
        ini.write_text(
            "[experiment]\n"
            "parent_a = tm\nparent_b = fcc\n"
            "shifts = 0,1\nkappa = 0.5\n"
            "N = 512\nT_max = 30\n"
            f"output_dir = {tmp_path / 'runs'}\n"
        )
        assert run_cli("sweep", "--config", str(ini)) == 0
        out = capsys.readouterr().out
        assert "independent" in out
        assert (tmp_path / "runs" / "summary.csv").is_file()

    def test_needs_exactly_one_mode(self, capsys):
        assert run_cli("sweep") == 2
        assert run_cli("sweep", "--preset", "fig1", "--config", "x.ini") == 2

    def test_wavefront_abort(self, tmp_path, capsys):
        ini = tmp_path / "exp.ini"
        ini.write_text("[experiment]\nN = 256\nT_max = 500\n")
        assert run_cli("sweep", "--config", str(ini)) == 2
        assert "T_max" in capsys.readouterr().err


class TestDiagnose:
    def test_tm_pd_reports_witness(self, capsys):
        code = run_cli("diagnose", "tm", "pd", "--window", "4096", "--max-word-len", "4")
        assert code == 0
        out = capsys.readouterr().out
        assert "(abba, baaa)" in out
        assert "dependent" in out

    def test_tm_fcc_no_witness(self, tmp_path, capsys):
        code = run_cli(
            "diagnose", "tm", "fcc", "--window", "8192", "--max-word-len", "4",
            "--lengths", "2,4", "--output", str(tmp_path / "diag"),
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "no witness" in out
        assert "independent" in out
        for name in ("factors_a.csv", "factors_b.csv", "factors_hybrid.csv"):
            path = tmp_path / "diag" / name
            assert path.is_file()
            assert path.read_text().splitlines()[2] == "n,p_n,eta_hat,score"


class TestAnalyze:
    def test_refit_written_csv(self, tmp_path, capsys):
        run_cli(
            "simulate", "--parent-a", "tm", "--N", "512", "--T-max", "30",
            "--output", str(tmp_path),
        )
        capsys.readouterr()
        code = run_cli("analyze", str(tmp_path / "tm-x-tm-j0-k1.csv"))
        assert code == 0
        assert "beta" in capsys.readouterr().out

    def test_custom_window(self, tmp_path, capsys):
        run_cli(
            "simulate", "--parent-a", "tm", "--N", "512", "--T-max", "30",
            "--output", str(tmp_path),
        )
        capsys.readouterr()
        code = run_cli(
            "analyze", str(tmp_path / "tm-x-tm-j0-k1.csv"), "--t-min", "1", "--t-max", "30"
        )
        assert code == 0

    def test_missing_file(self, capsys):
        assert run_cli("analyze", "/nonexistent.csv") == 2


class TestExitCodes:
    def test_resource_limit_maps_to_4(self, monkeypatch, capsys):
        def boom(spec):
            raise ResourceLimitError("too big")

        monkeypatch.setattr(cli, "resolve_source", boom)
        assert run_cli("gen", "tm", "4") == 4
        assert "too big" in capsys.readouterr().err


def test_respread_kappas_covers_each_run():
    from hybridqc.experiment import ExperimentConfig, RunSpec

    cfg = ExperimentConfig(kappas=(0.2, 0.8))
    runs = [RunSpec("pf", "periodic:aabb", 0, 0.5), RunSpec("pf", "periodic:aaaabbb", 0, 0.5)]
    spread = cli._respread_kappas(runs, cfg)
    assert [(r.parent_b, r.kappa) for r in spread] == [
        ("periodic:aabb", 0.2),
        ("periodic:aabb", 0.8),
        ("periodic:aaaabbb", 0.2),
        ("periodic:aaaabbb", 0.8),
    ]
