import json
import math

import numpy as np
import pytest

from commonbath import cli
from commonbath.numutil import QuadratureError


def write_config(tmp_path, cfg, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def physical_cfg(**extra):
    cfg = {"physical": {"M": 1.0, "eta": 0.25, "Omega": 1.0, "k0": 1.0, "T": 0.5}}
    cfg.update(extra)
    return cfg


def read_rows(path):
    lines = [l for l in path.read_text().splitlines() if not l.startswith("#")]
    header = lines[0].split(",")
    return header, [line.split(",") for line in lines[1:]]


class TestConfigHandling:
    def test_missing_sections_rejected(self, tmp_path, capsys):
        path = write_config(tmp_path, {"sweep": {}})
        assert cli.main(["moments", "--config", path]) == 2
        assert "physical" in capsys.readouterr().err

    def test_both_sections_rejected(self, tmp_path):
        cfg = physical_cfg(dimensionless={"r": 0.1, "A": 0.1})
        path = write_config(tmp_path, cfg)
        assert cli.main(["moments", "--config", path]) == 2

    def test_negative_mass_names_field(self, tmp_path, capsys):
        cfg = physical_cfg()
        cfg["physical"]["M"] = -2.0
        path = write_config(tmp_path, cfg)
        assert cli.main(["moments", "--config", path]) == 2
        assert "M" in capsys.readouterr().err

    def test_malformed_json_reports_location(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text('{"physical": }')
        assert cli.main(["moments", "--config", str(path)]) == 2
        assert "line" in capsys.readouterr().err


class TestMomentsCommand:
    HEADER = "q2_xi,q2_xi_err,p2_xi,p2_xi_err,p2_zeta,p2_zeta_err,q2_zeta"

    def test_header_and_inf_column(self, tmp_path):
        out = tmp_path / "m.csv"
        path = write_config(tmp_path, physical_cfg())
        assert cli.main(["moments", "--config", path, "--out", str(out)]) == 0
        header, rows = read_rows(out)
        assert ",".join(header) == self.HEADER
        assert rows[0][-1] == "inf"
        assert float(rows[0][0]) > 0.0

    def test_natural_units_default(self, tmp_path):
        explicit = physical_cfg()
        explicit["physical"].update({"hbar": 1.0, "kB": 1.0})
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        cli.main(["moments", "--config", write_config(tmp_path, physical_cfg(), "c1.json"),
                  "--out", str(out1)])
        cli.main(["moments", "--config", write_config(tmp_path, explicit, "c2.json"),
                  "--out", str(out2)])
        assert out1.read_bytes() == out2.read_bytes()

    def test_dimensionless_section(self, tmp_path):
        cfg = {"dimensionless": {"r": 0.3, "A": 0.4}}
        out = tmp_path / "m.csv"
        assert cli.main(["moments", "--config", write_config(tmp_path, cfg),
                         "--out", str(out)]) == 0


class TestSweepCommand:
    def test_row_order_and_monotone_slice(self, tmp_path):
        cfg = {"dimensionless": {"r": 0.1, "A": 0.1},
               "sweep": {"r_values": [0.1, 0.3],
                         "A_range": {"min": 0.1, "max": 1.0, "count": 8}}}
        out = tmp_path / "s.csv"
        assert cli.main(["sweep", "--config", write_config(tmp_path, cfg),
                         "--out", str(out)]) == 0
        header, rows = read_rows(out)
        assert header == ["r", "A", "nu_minus", "E_N", "separable"]
        rs = [float(r[0]) for r in rows]
        assert rs == sorted(rs)  # r-major
        slice_01 = [r for r in rows if float(r[0]) == 0.1]
        As = [float(r[1]) for r in slice_01]
        assert As == sorted(As)  # A-ascending
        ENs = [float(r[3]) for r in slice_01]
        assert all(a >= b for a, b in zip(ENs, ENs[1:]))  # nonincreasing in A

    def test_ground_state_column_entangled_at_small_r(self, tmp_path):
        cfg = {"dimensionless": {"r": 0.1, "A": 0.0},
               "sweep": {"r_values": [0.1],
                         "A_range": {"min": 0.0, "max": 0.4, "count": 3}}}
        out = tmp_path / "s.csv"
        assert cli.main(["sweep", "--config", write_config(tmp_path, cfg),
                         "--out", str(out)]) == 0
        _, rows = read_rows(out)
        a0 = [r for r in rows if float(r[1]) == 0.0][0]
        assert math.isfinite(float(a0[3])) and float(a0[3]) > 0.0
        assert a0[4] == "false"

    def test_regulator_check_column(self, tmp_path):
        cfg = {"dimensionless": {"r": 0.2, "A": 0.5},
               "sweep": {"r_values": [0.2],
                         "A_range": {"min": 0.2, "max": 0.6, "count": 2}}}
        out = tmp_path / "s.csv"
        assert cli.main(["sweep", "--config", write_config(tmp_path, cfg),
                         "--out", str(out), "--regulator-check"]) == 0
        header, rows = read_rows(out)
        assert header[-1] == "nu_minus_general"
        for row in rows:
            assert abs(float(row[2]) - float(row[5])) <= 1e-6 * float(row[2])

    def test_paper_convention_flag(self, tmp_path):
        cfg = {"dimensionless": {"r": 0.2, "A": 0.5},
               "sweep": {"r_values": [0.2],
                         "A_range": {"min": 0.2, "max": 0.6, "count": 2}}}
        out_s, out_p = tmp_path / "s.csv", tmp_path / "p.csv"
        path = write_config(tmp_path, cfg)
        cli.main(["sweep", "--config", path, "--out", str(out_s)])
        cli.main(["sweep", "--config", path, "--out", str(out_p),
                  "--convention", "paper"])
        _, rows_s = read_rows(out_s)
        _, rows_p = read_rows(out_p)
        # paper convention shifts E_N up by ln 2 wherever positive
        for rs, rp in zip(rows_s, rows_p):
            if float(rp[3]) > 0.0 and float(rs[3]) > 0.0:
                assert abs(float(rp[3]) - float(rs[3]) - math.log(2.0)) < 1e-10

    def test_failed_point_marks_row(self, tmp_path, monkeypatch):
        def boom(params):
            raise QuadratureError("synthetic failure")
        monkeypatch.setattr(cli, "moments_all", boom)
        cfg = {"dimensionless": {"r": 0.2, "A": 0.5},
               "sweep": {"r_values": [0.2],
                         "A_range": {"min": 0.2, "max": 0.6, "count": 2}}}
        out = tmp_path / "s.csv"
        assert cli.main(["sweep", "--config", write_config(tmp_path, cfg),
                         "--out", str(out)]) == 1
        _, rows = read_rows(out)
        assert all(row[4] == "error" for row in rows)

    def test_bad_sweep_spec_rejected(self, tmp_path):
        cfg = {"dimensionless": {"r": 0.2, "A": 0.5},
               "sweep": {"r_values": [], }}
        assert cli.main(["sweep", "--config", write_config(tmp_path, cfg)]) == 2


class TestDeathCommand:
    def test_death_point_bracketing(self, tmp_path):
        cfg = {"dimensionless": {"r": 0.5, "A": 0.1},
               "death": {"r_values": [0.5], "A_lo": 0.1, "A_hi": 50.0}}
        out = tmp_path / "d.csv"
        assert cli.main(["death", "--config", write_config(tmp_path, cfg),
                         "--out", str(out)]) == 0
        header, rows = read_rows(out)
        assert header == ["r", "A_star", "A_lo", "A_hi", "status"]
        a_star = float(rows[0][1])
        lo, hi = float(rows[0][2]), float(rows[0][3])
        assert rows[0][4] == "ok"
        assert lo <= a_star <= hi
        assert (hi - lo) <= 1.1e-6 * a_star
        # post-check: just-below still entangled, just-above dead
        scale = cli.reference_scale(cfg)
        assert cli._sweep_point(0.5, a_star * 0.99, scale, "standard", False)[3] > 0.0
        assert cli._sweep_point(0.5, a_star * 1.01, scale, "standard", False)[3] == 0.0

    def test_no_entangled_region(self, tmp_path):
        cfg = {"dimensionless": {"r": 0.5, "A": 0.1},
               "death": {"r_values": [0.5], "A_lo": 3.0, "A_hi": 50.0}}
        out = tmp_path / "d.csv"
        assert cli.main(["death", "--config", write_config(tmp_path, cfg),
                         "--out", str(out)]) == 0
        _, rows = read_rows(out)
        assert rows[0][4] == "no_entangled_region"
        assert rows[0][1] == "nan"

    def test_unbracketed_root_errors(self, tmp_path, capsys):
        cfg = {"dimensionless": {"r": 0.1, "A": 0.1},
               "death": {"r_values": [0.1], "A_lo": 0.1, "A_hi": 1.0}}
        assert cli.main(["death", "--config", write_config(tmp_path, cfg)]) == 1
        assert "widen" in capsys.readouterr().err


class TestLangevinCommand:
    CFG = {"physical": {"M": 1.0, "eta": 1.0, "Omega": 0.7853981633974483,
                        "k0": 1.0, "T": 1.0},
           "langevin": {"dt": 0.02, "n_steps": 150, "seed": 7,
                        "noise_mode": "constant_eta", "ensemble": 16,
                        "xi0": 1e6}}

    def test_same_seed_byte_identical(self, tmp_path):
        path = write_config(tmp_path, self.CFG)
        out1, out2 = tmp_path / "l1.csv", tmp_path / "l2.csv"
        assert cli.main(["langevin", "--config", path, "--out", str(out1)]) == 0
        assert cli.main(["langevin", "--config", path, "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_seed_flag_overrides(self, tmp_path):
        path = write_config(tmp_path, self.CFG)
        out1, out2 = tmp_path / "l1.csv", tmp_path / "l2.csv"
        cli.main(["langevin", "--config", path, "--out", str(out1)])
        cli.main(["langevin", "--config", path, "--out", str(out2), "--seed", "99"])
        assert out1.read_bytes() != out2.read_bytes()

    def test_static_far_field_run_all_zero_msd(self, tmp_path):
        cfg = {"physical": self.CFG["physical"],
               "langevin": {"dt": 0.05, "n_steps": 100, "noise_mode": "off",
                            "ensemble": 4, "xi0": 1e6,
                            "include_potential": False}}
        out = tmp_path / "l.csv"
        assert cli.main(["langevin", "--config", write_config(tmp_path, cfg),
                         "--out", str(out)]) == 0
        header, rows = read_rows(out)
        assert header == ["t", "mean_zeta", "msd_zeta", "mean_xi", "msd_xi"]
        for row in rows:
            assert float(row[2]) == 0.0
            assert float(row[4]) == 0.0

    def test_metadata_comments(self, tmp_path):
        path = write_config(tmp_path, self.CFG)
        out = tmp_path / "l.csv"
        cli.main(["langevin", "--config", path, "--out", str(out)])
        text = out.read_text()
        assert "# seed: 7" in text
        assert "# dt: 0.02" in text
        assert "# commit: " in text

    def test_binary_dump_round_trip(self, tmp_path):
        from commonbath import read_stats_binary
        path = write_config(tmp_path, self.CFG)
        out = tmp_path / "l.csv"
        binary = tmp_path / "l.bin"
        cli.main(["langevin", "--config", path, "--out", str(out),
                  "--binary-out", str(binary)])
        data = read_stats_binary(str(binary))
        _, rows = read_rows(out)
        assert len(data["t"]) == len(rows)
        np.testing.assert_allclose(data["msd_zeta"][-1], float(rows[-1][2]),
                                   rtol=1e-15)


class TestDensityCommand:
    def test_grid_output(self, tmp_path):
        cfg = physical_cfg(density={"x1": {"min": -1.0, "max": 1.0, "count": 5},
                                    "x2": 0.0,
                                    "y1": {"min": -1.0, "max": 1.0, "count": 5},
                                    "y2": 0.0})
        out = tmp_path / "d.csv"
        assert cli.main(["density", "--config", write_config(tmp_path, cfg),
                         "--out", str(out)]) == 0
        header, rows = read_rows(out)
        assert header == ["x1", "x2", "y1", "y2", "rho"]
        assert len(rows) == 25
        values = np.array([[float(c) for c in row] for row in rows])
        assert np.all(values[:, 4] > 0.0)
        # hermiticity visible in the table: (x1,y1) and (y1,x1) entries match
        table = {(r[0], r[2]): r[4] for r in values}
        assert table[(1.0, -1.0)] == table[(-1.0, 1.0)]


class TestFigures:
    def test_sweep_figure_rendered(self, tmp_path):
        cfg = {"dimensionless": {"r": 0.2, "A": 0.5},
               "sweep": {"r_values": [0.1, 0.5],
                         "A_range": {"min": 0.1, "max": 1.0, "count": 4}}}
        out = tmp_path / "s.csv"
        fig = tmp_path / "s.png"
        assert cli.main(["sweep", "--config", write_config(tmp_path, cfg),
                         "--out", str(out), "--figure", str(fig)]) == 0
        assert fig.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"

    def test_langevin_figure_rendered(self, tmp_path):
        path = write_config(tmp_path, TestLangevinCommand.CFG)
        out = tmp_path / "l.csv"
        fig = tmp_path / "l.png"
        assert cli.main(["langevin", "--config", path, "--out", str(out),
                         "--figure", str(fig)]) == 0
        assert fig.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
