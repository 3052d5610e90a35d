"""End-to-end CLI checks: descriptor parsing, config layering, report
artifacts, byte-identical summaries and exit codes."""

import json
import math

import numpy as np
import pytest

from symstab.cli import main
from symstab.descriptors import parse_flux, parse_growth, parse_source
from symstab.operators import (
    ConstantSource,
    FracPowerSource,
    InvalidParameterError,
    MinimalSurfaceFlux,
    PowerFlux,
    PowerGrowth,
    PowerSumFlux,
    StretchedExpFlux,
    ZeroSource,
)
from symstab.presets import build_profile, build_start_field, preset_config


def run_cli(tmp_path, name, *argv):
    out = tmp_path / name
    code = main(list(argv) + ["--out", str(out)])
    summary = None
    if (out / "summary.json").exists():
        summary = json.loads((out / "summary.json").read_text())
    return code, out, summary


# ---------------------------------------------------------------------------
# descriptors


def test_parse_flux_shorthands():
    assert parse_flux("power:2") == PowerFlux(2.0)
    assert parse_flux("power_sum:1,1.5;0.25,3") == PowerSumFlux(
        ((1.0, 1.5), (0.25, 3.0))
    )
    assert parse_flux("minimal_surface") == MinimalSurfaceFlux()
    assert parse_flux("stretched_exp:1,0.5") == StretchedExpFlux(1.0, 0.5)
    # JSON descriptors are accepted wherever shorthands are
    assert parse_flux('{"kind": "power", "p": 3}') == PowerFlux(3.0)


def test_parse_growth_shorthands():
    assert parse_growth("power:1,1") == PowerGrowth(1.0, 1.0)
    assert parse_growth("power:2") == PowerGrowth(1.0, 2.0)
    g = parse_growth("zero_on_interval:0.1,1,2")
    assert g.d == 0.1 and g.exponent == 2.0


def test_parse_source_shorthands():
    assert parse_source("zero") == ZeroSource()
    assert parse_source("constant:3") == ConstantSource(3.0)
    src = parse_source("frac_power:3;36,2;-24,1")
    assert src == FracPowerSource(3, ((36.0, 2), (-24.0, 1)))
    bump = parse_source("plateau_bump:2,3")
    assert bump.p == 2.0 and bump.s == 3.0 and not bump.clamp


@pytest.mark.parametrize(
    "kind,text",
    [
        ("flux", "power"),
        ("flux", "power:1,2"),
        ("flux", "nope:1"),
        ("flux", "power:abc"),
        ("flux", '{"p": 2}'),
        ("growth", "power:1,2,3"),
        ("growth", "nope"),
        ("source", "frac_power:3"),
        ("source", "constant:1,2"),
        ("source", "nope"),
    ],
)
def test_parse_rejects_malformed(kind, text):
    parse = {"flux": parse_flux, "growth": parse_growth, "source": parse_source}[kind]
    with pytest.raises(InvalidParameterError):
        parse(text)


# ---------------------------------------------------------------------------
# presets


def test_preset_lookup_and_builders():
    cfg = preset_config("torsion")
    assert cfg["g"] == "power:2" and cfg["R"] == 1.0
    with pytest.raises(InvalidParameterError):
        preset_config("no-such-preset")
    prof = build_profile(preset_config("rescale-bump"))
    assert prof.dim == 3 and prof.monotone
    assert prof.U[0] == pytest.approx(1.0)
    field = build_start_field(preset_config("torsion"), h=1.0 / 16)
    mid = (field.values.shape[0] - 1) // 2
    assert field.values[mid, mid] == pytest.approx(0.25)


# ---------------------------------------------------------------------------
# subcommand runs


def test_ag_check_member_verdict(tmp_path):
    code, out, summary = run_cli(
        tmp_path, "ag", "ag-check", "--g", "power:2", "--phi", "power:1,1"
    )
    assert code == 0
    assert summary["result"]["status"] == "member"
    assert summary["config"]["g"] == "power:2"
    assert summary["version"]
    assert (out / "data" / "partial_integrals.csv").exists()
    assert (out / "figures" / "partial_integrals.png").exists()


def test_summary_byte_identical_rerun(tmp_path):
    _, out1, _ = run_cli(tmp_path, "r1", "ag-check", "--g", "power:3",
                         "--phi", "power:1,2", "--no-plots")
    _, out2, _ = run_cli(tmp_path, "r2", "ag-check", "--g", "power:3",
                         "--phi", "power:1,2", "--no-plots")
    b1 = (out1 / "summary.json").read_bytes()
    b2 = (out2 / "summary.json").read_bytes()
    assert b1 == b2


def test_ag_check_table_and_worker_merge(tmp_path):
    code, out, summary = run_cli(tmp_path, "t1", "ag-check", "--no-plots")
    assert code == 0
    rows = summary["result"]["rows"]
    assert len(rows) == 12 and summary["result"]["all_ok"]
    # membership flips exactly at q = p - 1
    for row in rows:
        expected = "member" if row["q"] >= row["p"] - 1.0 - 1e-12 else "nonmember"
        assert row["status"] == expected
    code2, out2, _ = run_cli(tmp_path, "t2", "ag-check", "--no-plots",
                             "--workers", "2")
    assert code2 == 0
    assert (out / "data" / "membership_table.csv").read_bytes() == \
        (out2 / "data" / "membership_table.csv").read_bytes()


def test_pohozaev_torsion_near_reference(tmp_path):
    code, out, summary = run_cli(tmp_path, "poho", "pohozaev", "--preset",
                                 "torsion", "--h", "0.015625", "--no-plots")
    assert code == 0
    rep = summary["result"]["pohozaev"]
    ref = -math.pi / 4.0
    assert rep["lhs"] == pytest.approx(ref, abs=0.01)
    assert rep["rhs"] == pytest.approx(ref, abs=0.01)
    assert (out / "data" / "identity.csv").exists()
    assert (out / "data" / "field.csv").exists()


def test_shoot_torsion_profile(tmp_path):
    code, out, summary = run_cli(tmp_path, "sh", "shoot", "--no-plots")
    assert code == 0
    res = summary["result"]
    assert res["center_value"] == pytest.approx(0.25, abs=1e-8)
    assert abs(res["boundary_miss"]) < 1e-10
    assert res["energy"] == pytest.approx(-math.pi / 16.0, rel=1e-5)
    assert (out / "data" / "profile.csv").exists()


def test_second_variation_finds_negative_direction(tmp_path):
    code, _, summary = run_cli(tmp_path, "sv", "second-variation", "--no-plots")
    assert code == 0
    res = summary["result"]
    assert res["found"] and res["Q_star"] < 0.0
    assert all(row["Q5"] < 0.0 for row in res["rows"])


def test_rescale_gaps_negative(tmp_path):
    code, _, summary = run_cli(tmp_path, "rs", "rescale", "--no-plots")
    assert code == 0
    res = summary["result"]
    assert res["all_gaps_negative"]
    assert [row["eps"] for row in res["rows"]] == [0.05, 0.1, 0.2, 0.4]


def test_minimize_torsion_descends(tmp_path):
    code, out, summary = run_cli(tmp_path, "mn", "minimize", "--preset",
                                 "torsion", "--h", "0.0625", "--max-steps",
                                 "12", "--no-plots")
    assert code == 0
    res = summary["result"]
    assert res["strictly_decreasing"]
    assert res["final_energy"] < res["initial_energy"]
    trace = (out / "data" / "trace.csv").read_text().strip().splitlines()
    assert len(trace) == res["step_count"] + 2  # header + initial + steps
    assert (out / "data" / "final_field.csv").exists()


def test_detect_two_mountain_regions(tmp_path):
    code, out, summary = run_cli(tmp_path, "dt", "detect", "--h", "0.06")
    assert code == 0
    regions = summary["result"]["regions"]
    assert len(regions) == 3
    centers = sorted((round(r["center"][0], 1), round(r["center"][1], 1))
                     for r in regions)
    assert centers == [(-2.0, 0.0), (0.0, 0.0), (2.0, 0.0)]
    assert (out / "figures" / "regions.png").exists()


def test_example1_report(tmp_path):
    code, out, summary = run_cli(tmp_path, "ex", "example1", "--h", "0.1",
                                 "--n-tests", "4", "--no-plots")
    assert code == 0
    res = summary["result"]
    assert res["classification"]["case"] == "i"
    assert res["source_landmarks"]["f_at_0"] == pytest.approx(996.0 / 121.0)
    assert res["source_landmarks"]["f_at_2"] == pytest.approx(12.0)
    assert res["strong_residual_max"] < 1e-6
    assert res["weak_residual"]["max"] < 1e-3
    assert max(abs(v) for v in res["interface_mismatch"].values()) < 1e-7


def test_cond_abc_positive_constant_is_trivial(tmp_path):
    code, _, summary = run_cli(tmp_path, "ca", "cond-abc", "--g", "power:2",
                               "--f", "constant:1", "--no-plots")
    assert code == 0
    assert summary["result"]["all_satisfied"]


# ---------------------------------------------------------------------------
# config layering and exit codes


def test_config_file_between_preset_and_flags(tmp_path):
    cfg_file = tmp_path / "cfg.json"
    cfg_file.write_text(json.dumps({"h": 0.125, "N": 4}))
    code, _, summary = run_cli(tmp_path, "pr", "pohozaev", "--preset", "torsion",
                               "--config", str(cfg_file), "--N", "2", "--no-plots")
    assert code == 0
    assert summary["config"]["h"] == 0.125  # config file beats preset
    assert summary["config"]["N"] == 2      # flag beats config file
    assert summary["config"]["R"] == 1.0    # preset survives underneath


def test_exit_codes(tmp_path):
    # invalid descriptor -> 1
    code, _, _ = run_cli(tmp_path, "e1", "ag-check", "--g", "power:0.5",
                         "--phi", "power:1,1")
    assert code == 1
    # unknown config key -> 1
    bad = tmp_path / "bad.json"
    bad.write_text('{"bogus": 1}')
    code, _, _ = run_cli(tmp_path, "e2", "pohozaev", "--config", str(bad))
    assert code == 1
    # unknown flag -> 1 (argparse error mapped)
    assert main(["pohozaev", "--frobnicate"]) == 1
    # one-signed shooting bracket -> 2 with a diagnostic
    code, out, _ = run_cli(tmp_path, "e3", "shoot", "--bracket", "0.26,0.9",
                           "--no-plots")
    assert code == 2
    diag = json.loads((out / "diagnostic.json").read_text())
    assert diag["error"] == "numerical-failure"
    assert diag["config"]["bracket"] == [0.26, 0.9]


def test_no_plots_suppresses_figures(tmp_path):
    _, out, _ = run_cli(tmp_path, "np1", "shoot", "--no-plots")
    assert not (out / "figures").exists()
    _, out2, _ = run_cli(tmp_path, "np2", "shoot")
    assert (out2 / "figures" / "profile.png").exists()
