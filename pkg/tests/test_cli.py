import json
import pathlib

import pytest

from rootlab.cli import main
from rootlab.config import (ExperimentConfig, parse_complex, parse_config,
                            parse_region)
from rootlab.errors import ConfigError
from rootlab.regions import Annulus, Box, Disk, Union

PRESETS = pathlib.Path(__file__).resolve().parent.parent / "presets"


def write(tmp_path, text, name="exp.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


WEAKSTAR_CFG = """\
family.kind = powers-unity
measure.kind = circle
k.min = 2
k.max = 5
grid.center = 0
grid.r = 3
grid.n = 16
tolerance = 1e-2
seed = 0
"""


# ---------------------------------------------------------------------------
# config parsing


def test_parse_complex():
    assert parse_complex("1.5") == 1.5
    assert parse_complex("2i") == 2j
    assert parse_complex("-1+0.5i") == -1 + 0.5j
    with pytest.raises(ConfigError):
        parse_complex("nope")


def test_parse_region():
    assert isinstance(parse_region("disk(0.5, 0.25)"), Disk)
    assert isinstance(parse_region("box(-1-1i, 1+1i)"), Box)
    assert isinstance(parse_region("annulus(0, 0.5, 1.5)"), Annulus)
    u = parse_region("union(disk(0, 1); disk(3, 1))")
    assert isinstance(u, Union) and len(u.members) == 2
    with pytest.raises(ConfigError):
        parse_region("sphere(0, 1)")


def test_unknown_keys_rejected(tmp_path):
    with pytest.raises(ConfigError):
        parse_config(write(tmp_path, "family.knid = chebyshev\n"))


def test_duplicate_keys_rejected(tmp_path):
    with pytest.raises(ConfigError):
        parse_config(write(tmp_path, "seed = 1\nseed = 2\n"))


def test_json_config_equivalent(tmp_path):
    text_cfg = parse_config(write(tmp_path, WEAKSTAR_CFG))
    json_cfg = parse_config(write(tmp_path, json.dumps({
        "family.kind": "powers-unity", "measure.kind": "circle",
        "k.min": 2, "k.max": 5, "grid.center": 0, "grid.r": 3,
        "grid.n": 16, "tolerance": 1e-2, "seed": 0}), "exp.json"))
    assert text_cfg.k_range() == json_cfg.k_range()
    assert text_cfg.get_float("tolerance") == json_cfg.get_float("tolerance")


def test_echo_round_trips(tmp_path):
    cfg = parse_config(write(tmp_path, WEAKSTAR_CFG))
    echoed = parse_config(write(tmp_path, cfg.echo_text(), "echo.cfg"))
    assert echoed.raw == cfg.raw
    assert echoed.echo_text() == cfg.echo_text()


# ---------------------------------------------------------------------------
# exit codes


def test_exit_0_on_pass(tmp_path):
    cfg = write(tmp_path, WEAKSTAR_CFG)
    assert main(["weakstar", "--config", cfg,
                 "--out", str(tmp_path / "out")]) == 0


def test_exit_1_on_unexpected_verdict(tmp_path):
    # derivative atoms at the origin never approach the circle
    cfg = write(tmp_path, WEAKSTAR_CFG + "m = 1\ngrid.points = [0.5]\n")
    assert main(["weakstar", "--config", cfg,
                 "--out", str(tmp_path / "o1")]) == 1
    assert main(["weakstar", "--config", cfg, "--expect", "fail",
                 "--out", str(tmp_path / "o2")]) == 0


def test_exit_2_on_config_errors(tmp_path):
    bad = write(tmp_path, "family.knid = chebyshev\n")
    assert main(["weakstar", "--config", bad, "--out", str(tmp_path)]) == 2
    missing = write(tmp_path, "family.kind = powers-unity\n", "m.cfg")
    assert main(["weakstar", "--config", missing,
                 "--out", str(tmp_path)]) == 2
    assert main(["weakstar", "--out", str(tmp_path)]) == 2  # no --config
    assert main(["nonsense", "--out", str(tmp_path)]) == 2


def test_exit_3_on_numeric_failure(tmp_path):
    # a probe point sitting on a root of z^4 - 1 poisons the potential
    cfg = write(tmp_path, """\
family.kind = powers-unity
measure.kind = circle
roots.k = 2
grid.center = 0
grid.r = 3
grid.n = 8
grid.points = [1]
tolerance = 1e-2
seed = 0
""")
    assert main(["discrepancy", "--config", cfg,
                 "--out", str(tmp_path / "o")]) == 3


# ---------------------------------------------------------------------------
# outputs


def test_outputs_and_summary(tmp_path):
    cfg = write(tmp_path, WEAKSTAR_CFG)
    out = tmp_path / "out"
    assert main(["weakstar", "--config", cfg, "--out", str(out)]) == 0
    summary = json.loads((out / "weakstar_summary.json").read_text())
    assert summary["subcommand"] == "weakstar"
    assert summary["verdict"] == "pass"
    assert summary["tolerance"] == 1e-2
    assert summary["tables"] == ["weakstar_table.csv"]
    table = (out / "weakstar_table.csv").read_text().splitlines()
    assert table[0] == "k,n_k,sup_discrepancy,mean_discrepancy"
    assert len(table) == 5
    assert (out / "config_echo.cfg").exists()


def test_reruns_are_byte_identical(tmp_path):
    cfg = write(tmp_path, WEAKSTAR_CFG)
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert main(["weakstar", "--config", cfg, "--out", str(out)]) == 0
        outs.append({p.name: p.read_bytes() for p in out.iterdir()})
    assert outs[0] == outs[1]


def test_roots_csv(tmp_path):
    cfg = write(tmp_path, """\
family.kind = chebyshev
family.schedule = [8]
roots.k = 0
roots.m = 1
seed = 0
""")
    out = tmp_path / "out"
    assert main(["roots", "--config", cfg, "--out", str(out)]) == 0
    lines = (out / "roots.csv").read_text().splitlines()
    assert lines[0] == "re,im,multiplicity"
    assert len(lines) == 8  # the 7 extrema of the degree-8 member
    import math
    got = sorted(float(l.split(",")[0]) for l in lines[1:])
    want = sorted(2.0 * math.cos(j * math.pi / 8) for j in range(1, 8))
    for a, b in zip(got, want):
        assert a == pytest.approx(b, abs=1e-9)


def test_selftest_passes(capsys):
    assert main(["selftest"]) == 0
    assert "selftest: 6/6 passed" in capsys.readouterr().out


def test_presets_parse():
    # every shipped preset must parse cleanly with known keys only
    for preset in sorted(PRESETS.glob("*.cfg")):
        cfg = parse_config(str(preset))
        assert isinstance(cfg, ExperimentConfig)
