import json

import pytest

from brcodes.cli import main
from brcodes.serialize import unpack_codeword


@pytest.fixture
def codeword(tmp_path):
    path = tmp_path / "cw.brc"
    assert main(["encode", "--bits", "10110011100", "--alpha", "1", "--l", "3", "--m", "6",
                 "-o", str(path)]) == 0
    return path


def test_encode_writes_container(tmp_path, capsys):
    path = tmp_path / "cw.brc"
    assert main(["encode", "--bits", "0" * 11, "--alpha", "1", "--k", "11", "-o", str(path)]) == 0
    box = unpack_codeword(path.read_bytes())
    assert box.params.n == 74 and len(box.bits) == 74
    assert "n=74" in capsys.readouterr().out


def test_break_then_decode(codeword, tmp_path, capsys):
    frags = tmp_path / "f.json"
    assert main(["break", str(codeword), "--t", "1", "--seed", "7", "-o", str(frags)]) == 0
    first = frags.read_text()
    assert main(["break", str(codeword), "--t", "1", "--seed", "7", "-o", str(frags)]) == 0
    assert frags.read_text() == first
    capsys.readouterr()
    report = tmp_path / "r.json"
    assert main(["decode", str(frags), "--report", str(report)]) == 0
    assert capsys.readouterr().out.strip() == "10110011100"
    assert json.loads(report.read_text())["ok"]


def test_hex_and_padding(tmp_path, capsys):
    path = tmp_path / "h.brc"
    assert main(["encode", "--hex", "0x5", "--k", "11", "-o", str(path)]) == 0
    assert unpack_codeword(path.read_bytes()).params.k == 11
    assert main(["encode", "--bits", "1" * 120, "--alpha", "8", "--pad", "-o", str(path)]) == 0
    box = unpack_codeword(path.read_bytes())
    assert (box.params.k, box.pad) == (131, 11)
    frags = tmp_path / "f.json"
    assert main(["break", str(path), "--greedy", "--t", "3", "-o", str(frags)]) == 0
    capsys.readouterr()
    assert main(["decode", str(frags)]) == 0
    assert capsys.readouterr().out.strip() == "1" * 120


def test_decode_failure_exit_code(tmp_path, capsys):
    frags = tmp_path / "empty.json"
    frags.write_text('{"alpha": 1, "l": 3, "m": 6, "fragments": []}')
    assert main(["decode", str(frags)]) == 3
    assert "no MU codewords" in capsys.readouterr().err


def test_error_exit_codes(tmp_path, codeword):
    assert main(["decode", str(tmp_path / "missing.json")]) == 1
    bad = tmp_path / "bad.brc"
    bad.write_bytes(b"nope")
    assert main(["break", str(bad)]) == 1
    assert main(["encode", "--bits", "0101", "--alpha", "1", "--l", "3", "--m", "5",
                 "-o", str(tmp_path / "x")]) == 2
    assert main(["break", str(codeword), "--t", "1", "--s", "5"]) == 2
    assert main([]) == 2


def test_mindim_anchor(capsys):
    assert main(["mindim", "47", "1", "0.12"]) == 0
    assert capsys.readouterr().out.strip() == "17.76"


def test_rate_table(capsys):
    assert main(["rate", "--alphas", "1"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "alpha,l,m,k,n,rate,cpc_bound"
    assert lines[1].startswith("1,3,12,23,")


def test_embed_parse_reversed(tmp_path, capsys):
    layers = tmp_path / "layers.csv"
    assert main(["embed", "--bits", "0110", "--delta", "0.1", "--reverse", "-o", str(layers)]) == 0
    assert main(["parse", str(layers)]) == 0
    assert capsys.readouterr().out.strip() == "0110"
    layers.write_text("thickness_um\n240\n160\n160\n")
    assert main(["parse", str(layers)]) == 3


def test_simulate_small(tmp_path, capsys):
    cfg = tmp_path / "sim.json"
    cfg.write_text(json.dumps({"alphas": [1], "betas": [5], "rhos": [0.0], "k": 47, "trials": 4,
                               "box": [8, 8], "grid": 4}))
    out = tmp_path / "sim.csv"
    assert main(["simulate", "--config", str(cfg), "--quiet", "-o", str(out),
                 "--figure", str(tmp_path / "sim.png")]) == 0
    assert out.read_text().splitlines()[0] == "alpha,beta,rho,trials,successes,rate"
    assert (tmp_path / "sim.png").stat().st_size > 0


def test_report_writes_tables_and_figures(tmp_path, capsys):
    assert main(["report", str(tmp_path / "rep")]) == 0
    for name in ("rate.csv", "rate.png", "mindim.csv", "mindim.png"):
        assert (tmp_path / "rep" / name).stat().st_size > 0


def test_show_field(capsys):
    assert main(["--show-field"]) == 0
    out = capsys.readouterr().out
    assert "GF(2^8 )" in out
