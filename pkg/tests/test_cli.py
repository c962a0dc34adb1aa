import re
import subprocess
import sys

import pytest

from dendrite_ifs.cli import main
from dendrite_ifs.dendrite import read_edge_list


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


def test_c_digits(capsys):
    code, out, _ = run(capsys, "c-digits", "--count", "6")
    assert code == 0 and out.strip() == "110200"


def test_c_digits_file_mode(capsys, tmp_path):
    path = tmp_path / "c.txt"
    path.write_text("0.110200220020222\n")
    code, out, _ = run(capsys, "c-digits", "--count", "15", "--mode", "file", str(path))
    assert code == 0 and out.strip() == "110200220020222"
    code, _, err = run(capsys, "c-digits", "--count", "16", "--mode", "file", str(path))
    assert code == 64


def test_c_digits_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "c-digits", "--count", "3", "--mode", "file", str(tmp_path / "nope.txt"))
    assert code == 64 and "digit file not found" in err


def test_c_digits_bad_file(capsys, tmp_path):
    path = tmp_path / "c.txt"
    path.write_text("1201")
    code, _, err = run(capsys, "c-digits", "--count", "3", "--mode", "file", str(path))
    assert code == 64 and "bad digit file" in err


def test_verify_separation(capsys):
    code, out, _ = run(capsys, "verify", "separation", "--depth", "4")
    assert code == 0
    assert re.search(r"separation: pass \(depth 4, 120 items", out)


def test_verify_negative_control(capsys):
    code, out, _ = run(capsys, "verify", "separation", "--depth", "3", "--h", "1/3")
    assert code == 1
    assert "witness: margin 1\n" in out


@pytest.mark.parametrize(
    "argv, message",
    [
        (["verify", "separation", "--depth", "0"], "positive integer"),
        (["verify", "separation", "--h", "0.2"], "malformed rational"),
        (["verify", "separation", "--h", "2/0"], "malformed rational"),
        (["verify", "bogus"], "invalid choice"),
        (["verify", "separation", "--h", "3/2"], "0 < h < 1"),
        (["verify", "onepoint", "--depth", "1"], ">= 2"),
        (["verify", "all", "--precision-start", "500", "--precision-cap", "100"], "precision"),
        (["verify", "separation", "--mode", "sideways"], "--mode"),
    ],
)
def test_usage_errors(capsys, argv, message):
    code, _, err = run(capsys, *argv)
    assert code == 64
    assert message in err


def test_verify_writes_report(capsys, tmp_path):
    path = tmp_path / "r.jsonl"
    code, _, _ = run(capsys, "verify", "osc", "--depth", "1", "--report", str(path))
    assert code == 0
    lines = path.read_text().splitlines()
    assert lines[0] == '{"format": "dendrite-ifs-report", "version": 1}'
    assert len(lines) == 2


def test_render_depth1_with_overlays(capsys, tmp_path):
    out = tmp_path / "s.svg"
    code, _, _ = run(capsys, "render", "--depth", "1", "--out", str(out), "--overlay", "D", "delta", "--delta-depth", "0")
    assert code == 0
    svg = out.read_text()
    assert svg.count('class="cell"') == 4
    assert svg.count('data-name="D"') == 1
    assert svg.count('data-name="delta"') == 1


def test_render_depth0(capsys, tmp_path):
    out = tmp_path / "s.svg"
    code, stdout, _ = run(capsys, "render", "--depth", "0", "--out", str(out))
    assert code == 0 and "wrote 1 cells" in stdout
    assert out.read_text().count("<polygon") == 1


def test_render_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    run(capsys, "render", "--depth", "2", "--out", str(a), "--overlay", "D", "delta", "segment", "labels")
    run(capsys, "render", "--depth", "2", "--out", str(b), "--overlay", "D", "delta", "segment", "labels")
    assert a.read_bytes() == b.read_bytes()


def test_graph(capsys, tmp_path):
    out = tmp_path / "g.txt"
    code, stdout, _ = run(capsys, "graph", "--depth", "1", "--out", str(out))
    assert code == 0
    assert read_edge_list(out) == [("0", "1"), ("1", "2"), ("1", "h")]
    assert "3 edges over 4 cells" in stdout


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "dendrite_ifs", "c-digits", "--count", "12"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "110200022022"
