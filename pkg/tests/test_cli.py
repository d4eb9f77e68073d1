import json
import subprocess
import sys

from ternclass.cli import EXIT_INVARIANT, EXIT_OK, EXIT_USAGE, main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classnum_text(capsys):
    code, out, _ = run(["classnum", "2 2 295 -1 -1 0"], capsys)
    assert code == EXIT_OK and out.startswith("h = 5")


def test_classnum_json(capsys):
    code, out, _ = run(["classnum", "1 1 25 0 0 0", "--json"], capsys)
    data = json.loads(out)
    assert code == EXIT_OK and data["schema"] == 1 and data["h"] == 2


def test_label_and_genus(capsys):
    code, out, _ = run(["label", "1 1 1 0 0 0"], capsys)
    assert code == EXIT_OK and out.strip() == "<48; 1,1,1,2,2,2,2,2,2>"
    code, out, _ = run(["genus", "[[2,0,-7],[0,2,-7],[-7,-7,343]]", "--json"], capsys)
    assert code == EXIT_OK and json.loads(out)["h"] == 5


def test_descend_fiber_stable(capsys):
    code, out, _ = run(["descend", "1 1 25 0 0 0"], capsys)
    assert code == EXIT_OK and "m=5" in out
    code, out, _ = run(["fiber", "1 1 25 0 0 0", "-p", "5", "--json"], capsys)
    assert code == EXIT_OK and json.loads(out)["size"] == 15
    code, out, _ = run(["stable", "1 1 3 0 0 0"], capsys)
    assert code == EXIT_OK and out.startswith("h = 1")


def test_usage_errors(capsys):
    assert run(["classnum", "1 2 3"], capsys)[0] == EXIT_USAGE
    assert run(["classnum", "1 1 1 1/2 0 0"], capsys)[0] == EXIT_USAGE
    assert run(["classnum", "1 1 -1 0 0 0"], capsys)[0] == EXIT_USAGE
    assert run(["nonsense"], capsys)[0] == EXIT_USAGE
    assert run(["verify"], capsys)[0] == EXIT_USAGE
    assert run(["genus", "1 1 2401 0 0 0", "--bound", "100"], capsys)[0] == EXIT_USAGE


def test_invariant_exit(capsys):
    # force-formula refuses the oracle fallback on an out-of-contract p = 3 step
    code, _, err = run(["classnum", "54 54 1 0 0 -27", "--force-formula"], capsys)
    assert code == EXIT_INVARIANT and "outside" in err
    code, out, _ = run(["classnum", "54 54 1 0 0 -27"], capsys)
    assert code == EXIT_OK and "oracle" in out


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "tc.conf"
    cfg.write_text("# defaults\nsuite = family\nbound = 200000\n")
    code, out, _ = run(["verify", "--config", str(cfg)], capsys)
    assert code == EXIT_OK and out.strip().endswith("2/2 passed")


def test_module_entry():
    r = subprocess.run([sys.executable, "-m", "ternclass", "label", "2 2 2 1 0 1"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("<48;")
