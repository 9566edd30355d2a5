"""Command-line surface: outputs, exit codes, determinism."""

import json
import subprocess
import sys

import pytest

from grig.cli import main


def run_cli(*args):
    from io import StringIO
    import contextlib
    out = StringIO()
    with contextlib.redirect_stdout(out):
        code = main(list(args))
    return code, out.getvalue()


def test_reduce():
    code, out = run_cli("reduce", "bcd")
    assert code == 0 and out == "\n"
    code, out = run_cli("reduce", "abab")
    assert out == "abab\n"


def test_equal():
    code, out = run_cli("equal", "abab", "baba")
    assert code == 0 and out == "false\n"
    code, out = run_cli("equal", "t^a", "t!")
    assert code == 0 and out == "true\n"
    code, out = run_cli("equal", "a*a", "1")
    assert out == "true\n"


def test_act():
    code, out = run_cli("act", "abab", "00")
    assert code == 0 and out == "01\n"


def test_sections():
    code, out = run_cli("sections", "b^a")
    payload = json.loads(out)
    assert payload == {"swap": False, "sections": ["c", "a"]}


def test_portrait():
    code, out = run_cli("portrait", "u", "--depth", "1")
    payload = json.loads(out)
    assert payload["activity"] == {"root": False}
    assert payload["boundary"] == {"0": "abab", "1": "1"}


def test_quotient_order_and_table():
    code, out = run_cli("quotient", "--level", "4")
    assert out == "4096\n"
    code, out = run_cli("quotient", "--level", "2", "--table")
    assert out.startswith("level 2\ngenerators")
    code, out2 = run_cli("quotient", "--level", "2", "--table")
    assert out == out2


def test_rank():
    code, out = run_cli("rank", "--subgroup", "K")
    payload = json.loads(out)
    assert payload["certified"] and payload["lower_bound"] == 3


def test_rg_table_formats():
    code, out = run_cli("rg-table", "--chain", "P", "--max", "3",
                        "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == \
        "n,d,index,rg_num,rg_den,log2_d,loglog2_index,ratio,certified"
    code, md = run_cli("rg-table", "--chain", "P", "--max", "3",
                       "--format", "md")
    assert md.startswith("| n |")
    code, js = run_cli("rg-table", "--chain", "P", "--max", "3",
                       "--format", "json")
    rows = json.loads(js)
    assert rows[1]["rg_num"] == 5 and rows[1]["rg_den"] == 4


def test_rigidity_report_command():
    code, out = run_cli("rigidity-report", "--chain", "P", "--max", "4")
    payload = json.loads(out)
    assert payload["D_min"] <= 4
    assert len(payload["rows"]) == 3  # the n=1 row is inadmissible


def test_verify_pass_and_exit_codes():
    code, out = run_cli("verify", "orders", "--level", "4")
    assert code == 0
    assert json.loads(out)["pass"] is True


def test_probe_deterministic():
    code, a = run_cli("probe", "--level", "3", "--samples", "10",
                      "--seed", "3")
    code, b = run_cli("probe", "--level", "3", "--samples", "10",
                      "--seed", "3")
    assert a == b


def test_usage_error_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_parse_error_exit_2(capsys):
    assert main(["equal", "t^", "t"]) == 2
    assert "error:" in capsys.readouterr().err


def test_config_file(tmp_path):
    cfg = tmp_path / "grig.cfg"
    cfg.write_text("# limits\nmax_level = 9\n", encoding="utf-8")
    from grig import config
    try:
        assert main(["--config", str(cfg), "quotient", "--level", "2"]) == 0
        assert config.max_level() == 9
    finally:
        config.set_max_level(None)
    cfg.write_text("unknown_key = 1\n", encoding="utf-8")
    assert main(["--config", str(cfg), "quotient", "--level", "2"]) == 2


def test_env_override(tmp_path):
    script = ("import sys; from grig.cli import main; "
              "sys.exit(main(['quotient', '--level', '11']))")
    bad = subprocess.run([sys.executable, "-c", script],
                         capture_output=True, text=True)
    assert bad.returncode == 2
    import os
    env = dict(os.environ, GRIG_MAX_LEVEL="11")
    ok = subprocess.run([sys.executable, "-c",
                         "from grig.config import max_level; print(max_level())"],
                        capture_output=True, text=True, env=env)
    assert ok.stdout.strip() == "11"


def test_verify_all_exits_zero():
    # the documented one-shot verification entry point
    code, out = run_cli("verify", "all", "--max-m", "8", "--level", "6")
    assert code == 0
    payload = json.loads(out)
    assert payload["pass"] is True and payload["checks"] > 200
