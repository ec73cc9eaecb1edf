import io
import json
import subprocess
import sys

import pytest

from bezoutqe.cli import CliConfig, main, run
from bezoutqe.decide import HYPOTHESIS


def call(command, backend, text=None, **kw):
    out, err = io.StringIO(), io.StringIO()
    code = run(CliConfig(command, backend, text=text, **kw), out, err)
    return code, out.getvalue(), err.getvalue()


def test_qe_example():
    assert call("qe", "z_loc:2", "E x . x*2 = y") == (0, "V[v(2)](y)\n", "")


def test_eval_example():
    assert call("eval", "z", "E x . x*6 = y", module="free:1", params="y=6")[:2] == (0, "true\n")
    assert call("eval", "z", "E x . x*6 = y", module="free:1", params="y=4")[:2] == (0, "false\n")
    code, out, _ = call("eval", "z_loc:2", "E x . x*4 = y", module="cyclic:2^3", params="y=2")
    assert (code, out) == (0, "false\n")


def test_decide_refuses_integers():
    code, out, err = call("decide", "z", "Inv(m = 0 | m = 0) >1")
    assert code == 3 and out == ""
    assert HYPOTHESIS in err


def test_parse_error_exit_code():
    code, _, err = call("qe", "z_loc:2", "E x . x*2 = Y")
    assert code == 2 and "position 12" in err
    assert call("qe", "z_loc:6", "y = 0")[0] == 2
    assert call("eval", "z", "y = 0", params="y")[0] == 2


def test_capability_errors():
    assert call("qe", "z", "E x . x*2 = y")[0] == 3
    assert call("decompose", "z_loc:2", "E x . x*2 = y")[0] == 3


def test_caps_validated():
    with pytest.raises(ValueError):
        CliConfig("qe", "z", text="y = 0", dnf_cap=0)


def test_decompose_json_schema():
    code, out, _ = call("decompose", "z", "E x . x*6 = y", fmt="json")
    assert code == 0
    pieces = json.loads(out)
    assert pieces == [{"guard": {"kind": "whole", "elem": "0"}, "body": "V[v(6)](y)"}]


def test_decide_text_and_json_agree():
    s = "Inv(m*(T^2) = 0 | m*(T) = 0) >1 | Inv(m*(T) = 0 | m = 0) =1"
    code, text, _ = call("decide", "q_poly", s)
    code2, js, _ = call("decide", "q_poly", s, fmt="json")
    assert code == code2 == 0
    payload = json.loads(js)
    assert text.splitlines()[0] == payload["verdict"] == "valid"
    assert json.loads(text.splitlines()[1]) == payload["certificate"]


def test_cs_calculator():
    assert call("cs", "z", "Closed(12) & Open(2)")[1] == "Closed(3)\n"
    assert call("cs", "z", "Closed(2) | Closed(3)")[1] == "Closed(6)\n"
    assert call("cs", "z", "!(Closed(2) | Closed(3))")[1] == "Open(6)\n"
    assert call("cs", "z", "Closed(4) <= Closed(2)")[1] == "true\n"
    assert call("cs", "q_poly", "Closed(T^2+T) - Closed(T)")[1] == "Closed(T + 1)\n"
    assert call("cs", "z", "Closed(2) &")[0] == 2


def test_file_input_with_comments(tmp_path):
    p = tmp_path / "f.pp"
    p.write_text("# projection of a multiple\nE x . x*2 = y  # trailing note\n")
    out, err = io.StringIO(), io.StringIO()
    assert run(CliConfig("qe", "z_loc:2", path=str(p)), out, err) == 0
    assert out.getvalue() == "V[v(2)](y)\n"


def test_seeded_check_is_deterministic():
    a = call("qe", "z_loc:2", "E x . x*4 = y & V[v(8)](x*2 - z)", check=30, seed=5)
    b = call("qe", "z_loc:2", "E x . x*4 = y & V[v(8)](x*2 - z)", check=30, seed=5)
    assert a == b
    assert "agreement 30/30" in a[1]


def test_main_entry_point():
    res = subprocess.run([sys.executable, "-m", "bezoutqe.cli", "qe", "--backend", "z_loc:2",
                          "--formula", "E x . x*2 = y"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "V[v(2)](y)\n"
    assert main(["decide", "--backend", "z", "--sentence", "Inv(m = 0 | m = 0) >1"]) == 3
