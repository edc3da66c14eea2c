import io
import json

from reachspe.cli import run
from reachspe.hardness import QbfFormula


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def test_validate(tmp_path):
    assert call("validate", "demo") == (0, "ok\n")
    bad = tmp_path / "bad.json"
    bad.write_text('{"players": 1, "vertices": [{"id": "a", "owner": 1}], "edges": [], "targets": {}}')
    code, text = call("validate", str(bad))
    assert code == 2 and "no outgoing edge" in text


def test_label_trace_table():
    code, text = call("label", "demo", "--trace")
    lines = text.splitlines()
    assert code == 0
    assert lines[2].startswith("l^0 = l^1") and lines[5].startswith("l^5 = l*")
    assert lines[-1] == "local fixpoints: k*_3=0, k*_2=2, k*_1=5"


def test_label_json():
    code, text = call("label", "demo", "--trace", "--format", "json")
    d = json.loads(text)
    assert d["labeling"]["v0@{}"] == 4 and d["labeling"]["v3@{}"] == "inf"
    assert [r["steps"] for r in d["trace"]] == [[0, 1], [2, 3], [4], [5, 6]]
    assert set(d) >= {"answer", "witness", "cost", "trace"}


def test_decide_yes_and_no():
    code, text = call("decide", "demo", "--lower", "0,0", "--upper", "4,4", "--witness")
    assert code == 0
    assert text == "YES\nwitness: stem [] cycle [v0 v1 v6 v7 v2]\ncost: (4, 4)\n"
    code, text = call("decide", "demo", "--lower", "inf,inf", "--upper", "inf,inf")
    assert code == 1 and text.startswith("NO")


def test_decide_json_is_stable(tmp_path):
    args = ("decide", "demo", "--lower", "0,0", "--upper", "4,4", "--format", "json")
    a, b = call(*args), call(*args)
    assert a == b
    d = json.loads(a[1])
    assert d["answer"] == "YES" and d["cost"] == [4, 4]
    assert d["witness"]["cycle"] == ["v0", "v1", "v6", "v7", "v2"]


def test_decide_profile(tmp_path):
    out = tmp_path / "p.json"
    code, _ = call("decide", "demo", "--upper", "4,4", "--profile", str(out))
    assert code == 0 and "punishments" in json.loads(out.read_text())


def test_input_errors(tmp_path):
    assert call("decide", "demo", "--lower", "0")[0] == 2
    assert call("decide", "demo", "--lower", "a,b")[0] == 2
    assert call("decide", str(tmp_path / "missing.json"))[0] == 2
    assert call("frobnicate")[0] == 2


def test_witness_and_profile(tmp_path):
    assert call("witness", "demo", "--cycle", "v0,v1,v6,v7,v2")[0] == 0
    code, text = call("witness", "demo", "--cycle", "v0,v4")
    assert code == 1 and "player 2 at position 0" in text
    assert call("witness", "demo", "--cycle", "v0,v2")[0] == 2
    assert call("profile", "demo", "--check", "-o", str(tmp_path / "p.json"))[0] == 0


def test_qbf_commands(tmp_path):
    f = tmp_path / "f.qdimacs"
    f.write_text(QbfFormula(2, [(1, 2), (1, -2)]).to_qdimacs())
    code, text = call("qbf-check", str(f))
    assert code == 0 and "formula: true" in text and "agree" in text
    game = tmp_path / "g.json"
    code, text = call("qbf-gen", str(f), "-o", str(game), "--emit-query")
    assert code == 0 and text.strip() == "--lower 0,0,0,0 --upper 4,4,6,inf"
    code, _ = call("decide", str(game), "--lower", "0,0,0,0", "--upper", "4,4,6,inf")
    assert code == 0


def test_dot():
    for what in ("arena", "extended", "counter"):
        code, text = call("dot", what, "demo")
        assert code == 0 and text.startswith("digraph")
