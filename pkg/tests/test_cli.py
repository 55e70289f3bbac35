import json
import random
import shutil

import pytest

from itroots.cli import (EXIT_ABSTAIN, EXIT_BUDGET, EXIT_INPUT, EXIT_OK,
                         EXIT_SUITE_FAILED, corpus_path, main)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def corpus(name: str) -> str:
    return str(corpus_path(name))


# ----------------------------------------------------------------- certify

def test_certify_finds_certificate(tmp_path, capsys):
    doc = {"n": 6, "map": [5, 0, 0, 1, 2, 0]}
    p = tmp_path / "f.json"
    p.write_text(json.dumps(doc))
    code, out = run(capsys, "certify", "--input", str(p))
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["case"] == "C1" and payload["x0"] == "0"


def test_certify_abstains_with_reason(capsys):
    code, out = run(capsys, "certify", "--input", corpus("remark3_f.json"))
    assert code == EXIT_ABSTAIN
    payload = json.loads(out)
    assert payload["certificate"] is None
    assert payload["reason"] == "inequality-fails"


def test_certify_pl_c3(capsys):
    code, out = run(capsys, "certify-pl", "--input", corpus("f1.json"))
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["case"] == "C3" and payload["x0"] == "3/4"
    assert payload["evidence"]["fiber2"] == {"kind": "continuum"}


def test_certify_pl_f2(capsys):
    code, out = run(capsys, "certify-pl", "--input", corpus("f2.json"))
    assert code == EXIT_OK
    assert json.loads(out)["x0"] == "1/4"


# --------------------------------------------------------------- find-root

def test_find_root_bundled_witness(capsys):
    code, out = run(capsys, "find-root", "--order", "2",
                    "--input", corpus("remark2_f.json"))
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["status"] == "found"
    assert payload["witness"]["n"] == 9


def test_find_root_none_by_exhaustion(tmp_path, capsys):
    p = tmp_path / "f.json"
    p.write_text(json.dumps({"n": 6, "map": [5, 0, 0, 1, 2, 0]}))
    code, out = run(capsys, "find-root", "--order", "2", "--input", str(p))
    assert code == EXIT_OK
    assert json.loads(out)["status"] == "none"


def test_find_root_budget_exit(tmp_path, capsys):
    p = tmp_path / "f.json"
    p.write_text(json.dumps({"n": 6, "map": [5, 0, 0, 1, 2, 0]}))
    code, out = run(capsys, "find-root", "--order", "2", "--input", str(p),
                    "--budget", "2")
    assert code == EXIT_BUDGET
    assert json.loads(out)["status"] == "budget-exceeded"


def test_find_root_count_all(tmp_path, capsys):
    p = tmp_path / "id.json"
    p.write_text(json.dumps({"n": 2, "map": [0, 1]}))
    code, out = run(capsys, "find-root", "--order", "2", "--input", str(p),
                    "--all")
    assert code == EXIT_OK
    assert json.loads(out)["count"] == 2


# --------------------------------------------------------------- construct

def test_construct_circle_with_trace(tmp_path, capsys):
    trace_path = tmp_path / "trace.json"
    code, out = run(capsys, "construct", "--input", corpus("circle5.json"),
                    "--epsilon", "1/2", "--trace", str(trace_path))
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["certificate"]["case"] == "C3"
    trace = json.loads(trace_path.read_text())
    assert trace["epsilon"] == "1/2"
    assert set(trace) >= {"delta", "partition", "images", "f0", "J", "a",
                          "K", "x0", "x1", "r", "r_prime", "Q", "f",
                          "swapped"}


def test_construct_interval(capsys):
    code, out = run(capsys, "construct", "--input", corpus("f1.json"),
                    "--epsilon", "1/10", "--domain", "interval")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["certificate"]["case"] == "C3"
    # the emitted map re-parses through the owning module's schema
    from itroots import pl_interval as pl
    f = pl.from_json_dict(payload["f"])
    assert any(p.a == 0 and p.lo < p.hi for p in f.pieces)


def test_construct_circle_output_round_trips(capsys):
    from itroots import circle as circ
    code, out = run(capsys, "construct", "--input", corpus("circle5.json"),
                    "--epsilon", "1/2")
    assert code == EXIT_OK
    payload = json.loads(out)
    f = circ.from_json_dict(payload["f"])
    assert f.constant_arcs()


def test_construct_bad_epsilon(capsys):
    code, out = run(capsys, "construct", "--input", corpus("circle5.json"),
                    "--epsilon", "5/4")
    assert code == EXIT_INPUT


# ------------------------------------------------------------ verify-paper

def test_verify_paper_all_pass(capsys):
    code, out = run(capsys, "verify-paper", "--format", "json")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["all_passed"]
    assert len(payload["anchors"]) == 11


def test_verify_paper_missing_file(tmp_path, capsys):
    for name in ("f1.json", "remark2_f.json"):
        shutil.copy(corpus(name), tmp_path / name)
    code, out = run(capsys, "verify-paper", "--corpus-dir", str(tmp_path))
    assert code == EXIT_INPUT
    assert "missing corpus file" in json.loads(out)["error"]


def test_verify_paper_fault_isolation(tmp_path, capsys):
    from itroots.cli import CORPUS_FILES
    for name in CORPUS_FILES:
        shutil.copy(corpus(name), tmp_path / name)
    (tmp_path / "remark4_g.json").write_text("{ not json")
    code, out = run(capsys, "verify-paper", "--corpus-dir", str(tmp_path),
                    "--format", "json")
    assert code == EXIT_SUITE_FAILED
    payload = json.loads(out)
    by_name = {a["name"]: a["passed"] for a in payload["anchors"]}
    assert not by_name["double-ray-square-root"]
    assert not by_name["cube-bound-attained"]  # also reads the corrupted file
    for name, passed in by_name.items():
        if name not in ("double-ray-square-root", "cube-bound-attained"):
            assert passed, name


# ------------------------------------------------------------- export-plot

def test_export_plot_interval(tmp_path, capsys):
    out_path = tmp_path / "f1.svg"
    code, _ = run(capsys, "export-plot", "--input", corpus("f1.json"),
                  "--kind", "interval", "--output", str(out_path))
    assert code == EXIT_OK
    assert out_path.stat().st_size > 0
    assert b"<svg" in out_path.read_bytes()[:300]


def test_export_plot_circle(tmp_path, capsys):
    out_path = tmp_path / "c5.svg"
    code, _ = run(capsys, "export-plot", "--input", corpus("circle5.json"),
                  "--kind", "circle", "--output", str(out_path))
    assert code == EXIT_OK
    assert out_path.stat().st_size > 0


# ------------------------------------------------------------ input errors

@pytest.mark.parametrize("payload", [
    "{ not json",
    '{"n": 3}',
    '{"n": 3, "map": [0, 1, 9]}',
    '{"n": "three", "map": []}',
    '[]',
])
def test_fuzzed_inputs_never_crash(tmp_path, capsys, payload):
    p = tmp_path / "bad.json"
    p.write_text(payload)
    for argv in (["certify", "--input", str(p)],
                 ["find-root", "--order", "2", "--input", str(p)]):
        code, out = run(capsys, *argv)
        assert code == EXIT_INPUT
        doc = json.loads(out)
        assert "error" in doc and "field" in doc


def test_fuzzed_pl_inputs_never_crash(tmp_path, capsys):
    rng = random.Random(99)
    fragments = ['{"pieces": []}', '{"pieces": [{\"lo\": \"0\"}]}',
                 '{"pieces": 3}', '{}', '{"pieces": [{"lo": "0", "hi": "2",'
                 ' "lo_closed": true, "hi_closed": true, "a": "1", "b": "0"}]}']
    for frag in fragments:
        p = tmp_path / "bad.json"
        p.write_text(frag)
        code, out = run(capsys, "certify-pl", "--input", str(p))
        assert code == EXIT_INPUT
        assert "error" in json.loads(out)


def test_missing_file_is_input_error(capsys):
    code, out = run(capsys, "certify", "--input", "/nonexistent/f.json")
    assert code == EXIT_INPUT


def test_json_outputs_round_trip(tmp_path, capsys):
    # witnesses emitted by find-root re-parse through the endofunction schema
    from itroots import endo as endo_mod
    code, out = run(capsys, "find-root", "--order", "2",
                    "--input", corpus("remark2_f.json"))
    payload = json.loads(out)
    witness = endo_mod.from_json_dict(payload["witness"])
    assert witness.size == 9


def test_text_format(capsys):
    code, out = run(capsys, "certify-pl", "--input", corpus("f1.json"),
                    "--format", "text")
    assert code == EXIT_OK
    assert "C3" in out and "3/4" in out
