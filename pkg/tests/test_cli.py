"""CLI smoke and golden tests (fresh interpreter per invocation)."""
import json
import subprocess
import sys

GOLDEN_V04 = "2*pi2 + 1/2*L1^2 + 1/2*L2^2 + 1/2*L3^2 + 1/2*L4^2"


def run_cli(*args):
    return subprocess.run([sys.executable, "-m", "wptrees.cli", *args],
                          capture_output=True, text=True)


def test_vol_n4_golden_text():
    out = run_cli("vol", "--n", "4", "--format", "text")
    assert out.returncode == 0
    assert out.stdout.strip() == GOLDEN_V04


def test_trees_count_golden():
    out = run_cli("trees", "--family", "two-three", "--n", "4", "--count")
    assert out.returncode == 0
    assert out.stdout.strip() == "5"


def test_all_methods_print_identical_polynomial():
    outputs = set()
    for method in ("tree", "recursion", "graph-sum", "decomposition"):
        out = run_cli("vol", "--n", "5", "--method", method)
        assert out.returncode == 0
        outputs.add(out.stdout)
    assert len(outputs) == 1


def test_vol_n5_emits_coefficient_note():
    out = run_cli("vol", "--n", "5")
    assert out.returncode == 0
    assert "3*pi2" in out.stderr
    assert "3*pi" in out.stderr


def test_vol_json_round_trips():
    from wptrees.algebra import poly_from_json_terms
    from wptrees.volumes import v0n_reduced

    out = run_cli("vol", "--n", "4", "--format", "json")
    payload = json.loads(out.stdout)
    assert payload["n"] == 4 and payload["method"] == "tree"
    assert poly_from_json_terms(payload["terms"]) == v0n_reduced(4)


def test_vol_latex():
    out = run_cli("vol", "--n", "4", "--format", "latex")
    assert out.stdout.strip() == (
        "2 \\pi^2 + \\frac{1}{2} L_{1}^2 + \\frac{1}{2} L_{2}^2 "
        "+ \\frac{1}{2} L_{3}^2 + \\frac{1}{2} L_{4}^2")


def test_vol_numeric_lengths_exact():
    out = run_cli("vol", "--n", "4", "--lengths", "1,2,3,4")
    assert out.stdout.strip() == "15 + 2*pi2"
    out = run_cli("vol", "--n", "4", "--lengths", "0.5,1,1,1")
    assert out.stdout.strip() == "13/8 + 2*pi2"


def test_htc_assumption_note():
    out = run_cli("htc", "--n", "3")
    assert out.stdout.strip() == "1"
    assert "L1 < L2" in out.stderr
    bad = run_cli("htc", "--n", "3", "--lengths", "2,1,1")
    assert bad.returncode == 2


def test_gf_targets():
    out = run_cli("gf", "--target", "r", "--order", "2")
    assert out.stdout.strip() == "m0 + 1/2*m0*m1 + pi2*m0^2"
    z = run_cli("gf", "--target", "z", "--order", "1", "--format", "json")
    payload = json.loads(z.stdout)
    assert payload["target"] == "z"
    assert all("grade" in term for term in payload["terms"])
    h = run_cli("gf", "--target", "h", "--order", "1")
    assert h.stdout.strip() == "m0"


def test_trees_list_json():
    out = run_cli("trees", "--family", "full", "--n", "4", "--list")
    items = json.loads(out.stdout)
    assert len(items) == 2
    assert all(set(i) == {"t1", "t2", "key", "plane_embeddings"} for i in items)


def test_invalid_inputs_exit_2():
    assert run_cli("vol", "--n", "2").returncode == 2
    assert run_cli("vol", "--n", "4", "--lengths", "1,2,3").returncode == 2
    assert run_cli("vol", "--n", "4", "--lengths", "1,2,x,4").returncode == 2
    assert run_cli("vol", "--n", "4", "--method", "magic").returncode == 2
    assert run_cli("nonsense").returncode == 2


def test_verify_identities_exit_zero():
    out = run_cli("verify", "identities", "--max-n", "4")
    assert out.returncode == 0
    assert "FAIL" not in out.stdout
    assert out.stdout.strip().endswith("0 failing identity check(s)")


def test_verify_mc_small_run():
    out = run_cli("verify", "mc", "--n", "4", "--lengths", "1,2,1,1",
                  "--samples", "20000", "--seed", "1")
    assert out.returncode == 0
    report = json.loads(out.stdout.splitlines()[0])
    assert report["samples"] == 20000
    assert abs(report["z_score"]) < 3


def test_byte_stable_output():
    a = run_cli("vol", "--n", "5", "--format", "json")
    b = run_cli("vol", "--n", "5", "--format", "json")
    assert a.stdout == b.stdout
    c = run_cli("--threads", "3", "verify", "mc", "--n", "4",
                "--lengths", "1,2,1,1", "--samples", "5000", "--seed", "9")
    d = run_cli("--threads", "1", "verify", "mc", "--n", "4",
                "--lengths", "1,2,1,1", "--samples", "5000", "--seed", "9")
    assert c.stdout == d.stdout
