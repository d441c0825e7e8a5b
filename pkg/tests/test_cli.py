import json

from click.testing import CliRunner

from freefactor.cli import main


def run(*args):
    return CliRunner().invoke(main, list(args))


class TestWordCommands:
    def test_normal_form(self):
        r = run("normal-form", "--vertices", "a,b,c", "--edges", "a-b", "b a b^-1 c")
        assert r.exit_code == 0
        assert r.output.strip() == "a c"

    def test_syl_order(self):
        r = run("syl-order", "--vertices", "a,b,c", "--edges", "a-b", "c a b")
        assert r.exit_code == 0
        assert "c < a" in r.output and "c < b" in r.output

    def test_syl_order_commuting(self):
        r = run("syl-order", "--vertices", "a,b", "--edges", "a-b", "a b")
        assert "(no forced order)" in r.output


class TestGraphCommands:
    def test_fold(self):
        r = run("fold", "--letters", "a,b", "a b a^-1, b b")
        assert r.exit_code == 0
        assert "rank: 2" in r.output

    def test_intersect_trivial(self):
        r = run("intersect", "--letters", "a,b", "a", "a b")
        assert "trivial intersection" in r.output

    def test_meet(self):
        r = run("meet", "--letters", "a,b,c", "a,b", "a, b c")
        assert r.exit_code == 0
        assert "< a >" in r.output

    def test_overlap(self):
        r = run("overlap", "--letters", "a,b,c", "a,b", "a, b c")
        assert "rank 3" in r.output

    def test_complexity_pentagon(self):
        r = run(
            "complexity",
            "--vertices", "a,b,c,d,e",
            "--edges", "a-b,b-c,c-d,d-e,e-a",
        )
        assert r.output.strip() == "6"

    def test_support_graph(self):
        r = run("support-graph", "--vertices", "a,b", "--edges", "a-b")
        assert "ambient rank: 4" in r.output


class TestProjectionCommands:
    def test_farey_dist(self):
        r = run("farey-dist", "1/0", "13/8")
        assert r.output.strip() == "3"

    def test_project_rose(self):
        r = run("project", "--letters", "a,b,c", "--factor", "a,b")
        assert set(r.output.split()) == {"0/1", "1/0"}

    def test_dist_moved_tree(self):
        r = run(
            "dist",
            "--letters", "a,b,c",
            "--factor", "a,b",
            "--marking2", "a a b, a b, c",
        )
        assert r.output.strip() == "2"


class TestSystemCommands:
    def test_verify_fixture(self):
        r = run("verify-system", "overlap-chain-f3")
        assert r.exit_code == 0
        assert r.output.startswith("OK")

    def test_verify_bad_file(self, tmp_path):
        bad = tmp_path / "bad.json"
        from freefactor import serialize as se

        obj = json.loads(se.fixture_path("overlap-chain-f3").read_text())
        obj["generators"][0]["images"][0] = "a a"  # not injective with the rest
        bad.write_text(json.dumps(obj))
        r = run("verify-system", str(bad))
        assert r.exit_code == 1
        assert "FAIL" in r.output

    def test_run_writes_report(self, tmp_path):
        out = tmp_path / "report.json"
        r = run(
            "run",
            "--mode", "farey-crosscheck",
            "--samples", "5",
            "--seed", "3",
            "--out", str(out),
        )
        assert r.exit_code == 0
        report = json.loads(out.read_text())
        assert report["verdict"] == "pass"
        assert report["config"]["seed"] == 3

    def test_run_stdout_verdict_gates_exit(self):
        r = run(
            "run",
            "--mode", "behrstock-scan",
            "--fixture", "overlap-chain-f3",
            "--samples", "4",
        )
        assert r.exit_code == 0
        assert json.loads(r.output)["verdict"] == "pass"
