"""End-to-end command lines through CommandLineApp."""

import io
import os

import pytest

from densesub.cli import app as cli_app
from densesub.cli.app import CommandLineApp, build_parser, parse_params, spec_from_args
from densesub.core.config import ConfigManager
from densesub.core.errors import SpecError
from densesub.core.extraction import Certificate
from densesub.core.file_utils import read_text
from densesub.core.graph import dump_graph, generate, load_graph
from densesub.core.runner import ExperimentRunner
from densesub.core.splitting import Partition


def invoke(*argv):
    stdout, stderr = io.StringIO(), io.StringIO()
    app = CommandLineApp(runner=ExperimentRunner(enable_logging=False))
    code = app.run(list(argv), stdout=stdout, stderr=stderr)
    return code, stdout.getvalue(), stderr.getvalue()


K33 = ("--kind", "complete_bipartite", "--params", "a=3,b=3")


def test_parse_params():
    assert parse_params("n=10, p=0.5") == {"n": "10", "p": "0.5"}
    assert parse_params("") == {}
    with pytest.raises(SpecError):
        parse_params("n")


def test_gen_writes_an_edge_list(workdir):
    code, out, _ = invoke("gen", *K33, "--out", "k33.txt")
    assert code == 0
    assert "Wrote k33.txt" in out
    G = load_graph(read_text("k33.txt"))
    assert (G.n, G.e) == (6, 9)
    assert G.side_a == frozenset({0, 1, 2})


def test_gen_to_stdout(workdir):
    code, out, _ = invoke("gen", "--kind", "gnm", "--params", "n=8,m=5", "--seed", "3")
    assert code == 0
    assert load_graph(out).e == 5


def test_count_bicliques(workdir):
    code, out, _ = invoke("count", *K33, "--t", "2", "--structure", "biclique_tt")
    assert code == 0
    lines = out.splitlines()
    assert lines[1] == "structure,t,n,m,count,bound_num,bound_den,hypotheses_met"
    assert lines[2].startswith("biclique_tt,2,6,9,9,")
    assert "# bound_violations none" in lines


def test_count_all_skips_bipartite_structures_without_sides(workdir):
    code, out, _ = invoke("count", "--kind", "complete", "--params", "n=5", "--t", "2")
    assert code == 0
    assert "cherry_A" not in out
    assert "spider_t,2,5,10" in out


def test_count_c4_needs_a_bipartition(workdir):
    code, _, err = invoke("count", "--kind", "cycle", "--params", "n=4", "--t", "1",
                          "--structure", "c4")
    assert code == 2
    assert err.startswith("Input error:")


def test_goodness_table(workdir):
    code, out, _ = invoke("goodness", *K33, "--t", "2", "--h", "2")
    assert code == 0
    assert "vertex_index,structure_members,good_1,good_2" in out
    assert "0,\"0,1\",1,1" in out


def test_split_writes_the_partition(workdir):
    code, out, _ = invoke("split", *K33, "--t", "2", "--h", "1", "--theta", "1",
                          "--out", "partition.txt")
    assert code == 0
    assert "level,class,structure_id,family_size,theta,pass" in out
    assert Partition.from_text(read_text("partition.txt")).h == 1


def test_split_exhaustion_reports_diagnostics(workdir):
    code, out, err = invoke("split", *K33, "--t", "2", "--r", "2", "--theta", "100",
                            "--max-attempts", "3")
    assert code == 1
    assert "attempt,seed,failing_records,min_family_size,has_top" in out
    assert len(out.strip().splitlines()) == 5
    assert "3 attempt" in err


def test_extract_then_verify(workdir, k12_12_path):
    for seed in range(1, 11):
        code, out, _ = invoke("extract", "--in", k12_12_path, "--t", "2", "--r", "2",
                              "--theta", "2", "--collision", "3", "--seed", str(seed),
                              "--out", "cert.txt")
        if code == 0:
            break
    assert code == 0
    assert "Certified:" in out

    code, out, _ = invoke("verify", "--in", k12_12_path, "--certificate", "cert.txt")
    assert code == 0
    assert out.startswith("Certificate valid")

    honest = Certificate.from_text(read_text("cert.txt"))
    tampered = Certificate(honest.mode, honest.t, honest.r, honest.vertices[:-1], honest.arcs)
    with open("tampered.txt", "w", encoding="ascii") as f:
        f.write(tampered.to_text())
    code, _, err = invoke("verify", "--in", k12_12_path, "--certificate", "tampered.txt")
    assert code == 1
    assert "witness_vertices" in err


def test_extract_failure_exits_one(workdir):
    code, out, err = invoke("extract", "--kind", "empty", "--params", "n=6", "--t", "2",
                            "--r", "2", "--theta", "1")
    assert code == 1
    assert out == ""
    assert "no_top_good_structure" in err


def test_exponent_of_a_family_file(workdir):
    with open("family.txt", "w", encoding="ascii") as f:
        f.write(dump_graph(generate("complete", {"n": 3})))
        f.write("---\n")
        f.write(dump_graph(generate("cycle", {"n": 4})))
    code, out, _ = invoke("exponent", "--in", "family.txt")
    assert code == 0
    assert out.splitlines()[0] == "gamma = 2/3"


def test_exponent_from_degree_and_order(workdir):
    code, out, _ = invoke("exponent", "--params", "d=4,m=5")
    assert code == 0
    assert "gamma = 1/3" in out
    assert out.splitlines()[-1] == "(m-2)/(dm/2-1) = 1/3"


def test_bench_csv(workdir, k12_12_path):
    code, out, _ = invoke("bench", "--in", k12_12_path, "--t", "2", "--r", "2", "--theta", "2",
                          "--collision", "3", "--seeds", "1-3")
    assert code == 0
    lines = out.splitlines()
    assert lines[1].startswith("n,m,t,r,seed,outcome")
    rows = [line for line in lines[2:] if not line.startswith("#")]
    assert [row.split(",")[4] for row in rows] == ["1", "2", "3"]
    assert "# 3 run(s)" in out


def test_bench_without_seeds_is_header_only(workdir, k12_12_path):
    code, out, _ = invoke("bench", "--in", k12_12_path, "--t", "2", "--r", "2", "--theta", "2")
    assert code == 0
    assert len(out.splitlines()) == 2


def test_regularize_failure_exits_one(workdir):
    code, _, err = invoke("regularize", "--kind", "complete_bipartite", "--params", "a=16,b=16")
    assert code == 1
    assert err.startswith("Failed:")


@pytest.mark.parametrize("argv", [
    ("extract", "--kind", "complete", "--params", "n=5", "--t", "1", "--r", "1", "--theta", "1"),
    ("count", "--in", "missing.txt", "--t", "2"),
    ("gen", "--kind", "cycle", "--params", "n"),
    ("bench", *K33, "--t", "2", "--r", "2", "--theta", "1", "--seeds", "5-1"),
    ("teleport",),
    ("count", "--t", "two"),
])
def test_input_errors_exit_two(workdir, argv):
    code, _, _ = invoke(*argv)
    assert code == 2


def test_version_flag_exits_zero(workdir, capsys):
    code, _, _ = invoke("--version")
    assert code == 0
    assert "DenseSub 1.0.0" in capsys.readouterr().out


def test_flag_beats_environment_beats_file(workdir, monkeypatch):
    manager = ConfigManager(path=os.path.join(workdir, "settings.ini"))
    manager.update_config({"threads": 2, "seed": 11})
    monkeypatch.setattr(cli_app, "config_manager", manager)
    parser = build_parser()

    spec = spec_from_args(parser.parse_args(["gen", "--kind", "cycle"]))
    assert (spec.threads, spec.seed) == (2, 11)
    monkeypatch.setenv("DN_THREADS", "5")
    assert spec_from_args(parser.parse_args(["gen", "--kind", "cycle"])).threads == 5
    spec = spec_from_args(parser.parse_args(["gen", "--kind", "cycle", "--threads", "3",
                                             "--seed", "7"]))
    assert (spec.threads, spec.seed) == (3, 7)


def test_main_creates_the_config_file(workdir, monkeypatch):
    manager = ConfigManager(path=os.path.join(workdir, "fresh.ini"))
    monkeypatch.setattr(cli_app, "config_manager", manager)
    monkeypatch.setattr(cli_app, "ExperimentRunner", lambda: ExperimentRunner(enable_logging=False))
    assert cli_app.main(["gen", "--kind", "cycle", "--params", "n=3", "--out", "c3.txt"]) == 0
    assert os.path.exists(manager.path)
    assert load_graph(read_text("c3.txt")).e == 3


def test_cap_flags_and_file_settings(workdir, monkeypatch):
    manager = ConfigManager(path=os.path.join(workdir, "caps.ini"))
    manager.update_config({"cap_matchings": 50, "cap_hst_vertices": 12})
    monkeypatch.setattr(cli_app, "config_manager", manager)
    parser = build_parser()

    spec = spec_from_args(parser.parse_args(["count", "--kind", "cycle", "--t", "2"]))
    assert (spec.cap_matchings, spec.cap_hst_vertices) == (50, 12)
    spec = spec_from_args(parser.parse_args(["count", "--kind", "cycle", "--t", "2",
                                             "--cap-matchings", "7",
                                             "--cap-hst-vertices", "9"]))
    assert (spec.cap_matchings, spec.cap_hst_vertices) == (7, 9)


def test_hst_count_over_the_host_cap_fails(workdir):
    code, _, err = invoke("count", *K33, "--s", "2", "--t", "2", "--structure", "h_st",
                          "--cap-hst-vertices", "5")
    assert code == 1
    assert err.startswith("Failed:")
