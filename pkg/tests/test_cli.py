import json
import subprocess
import sys

import pytest

from artifact import corpus
from artifact.cli import EXIT_CODES, build_parser
from artifact.complex_core import are_homeomorphic, parse_smc, parse_tpc, to_topological
from artifact.graph_core import graph_isomorphic, parse_graph
from artifact.maps import loads_map, validate


def run(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "artifact", *args], capture_output=True, cwd=cwd)


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    d = tmp_path_factory.mktemp("corpus")
    out = run("corpus", str(d))
    assert out.returncode == 0
    (d / "p3.g").write_text("x y\ny z\nz w\n")
    (d / "bad.g").write_text("x y z\n")
    return d


def test_exit_code_table():
    assert EXIT_CODES == {"EMBEDDABLE": 0, "NOT_EMBEDDABLE": 1, "NO_SPARSE_PROPER_CELLULAR": 1, "UNKNOWN_CAP": 2}


def test_corpus_round_trip(files):
    for name, make in corpus.COMPLEXES.items():
        c = parse_smc((files / f"{name}.smc").read_text())
        assert c.to_text() == make().to_text()
        tpc = files / f"{name}.tpc"
        if name != "three_book":
            assert are_homeomorphic(parse_tpc(tpc.read_text()), to_topological(make()))
        else:
            assert not tpc.exists()
    for name, make in corpus.GRAPHS.items():
        assert graph_isomorphic(parse_graph((files / f"{name.lower()}.g").read_text()), make())


@pytest.mark.parametrize("cx,g,verdict,rc", [("sphere.smc", "k4.g", "EMBEDDABLE", 0),
                                             ("sphere.tpc", "k5.g", "NOT_EMBEDDABLE", 1),
                                             ("three_book.smc", "petersen.g", "EMBEDDABLE", 0),
                                             ("lone_segment.smc", "p3.g", "EMBEDDABLE", 0)])
def test_decide_verdicts(files, cx, g, verdict, rc):
    out = run("decide", "--complex", str(files / cx), "--graph", str(files / g), "--max-states", "20000")
    assert out.returncode == rc
    assert json.loads(out.stdout)["verdict"] == verdict


def test_decide_unknown_cap(files):
    out = run("decide", "--complex", str(files / "torus.smc"), "--graph", str(files / "k5.g"),
              "--sparse-cap", "2", "--max-states", "200")
    d = json.loads(out.stdout)
    assert out.returncode == 2 and d["verdict"] == "UNKNOWN_CAP" and d["cap"] == 2
    assert d["stats"]["max_states"] == 200 and d["stats"]["seed"] == 0


def test_mode_both_records_each_side(files):
    out = run("decide", "--complex", str(files / "torus.smc"), "--graph", str(files / "k5.g"),
              "--sparse-cap", "2", "--max-states", "200", "--mode", "both")
    d = json.loads(out.stdout)
    assert d["stats"]["dp_verdict"] == "UNKNOWN_CAP" and d["stats"]["oracle_verdict"] == "EMBEDDABLE"
    assert d["verdict"] == "EMBEDDABLE" and d["stats"]["decided_by"] == "oracle" and out.returncode == 0


def test_text_format(files):
    out = run("decide", "--complex", str(files / "sphere.smc"), "--graph", str(files / "k33.g"), "--format", "text")
    lines = out.stdout.decode().splitlines()
    assert lines[0] == "verdict\tNOT_EMBEDDABLE" and out.returncode == 1


def test_oracle_certificate(files):
    out = run("oracle", "--complex", str(files / "sphere_with_segment.smc"), "--graph", str(files / "k13.g"),
              "--certificate")
    d = json.loads(out.stdout)
    assert out.returncode == 0 and d["verdict"] == "EMBEDDABLE"
    assert validate(loads_map(d["certificate"])) == []


def test_homeo(files):
    assert run("homeo", str(files / "sphere.smc"), str(files / "octahedron.tpc")).stdout == b"true\n"
    assert run("homeo", str(files / "sphere.smc"), str(files / "torus.smc")).stdout == b"false\n"


def test_cuts(files):
    assert len(run("cuts", str(files / "torus.tpc")).stdout.splitlines()) == 2
    assert len(run("cuts", str(files / "klein_bottle.smc")).stdout.splitlines()) == 6


def test_enumerate(files):
    out = run("enumerate", str(files / "sphere.tpc"), "--k", "1")
    lines = out.stdout.splitlines()
    assert json.loads(lines[-1]) == {"count": 3} and len(lines) == 4
    for line in lines[:-1]:
        assert validate(loads_map(line.decode())) == []


@pytest.mark.parametrize("args", [("decide", "--complex", "missing.smc", "--graph", "k4.g"),
                                  ("decide", "--complex", "sphere.smc", "--graph", "bad.g"),
                                  ("decide", "--complex", "sphere.smc"),
                                  ("decide", "--complex", "sphere.smc", "--graph", "k4.g", "--workers", "0")])
def test_errors_exit_3(files, args):
    out = run(*args, cwd=files)
    assert out.returncode == 3 and out.stderr


DETERMINISM = [
    ("decide", "--complex", "lone_segment.smc", "--graph", "p3.g", "--max-states", "20000"),
    ("decide", "--complex", "lone_segment.smc", "--graph", "p3.g", "--max-states", "20000", "--workers", "2"),
    ("decide", "--complex", "torus.smc", "--graph", "k33.g", "--sparse-cap", "2", "--max-states", "300",
     "--workers", "2", "--mode", "both"),
    ("oracle", "--complex", "sphere_with_segment.smc", "--graph", "k13.g", "--certificate"),
    ("homeo", "sphere.smc", "octahedron.smc"),
    ("cuts", "klein_bottle.smc"),
    ("enumerate", "torus.tpc", "--k", "2"),
]


@pytest.mark.parametrize("args", DETERMINISM, ids=lambda a: "-".join(a[:1] + a[-2:]))
def test_byte_identical_reruns(files, args):
    a, b = run(*args, cwd=files), run(*args, cwd=files)
    assert a.returncode == b.returncode and a.stdout == b.stdout and a.stdout


def test_workers_do_not_change_output(files):
    base = ("decide", "--complex", "lone_segment.smc", "--graph", "p3.g", "--max-states", "20000")
    assert run(*base, cwd=files).stdout == run(*base, "--workers", "2", cwd=files).stdout


def test_corpus_listing_is_stable(tmp_path):
    a, b = run("corpus", str(tmp_path / "a")), run("corpus", str(tmp_path / "b"))
    assert a.stdout.replace(b"/a/", b"/b/") == b.stdout.replace(b"/a/", b"/b/")
    for f in (tmp_path / "a").iterdir():
        assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()


def test_parser_accepts_global_max_states():
    ns = build_parser().parse_args(["--max-states", "5", "cuts", "torus.smc"])
    assert ns.max_states == 5
