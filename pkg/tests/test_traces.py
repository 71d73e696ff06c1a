import io
import os
import subprocess
import sys

import pytest

from dynca import ConfigError
from dynca.cli import main
from dynca.traces import (CSV_HEADER, PROFILES, Trace, TraceParseError,
                          as_links, compatible_engines, format_trace, generate,
                          make_engine, minimize, parse_trace, run)

GOOD = """\
# a comment
make_node 10
add_leaf 10 20
add_leaf 10 30
nca 20 30 = 10
ca 20 30 = 10 20 30
nca 20 20
"""


def test_parse_round_trip():
    tr = parse_trace(GOOD)
    assert tr.n_nodes == 3
    assert [op.kind for op in tr] == ["make_node", "add_leaf", "add_leaf",
                                      "nca", "ca", "nca"]
    # answers are stored densely renumbered, like the ids themselves
    assert tr[3].expected == 0 and tr[3].line == 5
    assert tr[4].expected == (0, 1, 2)
    assert tr[5].expected is None
    back = parse_trace(format_trace(tr))
    assert [op[:4] for op in back] == [op[:4] for op in tr]
    assert back.ext == tr.ext


def test_parse_expected_none():
    tr = parse_trace("make_node 1\nmake_node 2\nnca 1 2 = none\n")
    assert tr[2].expected == "none"


@pytest.mark.parametrize("text,line,col", [
    ("make_node 1\nmake_node 1\n", 2, 11),      # duplicate id
    ("add_leaf 1 2\n", 1, 10),                  # undeclared parent
    ("make_node x\n", 1, 11),                   # not an integer
    ("make_node 1\nnca 1\n", 2, 1),             # missing argument
    ("make_node 1\nfrobnicate 1\n", 2, 1),      # unknown op
    ("make_node 1\nnca 1 1 = 7\n", 2, 11),      # undeclared answer id
    ("add_root 5\n", 1, 1),                     # add_root before any node
    ("make_node 1\nca 1 1 = 1\n", 2, 8),        # ca wants three answer ids
])
def test_parse_errors_carry_position(text, line, col):
    with pytest.raises(TraceParseError) as ei:
        parse_trace(text)
    assert ei.value.line == line
    assert ei.value.col == col


def test_generator_deterministic_and_sized():
    for profile in PROFILES:
        t1 = generate(7, profile, 60, 40)
        t2 = generate(7, profile, 60, 40)
        assert t1 == t2
        queries = sum(1 for op in t1 if op.kind in ("nca", "ca"))
        structural = len(t1) - queries
        assert queries == 40
        assert t1.n_nodes == 60
        # tree profiles grow one node per op; link profiles declare all
        # n nodes up front and then spend n-1 links
        assert structural == (119 if profile.startswith("link") else 60)


def test_generator_profiles_shape():
    t = generate(3, "leaf-heavy", 50, 30)
    kinds = [op.kind for op in t]
    assert kinds[0] == "make_node"
    assert all(k == "add_leaf" for k in kinds[1:50])
    assert all(k in ("nca", "ca") for k in kinds[50:])

    t = generate(3, "root-heavy", 50, 30)
    assert any(op.kind == "add_root" for op in t)
    mut_seen = 0
    for op in t:
        if op.kind in ("nca", "ca"):
            assert mut_seen > 0            # queries interleave, never lead
        else:
            mut_seen += 1

    for profile in ("link-balanced", "link-skewed"):
        t = generate(3, profile, 50, 30)
        roots = set()
        for op in t:
            if op.kind == "make_node":
                roots.add(op.a)
            elif op.kind == "link":
                assert op.b in roots       # only live roots get linked
                roots.remove(op.b)
        assert len(roots) == 1


def test_compatible_engines():
    tree = generate(1, "leaf-heavy", 20, 10)
    assert compatible_engines(tree) == ["oracle", "static", "inc",
                                        "inc-log2", "inc-linear"]
    rooty = generate(1, "root-heavy", 20, 10)
    assert "static" not in compatible_engines(rooty)
    linky = generate(1, "link-balanced", 20, 10)
    assert compatible_engines(linky) == ["oracle", "link"]


def test_run_matches_and_reports():
    tr = generate(11, "leaf-heavy", 100, 200)
    rep = run(tr, ["oracle", "static", "inc"], check=True)
    assert rep.ok
    csv = rep.csv().splitlines()
    assert csv[0] == CSV_HEADER
    assert len(csv) == 4
    assert csv[1].startswith("oracle,100,200,")


def test_run_catches_wrong_expected():
    tr = parse_trace("make_node 1\nadd_leaf 1 2\nnca 1 2 = 2\n")
    rep = run(tr, ["oracle"], check=True)
    assert not rep.ok
    idx, engine, got, want = rep.mismatch
    assert idx == 2 and engine == "oracle"
    assert got == 0 and want == 1


def test_run_without_check_ignores_expected():
    tr = parse_trace("make_node 1\nadd_leaf 1 2\nnca 1 2 = 2\n")
    assert run(tr, ["oracle"], check=False).ok


def test_minimize_finds_short_repro():
    # expected answers poisoned at the tail: the shortest failing prefix
    # must end exactly at the first bad query
    lines = ["make_node 0"]
    lines += [f"add_leaf {i} {i + 1}" for i in range(30)]
    lines.append("nca 0 30 = 0")
    lines.append("nca 1 30 = 30")         # wrong on purpose
    tr = parse_trace("\n".join(lines) + "\n")
    short = minimize(tr, ["oracle"])
    assert len(short) == len(tr)
    assert short[-1].kind == "nca"
    rep = run(short, ["oracle"], check=True)
    assert not rep.ok and rep.mismatch[0] == len(short) - 1


def test_engine_precheck_rejects_links():
    tr = parse_trace("make_node 1\nmake_node 2\nlink 1 2\n")
    with pytest.raises(ConfigError) as ei:
        run(tr, ["inc"])
    assert "does not support link" in str(ei.value)


def test_engine_precheck_hints_link_reduction():
    tr = parse_trace("make_node 1\nadd_leaf 1 2\n")
    with pytest.raises(ConfigError) as ei:
        run(tr, ["link"])
    assert "express growth as link" in str(ei.value)


def test_static_engine_rejects_mutation_after_query():
    tr = parse_trace("make_node 1\nadd_leaf 1 2\nnca 1 2\nadd_leaf 2 3\n")
    with pytest.raises(ConfigError):
        run(tr, ["static"])


def test_as_links_equivalence(rng):
    for profile in ("leaf-heavy", "root-heavy"):
        tr = generate(5, profile, 80, 120)
        linked = as_links(tr)
        assert all(op.kind in ("make_node", "link", "nca", "ca")
                   for op in linked)
        r1 = run(tr, ["oracle"], keep_answers=True)
        r2 = run(linked, ["oracle", "link"], keep_answers=True)
        assert r1.ok and r2.ok
        assert r1.reports[0].answers == r2.reports[0].answers


def test_run_multiple_seeds_all_engines(rng):
    for profile in PROFILES:
        for seed in (1, 2, 3):
            tr = generate(seed, profile, 50, 80)
            assert run(tr, compatible_engines(tr)).ok


def test_capacity_budget_respected():
    tr = generate(1, "leaf-heavy", 40, 5)
    with pytest.raises(Exception) as ei:
        run(tr, ["oracle"], max_n=10)
    assert "capacity" in str(ei.value).lower()


# -- command line ------------------------------------------------------------


def test_cli_gen_and_run_ok(tmp_path, capsys):
    path = tmp_path / "t.trace"
    assert main(["gen", "--profile", "leaf-heavy", "--n", "40", "--m", "60",
                 "--seed", "3", "-o", str(path)]) == 0
    capsys.readouterr()
    assert main(["run", "--engine", "oracle", "--engine", "inc",
                 "--trace", str(path), "--stats", "csv"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == CSV_HEADER
    assert len(out) == 3


def test_cli_gen_stdout(capsys):
    assert main(["gen", "--profile", "link-skewed", "--n", "10", "--m", "5",
                 "--seed", "1", "-o", "-"]) == 0
    text = capsys.readouterr().out
    tr = parse_trace(text)
    assert tr.n_nodes == 10


def test_cli_check_flag_catches_bad_answer(tmp_path, capsys):
    path = tmp_path / "bad.trace"
    path.write_text("make_node 1\nadd_leaf 1 2\nnca 1 2 = 2\n")
    assert main(["run", "--engine", "oracle", "--trace", str(path)]) == 0
    assert main(["run", "--engine", "oracle", "--trace", str(path),
                 "--check"]) == 1
    err = capsys.readouterr().err
    assert "mismatch at op 2" in err


def test_cli_parse_error_is_exit_2(tmp_path, capsys):
    path = tmp_path / "bad.trace"
    path.write_text("make_node 1\nmake_node 1\n")
    assert main(["run", "--engine", "oracle", "--trace", str(path)]) == 2
    assert "trace error" in capsys.readouterr().err


def test_cli_config_error_is_exit_2(tmp_path, capsys):
    path = tmp_path / "links.trace"
    path.write_text("make_node 1\nmake_node 2\nlink 1 2\n")
    assert main(["run", "--engine", "inc", "--trace", str(path)]) == 2
    assert "error" in capsys.readouterr().err


def test_cli_max_n_flag_beats_env(tmp_path, capsys, monkeypatch):
    path = tmp_path / "t.trace"
    main(["gen", "--profile", "leaf-heavy", "--n", "30", "--m", "5",
          "--seed", "1", "-o", str(path)])
    capsys.readouterr()
    monkeypatch.setenv("NCA_MAX_N", "10")
    assert main(["run", "--engine", "oracle", "--trace", str(path)]) == 2
    assert main(["run", "--engine", "oracle", "--trace", str(path),
                 "--max-n", "64"]) == 0
    monkeypatch.setenv("NCA_MAX_N", "bogus")
    assert main(["run", "--engine", "oracle", "--trace", str(path)]) == 2
    assert "NCA_MAX_N" in capsys.readouterr().err


def test_console_script_installed():
    r = subprocess.run([sys.executable, "-m", "dynca.cli", "--help"]
                       if os.environ.get("NO_SCRIPT") else ["dynca", "--help"],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert "run" in r.stdout and "gen" in r.stdout
