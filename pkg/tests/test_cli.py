import csv
import json

import pytest

from changepat.aterm import Appl
from changepat.cli import corpus_names, main
from changepat.frontend import ATERM
from changepat.pipeline import ConfigError, RunConfig, analyze, explain_group, run_pipeline
from changepat.weave import Change, ChangeKind, Origin


def run_cli(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def foo(last):
    return Appl("foo", [Appl("x"), Appl("y"), Appl(last)])


def ins(t, path="f.aterm"):
    return Change(ChangeKind.INSERTION, None, t, None, t, Origin(path, "1" * 40, "2" * 40))


class TestConfig:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"tau": 1.5},
            {"tau": -0.1},
            {"tau_sweep": (0.0, 1.0, 0.0)},
            {"tau_sweep": (0.5, 0.2, 0.1)},
            {"side_rule": "middle"},
            {"formats": frozenset({"xml"})},
            {"max_file_bytes": 0},
            {"profile": "cobol"},
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ConfigError):
            RunConfig(**kwargs).validate()

    def test_defaults_are_valid(self):
        cfg = RunConfig()
        cfg.validate()
        assert cfg.tau == 0.9 and cfg.side_rule == "after"


class TestPipeline:
    def test_demo_outputs(self, corpus_repo, tmp_path):
        repo = corpus_repo("demo")
        out = tmp_path / "out"
        report = run_pipeline(RunConfig(repo_path=str(repo), tau=0.5, tau_sweep=(0, 1, 0.01), output_dir=str(out)))
        names = sorted(p.name for p in out.iterdir())
        assert names == sorted(
            ["groups.json", "patterns.txt", "sweep.csv"]
            + [f"{p}_{k}.csv" for p in ("matrix", "boolean") for k in ("insertion", "deletion", "mutation")]
        )
        data = json.loads((out / "groups.json").read_text())
        assert data["total_changes"] == len(report.changes) > 0
        ids = [i for g in data["groups"] for i in g["member_ids"]]
        assert sorted(ids) == sorted(c.ident for c in report.changes)
        assert sum(g["size"] for g in data["groups"]) == data["total_changes"]
        for g in data["groups"]:
            assert set(g) >= {"id", "kind", "tau", "member_origins", "template_aterm", "template_pretty", "substitutions"}
            assert len(g["substitutions"]) == g["size"]
            assert ("other_side_template_aterm" in g) == (g["kind"] == "mutation")
        sizes = [int(line.split("\t")[2]) for line in (out / "patterns.txt").read_text().splitlines()[1:]]
        assert sizes == sorted(sizes, reverse=True)
        rows = list(csv.DictReader((out / "sweep.csv").open()))
        assert len(rows) == 101
        for col in ("insertions", "deletions", "mutations", "total"):
            counts = [int(r[col]) for r in rows]
            assert counts == sorted(counts)

    def test_byte_identical_reruns(self, corpus_repo, tmp_path):
        repo = corpus_repo("demo")
        outputs = []
        for name in ("a", "b"):
            out = tmp_path / name
            run_pipeline(RunConfig(repo_path=str(repo), tau=0.4, tau_sweep=(0, 1, 0.1), output_dir=str(out)))
            outputs.append({p.name: p.read_bytes() for p in out.iterdir()})
        assert outputs[0] == outputs[1]

    def test_empty_range(self, corpus_repo):
        report = run_pipeline(RunConfig(repo_path=str(corpus_repo("demo")), rev_range="HEAD..HEAD"))
        assert report.changes == [] and report.groups == [] and report.pairs == 0

    @pytest.mark.parametrize(
        "tau, sizes, template",
        [
            (0.15, [12], "for (□ = □ ; □ < □ ; □) { □ }"),
            (0.25, [8, 4], "for (□ = 0 ; □ < □ ; □) { □ }"),
            (0.35, [4, 4, 4], "for (□ = 0 ; □ < □.□ ; □) { □ }"),
        ],
    )
    def test_for_loop_progression(self, corpus_repo, tau, sizes, template):
        report = run_pipeline(RunConfig(repo_path=str(corpus_repo("forloops")), tau=tau))
        rows = [line.split("\t") for line in report.patterns_text().splitlines()[1:]]
        assert [int(r[2]) for r in rows] == sizes
        assert template in [r[3] for r in rows]
        if len(sizes) < 3:
            assert rows[0][3] == template

    def test_side_rule_changes_mutation_representative(self):
        before, after = foo("a"), Appl("bar")
        c = Change(ChangeKind.MUTATION, before, after, before, after)
        r_after = analyze([c], 0.5, "after", ATERM)
        r_before = analyze([c], 0.5, "before", ATERM)
        assert r_after.groups[0].template == after and r_after.groups[0].other_template == before
        assert r_before.groups[0].template == before and r_before.groups[0].other_template == after


class TestExplain:
    def test_bindings(self):
        report = analyze([ins(foo("a")), ins(foo("b"))], 0.5, profile=ATERM)
        [g] = report.groups
        text = explain_group(report, g.id)
        assert 'AAppl "foo" [AAppl "x" [], AAppl "y" [], AVar 1]' in text
        assert '□1 ↦ AAppl "a" []' in text and '□1 ↦ AAppl "b" []' in text
        assert "f.aterm" in text

    def test_singleton(self):
        report = analyze([ins(foo("a"))], 0.5, profile=ATERM)
        text = explain_group(report.to_json(), "I1")
        assert "(no bindings)" in text
        assert 'aterm:    AAppl "foo" [AAppl "x" [], AAppl "y" [], AAppl "a" []]' in text

    def test_unknown_id(self):
        report = analyze([ins(foo("a"))], 0.5, profile=ATERM)
        with pytest.raises(KeyError, match="valid ids: I1"):
            explain_group(report, "Z9")


class TestCommandLine:
    def test_run_and_explain(self, corpus_repo, tmp_path, capsys):
        repo = corpus_repo("kvreduce")
        out = tmp_path / "out"
        code, _, err = run_cli(capsys, "run", "--repo", repo, "--tau", "0.35", "--out", out, "--format", "json,text")
        assert code == 0 and "2 changes, 1 groups" in err
        assert sorted(p.name for p in out.iterdir()) == ["groups.json", "patterns.txt"]
        code, text, _ = run_cli(capsys, "explain", out / "groups.json", "D1")
        assert code == 0
        assert "PersistentArrayMap.mini" in text and "PersistentHashMap.mini" in text
        code, _, err = run_cli(capsys, "explain", out / "groups.json", "Q7")
        assert code == 2 and "valid ids: D1" in err

    def test_patterns_to_stdout(self, corpus_repo, capsys):
        code, out, _ = run_cli(capsys, "run", "--repo", corpus_repo("kvreduce"), "--tau", "0.36")
        assert code == 0
        assert out.splitlines()[0] == "# tau=0.36 side_rule=after changes=2 groups=2"

    def test_empty_range_exit_zero(self, corpus_repo, capsys):
        code, _, err = run_cli(capsys, "run", "--repo", corpus_repo("demo"), "--range", "HEAD..HEAD")
        assert code == 0 and "0 changes, 0 groups" in err

    def test_layout_corpus_has_no_changes(self, corpus_repo, capsys):
        code, _, err = run_cli(capsys, "run", "--repo", corpus_repo("layout"))
        assert code == 0 and "2 version pairs, 0 changes" in err

    @pytest.mark.parametrize(
        "argv",
        [
            ["run", "--tau", "2"],
            ["run", "--format", "xml"],
            ["run", "--tau-sweep", "0:1"],
            ["run", "--side-rule", "left"],
            ["run", "--profile", "cobol"],
            ["frobnicate"],
            ["demo", "nonesuch", "x"],
        ],
    )
    def test_configuration_errors_exit_2(self, argv, capsys, tmp_path):
        assert run_cli(capsys, *argv)[0] == 2

    def test_repository_errors_exit_3(self, tmp_path, capsys):
        code, _, err = run_cli(capsys, "run", "--repo", tmp_path)
        assert code == 3 and "not a git repository" in err
        code, _, _ = run_cli(capsys, "make-repo", tmp_path / "missing", tmp_path / "r")
        assert code == 2

    def test_bad_range_exit_3(self, corpus_repo, capsys):
        assert run_cli(capsys, "run", "--repo", corpus_repo("demo"), "--range", "nope")[0] == 3

    def test_demo_and_make_repo(self, tmp_path, capsys):
        assert set(corpus_names()) >= {"demo", "forloops", "kvreduce", "layout"}
        code, out, _ = run_cli(capsys, "demo", "forloops", tmp_path / "loops")
        assert code == 0 and len(out.split()) == 2
        snaps = tmp_path / "snaps"
        (snaps / "001").mkdir(parents=True)
        (snaps / "001" / "a.mini").write_text("x = 1;")
        code, out, _ = run_cli(capsys, "make-repo", snaps, tmp_path / "made")
        assert code == 0 and len(out.split()) == 1

    def test_parse(self, tmp_path, capsys):
        src = tmp_path / "i.mini"
        src.write_text("i++;")
        code, out, _ = run_cli(capsys, "parse", src)
        assert code == 0
        assert out.strip() == (
            'AAppl "CompilationUnit" [AList [AAppl "ExpStmt" [AAppl "PostIncrement" [AAppl "ExpName" '
            '[AAppl "Name" [AAppl "Ident" [AAppl "\\"i\\"" []]]]]]]]'
        )
        src.write_text("i+;")
        assert run_cli(capsys, "parse", src)[0] == 1
