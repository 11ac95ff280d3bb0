import json

import pytest

from uageom.cli import main

S2_VARIETY = {
    "signature": [{"name": "meet", "arity": 2}],
    "algebras": [{"name": "S2", "size": 2, "ops": {"meet": [[0, 0], [0, 1]]}}],
}

S2_WITH_TRIVIAL = {
    "signature": [{"name": "meet", "arity": 2}],
    "algebras": [
        {"name": "S2", "size": 2, "ops": {"meet": [[0, 0], [0, 1]]}},
        {"name": "T1", "size": 1, "ops": {"meet": [[0]]}},
    ],
}

LEFT_ZERO_CORPUS = {
    "signature": [{"name": "meet", "arity": 2}],
    "algebras": [{"name": "LZ", "size": 2, "ops": {"meet": [[0, 0], [1, 1]]}}],
}

IDENTITY_WORDS = {"words": {"meet": "meet(x1,x2)"}}
PROJECTION_WORDS = {"words": {"meet": "x1"}}


@pytest.fixture
def files(tmp_path):
    def write(name, doc):
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return str(path)

    return write, tmp_path


def run(argv):
    return main(argv)


class TestFree:
    def test_rank2_dump(self, files, capsys):
        write, _ = files
        variety = write("v.json", S2_VARIETY)
        assert run(["free", "--variety", variety, "--rank", "2"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["size"] == 3
        assert [e["witness"] for e in doc["elements"]] == ["x1", "x2", "meet(x1,x2)"]

    def test_rank1_singleton(self, files, capsys):
        write, _ = files
        variety = write("v.json", S2_VARIETY)
        assert run(["free", "--variety", variety, "--rank", "1"]) == 0
        assert json.loads(capsys.readouterr().out)["size"] == 1

    def test_bad_json_is_input_error(self, files, capsys):
        _, tmp = files
        bad = tmp / "bad.json"
        bad.write_text("{nope")
        assert run(["free", "--variety", str(bad), "--rank", "1"]) == 3

    def test_cap_exceeded_is_input_error(self, files):
        write, _ = files
        variety = write("v.json", S2_VARIETY)
        assert run(["free", "--variety", variety, "--rank", "8", "--cap", "10"]) == 3


class TestLattice:
    def test_dot_output(self, files, capsys):
        write, _ = files
        variety = write("v.json", S2_VARIETY)
        assert (
            run(["lattice", "--variety", variety, "--rank", "2", "--format", "dot"])
            == 0
        )
        dot = capsys.readouterr().out
        assert dot.count("label=") == 4

    def test_trivial_single_node(self, files, capsys):
        write, _ = files
        variety = write("v.json", S2_VARIETY)
        corpus = write("c.json", S2_WITH_TRIVIAL)
        assert (
            run(
                [
                    "lattice",
                    "--variety", variety,
                    "--algebras", corpus,
                    "--names", "T1",
                    "--rank", "2",
                ]
            )
            == 0
        )
        doc = json.loads(capsys.readouterr().out)
        assert len(doc["congruences"]) == 1

    def test_unknown_name(self, files):
        write, _ = files
        variety = write("v.json", S2_VARIETY)
        assert (
            run(["lattice", "--variety", variety, "--names", "nope", "--rank", "1"])
            == 3
        )


class TestCheckWords:
    def test_identity_passes(self, files, capsys):
        write, _ = files
        variety = write("v.json", S2_VARIETY)
        words = write("w.json", IDENTITY_WORDS)
        assert run(["check-words", "--variety", variety, "--words", words]) == 0
        assert json.loads(capsys.readouterr().out)["verdict"] == "pass"

    def test_projection_fails_with_stage(self, files, capsys):
        write, _ = files
        variety = write("v.json", S2_VARIETY)
        words = write("w.json", PROJECTION_WORDS)
        assert run(["check-words", "--variety", variety, "--words", words]) == 1
        doc = json.loads(capsys.readouterr().out)
        assert doc["stage"] == "membership"
        assert doc["failed_rank"] == 2


class TestGeomEq:
    def test_refuted_pair(self, files, capsys):
        write, _ = files
        variety = write("v.json", S2_VARIETY)
        corpus = write("c.json", S2_WITH_TRIVIAL)
        code = run(
            ["geom-eq", "--variety", variety, "--algebras", corpus, "--names", "S2,T1"]
        )
        assert code == 1
        doc = json.loads(capsys.readouterr().out)
        assert doc["verdict"] == "refuted-at-bounds"
        assert doc["evidence"]["witness"]["encoding"] == "0|1|2"

    def test_reflexive_pair(self, files, capsys):
        write, _ = files
        variety = write("v.json", S2_VARIETY)
        corpus = write("c.json", S2_WITH_TRIVIAL)
        code = run(
            ["geom-eq", "--variety", variety, "--algebras", corpus, "--names", "S2,S2"]
        )
        assert code == 0
        assert json.loads(capsys.readouterr().out)["verdict"] == "geometric"


class TestAutoEq:
    def test_self_pair_identity_certificate(self, files, capsys):
        write, _ = files
        variety = write("v.json", S2_VARIETY)
        corpus = write("c.json", S2_WITH_TRIVIAL)
        code = run(
            ["auto-eq", "--variety", variety, "--algebras", corpus, "--names", "S2,S2"]
        )
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["verdict"] == "automorphic"
        assert doc["word_system"] == {"meet": "meet(x1,x2)"}

    def test_trivial_pair_refuted(self, files, capsys):
        write, _ = files
        variety = write("v.json", S2_VARIETY)
        corpus = write("c.json", S2_WITH_TRIVIAL)
        code = run(
            ["auto-eq", "--variety", variety, "--algebras", corpus, "--names", "S2,T1"]
        )
        assert code == 1
        assert json.loads(capsys.readouterr().out)["verdict"] == "refuted-at-bounds"


class TestVerify:
    def test_custom_corpus_passes(self, files, capsys):
        write, _ = files
        variety = write("v.json", S2_VARIETY)
        corpus = write("c.json", S2_WITH_TRIVIAL)
        code = run(
            ["verify", "--variety", variety, "--algebras", corpus, "--format", "text"]
        )
        out = capsys.readouterr().out
        assert code == 0
        assert "RESULT PASS" in out

    def test_corrupted_table_fails_with_witness(self, files, capsys):
        write, _ = files
        variety = write("v.json", S2_VARIETY)
        corpus = write("c.json", LEFT_ZERO_CORPUS)
        code = run(["verify", "--variety", variety, "--algebras", corpus])
        out = capsys.readouterr().out
        assert code == 1
        assert "FAIL" in out and "identity" in out

    def test_empty_corpus_is_input_error(self, files):
        write, _ = files
        variety = write("v.json", S2_VARIETY)
        empty = write(
            "e.json", {"signature": [{"name": "meet", "arity": 2}], "algebras": []}
        )
        assert run(["verify", "--variety", variety, "--algebras", empty]) == 3

    def test_output_written_to_file(self, files, capsys):
        write, tmp = files
        variety = write("v.json", S2_VARIETY)
        out_path = tmp / "report.txt"
        code = run(
            ["verify", "--variety", variety, "--out", str(out_path), "--format", "text"]
        )
        assert code == 0
        assert "RESULT PASS" in out_path.read_text()

    def test_byte_identical_runs(self, files, capsys):
        write, tmp = files
        variety = write("v.json", S2_VARIETY)
        corpus = write("c.json", S2_WITH_TRIVIAL)
        paths = [tmp / "r1.txt", tmp / "r2.txt"]
        for p in paths:
            assert (
                run(
                    [
                        "verify",
                        "--variety", variety,
                        "--algebras", corpus,
                        "--out", str(p),
                    ]
                )
                == 0
            )
        assert paths[0].read_bytes() == paths[1].read_bytes()
