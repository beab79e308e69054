import json

import pytest
from fastapi.testclient import TestClient

from kgsim.cli import run
from kgsim.service import ServiceConfig, build_context, create_app
from conftest import FIXTURE_GRAPH

GRAPH = str(FIXTURE_GRAPH)


@pytest.fixture(scope="module")
def artifacts(tmp_path_factory):
    """One full CLI pipeline run shared by the query-verb tests."""
    out = tmp_path_factory.mktemp("artifacts")
    assert run(["build-taxonomy", "--graph", GRAPH, "--out", str(out)]) == 0
    for model in ("transe", "complex"):
        assert run([
            "train", "--graph", GRAPH, "--model", model, "--out", str(out),
            "--dim", "8", "--epochs", "40", "--seed", "7",
        ]) == 0
    assert run([
        "lexicalize", "--graph", GRAPH,
        "--embed-out", str(out / "text.tsv"), "--dim", "16",
    ]) == 0
    assert run([
        "build-index", "--vectors", str(out / "complex.tsv"),
        "--kind", "complex", "--graph", GRAPH,
        "--out", str(out / "knn_complex.bin"),
    ]) == 0
    return out


class TestExitCodes:
    def test_unknown_verb_is_usage_error(self, capsys):
        assert run(["frobnicate"]) == 1
        assert "usage" in capsys.readouterr().err

    def test_missing_required_flag_is_usage_error(self, capsys):
        assert run(["ingest"]) == 1

    def test_missing_file_is_data_error(self, capsys):
        assert run(["ingest", "--graph", "/no/such.tsv"]) == 2
        assert "error" in capsys.readouterr().err

    def test_parse_error_is_data_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.tsv"
        bad.write_text("node1\tlabel\tnode2\nonly-one-column\n")
        assert run(["ingest", "--graph", str(bad)]) == 2

    def test_unknown_query_node_is_data_error(self, artifacts, capsys):
        code = run([
            "similarity", "--graph", GRAPH, "--q1", "Q_ghost", "--q2", "Q_bus",
            "--taxonomy", str(artifacts / "taxonomy.bin"),
        ])
        assert code == 2


class TestVerbs:
    def test_ingest_prints_count(self, capsys):
        assert run(["ingest", "--graph", GRAPH]) == 0
        assert capsys.readouterr().out.strip() == "37"

    def test_build_taxonomy_writes_artifact(self, artifacts):
        assert (artifacts / "taxonomy.bin").exists()

    def test_train_writes_vectors_and_relations(self, artifacts):
        for model in ("transe", "complex"):
            assert (artifacts / f"{model}.tsv").exists()
            assert (artifacts / f"{model}.rel.tsv").exists()

    def test_lexicalize_single_node(self, capsys):
        assert run(["lexicalize", "--graph", GRAPH, "--node", "Q_dirtbike"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("dirt bike.")

    def test_lexicalize_all_lists_every_node(self, capsys):
        assert run(["lexicalize", "--graph", GRAPH, "--all"]) == 0
        assert len(capsys.readouterr().out.splitlines()) == 24

    def test_ingest_vectors_canonicalizes(self, artifacts, tmp_path, capsys):
        out = tmp_path / "canon"
        code = run([
            "ingest-vectors", "--path", str(artifacts / "text.tsv"),
            "--kind", "text", "--out", str(out),
        ])
        assert code == 0
        assert (out / "text.tsv").read_text() == (artifacts / "text.tsv").read_text()

    def test_similarity_self_pair(self, artifacts, capsys):
        code = run([
            "similarity", "--graph", GRAPH,
            "--q1", "Q_motorcycle", "--q2", "Q_motorcycle",
            "--taxonomy", str(artifacts / "taxonomy.bin"),
        ])
        assert code == 0
        assert "class=1.0" in capsys.readouterr().out

    def test_similarity_tsv_row_per_secondary(self, artifacts, capsys):
        code = run([
            "similarity", "--graph", GRAPH,
            "--q1", "Q_motorcycle", "--q2", "Q_bus,Q_cheese",
            "--taxonomy", str(artifacts / "taxonomy.bin"),
            "--transe", str(artifacts / "transe.tsv"),
        ])
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 2
        assert lines[0].startswith("Q_bus\tclass=")
        assert "transe=" in lines[0]

    def test_neighbors_tsv(self, artifacts, capsys):
        code = run([
            "neighbors", "--index", str(artifacts / "knn_complex.bin"),
            "--qnode", "Q_motorcycle", "--k", "3",
        ])
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 3
        assert all(len(line.split("\t")) == 3 for line in lines)

    def test_search_tsv(self, capsys):
        assert run(["search", "--graph", GRAPH, "--q", "motorcyc"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("Q_motorcycle\tmotorcycle")


class TestServiceParity:
    def test_neighbors_json_matches_endpoint_bytes(self, artifacts, capsys):
        code = run([
            "neighbors", "--index", str(artifacts / "knn_complex.bin"),
            "--qnode", "Q_motorcycle", "--k", "3", "--json",
        ])
        assert code == 0
        cli_payload = capsys.readouterr().out.rstrip("\n")

        config = ServiceConfig(
            graph=GRAPH,
            complex_vectors=str(artifacts / "complex.tsv"),
            knn_index=str(artifacts / "knn_complex.bin"),
        )
        client = TestClient(create_app(build_context(config)))
        resp = client.get("/nearest-neighbors?qnode=Q_motorcycle&k=3")
        assert resp.content == cli_payload.encode()

    def test_similarity_json_matches_endpoint(self, artifacts, capsys):
        args = [
            "similarity", "--graph", GRAPH,
            "--q1", "Q_motorcycle", "--q2", "Q_bus,Q_cheese",
            "--taxonomy", str(artifacts / "taxonomy.bin"),
            "--transe", str(artifacts / "transe.tsv"),
            "--text", str(artifacts / "text.tsv"),
            "--json",
        ]
        assert run(args) == 0
        cli_reports = json.loads(capsys.readouterr().out)

        config = ServiceConfig(
            graph=GRAPH,
            taxonomy=str(artifacts / "taxonomy.bin"),
            transe_vectors=str(artifacts / "transe.tsv"),
            text_vectors=str(artifacts / "text.tsv"),
        )
        client = TestClient(create_app(build_context(config)))
        resp = client.get("/similarity?q1=Q_motorcycle&q2=Q_bus,Q_cheese")
        assert resp.json() == cli_reports

    def test_search_json_matches_endpoint(self, capsys):
        assert run(["search", "--graph", GRAPH, "--q", "bike", "--json"]) == 0
        cli_hits = json.loads(capsys.readouterr().out)
        client = TestClient(create_app(build_context(ServiceConfig(graph=GRAPH))))
        assert client.get("/search?q=bike&limit=10").json() == cli_hits


class TestServeConfig:
    def test_port_override_precedence(self, tmp_path, monkeypatch):
        conf = tmp_path / "svc.conf"
        conf.write_text(f"graph = {GRAPH}\nport = 8001\n")
        seen = {}
        monkeypatch.setattr("kgsim.cli.serve", lambda cfg: seen.update(port=cfg.port))

        assert run(["serve", "--config", str(conf)]) == 0
        assert seen["port"] == 8001
        monkeypatch.setenv("KGSIM_PORT", "8002")
        run(["serve", "--config", str(conf)])
        assert seen["port"] == 8002
        run(["serve", "--config", str(conf), "--port", "8003"])
        assert seen["port"] == 8003
