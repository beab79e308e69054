import pytest
from hypothesis import given, strategies as st

from kgsim import GraphStore, ParseError, ConfigError
from conftest import FIXTURE_GRAPH


def write_graph(tmp_path, body):
    path = tmp_path / "g.tsv"
    path.write_text("node1\tlabel\tnode2\n" + body, encoding="utf-8")
    return str(path)


class TestIngest:
    def test_minimal_file(self, tmp_path):
        path = write_graph(tmp_path, "Q1\tP279\tQ2\nQ1\tlabel\t\"one\"\nQ2\tlabel\t\"two\"\n")
        store = GraphStore()
        assert store.ingest_edges(path) == 3
        assert len(store.meta) == 2
        assert store.meta["Q1"].label == "one"

    def test_header_only(self, tmp_path):
        store = GraphStore()
        assert store.ingest_edges(write_graph(tmp_path, "")) == 0

    def test_fixture_row_count(self, fixture_store):
        assert len(fixture_store.edges) == 37

    def test_wrong_column_count_reports_line(self, tmp_path):
        path = write_graph(tmp_path, "Q1\tP279\tQ2\nQ1\tP279\n")
        with pytest.raises(ParseError) as err:
            GraphStore().ingest_edges(path)
        assert err.value.line == 3

    def test_bad_header(self, tmp_path):
        path = tmp_path / "g.tsv"
        path.write_text("a\tb\tc\nQ1\tP279\tQ2\n")
        with pytest.raises(ParseError) as err:
            GraphStore().ingest_edges(str(path))
        assert err.value.line == 1

    def test_unreadable_file(self):
        with pytest.raises(OSError):
            GraphStore().ingest_edges("/no/such/file.tsv")

    def test_comments_ignored(self, tmp_path):
        path = write_graph(tmp_path, "# comment\nQ1\tP279\tQ2\n")
        assert GraphStore().ingest_edges(path) == 1

    def test_language_tag_and_quotes_stripped(self, tmp_path):
        path = write_graph(tmp_path, "Q1\tlabel\t'one'@en\n")
        store = GraphStore()
        store.ingest_edges(path)
        assert store.meta["Q1"].label == "one"
        assert store.outgoing_edges("Q1")[0].node2 == "one"

    def test_reingest_duplicates_edges_not_meta(self, tmp_path):
        path = write_graph(tmp_path, "Q1\tP279\tQ2\nQ1\tlabel\t\"one\"\n")
        store = GraphStore()
        store.ingest_edges(path)
        store.ingest_edges(path)
        assert len(store.edges) == 4
        assert len(store.meta) == 1
        assert store.meta["Q1"].aliases == []

    def test_alias_dedup_is_case_folded(self):
        store = GraphStore()
        store.add_edges([
            ("Q1", "alias", "Bike"),
            ("Q1", "alias", "bike"),
            ("Q1", "alias", "cycle"),
        ])
        assert store.meta["Q1"].aliases == ["Bike", "cycle"]

    def test_ingest_after_freeze_rejected(self, tmp_path):
        path = write_graph(tmp_path, "Q1\tP279\tQ2\n")
        store = GraphStore()
        store.ingest_edges(path)
        store.freeze()
        with pytest.raises(ConfigError):
            store.ingest_edges(path)


class TestOutgoingEdges:
    def test_unknown_node(self, fixture_store):
        assert fixture_store.outgoing_edges("Q999999") == []

    def test_fixture_dirtbike(self, fixture_store):
        rows = [(e.node1, e.property, e.node2)
                for e in fixture_store.outgoing_edges("Q_dirtbike")]
        assert rows == [
            ("Q_dirtbike", "P279", "Q_motorcycle"),
            ("Q_dirtbike", "label", "dirt bike"),
        ]

    def test_incoming_only_node(self, fixture_store):
        # Q_entity is only ever a target in the fixture.
        assert fixture_store.outgoing_edges("Q_entity") == []

    def test_round_trip_every_edge(self, fixture_store):
        for edge in fixture_store.edges:
            matches = [
                e for e in fixture_store.outgoing_edges(edge.node1)
                if (e.node1, e.property, e.node2) == (edge.node1, edge.property, edge.node2)
            ]
            assert len(matches) == 1


class TestSearch:
    def test_prefix_match_ranks_motorcycle_first(self, fixture_store):
        results = fixture_store.search_labels("motorcyc", 5)
        assert results[0][0] == "Q_motorcycle"
        assert results[0][1] == "motorcycle"

    def test_no_match(self, fixture_store):
        assert fixture_store.search_labels("zzz-no-such", 5) == []

    def test_limit_honored(self, fixture_store):
        assert len(fixture_store.search_labels("bike", 1)) == 1

    def test_empty_query(self, fixture_store):
        assert fixture_store.search_labels("", 5) == []

    def test_every_query_token_must_match(self, fixture_store):
        assert fixture_store.search_labels("dirt bike", 5)[0][0] == "Q_dirtbike"
        assert fixture_store.search_labels("dirt zebra", 5) == []

    def test_alias_matches(self):
        store = GraphStore()
        store.add_edges([
            ("Q1", "label", "motorcycle"),
            ("Q1", "alias", "motorbike"),
        ])
        store.freeze()
        assert store.search_labels("motorbi", 5)[0][0] == "Q1"

    def test_exact_token_match_outranks_prefix(self):
        store = GraphStore()
        store.add_edges([
            ("Q_long", "label", "bus station"),
            ("Q_exact", "label", "restaurant bus"),
        ])
        store.freeze()
        results = store.search_labels("bus", 5)
        # Both match the token exactly; shorter label wins, then id.
        assert [r[0] for r in results] == ["Q_long", "Q_exact"]
        store2 = GraphStore()
        store2.add_edges([
            ("Q_a", "label", "bus"),
            ("Q_b", "label", "business"),
        ])
        store2.freeze()
        assert [r[0] for r in store2.search_labels("bus", 5)] == ["Q_a", "Q_b"]
        assert store2.search_labels("bus", 5)[0][2] == 1

    def test_search_requires_freeze(self):
        store = GraphStore()
        store.add_edges([("Q1", "label", "x")])
        with pytest.raises(ConfigError):
            store.search_labels("x", 1)

    def test_limit_must_be_positive(self, fixture_store):
        with pytest.raises(ConfigError):
            fixture_store.search_labels("bus", 0)

    @given(st.text(max_size=20), st.integers(min_value=1, max_value=10))
    def test_smaller_limit_is_prefix_of_larger(self, query, k):
        store = GraphStore()
        store.ingest_edges(str(FIXTURE_GRAPH))
        store.freeze()
        small = store.search_labels(query, k)
        large = store.search_labels(query, k + 1)
        assert large[:len(small)] == small
        assert store.search_labels(query, k) == small  # deterministic
