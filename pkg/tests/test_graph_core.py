import io

import numpy as np
import pytest

from hitmix.errors import GraphFormatError, SeedSetError
from hitmix.graph.core import (
    build_nonseed_index,
    graph_from_edges,
    load_edge_list,
    load_seed_file,
    make_seed_set,
    reachable_from,
)
from hitmix.graph.relabel import relabel_edge_list, relabel_seeds
from hitmix.io.inputs import read_label_table


def test_load_edge_list_merges_reversed_and_repeated_pairs():
    graph = load_edge_list(io.StringIO("# comment\n0 1\n1 0\n1 2\n\n"))
    assert graph.n_vertices == 3
    assert graph.n_edges == 3
    assert graph.edge_multiplicity(0, 1) == 2
    assert graph.degrees.tolist() == [2, 3, 1]


def test_self_loop_counts_twice_toward_degree():
    graph = graph_from_edges(2, [(0, 0), (0, 1)])
    assert graph.degrees.tolist() == [3, 1]
    assert graph.edge_multiplicity(0, 0) == 1
    ids, mult = graph.neighbors(0)
    assert ids.tolist() == [0, 1]
    assert mult.tolist() == [1, 1]


def test_adjacency_rows_sum_to_degrees(er_graph):
    row_sums = np.asarray(er_graph.adjacency.sum(axis=1)).ravel()
    assert np.array_equal(row_sums, er_graph.degrees)
    assert (er_graph.adjacency != er_graph.adjacency.T).nnz == 0


def test_isolated_vertex_has_zero_degree():
    graph = graph_from_edges(4, [(0, 1), (1, 2)])
    assert graph.degrees[3] == 0


def test_degrees_are_read_only(triangle):
    with pytest.raises(ValueError):
        triangle.degrees[0] = 5


@pytest.mark.parametrize(
    "text",
    ["0 1\n1\n", "0 1\na b\n", "0 1\n-1 2\n", "0 1\n0 1 2\n"],
)
def test_malformed_edge_lines_are_rejected(text):
    with pytest.raises(GraphFormatError, match="line 2"):
        load_edge_list(io.StringIO(text))


def test_empty_edge_list_is_rejected():
    with pytest.raises(GraphFormatError):
        load_edge_list(io.StringIO("# nothing here\n"))


def test_load_seed_file_skips_comments():
    assert load_seed_file(io.StringIO("# seeds\n3\n\n5\n")) == [3, 5]


def test_load_seed_file_reports_line():
    with pytest.raises(GraphFormatError, match="line 2"):
        load_seed_file(io.StringIO("1\nx\n"))


def test_seed_set_validation():
    with pytest.raises(SeedSetError):
        make_seed_set([], 4)
    with pytest.raises(SeedSetError):
        make_seed_set([4], 4)
    with pytest.raises(SeedSetError):
        make_seed_set([0, 1, 2, 3], 4)
    seeds = make_seed_set([2, 0, 2], 4)
    assert seeds.members == frozenset({0, 2})
    assert seeds.complement.tolist() == [1, 3]


def test_nonseed_index_is_a_bijection(path3):
    graph, seeds = path3
    index = build_nonseed_index(graph, seeds)
    assert index.size == 2
    assert index.local_to_global.tolist() == [0, 1]
    assert index.global_to_local.tolist() == [0, 1, -1]


def test_nonseed_index_restrict_keeps_order():
    graph = graph_from_edges(5, [(0, 1), (1, 2), (3, 4)])
    index = build_nonseed_index(graph, make_seed_set([0], 5))
    sub = index.restrict(np.array([True, False, True, True]))
    assert sub.local_to_global.tolist() == [1, 3, 4]
    assert sub.global_to_local.tolist() == [-1, 0, -1, 1, 2]


def test_seed_set_for_other_graph_is_rejected(path3):
    graph, _ = path3
    with pytest.raises(SeedSetError):
        build_nonseed_index(graph, make_seed_set([0], 5))


def test_reachability_marks_other_components():
    graph = graph_from_edges(6, [(0, 1), (1, 2), (3, 4)])
    report = reachable_from(graph, make_seed_set([0], 6))
    assert report.vertices.tolist() == [1, 2, 3, 4, 5]
    assert report.reachable.tolist() == [True, True, False, False, False]
    assert report.unreachable_count == 3
    assert report.unreachable_vertices.tolist() == [3, 4, 5]


def test_relabel_assigns_ids_in_first_appearance_order():
    edge_lines, mapping = relabel_edge_list(io.StringIO("alice bob\nbob carol\n# note\ncarol alice\n"))
    assert mapping == {"alice": 0, "bob": 1, "carol": 2}
    assert edge_lines == ["0 1", "1 2", "2 0"]
    assert relabel_seeds(io.StringIO("carol\n"), mapping) == [2]


def test_relabel_rejects_unknown_seed():
    _, mapping = relabel_edge_list(io.StringIO("a b\n"))
    with pytest.raises(GraphFormatError, match="line 1"):
        relabel_seeds(io.StringIO("z\n"), mapping)


def test_byte_lines_are_decoded_per_line():
    graph = load_edge_list(io.BytesIO(b"0 1\n1 2\n"))
    assert graph.n_edges == 2
    with pytest.raises(GraphFormatError, match="line 3"):
        load_edge_list(io.BytesIO(b"0 1\n1 2\n2 \xff\n"))


def test_undecodable_text_stream_is_a_format_error(tmp_path):
    path = tmp_path / "edges.txt"
    path.write_bytes(b"0 1\n\xff\xfe 2\n")
    with open(path, encoding="utf-8") as handle:
        with pytest.raises(GraphFormatError, match="UTF-8"):
            load_edge_list(handle)


def test_label_table_errors_are_format_errors(tmp_path):
    path = tmp_path / "labels.tsv"
    path.write_text("vertex_id\tlabel\nabc\t1\n")
    with pytest.raises(GraphFormatError):
        read_label_table(path)
    path.write_text("vertex_id\tlabel\n0\t1\n0\t0\n")
    with pytest.raises(GraphFormatError, match="more than once"):
        read_label_table(path)
    path.write_text("vertex_id\tlabel\n3\t1\n5\t0\n")
    assert read_label_table(path).to_dict() == {3: 1, 5: 0}
