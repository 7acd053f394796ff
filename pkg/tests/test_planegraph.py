import pytest

from src.errors import EmbeddingError, PlaneGraphSyntaxError, UnknownVertexError
from src.planegraph import (
    PlaneGraph,
    inner_vertices,
    parse_plane_graph,
    serialize,
    trace_faces,
)


def test_grid_faces_and_outer_walk(grid3):
    assert len(grid3) == 9
    assert grid3.number_of_edges() == 12
    faces = trace_faces(grid3)
    assert len(faces) == 5
    (outer,) = grid3.outer_faces()
    assert outer.vertices == (0, 3, 6, 7, 8, 5, 2, 1)
    assert all(len(f) == 4 for f in faces if not f.is_outer)
    assert inner_vertices(grid3) == {4}


def test_successor_keeps_face_on_the_left(square):
    assert square.successor((0, 3)) == (3, 2)
    assert square.successor((0, 1)) == (1, 2)


def test_serialize_then_parse_gives_equal_graph(grid3):
    assert parse_plane_graph(serialize(grid3)) == grid3


def test_equality_ignores_where_a_rotation_starts(square):
    shifted = PlaneGraph({0: [3, 1], 1: [0, 2], 2: [3, 1], 3: [2, 0]}, [(0, 3)])
    assert shifted == square
    assert hash(shifted) == hash(square)


def test_relabel_moves_outer_reference(square):
    moved = square.relabel({0: 10, 1: 11, 2: 12, 3: 13})
    assert moved.outer_refs == ((10, 13),)
    assert moved.vertices == {10, 11, 12, 13}


def test_components_of_two_squares(samples_dir):
    g = parse_plane_graph((samples_dir / "two_grids.spg").read_text())
    comps = g.components()
    assert [sorted(c.vertices) for c in comps] == [[0, 1, 2, 3], [4, 5, 6, 7]]
    assert all(len(c.outer_refs) == 1 for c in comps)
    assert not g.is_connected()


def test_isolated_vertex_needs_no_outer_reference():
    g = PlaneGraph({0: []})
    assert g.outer_vertices() == {0}
    assert g.faces == ()


def test_unknown_vertex_raises(square):
    with pytest.raises(UnknownVertexError):
        square.neighbours(7)


def test_missing_header_reports_line_one():
    with pytest.raises(PlaneGraphSyntaxError) as err:
        parse_plane_graph("0: 1\n")
    assert err.value.line == 1


def test_bad_token_reports_line_and_column():
    with pytest.raises(PlaneGraphSyntaxError) as err:
        parse_plane_graph("V 2\n0: 1\n1: 0 x\nOUTER 0 1\n")
    assert (err.value.line, err.value.column) == (3, 6)


def test_header_count_mismatch():
    with pytest.raises(PlaneGraphSyntaxError) as err:
        parse_plane_graph("V 3\n0: 1\n1: 0\nOUTER 0 1\n")
    assert err.value.line == 1


def test_asymmetric_rotation_rejected():
    with pytest.raises(EmbeddingError, match="asymmetric"):
        PlaneGraph({0: [1], 1: []})


def test_component_with_edges_needs_outer_reference():
    with pytest.raises(EmbeddingError, match="OUTER"):
        PlaneGraph({0: [1], 1: [0]})


def test_outer_references_must_name_one_face(square):
    with pytest.raises(EmbeddingError, match="different faces"):
        PlaneGraph(square.rotation, [(0, 3), (0, 1)])


def test_k5_rotation_fails_euler_check():
    rotation = {v: [w for w in range(5) if w != v] for v in range(5)}
    with pytest.raises(EmbeddingError, match="Euler"):
        PlaneGraph(rotation, [(0, 1)])


def test_loop_rejected():
    with pytest.raises(EmbeddingError):
        PlaneGraph({0: [0]}, [(0, 0)])
