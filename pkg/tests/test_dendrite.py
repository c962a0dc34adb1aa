from fractions import Fraction

import pytest

from dendrite_ifs import geometry as g
from dendrite_ifs.dendrite import (
    AdjacencyGraph,
    address_point,
    adjacency_graph,
    cells_at_depth,
    fixed_point,
    is_tree,
    postcritical_density,
    read_edge_list,
    verify_tree,
    write_edge_list,
)
from dendrite_ifs.ternary import CConstant, DigitStream

H = Fraction(2, 9)


@pytest.fixture(scope="module")
def c():
    return CConstant()


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_cells_count_and_containment(n, c):
    cells = cells_at_depth(n, H, c)
    assert len(cells) == 4**n
    assert [cell.word for cell in cells] == sorted(cell.word for cell in cells)
    d = g.base_triangle(H)
    for cell in cells:
        assert g.triangle_contains(d, cell.hull, c)


def test_depth1_edges(c):
    graph = adjacency_graph(1, H, c)
    assert graph.conclusive
    assert graph.edge_list() == [("0", "1"), ("1", "2"), ("1", "h")]
    assert is_tree(graph)


def test_depth2_tree(c):
    graph = adjacency_graph(2, H, c)
    assert len(graph.vertices) == 16
    assert len(graph.edges) == 15
    assert is_tree(graph)


def test_is_tree_synthetic():
    cycle = AdjacencyGraph(["a", "b", "c"], {("a", "b"), ("b", "c"), ("a", "c")})
    assert not is_tree(cycle)
    assert is_tree(AdjacencyGraph(["a"]))
    forest = AdjacencyGraph(["a", "b", "c", "d"], {("a", "b"), ("c", "d"), ("a", "b")})
    assert not is_tree(forest)
    with pytest.raises(ValueError):
        is_tree(AdjacencyGraph(["a", "b"], unknown_pairs={("a", "b")}))


def test_adjacency_rejects_depth0():
    with pytest.raises(ValueError):
        adjacency_graph(0, H)


def test_edge_list_round_trip(tmp_path, c):
    graph = adjacency_graph(2, H, c)
    path = tmp_path / "edges.txt"
    write_edge_list(graph, path)
    assert read_edge_list(path) == graph.edge_list()
    assert path.read_text().splitlines()[0] == "00 01"


def test_verify_tree_and_refinement():
    r = verify_tree(H, 3)
    assert r.result == "pass"
    assert r.details["depth1_edges"] == ["0-1", "1-2", "1-h"]
    assert [d["edges"] for d in r.details["graphs"]] == [3, 15, 63]


def test_fixed_points():
    for letter in "012h":
        p = fixed_point(letter, H)
        assert g.generator(letter, H).apply(p) == p
    hp = fixed_point("h", H)
    k = 1 / (1 + H * H)
    assert hp.x == g.CLinear(Fraction(0), k) and hp.y == g.CLinear(Fraction(0), H * k)


@pytest.mark.parametrize("letter", list("02h"))
def test_address_point_converges_to_fixed_point(letter, c):
    target = fixed_point(letter, H).enclose(c)
    widths = []
    for n in (2, 4, 8):
        box = address_point(letter * n, H, c)
        assert box.x.overlaps(target.x) and box.y.overlaps(target.y)
        widths.append(box.x.width + box.y.width)
    assert widths[0] > widths[1] > widths[2]


def test_address_point_nesting(c):
    outer = address_point("12", H, c)
    inner = address_point("12h0", H, c)
    assert outer.x.contains(inner.x) and outer.y.contains(inner.y)
    with pytest.raises(ValueError):
        address_point("", H, c)


@pytest.mark.parametrize("length, expected", [(1, {"0": 2, "2": 3})])
def test_density_small(length, expected):
    r = postcritical_density(length)
    assert r.result == "pass"
    assert r.details["shifts"] == expected


@pytest.mark.parametrize("length", [3, 6])
def test_density_located_and_distinct(length):
    r = postcritical_density(length)
    assert r.result == "pass"
    assert r.details["located"] == r.details["targets"] == 2**length
    assert r.details["distinct_shift_prefixes"] == 2**length


def test_density_fails_on_short_file():
    stream = DigitStream.from_text("110200" + "0" * 40)
    r = postcritical_density(3, c=CConstant(stream, precision_start=8, precision_cap=46), max_search=40)
    assert r.result == "fail"
    assert any(f["kind"] == "not_found" for f in r.failures)
