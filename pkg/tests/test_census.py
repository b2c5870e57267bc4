import numpy as np

from lingeo.census import groups_through_point, line_census
from lingeo.gf import make_field
from lingeo.pg import PointSet, build_geometry, points_of, set_meet


def brute_census_hist(b):
    """Oracle: histogram of |L ∩ B| by scanning every line of the plane."""
    g = b.geometry
    assert g.n == 2
    hist = {}
    for h in g.hyperplanes():
        c = set_meet(b, h).card
        if c:
            hist[c] = hist.get(c, 0) + 1
    return hist


def test_census_matches_brute_force_baer(baer_49):
    census = line_census(baer_49, collect_sizes=[8])
    assert census.hist == brute_census_hist(baer_49)
    assert census.hist[8] == 57
    assert census.pair_count_identity()
    secants = census.secant_members(8)
    assert len(secants) == 57
    # every member listed once, all collinear
    g = baer_49.geometry
    for tup in secants[:5]:
        pts = PointSet(g, tup)
        assert set_meet(baer_49, g.line_through(
            g.coords_of(tup[0]), g.coords_of(tup[1]))).card == 8
        assert pts.card == 8


def test_census_full_line(line_49):
    census = line_census(line_49)
    assert census.hist[50] == 1
    assert census.pair_count_identity()
    # every point of the line lies on q more tangent lines
    assert int(census.per_point_tangents.sum()) == 50 * 49


def test_census_small_random():
    g = build_geometry(2, make_field(3, 1))
    rng = np.random.default_rng(3)
    b = PointSet(g, rng.choice(g.num_points, 7, replace=False))
    census = line_census(b)
    assert census.hist == brute_census_hist(b)
    assert census.pair_count_identity()


def test_groups_through_point(baer_49):
    groups = groups_through_point(baer_49, 0)
    sizes = sorted(g.size for g in groups)
    assert sizes == [7] * 8  # 8 subplane lines through each point
    total = sum(g.size for g in groups)
    assert total == baer_49.card - 1


def test_census_lines_meeting_count(baer_49):
    census = line_census(baer_49)
    brute = brute_census_hist(baer_49)
    assert census.lines_meeting() == sum(brute.values())


def test_pair_mode_matches_full_mode():
    # pair mode groups each point only against higher-index points and
    # recovers the histogram via N_k = c_{k-1} - c_k; it must agree with
    # the direct full-mode census on arbitrary sets
    g = build_geometry(2, make_field(3, 1))
    rng = np.random.default_rng(11)
    for _ in range(25):
        b = PointSet(g, rng.choice(g.num_points,
                                   int(rng.integers(2, 11)), replace=False))
        full = line_census(b, mode="full")
        pair = line_census(b, mode="pair")
        assert full.hist == pair.hist
        assert pair.pair_count_identity()


def test_pair_mode_collection_and_per_point(baer_49):
    full = line_census(baer_49, collect_sizes=[8], mode="full")
    pair = line_census(baer_49, collect_sizes=[8], mode="pair")
    assert full.hist == pair.hist
    assert np.array_equal(full.secant_members(8), pair.secant_members(8))
    assert np.array_equal(full.per_point_by_size[8], pair.per_point_by_size[8])
    assert np.array_equal(full.per_point_secants, pair.per_point_secants)
    assert np.array_equal(full.per_point_tangents, pair.per_point_tangents)


def test_pair_mode_refuses_shadowed_collection():
    # a line plus one extra point has both 2-secants and a long secant;
    # collecting the 2-secants in pair mode would silently include
    # partial views of the long line, so it must raise instead
    g = build_geometry(2, make_field(3, 1))
    line = points_of(g.line_through((1, 0, 0), (0, 1, 0)))
    b = line.union(PointSet(g, [g.index_of((0, 0, 1))]))
    try:
        line_census(b, collect_sizes=[2], mode="pair")
    except ValueError as err:
        assert "shadowed" in str(err)
    else:
        raise AssertionError("expected shadowed-collection error")
