import numpy as np
import pytest

from lingeo import blocking
from lingeo.census import line_census
from lingeo.gf import make_field
from lingeo.pg import PointSet, build_geometry, points_of, set_meet


def brute_is_blocking(b):
    g = b.geometry
    return all(set_meet(b, h).card > 0 for h in g.hyperplanes())


def brute_is_minimal(b):
    if not brute_is_blocking(b):
        return False
    for idx in b.indices:
        if brute_is_blocking(b.remove(int(idx))):
            return False
    return True


def test_line_is_minimal_blocking(line_49):
    rep = blocking.analyze(line_49)
    assert rep.is_blocking and rep.is_minimal and rep.is_small
    assert rep.exponent_e == 2 and rep.q0 == 49 and rep.h == 1
    assert rep.exponent_e_lines == 2
    assert rep.span_dim == 1
    assert rep.strategy == "cover"


def test_baer_is_minimal_blocking(baer_49):
    rep = blocking.analyze(baer_49)
    assert rep.is_blocking and rep.is_minimal and rep.is_small
    assert rep.exponent_e == 1 and rep.q0 == 7 and rep.h == 2
    assert rep.size == 57 and rep.kappa == 8
    assert rep.span_dim == 2


def test_blocking_matches_brute_force_small():
    g = build_geometry(2, make_field(3, 1))
    rng = np.random.default_rng(7)
    for _ in range(10):
        b = PointSet(g, rng.choice(g.num_points, 6, replace=False))
        verdict, witness = blocking.is_blocking(b)
        assert verdict == brute_is_blocking(b)
        if not verdict:
            hw = g.hyperplane_subspace(g.coords_of(witness))
            assert set_meet(b, hw).card == 0
        if verdict:
            minimal, _ = blocking.is_minimal(b)
            assert minimal == brute_is_minimal(b)


def test_point_exponent_line(line_49):
    for idx in line_49.indices[:3]:
        assert blocking.point_exponent(line_49, int(idx)) == 2


def test_point_exponents_baer(baer_49):
    assert blocking.all_point_exponents(baer_49) == [1] * 57


def test_line_plus_points_not_minimal(line_49):
    g = line_49.geometry
    extra = [i for i in range(g.num_points) if i not in line_49][:3]
    fat = line_49
    for i in extra:
        fat = fat.add(i)
    rep = blocking.analyze(fat)
    assert rep.is_blocking and not rep.is_minimal
    assert sorted(rep.witnesses["inessential"]) == sorted(extra)
    red = blocking.reduce_to_minimal(fat, verify_orders=5)
    assert red == line_49


def test_project_planar_baer(planar_baer_3d):
    b = planar_baer_3d
    g = b.geometry
    q_idx = blocking.find_tangent_only_point(b)
    assert q_idx is not None
    qc = g.coords_of(q_idx)
    h = g.hyperplane_subspace((0,) * g.n + (1,))
    if h.contains_coords(qc):
        h = g.hyperplane_subspace((1,) + (0,) * g.n)
    img, small = blocking.project(b, qc, h)
    assert small.n == 2 and img.card == b.card
    rep = blocking.analyze(img)
    assert rep.is_blocking and rep.is_minimal and rep.is_small


def test_project_rejects_center_in_set(baer_49):
    g = baer_49.geometry
    h = g.hyperplane_subspace((0, 0, 1))
    qc = g.coords_of(int(baer_49.indices[0]))
    with pytest.raises(blocking.QInB):
        blocking.project(baer_49, qc, h)


def test_exponent_from_lines_agrees(baer_49, trace_343):
    for b in (baer_49, trace_343):
        census = line_census(b)
        e_h = blocking.exponent(b)[0]
        e_l = blocking.exponent_from_lines(b, census)[0]
        assert e_h == e_l


def test_trace_set_report(trace_343):
    rep = blocking.analyze(trace_343)
    assert rep.is_blocking and rep.is_minimal and rep.is_small
    assert rep.size == 393
    assert rep.exponent_e == 1 and rep.q0 == 7 and rep.h == 3


def test_report_json_deterministic(baer_49):
    r1 = blocking.analyze(baer_49).to_json()
    r2 = blocking.analyze(baer_49).to_json()
    assert r1 == r2
    import json
    d = json.loads(r1)
    assert d["size"] == 57
