import pytest

from lingeo.gf import make_field
from lingeo.pg import build_geometry
from lingeo.search import (GuardExceeded, SearchConfig, SearchError,
                           brute_force_minimal, enumerate_minimal,
                           verify_catalog)


def catalog_keys(res):
    return [tuple(int(i) for i in b.indices) for b in res.catalog]


def test_pg_2_2_matches_brute_force():
    g = build_geometry(2, make_field(2, 1))
    cfg = SearchConfig(g)
    assert cfg.max_size == 4
    res = enumerate_minimal(cfg)
    assert catalog_keys(res) == brute_force_minimal(g, cfg.max_size)
    # exactly the 7 lines of the Fano plane
    assert len(res.catalog) == 7
    assert all(r.size == 3 and r.span_dim == 1 for r in res.reports)


def test_pg_2_3_matches_brute_force():
    g = build_geometry(2, make_field(3, 1))
    cfg = SearchConfig(g)
    assert cfg.max_size == 5
    res = enumerate_minimal(cfg)
    assert catalog_keys(res) == brute_force_minimal(g, cfg.max_size)
    assert all(r.is_blocking and r.is_minimal and r.size <= 5
               for r in res.reports)


def test_pg_2_4_lines_only_at_max_5():
    g = build_geometry(2, make_field(2, 2))
    res = enumerate_minimal(SearchConfig(g, max_size=5))
    assert len(res.catalog) == 21
    assert all(r.size == 5 and r.span_dim == 1 for r in res.reports)


def test_pg_2_4_full_catalog():
    g = build_geometry(2, make_field(2, 2))
    cfg = SearchConfig(g)
    assert cfg.max_size == 7
    res = enumerate_minimal(cfg)
    sizes = sorted(r.size for r in res.reports)
    assert len(res.catalog) == 381
    assert sizes.count(5) == 21 and sizes.count(7) == 360
    report = verify_catalog(res)
    assert report["one_mod_p_alarms"] == []
    verdicts = {e["linearity"] for e in report["entries"]}
    assert verdicts == {"line", "linear"}
    non_lines = [e for e in report["entries"] if e["linearity"] != "line"]
    assert len(non_lines) == 360
    # q0 = 2 < 7: certified, but flagged as outside the theorem hypotheses
    assert all(e["outside_hypotheses"] for e in non_lines)


def test_prune_soundness():
    g = build_geometry(2, make_field(3, 1))
    with_prune = enumerate_minimal(SearchConfig(g))
    without = enumerate_minimal(SearchConfig(g, prune=False))
    assert catalog_keys(with_prune) == catalog_keys(without)
    # in a plane any two lines meet, so the matching bound equals the size
    # cap; the catalog must be identical either way and no node is lost
    assert with_prune.nodes <= without.nodes


def test_determinism_across_width():
    g = build_geometry(2, make_field(3, 1))
    a = enumerate_minimal(SearchConfig(g, parallel_width=1))
    b = enumerate_minimal(SearchConfig(g, parallel_width=8))
    assert catalog_keys(a) == catalog_keys(b)


def test_guard():
    g = build_geometry(2, make_field(5, 2))
    with pytest.raises(GuardExceeded):
        enumerate_minimal(SearchConfig(g))
    # override lets a run start (not executed here: it would be huge)


def test_max_size_floor():
    g = build_geometry(2, make_field(2, 1))
    with pytest.raises(SearchError):
        SearchConfig(g, max_size=2)
