import math
import os

import pytest

import roughweyl as rw


def test_version():
    assert rw.__version__.startswith("0.1.0")


def test_meshes():
    sq = rw.unit_square(2)
    assert (sq.num_vertices, sq.num_triangles) == (9, 8)
    assert sq.boundary_tags == [0, 1, 2, 3]
    assert sq.validate() == []
    fine = rw.refine(sq, 2)
    assert fine.num_triangles == 128 and fine.level == 2
    d = rw.disk(8)
    assert abs(d.area() / math.pi - 1) < 0.01
    back = rw.mesh_from_text(d.to_text())
    assert back.triangles == d.triangles


def test_laplace_square():
    vals = rw.laplace_eigenvalues(rw.unit_square(32), count=5)
    expect = [2, 5, 5, 8, 10]
    for v, e in zip(vals, expect):
        assert abs(v / (math.pi**2 * e) - 1) < 0.02


def test_indefinite_sides_mirror():
    m = rw.unit_square(16, mirrored=True)
    s = rw.solve_weighted(m, weight="halves:1,-1", k=20)
    assert len(s["plus"]) == len(s["minus"]) == 20
    assert max(abs(a - b) for a, b in zip(s["plus"], s["minus"])) < 1e-9


def test_neumann_constraint():
    s = rw.solve_weighted(rw.unit_square(24), boundary="neumann", k=3)
    assert s["tau"] == 1 and s["constrained"]
    assert abs(s["plus"][0] * math.pi**2 - 1) < 0.02
    with pytest.raises(rw.ModelingError):
        rw.solve_weighted(rw.unit_square(8), weight="halves:1,-1", boundary="neumann")


def test_targets_and_fit():
    t = rw.weyl_target(rw.unit_square(4), weight="halves:1,-1")
    assert abs(t["c_plus"] - 1 / (8 * math.pi)) < 1e-12
    f = rw.fit_limit([0.3 / k for k in range(1, 91)], 0.3)
    assert abs(f["rel_dev"]) < 1e-12
    with pytest.raises(rw.SolverError):
        rw.fit_limit([1.0 / k for k in range(1, 30)], 1.0)


def test_bad_spec():
    with pytest.raises(rw.ConfigError):
        rw.solve_weighted(rw.disk(2), metric="cone")


def test_run(tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[domain]\nn = 8\nlevel = 0\n")
    rc, log, err = rw.run("solve", str(cfg), out=str(tmp_path / "out"))
    assert rc == 0, err
    assert (tmp_path / "out" / "summary.json").exists()
    bad = tmp_path / "bad.ini"
    bad.write_text("metric = cone\n")
    rc, _, err = rw.run("solve", str(bad))
    assert rc == 2 and "metric" in err
