"""Smoke test for the farmroute_py extension module.

Build and install it first:

    pip install --no-build-isolation -e crates/py

then run `python python/smoke_test.py` (or `pytest python/`).
"""

import math
import os
import tempfile

import farmroute_py as fr


def test_geometry():
    hull = fr.convex_hull([(0, 0), (2, 0), (1, 1), (1, 0.2)])
    assert hull == [(0.0, 0.0), (2.0, 0.0), (1.0, 1.0)]
    square = [(0, 0), (1, 0), (1, 1), (0, 1)]
    assert len(fr.antipodal_pairs(square)) == 6
    pair, d = fr.diameter(square)
    assert pair == (0, 2) and math.isclose(d, math.sqrt(2))
    try:
        fr.convex_hull([(0, 0), (1, 0), (2, 0)])
    except fr.FarmrouteError:
        pass
    else:
        raise AssertionError("collinear points must be rejected")


def test_solvers_and_scoring():
    inst = fr.Instance.generate(60, seed=3)
    assert len(inst) == 60 and len(inst.nodes) == 60
    for name in ("hpp", "minmax-ls"):
        sol = fr.solve(name, inst, k=5)
        assert sol.k == 5 and len(sol.routes) == 5
        assert sorted(i for r in sol.routes for i in r) == list(range(60))
        m = fr.score(inst, sol)
        assert math.isclose(m["total_distance"], sol.total_length, rel_tol=1e-12)
        assert math.isclose(m["max_route_length"], max(m["route_lengths"]))

    tiny = fr.Instance.generate(8, seed=0)
    exact = fr.exact_minmax(tiny, k=2)
    hpp = fr.hpp_solve(tiny, k=2)
    assert exact.max_length <= hpp.max_length + 1e-9

    try:
        fr.exact_minmax(inst, k=2)
    except fr.FarmrouteError as e:
        assert "too large" in str(e)
    else:
        raise AssertionError("exact solver must refuse 60 nodes")


def test_files_round_trip():
    with tempfile.TemporaryDirectory() as d:
        manifest = fr.generate_dataset([20, 30], 2, 42, d)
        assert os.path.basename(manifest) == "manifest.txt"
        inst = fr.Instance.load(os.path.join(d, "n20_s42.txt"))
        assert inst.to_text() == fr.Instance.generate(20, 42).to_text()

        sol = fr.hpp_solve(inst, k=3)
        path = os.path.join(d, "s.txt")
        sol.save(path)
        back = fr.Solution.load(path)
        assert back.routes == sol.routes and back.instance_ref == inst.name


def test_kmeans():
    pts = [(x, y) for x in range(4) for y in range(4)]
    labels, centroids = fr.kmeans(pts, 2, seed=0)
    assert sorted(labels.count(c) for c in (0, 1)) == [8, 8]
    assert len(centroids) == 2


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"{name}: ok")
