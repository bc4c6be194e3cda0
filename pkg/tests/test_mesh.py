import json
import math

import numpy as np
import pytest

from cpa_lyap.mesh import (
    DelaunayError,
    PointLocationError,
    SingularSimplexError,
    Triangulation,
    all_geometry,
    build_delaunay_mesh,
    build_grid_mesh,
    cpa_gradient,
    kuhn_triangulation,
    longest_edge_global,
    refine_leb,
    simplex_geometry,
)

from .oracles import brute_force_conforming, brute_force_delaunay_violations, taylor_c

PI = math.pi


class TestGrid:
    @pytest.mark.parametrize(
        "domain, h, N, m",
        [
            ([(-PI / 2, PI / 2)] * 2, PI / 2, 9, 8),
            ([(-1, 1)] * 3, 0.5, 125, 384),
            ([(-1, 1)], 1.0, 3, 2),
            ([(-1, 1)] * 2, 0.25, 81, 128),
        ],
    )
    def test_counts(self, domain, h, N, m):
        t = build_grid_mesh(domain, h)
        assert (t.n_vertices, t.n_simplices) == (N, m)

    @pytest.mark.parametrize("n, k", [(1, 5), (2, 3), (3, 2), (3, 3)])
    def test_freudenthal_formula(self, n, k):
        t = kuhn_triangulation([np.linspace(-1, 2, k + 1)] * n)
        assert t.n_vertices == (k + 1) ** n
        assert t.n_simplices == k**n * math.factorial(n)

    def test_spacing_must_divide(self):
        with pytest.raises(ValueError, match="does not divide"):
            build_grid_mesh([(-1, 1)], 0.3)

    def test_origin_on_lattice(self):
        with pytest.raises(ValueError, match="origin"):
            build_grid_mesh([(-1, 2)], 1.5)

    @pytest.mark.parametrize("reflect", [True, False])
    def test_conforming(self, reflect):
        t = kuhn_triangulation([np.linspace(-1, 1, 4), np.array([-1, -0.2, 0.0, 0.5, 1.0])], reflect=reflect)
        assert brute_force_conforming(t.vertices, t.simplices, 4.0) == []

    def test_conforming_3d(self):
        t = build_grid_mesh([(-1, 1)] * 3, 0.5)
        assert brute_force_conforming(t.vertices, t.simplices, 8.0) == []

    def test_reflected_grid_is_symmetric(self):
        t = build_grid_mesh([(-1, 1)] * 2, 0.5)
        key = {tuple(sorted(map(tuple, np.round(t.points(i), 9)))) for i in range(t.n_simplices)}
        mirrored = {tuple(sorted(map(tuple, np.round(t.points(i) * [-1, 1], 9)))) for i in range(t.n_simplices)}
        assert key == mirrored

    def test_origin_simplices_flagged_and_ordered(self):
        t = build_grid_mesh([(-1, 1)] * 3, 0.5)
        touching = np.any(t.simplices == t.origin_index, axis=1)
        assert np.array_equal(touching, t.origin_flags)
        assert np.all(t.simplices[t.origin_flags, 0] == t.origin_index)
        assert np.all(t.vertices[t.origin_index] == 0)


class TestGeometry:
    def test_origin_simplex_c(self):
        h = 0.3
        t = Triangulation([[0, 0], [h, 0], [h, h]], [[0, 1, 2]])
        g = simplex_geometry(t, 0)
        assert g.c[0] == 0
        assert g.c[1] == pytest.approx(2 * h * (h * math.sqrt(2) + h))
        assert g.c[1] == pytest.approx(2 * h * h * (1 + math.sqrt(2)))
        assert g.c[2] == pytest.approx(8 * h * h)

    def test_non_origin_simplex_c(self):
        t = Triangulation([[1, 0], [2, 0], [2, 1]], [[0, 1, 2]])
        g = simplex_geometry(t, 0)
        assert g.c[0] == pytest.approx(4.0)
        assert np.allclose(g.c, taylor_c(t.points(0), False))

    def test_matches_formula_oracle_on_grid(self):
        t = build_grid_mesh([(-1, 1)] * 3, 0.5)
        _, _, c = all_geometry(t)
        for i in range(0, t.n_simplices, 7):
            assert np.allclose(c[i], taylor_c(t.points(i), bool(t.origin_flags[i])))

    def test_inverse_and_longest_edge(self):
        t = Triangulation([[1, 1], [2, 1], [1, 3]], [[0, 1, 2]])
        g = simplex_geometry(t, 0)
        assert np.allclose(g.X @ g.X_inv, np.eye(2), atol=1e-9)
        a, b, length = g.longest_edge
        assert {a, b} == {1, 2} and length == pytest.approx(math.sqrt(5))

    def test_singular_rejected(self):
        t = Triangulation([[0, 0], [1, 1], [2, 2]], [[0, 1, 2]])
        with pytest.raises(SingularSimplexError):
            simplex_geometry(t, 0)

    def test_longest_edge_tie_breaks_to_smallest_pair(self):
        verts = np.array([[0, 0], [1, 0], [0, 1], [1, 1]], dtype=float)
        # edges (0,3) and (1,2) both have length sqrt(2)
        assert longest_edge_global(verts, [3, 1, 2, 0][:3]) == (1, 2)
        assert longest_edge_global(verts, [0, 1, 3]) == (0, 3)


class TestGradient:
    def test_identity_simplex(self):
        t = Triangulation([[0, 0], [1, 0], [0, 1]], [[0, 1, 2]])
        assert np.allclose(cpa_gradient(t, 0, [0, 1, 2]), [1, 2])

    def test_constant_values(self):
        t = Triangulation([[0, 0], [1, 0], [0, 1]], [[0, 1, 2]])
        assert np.allclose(cpa_gradient(t, 0, [5, 5, 5]), [0, 0])

    def test_hand_solved(self):
        t = Triangulation([[1, 1], [2, 1], [1, 3]], [[0, 1, 2]])
        assert np.allclose(cpa_gradient(t, 0, [0, 2, 4]), [2, 2])


class TestLocate:
    t = build_grid_mesh([(-1, 1)] * 2, 0.5)

    def test_vertex(self):
        i, bary = self.t.locate(self.t.vertices[7])
        assert np.isclose(bary.max(), 1.0)
        assert 7 in self.t.simplices[i]

    def test_centroid(self):
        c = self.t.points(5).mean(axis=0)
        i, bary = self.t.locate(c)
        assert i == 5 and np.allclose(bary, 1 / 3)

    def test_reconstruction(self):
        rng = np.random.default_rng(0)
        x = rng.uniform(-1, 1, size=(200, 2))
        idx, bary = self.t.locate_many(x)
        assert np.all(bary >= -1e-9) and np.all(bary <= 1 + 1e-9)
        assert np.allclose(bary.sum(axis=1), 1)
        rebuilt = np.einsum("pj,pjk->pk", bary, self.t.vertices[self.t.simplices[idx]])
        assert np.allclose(rebuilt, x, atol=1e-9)

    def test_walk_agrees_with_scan(self):
        big = build_grid_mesh([(-1, 1)] * 3, 0.125)
        assert big.n_simplices >= 10_000
        rng = np.random.default_rng(3)
        x = rng.uniform(-1, 1, size=(300, 3))
        idx, bary = big.locate_many(x)
        assert np.all(bary >= -1e-9)
        rebuilt = np.einsum("pj,pjk->pk", bary, big.vertices[big.simplices[idx]])
        assert np.allclose(rebuilt, x, atol=1e-9)

    def test_outside(self):
        with pytest.raises(PointLocationError):
            self.t.locate([3.0, 0.0])

    def test_interpolation_hits_vertex_values(self):
        values = np.arange(self.t.n_vertices, dtype=float) ** 1.5
        assert np.allclose(self.t.interpolate(values, self.t.vertices), values)


class TestRefine:
    def test_single_triangle(self):
        t = Triangulation([[0, 0], [1, 0], [0, 1]], [[0, 1, 2]])
        r = refine_leb(t, 0)
        assert (r.n_simplices, r.n_vertices) == (2, 4)
        assert np.allclose(r.vertices[3], [0.5, 0.5])

    def test_shared_longest_edge(self):
        t = Triangulation([[0, 0], [1, 0], [1, 1], [0, 1]], [[0, 1, 2], [0, 2, 3]])
        r = refine_leb(t, 0)
        assert (r.n_simplices, r.n_vertices) == (4, 5)

    def test_propagation_splits_neighbour_twice(self):
        # the shared edge AB is the longest edge of the first triangle only
        verts = [[0, 0], [1, 0], [0.5, -0.3], [1.2, 1.0]]
        t = Triangulation(verts, [[0, 1, 2], [0, 1, 3]])
        r = refine_leb(t, 0)
        assert r.n_simplices == 5 and r.n_vertices == 6
        assert brute_force_conforming(r.vertices, r.simplices, t.volumes.sum()) == []

    def test_first_child_keeps_index(self):
        t = build_grid_mesh([(-1, 1)] * 2, 1.0)
        r = refine_leb(t, 3)
        assert set(r.simplices[3]) <= set(t.simplices[3]) | {t.n_vertices}

    def test_index_out_of_range(self):
        t = build_grid_mesh([(-1, 1)] * 2, 1.0)
        with pytest.raises(IndexError):
            refine_leb(t, t.n_simplices)

    def test_origin_ordering_recomputed(self):
        t = build_grid_mesh([(-1, 1)] * 2, 1.0)
        for _ in range(6):
            t = refine_leb(t, int(np.flatnonzero(t.origin_flags)[0]))
        touching = np.any(t.simplices == t.origin_index, axis=1)
        assert np.array_equal(touching, t.origin_flags)
        assert np.all(t.vertices[t.simplices[t.origin_flags, 0]] == 0)

    @pytest.mark.parametrize("n", [2, 3])
    def test_random_sequence_conforms(self, n):
        rng = np.random.default_rng(n)
        t = build_grid_mesh([(-1, 1)] * n, 1.0)
        for _ in range(40):
            before = (t.n_vertices, t.n_simplices)
            t = refine_leb(t, int(rng.integers(t.n_simplices)))
            assert t.n_vertices > before[0] and t.n_simplices > before[1]
        assert brute_force_conforming(t.vertices, t.simplices, 2.0**n) == []


class TestDelaunay:
    def test_unit_square(self):
        t = build_delaunay_mesh([[0, 0], [1, 0], [0, 1], [1, 1]])
        assert t.n_simplices == 2
        diag = [set(map(tuple, t.points(i))) for i in range(2)]
        shared = diag[0] & diag[1]
        assert len(shared) == 2

    def test_corners_and_origin(self):
        t = build_delaunay_mesh([[-1, -1], [1, -1], [1, 1], [-1, 1], [0, 0]])
        assert t.n_simplices == 4 and t.origin_flags.all()

    @pytest.mark.parametrize("seed", range(3))
    def test_random_empty_circumcircle(self, seed):
        rng = np.random.default_rng(seed)
        pts = np.vstack([rng.uniform(-1, 1, size=(49, 2)), [[0, 0]]])
        t = build_delaunay_mesh(pts)
        assert brute_force_delaunay_violations(t.vertices, t.simplices) == 0
        assert brute_force_conforming(t.vertices, t.simplices, _hull_area(t.vertices)) == []

    def test_random_3d_covers_hull(self):
        from scipy.spatial import ConvexHull

        rng = np.random.default_rng(7)
        pts = np.vstack([rng.uniform(-1, 1, size=(40, 3)), [[0, 0, 0]]])
        t = build_delaunay_mesh(pts)
        assert t.volumes.sum() == pytest.approx(ConvexHull(pts).volume, rel=1e-9)

    def test_tensor_grid_matches_kuhn_counts(self):
        axes = [np.array([-1.0, -0.4, 0.0, 0.3, 1.0]), np.linspace(-1, 1, 7)]
        pts = np.stack(np.meshgrid(*axes, indexing="ij"), -1).reshape(-1, 2)
        t = build_delaunay_mesh(pts)
        assert (t.n_vertices, t.n_simplices) == (35, 48)
        assert brute_force_delaunay_violations(t.vertices, t.simplices) == 0

    def test_collinear_rejected(self):
        with pytest.raises(DelaunayError):
            build_delaunay_mesh([[0, 0], [1, 1], [2, 2], [3, 3]])

    def test_dimension_limit(self):
        with pytest.raises(DelaunayError):
            build_delaunay_mesh(np.eye(5))


def _hull_area(points):
    from scipy.spatial import ConvexHull

    return ConvexHull(points).volume


def test_json_round_trip(tmp_path):
    t = refine_leb(build_grid_mesh([(-1, 1)] * 2, 0.5), 4)
    path = tmp_path / "mesh.json"
    t.save(path)
    data = json.loads(path.read_text())
    assert set(data) == {"n", "vertices", "simplices"}
    back = Triangulation.load(path)
    assert np.array_equal(back.vertices, t.vertices)
    assert np.array_equal(back.simplices, t.simplices)


def test_adjacency_symmetric():
    t = build_grid_mesh([(-1, 1)] * 3, 1.0)
    adj = t.adjacency
    for i in range(t.n_simplices):
        for j in range(4):
            k = adj[i, j]
            if k >= 0:
                assert i in adj[k]
                shared = set(t.simplices[i]) - {t.simplices[i, j]}
                assert shared <= set(t.simplices[k])
