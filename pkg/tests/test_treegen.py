import pytest
from scipy import stats

from rumorlab.treegen import (
    HUB,
    LEAF,
    PATH,
    ROOT,
    TreeTopology,
    VertexRole,
    cayley,
    children,
    hub_distance,
    hub_path,
    resolve_role,
)


def bfs(topology, seed, max_vertices=200):
    """Realize the tree breadth-first up to a vertex budget."""
    out = []
    frontier = [ROOT]
    while frontier and len(out) < max_vertices:
        v = frontier.pop(0)
        kids = children(topology, v, seed)
        out.append((v, tuple(kids)))
        frontier.extend(c for c, _ in kids)
    return out


class TestTopology:
    def test_cayley_rejects_hub_params(self):
        with pytest.raises(ValueError):
            TreeTopology("cayley", 3, k=2)

    def test_hub_path_requires_all_params(self):
        with pytest.raises(ValueError):
            TreeTopology("hub_path", 5, k=4, alpha=0.5)  # missing h

    def test_parameter_ranges(self):
        with pytest.raises(ValueError):
            hub_path(5, 4, 0.0, 2)
        with pytest.raises(ValueError):
            hub_path(5, 4, 1.1, 2)
        with pytest.raises(ValueError):
            hub_path(5, 1, 0.5, 2)
        with pytest.raises(ValueError):
            hub_path(5, 4, 0.5, 0)
        with pytest.raises(ValueError):
            cayley(1)

    def test_warns_when_k_not_below_d(self):
        with pytest.warns(UserWarning):
            hub_path(4, 4, 0.5, 2)

    def test_cayley_equivalence_flag(self):
        assert cayley(5).is_cayley_equivalent
        assert hub_path(5, 4, 1.0, 1).is_cayley_equivalent
        assert not hub_path(5, 4, 1.0, 2).is_cayley_equivalent


class TestCayleyChildren:
    def test_root_has_d_plus_one_children(self):
        kids = children(cayley(4), ROOT)
        assert len(kids) == 5
        assert all(r.kind == HUB for _, r in kids)

    @pytest.mark.parametrize("vertex", [(0,), (3, 1), (0, 0, 2)])
    def test_nonroot_has_d_children(self, vertex):
        kids = children(cayley(4), vertex)
        assert len(kids) == 4

    def test_invalid_vertex_rejected(self):
        with pytest.raises(ValueError):
            children(cayley(3), (7,))  # root only has slots 0..3


class TestHubPathStructure:
    def test_alpha_one_h_one_is_cayley(self):
        topo = hub_path(4, 3, 1.0, 1)
        for vertex in (ROOT, (0,), (2, 1)):
            kids = children(topo, vertex, master_seed=11)
            ref = children(cayley(4), vertex)
            assert [c for c, _ in kids] == [c for c, _ in ref]
            assert all(r.kind == HUB for _, r in kids)

    def test_path_vertices_have_degree_k(self):
        # d=5, k=4, h=4: a hub-to-hub path has 3 interior vertices, each with
        # one onward slot and k-2 = 2 leaf slots (degree 4 with the parent)
        topo = hub_path(5, 4, 0.9, 4)
        seed = 3
        start = None
        for child, role in children(topo, ROOT, seed):
            if role.kind == PATH:
                start = child
                break
        assert start is not None, "alpha=0.9 root should have a path child"
        vertex, position = start, 1
        while True:
            kids = children(topo, vertex, seed)
            role = resolve_role(topo, vertex, seed)
            assert role == VertexRole(PATH, position)
            assert len(kids) == 3  # k - 1 away-from-parent slots
            onward_roles = [r for _, r in kids]
            assert sum(1 for r in onward_roles if r.kind == LEAF) == 2
            nxt, nxt_role = kids[0]
            if nxt_role.kind == HUB:
                assert position == 3
                break
            vertex, position = nxt, position + 1

    def test_nonroot_hub_has_d_free_slots(self):
        topo = hub_path(5, 4, 1.0, 1)
        kids = children(topo, (0,), master_seed=0)
        assert len(kids) == 5  # d slots; total degree d+1 with the parent

    def test_leaves_have_no_children(self):
        topo = hub_path(5, 4, 0.5, 2)
        for seed in range(5):
            for child, role in children(topo, ROOT, seed):
                if role.kind == LEAF:
                    assert children(topo, child, seed) == []
                    break

    @pytest.mark.parametrize("h", [1, 2, 4])
    def test_hub_spacing_is_exactly_h(self, h):
        topo = hub_path(5, 4, 1.0, h)  # alpha=1 so slot 0 always starts a path
        for seed in range(20):
            assert hub_distance(topo, seed) == h

    def test_hub_spacing_under_random_roles(self):
        topo = hub_path(6, 4, 0.5, 3)
        distances = {hub_distance(topo, seed) for seed in range(60)}
        assert distances <= {None, 3}
        assert 3 in distances  # some seed realizes a path through slot 0

    def test_hub_distance_requires_hub_path(self):
        with pytest.raises(ValueError):
            hub_distance(cayley(3), 0)


class TestDeterminism:
    def test_same_seed_same_tree(self):
        topo = hub_path(6, 4, 0.55, 3)
        assert bfs(topo, seed=42) == bfs(topo, seed=42)

    def test_different_seeds_differ(self):
        topo = hub_path(6, 4, 0.55, 3)
        realizations = {tuple(bfs(topo, seed=s)) for s in range(8)}
        assert len(realizations) > 1

    def test_role_resolution_matches_children(self):
        topo = hub_path(5, 4, 0.6, 2)
        seed = 13
        for v, kids in bfs(topo, seed, max_vertices=60):
            for child, role in kids:
                assert resolve_role(topo, child, seed) == role


class TestDegreeLaw:
    def test_root_path_starts_are_binomial(self):
        # count path-start children of the root across many seeds and test
        # against Binomial(d+1, alpha) with a chi-square goodness of fit
        d, alpha, n = 6, 0.4, 100_000
        topo = hub_path(d, 4, alpha, 2)
        counts = [0] * (d + 2)
        for seed in range(n):
            k = sum(1 for _, r in children(topo, ROOT, seed) if r.kind != LEAF)
            counts[k] += 1
        expected = [n * stats.binom.pmf(i, d + 1, alpha) for i in range(d + 2)]
        # merge sparse tail bins so every expected count is >= 5
        obs, exp = [], []
        acc_o = acc_e = 0.0
        for o, e in zip(counts, expected):
            acc_o += o
            acc_e += e
            if acc_e >= 5:
                obs.append(acc_o)
                exp.append(acc_e)
                acc_o = acc_e = 0.0
        obs[-1] += acc_o
        exp[-1] += acc_e
        chi = stats.chisquare(obs, [e * sum(obs) / sum(exp) for e in exp])
        assert chi.pvalue > 0.001
