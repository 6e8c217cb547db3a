import numpy as np
import pytest

from lamplighter import analysis as an
from lamplighter import embedding as em
from lamplighter import group as grp
from lamplighter import word_metric as wm
from lamplighter.errors import DegenerateError, SizeGuardError, UsageError


def cayley_distance_matrix(n):
    table = wm.bfs_table(n)
    mul = grp.multiplication_table(n)
    inv = grp.inverse_table(n)
    return table.dist[mul[inv]].astype(float), mul, inv


def line_metric(k):
    pts = np.cumsum(np.arange(1, k + 1, dtype=float))
    return np.abs(pts[:, None] - pts[None, :]), pts


def test_isometry_and_scaling_have_distortion_one():
    D, pts = line_metric(20)
    for c in (1.0, 3.5, 1e-3):
        rep = an.distortion_scan(an.matrix_oracle(D), an.matrix_oracle(c * D), 20)
        assert rep.distortion == pytest.approx(1.0, abs=1e-12)
        assert rep.expansion == pytest.approx(c, rel=1e-12)
    rep = an.distortion_scan(an.matrix_oracle(D), an.points_oracle(pts[:, None]), 20)
    assert rep.distortion == pytest.approx(1.0, abs=1e-12)


def test_witnesses_and_pair_count():
    D, _ = line_metric(6)
    E = D.copy()
    E[1, 4] = E[4, 1] = 2 * D[1, 4]
    E[0, 2] = E[2, 0] = 0.25 * D[0, 2]
    rep = an.distortion_scan(an.matrix_oracle(D), an.matrix_oracle(E), 6)
    assert rep.pairs == 15
    assert rep.expansion_pair == (1, 4) and rep.expansion == pytest.approx(2)
    assert rep.contraction_pair == (0, 2) and rep.contraction == pytest.approx(4)
    assert rep.distortion == pytest.approx(8)


def test_degenerate_embedding_raises():
    D, _ = line_metric(5)
    E = D.copy()
    E[1, 3] = E[3, 1] = 0.0
    with pytest.raises(DegenerateError):
        an.distortion_scan(an.matrix_oracle(D), an.matrix_oracle(E), 5)


def test_bad_mode_and_domain():
    D, _ = line_metric(4)
    with pytest.raises(UsageError):
        an.distortion_scan(an.matrix_oracle(D), an.matrix_oracle(D), 4, mode="fast")
    with pytest.raises(UsageError):
        an.distortion_scan(an.matrix_oracle(D), an.matrix_oracle(D), 1)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_reduced_scan_equals_all_pairs(n):
    D, mul, inv = cayley_distance_matrix(n)
    p = em.EmbeddingParams.default(n)
    x, j = grp.all_element_arrays(n)
    sq = em.fast_sq_dist_batch(x, j, p)
    # embedded distance of (a, b) through the quotient b^-1 a
    emb = lambda a, b: np.sqrt(sq[mul[inv[b], a]])
    full = an.distortion_scan(an.matrix_oracle(D), emb, D.shape[0])
    reduced = an.distortion_scan(an.matrix_oracle(D), emb, D.shape[0], identity=0)
    assert full.distortion == pytest.approx(reduced.distortion, rel=1e-12)
    assert full.expansion == pytest.approx(reduced.expansion, rel=1e-12)
    lamp = an.embedding_distortion(p)
    assert lamp.report.distortion == pytest.approx(full.distortion, rel=1e-12)


def test_reduced_scan_equals_all_pairs_n9():
    n = 9
    p = em.EmbeddingParams.default(n)
    table = wm.bfs_table(n)
    x, j = grp.all_element_arrays(n)

    def quotient(a, b):
        xi, ji = grp.inverse_arrays(x[b], j[b], n)
        return grp.multiply_arrays(xi, ji, x[a], j[a], n)

    metric = lambda a, b: table.lookup(*quotient(a, b))
    embed = lambda a, b: np.sqrt(em.fast_sq_dist_batch(*quotient(a, b), p))
    full = an.distortion_scan(metric, embed, x.size, chunk=1 << 21)
    reduced = an.embedding_distortion(p)
    assert full.pairs == x.size * (x.size - 1) // 2
    assert full.distortion == pytest.approx(reduced.report.distortion, rel=1e-12)


def test_sampled_is_reproducible_and_below_exact():
    n = 8
    p = em.EmbeddingParams.default(n)
    exact = an.embedding_distortion(p).report
    a = an.embedding_distortion(p, mode="sampled", count=500, seed=11).report
    b = an.embedding_distortion(p, mode="sampled", count=500, seed=11).report
    assert a == b
    for seed in range(5):
        s = an.embedding_distortion(p, mode="sampled", count=300, seed=seed).report
        assert s.distortion <= exact.distortion + 1e-12
        assert s.mode == "sampled"
    D, _ = line_metric(30)
    E = np.sqrt(D)
    ex = an.distortion_scan(an.matrix_oracle(D), an.matrix_oracle(E), 30)
    sm = an.distortion_scan(an.matrix_oracle(D), an.matrix_oracle(E), 30, mode="sampled", count=200)
    assert sm.distortion <= ex.distortion + 1e-12


def test_worker_count_does_not_change_the_report():
    p = em.EmbeddingParams.default(10)
    one = an.embedding_distortion(p, chunk=1000).report
    four = an.embedding_distortion(p, chunk=1000, workers=4).report
    assert one == four


def test_embedding_distortion_generator_anchors():
    p = em.EmbeddingParams.default(12)
    scan = an.embedding_distortion(p)
    assert scan.report.distortion >= 1
    w = scan.witnesses()
    assert w["expansion"][1] == repr(grp.identity(12))


# --- symmetrization ------------------------------------------------------------


def random_points(rng, order, dim=4):
    return rng.normal(size=(order, dim))


@pytest.mark.parametrize("n", [3, 4])
def test_symmetrized_kernel_properties(n):
    D, mul, inv = cayley_distance_matrix(n)
    order = D.shape[0]
    rng = np.random.default_rng(n)
    off = ~np.eye(order, dtype=bool)
    for _ in range(10):
        P = random_points(rng, order)
        sym = an.symmetrize(P, mul, inv)
        K = sym.kernel
        assert sym.psd and not sym.degenerate
        for g in range(order):
            assert np.abs(K[np.ix_(mul[g], mul[g])] - K).max() <= 1e-9 * sym.trace / order
        # squared-distance ratios stay inside the input's range
        sq_in = ((P[:, None, :] - P[None, :, :]) ** 2).sum(-1)
        r_in = sq_in[off] / D[off] ** 2
        r_out = sym.sq_distances()[off] / D[off] ** 2
        assert r_out.min() >= r_in.min() * (1 - 1e-9)
        assert r_out.max() <= r_in.max() * (1 + 1e-9)
        # coordinates reproduce the kernel
        C = sym.coords
        assert np.abs(C @ C.conj().T - K).max() <= 1e-9 * sym.trace


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_symmetrization_never_increases_distortion(n):
    D, mul, inv = cayley_distance_matrix(n)
    order = D.shape[0]
    rng = np.random.default_rng(10 + n)
    for _ in range(3):
        P = random_points(rng, order, dim=6)
        sym = an.symmetrize(P, mul, inv)
        before = an.distortion_scan(an.matrix_oracle(D), an.points_oracle(P), order)
        after = an.distortion_scan(an.matrix_oracle(D), an.points_oracle(np.real(sym.coords)), order)
        assert after.distortion <= before.distortion + 1e-9


def test_equivariant_input_is_unchanged():
    n = 4
    D, mul, inv = cayley_distance_matrix(n)
    p = em.EmbeddingParams.default(n)
    P = np.array([em.dense_embed(g, p) for g in grp.elements(n)])
    sym = an.symmetrize(P, mul, inv)
    sq_in = ((P[:, None, :] - P[None, :, :]) ** 2).sum(-1)
    assert np.abs(sym.sq_distances() - sq_in).max() <= 1e-12 * sq_in.max()


def test_constant_map_is_degenerate():
    n = 3
    _, mul, inv = cayley_distance_matrix(n)
    sym = an.symmetrize(np.ones((24, 3)), mul, inv)
    assert sym.degenerate


def test_symmetrize_guards():
    with pytest.raises(SizeGuardError):
        an.symmetrize(np.zeros((5000, 1)), np.zeros((5000, 5000), dtype=int))
    with pytest.raises(UsageError):
        an.symmetrize(np.zeros((24, 1)), np.zeros((10, 10), dtype=int))
