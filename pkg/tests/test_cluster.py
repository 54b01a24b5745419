"""Functional clustering, partition agreement indices, and the elbow rule."""

from __future__ import annotations

import itertools
import warnings
from fractions import Fraction

import numpy as np
import pytest
from scipy.integrate import quad

from fkspline import (
    ConfigError,
    gram_matrix,
    FunctionalDataset,
    PenaltyConfig,
    TooFewCurvesError,
    adjusted_rand_index,
    confusion_counts,
    elbow_curve,
    fit_coefficients,
    functional_kmeans,
    hierarchical_cluster,
    make_basis_spec,
    matched_confusion,
    partitions_equal,
    rand_index,
)

from conftest import coefficient_model, constant_curve_model


def pairwise_counts_oracle(a, b):
    """Count agreeing/disagreeing pairs by direct enumeration."""
    a = np.asarray(a)
    b = np.asarray(b)
    tp = tn = fp = fn = 0
    for i, j in itertools.combinations(range(a.size), 2):
        same_a = a[i] == a[j]
        same_b = b[i] == b[j]
        if same_a and same_b:
            tp += 1
        elif not same_a and not same_b:
            tn += 1
        elif same_a and not same_b:
            fp += 1
        else:
            fn += 1
    return tp, tn, fp, fn


def ari_fraction_oracle(a, b):
    """Exact adjusted agreement via integer arithmetic on the contingency table."""
    a = np.asarray(a)
    b = np.asarray(b)
    n = a.size
    total = Fraction(n * (n - 1), 2)
    cells = {}
    for x, y in zip(a, b):
        cells[(x, y)] = cells.get((x, y), 0) + 1
    same_both = sum(Fraction(c * (c - 1), 2) for c in cells.values())
    row = {}
    col = {}
    for (x, y), c in cells.items():
        row[x] = row.get(x, 0) + c
        col[y] = col.get(y, 0) + c
    same_a = sum(Fraction(c * (c - 1), 2) for c in row.values())
    same_b = sum(Fraction(c * (c - 1), 2) for c in col.values())
    expected = same_a * same_b / total
    max_index = Fraction(same_a + same_b, 2)
    if max_index == expected:
        return None  # degenerate
    return (same_both - expected) / (max_index - expected)


def all_partitions(n, max_blocks=3):
    """Every canonical labeling of n items into at most max_blocks blocks."""
    seen = set()
    out = []
    for labels in itertools.product(range(1, max_blocks + 1), repeat=n):
        canon = []
        mapping = {}
        for x in labels:
            mapping.setdefault(x, len(mapping) + 1)
            canon.append(mapping[x])
        key = tuple(canon)
        if key not in seen:
            seen.add(key)
            out.append(np.array(canon))
    return out


class TestPairCounts:
    def test_two_versus_two_split(self):
        a = np.array([1, 1, 2, 2])
        b = np.array([1, 2, 1, 2])
        assert confusion_counts(a, b) == (0, 2, 2, 2)

    def test_all_merged_versus_singletons(self):
        a = np.array([1, 1, 1])
        b = np.array([1, 2, 3])
        assert confusion_counts(a, b) == (0, 0, 3, 0)

    def test_counts_sum_to_all_pairs(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            n = int(rng.integers(2, 30))
            a = rng.integers(1, 4, n)
            b = rng.integers(1, 4, n)
            counts = confusion_counts(a, b)
            assert sum(counts) == n * (n - 1) // 2

    def test_matches_enumeration_oracle(self):
        rng = np.random.default_rng(1)
        for _ in range(30):
            n = int(rng.integers(2, 20))
            a = rng.integers(1, 4, n)
            b = rng.integers(1, 4, n)
            assert confusion_counts(a, b) == pairwise_counts_oracle(a, b)


class TestAgreementIndices:
    def test_rand_index_examples(self):
        assert rand_index(np.array([1, 1, 2, 2]), np.array([1, 2, 1, 2])) == pytest.approx(1 / 3)
        assert rand_index(np.array([1, 2]), np.array([1, 1])) == 0.0
        assert rand_index(np.array([1, 1, 2]), np.array([1, 1, 2])) == 1.0

    def test_adjusted_index_examples(self):
        a = np.array([1, 1, 2, 2])
        b = np.array([1, 2, 1, 2])
        assert adjusted_rand_index(a, b) == pytest.approx(-0.5, abs=1e-12)
        assert adjusted_rand_index(a, a) == 1.0

    def test_identical_up_to_relabeling_gives_one(self):
        a = np.array([1, 1, 2, 3, 3])
        b = np.array([2, 2, 3, 1, 1])
        assert adjusted_rand_index(a, b) == 1.0
        assert partitions_equal(a, b)

    def test_exhaustive_small_partitions_match_oracles(self):
        for n in (2, 3, 4, 5):
            parts = all_partitions(n)
            for a in parts:
                for b in parts:
                    counts = confusion_counts(a, b)
                    assert counts == pairwise_counts_oracle(a, b)
                    tp, tn, fp, fn = counts
                    assert rand_index(a, b) == (tp + tn) / (tp + tn + fp + fn)
                    exact = ari_fraction_oracle(a, b)
                    if exact is not None:
                        got = adjusted_rand_index(a, b)
                        assert got == pytest.approx(float(exact), abs=1e-13)

    def test_permutation_invariance(self):
        rng = np.random.default_rng(5)
        a = rng.integers(1, 4, 40)
        b = rng.integers(1, 4, 40)
        base = adjusted_rand_index(a, b)
        for _ in range(5):
            perm_a = rng.permutation(3) + 1
            perm_b = rng.permutation(3) + 1
            assert adjusted_rand_index(perm_a[a - 1], perm_b[b - 1]) == pytest.approx(
                base, abs=1e-13
            )

    def test_independent_partitions_average_near_zero(self):
        rng = np.random.default_rng(9)
        vals = []
        for _ in range(100):
            a = rng.integers(1, 4, 60)
            b = rng.integers(1, 4, 60)
            vals.append(adjusted_rand_index(a, b))
        assert abs(np.mean(vals)) < 0.05

    def test_degenerate_pairs_warn(self):
        a = np.array([1, 1, 1])
        with pytest.warns(UserWarning):
            assert adjusted_rand_index(a, a) == 1.0
        s = np.array([1, 2, 3])
        with pytest.warns(UserWarning):
            assert adjusted_rand_index(s, s) == 1.0
        # one trivial, one not: the denominator stays positive, no warning
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            assert adjusted_rand_index(a, s) == 0.0

    def test_length_mismatch_rejected(self):
        with pytest.raises(ConfigError):
            rand_index(np.array([1, 2]), np.array([1, 2, 3]))


class TestMatchedConfusion:
    def test_best_assignment_and_false_positives(self):
        predicted = np.array([1, 1, 2, 2, 2])
        truth = np.array([1, 1, 1, 2, 2])
        table = matched_confusion(predicted, truth)
        assert table[1] == {"size": 2, "matched_group": 1, "false_positives": 0}
        assert table[2] == {"size": 3, "matched_group": 2, "false_positives": 1}


class TestFunctionalKMeans:
    def test_two_well_separated_level_groups(self):
        model = constant_curve_model([0.0, 0.2, 0.1, 10.0, 10.2, 10.1])
        result = functional_kmeans(model, 2, seed=0)
        truth = np.array([1, 1, 1, 2, 2, 2])
        assert adjusted_rand_index(result.partition.labels, truth) == 1.0

    def test_single_cluster_dispersion_is_total(self):
        levels = np.array([0.0, 0.2, 0.1, 10.0, 10.2, 10.1])
        model = constant_curve_model(levels)
        result = functional_kmeans(model, 1, seed=3)
        expected = float(((levels - levels.mean()) ** 2).sum())
        assert result.w == pytest.approx(expected, rel=1e-12)

    def test_seeded_determinism(self):
        rng = np.random.default_rng(2)
        model = constant_curve_model(rng.normal(size=30))
        a = functional_kmeans(model, 3, seed=7)
        b = functional_kmeans(model, 3, seed=7)
        assert np.array_equal(a.partition.labels, b.partition.labels)
        assert a.w == b.w

    def test_distance_uses_curve_geometry_not_coefficients(self):
        # Two curves whose coefficient vectors are equally far from a third
        # in Euclidean terms can be at different functional distances; the
        # clustering must follow the integrated distance.
        spec = make_basis_spec(0.0, 1.0, 4, [0.5])
        rng = np.random.default_rng(0)
        base = rng.standard_normal(spec.n_basis)
        model = coefficient_model(spec, np.column_stack([base, base, base + 3.0]))
        result = functional_kmeans(model, 2, seed=0)
        assert result.partition.labels[0] == result.partition.labels[1]
        assert result.partition.labels[0] != result.partition.labels[2]

    def test_k_validation(self):
        model = constant_curve_model([0.0, 1.0, 2.0])
        with pytest.raises(ConfigError):
            functional_kmeans(model, 0)
        with pytest.raises(TooFewCurvesError):
            functional_kmeans(model, 4)


class TestHierarchical:
    @pytest.mark.parametrize("linkage", ["ward", "complete", "average"])
    def test_two_far_groups_any_linkage(self, linkage):
        model = constant_curve_model([0.0, 0.2, 0.1, 10.0, 10.2, 10.1])
        result = hierarchical_cluster(model, 2, linkage)
        truth = np.array([1, 1, 1, 2, 2, 2])
        assert adjusted_rand_index(result.partition.labels, truth) == 1.0

    def test_complete_linkage_toy(self):
        model = constant_curve_model([0.0, 1.0, 10.0, 11.0])
        result = hierarchical_cluster(model, 2, "complete")
        assert partitions_equal(result.partition.labels, np.array([1, 1, 2, 2]))

    def test_singletons_when_k_equals_n(self):
        model = constant_curve_model([0.0, 1.0, 2.0])
        result = hierarchical_cluster(model, 3, "ward")
        assert len(set(result.partition.labels.tolist())) == 3

    def test_unknown_linkage(self):
        model = constant_curve_model([0.0, 1.0, 2.0])
        with pytest.raises(ConfigError):
            hierarchical_cluster(model, 2, "centroidal-voronoi")


class TestCurveDistance:
    def test_gram_distance_matches_quadrature(self):
        rng = np.random.default_rng(6)
        t = np.linspace(0, 1, 40)
        ys = np.column_stack(
            [np.sin(3 * t), np.cos(2 * t) + 0.3 * t]
        ) + 0.02 * rng.standard_normal((40, 2))
        spec = make_basis_spec(0.0, 1.0, 4, [0.35, 0.7])
        model = fit_coefficients(
            FunctionalDataset(t=t, values=ys), spec, PenaltyConfig(lambda2=1e-6)
        )
        # squared L2 distance via adaptive quadrature on the fitted curves
        diff = lambda x: (
            model.predict(np.array([x]))[0, 0] - model.predict(np.array([x]))[0, 1]
        ) ** 2
        ref, _ = quad(diff, 0.0, 1.0, points=[0.35, 0.7], limit=200)
        km = functional_kmeans(model, 2, seed=0)
        # with one curve per cluster, the dispersion is zero and the centers
        # are the curves; recover the distance from a 1-cluster run instead:
        # W(1) = sum of squared distances to the mean = half the squared
        # distance between two curves
        one = functional_kmeans(model, 1, seed=0)
        assert one.w == pytest.approx(ref / 2.0, rel=1e-8)
        assert km.w == pytest.approx(0.0, abs=1e-12)


class TestElbow:
    def test_dispersion_curve_monotone_and_rule_consistent(self):
        rng = np.random.default_rng(8)
        levels = np.concatenate([rng.normal(c, 0.05, 10) for c in (0.0, 3.0, 6.0, 9.0)])
        model = constant_curve_model(levels)
        result = elbow_curve(model, 8, seed=0, restarts=10)
        assert result.w.shape == (8,)
        assert np.all(np.diff(result.w) <= 1e-9)
        curv = result.w[:-2] - 2 * result.w[1:-1] + result.w[2:]
        assert result.suggested_k == int(curv.argmax()) + 2
        assert not result.low_confidence

    def test_two_level_groups_suggest_two(self):
        rng = np.random.default_rng(10)
        levels = np.concatenate([rng.normal(c, 0.05, 12) for c in (0.0, 8.0)])
        model = constant_curve_model(levels)
        result = elbow_curve(model, 6, seed=0, restarts=10)
        assert result.suggested_k == 2
        assert not result.low_confidence

    def test_equidistant_groups_suggest_their_count(self):
        # Four tight clouds at the vertices of a regular tetrahedron of the
        # whitened coordinate space are mutually equidistant, so no smaller
        # split dominates and the dispersion collapses exactly at four.
        rng = np.random.default_rng(4)
        spec = make_basis_spec(0.0, 1.0, 3, [])
        G = gram_matrix(spec).values
        L = np.linalg.cholesky(G)
        verts = 5.0 * np.array(
            [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]]
        )
        z = np.repeat(verts, 10, axis=0) + 0.05 * rng.standard_normal((40, 3))
        coeffs = np.linalg.solve(L.T, z.T)
        model = coefficient_model(spec, coeffs)
        result = elbow_curve(model, 6, seed=0, restarts=10)
        assert result.suggested_k == 4
        assert not result.low_confidence

    def test_flag_matches_curvature_rule(self):
        rng = np.random.default_rng(3)
        spec = make_basis_spec(0.0, 1.0, 4, list(np.linspace(0.05, 0.95, 16)))
        model = coefficient_model(spec, rng.standard_normal((spec.n_basis, 150)))
        result = elbow_curve(model, 6, seed=0, restarts=5)
        curv = result.w[:-2] - 2 * result.w[1:-1] + result.w[2:]
        assert result.low_confidence == bool(curv.max() < 0.05 * result.w[0])

    def test_structureless_blob_is_flagged(self):
        rng = np.random.default_rng(3)
        spec = make_basis_spec(0.0, 1.0, 4, list(np.linspace(0.05, 0.95, 16)))
        model = coefficient_model(spec, rng.standard_normal((spec.n_basis, 150)))
        result = elbow_curve(model, 6, seed=0, restarts=5)
        assert result.low_confidence

    def test_k_max_validation(self):
        model = constant_curve_model([0.0, 1.0, 2.0])
        with pytest.raises(ConfigError):
            elbow_curve(model, 1)
        with pytest.raises(TooFewCurvesError):
            elbow_curve(model, 4)
        short = elbow_curve(model, 2, restarts=3)
        assert short.low_confidence  # too few candidates to see a bend
