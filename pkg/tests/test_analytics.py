import itertools
import math
import random

import pytest
import scipy.stats

from sentisearch.analytics import (
    ACHIEVER,
    EXPLORER,
    DegenerateDataError,
    InsufficientDataError,
    bonferroni_threshold,
    build_taxonomy_report,
    build_treatment_report,
    classification_from_metrics,
    classify_users,
    cognitive_engagement,
    exploration_score,
    kruskal_wallis,
    rank_sum_test,
)
from sentisearch.session import SessionMetrics


def metric(user, treatment, queries=5, time_s=100.0, perceived=None, aesthetics=None):
    return SessionMetrics(
        user_id=user,
        treatment=treatment,
        query_count=queries,
        task_time_s=time_s,
        perceived_time_s=perceived,
        aesthetics_total=aesthetics,
    )


class TestCognitiveEngagement:
    def test_reference_rows(self):
        assert cognitive_engagement(463.00, 507.69) == pytest.approx(-44.69, abs=0.01)
        assert cognitive_engagement(745.23, 770.77) == pytest.approx(-25.54, abs=0.01)
        assert cognitive_engagement(1035.92, 761.54) == pytest.approx(274.38, abs=0.01)

    def test_equal_times_zero(self):
        assert cognitive_engagement(88.0, 88.0) == 0.0

    def test_antisymmetric(self):
        rng = random.Random(0)
        for _ in range(50):
            a, b = 1 + 100 * rng.random(), 1 + 100 * rng.random()
            assert cognitive_engagement(a, b) == -cognitive_engagement(b, a)

    def test_non_positive_rejected(self):
        with pytest.raises(ValueError):
            cognitive_engagement(0.0, 10.0)
        with pytest.raises(ValueError):
            cognitive_engagement(10.0, -1.0)


class TestExplorationScore:
    def test_examples(self):
        assert exploration_score(100.0, 4) == pytest.approx(20.0, abs=1e-12)
        assert exploration_score(900.0, 1) == pytest.approx(30.0, abs=1e-12)

    def test_geometric_mean_identity(self):
        for x in (3.5, 42.0, 700.0):
            assert exploration_score(x, x) == pytest.approx(x, rel=1e-12)

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            exploration_score(0.0, 5)
        with pytest.raises(ValueError):
            exploration_score(100.0, 0)


class TestClassifyUsers:
    def test_four_users(self):
        out = classify_users([("u1", 10.0), ("u2", 20.0), ("u3", 30.0), ("u4", 40.0)])
        classes = {c.user_id: c.user_class for c in out}
        assert classes == {"u1": ACHIEVER, "u2": ACHIEVER, "u3": EXPLORER, "u4": EXPLORER}

    def test_thirteen_users_split_six_seven(self):
        scores = [(f"u{i:02d}", float(i + 1)) for i in range(13)]
        out = classify_users(scores)
        assert sum(1 for c in out if c.user_class == ACHIEVER) == 6
        assert sum(1 for c in out if c.user_class == EXPLORER) == 7

    def test_all_tied_lowest_ids_are_achievers(self):
        out = classify_users([("d", 5.0), ("a", 5.0), ("c", 5.0), ("b", 5.0)])
        achievers = {c.user_id for c in out if c.user_class == ACHIEVER}
        assert achievers == {"a", "b"}

    def test_floor_half_property(self):
        rng = random.Random(1)
        for n in range(2, 51):
            scores = [(f"u{i:03d}", rng.random() * 100) for i in range(n)]
            out = classify_users(scores)
            assert sum(1 for c in out if c.user_class == ACHIEVER) == n // 2
            assert sum(1 for c in out if c.user_class == EXPLORER) == n - n // 2

    def test_invariant_under_rescaling(self):
        rng = random.Random(2)
        scores = [(f"u{i}", rng.random() * 50 + 1) for i in range(9)]
        base = {c.user_id: c.user_class for c in classify_users(scores)}
        scaled = {c.user_id: c.user_class
                  for c in classify_users([(u, s * 7.25) for u, s in scores])}
        assert base == scaled

    def test_fewer_than_two_rejected(self):
        with pytest.raises(InsufficientDataError):
            classify_users([("solo", 3.0)])


class TestKruskalWallis:
    def test_hand_ranked_example(self):
        result = kruskal_wallis([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
        # rank sums 6, 15, 24 => 12/90 * (12 + 75 + 192) - 30 = 7.2
        assert result.statistic == pytest.approx(7.2, abs=1e-9)
        assert result.method == "chi-squared"

    def test_identical_distributions_high_p(self):
        result = kruskal_wallis([[1, 3], [2, 4]])
        assert result.p_value > 0.3

    def test_strong_separation_low_p(self):
        rng = random.Random(3)
        groups = [
            [rng.random() for _ in range(13)],
            [rng.random() + 5 for _ in range(13)],
            [rng.random() + 10 for _ in range(13)],
        ]
        assert kruskal_wallis(groups).p_value < 0.05

    def test_matches_scipy_with_ties(self):
        rng = random.Random(4)
        for _ in range(60):
            groups = [
                [rng.randint(0, 8) for _ in range(rng.randint(2, 9))] for _ in range(3)
            ]
            if len({v for g in groups for v in g}) == 1:
                continue
            ours = kruskal_wallis(groups)
            ref_h, ref_p = scipy.stats.kruskal(*groups)
            assert ours.statistic == pytest.approx(ref_h, rel=1e-10, abs=1e-12)
            assert ours.p_value == pytest.approx(ref_p, rel=1e-8, abs=1e-12)

    def test_rank_invariance_under_monotone_transforms(self):
        rng = random.Random(5)
        transforms = [math.exp, lambda x: 3 * x + 7, lambda x: x**3, math.atan]
        for _ in range(100):
            groups = [
                [rng.random() * 10 - 5 for _ in range(rng.randint(2, 8))]
                for _ in range(rng.randint(2, 4))
            ]
            base = kruskal_wallis(groups).statistic
            f = rng.choice(transforms)
            transformed = kruskal_wallis([[f(v) for v in g] for g in groups]).statistic
            assert transformed == pytest.approx(base, abs=1e-9)

    def test_all_tied_degenerate(self):
        with pytest.raises(DegenerateDataError):
            kruskal_wallis([[2.0, 2.0], [2.0, 2.0, 2.0]])

    def test_input_validation(self):
        with pytest.raises(ValueError):
            kruskal_wallis([[1.0, 2.0]])
        with pytest.raises(ValueError):
            kruskal_wallis([[1.0], []])
        with pytest.raises(ValueError):
            kruskal_wallis([[1.0], [2.0]])


def brute_force_two_sided_p(a, b):
    """Independent oracle: enumerate every assignment of the pooled values."""
    pooled = sorted(a + b)
    n_a = len(a)
    total = 0
    u_values = []
    for positions in itertools.combinations(range(len(pooled)), n_a):
        chosen = [pooled[i] for i in positions]
        rest = [pooled[i] for i in range(len(pooled)) if i not in positions]
        u = sum(
            1.0 if x > y else 0.5 if x == y else 0.0 for x in chosen for y in rest
        )
        u_values.append(u)
        total += 1
    u_obs = sum(1.0 if x > y else 0.5 if x == y else 0.0 for x in a for y in b)
    u_min = min(u_obs, len(a) * len(b) - u_obs)
    u_max = len(a) * len(b) - u_min
    low = sum(1 for u in u_values if u <= u_min)
    high = sum(1 for u in u_values if u >= u_max)
    return min(1.0, (low + high) / total)


class TestRankSum:
    def test_two_vs_two(self):
        result = rank_sum_test([1, 2], [3, 4])
        assert result.statistic == 0.0
        assert result.p_value == pytest.approx(2.0 / 6.0, abs=1e-12)
        assert result.method == "exact"

    def test_identical_multisets_p_one(self):
        result = rank_sum_test([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
        assert result.p_value == 1.0

    def test_fully_separated_six_seven(self):
        result = rank_sum_test([1, 2, 3, 4, 5, 6], [10, 11, 12, 13, 14, 15, 16])
        assert result.method == "exact"
        assert result.p_value == pytest.approx(2.0 / 1716.0, abs=1e-12)

    def test_exact_path_matches_enumeration(self):
        rng = random.Random(6)
        for _ in range(40):
            n_a = rng.randint(1, 5)
            n_b = rng.randint(1, 8 - min(n_a, 4))
            values = rng.sample(range(100), n_a + n_b)
            a, b = values[:n_a], values[n_a:]
            result = rank_sum_test(a, b)
            assert result.method == "exact"
            assert result.p_value == pytest.approx(
                brute_force_two_sided_p(a, b), abs=1e-12
            )

    def test_large_groups_use_normal_approximation(self):
        a = list(range(11))
        b = list(range(5, 16))
        result = rank_sum_test(a, b)
        assert result.method == "normal-approximation"
        ref = scipy.stats.mannwhitneyu(a, b, alternative="two-sided", method="asymptotic")
        assert result.p_value == pytest.approx(ref.pvalue, rel=1e-10)

    def test_ties_force_normal_approximation(self):
        a = [1, 2, 2]
        b = [2, 3, 4]
        result = rank_sum_test(a, b)
        assert result.method == "normal-approximation"
        ref = scipy.stats.mannwhitneyu(a, b, alternative="two-sided", method="asymptotic")
        assert result.p_value == pytest.approx(ref.pvalue, rel=1e-10)

    def test_all_identical_p_one(self):
        result = rank_sum_test([4.0, 4.0], [4.0, 4.0, 4.0])
        assert result.p_value == 1.0

    def test_empty_group_rejected(self):
        with pytest.raises(ValueError):
            rank_sum_test([], [1.0])


class TestBonferroni:
    def test_three_comparisons(self):
        threshold = bonferroni_threshold(0.05, 3)
        assert threshold == pytest.approx(0.0166667, abs=1e-5)
        assert threshold < 0.017

    def test_single_comparison(self):
        assert bonferroni_threshold(0.05, 1) == 0.05

    def test_two_comparisons(self):
        assert bonferroni_threshold(0.01, 2) == 0.005

    def test_validation(self):
        with pytest.raises(ValueError):
            bonferroni_threshold(0.0, 3)
        with pytest.raises(ValueError):
            bonferroni_threshold(0.05, 0)


class TestTreatmentReport:
    def _constant_metrics(self):
        means = {"BA": (7.0, 463.0, 507.0, 13), "PC": (14.0, 745.0, 770.0, 15),
                 "SC": (19.0, 1035.0, 761.0, 17)}
        metrics = []
        for user in range(13):
            for treatment, (q, t, p, a) in means.items():
                metrics.append(
                    metric(f"u{user:02d}", treatment, queries=int(q), time_s=t,
                           perceived=p, aesthetics=a)
                )
        return metrics, means

    def test_means_of_constants(self):
        metrics, means = self._constant_metrics()
        report = build_treatment_report(metrics)
        for treatment, (q, t, p, a) in means.items():
            row = report["metrics"]
            assert row["Query Count"]["means"][treatment] == pytest.approx(q)
            assert row["Task Time (s)"]["means"][treatment] == pytest.approx(t)
            assert row["Perceived Time"]["means"][treatment] == pytest.approx(p)
            assert row["Cognitive Engagement"]["means"][treatment] == pytest.approx(t - p)
            assert row["Aesthetics"]["means"][treatment] == pytest.approx(a)
        assert report["participants"] == {"BA": 13, "PC": 13, "SC": 13}
        assert report["bonferroni_threshold"] == pytest.approx(0.05 / 3)

    def test_shifted_treatment_flagged(self):
        rng = random.Random(7)
        metrics = []
        for user in range(13):
            base = rng.random() * 50
            for treatment in ("BA", "PC", "SC"):
                shift = 1000.0 if treatment == "SC" else 0.0
                metrics.append(
                    metric(f"u{user:02d}", treatment, queries=3,
                           time_s=100.0 + base + shift, perceived=90.0)
                )
        report = build_treatment_report(metrics)
        row = report["metrics"]["Task Time (s)"]
        assert row["kruskal_wallis"]["p"] < report["bonferroni_threshold"]
        assert row["posthoc"]["BA vs SC"]["significant"]
        assert row["posthoc"]["PC vs SC"]["significant"]
        assert not row["posthoc"]["BA vs PC"]["significant"]

    def test_degenerate_metric_does_not_block_report(self):
        metrics = [
            metric(f"u{i}", t, queries=5, time_s=100.0 + i * t_idx, perceived=None)
            for i in range(4)
            for t_idx, t in enumerate(("BA", "SC"))
        ]
        report = build_treatment_report(metrics)
        assert "error" in report["metrics"]["Query Count"]["kruskal_wallis"]
        assert "K" in report["metrics"]["Task Time (s)"]["kruskal_wallis"]
        assert "error" in report["metrics"]["Perceived Time"]["kruskal_wallis"]

    def test_missing_questionnaire_excluded_per_metric(self):
        metrics = [
            metric("u1", "BA", queries=2, time_s=100.0, perceived=90.0, aesthetics=15),
            metric("u2", "BA", queries=4, time_s=120.0),
            metric("u1", "SC", queries=6, time_s=150.0, perceived=80.0, aesthetics=20),
            metric("u2", "SC", queries=8, time_s=160.0),
        ]
        report = build_treatment_report(metrics)
        assert report["metrics"]["Query Count"]["n"] == {"BA": 2, "SC": 2}
        assert report["metrics"]["Perceived Time"]["n"] == {"BA": 1, "SC": 1}
        assert report["metrics"]["Aesthetics"]["means"]["BA"] == 15.0

    def test_means_match_naive_oracle_to_1e9(self):
        rng = random.Random(31)
        metrics = [
            metric(f"u{i:02d}", t, queries=rng.randint(1, 40),
                   time_s=10.0 + 2000.0 * rng.random(),
                   perceived=5.0 + 1500.0 * rng.random(),
                   aesthetics=rng.randint(5, 25))
            for i in range(13)
            for t in ("BA", "PC", "SC")
        ]
        report = build_treatment_report(metrics)
        for treatment in ("BA", "PC", "SC"):
            rows = [m for m in metrics if m.treatment == treatment]
            naive = sum(m.task_time_s for m in rows) / len(rows)
            assert abs(report["metrics"]["Task Time (s)"]["means"][treatment] - naive) < 1e-9
            naive_q = sum(m.query_count for m in rows) / len(rows)
            assert abs(report["metrics"]["Query Count"]["means"][treatment] - naive_q) < 1e-9

    def test_zero_user_treatment_rejected(self):
        metrics = [metric("u1", "BA"), metric("u2", "SC")]
        with pytest.raises(InsufficientDataError):
            build_treatment_report(metrics, treatments=("BA", "SC", "PC"))

    def test_single_treatment_rejected(self):
        with pytest.raises(InsufficientDataError):
            build_treatment_report([metric("u1", "BA"), metric("u2", "BA")])


class TestTaxonomyReport:
    def _classified(self, metrics):
        classifications, excluded = classification_from_metrics(metrics)
        assert excluded == []
        return classifications

    def test_total_queries_row(self):
        # achiever users issue 23 to 26 queries in total, explorers 52 to 55;
        # row means then land on the reference 25.33 / 54.14 pair
        metrics = []
        ach_totals = [26, 26, 26, 26, 25, 23]
        exp_totals = [55, 55, 55, 54, 54, 54, 52]
        for i, total in enumerate(ach_totals):
            metrics.append(metric(f"a{i}", "BA", queries=total, time_s=1372.5))
        for i, total in enumerate(exp_totals):
            metrics.append(metric(f"e{i}", "BA", queries=total, time_s=2991.26))
        classifications = self._classified(metrics)
        report = build_taxonomy_report(metrics, classifications)
        row = report["rows"]["Total Queries"]
        assert row["achiever_mean"] == pytest.approx(25.33, abs=0.01)
        assert row["explorer_mean"] == pytest.approx(54.14, abs=0.01)

    def test_identical_groups_p_one(self):
        metrics = []
        for i in range(3):
            metrics.append(metric(f"a{i}", "BA", queries=5, time_s=10.0, perceived=9.0))
            metrics.append(metric(f"e{i}", "BA", queries=5, time_s=1000.0, perceived=9.0))
        classifications = self._classified(metrics)
        report = build_taxonomy_report(metrics, classifications)
        assert report["rows"]["Perceived Time BA"]["p"] == 1.0

    def test_separated_engagement_six_seven(self):
        metrics = []
        for i in range(6):
            metrics.append(
                metric(f"a{i}", "SC", queries=2, time_s=100.0 + i, perceived=200.0)
            )
        for i in range(7):
            metrics.append(
                metric(f"e{i}", "SC", queries=40, time_s=1000.0 + i, perceived=200.0)
            )
        classifications = self._classified(metrics)
        report = build_taxonomy_report(metrics, classifications)
        row = report["rows"]["C. Engagement SC"]
        assert row["method"] == "exact"
        assert row["p"] == pytest.approx(2.0 / 1716.0, abs=1e-9)

    def test_row_labels_match_table_shape(self):
        metrics = []
        for i in range(4):
            for t in ("BA", "SC", "PC"):
                metrics.append(
                    metric(f"u{i}", t, queries=i + 1, time_s=50.0 * (i + 1),
                           perceived=40.0, aesthetics=15)
                )
        classifications = self._classified(metrics)
        report = build_taxonomy_report(metrics, classifications)
        expected = ["Total Queries", "Total Time"]
        for prefix in ("Queries", "Task Time", "Perceived Time", "C. Engagement"):
            expected += [f"{prefix} {t}" for t in ("BA", "SC", "PC")]
        assert list(report["rows"]) == expected

    def test_unclassified_user_rejected(self):
        metrics = [metric("u1", "BA"), metric("u2", "BA")]
        classifications, _ = classification_from_metrics(metrics)
        with pytest.raises(InsufficientDataError):
            build_taxonomy_report(metrics + [metric("u3", "BA")], classifications)

    def test_single_user_rejected(self):
        with pytest.raises(InsufficientDataError):
            classification_from_metrics([metric("only", "BA")])

    def test_zero_query_user_reported_separately(self):
        metrics = [
            metric("u1", "BA", queries=0, time_s=10.0),
            metric("u2", "BA", queries=5, time_s=10.0),
            metric("u3", "BA", queries=6, time_s=12.0),
        ]
        classifications, excluded = classification_from_metrics(metrics)
        assert [e["user_id"] for e in excluded] == ["u1"]
        assert {c.user_id for c in classifications} == {"u2", "u3"}
