#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "fixtures.hpp"

using namespace fsforge;

TEST(Dataset, RejectsUnknownLabel) {
  EXPECT_THROW(Dataset("r", {AttributeSpec::make_numeric("x")}, {"a", "b"}, {{{1.0}, 2, Origin::original}}),
               DataError);
}

TEST(Dataset, RejectsSingleClassDomain) {
  EXPECT_THROW(Dataset("r", {AttributeSpec::make_numeric("x")}, {"a"}, {}), DataError);
}

TEST(Dataset, RejectsDuplicateAttributeNames) {
  EXPECT_THROW(Dataset("r", {AttributeSpec::make_numeric("x"), AttributeSpec::make_numeric("x")}, {"a", "b"}, {}),
               DataError);
}

TEST(Dataset, RejectsBadNominalDomain) {
  EXPECT_THROW(Dataset("r", {AttributeSpec::make_nominal("x", {})}, {"a", "b"}, {}), DataError);
  EXPECT_THROW(Dataset("r", {AttributeSpec::make_nominal("x", {"u", "u"})}, {"a", "b"}, {}), DataError);
}

TEST(Dataset, RejectsOutOfRangeNominalIndexAndArity) {
  const std::vector<AttributeSpec> s = {AttributeSpec::make_nominal("x", {"u", "v"})};
  EXPECT_THROW(Dataset("r", s, {"a", "b"}, {{{2.0}, 0, Origin::original}}), DataError);
  EXPECT_THROW(Dataset("r", s, {"a", "b"}, {{{0.0, 1.0}, 0, Origin::original}}), DataError);
}

TEST(Dataset, ProjectKeepsChosenColumns) {
  const Dataset d = fixtures::nominal({{0, 1, 0}, {1, 0, 1}}, {0, 1});
  const std::vector<std::size_t> keep = {2, 0};
  const Dataset p = d.project(keep);
  ASSERT_EQ(p.num_attributes(), 2u);
  EXPECT_EQ(p.attribute(0).name, "f2");
  EXPECT_EQ(p[1].values, (std::vector<double>{1, 1}));
}

TEST(Impute, NominalModeWithinClass) {
  const Dataset d = fixtures::nominal({{0}, {0}, {0}, {1}}, {0, 0, 0, 0});
  std::vector<Instance> rows = d.instances();
  rows[2].values[0] = kMissing;
  const Dataset out = impute_missing(d.with_instances(rows));
  EXPECT_EQ(out[2].values[0], 0.0);
  EXPECT_EQ(out.count_missing(), 0u);
}

TEST(Impute, TieGoesToLowestIndex) {
  const Dataset d = fixtures::nominal({{1}, {0}, {0}}, {0, 0, 0});
  std::vector<Instance> rows = d.instances();
  rows[2].values[0] = kMissing;
  EXPECT_EQ(impute_missing(d.with_instances(rows))[2].values[0], 0.0);
}

TEST(Impute, NumericMeanWithinClass) {
  const Dataset d = fixtures::numeric({{1}, {3}, {0}, {100}}, {0, 0, 0, 1});
  std::vector<Instance> rows = d.instances();
  rows[2].values[0] = kMissing;
  EXPECT_DOUBLE_EQ(impute_missing(d.with_instances(rows))[2].values[0], 2.0);
}

TEST(Impute, FallsBackToGlobalWhenClassHasNoValues) {
  const Dataset d = fixtures::nominal({{1}, {1}, {0}}, {0, 0, 1});
  std::vector<Instance> rows = d.instances();
  rows[2].values[0] = kMissing;
  EXPECT_EQ(impute_missing(d.with_instances(rows))[2].values[0], 1.0);
}

TEST(Impute, IdentityWithoutMissingCells) {
  const Dataset d = fixtures::nominal({{1, 0}, {0, 1}}, {0, 1});
  EXPECT_EQ(impute_missing(d), d);
}

TEST(Impute, LungCancerHasNoMissingAfterwards) {
  const Dataset raw = fixtures::lung_raw();
  std::vector<std::pair<std::size_t, std::size_t>> holes;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    for (std::size_t j = 0; j < raw.num_attributes(); ++j) {
      if (is_missing(raw[i].values[j])) holes.emplace_back(i, j);
    }
  }
  // Attributes 5 and 39 of the UCI file (class first, 1-based) are the
  // predictive columns 3 and 37 here.
  const std::vector<std::pair<std::size_t, std::size_t>> expected = {{0, 3}, {14, 3}, {18, 3}, {20, 3}, {25, 37}};
  EXPECT_EQ(holes, expected);
  const Dataset d = impute_missing(raw);
  EXPECT_EQ(d.count_missing(), 0u);
  for (const auto& [i, j] : holes) {
    EXPECT_LT(d[i].values[j], static_cast<double>(d.attribute(j).arity()));
  }
}

TEST(Folds, PerfectDivisibility) {
  const Dataset d = fixtures::nominal({{0}, {0}, {0}, {0}, {0}, {1}, {1}, {1}, {1}, {1}}, {0, 0, 0, 0, 0, 1, 1, 1, 1, 1});
  const FoldPlan plan = stratified_folds(d, 5, 9);
  for (std::size_t f = 0; f < 5; ++f) {
    const auto rows = plan.test_rows(f);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_NE(d[rows[0]].label, d[rows[1]].label);
  }
}

TEST(Folds, Deterministic) {
  const Dataset d = fixtures::lung();
  EXPECT_EQ(stratified_folds(d, 10, 5).assignments, stratified_folds(d, 10, 5).assignments);
}

TEST(Folds, Errors) {
  const Dataset d = fixtures::nominal({{0}, {1}, {0}}, {0, 1, 0});
  EXPECT_THROW(stratified_folds(d, 4, 1), DataError);
  EXPECT_THROW(stratified_folds(d, 1, 1), ConfigError);
}

TEST(Folds, TrainAndTestPartitionRows) {
  const Dataset d = fixtures::lung();
  const FoldPlan plan = stratified_folds(d, 10, 3);
  for (std::size_t f = 0; f < plan.k; ++f) {
    auto test = plan.test_rows(f);
    auto train = plan.train_rows(f);
    EXPECT_EQ(test.size() + train.size(), d.size());
    std::set<std::size_t> all(test.begin(), test.end());
    all.insert(train.begin(), train.end());
    EXPECT_EQ(all.size(), d.size());
  }
}

void expect_stratified(const Dataset& d, const FoldPlan& plan) {
  for (std::size_t c = 0; c < d.num_classes(); ++c) {
    std::vector<std::size_t> per(plan.k, 0);
    for (std::size_t i = 0; i < d.size(); ++i) {
      ASSERT_LT(plan.assignments[i], plan.k);
      if (d[i].label == c) ++per[plan.assignments[i]];
    }
    EXPECT_LE(*std::max_element(per.begin(), per.end()) - *std::min_element(per.begin(), per.end()), 1u);
  }
}

TEST(Folds, LungCancerTenFold) {
  const Dataset d = fixtures::lung();
  expect_stratified(d, stratified_folds(d, 10, kDefaultSeed));
}

TEST(Folds, StratificationProperty) {
  Rng rng(77);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 4 + rng.index(60);
    const std::size_t classes = 2 + rng.index(3);
    std::vector<std::vector<int>> rows;
    std::vector<std::size_t> labels;
    for (std::size_t i = 0; i < n; ++i) {
      rows.push_back({static_cast<int>(rng.index(2))});
      labels.push_back(i < classes ? i : rng.index(classes));
    }
    const Dataset d = fixtures::nominal(rows, labels, 2, classes);
    const std::size_t k = 2 + rng.index(std::min<std::size_t>(n - 1, 10));
    expect_stratified(d, stratified_folds(d, k, rng.next()));
  }
}

TEST(Random, DerivedSeedsDiffer) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, "a"), derive_seed(1, "b"));
  EXPECT_EQ(derive_seed(5, "ga"), derive_seed(5, "ga"));
}

TEST(Random, UniformRange) {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(rng.index(7), 7u);
  }
}

TEST(Parallel, EveryIndexOnce) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 8, [&](std::size_t i) { hits[i] += 1; });
  EXPECT_EQ(std::count(hits.begin(), hits.end(), 1), 1000);
}

TEST(Parallel, RethrowsWorkerError) {
  EXPECT_THROW(parallel_for(50, 4,
                            [](std::size_t i) {
                              if (i == 17) throw DataError("boom");
                            }),
               DataError);
}
