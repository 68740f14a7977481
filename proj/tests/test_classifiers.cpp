#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "fixtures.hpp"

using namespace fsforge;

namespace {

void expect_distribution(const Distribution& p, std::size_t classes) {
  ASSERT_EQ(p.size(), classes);
  double s = 0;
  for (double v : p) {
    EXPECT_GE(v, 0.0);
    s += v;
  }
  EXPECT_NEAR(s, 1.0, 1e-9);
}

double training_accuracy(const Classifier& m, const Dataset& d) {
  double ok = 0;
  for (const auto& i : d.instances()) ok += m.predict(i) == i.label;
  return ok / static_cast<double>(d.size());
}

Dataset xor_fixture() {
  std::vector<std::vector<int>> rows;
  std::vector<std::size_t> labels;
  for (int rep = 0; rep < 10; ++rep) {
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        rows.push_back({a, b});
        labels.push_back(static_cast<std::size_t>(a ^ b));
      }
    }
  }
  return fixtures::nominal(rows, labels);
}

EncodedData random_encoded(Rng& rng, std::size_t rows, std::size_t cols, std::size_t classes) {
  EncodedData e;
  e.rows = rows;
  e.cols = cols;
  e.classes = classes;
  for (std::size_t i = 0; i < rows * cols; ++i) e.x.push_back(rng.uniform(-1, 1));
  for (std::size_t i = 0; i < rows; ++i) e.y.push_back(rng.index(classes));
  return e;
}

template <class Loss>
double gradient_error(std::vector<double> theta, const std::vector<double>& analytic, Loss loss) {
  const double h = 1e-5;
  double diff = 0, scale = 0;
  for (std::size_t k = 0; k < theta.size(); ++k) {
    const double keep = theta[k];
    theta[k] = keep + h;
    const double up = loss(theta);
    theta[k] = keep - h;
    const double down = loss(theta);
    theta[k] = keep;
    const double numeric = (up - down) / (2 * h);
    diff += (numeric - analytic[k]) * (numeric - analytic[k]);
    scale += numeric * numeric + analytic[k] * analytic[k];
  }
  return std::sqrt(diff) / std::max(std::sqrt(scale), 1e-12);
}

}  // namespace

TEST(Factory, NamesRoundTrip) {
  for (ClassifierId id : kAllClassifiers) {
    EXPECT_EQ(parse_classifier_id(to_string(id)), id);
    EXPECT_EQ(make_classifier(id)->id(), id);
  }
  EXPECT_THROW(parse_classifier_id("svm"), ConfigError);
}

TEST(AllClassifiers, PredictBeforeFitThrows) {
  const Dataset d = fixtures::nominal({{0}, {1}}, {0, 1});
  for (ClassifierId id : kAllClassifiers) {
    EXPECT_THROW(make_classifier(id)->predict_distribution(d[0]), std::logic_error);
  }
}

TEST(AllClassifiers, ValidDistributionsOnRandomData) {
  Rng rng(31);
  for (int t = 0; t < 5; ++t) {
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> labels;
    for (int i = 0; i < 30; ++i) {
      rows.push_back({rng.uniform(-3, 3), rng.uniform(0, 1), static_cast<double>(rng.index(4))});
      labels.push_back(i < 3 ? static_cast<std::size_t>(i) : rng.index(3));
    }
    const Dataset num = fixtures::numeric(rows, labels, 3);
    const Dataset nom = fixtures::lung();
    for (ClassifierId id : kAllClassifiers) {
      for (const Dataset* d : {&num, &nom}) {
        auto m = make_classifier(id, 7);
        m->fit(*d);
        for (const auto& i : d->instances()) expect_distribution(m->predict_distribution(i), d->num_classes());
      }
    }
  }
}

TEST(AllClassifiers, DeterministicForSeed) {
  const Dataset d = fixtures::lung();
  for (ClassifierId id : kAllClassifiers) {
    auto a = make_classifier(id, 9);
    auto b = make_classifier(id, 9);
    a->fit(d);
    b->fit(d);
    for (const auto& i : d.instances()) EXPECT_EQ(a->predict_distribution(i), b->predict_distribution(i));
  }
}

TEST(AllClassifiers, ProjectionIsTheMaskingMechanism) {
  const Dataset d = fixtures::lung();
  const std::vector<std::size_t> keep = {3, 8, 20};
  const Dataset p = d.project(keep);
  std::vector<AttributeSpec> schema;
  std::vector<Instance> rows;
  for (std::size_t j : keep) schema.push_back(d.attribute(j));
  for (const auto& i : d.instances()) {
    Instance r{{}, i.label, i.origin};
    for (std::size_t j : keep) r.values.push_back(i.values[j]);
    rows.push_back(r);
  }
  const Dataset manual(d.relation(), schema, d.class_domain(), rows, d.class_name());
  for (ClassifierId id : kAllClassifiers) {
    auto a = make_classifier(id, 3);
    auto b = make_classifier(id, 3);
    a->fit(p);
    b->fit(manual);
    for (std::size_t i = 0; i < p.size(); ++i) {
      EXPECT_EQ(a->predict_distribution(p[i]), b->predict_distribution(manual[i]));
    }
  }
}

TEST(NaiveBayes, LaplaceExample) {
  const Dataset d = fixtures::nominal({{0}, {0}, {0}, {1}, {1}, {1}}, {0, 0, 0, 1, 1, 1});
  NaiveBayes nb;
  nb.fit(d);
  const double pa_pos = 4.0 / 5.0, pa_neg = 1.0 / 5.0;
  EXPECT_NEAR(nb.predict_distribution(d[0])[0], 0.5 * pa_pos / (0.5 * pa_pos + 0.5 * pa_neg), 1e-9);
  EXPECT_NEAR(nb.predict_distribution(d[0])[0], 0.8, 1e-9);
}

TEST(NaiveBayes, SingleClassTraining) {
  const Dataset d = fixtures::nominal({{0}, {1}, {1}}, {1, 1, 1});
  NaiveBayes nb;
  nb.fit(d);
  EXPECT_EQ(nb.predict_distribution(d[0]), (Distribution{0.0, 1.0}));
}

TEST(NaiveBayes, MirroredData) {
  const Dataset a = fixtures::nominal({{0}, {0}, {1}, {1}, {1}}, {0, 0, 0, 1, 1});
  const Dataset b = fixtures::nominal({{1}, {1}, {0}, {0}, {0}}, {1, 1, 1, 0, 0});
  NaiveBayes ma, mb;
  ma.fit(a);
  mb.fit(b);
  for (int v = 0; v < 2; ++v) {
    const Instance x{{static_cast<double>(v)}, 0, Origin::original};
    const Instance y{{static_cast<double>(1 - v)}, 0, Origin::original};
    const auto pa = ma.predict_distribution(x);
    const auto pb = mb.predict_distribution(y);
    EXPECT_NEAR(pa[0], pb[1], 1e-12);
    EXPECT_NEAR(pa[1], pb[0], 1e-12);
  }
}

TEST(NaiveBayes, GaussianNumeric) {
  const Dataset d = fixtures::numeric({{0}, {2}, {10}, {12}}, {0, 0, 1, 1});
  NaiveBayes nb;
  nb.fit(d);
  // Equal priors and equal MLE variances: posterior is a logistic of the mean gap.
  const double var = 1.0;
  const Instance x{{4}, 0, Origin::original};
  const double l0 = -(4.0 - 1.0) * (4.0 - 1.0) / (2 * var), l1 = -(4.0 - 11.0) * (4.0 - 11.0) / (2 * var);
  EXPECT_NEAR(nb.predict_distribution(x)[0], 1.0 / (1.0 + std::exp(l1 - l0)), 1e-9);
}

TEST(NaiveBayes, ConstantNumericUsesVarianceFloor) {
  const Dataset d = fixtures::numeric({{1}, {1}, {5}, {6}}, {0, 0, 1, 1});
  NaiveBayes nb;
  nb.fit(d);
  const auto p = nb.predict_distribution(Instance{{1}, 0, Origin::original});
  EXPECT_TRUE(std::isfinite(p[0]));
  EXPECT_GT(p[0], 0.99);
}

TEST(Logistic, SeparableFixture) {
  const Dataset d = fixtures::nominal({{0}, {0}, {0}, {0}, {0}, {1}, {1}, {1}, {1}, {1}}, {0, 0, 0, 0, 0, 1, 1, 1, 1, 1});
  LogisticRegression m;
  m.fit(d);
  EXPECT_GT(m.predict_distribution(d[0])[0], 0.9);
  EXPECT_GT(m.predict_distribution(d[9])[1], 0.9);
}

TEST(Logistic, ZeroWeightsAreUniform) {
  const Dataset d = fixtures::lung();
  LogisticRegression m;
  m.reset_to_zero(d);
  for (double v : m.predict_distribution(d[0])) EXPECT_DOUBLE_EQ(v, 1.0 / 3.0);
}

TEST(Logistic, GradientMatchesFiniteDifferences) {
  Rng rng(41);
  for (int t = 0; t < 20; ++t) {
    const std::size_t cols = 1 + rng.index(4), classes = 2 + rng.index(3);
    const EncodedData e = random_encoded(rng, 3 + rng.index(6), cols, classes);
    std::vector<double> theta(classes * (cols + 1));
    for (double& w : theta) w = rng.uniform(-1, 1);
    const double ridge = 0.01;
    std::vector<double> g, scratch;
    LogisticRegression::loss_and_gradient(theta, e, ridge, g);
    const double err = gradient_error(theta, g, [&](const std::vector<double>& th) {
      return LogisticRegression::loss_and_gradient(th, e, ridge, scratch);
    });
    EXPECT_LT(err, 1e-4);
  }
}

TEST(Mlp, GradientMatchesFiniteDifferences) {
  Rng rng(43);
  for (int t = 0; t < 20; ++t) {
    MultilayerPerceptron::Shape s{1 + rng.index(4), 1 + rng.index(4), 2 + rng.index(2)};
    const EncodedData e = random_encoded(rng, 3, s.inputs, s.classes);
    const auto theta = MultilayerPerceptron::initial_parameters(s, rng.next());
    std::vector<double> g, scratch;
    MultilayerPerceptron::loss_and_gradient(theta, s, e, g);
    const double err = gradient_error(theta, g, [&](const std::vector<double>& th) {
      return MultilayerPerceptron::loss_and_gradient(th, s, e, scratch);
    });
    EXPECT_LT(err, 1e-4);
  }
}

TEST(Mlp, HiddenLayerSize) {
  const Dataset d = fixtures::lung();
  MultilayerPerceptron m;
  m.fit(d);
  std::size_t inputs = 0;
  for (const auto& a : d.schema()) inputs += a.arity();
  EXPECT_EQ(m.shape().inputs, inputs);
  EXPECT_EQ(m.shape().hidden, (inputs + 3 + 1) / 2);
}

TEST(Mlp, SolvesXor) {
  const Dataset d = xor_fixture();
  for (std::uint64_t seed : {0, 1, 2, 3, 42}) {
    MlpParams p;
    p.seed = seed;
    MultilayerPerceptron m(p);
    m.fit(d);
    EXPECT_EQ(training_accuracy(m, d), 1.0) << "seed " << seed;
  }
}

TEST(Mlp, SameSeedSameWeights) {
  const Dataset d = xor_fixture();
  MlpParams p;
  p.seed = 5;
  MultilayerPerceptron a(p), b(p);
  a.fit(d);
  b.fit(d);
  EXPECT_EQ(a.parameters(), b.parameters());
}

TEST(BfTree, PureDataIsOneLeaf) {
  const Dataset d = fixtures::nominal({{0}, {1}, {0}}, {1, 1, 1});
  BestFirstTree t;
  t.fit(d);
  EXPECT_EQ(t.nodes().size(), 1u);
  const auto p = t.predict_distribution(d[0]);
  EXPECT_GT(p[1], p[0]);
}

TEST(BfTree, CopyOfClassGivesDepthOne) {
  const Dataset d = fixtures::nominal({{0, 1}, {1, 1}, {0, 0}, {1, 0}, {0, 1}, {1, 0}}, {0, 1, 0, 1, 0, 1});
  BestFirstTree t;
  t.fit(d);
  EXPECT_EQ(t.depth(), 1u);
  EXPECT_EQ(training_accuracy(t, d), 1.0);
}

TEST(BfTree, NumericThreshold) {
  const Dataset d = fixtures::numeric({{0.1}, {0.2}, {0.9}, {1.3}}, {0, 0, 1, 1});
  BestFirstTree t;
  t.fit(d);
  EXPECT_EQ(training_accuracy(t, d), 1.0);
  EXPECT_EQ(t.predict(Instance{{0.3}, 0, Origin::original}), 0u);
  EXPECT_EQ(t.predict(Instance{{5.0}, 0, Origin::original}), 1u);
}

TEST(BfTree, ExpandsByReductionNotDepth) {
  const Dataset d = fixtures::nominal({{1, 1, 0}, {0, 0, 1}, {0, 0, 0}, {0, 1, 1}, {0, 0, 1}, {0, 1, 0}, {1, 0, 0}, {1, 1, 0}},
                                      {0, 0, 0, 1, 0, 0, 1, 1});
  BestFirstTree t;
  t.fit(d);
  // Hand-computed global Gini reductions (n*G - nl*Gl - nr*Gr) / N:
  //   f0 != 1 branch (4:1) split on f1       -> (5*0.32 - 2*0.5) / 8 = 0.075
  //   its impure child (1:1) split on f2     -> (2*0.5) / 8          = 0.125
  //   f0 == 1 branch (1:2) split on f1       -> (3*(4/9) - 2*0.5) / 8 = 1/24
  std::vector<std::size_t> depths;
  for (const auto& e : t.expansions()) depths.push_back(e.depth);
  EXPECT_EQ(depths, (std::vector<std::size_t>{0, 1, 2, 1}));
  ASSERT_EQ(t.expansions().size(), 4u);
  EXPECT_NEAR(t.expansions()[1].reduction, 0.075, 1e-12);
  EXPECT_NEAR(t.expansions()[2].reduction, 0.125, 1e-12);
  EXPECT_NEAR(t.expansions()[3].reduction, 1.0 / 24.0, 1e-12);
  EXPECT_EQ(training_accuracy(t, d), 7.0 / 8.0);
}

TEST(RuleLearner, CopyOfClassGivesExactRules) {
  const Dataset d = fixtures::nominal({{0}, {0}, {0}, {1}, {1}, {1}, {1}, {2}, {2}, {2}, {2}, {2}},
                                      {0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2, 2}, 3, 3);
  RuleLearner r;
  r.fit(d);
  ASSERT_EQ(r.rules().size(), 2u);
  for (const auto& rule : r.rules()) {
    ASSERT_EQ(rule.conditions.size(), 1u);
    EXPECT_EQ(rule.conditions[0].op, RuleLearner::Condition::Op::equals);
    EXPECT_EQ(rule.conditions[0].value, static_cast<double>(rule.target));
  }
  EXPECT_EQ(r.rules()[0].target, 0u);
  EXPECT_EQ(training_accuracy(r, d), 1.0);
}

TEST(RuleLearner, NothingBeatsDefault) {
  const Dataset d = fixtures::nominal({{0}, {0}, {0}, {0}, {0}, {0}, {0}, {0}, {0}, {0}},
                                      {0, 0, 0, 0, 0, 0, 1, 1, 1, 1});
  RuleLearner r;
  r.fit(d);
  EXPECT_TRUE(r.rules().empty());
  for (const auto& i : d.instances()) EXPECT_EQ(r.predict(i), 0u);
}

TEST(RuleLearner, PruneErrorBelowHalf) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Dataset d = fixtures::boolean_task(60, 5, seed, 0.15, [](int a, int b) { return a && b; });
    RuleLearner r(RuleLearnerParams{seed});
    r.fit(d);
    for (const auto& rule : r.rules()) EXPECT_LT(rule.prune_error(), 0.5) << "seed " << seed;
  }
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RuleLearner r(RuleLearnerParams{seed});
    r.fit(fixtures::lung());
    for (const auto& rule : r.rules()) EXPECT_LT(rule.prune_error(), 0.5);
  }
}

TEST(CrossValidate, LeaveOneOut) {
  const Dataset d = fixtures::nominal({{0}, {1}, {0}, {1}}, {0, 1, 0, 1});
  const FoldPlan plan = stratified_folds(d, 4, 1);
  const CvResult r = cross_validate(ClassifierId::naive_bayes, d, plan);
  EXPECT_EQ(r.models_trained, 4u);
  ASSERT_EQ(r.predictions.size(), 4u);
  for (const auto& p : r.predictions) expect_distribution(p, 2);
}

TEST(CrossValidate, PerfectFeatureNoErrors) {
  const Dataset d = fixtures::boolean_task(40, 3, 2, 0.0, [](int a, int) { return a == 1; });
  const CvResult r = cross_validate(ClassifierId::naive_bayes, d, stratified_folds(d, 10, 3));
  EXPECT_EQ(misclassified_count(r.predictions, d), 0u);
}

TEST(CrossValidate, MissingClassNamesFold) {
  const Dataset d = fixtures::nominal({{0}, {1}, {0}, {1}, {1}}, {0, 1, 0, 0, 1});
  FoldPlan plan{3, {0, 1, 2, 2, 1}, 0};
  try {
    cross_validate(ClassifierId::naive_bayes, d, plan);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("fold 1"), std::string::npos);
  }
}

TEST(CrossValidate, ThreadCountDoesNotMatter) {
  const Dataset d = fixtures::lung();
  const FoldPlan plan = stratified_folds(d, 10, 4);
  for (ClassifierId id : kAllClassifiers) {
    EXPECT_EQ(cross_validate(id, d, plan, 5, 1).predictions, cross_validate(id, d, plan, 5, 8).predictions);
  }
}
