#pragma once

#include "fsforge/classifiers/bf_tree.hpp"
#include "fsforge/classifiers/classifier.hpp"
#include "fsforge/classifiers/cross_validation.hpp"
#include "fsforge/classifiers/encoding.hpp"
#include "fsforge/classifiers/factory.hpp"
#include "fsforge/classifiers/logistic.hpp"
#include "fsforge/classifiers/mlp.hpp"
#include "fsforge/classifiers/naive_bayes.hpp"
#include "fsforge/classifiers/rule_learner.hpp"
#include "fsforge/config.hpp"
#include "fsforge/dataset.hpp"
#include "fsforge/error.hpp"
#include "fsforge/io.hpp"
#include "fsforge/metrics.hpp"
#include "fsforge/parallel.hpp"
#include "fsforge/pipeline.hpp"
#include "fsforge/random.hpp"
#include "fsforge/ranking.hpp"
#include "fsforge/report.hpp"
#include "fsforge/resampling.hpp"
#include "fsforge/run_log.hpp"
#include "fsforge/wrapper_ga.hpp"
