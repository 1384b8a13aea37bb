#ifndef CHURN_CHURN_HPP
#define CHURN_CHURN_HPP

#include "churn/classifier.hpp"
#include "churn/confusion.hpp"
#include "churn/csv.hpp"
#include "churn/eval.hpp"
#include "churn/features.hpp"
#include "churn/graph.hpp"
#include "churn/ingest.hpp"
#include "churn/metrics.hpp"
#include "churn/metrics_io.hpp"
#include "churn/snapshot_io.hpp"
#include "churn/stm.hpp"
#include "churn/synth.hpp"
#include "churn/time.hpp"

#endif  // CHURN_CHURN_HPP
