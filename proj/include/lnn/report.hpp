#pragma once

// JSON views of graphs, inference runs and training runs.  Numbers are
// rounded to 9 significant digits so that reports are byte-stable.

#include <string>

#include "json.hpp"
#include "lnn/fol.hpp"
#include "lnn/graph.hpp"
#include "lnn/inference.hpp"
#include "lnn/learning.hpp"

namespace lnn {

using Json = nlohmann::ordered_json;

double round9(double x);
Json to_json(Bounds b);

Json graph_json(const Graph& g, double alpha);
Json query_json(const Graph& g, int root, double alpha, const BoundQuery* binding = nullptr);
Json inference_json(const Graph& g, const ConvergenceReport& rep, const InferenceOptions& opts,
                    const std::string& only_query = "");
Json train_json(const Graph& g, const TrainReport& rep, const TrainConfig& cfg);
// Every parameter, in node / root / fact order.
Json checkpoint_json(const Graph& g);

std::string inference_summary(const Graph& g, const ConvergenceReport& rep,
                              const InferenceOptions& opts);
std::string train_summary(const TrainReport& rep);

}  // namespace lnn
