#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "../analysis.hpp"
#include "../circuit.hpp"
#include "binarize.hpp"
#include "duplicate.hpp"
#include "normalize.hpp"
#include "reduce_depth.hpp"

namespace pcdt {

struct TreeifyOptions {
  bool normalize_output = false;
};

struct StageMetrics {
  std::string stage;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t depth = 0;
};

struct PipelineReport {
  std::vector<StageMetrics> stages;
  std::optional<double> root_constant;

  void record(std::string stage, const Circuit& c) {
    stages.push_back({std::move(stage), c.size(), c.num_edges(), node_heights(c)[c.root()]});
  }

  const StageMetrics* find(std::string_view stage) const {
    for (const auto& s : stages) {
      if (s.stage == stage) {
        return &s;
      }
    }
    return nullptr;
  }
};

/// `stage.nodes=...` lines, one block per stage, in pipeline order.
inline std::string to_key_value(const PipelineReport& r) {
  std::ostringstream out;
  for (const auto& s : r.stages) {
    out << s.stage << ".nodes=" << s.nodes << '\n'
        << s.stage << ".edges=" << s.edges << '\n'
        << s.stage << ".depth=" << s.depth << '\n';
  }
  if (r.root_constant) {
    out.precision(17);
    out << "root_constant=" << *r.root_constant << '\n';
  }
  return out.str();
}

inline std::string to_csv(const PipelineReport& r) {
  std::ostringstream out;
  out << "stage,nodes,edges,depth\n";
  for (const auto& s : r.stages) {
    out << s.stage << ',' << s.nodes << ',' << s.edges << ',' << s.depth << '\n';
  }
  return out.str();
}

struct TreeifyResult {
  Circuit circuit;
  PipelineReport report;
};

/// binarize, reduce_depth, duplicate_to_tree and optionally normalize.
/// With normalization the returned tree computes the input polynomial
/// divided by report.root_constant.
inline TreeifyResult treeify(const Circuit& c, TreeifyOptions opts = {}) {
  PipelineReport report;
  report.record("input", c);
  Circuit bin = binarize(c);
  report.record("binarize", bin);
  Circuit psi = reduce_depth(bin);
  report.record("reduce_depth", psi);
  Circuit tree = duplicate_to_tree(psi);
  report.record("duplicate", tree);
  if (opts.normalize_output) {
    auto [normed, z] = normalize(tree);
    report.record("normalize", normed);
    report.root_constant = z;
    return {std::move(normed), std::move(report)};
  }
  return {std::move(tree), std::move(report)};
}

} // namespace pcdt
