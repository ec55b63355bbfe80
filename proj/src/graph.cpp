#include "noc/graph.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "noc/errors.hpp"

namespace noc {

NetworkGraph::NetworkGraph(int num_neurons, std::vector<Edge> edges,
                           int input_dim, std::vector<int> outputs)
    : m_(num_neurons), d_(input_dim), edges_(std::move(edges)),
      outputs_(std::move(outputs)) {
  if (m_ <= 0) throw ConfigError("graph needs at least one neuron");
  if (d_ < 0) throw ConfigError("negative input dimension");
  if (outputs_.empty()) throw ConfigError("graph needs at least one output neuron");

  // layout order of the w block
  std::sort(edges_.begin(), edges_.end(), [](Edge a, Edge b) {
    return a.target != b.target ? a.target < b.target : a.source < b.source;
  });

  std::set<std::pair<int, int>> seen;
  for (const Edge& e : edges_) {
    if (e.source < 0 || e.source >= m_ || e.target < 0 || e.target >= m_)
      throw ConfigError("edge endpoint out of range");
    if (!seen.insert({e.source, e.target}).second)
      throw ConfigError("duplicate edge");
  }

  std::set<int> out_seen;
  for (int o : outputs_) {
    if (o < 0 || o >= m_) throw ConfigError("output index out of range");
    if (!out_seen.insert(o).second) throw ConfigError("duplicate output index");
  }

  parents_.resize(m_);
  for (int e = 0; e < num_edges(); ++e)
    parents_[edges_[e].target].push_back({edges_[e].source, e});
}

NetworkGraph NetworkGraph::fully_connected(int num_neurons, int input_dim,
                                           bool self_loops,
                                           std::vector<int> outputs) {
  std::vector<Edge> edges;
  for (int i = 0; i < num_neurons; ++i)
    for (int j = 0; j < num_neurons; ++j)
      if (self_loops || i != j) edges.push_back({j, i});
  return NetworkGraph(num_neurons, std::move(edges), input_dim,
                      std::move(outputs));
}

}  // namespace noc
