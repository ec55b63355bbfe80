#pragma once

#include <utility>
#include <vector>

namespace noc {

// Offsets of the (y, w, b, k) blocks inside the flat state vector.
//
// Layout, in this order:
//   y   m entries, neuron outputs
//   w   one entry per edge, edges sorted by (target, source)
//   b   m entries, biases
//   k   m*d entries, input weights, row-major (neuron-major)
//
// The flat control vector (omega, nu, chi) mirrors the (w, b, k) sub-layout,
// so state coordinate param_offset()+i pairs with control coordinate i.
struct StateLayout {
  int m = 0;          // neurons
  int num_edges = 0;  // |E|
  int d = 0;          // input dim

  int n() const { return m + num_edges + m + m * d; }
  int control_dim() const { return num_edges + m + m * d; }
  int y_offset() const { return 0; }
  int w_offset() const { return m; }
  int b_offset() const { return m + num_edges; }
  int k_offset() const { return m + num_edges + m; }
  int param_offset() const { return m; }
};

// Arc source -> target; the attached weight is w_{target,source}.
struct Edge {
  int source = 0;
  int target = 0;
};
inline bool operator==(Edge a, Edge b) {
  return a.source == b.source && a.target == b.target;
}

// Directed graph of the recurrent network. Edges are stored sorted by
// (target, source); that order defines the w block of the state layout.
class NetworkGraph {
 public:
  NetworkGraph(int num_neurons, std::vector<Edge> edges, int input_dim,
               std::vector<int> outputs = {0});

  // All ordered pairs, optionally including self loops.
  static NetworkGraph fully_connected(int num_neurons, int input_dim,
                                      bool self_loops = true,
                                      std::vector<int> outputs = {0});

  int num_neurons() const { return m_; }
  int input_dim() const { return d_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& outputs() const { return outputs_; }
  int output_index() const { return outputs_[0]; }

  // Incoming (source, edge index) pairs of neuron i.
  const std::vector<std::pair<int, int>>& parents(int i) const {
    return parents_[i];
  }

  StateLayout layout() const { return {m_, num_edges(), d_}; }

 private:
  int m_ = 0;
  int d_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> outputs_;
  std::vector<std::vector<std::pair<int, int>>> parents_;
};

}  // namespace noc
