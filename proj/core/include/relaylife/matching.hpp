#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace relaylife {

// Square boolean adjacency matrix stored as row bit masks.
class BitMatrix {
 public:
  explicit BitMatrix(int n);

  int size() const { return n_; }
  int words_per_row() const { return words_; }
  void set(int row, int col, bool value = true);
  bool test(int row, int col) const;
  void fill_row(int row, bool value);
  std::span<const std::uint64_t> row_words(int row) const {
    return {bits_.data() + static_cast<size_t>(row) * words_,
            static_cast<size_t>(words_)};
  }

 private:
  int n_ = 0;
  int words_ = 0;
  std::vector<std::uint64_t> bits_;
};

// n x n pair-weight matrix. Rows m_real..n-1 are all-zero padding standing in
// for absent sources when there are more relays than sources; objectives are
// always taken over the real rows only.
struct WeightMatrix {
  int n = 0;
  int m_real = 0;
  std::vector<double> weights;  // row-major, n*n

  double at(int row, int col) const {
    return weights[static_cast<size_t>(row) * n + col];
  }
  double& at(int row, int col) {
    return weights[static_cast<size_t>(row) * n + col];
  }

  // Pads an m x n rectangular block of real weights (row-major) with zero
  // rows to an n x n square matrix. Requires num_relays >= num_sources.
  static WeightMatrix padded(std::span<const double> real_weights,
                             int num_sources, int num_relays);
  void validate() const;  // throws std::invalid_argument
};

// Row -> column bijection on {0..n-1}.
struct Matching {
  std::vector<int> pairing;
};

struct MaxMatchingResult {
  int size = 0;
  std::vector<int> row_to_col;  // -1 where unmatched
};

struct MinWeightResult {
  Matching matching;
  double total_weight = 0.0;  // sum over real rows
};

struct BottleneckResult {
  Matching matching;
  double bottleneck_value = 0.0;           // largest real-row weight used
  std::pair<int, int> bottleneck_edge{-1, -1};  // lexicographically first
};

struct MbmResult {
  Matching matching;
  // Acknowledgement flag: true means the matching provably minimizes the
  // descending-sorted vector of real edge weights lexicographically; false
  // means a bottleneck edge was not unique at some step and the matching is
  // the plain bottleneck matching of the full graph.
  bool certified = false;
};

// Maximum-cardinality matching by augmenting paths. Rows are processed in
// ascending order and columns scanned lowest-first, so the result is
// deterministic.
MaxMatchingResult maximum_matching(const BitMatrix& adjacency);

// Perfect matching minimizing the weight sum over real rows (Hungarian
// algorithm on the padded square matrix; dummy rows cost nothing).
MinWeightResult hungarian_min_weight(const WeightMatrix& w);

// Perfect matching minimizing the largest real-row weight. Binary search
// over the sorted distinct real weights; feasibility at a threshold is a
// maximum-matching test on the thresholded adjacency, with dummy-row edges
// always admitted.
BottleneckResult bottleneck_matching(const WeightMatrix& w);

// True iff the bottleneck edge of `result` appears as the maximum-weight
// edge in every bottleneck matching of `w`. Tested by deleting the edge and
// all strictly heavier edges and checking that no perfect matching remains;
// equal-weight edges stay in.
bool unique_bottleneck_edge_test(const WeightMatrix& w,
                                 const BottleneckResult& result);

// Repeatedly extracts a provably-unique bottleneck edge and removes its
// endpoints, at most m_real times. If every step succeeds the result is
// certified; on the first non-unique bottleneck edge the full graph's
// bottleneck matching is returned uncertified.
MbmResult minimum_bottleneck_matching(const WeightMatrix& w);

}  // namespace relaylife
