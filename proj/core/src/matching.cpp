#include "relaylife/matching.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace relaylife {

BitMatrix::BitMatrix(int n)
    : n_(n), words_((n + 63) / 64), bits_(static_cast<size_t>(n) * words_, 0) {
  if (n <= 0) throw std::invalid_argument("BitMatrix: size must be positive");
}

void BitMatrix::set(int row, int col, bool value) {
  std::uint64_t& word = bits_[static_cast<size_t>(row) * words_ + col / 64];
  const std::uint64_t bit = std::uint64_t{1} << (col % 64);
  if (value)
    word |= bit;
  else
    word &= ~bit;
}

bool BitMatrix::test(int row, int col) const {
  return (bits_[static_cast<size_t>(row) * words_ + col / 64] >>
          (col % 64)) & 1;
}

void BitMatrix::fill_row(int row, bool value) {
  std::uint64_t* words = bits_.data() + static_cast<size_t>(row) * words_;
  std::fill(words, words + words_, value ? ~std::uint64_t{0} : 0);
  if (value && n_ % 64 != 0)  // keep bits past column n-1 clear
    words[words_ - 1] &= (std::uint64_t{1} << (n_ % 64)) - 1;
}

WeightMatrix WeightMatrix::padded(std::span<const double> real_weights,
                                  int num_sources, int num_relays) {
  if (num_sources < 1 || num_relays < num_sources)
    throw std::invalid_argument("weight matrix: need 1 <= sources <= relays");
  if (real_weights.size() !=
      static_cast<size_t>(num_sources) * static_cast<size_t>(num_relays))
    throw std::invalid_argument("weight matrix: block size mismatch");
  WeightMatrix w;
  w.n = num_relays;
  w.m_real = num_sources;
  w.weights.assign(static_cast<size_t>(w.n) * w.n, 0.0);
  for (int i = 0; i < num_sources; ++i)
    for (int j = 0; j < num_relays; ++j)
      w.at(i, j) = real_weights[static_cast<size_t>(i) * num_relays + j];
  w.validate();
  return w;
}

void WeightMatrix::validate() const {
  if (n < 1 || m_real < 1 || m_real > n)
    throw std::invalid_argument("weight matrix: need n >= m_real >= 1");
  if (weights.size() != static_cast<size_t>(n) * n)
    throw std::invalid_argument("weight matrix: storage size mismatch");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double v = at(i, j);
      if (!std::isfinite(v) || v < 0.0)
        throw std::invalid_argument(
            "weight matrix: entries must be finite and non-negative");
      if (i >= m_real && v != 0.0)
        throw std::invalid_argument("weight matrix: dummy rows must be zero");
    }
}

namespace {

// Augmenting-path search for one row. Columns are visited lowest-index first.
bool try_augment(const BitMatrix& adj, int row, std::vector<std::uint64_t>& visited,
                 std::vector<int>& row_to_col, std::vector<int>& col_to_row) {
  const auto words = adj.row_words(row);
  for (int wi = 0; wi < static_cast<int>(words.size()); ++wi) {
    std::uint64_t avail = words[wi] & ~visited[wi];
    while (avail) {
      const int col = wi * 64 + std::countr_zero(avail);
      avail &= avail - 1;
      visited[wi] |= std::uint64_t{1} << (col % 64);
      const int owner = col_to_row[col];
      if (owner < 0 || try_augment(adj, owner, visited, row_to_col, col_to_row)) {
        col_to_row[col] = row;
        row_to_col[row] = col;
        return true;
      }
    }
  }
  return false;
}

}  // namespace

MaxMatchingResult maximum_matching(const BitMatrix& adjacency) {
  const int n = adjacency.size();
  std::vector<int> row_to_col(n, -1), col_to_row(n, -1);
  int matched = 0;

  // Greedy seed before augmenting; usually covers most rows.
  for (int r = 0; r < n; ++r) {
    const auto words = adjacency.row_words(r);
    for (int wi = 0; wi < static_cast<int>(words.size()) && row_to_col[r] < 0; ++wi) {
      std::uint64_t avail = words[wi];
      while (avail) {
        const int col = wi * 64 + std::countr_zero(avail);
        avail &= avail - 1;
        if (col_to_row[col] < 0) {
          col_to_row[col] = r;
          row_to_col[r] = col;
          ++matched;
          break;
        }
      }
    }
  }

  std::vector<std::uint64_t> visited(adjacency.words_per_row());
  for (int r = 0; r < n; ++r) {
    if (row_to_col[r] >= 0) continue;
    std::fill(visited.begin(), visited.end(), 0);
    if (try_augment(adjacency, r, visited, row_to_col, col_to_row)) ++matched;
  }
  return MaxMatchingResult{matched, std::move(row_to_col)};
}

MinWeightResult hungarian_min_weight(const WeightMatrix& w) {
  w.validate();
  const int n = w.n;
  const double inf = std::numeric_limits<double>::infinity();

  // Potentials-based shortest-augmenting-path formulation, 1-indexed with
  // column 0 as the virtual start.
  std::vector<double> row_pot(n + 1, 0.0), col_pot(n + 1, 0.0), minv(n + 1);
  std::vector<int> col_match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    col_match[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = col_match[j0];
      int j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = w.at(i0 - 1, j - 1) - row_pot[i0] - col_pot[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          row_pot[col_match[j]] += delta;
          col_pot[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (col_match[j0] != 0);
    do {
      const int j1 = way[j0];
      col_match[j0] = col_match[j1];
      j0 = j1;
    } while (j0);
  }

  Matching m;
  m.pairing.assign(n, -1);
  for (int j = 1; j <= n; ++j)
    if (col_match[j]) m.pairing[col_match[j] - 1] = j - 1;
  double total = 0.0;
  for (int i = 0; i < w.m_real; ++i) total += w.at(i, m.pairing[i]);
  return MinWeightResult{std::move(m), total};
}

namespace {

BitMatrix threshold_adjacency(const WeightMatrix& w, double threshold) {
  BitMatrix adj(w.n);
  for (int i = 0; i < w.n; ++i) {
    if (i >= w.m_real) {
      adj.fill_row(i, true);  // dummy rows are always admitted
      continue;
    }
    for (int j = 0; j < w.n; ++j)
      if (w.at(i, j) <= threshold) adj.set(i, j);
  }
  return adj;
}

}  // namespace

BottleneckResult bottleneck_matching(const WeightMatrix& w) {
  w.validate();

  std::vector<double> values(w.weights.begin(),
                             w.weights.begin() + static_cast<size_t>(w.m_real) * w.n);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  // Any feasible threshold admits at least one edge per real row, so start
  // the search at the largest row minimum.
  double row_min_max = 0.0;
  for (int i = 0; i < w.m_real; ++i) {
    double row_min = std::numeric_limits<double>::infinity();
    for (int j = 0; j < w.n; ++j) row_min = std::min(row_min, w.at(i, j));
    row_min_max = std::max(row_min_max, row_min);
  }
  size_t lo = std::lower_bound(values.begin(), values.end(), row_min_max) -
              values.begin();
  size_t hi = values.size() - 1;  // full matrix is complete, always feasible
  while (lo < hi) {
    const size_t mid = lo + (hi - lo) / 2;
    if (maximum_matching(threshold_adjacency(w, values[mid])).size == w.n)
      hi = mid;
    else
      lo = mid + 1;
  }

  const double bottleneck = values[lo];
  MaxMatchingResult mm = maximum_matching(threshold_adjacency(w, bottleneck));
  if (mm.size != w.n)
    throw std::logic_error("bottleneck_matching: threshold search failed");

  BottleneckResult result;
  result.matching.pairing = std::move(mm.row_to_col);
  result.bottleneck_value = bottleneck;
  for (int i = 0; i < w.m_real; ++i) {
    if (w.at(i, result.matching.pairing[i]) == bottleneck) {
      result.bottleneck_edge = {i, result.matching.pairing[i]};
      break;  // lexicographically first attaining edge
    }
  }
  if (result.bottleneck_edge.first < 0)
    throw std::logic_error("bottleneck_matching: no edge attains the value");
  return result;
}

bool unique_bottleneck_edge_test(const WeightMatrix& w,
                                 const BottleneckResult& result) {
  w.validate();
  // Drop the bottleneck edge and everything strictly heavier; edges of equal
  // weight stay. Unique iff no perfect matching survives.
  BitMatrix adj = threshold_adjacency(w, result.bottleneck_value);
  adj.set(result.bottleneck_edge.first, result.bottleneck_edge.second, false);
  return maximum_matching(adj).size < w.n;
}

MbmResult minimum_bottleneck_matching(const WeightMatrix& w) {
  w.validate();
  const BottleneckResult first = bottleneck_matching(w);

  std::vector<int> rows(w.n), cols(w.n);
  for (int i = 0; i < w.n; ++i) rows[i] = cols[i] = i;
  std::vector<std::pair<int, int>> chosen;
  chosen.reserve(w.m_real);

  for (int iter = 0; iter < w.m_real; ++iter) {
    const int k = static_cast<int>(rows.size());
    WeightMatrix sub;
    sub.n = k;
    sub.m_real = w.m_real - iter;  // active rows keep real-first ordering
    sub.weights.resize(static_cast<size_t>(k) * k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) sub.at(i, j) = w.at(rows[i], cols[j]);

    const BottleneckResult br = iter == 0 ? first : bottleneck_matching(sub);
    if (!unique_bottleneck_edge_test(sub, br))
      return MbmResult{first.matching, false};

    const int grow = rows[br.bottleneck_edge.first];
    const int gcol = cols[br.bottleneck_edge.second];
    chosen.emplace_back(grow, gcol);
    rows.erase(rows.begin() + br.bottleneck_edge.first);
    cols.erase(cols.begin() + br.bottleneck_edge.second);

    if (!rows.empty()) {
      // Removing the endpoints must leave the (complete) rest matchable.
      BitMatrix all(static_cast<int>(rows.size()));
      for (int i = 0; i < static_cast<int>(rows.size()); ++i)
        all.fill_row(i, true);
      if (maximum_matching(all).size != static_cast<int>(rows.size()))
        throw std::logic_error(
            "minimum_bottleneck_matching: endpoint removal broke matchability");
    }
  }

  MbmResult result;
  result.certified = true;
  result.matching.pairing.assign(w.n, -1);
  for (const auto& [r, c] : chosen) result.matching.pairing[r] = c;
  for (size_t i = 0; i < rows.size(); ++i)  // leftover dummy rows, weight 0
    result.matching.pairing[rows[i]] = cols[i];

  double max_real = 0.0;
  for (int i = 0; i < w.m_real; ++i)
    max_real = std::max(max_real, w.at(i, result.matching.pairing[i]));
  if (max_real != first.bottleneck_value)
    throw std::logic_error(
        "minimum_bottleneck_matching: certified result lost bottleneck optimality");
  return result;
}

}  // namespace relaylife
