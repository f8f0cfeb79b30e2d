#include "circgcn/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace circgcn {

void ScoringScheme::validate() const {
  if (match <= 0) throw UsageError("scoring: match must be > 0");
  if (mismatch > 0) throw UsageError("scoring: mismatch must be <= 0");
  if (gap > 0) throw UsageError("scoring: gap must be <= 0");
}

SimilarityMatrix SimilarityMatrix::identity(std::vector<std::string> ids) {
  SimilarityMatrix m;
  m.values = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(ids.size()),
                                       static_cast<Eigen::Index>(ids.size()));
  m.ids = std::move(ids);
  return m;
}

long long nw_score(std::string_view a, std::string_view b, const ScoringScheme& s) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<long long> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = static_cast<long long>(j) * s.gap;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<long long>(i) * s.gap;
    for (std::size_t j = 1; j <= m; ++j) {
      long long sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? s.match : s.mismatch);
      long long del = prev[j] + s.gap;
      long long ins = cur[j - 1] + s.gap;
      cur[j] = std::max({sub, del, ins});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

SimilarityMatrix sequence_similarity(const SequenceSet& set,
                                     const ScoringScheme& s, int jobs) {
  s.validate();
  const std::size_t n = set.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (set.seqs[i].empty()) {
      throw DataError("empty sequence for id '" + set.ids[i] +
                      "' (self-score would be zero)");
    }
  }

  SimilarityMatrix out;
  out.ids = set.ids;
  out.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                     static_cast<Eigen::Index>(n));

  std::vector<double> self(n);
  for (std::size_t i = 0; i < n; ++i) {
    self[i] = static_cast<double>(nw_score(set.seqs[i], set.seqs[i], s));
  }

  // Upper-triangle pairs, split across threads; each pair writes its own
  // cells, so the fill order cannot change the result.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }

  auto fill_range = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t p = lo; p < hi; ++p) {
      auto [i, j] = pairs[p];
      double raw = static_cast<double>(nw_score(set.seqs[i], set.seqs[j], s)) /
                   (std::sqrt(self[i]) * std::sqrt(self[j]));
      double v = std::clamp(raw, 0.0, 1.0);
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      out.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  };

  int n_threads = std::max(1, jobs);
  if (n_threads == 1 || pairs.size() < 2) {
    fill_range(0, pairs.size());
  } else {
    std::vector<std::thread> workers;
    std::size_t chunk = (pairs.size() + n_threads - 1) / n_threads;
    for (int t = 0; t < n_threads; ++t) {
      std::size_t lo = std::min(pairs.size(), static_cast<std::size_t>(t) * chunk);
      std::size_t hi = std::min(pairs.size(), lo + chunk);
      if (lo < hi) workers.emplace_back(fill_range, lo, hi);
    }
    for (auto& w : workers) w.join();
  }

  for (std::size_t i = 0; i < n; ++i) {
    out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
  }
  return out;
}

}  // namespace circgcn
