#include "circgcn/similarity.hpp"

#include <cmath>

namespace circgcn {

void GipConfig::validate() const {
  if (!(alpha_hat_c > 0.0) || !(alpha_hat_d > 0.0)) {
    throw UsageError("gip: alpha_hat parameters must be > 0");
  }
}

std::optional<double> gip_bandwidth(
    const std::vector<std::vector<std::uint8_t>>& profiles, double alpha_hat) {
  if (profiles.empty()) throw DataError("gip_bandwidth: no profiles");
  const std::size_t len = profiles.front().size();
  std::size_t total = 0;
  for (const auto& p : profiles) {
    if (p.size() != len) throw DataError("gip_bandwidth: profile length mismatch");
    for (auto v : p) total += v;  // binary: ||P||^2 == number of ones
  }
  if (total == 0) return std::nullopt;
  double mean_sq_norm = static_cast<double>(total) / static_cast<double>(profiles.size());
  return alpha_hat / mean_sq_norm;
}

namespace {

// exp(-alpha * hamming) over a profile list; hamming distance equals the
// squared euclidean distance for binary vectors.
SimilarityMatrix gip_kernel(const std::vector<std::vector<std::uint8_t>>& profiles,
                            std::vector<std::string> ids, double alpha_hat) {
  auto alpha = gip_bandwidth(profiles, alpha_hat);
  if (!alpha) return SimilarityMatrix::identity(std::move(ids));

  const std::size_t n = profiles.size();
  SimilarityMatrix out;
  out.ids = std::move(ids);
  out.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                     static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      std::size_t dist = 0;
      const auto& a = profiles[i];
      const auto& b = profiles[j];
      for (std::size_t k = 0; k < a.size(); ++k) dist += (a[k] != b[k]);
      double v = std::exp(-(*alpha) * static_cast<double>(dist));
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      out.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  }
  return out;
}

}  // namespace

SimilarityMatrix circ_gip(const AssociationMatrix& as, const GipConfig& cfg) {
  cfg.validate();
  if (as.n_circ == 0 || as.n_disease == 0) throw DataError("circ_gip: empty matrix");
  std::vector<std::vector<std::uint8_t>> profiles(as.n_circ);
  for (std::size_t i = 0; i < as.n_circ; ++i) {
    profiles[i].resize(as.n_disease);
    for (std::size_t j = 0; j < as.n_disease; ++j) profiles[i][j] = as(i, j);
  }
  return gip_kernel(profiles, as.circ_ids, cfg.alpha_hat_c);
}

SimilarityMatrix disease_gip(const AssociationMatrix& as, const GipConfig& cfg) {
  cfg.validate();
  if (as.n_circ == 0 || as.n_disease == 0) throw DataError("disease_gip: empty matrix");
  std::vector<std::vector<std::uint8_t>> profiles(as.n_disease);
  for (std::size_t j = 0; j < as.n_disease; ++j) {
    profiles[j].resize(as.n_circ);
    for (std::size_t i = 0; i < as.n_circ; ++i) profiles[j][i] = as(i, j);
  }
  return gip_kernel(profiles, as.disease_ids, cfg.alpha_hat_d);
}

SimilarityMatrix fuse_circ_similarity(const SimilarityMatrix& cs,
                                      const std::vector<bool>& has_seq,
                                      const SimilarityMatrix& cg,
                                      FusionPolicy policy) {
  const std::size_t n = cg.size();
  if (policy != FusionPolicy::gip_only) {
    if (cs.size() != n || has_seq.size() != n) {
      throw DataError("fuse_circ_similarity: dimension mismatch");
    }
  }

  SimilarityMatrix out;
  out.ids = cg.ids;
  out.values = cg.values;
  if (policy == FusionPolicy::gip_only) return out;

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!has_seq[i] || !has_seq[j]) continue;  // fall back to CG
      auto ii = static_cast<Eigen::Index>(i);
      auto jj = static_cast<Eigen::Index>(j);
      double v = policy == FusionPolicy::average
                     ? 0.5 * (cs.values(ii, jj) + cg.values(ii, jj))
                     : cs.values(ii, jj);
      out.values(ii, jj) = v;
      out.values(jj, ii) = v;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
  }
  return out;
}

const char* to_string(FusionPolicy p) {
  switch (p) {
    case FusionPolicy::average: return "average";
    case FusionPolicy::sequence_preferred: return "sequence_preferred";
    case FusionPolicy::gip_only: return "gip_only";
  }
  return "average";
}

FusionPolicy fusion_policy_from_string(const std::string& s) {
  if (s == "average") return FusionPolicy::average;
  if (s == "sequence_preferred") return FusionPolicy::sequence_preferred;
  if (s == "gip_only") return FusionPolicy::gip_only;
  throw UsageError("unknown fusion policy '" + s + "'");
}

}  // namespace circgcn
