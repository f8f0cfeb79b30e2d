#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "circgcn/alignment.hpp"
#include "circgcn/common.hpp"
#include "circgcn/ingest.hpp"

namespace circgcn {

struct GipConfig {
  double alpha_hat_c = 1.0;
  double alpha_hat_d = 1.0;

  void validate() const;
};

// Rule for combining circRNA sequence similarity with circRNA GIP similarity.
enum class FusionPolicy { average, sequence_preferred, gip_only };

// Kernel bandwidth: alpha_hat divided by the mean squared profile norm.
// nullopt signals the degenerate all-zero-profile case; callers substitute
// the identity similarity so a stripped training fold stays computable.
std::optional<double> gip_bandwidth(
    const std::vector<std::vector<std::uint8_t>>& profiles, double alpha_hat);

// Gaussian interaction-profile kernel over the rows of AS.
SimilarityMatrix circ_gip(const AssociationMatrix& as, const GipConfig& cfg = {});

// Same kernel over the columns of AS.
SimilarityMatrix disease_gip(const AssociationMatrix& as, const GipConfig& cfg = {});

// Combine sequence similarity (defined only where has_seq marks both
// endpoints) with GIP similarity. Output is symmetric, unit-diagonal, [0,1].
SimilarityMatrix fuse_circ_similarity(const SimilarityMatrix& cs,
                                      const std::vector<bool>& has_seq,
                                      const SimilarityMatrix& cg,
                                      FusionPolicy policy);

const char* to_string(FusionPolicy p);
FusionPolicy fusion_policy_from_string(const std::string& s);

}  // namespace circgcn
