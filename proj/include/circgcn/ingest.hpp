#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "circgcn/common.hpp"

namespace circgcn {

// Ordered collection of nucleotide sequences. Sequences are uppercased and
// 'U' is folded to 'T' at load so RNA and DNA inputs share one alphabet.
struct SequenceSet {
  std::vector<std::string> ids;
  std::vector<std::string> seqs;
  std::unordered_map<std::string, std::size_t> by_id;

  std::size_t size() const { return ids.size(); }
  bool contains(const std::string& id) const { return by_id.count(id) != 0; }

  // Validates the id is new and the sequence alphabet; normalizes case and U->T.
  void add(const std::string& id, const std::string& raw_seq);
};

// Binary circRNA x disease association matrix. Row/column order is the
// first-appearance order of identifiers in the source file.
struct AssociationMatrix {
  std::size_t n_circ = 0;
  std::size_t n_disease = 0;
  std::vector<std::uint8_t> entries;  // row-major, n_circ * n_disease
  std::vector<std::string> circ_ids;
  std::vector<std::string> disease_ids;

  std::uint8_t operator()(std::size_t i, std::size_t j) const {
    return entries[i * n_disease + j];
  }
  void set(std::size_t i, std::size_t j, std::uint8_t v) {
    entries[i * n_disease + j] = v;
  }

  std::size_t row_sum(std::size_t i) const;
  std::size_t col_sum(std::size_t j) const;
  std::size_t total() const;

  static AssociationMatrix zeros(std::vector<std::string> circ_ids,
                                 std::vector<std::string> disease_ids);
};

struct SyntheticSpec {
  std::size_t n_circ = 60;
  std::size_t n_disease = 10;
  std::size_t n_blocks = 3;
  double intra_block_assoc_prob = 0.9;
  double noise_prob = 0.02;
  std::size_t seq_len = 120;
  double mutation_rate = 0.05;
  std::uint64_t seed = 7;

  void validate() const;  // throws UsageError
};

SequenceSet parse_fasta(const std::string& path);
AssociationMatrix parse_associations(const std::string& path);

void write_fasta(const SequenceSet& set, const std::string& path);
void write_associations(const AssociationMatrix& as, const std::string& path);

// Planted-block dataset: circRNAs and diseases are split into contiguous
// blocks; same-block pairs associate with intra_block_assoc_prob, cross-block
// pairs with noise_prob; circRNAs in one block are mutated copies of a shared
// ancestor sequence. Bit-reproducible for a given spec.
std::pair<SequenceSet, AssociationMatrix> synth_dataset(const SyntheticSpec& spec);

}  // namespace circgcn
