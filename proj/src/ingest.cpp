#include "circgcn/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace circgcn {

namespace {

bool allowed_base(char c) {
  switch (c) {
    case 'A':
    case 'C':
    case 'G':
    case 'T':
    case 'N':
      return true;
    default:
      return false;
  }
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::string strip_quotes(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  std::stringstream ss(line);
  while (std::getline(ss, cur, ',')) {
    fields.push_back(strip_quotes(trim(cur)));
  }
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

void SequenceSet::add(const std::string& id, const std::string& raw_seq) {
  if (by_id.count(id)) {
    throw DataError("duplicate sequence identifier '" + id + "'");
  }
  std::string seq;
  seq.reserve(raw_seq.size());
  for (char raw : raw_seq) {
    char c = static_cast<char>(std::toupper(static_cast<unsigned char>(raw)));
    if (c == 'U') c = 'T';
    if (!allowed_base(c)) {
      throw DataError("illegal character '" + std::string(1, raw) +
                      "' in sequence '" + id + "'");
    }
    seq.push_back(c);
  }
  by_id.emplace(id, ids.size());
  ids.push_back(id);
  seqs.push_back(std::move(seq));
}

std::size_t AssociationMatrix::row_sum(std::size_t i) const {
  std::size_t s = 0;
  for (std::size_t j = 0; j < n_disease; ++j) s += (*this)(i, j);
  return s;
}

std::size_t AssociationMatrix::col_sum(std::size_t j) const {
  std::size_t s = 0;
  for (std::size_t i = 0; i < n_circ; ++i) s += (*this)(i, j);
  return s;
}

std::size_t AssociationMatrix::total() const {
  std::size_t s = 0;
  for (auto v : entries) s += v;
  return s;
}

AssociationMatrix AssociationMatrix::zeros(std::vector<std::string> circ_ids,
                                           std::vector<std::string> disease_ids) {
  AssociationMatrix as;
  as.n_circ = circ_ids.size();
  as.n_disease = disease_ids.size();
  as.circ_ids = std::move(circ_ids);
  as.disease_ids = std::move(disease_ids);
  as.entries.assign(as.n_circ * as.n_disease, 0);
  return as;
}

void SyntheticSpec::validate() const {
  if (n_circ < 1 || n_disease < 1 || n_blocks < 1) {
    throw UsageError("synthetic spec counts must be >= 1");
  }
  if (n_blocks > std::min(n_circ, n_disease)) {
    throw UsageError("n_blocks must be <= min(n_circ, n_disease)");
  }
  if (seq_len < 1) throw UsageError("seq_len must be >= 1");
  auto prob_ok = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob_ok(intra_block_assoc_prob) || !prob_ok(noise_prob) ||
      !prob_ok(mutation_rate)) {
    throw UsageError("synthetic spec probabilities must be in [0,1]");
  }
}

SequenceSet parse_fasta(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open FASTA file '" + path + "'");

  SequenceSet set;
  std::string line;
  std::string cur_id;
  std::string cur_seq;
  bool have_record = false;
  std::size_t line_no = 0;
  std::size_t record_line = 0;

  auto flush = [&]() {
    if (!have_record) return;
    try {
      set.add(cur_id, cur_seq);
    } catch (const DataError& e) {
      throw DataError(path + ":" + std::to_string(record_line) + ": " + e.what());
    }
  };

  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    if (line[0] == '>') {
      flush();
      std::stringstream ss(line.substr(1));
      ss >> cur_id;
      if (cur_id.empty()) {
        throw DataError(path + ":" + std::to_string(line_no) + ": empty FASTA header");
      }
      cur_seq.clear();
      have_record = true;
      record_line = line_no;
    } else {
      if (!have_record) {
        throw DataError(path + ":" + std::to_string(line_no) +
                        ": sequence line before any header");
      }
      for (char c : line) {
        char up = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        if (up == 'U') up = 'T';
        if (!allowed_base(up)) {
          throw DataError(path + ":" + std::to_string(line_no) +
                          ": illegal character '" + std::string(1, c) + "'");
        }
      }
      cur_seq += line;
    }
  }
  flush();
  return set;
}

AssociationMatrix parse_associations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open associations file '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  strip_cr(line);
  auto header = split_csv_line(line);
  std::ptrdiff_t circ_col = -1, disease_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    std::string h = lower(header[i]);
    if (h == "circrna") circ_col = static_cast<std::ptrdiff_t>(i);
    if (h == "disease") disease_col = static_cast<std::ptrdiff_t>(i);
  }
  if (circ_col < 0 || disease_col < 0) {
    throw DataError(path + ": header must contain circRNA and disease columns");
  }

  std::vector<std::string> circ_ids, disease_ids;
  std::unordered_map<std::string, std::size_t> circ_index, disease_index;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    std::size_t needed = static_cast<std::size_t>(std::max(circ_col, disease_col)) + 1;
    if (fields.size() < needed) {
      throw DataError(path + ":" + std::to_string(line_no) + ": too few columns");
    }
    const std::string& c = fields[static_cast<std::size_t>(circ_col)];
    const std::string& d = fields[static_cast<std::size_t>(disease_col)];
    if (c.empty() || d.empty()) {
      throw DataError(path + ":" + std::to_string(line_no) + ": empty identifier");
    }
    auto [ci, c_new] = circ_index.try_emplace(c, circ_ids.size());
    if (c_new) circ_ids.push_back(c);
    auto [di, d_new] = disease_index.try_emplace(d, disease_ids.size());
    if (d_new) disease_ids.push_back(d);
    pairs.emplace_back(ci->second, di->second);
  }
  if (pairs.empty()) throw DataError(path + ": no data rows");

  auto as = AssociationMatrix::zeros(std::move(circ_ids), std::move(disease_ids));
  for (auto [i, j] : pairs) as.set(i, j, 1);
  return as;
}

void write_fasta(const SequenceSet& set, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write FASTA file '" + path + "'");
  for (std::size_t i = 0; i < set.size(); ++i) {
    out << '>' << set.ids[i] << '\n';
    const std::string& s = set.seqs[i];
    for (std::size_t p = 0; p < s.size(); p += 70) {
      out << s.substr(p, 70) << '\n';
    }
    if (s.empty()) out << '\n';
  }
}

void write_associations(const AssociationMatrix& as, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write associations file '" + path + "'");
  out << "circRNA,disease\n";
  for (std::size_t i = 0; i < as.n_circ; ++i) {
    for (std::size_t j = 0; j < as.n_disease; ++j) {
      if (as(i, j)) out << as.circ_ids[i] << ',' << as.disease_ids[j] << '\n';
    }
  }
}

std::pair<SequenceSet, AssociationMatrix> synth_dataset(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const char bases[4] = {'A', 'C', 'G', 'T'};

  // Contiguous block partition for both node sets.
  auto block_of = [&](std::size_t i, std::size_t n) {
    return i * spec.n_blocks / n;
  };

  std::vector<std::string> ancestors(spec.n_blocks);
  for (auto& a : ancestors) {
    a.resize(spec.seq_len);
    for (auto& c : a) c = bases[rng.below(4)];
  }

  SequenceSet seqs;
  for (std::size_t i = 0; i < spec.n_circ; ++i) {
    std::string s = ancestors[block_of(i, spec.n_circ)];
    for (auto& c : s) {
      if (rng.uniform() < spec.mutation_rate) {
        // substitute with a uniformly chosen different base
        char other;
        do {
          other = bases[rng.below(4)];
        } while (other == c);
        c = other;
      }
    }
    seqs.add("c" + std::to_string(i), s);
  }

  std::vector<std::string> circ_ids = seqs.ids;
  std::vector<std::string> disease_ids(spec.n_disease);
  for (std::size_t j = 0; j < spec.n_disease; ++j) disease_ids[j] = "d" + std::to_string(j);
  auto as = AssociationMatrix::zeros(std::move(circ_ids), std::move(disease_ids));

  for (std::size_t i = 0; i < spec.n_circ; ++i) {
    for (std::size_t j = 0; j < spec.n_disease; ++j) {
      bool same = block_of(i, spec.n_circ) == block_of(j, spec.n_disease);
      double p = same ? spec.intra_block_assoc_prob : spec.noise_prob;
      if (rng.uniform() < p) as.set(i, j, 1);
    }
  }
  return {std::move(seqs), std::move(as)};
}

}  // namespace circgcn
