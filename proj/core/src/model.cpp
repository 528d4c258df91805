#include "mrfcp/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mrfcp/errors.hpp"

namespace mrfcp {

ModelSpec::ModelSpec(std::vector<double> alphabet, const std::function<double(double)>& b0,
                     const std::function<double(double, double)>& b)
    : alphabet_(std::move(alphabet)) {
  const std::size_t m = alphabet_.size();
  b0_.resize(m);
  b_.resize(m * m);
  for (std::size_t u = 0; u < m; ++u) {
    b0_[u] = b0(alphabet_[u]);
    for (std::size_t v = 0; v < m; ++v) b_[u * m + v] = b(alphabet_[u], alphabet_[v]);
  }
  validate_and_finish();
}

ModelSpec ModelSpec::from_tables(std::vector<double> alphabet, std::vector<double> b0_table,
                                 std::vector<double> b_table) {
  ModelSpec spec;
  spec.alphabet_ = std::move(alphabet);
  spec.b0_ = std::move(b0_table);
  spec.b_ = std::move(b_table);
  const std::size_t m = spec.alphabet_.size();
  if (spec.b0_.size() != m || spec.b_.size() != m * m) {
    throw InvalidArgument("potential tables do not match alphabet size");
  }
  spec.validate_and_finish();
  return spec;
}

void ModelSpec::validate_and_finish() {
  const std::size_t m = alphabet_.size();
  if (m == 0) throw InvalidArgument("alphabet is empty");
  if (m > 256) throw InvalidArgument("alphabet has more than 256 symbols");
  if (std::set<double>(alphabet_.begin(), alphabet_.end()).size() != m) {
    throw InvalidArgument("alphabet contains duplicate symbols");
  }
  for (double v : b0_) {
    if (!std::isfinite(v)) throw InvalidArgument("b0 is not finite on the alphabet");
  }
  for (std::size_t u = 0; u < m; ++u) {
    for (std::size_t v = 0; v < m; ++v) {
      if (!std::isfinite(b_[u * m + v])) throw InvalidArgument("b is not finite on the alphabet");
      if (b_[u * m + v] != b_[v * m + u]) throw InvalidArgument("pair potential b is not symmetric");
    }
  }
  c0_ = compute_c0(*this);
}

std::optional<Symbol> ModelSpec::index_of(double value) const noexcept {
  const auto it = std::find(alphabet_.begin(), alphabet_.end(), value);
  if (it == alphabet_.end()) return std::nullopt;
  return static_cast<Symbol>(it - alphabet_.begin());
}

ModelSpec make_ising_spec() {
  return ModelSpec({0.0, 1.0}, [](double x) { return x; }, [](double x, double y) { return x * y; });
}

double compute_c0(const ModelSpec& spec) {
  const std::size_t m = spec.alphabet_size();
  if (m == 0) throw InvalidArgument("alphabet is empty");
  double node_term = 0.0;
  double pair_term = 0.0;
  for (std::size_t u = 0; u < m; ++u) {
    for (std::size_t v = 0; v < m; ++v) {
      const auto su = static_cast<Symbol>(u);
      const auto sv = static_cast<Symbol>(v);
      node_term = std::max(node_term, std::abs(spec.b0(su) - spec.b0(sv)));
      for (std::size_t x = 0; x < m; ++x) {
        const auto sx = static_cast<Symbol>(x);
        pair_term = std::max(pair_term, std::abs(spec.b(sx, su) - spec.b(sx, sv)));
      }
    }
  }
  return std::max(node_term, pair_term);
}

// ---------------------------------------------------------------------------

SymmetricParams::SymmetricParams(std::size_t p) : p_(p), values_(packed_size(p), 0.0) {}

SymmetricParams::SymmetricParams(std::size_t p, std::vector<double> packed)
    : p_(p), values_(std::move(packed)) {
  if (values_.size() != packed_size(p)) {
    throw InvalidArgument("packed parameter vector has length " + std::to_string(values_.size()) +
                          ", expected " + std::to_string(packed_size(p)));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidArgument("parameter matrix has a non-finite entry");
  }
}

double SymmetricParams::at(std::size_t j, std::size_t k) const {
  if (j >= p_ || k >= p_) throw InvalidArgument("parameter index out of range");
  return values_[index(j, k)];
}

void SymmetricParams::set(std::size_t j, std::size_t k, double value) {
  if (j >= p_ || k >= p_) throw InvalidArgument("parameter index out of range");
  if (!std::isfinite(value)) throw InvalidArgument("parameter value is not finite");
  values_[index(j, k)] = value;
}

std::size_t SymmetricParams::nonzeros() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(), [](double v) { return v != 0.0; }));
}

std::size_t SymmetricParams::edge_count() const noexcept {
  std::size_t n = 0;
  for (std::size_t j = 1; j < p_; ++j) {
    for (std::size_t k = 0; k < j; ++k) n += values_[index(j, k)] != 0.0;
  }
  return n;
}

double SymmetricParams::l1_norm() const noexcept {
  double s = 0.0;
  for (double v : values_) s += std::abs(v);
  return s;
}

double SymmetricParams::max_abs() const noexcept {
  double s = 0.0;
  for (double v : values_) s = std::max(s, std::abs(v));
  return s;
}

std::vector<double> SymmetricParams::dense() const {
  std::vector<double> out(p_ * p_);
  for (std::size_t j = 0; j < p_; ++j) {
    for (std::size_t k = 0; k < p_; ++k) out[j * p_ + k] = values_[index(j, k)];
  }
  return out;
}

double rowwise_l1_gap(const SymmetricParams& theta1, const SymmetricParams& theta2) {
  if (theta1.p() != theta2.p()) throw InvalidArgument("rowwise_l1_gap: dimension mismatch");
  double best = 0.0;
  for (std::size_t j = 0; j < theta1.p(); ++j) {
    double row = 0.0;
    for (std::size_t k = 0; k < theta1.p(); ++k) row += std::abs(theta2(j, k) - theta1(j, k));
    best = std::max(best, row);
  }
  return best;
}

// ---------------------------------------------------------------------------

Dataset::Dataset(std::size_t p, std::vector<Symbol> values, std::size_t alphabet_size,
                 std::vector<std::string> node_labels, std::vector<std::string> time_labels)
    : Dataset(Unchecked{}, p, std::move(values), alphabet_size, std::move(node_labels),
              std::move(time_labels)) {
  if (T() < 2) throw DataError("dataset needs at least two observations");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] >= alphabet_size_) {
      throw DataError("cell (" + std::to_string(i / p_ + 1) + ", " + std::to_string(i % p_ + 1) +
                      ") is not a valid alphabet index");
    }
  }
}

Dataset::Dataset(Unchecked, std::size_t p, std::vector<Symbol> values, std::size_t alphabet_size,
                 std::vector<std::string> node_labels, std::vector<std::string> time_labels)
    : p_(p),
      alphabet_size_(alphabet_size),
      values_(std::move(values)),
      node_labels_(std::move(node_labels)),
      time_labels_(std::move(time_labels)) {
  if (p_ == 0) throw DataError("dataset has no nodes");
  if (values_.size() % p_ != 0) throw DataError("dataset values are not a whole number of rows");
  if (!node_labels_.empty() && node_labels_.size() != p_) {
    throw DataError("node label count does not match p");
  }
  if (!time_labels_.empty() && time_labels_.size() != T()) {
    throw DataError("time label count does not match T");
  }
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows) const {
  std::vector<Symbol> values;
  values.reserve(rows.size() * p_);
  std::vector<std::string> times;
  for (std::size_t r : rows) {
    if (r >= T()) throw InvalidArgument("row index out of range");
    const auto src = row(r);
    values.insert(values.end(), src.begin(), src.end());
    if (!time_labels_.empty()) times.push_back(time_labels_[r]);
  }
  return Dataset(Unchecked{}, p_, std::move(values), alphabet_size_, node_labels_, std::move(times));
}

Dataset Dataset::reversed() const {
  std::vector<std::size_t> rows(T());
  for (std::size_t t = 0; t < rows.size(); ++t) rows[t] = rows.size() - 1 - t;
  return select_rows(rows);
}

std::size_t GroupLabels::group_count() const noexcept {
  std::size_t n = names.size();
  for (std::size_t g : assignment) n = std::max(n, g + 1);
  return n;
}

void GroupLabels::validate(std::size_t p) const {
  if (assignment.size() != p) {
    throw InvalidArgument("group labels cover " + std::to_string(assignment.size()) +
                          " nodes, expected " + std::to_string(p));
  }
}

void TimeRange::validate(std::size_t T) const {
  if (first < 1 || first > last || last > T) {
    throw InvalidArgument("time range [" + std::to_string(first) + ", " + std::to_string(last) +
                          "] is empty or outside [1, " + std::to_string(T) + "]");
  }
}

}  // namespace mrfcp
