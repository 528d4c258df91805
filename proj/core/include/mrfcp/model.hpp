#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mrfcp {

/// Index of a symbol in a ModelSpec alphabet. Datasets store these, never the
/// symbol values themselves.
using Symbol = std::uint8_t;

/// A finite-alphabet pairwise Markov random field family:
///
///   g(x) ∝ exp( Σ_j θ_jj b0(x_j) + Σ_{k<j} θ_jk b(x_j, x_k) ).
///
/// The potentials are tabulated over alphabet indices at construction; every
/// hot loop works from the tables.
class ModelSpec {
 public:
  /// Tabulates `b0` and `b` over `alphabet`. Throws InvalidArgument when the
  /// alphabet is empty, longer than 256, has duplicates, or `b` is asymmetric.
  ModelSpec(std::vector<double> alphabet, const std::function<double(double)>& b0,
            const std::function<double(double, double)>& b);

  /// Builds directly from tables: `b0_table[u]` and row-major `b_table[u*m+v]`.
  static ModelSpec from_tables(std::vector<double> alphabet, std::vector<double> b0_table,
                               std::vector<double> b_table);

  std::size_t alphabet_size() const noexcept { return alphabet_.size(); }
  std::span<const double> alphabet() const noexcept { return alphabet_; }
  double symbol(Symbol u) const { return alphabet_.at(u); }

  /// Alphabet index of `value`, if present.
  std::optional<Symbol> index_of(double value) const noexcept;

  double b0(Symbol u) const noexcept { return b0_[u]; }
  double b(Symbol u, Symbol v) const noexcept { return b_[u * alphabet_.size() + v]; }
  std::span<const double> b0_table() const noexcept { return b0_; }
  std::span<const double> b_table() const noexcept { return b_; }

  /// max( sup|b0(u)-b0(v)|, sup|b(x,u)-b(x,v)| ), cached at construction.
  double c0() const noexcept { return c0_; }

  bool is_binary() const noexcept { return alphabet_.size() == 2; }

 private:
  ModelSpec() = default;
  void validate_and_finish();

  std::vector<double> alphabet_;
  std::vector<double> b0_;
  std::vector<double> b_;
  double c0_ = 0.0;
};

/// Ising family: alphabet {0,1}, b0(x) = x, b(x,y) = xy.
ModelSpec make_ising_spec();

/// Recomputes c0 by exhaustive enumeration over the alphabet.
double compute_c0(const ModelSpec& spec);

/// p x p real symmetric matrix stored as its lower triangle (j >= k), packed
/// row by row: entry (j,k) lives at j(j+1)/2 + k. Diagonal entries are node
/// potentials, off-diagonal entries are edge weights.
class SymmetricParams {
 public:
  SymmetricParams() = default;
  explicit SymmetricParams(std::size_t p);
  /// Takes ownership of a packed vector of length p(p+1)/2; entries must be finite.
  SymmetricParams(std::size_t p, std::vector<double> packed);

  static constexpr std::size_t packed_size(std::size_t p) noexcept { return p * (p + 1) / 2; }
  static constexpr std::size_t index(std::size_t j, std::size_t k) noexcept {
    return j >= k ? j * (j + 1) / 2 + k : k * (k + 1) / 2 + j;
  }

  std::size_t p() const noexcept { return p_; }
  /// Number of free parameters d = p(p+1)/2.
  std::size_t dim() const noexcept { return values_.size(); }

  double operator()(std::size_t j, std::size_t k) const noexcept { return values_[index(j, k)]; }
  double at(std::size_t j, std::size_t k) const;
  /// Writes (j,k), which is also (k,j). Throws on non-finite values.
  void set(std::size_t j, std::size_t k, double value);

  std::span<const double> packed() const noexcept { return values_; }

  /// Non-zero count over the lower triangle, diagonal included.
  std::size_t nonzeros() const noexcept;
  /// Non-zero count over strictly off-diagonal entries (edges).
  std::size_t edge_count() const noexcept;
  /// Σ_{k<=j} |θ_jk|.
  double l1_norm() const noexcept;
  double max_abs() const noexcept;

  /// Dense row-major p x p copy (both triangles filled).
  std::vector<double> dense() const;

  friend bool operator==(const SymmetricParams&, const SymmetricParams&) = default;

 private:
  std::size_t p_ = 0;
  std::vector<double> values_;
};

/// max_j Σ_k |θ2_jk - θ1_jk| over the full symmetric matrix.
double rowwise_l1_gap(const SymmetricParams& theta1, const SymmetricParams& theta2);

/// T time-ordered observations of p nodes, each cell an alphabet index.
class Dataset {
 public:
  Dataset() = default;
  /// `values` is row-major T x p. Throws DataError if T < 2 or a cell is not
  /// below `alphabet_size`.
  Dataset(std::size_t p, std::vector<Symbol> values, std::size_t alphabet_size,
          std::vector<std::string> node_labels = {}, std::vector<std::string> time_labels = {});

  std::size_t p() const noexcept { return p_; }
  std::size_t T() const noexcept { return p_ == 0 ? 0 : values_.size() / p_; }
  std::size_t alphabet_size() const noexcept { return alphabet_size_; }

  /// Row t (0-based).
  std::span<const Symbol> row(std::size_t t) const noexcept {
    return {values_.data() + t * p_, p_};
  }
  Symbol operator()(std::size_t t, std::size_t j) const noexcept { return values_[t * p_ + j]; }
  std::span<const Symbol> values() const noexcept { return values_; }

  const std::vector<std::string>& node_labels() const noexcept { return node_labels_; }
  const std::vector<std::string>& time_labels() const noexcept { return time_labels_; }

  /// New dataset made of the given rows in the given order (rows may repeat).
  /// The result may have a single row; it is meant for resampling.
  Dataset select_rows(std::span<const std::size_t> rows) const;
  /// Rows in reverse temporal order.
  Dataset reversed() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  struct Unchecked {};
  Dataset(Unchecked, std::size_t p, std::vector<Symbol> values, std::size_t alphabet_size,
          std::vector<std::string> node_labels, std::vector<std::string> time_labels);

  std::size_t p_ = 0;
  std::size_t alphabet_size_ = 0;
  std::vector<Symbol> values_;
  std::vector<std::string> node_labels_;
  std::vector<std::string> time_labels_;
};

/// Category of every node, e.g. party blocs. Categories are small integers
/// 0..n_groups-1 with optional display names.
struct GroupLabels {
  std::vector<std::size_t> assignment;
  std::vector<std::string> names;

  std::size_t group_count() const noexcept;
  /// Throws InvalidArgument unless assignment has length p.
  void validate(std::size_t p) const;
};

/// Inclusive 1-based time range [first, last], matching the usual t = 1..T
/// convention for segments.
struct TimeRange {
  std::size_t first = 1;
  std::size_t last = 1;

  std::size_t length() const noexcept { return last >= first ? last - first + 1 : 0; }
  /// Throws InvalidArgument unless 1 <= first <= last <= T.
  void validate(std::size_t T) const;
};

}  // namespace mrfcp
