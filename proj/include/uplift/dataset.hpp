#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "uplift/errors.hpp"

namespace uplift {

struct NumericKind {};
struct CategoricalKind {
  std::vector<std::string> levels;
};
using ColumnKind = std::variant<NumericKind, CategoricalKind>;

struct Column {
  std::string name;
  ColumnKind kind;
  bool observed = true;  // visible to learners

  bool is_categorical() const {
    return std::holds_alternative<CategoricalKind>(kind);
  }
  // Number of encoded columns this raw column expands to.
  Eigen::Index width() const {
    if (auto* c = std::get_if<CategoricalKind>(&kind)) {
      return static_cast<Eigen::Index>(c->levels.size());
    }
    return 1;
  }
};

// Ordered column layout shared by every dataset. Categorical columns are
// one-hot encoded in level order, so the encoded layout is fully determined
// by the schema.
class FeatureSchema {
 public:
  FeatureSchema() = default;
  explicit FeatureSchema(std::vector<Column> columns);

  const std::vector<Column>& columns() const { return columns_; }
  Eigen::Index encoded_dim() const { return encoded_dim_; }

  // First encoded column of raw column i.
  Eigen::Index encoded_offset(std::size_t i) const { return offsets_[i]; }
  // Index of a named raw column; throws if absent.
  std::size_t column_index(const std::string& name) const;

  // Encoded column indices belonging to the given raw columns.
  std::vector<Eigen::Index> encoded_indices(
      const std::vector<std::string>& names) const;
  // Encoded column indices of all columns with observed == true.
  std::vector<Eigen::Index> observed_indices() const;

 private:
  std::vector<Column> columns_;
  std::vector<Eigen::Index> offsets_;
  Eigen::Index encoded_dim_ = 0;
};

// Encode one raw row (cells as strings for categoricals, parsed doubles for
// numerics are passed as their textual form too).
Eigen::VectorXd one_hot_encode(const FeatureSchema& schema,
                               const std::vector<std::string>& raw_row);

struct Truth {
  Eigen::VectorXd ite;
  Eigen::VectorXd y1;
  Eigen::VectorXd y0;
};

// Immutable experimental table: encoded covariates plus assignment state.
// Propensity stores the probability of the arm the row could be treated
// with, so control weight is 1 - propensity.
struct Dataset {
  FeatureSchema schema;
  Eigen::MatrixXd x;          // n x d encoded covariates
  Eigen::VectorXi treatment;  // D_i in {0,1}
  Eigen::VectorXd outcome;    // Y_i in {0,1}
  Eigen::VectorXd propensity; // e(X_i), strictly inside (0,1)
  std::optional<Truth> truth;

  Eigen::Index n() const { return x.rows(); }
  Eigen::Index d() const { return x.cols(); }

  // Enforces overlap, finiteness and truth consistency; throws DataError.
  void validate() const;

  // Columns of x restricted to observed schema columns.
  Eigen::MatrixXd observed_x() const;
  Eigen::MatrixXd observed_x(const std::vector<Eigen::Index>& rows) const;

  Dataset subset(const std::vector<Eigen::Index>& rows) const;
};

// CSV ingestion per the schema; treatment zeroed, propensity set to the 0.5
// placeholder, truth absent. Target cells accept yes/no or 1/0.
Dataset ingest_csv(const std::string& path, const FeatureSchema& schema,
                   const std::string& target_column);

// Emits encoded covariates plus the reserved columns (__treatment,
// __outcome, __propensity and, when truth is present, __ite_true, __y1,
// __y0) with 17 significant digits.
void emit_csv(const Dataset& ds, const std::string& path);

// Re-reads a file produced by emit_csv.
Dataset read_emitted_csv(const std::string& path);

// Random partition of {0..n-1} into k sets whose sizes differ by at most 1.
std::vector<std::vector<Eigen::Index>> split_folds(Eigen::Index n,
                                                   Eigen::Index k,
                                                   std::uint64_t seed);

FeatureSchema schema_from_json_file(const std::string& path);

}  // namespace uplift
