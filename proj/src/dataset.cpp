#include "uplift/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "uplift/rng.hpp"

namespace uplift {

FeatureSchema::FeatureSchema(std::vector<Column> columns)
    : columns_(std::move(columns)) {
  std::set<std::string> names;
  offsets_.reserve(columns_.size());
  for (const auto& col : columns_) {
    if (!names.insert(col.name).second) {
      throw DataError("duplicate column name: " + col.name);
    }
    if (auto* c = std::get_if<CategoricalKind>(&col.kind)) {
      if (c->levels.empty()) {
        throw DataError("categorical column " + col.name + " has no levels");
      }
      std::set<std::string> lv(c->levels.begin(), c->levels.end());
      if (lv.size() != c->levels.size()) {
        throw DataError("duplicate level in column " + col.name);
      }
    }
    offsets_.push_back(encoded_dim_);
    encoded_dim_ += col.width();
  }
  const bool any_observed =
      std::any_of(columns_.begin(), columns_.end(),
                  [](const Column& c) { return c.observed; });
  if (!columns_.empty() && !any_observed) {
    throw DataError("schema has no observed column");
  }
}

std::size_t FeatureSchema::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return i;
  }
  throw DataError("unknown column: " + name);
}

std::vector<Eigen::Index> FeatureSchema::encoded_indices(
    const std::vector<std::string>& names) const {
  std::vector<Eigen::Index> out;
  for (const auto& name : names) {
    const std::size_t i = column_index(name);
    for (Eigen::Index j = 0; j < columns_[i].width(); ++j) {
      out.push_back(offsets_[i] + j);
    }
  }
  return out;
}

std::vector<Eigen::Index> FeatureSchema::observed_indices() const {
  std::vector<Eigen::Index> out;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (!columns_[i].observed) continue;
    for (Eigen::Index j = 0; j < columns_[i].width(); ++j) {
      out.push_back(offsets_[i] + j);
    }
  }
  return out;
}

Eigen::VectorXd one_hot_encode(const FeatureSchema& schema,
                               const std::vector<std::string>& raw_row) {
  if (raw_row.size() != schema.columns().size()) {
    throw DataError("row has " + std::to_string(raw_row.size()) +
                    " cells, schema expects " +
                    std::to_string(schema.columns().size()));
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(schema.encoded_dim());
  for (std::size_t i = 0; i < raw_row.size(); ++i) {
    const Column& col = schema.columns()[i];
    const Eigen::Index off = schema.encoded_offset(i);
    if (auto* c = std::get_if<CategoricalKind>(&col.kind)) {
      const auto it =
          std::find(c->levels.begin(), c->levels.end(), raw_row[i]);
      if (it == c->levels.end()) {
        throw DataError("unknown level '" + raw_row[i] + "' in column " +
                        col.name);
      }
      out[off + (it - c->levels.begin())] = 1.0;
    } else {
      double v;
      const char* first = raw_row[i].data();
      const char* last = first + raw_row[i].size();
      const auto [p, ec] = std::from_chars(first, last, v);
      if (ec != std::errc{} || p != last || !std::isfinite(v)) {
        throw DataError("unparseable numeric cell '" + raw_row[i] +
                        "' in column " + col.name);
      }
      out[off] = v;
    }
  }
  return out;
}

void Dataset::validate() const {
  const Eigen::Index rows = n();
  if (treatment.size() != rows || outcome.size() != rows ||
      propensity.size() != rows) {
    throw DataError("dataset column length mismatch");
  }
  if (!x.allFinite()) throw DataError("non-finite covariate entry");
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (!(propensity[i] > 0.0 && propensity[i] < 1.0)) {
      throw DataError("propensity outside (0,1) at row " + std::to_string(i));
    }
    if (treatment[i] != 0 && treatment[i] != 1) {
      throw DataError("treatment not in {0,1} at row " + std::to_string(i));
    }
  }
  if (truth) {
    if (truth->ite.size() != rows || truth->y1.size() != rows ||
        truth->y0.size() != rows) {
      throw DataError("truth length mismatch");
    }
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double want = treatment[i] > 0 ? truth->y1[i] : truth->y0[i];
      if (outcome[i] != want) {
        throw DataError("outcome inconsistent with potential outcomes at row " +
                        std::to_string(i));
      }
    }
  }
}

Eigen::MatrixXd Dataset::observed_x() const {
  const auto idx = schema.observed_indices();
  Eigen::MatrixXd out(n(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) {
    out.col(static_cast<Eigen::Index>(j)) = x.col(idx[j]);
  }
  return out;
}

Eigen::MatrixXd Dataset::observed_x(
    const std::vector<Eigen::Index>& rows) const {
  const auto idx = schema.observed_indices();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < idx.size(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          x(rows[i], idx[j]);
    }
  }
  return out;
}

Dataset Dataset::subset(const std::vector<Eigen::Index>& rows) const {
  Dataset out;
  out.schema = schema;
  const auto m = static_cast<Eigen::Index>(rows.size());
  out.x.resize(m, d());
  out.treatment.resize(m);
  out.outcome.resize(m);
  out.propensity.resize(m);
  if (truth) {
    out.truth = Truth{Eigen::VectorXd(m), Eigen::VectorXd(m),
                      Eigen::VectorXd(m)};
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index r = rows[static_cast<std::size_t>(i)];
    out.x.row(i) = x.row(r);
    out.treatment[i] = treatment[r];
    out.outcome[i] = outcome[r];
    out.propensity[i] = propensity[r];
    if (truth) {
      out.truth->ite[i] = truth->ite[r];
      out.truth->y1[i] = truth->y1[r];
      out.truth->y0[i] = truth->y0[r];
    }
  }
  return out;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  cells.push_back(cur);
  return cells;
}

double parse_double(const std::string& s, Eigen::Index row,
                    const std::string& col) {
  double v;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw DataError("unparseable cell '" + s + "' at row " +
                    std::to_string(row) + ", column " + col);
  }
  return v;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Dataset ingest_csv(const std::string& path, const FeatureSchema& schema,
                   const std::string& target_column) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw DataError("empty file: " + path);
  const auto header = split_line(line);

  // Map schema columns and the target onto header positions.
  std::vector<int> col_pos(schema.columns().size(), -1);
  int target_pos = -1;
  for (std::size_t h = 0; h < header.size(); ++h) {
    if (header[h] == target_column) target_pos = static_cast<int>(h);
    for (std::size_t i = 0; i < schema.columns().size(); ++i) {
      if (header[h] == schema.columns()[i].name) col_pos[i] = static_cast<int>(h);
    }
  }
  for (std::size_t i = 0; i < schema.columns().size(); ++i) {
    if (col_pos[i] < 0) {
      throw DataError("header missing schema column: " +
                      schema.columns()[i].name);
    }
  }
  if (target_pos < 0) throw DataError("header missing target column: " + target_column);

  std::vector<Eigen::VectorXd> encoded;
  std::vector<double> targets;
  Eigen::Index row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++row;
    const auto cells = split_line(line);
    if (cells.size() != header.size()) {
      throw DataError("row " + std::to_string(row) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(header.size()));
    }
    std::vector<std::string> raw(schema.columns().size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      raw[i] = cells[static_cast<std::size_t>(col_pos[i])];
    }
    try {
      encoded.push_back(one_hot_encode(schema, raw));
    } catch (const DataError& e) {
      throw DataError(std::string(e.what()) + " at row " + std::to_string(row));
    }
    const std::string& t = cells[static_cast<std::size_t>(target_pos)];
    if (t == "yes" || t == "1") {
      targets.push_back(1.0);
    } else if (t == "no" || t == "0") {
      targets.push_back(0.0);
    } else {
      throw DataError("non-binary target '" + t + "' at row " +
                      std::to_string(row));
    }
  }

  Dataset ds;
  ds.schema = schema;
  const auto m = static_cast<Eigen::Index>(encoded.size());
  ds.x.resize(m, schema.encoded_dim());
  for (Eigen::Index i = 0; i < m; ++i) {
    ds.x.row(i) = encoded[static_cast<std::size_t>(i)].transpose();
  }
  ds.treatment = Eigen::VectorXi::Zero(m);
  ds.outcome = Eigen::Map<Eigen::VectorXd>(targets.data(), m);
  ds.propensity = Eigen::VectorXd::Constant(m, 0.5);  // placeholder
  ds.validate();
  return ds;
}

void emit_csv(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);

  for (Eigen::Index j = 0; j < ds.d(); ++j) {
    out << "x" << j << ",";
  }
  out << "__treatment,__outcome,__propensity";
  if (ds.truth) out << ",__ite_true,__y1,__y0";
  out << "\n";
  for (Eigen::Index i = 0; i < ds.n(); ++i) {
    for (Eigen::Index j = 0; j < ds.d(); ++j) {
      out << fmt17(ds.x(i, j)) << ",";
    }
    out << ds.treatment[i] << "," << fmt17(ds.outcome[i]) << ","
        << fmt17(ds.propensity[i]);
    if (ds.truth) {
      out << "," << fmt17(ds.truth->ite[i]) << "," << fmt17(ds.truth->y1[i])
          << "," << fmt17(ds.truth->y0[i]);
    }
    out << "\n";
  }
}

Dataset read_emitted_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty file: " + path);
  const auto header = split_line(line);

  int t_pos = -1, y_pos = -1, e_pos = -1, ite_pos = -1, y1_pos = -1,
      y0_pos = -1;
  std::vector<std::size_t> x_pos;
  for (std::size_t h = 0; h < header.size(); ++h) {
    const std::string& name = header[h];
    if (name == "__treatment") t_pos = static_cast<int>(h);
    else if (name == "__outcome") y_pos = static_cast<int>(h);
    else if (name == "__propensity") e_pos = static_cast<int>(h);
    else if (name == "__ite_true") ite_pos = static_cast<int>(h);
    else if (name == "__y1") y1_pos = static_cast<int>(h);
    else if (name == "__y0") y0_pos = static_cast<int>(h);
    else x_pos.push_back(h);
  }
  if (t_pos < 0 || y_pos < 0 || e_pos < 0) {
    throw DataError("missing reserved columns in " + path);
  }
  const bool has_truth = ite_pos >= 0 && y1_pos >= 0 && y0_pos >= 0;

  std::vector<std::vector<double>> rows;
  Eigen::Index row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++row;
    const auto cells = split_line(line);
    if (cells.size() != header.size()) {
      throw DataError("row " + std::to_string(row) + " width mismatch");
    }
    std::vector<double> vals(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      vals[c] = parse_double(cells[c], row, header[c]);
    }
    rows.push_back(std::move(vals));
  }

  Dataset ds;
  std::vector<Column> cols;
  cols.reserve(x_pos.size());
  for (std::size_t j = 0; j < x_pos.size(); ++j) {
    cols.push_back(Column{header[x_pos[j]], NumericKind{}, true});
  }
  ds.schema = FeatureSchema(std::move(cols));
  const auto m = static_cast<Eigen::Index>(rows.size());
  ds.x.resize(m, static_cast<Eigen::Index>(x_pos.size()));
  ds.treatment.resize(m);
  ds.outcome.resize(m);
  ds.propensity.resize(m);
  if (has_truth) {
    ds.truth = Truth{Eigen::VectorXd(m), Eigen::VectorXd(m),
                     Eigen::VectorXd(m)};
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& vals = rows[static_cast<std::size_t>(i)];
    for (std::size_t j = 0; j < x_pos.size(); ++j) {
      ds.x(i, static_cast<Eigen::Index>(j)) = vals[x_pos[j]];
    }
    ds.treatment[i] = static_cast<int>(vals[static_cast<std::size_t>(t_pos)]);
    ds.outcome[i] = vals[static_cast<std::size_t>(y_pos)];
    ds.propensity[i] = vals[static_cast<std::size_t>(e_pos)];
    if (has_truth) {
      ds.truth->ite[i] = vals[static_cast<std::size_t>(ite_pos)];
      ds.truth->y1[i] = vals[static_cast<std::size_t>(y1_pos)];
      ds.truth->y0[i] = vals[static_cast<std::size_t>(y0_pos)];
    }
  }
  ds.validate();
  return ds;
}

std::vector<std::vector<Eigen::Index>> split_folds(Eigen::Index n,
                                                   Eigen::Index k,
                                                   std::uint64_t seed) {
  if (k <= 0 || k > n) {
    throw DataError("fold count must be in [1, n]");
  }
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  rng::Stream stream(rng::key(seed, 0x666f6c64));  // "fold"
  stream.shuffle(perm);

  std::vector<std::vector<Eigen::Index>> folds(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < n; ++i) {
    folds[static_cast<std::size_t>(i % k)].push_back(
        perm[static_cast<std::size_t>(i)]);
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

FeatureSchema schema_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open schema file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw DataError("invalid schema JSON: " + std::string(e.what()));
  }
  std::vector<Column> cols;
  for (const auto& c : j.at("columns")) {
    Column col;
    col.name = c.at("name").get<std::string>();
    col.observed = c.value("observed", true);
    const std::string kind = c.value("kind", "numeric");
    if (kind == "numeric") {
      col.kind = NumericKind{};
    } else if (kind == "categorical") {
      CategoricalKind ck;
      for (const auto& lv : c.at("levels")) {
        ck.levels.push_back(lv.get<std::string>());
      }
      col.kind = std::move(ck);
    } else {
      throw DataError("unknown column kind: " + kind);
    }
    cols.push_back(std::move(col));
  }
  return FeatureSchema(std::move(cols));
}

}  // namespace uplift
