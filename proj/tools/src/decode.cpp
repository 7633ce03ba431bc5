#include "proxkit_cli/decode.hpp"

#include "proxkit/errors.hpp"

#include <cmath>
#include <utility>

namespace proxkit::cli {

using nlohmann::json;

namespace {

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

// Library validation errors are re-raised against the field being decoded.
template <class Build>
auto guarded(const Field& field, Build&& build) {
  try {
    return build();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    field.error(e.what());
  }
}

}  // namespace

ParseError::ParseError(std::string path, const std::string& message)
    : std::runtime_error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}

Field::Field(const json& value, std::string path) : value_(&value), path_(std::move(path)) {}

void Field::error(const std::string& message) const { throw ParseError(path_, message); }

Field Field::operator[](std::string_view key) const {
  if (!value_->is_object()) error("expected an object");
  const auto it = value_->find(std::string(key));
  if (it == value_->end()) throw ParseError(join(path_, key), "missing required field");
  return Field(*it, join(path_, key));
}

std::optional<Field> Field::find(std::string_view key) const {
  if (!value_->is_object()) error("expected an object");
  const auto it = value_->find(std::string(key));
  if (it == value_->end() || it->is_null()) return std::nullopt;
  return Field(*it, join(path_, key));
}

bool Field::has(std::string_view key) const { return find(key).has_value(); }

Field Field::at(std::size_t i) const {
  if (!value_->is_array()) error("expected an array");
  if (i >= value_->size()) error("index " + std::to_string(i) + " out of range");
  return Field((*value_)[i], path_ + "[" + std::to_string(i) + "]");
}

std::size_t Field::size() const {
  if (!value_->is_array()) error("expected an array");
  return value_->size();
}

std::vector<Field> Field::elements() const {
  std::vector<Field> out;
  for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i));
  return out;
}

double Field::number() const {
  if (!value_->is_number()) error("expected a number");
  const double v = value_->get<double>();
  if (!std::isfinite(v)) error("expected a finite number");
  return v;
}

double Field::positive() const {
  const double v = number();
  if (!(v > 0.0)) error("must be > 0");
  return v;
}

long long Field::integer(long long minimum) const {
  if (!value_->is_number_integer()) error("expected an integer");
  const auto v = value_->get<long long>();
  if (v < minimum) error("must be >= " + std::to_string(minimum));
  return v;
}

std::string Field::string() const {
  if (!value_->is_string()) error("expected a string");
  return value_->get<std::string>();
}

Vector Field::vector() const {
  if (!value_->is_array()) error("expected an array of numbers");
  if (value_->empty()) error("vector must not be empty");
  Vector v(static_cast<Index>(value_->size()));
  for (std::size_t i = 0; i < value_->size(); ++i) v[static_cast<Index>(i)] = at(i).number();
  return v;
}

Matrix Field::matrix() const {
  const auto rows = (*this)["rows"].integer(1);
  const auto cols = (*this)["cols"].integer(1);
  const Field data = (*this)["data"];
  const auto count = static_cast<long long>(data.size());
  if (count != rows * cols)
    (*this)["cols"].error("rows * cols = " + std::to_string(rows * cols) + " does not match " +
                          std::to_string(count) + " data entries");
  Matrix m(rows, cols);
  for (long long r = 0; r < rows; ++r)
    for (long long c = 0; c < cols; ++c)
      m(r, c) = data.at(static_cast<std::size_t>(r * cols + c)).number();
  return m;
}

void require_length(const Field& field, const Vector& v, Index expected) {
  if (v.size() != expected)
    field.error("expected length " + std::to_string(expected) + ", got " + std::to_string(v.size()));
}

LinearOperator decode_operator(const Field& field) {
  Matrix m = field.matrix();
  return guarded(field, [&] { return LinearOperator(std::move(m)); });
}

BlockOperator decode_block_operator(const Field& field) {
  std::vector<Index> row_dims, col_dims;
  for (const auto& d : field["row_dims"].elements()) row_dims.push_back(d.integer(1));
  for (const auto& d : field["col_dims"].elements()) col_dims.push_back(d.integer(1));
  if (row_dims.empty()) field["row_dims"].error("needs at least one block row");
  if (col_dims.empty()) field["col_dims"].error("needs at least one block column");

  BlockOperator::Grid grid(row_dims.size(), std::vector<std::optional<LinearOperator>>(col_dims.size()));
  for (const auto& b : field["blocks"].elements()) {
    const auto k = static_cast<std::size_t>(b["row"].integer(0));
    const auto i = static_cast<std::size_t>(b["col"].integer(0));
    if (k >= row_dims.size()) b["row"].error("block row out of range");
    if (i >= col_dims.size()) b["col"].error("block column out of range");
    if (grid[k][i]) b.error("duplicate block");
    const Field mf = b["matrix"];
    auto op = decode_operator(mf);
    if (op.rows() != row_dims[k]) mf["rows"].error("does not match row_dims[" + std::to_string(k) + "]");
    if (op.cols() != col_dims[i]) mf["cols"].error("does not match col_dims[" + std::to_string(i) + "]");
    grid[k][i] = std::move(op);
  }
  return guarded(field, [&] { return BlockOperator(std::move(grid), row_dims, col_dims); });
}

ConvexSet decode_set(const Field& field) {
  const std::string type = field["type"].string();
  if (type == "whole_space") {
    const auto dim = field["dim"].integer(1);
    return guarded(field, [&] { return ConvexSet::whole_space(dim); });
  }
  if (type == "nonneg_orthant") {
    const auto dim = field["dim"].integer(1);
    return guarded(field, [&] { return ConvexSet::nonneg_orthant(dim); });
  }
  if (type == "box") {
    Vector lo = field["lo"].vector();
    Vector hi = field["hi"].vector();
    require_length(field["hi"], hi, lo.size());
    return guarded(field, [&] { return ConvexSet::box(lo, hi); });
  }
  if (type == "ball") {
    Vector center = field["center"].vector();
    const double radius = field["radius"].number();
    return guarded(field, [&] { return ConvexSet::ball(center, radius); });
  }
  if (type == "halfspace" || type == "hyperplane") {
    Vector a = field["a"].vector();
    const double b = field["b"].number();
    return guarded(field, [&] {
      return type == "halfspace" ? ConvexSet::halfspace(a, b) : ConvexSet::hyperplane(a, b);
    });
  }
  if (type == "singleton") {
    Vector point = field["point"].vector();
    return guarded(field, [&] { return ConvexSet::singleton(point); });
  }
  if (type == "affine") {
    Matrix A = field["A"].matrix();
    Vector c = field["c"].vector();
    require_length(field["c"], c, A.rows());
    return guarded(field, [&] { return ConvexSet::affine(A, c); });
  }
  if (type == "product") {
    std::vector<ConvexSet> parts;
    for (const auto& p : field["parts"].elements()) parts.push_back(decode_set(p));
    if (parts.empty()) field["parts"].error("needs at least one part");
    return guarded(field, [&] { return ConvexSet::product(parts); });
  }
  field["type"].error("unknown set type '" + type +
                      "' (expected whole_space, box, ball, halfspace, hyperplane, singleton, affine, "
                      "nonneg_orthant or product)");
}

ProxFunction decode_function(const Field& field) {
  const std::string type = field["type"].string();
  if (type == "zero") {
    const auto dim = field["dim"].integer(1);
    return ProxFunction::zero(dim);
  }
  if (type == "l1") {
    const auto dim = field["dim"].integer(1);
    return ProxFunction::l1(dim);
  }
  if (type == "l1_plus_quadratic") {
    const auto dim = field["dim"].integer(1);
    const double beta = field["beta"].positive();
    return guarded(field, [&] { return ProxFunction::l1_plus_quadratic(dim, beta); });
  }
  if (type == "indicator") return ProxFunction::indicator(decode_set(field["set"]));
  if (type == "support") return ProxFunction::support(decode_set(field["set"]));
  if (type == "conjugate") return ProxFunction::conjugate(decode_function(field["base"]));
  if (type == "scaled") {
    auto base = decode_function(field["base"]);
    const double weight = field["weight"].positive();
    return guarded(field, [&] { return ProxFunction::scaled(base, weight); });
  }
  if (type == "reflected_translated") {
    auto base = decode_function(field["base"]);
    Vector z = field["z"].vector();
    require_length(field["z"], z, base.dim());
    return guarded(field, [&] { return ProxFunction::reflected_translated(base, z); });
  }
  if (type == "separable") {
    std::vector<ProxFunction> components;
    for (const auto& c : field["components"].elements()) {
      components.push_back(decode_function(c));
      if (components.back().dim() != 1) c.error("separable components must be one-dimensional");
    }
    if (components.empty()) field["components"].error("needs at least one component");
    std::optional<Matrix> basis;
    if (auto b = field.find("basis")) basis = b->matrix();
    return guarded(field, [&] { return ProxFunction::separable(components, basis); });
  }
  if (type == "quadratic_data") {
    auto L = decode_operator(field["L"]);
    Vector y = field["y"].vector();
    require_length(field["y"], y, L.rows());
    return guarded(field, [&] { return ProxFunction::quadratic_data(L, y); });
  }
  field["type"].error("unknown function type '" + type +
                      "' (expected zero, indicator, l1, l1_plus_quadratic, separable, scaled, "
                      "reflected_translated, support, conjugate or quadratic_data)");
}

EnvelopeTerm decode_envelope_term(const Field& field) {
  const double weight = field.has("weight") ? field["weight"].positive() : 1.0;
  const double rho = field["rho"].number();
  if (!(rho > 0.0)) field["rho"].error("envelope parameter rho must be > 0");
  auto h = decode_function(field["h"]);
  auto L = field.has("L") ? decode_operator(field["L"]) : LinearOperator::identity(h.dim());
  if (L.rows() != h.dim()) field["L"]["rows"].error("does not match the dimension of h");
  return EnvelopeTerm{weight, rho, std::move(L), std::move(h)};
}

SmoothFunction decode_smooth(const Field& field) {
  const std::string type = field["type"].string();
  if (type == "zero") {
    const auto dim = field["dim"].integer(1);
    return SmoothFunction::zero(dim);
  }
  if (type == "least_squares") {
    auto L = decode_operator(field["L"]);
    Vector y = field["y"].vector();
    require_length(field["y"], y, L.rows());
    return guarded(field, [&] { return SmoothFunction::least_squares(L, y); });
  }
  if (type == "multi_quadratic") {
    std::vector<QuadraticTerm> terms;
    for (const auto& t : field["terms"].elements()) {
      const double weight = t.has("weight") ? t["weight"].positive() : 1.0;
      auto L = decode_operator(t["L"]);
      Vector y = t["y"].vector();
      require_length(t["y"], y, L.rows());
      terms.push_back(QuadraticTerm{weight, std::move(L), std::move(y)});
    }
    return guarded(field, [&] { return SmoothFunction::multi_quadratic(terms); });
  }
  if (type == "envelope_sum") {
    std::vector<EnvelopeTerm> terms;
    for (const auto& t : field["terms"].elements()) terms.push_back(decode_envelope_term(t));
    return guarded(field, [&] { return SmoothFunction::envelope_sum(terms); });
  }
  if (type == "quadratic_coupling") {
    auto ell = decode_function(field["ell"]);
    Vector z = field["z"].vector();
    require_length(field["z"], z, ell.dim());
    const double rho = field["rho"].positive();
    return guarded(field, [&] { return SmoothFunction::quadratic_coupling(ell, z, rho); });
  }
  field["type"].error("unknown smooth function type '" + type +
                      "' (expected zero, least_squares, multi_quadratic, envelope_sum or "
                      "quadratic_coupling)");
}

}  // namespace proxkit::cli
