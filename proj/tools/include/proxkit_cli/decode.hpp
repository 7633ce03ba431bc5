#pragma once

#include "proxkit_cli/problem_file.hpp"

#include "proxkit/block_operator.hpp"
#include "proxkit/convex_set.hpp"
#include "proxkit/linear_operator.hpp"
#include "proxkit/prox_function.hpp"
#include "proxkit/smooth_function.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace proxkit::cli {

/// A JSON value together with its path from the document root, so every
/// decoding error can name the field it came from.
class Field {
 public:
  Field(const nlohmann::json& value, std::string path);

  const nlohmann::json& raw() const { return *value_; }
  const std::string& path() const { return path_; }

  /// Required object member.
  Field operator[](std::string_view key) const;
  std::optional<Field> find(std::string_view key) const;
  bool has(std::string_view key) const;
  /// Array element.
  Field at(std::size_t i) const;
  std::size_t size() const;

  [[noreturn]] void error(const std::string& message) const;

  double number() const;
  double positive() const;
  /// Integer >= minimum.
  long long integer(long long minimum) const;
  std::string string() const;
  Vector vector() const;
  Matrix matrix() const;  // {rows, cols, data} in row-major order
  std::vector<Field> elements() const;

 private:
  const nlohmann::json* value_;
  std::string path_;
};

LinearOperator decode_operator(const Field& field);
/// {row_dims, col_dims, blocks: [{row, col, matrix}]}
BlockOperator decode_block_operator(const Field& field);
/// {"type": whole_space | box | ball | halfspace | hyperplane | singleton |
///  affine | nonneg_orthant | product, ...}
ConvexSet decode_set(const Field& field);
/// {"type": zero | indicator | l1 | l1_plus_quadratic | separable | scaled |
///  reflected_translated | support | conjugate | quadratic_data, ...}
ProxFunction decode_function(const Field& field);
/// {"type": zero | least_squares | multi_quadratic | envelope_sum |
///  quadratic_coupling, ...}
SmoothFunction decode_smooth(const Field& field);
EnvelopeTerm decode_envelope_term(const Field& field);

/// Throws at the field unless v has the expected length.
void require_length(const Field& field, const Vector& v, Index expected);

}  // namespace proxkit::cli
