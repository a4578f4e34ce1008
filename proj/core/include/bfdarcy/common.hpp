#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace bfdarcy {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Vector = Eigen::VectorXd;

using ScalarField = std::function<double(const Vec2&)>;
using VectorField = std::function<Vec2(const Vec2&)>;
using TensorField = std::function<Mat2(const Vec2&)>;

/// Category of a failure; the CLI maps these onto exit codes.
enum class ErrorCode {
  invalid_argument,
  mesh_format,
  inverted_triangle,
  non_matching_interface,
  odd_interface,
  singular_system,
  io,
  config,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Region of the domain a triangle belongs to.
enum class Region { brinkman, darcy };

}  // namespace bfdarcy
