#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace netdelay {

class ShapeMismatch : public std::runtime_error {
 public:
  explicit ShapeMismatch(const std::string& what) : std::runtime_error(what) {}
};

// Dense row-major tensor of doubles. Only rank 1 and 2 are used; a rank-1
// tensor behaves as a single row where a matrix is expected.
struct Tensor {
  std::vector<std::int64_t> shape;
  std::vector<double> data;

  Tensor() = default;
  explicit Tensor(std::vector<std::int64_t> s) : shape(std::move(s)) {
    data.assign(static_cast<std::size_t>(count(shape)), 0.0);
  }
  Tensor(std::vector<std::int64_t> s, std::vector<double> values)
      : shape(std::move(s)), data(std::move(values)) {
    if (static_cast<std::int64_t>(data.size()) != count(shape))
      throw ShapeMismatch("value count does not match shape " + shape_str());
  }

  static std::int64_t count(const std::vector<std::int64_t>& s) {
    std::int64_t n = 1;
    for (std::int64_t d : s) {
      if (d <= 0) throw ShapeMismatch("shape dimensions must be positive");
      n *= d;
    }
    return n;
  }
  static Tensor zeros(std::vector<std::int64_t> s) { return Tensor(std::move(s)); }
  static Tensor scalar(double v) { return Tensor({1}, {v}); }

  std::int64_t numel() const { return static_cast<std::int64_t>(data.size()); }
  std::int64_t rows() const { return shape.size() == 2 ? shape[0] : 1; }
  std::int64_t cols() const { return shape.size() == 2 ? shape[1] : shape.at(0); }

  double& operator()(std::int64_t r, std::int64_t c) {
    return data[static_cast<std::size_t>(r * cols() + c)];
  }
  double operator()(std::int64_t r, std::int64_t c) const {
    return data[static_cast<std::size_t>(r * cols() + c)];
  }

  bool same_shape(const Tensor& other) const { return shape == other.shape; }

  std::string shape_str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
      if (i) s += ", ";
      s += std::to_string(shape[i]);
    }
    return s + "]";
  }
};

}  // namespace netdelay
