#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace deco {

using Shape = std::vector<std::size_t>;

inline std::size_t shape_numel(const Shape& s) {
  std::size_t n = 1;
  for (std::size_t d : s) n *= d;
  return n;
}

inline std::string shape_str(const Shape& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  out += ")";
  return out;
}

// Dense row-major f64 tensor. Rank 0 (shape == {}) is a scalar with one element.
struct Tensor {
  Shape shape;
  std::vector<double> data;

  Tensor() = default;
  explicit Tensor(Shape s) : shape(std::move(s)), data(shape_numel(shape), 0.0) {}
  Tensor(Shape s, std::vector<double> d) : shape(std::move(s)), data(std::move(d)) {
    if (data.size() != shape_numel(shape))
      throw std::invalid_argument("Tensor: data length " + std::to_string(data.size()) +
                                  " does not match shape " + shape_str(shape));
  }

  static Tensor zeros(Shape s) { return Tensor(std::move(s)); }
  static Tensor full(Shape s, double v) {
    Tensor t(std::move(s));
    for (double& x : t.data) x = v;
    return t;
  }
  static Tensor scalar(double v) { return Tensor(Shape{}, {v}); }
  static Tensor identity(std::size_t n) {
    Tensor t(Shape{n, n});
    for (std::size_t i = 0; i < n; ++i) t.data[i * n + i] = 1.0;
    return t;
  }

  std::size_t numel() const { return data.size(); }
  std::size_t rank() const { return shape.size(); }
  bool is_scalar() const { return shape.empty(); }

  std::size_t rows() const {
    if (rank() != 2) throw std::logic_error("Tensor::rows: rank " + std::to_string(rank()) + " != 2");
    return shape[0];
  }
  std::size_t cols() const {
    if (rank() != 2) throw std::logic_error("Tensor::cols: rank " + std::to_string(rank()) + " != 2");
    return shape[1];
  }

  double& at(std::size_t r, std::size_t c) { return data[r * shape[1] + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * shape[1] + c]; }

  double& operator[](std::size_t i) { return data[i]; }
  double operator[](std::size_t i) const { return data[i]; }

  bool same_shape(const Tensor& o) const { return shape == o.shape; }

  bool all_finite() const {
    for (double v : data)
      if (!std::isfinite(v)) return false;
    return true;
  }
};

inline bool operator==(const Tensor& a, const Tensor& b) {
  return a.shape == b.shape && a.data == b.data;
}

// Deterministic RNG. mt19937_64 with explicit bit-level conversion to doubles;
// std::uniform_real_distribution / std::normal_distribution are implementation
// defined, which would break bit-identical runs across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller, no cached spare so the stream is position-independent.
  double normal() {
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // inclusive range
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
    return lo + next_u64() % (hi - lo + 1);
  }

  Tensor normal_tensor(Shape s, double stddev) {
    Tensor t(std::move(s));
    for (double& x : t.data) x = stddev * normal();
    return t;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace deco
