#pragma once

// Naive double-loop adaptive pooling oracle, independent of deco/pooling.hpp.
// Recomputes the bin rule and the window means/maxima with plain loops over
// raw vectors so the library can be checked against it bit for bit.

#include <cstddef>
#include <vector>

namespace oracle {

struct Bin {
  std::size_t lo, hi;
};

inline std::vector<Bin> bins(std::size_t in_side, std::size_t out_side) {
  std::vector<Bin> out(out_side);
  for (std::size_t i = 0; i < out_side; ++i) {
    out[i].lo = static_cast<std::size_t>((i * in_side) / out_side);
    std::size_t num = (i + 1) * in_side;
    out[i].hi = num / out_side + (num % out_side ? 1 : 0);
  }
  return out;
}

// x: (in_side*in_side) x d row-major. Returns (out_side*out_side) x d.
inline std::vector<double> avg_pool(const std::vector<double>& x, std::size_t in_side,
                                    std::size_t out_side, std::size_t d) {
  auto b = bins(in_side, out_side);
  std::vector<double> out(out_side * out_side * d, 0.0);
  for (std::size_t oi = 0; oi < out_side; ++oi) {
    for (std::size_t oj = 0; oj < out_side; ++oj) {
      for (std::size_t c = 0; c < d; ++c) {
        double s = 0.0;
        for (std::size_t r = b[oi].lo; r < b[oi].hi; ++r)
          for (std::size_t q = b[oj].lo; q < b[oj].hi; ++q)
            s += x[(r * in_side + q) * d + c];
        double count = static_cast<double>((b[oi].hi - b[oi].lo) * (b[oj].hi - b[oj].lo));
        out[(oi * out_side + oj) * d + c] = s / count;
      }
    }
  }
  return out;
}

inline std::vector<double> max_pool(const std::vector<double>& x, std::size_t in_side,
                                    std::size_t out_side, std::size_t d) {
  auto b = bins(in_side, out_side);
  std::vector<double> out(out_side * out_side * d);
  for (std::size_t oi = 0; oi < out_side; ++oi) {
    for (std::size_t oj = 0; oj < out_side; ++oj) {
      for (std::size_t c = 0; c < d; ++c) {
        bool first = true;
        double best = 0.0;
        for (std::size_t r = b[oi].lo; r < b[oi].hi; ++r) {
          for (std::size_t q = b[oj].lo; q < b[oj].hi; ++q) {
            double v = x[(r * in_side + q) * d + c];
            if (first || v > best) {
              best = v;
              first = false;
            }
          }
        }
        out[(oi * out_side + oj) * d + c] = best;
      }
    }
  }
  return out;
}

}  // namespace oracle
