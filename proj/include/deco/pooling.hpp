#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "deco/tensor.hpp"

namespace deco {

// Half-open interval of input rows/cols feeding one output cell.
struct PoolBin {
  std::size_t lo = 0;
  std::size_t hi = 0;
  std::size_t size() const { return hi - lo; }
};

enum class PoolMode { Avg, Max };

// Per-output-cell input windows for 2D adaptive pooling over a square grid.
// Window for output index i along one side: [floor(i*in/out), ceil((i+1)*in/out)).
// When out divides in, all windows are disjoint with kernel K = in/out and
// stride S = K; otherwise neighboring windows may overlap.
struct PoolPlan {
  std::size_t in_side = 0;
  std::size_t out_side = 0;
  std::vector<PoolBin> row_bins;
  std::vector<PoolBin> col_bins;

  std::size_t in_cells() const { return in_side * in_side; }
  std::size_t out_cells() const { return out_side * out_side; }

  bool uniform() const { return out_side != 0 && in_side % out_side == 0; }
  std::size_t kernel() const { return uniform() ? in_side / out_side : 0; }
  std::size_t stride() const { return kernel(); }

  std::size_t window_size(std::size_t oi, std::size_t oj) const {
    return row_bins[oi].size() * col_bins[oj].size();
  }
};

inline PoolPlan plan_bins(std::size_t in_side, std::size_t out_side) {
  if (in_side < 1 || out_side < 1)
    throw std::invalid_argument("plan_bins: sides must be >= 1");
  if (out_side > in_side)
    throw std::invalid_argument("plan_bins: pooling cannot upsample (out_side " +
                                std::to_string(out_side) + " > in_side " +
                                std::to_string(in_side) + ")");
  PoolPlan plan;
  plan.in_side = in_side;
  plan.out_side = out_side;
  plan.row_bins.resize(out_side);
  for (std::size_t i = 0; i < out_side; ++i) {
    plan.row_bins[i].lo = (i * in_side) / out_side;
    plan.row_bins[i].hi = ((i + 1) * in_side + out_side - 1) / out_side;  // ceil
  }
  plan.col_bins = plan.row_bins;  // square grid, same rule per dimension
  return plan;
}

namespace detail {
inline void check_pool_input(const Tensor& x, const PoolPlan& plan, const char* op) {
  if (x.rank() != 2)
    throw std::invalid_argument(std::string(op) + ": input must be rank 2, got shape " +
                                shape_str(x.shape));
  if (x.rows() != plan.in_cells())
    throw std::invalid_argument(std::string(op) + ": input has " + std::to_string(x.rows()) +
                                " rows, plan expects " + std::to_string(plan.in_cells()));
}
}  // namespace detail

// Row r of the output corresponds to output cell (r / out_side, r % out_side);
// input rows are the flattened row-major cells of the in_side x in_side grid.
inline Tensor pool_avg(const Tensor& x, const PoolPlan& plan) {
  detail::check_pool_input(x, plan, "pool_avg");
  const std::size_t d = x.cols();
  Tensor out(Shape{plan.out_cells(), d});
  for (std::size_t oi = 0; oi < plan.out_side; ++oi) {
    for (std::size_t oj = 0; oj < plan.out_side; ++oj) {
      const PoolBin& rb = plan.row_bins[oi];
      const PoolBin& cb = plan.col_bins[oj];
      const double count = static_cast<double>(rb.size() * cb.size());
      double* orow = &out.at(oi * plan.out_side + oj, 0);
      for (std::size_t c = 0; c < d; ++c) {
        double acc = 0.0;
        for (std::size_t r = rb.lo; r < rb.hi; ++r)
          for (std::size_t q = cb.lo; q < cb.hi; ++q)
            acc += x.at(r * plan.in_side + q, c);
        orow[c] = acc / count;
      }
    }
  }
  return out;
}

// Flattened input index of the max per output cell and channel, ties to the
// lowest flattened index. Needed to build the structural map and to route
// gradients in pool_backward.
struct ArgmaxRecord {
  std::size_t out_cells = 0;
  std::size_t channels = 0;
  std::vector<std::size_t> index;  // out_cells x channels, row-major

  std::size_t at(std::size_t cell, std::size_t c) const { return index[cell * channels + c]; }
  bool empty() const { return index.empty(); }
};

inline Tensor pool_max(const Tensor& x, const PoolPlan& plan, ArgmaxRecord* record = nullptr) {
  detail::check_pool_input(x, plan, "pool_max");
  const std::size_t d = x.cols();
  Tensor out(Shape{plan.out_cells(), d});
  if (record) {
    record->out_cells = plan.out_cells();
    record->channels = d;
    record->index.assign(plan.out_cells() * d, 0);
  }
  for (std::size_t oi = 0; oi < plan.out_side; ++oi) {
    for (std::size_t oj = 0; oj < plan.out_side; ++oj) {
      const PoolBin& rb = plan.row_bins[oi];
      const PoolBin& cb = plan.col_bins[oj];
      const std::size_t cell = oi * plan.out_side + oj;
      for (std::size_t c = 0; c < d; ++c) {
        double best = -std::numeric_limits<double>::infinity();
        std::size_t best_idx = 0;
        for (std::size_t r = rb.lo; r < rb.hi; ++r) {
          for (std::size_t q = cb.lo; q < cb.hi; ++q) {
            const std::size_t idx = r * plan.in_side + q;
            const double v = x.at(idx, c);
            if (v > best) {
              best = v;
              best_idx = idx;
            }
          }
        }
        out.at(cell, c) = best;
        if (record) record->index[cell * d + c] = best_idx;
      }
    }
  }
  return out;
}

// Query-to-Patch operator of average pooling: entry (m, n) = 1/|window_m| when
// patch n lies in window m, else 0. Each row sums to 1. This matrix applied to
// the input reproduces pool_avg.
inline Tensor structural_map_avg(const PoolPlan& plan) {
  Tensor map(Shape{plan.out_cells(), plan.in_cells()});
  for (std::size_t oi = 0; oi < plan.out_side; ++oi) {
    for (std::size_t oj = 0; oj < plan.out_side; ++oj) {
      const PoolBin& rb = plan.row_bins[oi];
      const PoolBin& cb = plan.col_bins[oj];
      const double w = 1.0 / static_cast<double>(rb.size() * cb.size());
      const std::size_t m = oi * plan.out_side + oj;
      for (std::size_t r = rb.lo; r < rb.hi; ++r)
        for (std::size_t q = cb.lo; q < cb.hi; ++q)
          map.at(m, r * plan.in_side + q) = w;
    }
  }
  return map;
}

// Query-to-Patch operator of max pooling: row m is one-hot at the window's
// winning patch. The winner is chosen by majority vote across channels of the
// recorded per-channel argmax, ties to the lowest flattened index.
inline Tensor structural_map_max(const PoolPlan& plan, const ArgmaxRecord& record) {
  if (record.empty() || record.out_cells != plan.out_cells())
    throw std::invalid_argument("structural_map_max: missing or mismatched argmax record");
  Tensor map(Shape{plan.out_cells(), plan.in_cells()});
  std::vector<std::size_t> votes;
  for (std::size_t m = 0; m < plan.out_cells(); ++m) {
    votes.assign(plan.in_cells(), 0);
    for (std::size_t c = 0; c < record.channels; ++c) votes[record.at(m, c)] += 1;
    std::size_t winner = 0, best = 0;
    for (std::size_t n = 0; n < plan.in_cells(); ++n) {
      if (votes[n] > best) {
        best = votes[n];
        winner = n;
      }
    }
    map.at(m, winner) = 1.0;
  }
  return map;
}

// Query-to-Patch operator of a non-compressive (linear) projector.
inline Tensor structural_map_linear(std::size_t n) {
  if (n < 1) throw std::invalid_argument("structural_map_linear: n must be >= 1");
  return Tensor::identity(n);
}

inline Tensor pool_backward(const Tensor& grad_out, const PoolPlan& plan, PoolMode mode,
                            const ArgmaxRecord& record = {}) {
  if (grad_out.rank() != 2 || grad_out.rows() != plan.out_cells())
    throw std::invalid_argument("pool_backward: grad_out shape " + shape_str(grad_out.shape) +
                                " does not match plan output " +
                                std::to_string(plan.out_cells()));
  const std::size_t d = grad_out.cols();
  Tensor grad_in(Shape{plan.in_cells(), d});
  if (mode == PoolMode::Avg) {
    for (std::size_t oi = 0; oi < plan.out_side; ++oi) {
      for (std::size_t oj = 0; oj < plan.out_side; ++oj) {
        const PoolBin& rb = plan.row_bins[oi];
        const PoolBin& cb = plan.col_bins[oj];
        const double count = static_cast<double>(rb.size() * cb.size());
        const std::size_t cell = oi * plan.out_side + oj;
        for (std::size_t c = 0; c < d; ++c) {
          const double g = grad_out.at(cell, c) / count;
          for (std::size_t r = rb.lo; r < rb.hi; ++r)
            for (std::size_t q = cb.lo; q < cb.hi; ++q)
              grad_in.at(r * plan.in_side + q, c) += g;
        }
      }
    }
  } else {
    if (record.empty() || record.out_cells != plan.out_cells() || record.channels != d)
      throw std::invalid_argument("pool_backward: max mode needs the argmax record of the forward run");
    for (std::size_t cell = 0; cell < plan.out_cells(); ++cell)
      for (std::size_t c = 0; c < d; ++c)
        grad_in.at(record.at(cell, c), c) += grad_out.at(cell, c);
  }
  return grad_in;
}

}  // namespace deco
