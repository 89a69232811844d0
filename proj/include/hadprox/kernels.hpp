#pragma once

// Data-parallel scan kernels used by the brute-force oracles and the audits.
// Every parallel kernel has a serial twin with identical results, including
// tie-breaking (lowest index wins), so tests can compare them exactly.

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <omp.h>

namespace hadprox::kernels {

using Index = std::int64_t;

struct ArgminResult {
  double value = std::numeric_limits<double>::infinity();
  Index index = -1;  // -1 when every value was +inf or NaN
};

namespace detail {
inline bool better(double v, Index i, const ArgminResult& cur) {
  if (!(v < std::numeric_limits<double>::infinity())) return false;
  return v < cur.value || (v == cur.value && (cur.index < 0 || i < cur.index));
}
}  // namespace detail

template <class Fn>
ArgminResult argmin_serial(Index n, Fn&& f) {
  ArgminResult best;
  for (Index i = 0; i < n; ++i) {
    const double v = f(i);
    if (detail::better(v, i, best)) best = {v, i};
  }
  return best;
}

template <class Fn>
ArgminResult argmin_parallel(Index n, Fn&& f) {
  ArgminResult best;
#pragma omp parallel
  {
    ArgminResult local;
#pragma omp for schedule(static) nowait
    for (Index i = 0; i < n; ++i) {
      const double v = f(i);
      if (detail::better(v, i, local)) local = {v, i};
    }
#pragma omp critical(hadprox_argmin)
    {
      if (local.index >= 0 && detail::better(local.value, local.index, best)) best = local;
    }
  }
  return best;
}

/// Smallest i with pred(i), or -1.
template <class Pred>
Index first_index_serial(Index n, Pred&& pred) {
  for (Index i = 0; i < n; ++i) {
    if (pred(i)) return i;
  }
  return -1;
}

template <class Pred>
Index first_index_parallel(Index n, Pred&& pred) {
  Index found = std::numeric_limits<Index>::max();
#pragma omp parallel for schedule(static) reduction(min : found)
  for (Index i = 0; i < n; ++i) {
    if (i < found && pred(i)) found = i;
  }
  return found == std::numeric_limits<Index>::max() ? -1 : found;
}

template <class Fn>
std::vector<double> map_serial(Index n, Fn&& f) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = f(i);
  return out;
}

template <class Fn>
std::vector<double> map_parallel(Index n, Fn&& f) {
  std::vector<double> out(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = f(i);
  return out;
}

/// Inclusive uniform grid on [x_lo, x_hi] x [y_lo, y_hi]; index = i * ny + j.
struct Grid2D {
  double x_lo, x_hi, y_lo, y_hi;
  Index nx, ny;

  static Grid2D with_step(double x_lo, double x_hi, double y_lo, double y_hi, double step) {
    const auto cells = [step](double lo, double hi) {
      return static_cast<Index>(std::llround((hi - lo) / step)) + 1;
    };
    return {x_lo, x_hi, y_lo, y_hi, cells(x_lo, x_hi), cells(y_lo, y_hi)};
  }

  Index size() const { return nx * ny; }
  double x(Index i) const { return nx == 1 ? x_lo : x_lo + (x_hi - x_lo) * double(i) / double(nx - 1); }
  double y(Index j) const { return ny == 1 ? y_lo : y_lo + (y_hi - y_lo) * double(j) / double(ny - 1); }
  double x_of(Index k) const { return x(k / ny); }
  double y_of(Index k) const { return y(k % ny); }
};

template <class Fn>
ArgminResult grid_argmin_serial(const Grid2D& g, Fn&& f) {
  return argmin_serial(g.size(), [&](Index k) { return f(g.x_of(k), g.y_of(k)); });
}

template <class Fn>
ArgminResult grid_argmin_parallel(const Grid2D& g, Fn&& f) {
  return argmin_parallel(g.size(), [&](Index k) { return f(g.x_of(k), g.y_of(k)); });
}

/// Row-major table of m values per point.
struct ValueTable {
  Index rows = 0;
  int m = 0;
  std::vector<double> data;
  const double* row(Index r) const { return data.data() + r * m; }
};

/// First row r strictly dominating row `candidate` against every generator:
/// <v_cand - v_r, z_j> > slack for all j. Generators are given row-major (count x m).
inline bool strictly_dominates(const ValueTable& t, Index r, Index candidate,
                               const std::vector<double>& gens, double slack) {
  const int m = t.m;
  const auto count = static_cast<Index>(gens.size()) / m;
  const double* a = t.row(r);
  const double* c = t.row(candidate);
  for (Index j = 0; j < count; ++j) {
    double s = 0;
    for (int i = 0; i < m; ++i) s += (c[i] - a[i]) * gens[static_cast<std::size_t>(j * m + i)];
    if (!(s > slack)) return false;
  }
  return true;
}

inline Index first_strict_dominator_serial(const ValueTable& t, Index candidate,
                                           const std::vector<double>& gens, double slack) {
  return first_index_serial(t.rows, [&](Index r) { return strictly_dominates(t, r, candidate, gens, slack); });
}

inline Index first_strict_dominator_parallel(const ValueTable& t, Index candidate,
                                             const std::vector<double>& gens, double slack) {
  return first_index_parallel(t.rows, [&](Index r) { return strictly_dominates(t, r, candidate, gens, slack); });
}

inline int max_threads() { return omp_get_max_threads(); }

}  // namespace hadprox::kernels
