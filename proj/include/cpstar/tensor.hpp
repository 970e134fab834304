#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cpstar/errors.hpp"
#include "cpstar/scalar.hpp"

namespace cpstar {

using Legs = std::vector<std::size_t>;

inline std::size_t leg_product(const Legs& legs) {
  return std::accumulate(legs.begin(), legs.end(), std::size_t{1}, std::multiplies<>());
}

inline std::string legs_to_string(const Legs& legs) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < legs.size(); ++i) out << (i ? "," : "") << legs[i];
  out << ']';
  return out.str();
}

// Dense tensor with an explicit split into row legs (outputs) and column legs
// (inputs). A morphism A -> B has B's legs as rows and A's legs as columns.
// Entries are row-major over all legs, rows first.
template <ScalarModel M>
class Tensor {
 public:
  using model_type = M;
  using value_type = typename M::value_type;

  Tensor() : data_(1, M::zero()) {}

  Tensor(Legs rows, Legs cols)
      : row_legs_(std::move(rows)),
        col_legs_(std::move(cols)),
        rows_(leg_product(row_legs_)),
        cols_(leg_product(col_legs_)),
        data_(rows_ * cols_, M::zero()) {}

  Tensor(Legs rows, Legs cols, std::vector<value_type> entries)
      : row_legs_(std::move(rows)),
        col_legs_(std::move(cols)),
        rows_(leg_product(row_legs_)),
        cols_(leg_product(col_legs_)),
        data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
      throw ShapeMismatch("tensor with legs " + legs_to_string(row_legs_) + "<-" + legs_to_string(col_legs_) +
                          " needs " + std::to_string(rows_ * cols_) + " entries, got " +
                          std::to_string(data_.size()));
    }
  }

  static Tensor scalar(value_type v) { return Tensor({}, {}, {v}); }

  const Legs& row_legs() const { return row_legs_; }
  const Legs& col_legs() const { return col_legs_; }
  Legs shape() const {
    Legs all = row_legs_;
    all.insert(all.end(), col_legs_.begin(), col_legs_.end());
    return all;
  }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  value_type operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  value_type& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  std::span<const value_type> entries() const { return data_; }
  std::span<value_type> entries() { return data_; }

  bool operator==(const Tensor& other) const = default;

 private:
  Legs row_legs_;
  Legs col_legs_;
  std::size_t rows_ = 1;
  std::size_t cols_ = 1;
  std::vector<value_type> data_;
};

using ComplexTensor = Tensor<ComplexModel>;
using BoolTensor = Tensor<BooleanModel>;

namespace detail {

using RowMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline void require_legs(const Legs& left, const Legs& right, const char* what) {
  if (left != right) {
    throw ShapeMismatch(std::string(what) + ": legs " + legs_to_string(left) + " vs " + legs_to_string(right));
  }
}

// Row-major strides of a leg list.
inline std::vector<std::size_t> strides(const Legs& legs) {
  std::vector<std::size_t> out(legs.size(), 1);
  for (std::size_t i = legs.size(); i-- > 1;) out[i - 1] = out[i] * legs[i];
  return out;
}

}  // namespace detail

template <ScalarModel M>
Tensor<M> identity(const Legs& legs) {
  Tensor<M> out(legs, legs);
  for (std::size_t i = 0; i < out.rows(); ++i) out(i, i) = M::one();
  return out;
}

template <ScalarModel M>
Tensor<M> identity(std::size_t d) {
  return identity<M>(Legs{d});
}

// State I -> A (x) A with entries delta_ij.
template <ScalarModel M>
Tensor<M> cup(std::size_t d) {
  Tensor<M> out({d, d}, {});
  for (std::size_t i = 0; i < d; ++i) out(i * d + i, 0) = M::one();
  return out;
}

template <ScalarModel M>
Tensor<M> cap(std::size_t d) {
  Tensor<M> out({}, {d, d});
  for (std::size_t i = 0; i < d; ++i) out(0, i * d + i) = M::one();
  return out;
}

// A (x) B -> B (x) A.
template <ScalarModel M>
Tensor<M> swap(std::size_t da, std::size_t db) {
  Tensor<M> out({db, da}, {da, db});
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < db; ++j) out(j * da + i, i * db + j) = M::one();
  return out;
}

template <ScalarModel M>
Tensor<M> basis_vector(std::size_t d, std::size_t i) {
  Tensor<M> out({d}, {});
  out(i, 0) = M::one();
  return out;
}

// a o b: b is applied first.
template <ScalarModel M>
Tensor<M> contract(const Tensor<M>& a, const Tensor<M>& b) {
  detail::require_legs(a.col_legs(), b.row_legs(), "contract");
  Tensor<M> out(a.row_legs(), b.col_legs());
  if constexpr (is_complex_model<M>) {
    Eigen::Map<const detail::RowMatrix> ma(a.entries().data(), a.rows(), a.cols());
    Eigen::Map<const detail::RowMatrix> mb(b.entries().data(), b.rows(), b.cols());
    Eigen::Map<detail::RowMatrix> mo(out.entries().data(), out.rows(), out.cols());
    mo.noalias() = ma * mb;
  } else {
    const std::size_t n = a.cols();
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        const auto aik = a(i, k);
        if (aik == M::zero()) continue;
        for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) = M::add(out(i, j), M::mul(aik, b(k, j)));
      }
    }
  }
  return out;
}

template <ScalarModel M>
Tensor<M> kron(const Tensor<M>& a, const Tensor<M>& b) {
  Legs rows = a.row_legs();
  rows.insert(rows.end(), b.row_legs().begin(), b.row_legs().end());
  Legs cols = a.col_legs();
  cols.insert(cols.end(), b.col_legs().begin(), b.col_legs().end());
  Tensor<M> out(std::move(rows), std::move(cols));
  for (std::size_t ra = 0; ra < a.rows(); ++ra)
    for (std::size_t ca = 0; ca < a.cols(); ++ca) {
      const auto x = a(ra, ca);
      if (x == M::zero()) continue;
      for (std::size_t rb = 0; rb < b.rows(); ++rb)
        for (std::size_t cb = 0; cb < b.cols(); ++cb)
          out(ra * b.rows() + rb, ca * b.cols() + cb) = M::mul(x, b(rb, cb));
    }
  return out;
}

template <ScalarModel M>
Tensor<M> dagger(const Tensor<M>& a) {
  Tensor<M> out(a.col_legs(), a.row_legs());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = M::conj(a(r, c));
  return out;
}

template <ScalarModel M>
Tensor<M> conjugate(const Tensor<M>& a) {
  Tensor<M> out(a.row_legs(), a.col_legs());
  auto src = a.entries();
  auto dst = out.entries();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = M::conj(src[i]);
  return out;
}

// Same entries, new leg split. Leg products must agree.
template <ScalarModel M>
Tensor<M> reshape(const Tensor<M>& a, Legs rows, Legs cols) {
  if (leg_product(rows) != a.rows() || leg_product(cols) != a.cols()) {
    throw ShapeMismatch("reshape " + legs_to_string(a.row_legs()) + "<-" + legs_to_string(a.col_legs()) + " to " +
                        legs_to_string(rows) + "<-" + legs_to_string(cols));
  }
  std::vector<typename M::value_type> data(a.entries().begin(), a.entries().end());
  return Tensor<M>(std::move(rows), std::move(cols), std::move(data));
}

// Permute all legs (rows first, then columns) and split again after
// `n_rows` legs. order[k] names the old leg that becomes new leg k.
template <ScalarModel M>
Tensor<M> regroup(const Tensor<M>& a, const std::vector<std::size_t>& order, std::size_t n_rows) {
  const Legs old_legs = a.shape();
  if (order.size() != old_legs.size() || n_rows > order.size()) throw ShapeMismatch("regroup: bad leg order");
  std::vector<bool> seen(order.size(), false);
  for (auto k : order) {
    if (k >= order.size() || seen[k]) throw ShapeMismatch("regroup: order is not a permutation");
    seen[k] = true;
  }
  Legs new_legs(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) new_legs[k] = old_legs[order[k]];
  Tensor<M> out(Legs(new_legs.begin(), new_legs.begin() + static_cast<std::ptrdiff_t>(n_rows)),
                Legs(new_legs.begin() + static_cast<std::ptrdiff_t>(n_rows), new_legs.end()));
  const auto old_strides = detail::strides(old_legs);
  std::vector<std::size_t> step(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) step[k] = old_strides[order[k]];

  std::vector<std::size_t> idx(order.size(), 0);
  auto src = a.entries();
  auto dst = out.entries();
  std::size_t offset = 0;
  for (std::size_t flat = 0; flat < dst.size(); ++flat) {
    dst[flat] = src[offset];
    for (std::size_t k = order.size(); k-- > 0;) {
      if (++idx[k] < new_legs[k]) {
        offset += step[k];
        break;
      }
      offset -= step[k] * (new_legs[k] - 1);
      idx[k] = 0;
    }
  }
  return out;
}

// Contract row leg `row_leg` with column leg `col_leg`.
template <ScalarModel M>
Tensor<M> partial_trace(const Tensor<M>& a, std::size_t row_leg, std::size_t col_leg) {
  const auto nr = a.row_legs().size();
  const auto nc = a.col_legs().size();
  if (row_leg >= nr || col_leg >= nc) throw ShapeMismatch("partial_trace: leg index out of range");
  const std::size_t d = a.row_legs()[row_leg];
  if (a.col_legs()[col_leg] != d) {
    throw ShapeMismatch("partial_trace: traced legs have dimensions " + std::to_string(d) + " and " +
                        std::to_string(a.col_legs()[col_leg]));
  }
  std::vector<std::size_t> order;
  order.push_back(row_leg);
  for (std::size_t k = 0; k < nr; ++k)
    if (k != row_leg) order.push_back(k);
  order.push_back(nr + col_leg);
  for (std::size_t k = 0; k < nc; ++k)
    if (k != col_leg) order.push_back(nr + k);
  const Tensor<M> moved = regroup(a, order, nr);

  Legs rows(moved.row_legs().begin() + 1, moved.row_legs().end());
  Legs cols(moved.col_legs().begin() + 1, moved.col_legs().end());
  Tensor<M> out(rows, cols);
  const std::size_t rr = out.rows();
  const std::size_t cc = out.cols();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t r = 0; r < rr; ++r)
      for (std::size_t c = 0; c < cc; ++c) out(r, c) = M::add(out(r, c), moved(i * rr + r, i * cc + c));
  return out;
}

template <ScalarModel M>
typename M::value_type trace(const Tensor<M>& a) {
  detail::require_legs(a.row_legs(), a.col_legs(), "trace");
  auto acc = M::zero();
  for (std::size_t i = 0; i < a.rows(); ++i) acc = M::add(acc, a(i, i));
  return acc;
}

// (id (x) g (x) id) o t, where g consumes the row legs of t starting at `first`.
template <ScalarModel M>
Tensor<M> compose_at_output(const Tensor<M>& g, const Tensor<M>& t, std::size_t first) {
  const auto nr = t.row_legs().size();
  const auto nc = t.col_legs().size();
  const auto k = g.col_legs().size();
  if (first + k > nr) throw ShapeMismatch("compose_at_output: slot out of range");
  const Legs consumed(t.row_legs().begin() + static_cast<std::ptrdiff_t>(first),
                      t.row_legs().begin() + static_cast<std::ptrdiff_t>(first + k));
  detail::require_legs(g.col_legs(), consumed, "compose_at_output");

  std::vector<std::size_t> order;
  for (std::size_t i = first; i < first + k; ++i) order.push_back(i);
  for (std::size_t i = 0; i < nr; ++i)
    if (i < first || i >= first + k) order.push_back(i);
  for (std::size_t i = 0; i < nc; ++i) order.push_back(nr + i);
  const Tensor<M> moved = regroup(t, order, k);
  const Tensor<M> applied = contract(g, moved);

  // applied legs: g rows | other rows | t cols
  const auto gr = g.row_legs().size();
  const auto others = nr - k;
  std::vector<std::size_t> back;
  for (std::size_t i = 0; i < first; ++i) back.push_back(gr + i);
  for (std::size_t i = 0; i < gr; ++i) back.push_back(i);
  for (std::size_t i = first; i < others; ++i) back.push_back(gr + i);
  for (std::size_t i = 0; i < nc; ++i) back.push_back(gr + others + i);
  return regroup(applied, back, others + gr);
}

// t o (id (x) g (x) id), where g feeds the column legs of t starting at `first`.
template <ScalarModel M>
Tensor<M> compose_at_input(const Tensor<M>& t, const Tensor<M>& g, std::size_t first) {
  const auto nr = t.row_legs().size();
  const auto nc = t.col_legs().size();
  const auto k = g.row_legs().size();
  if (first + k > nc) throw ShapeMismatch("compose_at_input: slot out of range");
  const Legs fed(t.col_legs().begin() + static_cast<std::ptrdiff_t>(first),
                 t.col_legs().begin() + static_cast<std::ptrdiff_t>(first + k));
  detail::require_legs(g.row_legs(), fed, "compose_at_input");

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < nr; ++i) order.push_back(i);
  for (std::size_t i = 0; i < nc; ++i)
    if (i < first || i >= first + k) order.push_back(nr + i);
  for (std::size_t i = first; i < first + k; ++i) order.push_back(nr + i);
  const auto others = nc - k;
  const Tensor<M> moved = regroup(t, order, nr + others);
  const Tensor<M> applied = contract(moved, g);

  // applied legs: t rows | other cols | g cols
  const auto gc = g.col_legs().size();
  std::vector<std::size_t> back;
  for (std::size_t i = 0; i < nr; ++i) back.push_back(i);
  for (std::size_t i = 0; i < first; ++i) back.push_back(nr + i);
  for (std::size_t i = 0; i < gc; ++i) back.push_back(nr + others + i);
  for (std::size_t i = first; i < others; ++i) back.push_back(nr + i);
  return regroup(applied, back, nr);
}

template <ScalarModel M>
Tensor<M> scaled(const Tensor<M>& a, typename M::value_type s) {
  Tensor<M> out = a;
  for (auto& x : out.entries()) x = M::mul(s, x);
  return out;
}

template <ScalarModel M>
Tensor<M> sum(const Tensor<M>& a, const Tensor<M>& b) {
  detail::require_legs(a.shape(), b.shape(), "sum");
  if (a.row_legs() != b.row_legs()) throw ShapeMismatch("sum: row/column split differs");
  Tensor<M> out = a;
  auto src = b.entries();
  auto dst = out.entries();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = M::add(dst[i], src[i]);
  return out;
}

template <LinearModel M>
Tensor<M> difference(const Tensor<M>& a, const Tensor<M>& b) {
  detail::require_legs(a.shape(), b.shape(), "difference");
  Tensor<M> out = a;
  auto src = b.entries();
  auto dst = out.entries();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = M::add(dst[i], M::neg(src[i]));
  return out;
}

// Largest entrywise distance; shapes must agree.
template <ScalarModel M>
double max_deviation(const Tensor<M>& a, const Tensor<M>& b) {
  if (a.row_legs() != b.row_legs() || a.col_legs() != b.col_legs()) {
    throw ShapeMismatch("max_deviation: " + legs_to_string(a.row_legs()) + "<-" + legs_to_string(a.col_legs()) +
                        " vs " + legs_to_string(b.row_legs()) + "<-" + legs_to_string(b.col_legs()));
  }
  double worst = 0.0;
  auto x = a.entries();
  auto y = b.entries();
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, M::distance(x[i], y[i]));
  return worst;
}

template <ScalarModel M>
bool passes(double residual, double tol) {
  return M::exact ? residual == 0.0 : residual <= tol;
}

template <ScalarModel M>
bool approx_equal(const Tensor<M>& a, const Tensor<M>& b, double tol = Tolerance{}.eq) {
  if (a.row_legs() != b.row_legs() || a.col_legs() != b.col_legs()) return false;
  return passes<M>(max_deviation(a, b), tol);
}

// Column j of a matrix-shaped tensor as a state (rows legs <- nothing).
template <ScalarModel M>
Tensor<M> column(const Tensor<M>& a, std::size_t j) {
  Tensor<M> out(a.row_legs(), {});
  for (std::size_t r = 0; r < a.rows(); ++r) out(r, 0) = a(r, j);
  return out;
}

// Matrix whose columns are the given states.
template <ScalarModel M>
Tensor<M> from_columns(const std::vector<Tensor<M>>& states) {
  if (states.empty()) throw ShapeMismatch("from_columns: no states");
  Tensor<M> out(states.front().row_legs(), {states.size()});
  for (std::size_t j = 0; j < states.size(); ++j) {
    detail::require_legs(states[j].row_legs(), states.front().row_legs(), "from_columns");
    if (states[j].cols() != 1) throw ShapeMismatch("from_columns: expected states");
    for (std::size_t r = 0; r < out.rows(); ++r) out(r, j) = states[j](r, 0);
  }
  return out;
}

}  // namespace cpstar
