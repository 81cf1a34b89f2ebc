#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/OrderingMethods>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace evcs::lp {

/// Bounded dual simplex on
///
///     min c'x   s.t.   row_lower <= A x <= row_upper,   col_lower <= x <= col_upper.
///
/// Every row gets a slack s = -A x so the slack basis is the identity. The basis is
/// held as a sparse LU factorization followed by a file of product-form updates, and
/// pricing is dual steepest edge. Bounds may be changed between solves and the
/// previous basis is reused, which is what branch and bound needs: bound changes never
/// break dual feasibility as long as every structural column with a nonzero reduced
/// cost is boxed.
template <typename Scalar = double>
class DualSimplex {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Sparse = Eigen::SparseMatrix<Scalar, Eigen::ColMajor>;

  enum class Status { Optimal, Infeasible, Cutoff, IterationLimit };
  enum class VarStatus : std::uint8_t { Basic, AtLower, AtUpper };

  static constexpr Scalar kInf = std::numeric_limits<Scalar>::infinity();

  struct Tolerances {
    Scalar primal = Scalar(1e-7);
    Scalar dual = Scalar(1e-9);
    Scalar pivot = Scalar(1e-9);
  };

  DualSimplex(Sparse a, const Vector& cost, const Vector& col_lower, const Vector& col_upper,
              const Vector& row_lower, const Vector& row_upper)
      : a_(std::move(a)), m_(a_.rows()), n_(a_.cols()) {
    a_.makeCompressed();
    const Eigen::Index total = n_ + m_;
    cost_ = Vector::Zero(total);
    cost_.head(n_) = cost;
    lower_.resize(total);
    upper_.resize(total);
    lower_.head(n_) = col_lower;
    upper_.head(n_) = col_upper;
    lower_.tail(m_) = -row_upper;
    upper_.tail(m_) = -row_lower;
    status_.assign(static_cast<std::size_t>(total), VarStatus::AtLower);
    basis_pos_.assign(static_cast<std::size_t>(total), -1);
    basic_.resize(static_cast<std::size_t>(m_));
    x_ = Vector::Zero(total);
    for (Eigen::Index i = 0; i < m_; ++i) {
      basic_[i] = n_ + i;
      basis_pos_[n_ + i] = static_cast<int>(i);
      status_[n_ + i] = VarStatus::Basic;
    }
    d_ = cost_;
    for (Eigen::Index j = 0; j < n_; ++j) place_nonbasic(j);
    weights_ = Vector::Ones(m_);
    refactor();
  }

  Eigen::Index rows() const { return m_; }
  Eigen::Index cols() const { return n_; }

  Scalar lower(Eigen::Index j) const { return lower_(j); }
  Scalar upper(Eigen::Index j) const { return upper_(j); }

  /// Changes column bounds; the current basis is kept.
  void set_bounds(Eigen::Index j, Scalar lo, Scalar hi) {
    if (lower_(j) == lo && upper_(j) == hi) return;
    lower_(j) = lo;
    upper_(j) = hi;
    if (status_[j] == VarStatus::Basic) return;
    const Scalar old = x_(j);
    place_nonbasic(j);
    const Scalar delta = x_(j) - old;
    if (delta != Scalar(0)) shift_basics(j, delta);
  }

  struct Row {
    std::vector<std::pair<Eigen::Index, Scalar>> terms;  // structural column, coefficient
    Scalar lower = -kInf;
    Scalar upper = kInf;
  };

  /// Appends rows (cuts) whose slacks enter the basis. The basis stays dual feasible,
  /// so the next solve() continues from where the previous one stopped.
  void add_rows(const std::vector<Row>& rows) {
    if (rows.empty()) return;
    const Eigen::Index k = static_cast<Eigen::Index>(rows.size());

    // The new basis [[B, 0], [R, I]] has inverse rows [-R B^-1, I] for the new slacks.
    Vector fresh_weights(k);
    for (Eigen::Index r = 0; r < k; ++r) {
      Vector u = Vector::Zero(m_);
      for (const auto& [j, c] : rows[r].terms)
        if (status_[j] == VarStatus::Basic) u(basis_pos_[j]) += c;
      fresh_weights(r) = btran(std::move(u)).squaredNorm() + Scalar(1);
    }

    std::vector<Eigen::Triplet<Scalar>> triplets;
    triplets.reserve(static_cast<std::size_t>(a_.nonZeros()) + 4 * rows.size());
    for (Eigen::Index j = 0; j < n_; ++j)
      for (typename Sparse::InnerIterator it(a_, j); it; ++it)
        triplets.emplace_back(it.row(), j, it.value());
    for (Eigen::Index r = 0; r < k; ++r)
      for (const auto& [j, c] : rows[r].terms) triplets.emplace_back(m_ + r, j, c);
    Sparse grown(m_ + k, n_);
    grown.setFromTriplets(triplets.begin(), triplets.end());
    grown.makeCompressed();

    const Eigen::Index total_old = n_ + m_;
    auto grow = [&](Vector& v) {
      Vector w(total_old + k);
      w.head(total_old) = v;
      v = std::move(w);
    };
    grow(cost_);
    grow(lower_);
    grow(upper_);
    grow(x_);
    grow(d_);
    weights_.conservativeResize(m_ + k);
    for (Eigen::Index r = 0; r < k; ++r) {
      const Eigen::Index slack = total_old + r;
      cost_(slack) = 0;
      lower_(slack) = -rows[r].upper;
      upper_(slack) = -rows[r].lower;
      x_(slack) = 0;
      d_(slack) = 0;
      status_.push_back(VarStatus::Basic);
      basis_pos_.push_back(static_cast<int>(m_ + r));
      basic_.push_back(slack);
      weights_(m_ + r) = fresh_weights(r);
    }
    a_ = std::move(grown);
    m_ += k;
    refactor();
  }

  /// Runs dual simplex from the current basis. Stops early with Cutoff once the
  /// dual objective proves the optimum is >= cutoff.
  Status solve(Scalar cutoff = kInf, std::int64_t max_iterations = 200000) {
    for (std::int64_t it = 0; it < max_iterations; ++it) {
      if (static_cast<int>(etas_.size()) >= kMaxEtas) refactor();
      if (cutoff < kInf && objective() >= cutoff) return Status::Cutoff;

      const int r = choose_leaving_row();
      if (r < 0) return Status::Optimal;
      const Eigen::Index leaving = basic_[r];
      const bool to_lower = x_(leaving) < lower_(leaving);

      Vector unit = Vector::Zero(m_);
      unit(r) = Scalar(1);
      const Vector rho = btran(std::move(unit));
      int q = -1;
      if (!ratio_test(rho, to_lower, q)) {
        // A fresh factorization rules out a spurious infeasibility verdict.
        if (!etas_.empty()) {
          refactor();
          continue;
        }
        return Status::Infeasible;
      }

      const Vector col = ftran_column(q);
      const Scalar alpha = col(r);
      const Scalar drift = std::abs(alpha - alpha_(q));
      if (std::abs(alpha) < tol_.pivot || drift > Scalar(1e-7) * (Scalar(1) + std::abs(alpha))) {
        if (!etas_.empty()) {
          refactor();
          continue;
        }
        if (std::abs(alpha) < tol_.pivot) throw std::runtime_error("DualSimplex: singular pivot");
      }
      pivot(r, q, col, rho, to_lower ? lower_(leaving) : upper_(leaving), to_lower);
      ++iterations_;
    }
    return Status::IterationLimit;
  }

  /// Basis and values, enough to return to a solved LP after trial bound changes.
  struct State {
    Vector lower, upper, x, d, weights;
    std::vector<VarStatus> status;
    std::vector<int> basis_pos;
    std::vector<Eigen::Index> basic;
    std::uint64_t factor_generation = 0;
    std::size_t eta_count = 0;
  };

  void save(State& s) const {
    s.lower = lower_;
    s.upper = upper_;
    s.x = x_;
    s.d = d_;
    s.weights = weights_;
    s.status = status_;
    s.basis_pos = basis_pos_;
    s.basic = basic_;
    s.factor_generation = factor_generation_;
    s.eta_count = etas_.size();
  }

  /// Restores a state saved with the same number of rows. When the factorization has
  /// not been rebuilt since, dropping the newer updates recovers the saved inverse.
  void restore(const State& s) {
    lower_ = s.lower;
    upper_ = s.upper;
    x_ = s.x;
    d_ = s.d;
    weights_ = s.weights;
    status_ = s.status;
    basis_pos_ = s.basis_pos;
    basic_ = s.basic;
    if (s.factor_generation == factor_generation_ && s.eta_count <= etas_.size()) {
      etas_.resize(s.eta_count);
    } else {
      refactor();
    }
  }

  /// Minimization objective of the current basis. While the basis is dual feasible
  /// this is a lower bound on the LP optimum, even before the solve finishes.
  Scalar objective() const { return cost_.dot(x_); }
  Scalar value(Eigen::Index j) const { return x_(j); }
  Scalar reduced_cost(Eigen::Index j) const { return d_(j); }
  bool is_basic(Eigen::Index j) const { return status_[j] == VarStatus::Basic; }
  Vector primal() const { return x_.head(n_); }
  std::int64_t iterations() const { return iterations_; }

  /// Refactors the basis and recomputes primal values and reduced costs from scratch.
  void refactor() {
    std::vector<Eigen::Triplet<Scalar>> triplets;
    for (Eigen::Index i = 0; i < m_; ++i) {
      const Eigen::Index j = basic_[i];
      if (j < n_) {
        for (typename Sparse::InnerIterator it(a_, j); it; ++it)
          triplets.emplace_back(it.row(), i, it.value());
      } else {
        triplets.emplace_back(j - n_, i, Scalar(1));
      }
    }
    Sparse basis(m_, m_);
    basis.setFromTriplets(triplets.begin(), triplets.end());
    basis.makeCompressed();
    lu_.analyzePattern(basis);
    lu_.factorize(basis);
    if (lu_.info() != Eigen::Success) throw std::runtime_error("DualSimplex: singular basis");
    etas_.clear();
    ++factor_generation_;

    Vector rhs = Vector::Zero(m_);
    for (Eigen::Index j = 0; j < n_ + m_; ++j) {
      if (status_[j] == VarStatus::Basic || x_(j) == Scalar(0)) continue;
      if (j < n_) {
        for (typename Sparse::InnerIterator it(a_, j); it; ++it) rhs(it.row()) -= it.value() * x_(j);
      } else {
        rhs(j - n_) -= x_(j);
      }
    }
    const Vector xb = ftran(std::move(rhs));
    Vector cb(m_);
    for (Eigen::Index i = 0; i < m_; ++i) {
      x_(basic_[i]) = xb(i);
      cb(i) = cost_(basic_[i]);
    }
    const Vector y = btran(std::move(cb));
    d_.head(n_) = cost_.head(n_) - a_.transpose() * y;
    d_.tail(m_) = -y;
    for (Eigen::Index i = 0; i < m_; ++i) d_(basic_[i]) = Scalar(0);
  }

 private:
  static constexpr int kMaxEtas = 80;

  /// One product-form update: the basis column at `row` was replaced, `pivot` is the
  /// entering column's entry there and `entries` its other nonzeros.
  struct Eta {
    Eigen::Index row;
    Scalar pivot;
    std::vector<std::pair<Eigen::Index, Scalar>> entries;
  };

  void place_nonbasic(Eigen::Index j) {
    const Scalar lo = lower_(j);
    const Scalar hi = upper_(j);
    bool at_upper;
    if (lo == hi) {
      at_upper = false;
    } else if (d_(j) > tol_.dual) {
      at_upper = false;
    } else if (d_(j) < -tol_.dual) {
      at_upper = true;
    } else {
      at_upper = status_[j] == VarStatus::AtUpper ? std::isfinite(hi) : !std::isfinite(lo);
    }
    const Scalar v = at_upper ? hi : lo;
    if (!std::isfinite(v))
      throw std::logic_error("DualSimplex: nonbasic column lacks the bound its reduced cost needs");
    status_[j] = at_upper ? VarStatus::AtUpper : VarStatus::AtLower;
    x_(j) = v;
  }

  /// B^-1 v.
  Vector ftran(Vector v) const {
    v = lu_.solve(v);
    for (const Eta& e : etas_) {
      const Scalar xr = v(e.row) / e.pivot;
      v(e.row) = xr;
      if (xr == Scalar(0)) continue;
      for (const auto& [i, c] : e.entries) v(i) -= c * xr;
    }
    return v;
  }

  /// B^-T u, that is the row vector u' B^-1 as a column.
  Vector btran(Vector u) const {
    for (auto e = etas_.rbegin(); e != etas_.rend(); ++e) {
      Scalar s = u(e->row);
      for (const auto& [i, c] : e->entries) s -= u(i) * c;
      u(e->row) = s / e->pivot;
    }
    return lu_.transpose().solve(u);
  }

  Vector ftran_column(Eigen::Index j) const {
    Vector v = Vector::Zero(m_);
    if (j >= n_) {
      v(j - n_) = Scalar(1);
    } else {
      for (typename Sparse::InnerIterator it(a_, j); it; ++it) v(it.row()) = it.value();
    }
    return ftran(std::move(v));
  }

  void shift_basics(Eigen::Index j, Scalar delta) {
    const Vector col = ftran_column(j);
    for (Eigen::Index i = 0; i < m_; ++i) x_(basic_[i]) -= col(i) * delta;
  }

  Scalar infeasibility(Eigen::Index j) const {
    if (x_(j) < lower_(j) - tol_.primal) return lower_(j) - x_(j);
    if (x_(j) > upper_(j) + tol_.primal) return x_(j) - upper_(j);
    return Scalar(0);
  }

  /// Dual steepest edge: largest squared infeasibility over the row's weight.
  int choose_leaving_row() const {
    int best = -1;
    Scalar best_score = 0;
    for (Eigen::Index i = 0; i < m_; ++i) {
      const Scalar inf = infeasibility(basic_[i]);
      if (inf <= Scalar(0)) continue;
      const Scalar score = inf * inf / std::max(weights_(i), Scalar(1e-12));
      if (score > best_score) {
        best_score = score;
        best = static_cast<int>(i);
      }
    }
    return best;
  }

  Scalar alpha_of(const Vector& rho, Eigen::Index j) const {
    if (j >= n_) return rho(j - n_);
    Scalar s = 0;
    for (typename Sparse::InnerIterator it(a_, j); it; ++it) s += rho(it.row()) * it.value();
    return s;
  }

  /// Harris two-pass ratio test over the pivot row.
  bool ratio_test(const Vector& rho, bool to_lower, int& entering) {
    alpha_.resize(n_ + m_);
    candidates_.clear();
    Scalar bound = kInf;
    for (Eigen::Index j = 0; j < n_ + m_; ++j) {
      if (status_[j] == VarStatus::Basic || lower_(j) == upper_(j)) continue;
      const Scalar a = alpha_of(rho, j);
      alpha_(j) = a;
      if (std::abs(a) <= tol_.pivot) continue;
      const bool at_lower = status_[j] == VarStatus::AtLower;
      // Moving j off its bound has to push the leaving variable toward its violated bound.
      const bool eligible = to_lower ? (at_lower ? a < 0 : a > 0) : (at_lower ? a > 0 : a < 0);
      if (!eligible) continue;
      candidates_.push_back(static_cast<int>(j));
      bound = std::min(bound, (std::abs(d_(j)) + tol_.dual) / std::abs(a));
    }
    if (candidates_.empty()) return false;
    Scalar best_alpha = 0;
    entering = -1;
    for (int j : candidates_) {
      const Scalar a = std::abs(alpha_(j));
      if (std::abs(d_(j)) / a <= bound && a > best_alpha) {
        best_alpha = a;
        entering = j;
      }
    }
    return entering >= 0;
  }

  void pivot(int r, int q, const Vector& col, const Vector& rho, Scalar leave_value,
             bool to_lower) {
    const Eigen::Index leaving = basic_[r];
    const Scalar alpha_q = col(r);

    const Scalar theta_d = d_(q) / alpha_q;
    for (Eigen::Index j = 0; j < n_ + m_; ++j) {
      if (status_[j] == VarStatus::Basic) continue;
      // Fixed columns were skipped in the ratio test, so their entry is computed here.
      const Scalar a = lower_(j) == upper_(j) ? alpha_of(rho, j) : alpha_(j);
      d_(j) -= theta_d * a;
    }
    d_(q) = 0;
    d_(leaving) = -theta_d;

    const Scalar theta_p = (x_(leaving) - leave_value) / alpha_q;
    for (Eigen::Index i = 0; i < m_; ++i) x_(basic_[i]) -= theta_p * col(i);
    x_(q) += theta_p;
    x_(leaving) = leave_value;

    // Steepest-edge weight update; the leaving row's weight is recomputed exactly.
    const Vector tau = ftran(rho);
    const Scalar w_r = rho.squaredNorm();
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (i == r || col(i) == Scalar(0)) continue;
      const Scalar ratio = col(i) / alpha_q;
      weights_(i) = std::max(weights_(i) - Scalar(2) * ratio * tau(i) + ratio * ratio * w_r,
                             ratio * ratio + Scalar(1e-6));
    }
    weights_(r) = std::max(w_r / (alpha_q * alpha_q), Scalar(1e-6));

    status_[leaving] = to_lower ? VarStatus::AtLower : VarStatus::AtUpper;
    basis_pos_[leaving] = -1;
    status_[q] = VarStatus::Basic;
    basis_pos_[q] = r;
    basic_[r] = q;

    Eta eta{r, alpha_q, {}};
    for (Eigen::Index i = 0; i < m_; ++i)
      if (i != r && col(i) != Scalar(0)) eta.entries.emplace_back(i, col(i));
    etas_.push_back(std::move(eta));
  }

  Sparse a_;
  Eigen::Index m_;
  Eigen::Index n_;
  Vector cost_, lower_, upper_, x_, d_, weights_, alpha_;
  mutable Eigen::SparseLU<Sparse, Eigen::COLAMDOrdering<int>> lu_;  // transpose() is non-const
  std::vector<Eta> etas_;
  std::uint64_t factor_generation_ = 0;
  std::vector<VarStatus> status_;
  std::vector<int> basis_pos_;
  std::vector<Eigen::Index> basic_;
  std::vector<int> candidates_;
  Tolerances tol_;
  std::int64_t iterations_ = 0;
};

}  // namespace evcs::lp
