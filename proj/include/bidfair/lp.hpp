#pragma once

#include "bidfair/rational.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace bidfair::lp {

enum class Sense { less_equal, equal, greater_equal };

struct Row {
  std::vector<Rational> coeffs;
  Sense sense = Sense::less_equal;
  Rational rhs;
};

/// maximize objective·x subject to rows, x >= 0. An empty objective asks for feasibility only.
struct Program {
  std::size_t variables = 0;
  std::vector<Row> rows;
  std::vector<Rational> objective;

  void add(std::vector<Rational> coeffs, Sense sense, Rational rhs) {
    if (coeffs.size() != variables) throw std::invalid_argument("lp: row width mismatch");
    rows.push_back(Row{std::move(coeffs), sense, std::move(rhs)});
  }
};

enum class Status { optimal, infeasible, unbounded };

struct Result {
  Status status = Status::infeasible;
  std::vector<Rational> x;
  Rational objective;
};

namespace detail {

/// Dense two-phase tableau simplex over exact rationals with Bland's rule.
class Tableau {
 public:
  explicit Tableau(const Program& p) : n_(p.variables) {
    const std::size_t m = p.rows.size();
    std::size_t slack = 0;
    std::size_t artificial = 0;
    std::vector<Sense> senses;
    std::vector<bool> flipped;
    for (const auto& row : p.rows) {
      Sense s = row.sense;
      bool flip = row.rhs < 0;
      if (flip && s != Sense::equal) s = s == Sense::less_equal ? Sense::greater_equal : Sense::less_equal;
      senses.push_back(s);
      flipped.push_back(flip);
      if (s != Sense::equal) ++slack;
      if (s != Sense::less_equal) ++artificial;
    }
    first_artificial_ = n_ + slack;
    cols_ = n_ + slack + artificial;
    a_.assign(m, std::vector<Rational>(cols_ + 1));
    basis_.assign(m, 0);
    std::size_t next_slack = n_;
    std::size_t next_art = first_artificial_;
    for (std::size_t r = 0; r < m; ++r) {
      const Rational sign = flipped[r] ? -1 : 1;
      for (std::size_t j = 0; j < n_; ++j) a_[r][j] = sign * p.rows[r].coeffs[j];
      a_[r][cols_] = sign * p.rows[r].rhs;
      switch (senses[r]) {
        case Sense::less_equal:
          a_[r][next_slack] = 1;
          basis_[r] = next_slack++;
          break;
        case Sense::greater_equal:
          a_[r][next_slack++] = -1;
          a_[r][next_art] = 1;
          basis_[r] = next_art++;
          break;
        case Sense::equal:
          a_[r][next_art] = 1;
          basis_[r] = next_art++;
          break;
      }
    }
  }

  Result solve(const std::vector<Rational>& objective) {
    // Phase one: maximize -(sum of artificials).
    std::vector<Rational> c(cols_);
    for (std::size_t j = first_artificial_; j < cols_; ++j) c[j] = -1;
    load_objective(c);
    iterate(cols_);
    if (-z_[cols_] < 0) return Result{Status::infeasible, {}, 0};
    drive_out_artificials();

    std::vector<Rational> c2(cols_);
    for (std::size_t j = 0; j < objective.size(); ++j) c2[j] = objective[j];
    load_objective(c2);
    if (!iterate(first_artificial_)) return Result{Status::unbounded, {}, 0};

    Result res{Status::optimal, std::vector<Rational>(n_), -z_[cols_]};
    for (std::size_t r = 0; r < a_.size(); ++r)
      if (basis_[r] < n_) res.x[basis_[r]] = a_[r][cols_];
    return res;
  }

 private:
  void load_objective(const std::vector<Rational>& c) {
    z_.assign(cols_ + 1, Rational(0));
    for (std::size_t j = 0; j < cols_; ++j) z_[j] = c[j];
    for (std::size_t r = 0; r < a_.size(); ++r) {
      const Rational& cb = c[basis_[r]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) z_[j] -= cb * a_[r][j];
    }
  }

  /// Runs pivots over columns [0, limit). Returns false on unboundedness.
  bool iterate(std::size_t limit) {
    for (;;) {
      std::size_t enter = limit;
      for (std::size_t j = 0; j < limit; ++j)
        if (z_[j] > 0) {
          enter = j;
          break;
        }
      if (enter == limit) return true;
      std::optional<std::size_t> leave;
      Rational best;
      for (std::size_t r = 0; r < a_.size(); ++r) {
        if (a_[r][enter] <= 0) continue;
        Rational ratio = a_[r][cols_] / a_[r][enter];
        if (!leave || ratio < best || (ratio == best && basis_[r] < basis_[*leave])) {
          leave = r;
          best = std::move(ratio);
        }
      }
      if (!leave) return false;
      pivot(*leave, enter);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    const Rational inv = Rational(1) / a_[r][c];
    for (auto& x : a_[r])
      if (x != 0) x *= inv;
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (i == r || a_[i][c] == 0) continue;
      const Rational f = a_[i][c];
      for (std::size_t j = 0; j <= cols_; ++j)
        if (a_[r][j] != 0) a_[i][j] -= f * a_[r][j];
    }
    if (z_[c] != 0) {
      const Rational f = z_[c];
      for (std::size_t j = 0; j <= cols_; ++j)
        if (a_[r][j] != 0) z_[j] -= f * a_[r][j];
    }
    basis_[r] = c;
  }

  void drive_out_artificials() {
    for (std::size_t r = 0; r < a_.size();) {
      if (basis_[r] < first_artificial_) {
        ++r;
        continue;
      }
      std::size_t col = first_artificial_;
      for (std::size_t j = 0; j < first_artificial_; ++j)
        if (a_[r][j] != 0) {
          col = j;
          break;
        }
      if (col < first_artificial_) {
        pivot(r, col);
        ++r;
      } else {
        a_.erase(a_.begin() + static_cast<std::ptrdiff_t>(r));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
      }
    }
  }

  std::size_t n_;
  std::size_t cols_ = 0;
  std::size_t first_artificial_ = 0;
  std::vector<std::vector<Rational>> a_;
  std::vector<std::size_t> basis_;
  std::vector<Rational> z_;
};

}  // namespace detail

inline Result solve(const Program& p) {
  for (const auto& row : p.rows)
    if (row.coeffs.size() != p.variables) throw std::invalid_argument("lp: row width mismatch");
  if (!p.objective.empty() && p.objective.size() != p.variables)
    throw std::invalid_argument("lp: objective width mismatch");
  return detail::Tableau(p).solve(p.objective);
}

/// Evaluates every row at x exactly.
inline bool satisfies(const Program& p, const std::vector<Rational>& x) {
  if (x.size() != p.variables) return false;
  for (const auto& xi : x)
    if (xi < 0) return false;
  for (const auto& row : p.rows) {
    Rational lhs = 0;
    for (std::size_t j = 0; j < p.variables; ++j) lhs += row.coeffs[j] * x[j];
    if (row.sense == Sense::less_equal && lhs > row.rhs) return false;
    if (row.sense == Sense::greater_equal && lhs < row.rhs) return false;
    if (row.sense == Sense::equal && lhs != row.rhs) return false;
  }
  return true;
}

}  // namespace bidfair::lp
