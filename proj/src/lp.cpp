#include "persuasion/lp.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace persuasion {

const char* status_name(LpStatus s) {
  switch (s) {
    case LpStatus::optimal:
      return "optimal";
    case LpStatus::infeasible:
      return "infeasible";
    case LpStatus::unbounded:
      return "unbounded";
  }
  return "?";
}

namespace {

constexpr double kPivotEps = 1e-9;
constexpr double kZeroSnap = 1e-14;
constexpr double kCostEps = 1e-10;

class Tableau {
 public:
  Tableau(int rows, int cols)
      : m_(rows), n_(cols), t_((rows + 1) * (cols + 1), 0.0), basis_(rows) {}

  double& at(int r, int c) { return t_[r * (n_ + 1) + c]; }
  double& rhs(int r) { return at(r, n_); }
  double& cost(int c) { return at(m_, c); }  // reduced cost row
  int& basis(int r) { return basis_[r]; }

  void pivot(int pr, int pc) {
    const double inv = 1.0 / at(pr, pc);
    double* prow = &t_[pr * (n_ + 1)];
    for (int c = 0; c <= n_; ++c) prow[c] *= inv;
    prow[pc] = 1.0;
    for (int r = 0; r <= m_; ++r) {
      if (r == pr) continue;
      double* row = &t_[r * (n_ + 1)];
      const double f = row[pc];
      if (f == 0.0) continue;
      for (int c = 0; c <= n_; ++c) {
        row[c] -= f * prow[c];
        if (std::abs(row[c]) < kZeroSnap) row[c] = 0.0;
      }
      row[pc] = 0.0;
    }
    basis_[pr] = pc;
  }

  // Sets the reduced cost row for objective c (maximization).
  void price(const std::vector<double>& c) {
    for (int j = 0; j <= n_; ++j) cost(j) = j < n_ ? c[j] : 0.0;
    for (int r = 0; r < m_; ++r) {
      const double cb = c[basis_[r]];
      if (cb == 0.0) continue;
      for (int j = 0; j <= n_; ++j) cost(j) -= cb * at(r, j);
    }
  }

  // Largest-pivot tie breaking; falls back to Bland's rule once the
  // iteration count suggests cycling. Returns false when unbounded.
  bool optimize(const std::vector<char>& allowed) {
    const long bland_after = 20L * (m_ + n_) + 100;
    for (long iter = 0;; ++iter) {
      const bool bland = iter > bland_after;
      int enter = -1;
      for (int j = 0; j < n_; ++j) {
        if (allowed[j] && cost(j) > kCostEps) {
          if (bland) {
            enter = j;
            break;
          }
          if (enter < 0 || cost(j) > cost(enter)) enter = j;
        }
      }
      if (enter < 0) return true;
      double best = std::numeric_limits<double>::infinity();
      for (int r = 0; r < m_; ++r) {
        const double a = at(r, enter);
        if (a > kPivotEps) best = std::min(best, std::max(0.0, rhs(r)) / a);
      }
      int leave = -1;
      for (int r = 0; r < m_; ++r) {
        const double a = at(r, enter);
        if (a <= kPivotEps ||
            std::max(0.0, rhs(r)) / a > best + 1e-12 * (1 + std::abs(best))) {
          continue;
        }
        if (leave < 0) {
          leave = r;
        } else if (bland ? basis_[r] < basis_[leave] : a > at(leave, enter)) {
          leave = r;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
      if (rhs(leave) < 0.0) rhs(leave) = 0.0;
    }
  }

  int rows() const { return m_; }
  int cols() const { return n_; }

 private:
  int m_, n_;
  std::vector<double> t_;
  std::vector<int> basis_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
  const int nv = lp.num_vars();
  if (static_cast<int>(lp.lower.size()) != nv ||
      static_cast<int>(lp.upper.size()) != nv) {
    throw std::invalid_argument("solve_lp: bound vectors have wrong length");
  }
  for (const auto& row : lp.rows) {
    if (static_cast<int>(row.coef.size()) != nv) {
      throw std::invalid_argument("solve_lp: row length mismatch");
    }
  }
  LpSolution sol;
  for (int j = 0; j < nv; ++j) {
    if (!std::isfinite(lp.lower[j])) {
      throw std::invalid_argument("solve_lp: lower bounds must be finite");
    }
    if (lp.upper[j] < lp.lower[j]) return sol;  // infeasible
  }

  // Shifted rows, bound rows appended.
  struct StdRow {
    std::vector<double> coef;
    Relation rel;
    double rhs;
    double flip;
  };
  std::vector<StdRow> rows;
  for (const auto& row : lp.rows) {
    double b = row.rhs;
    for (int j = 0; j < nv; ++j) b -= row.coef[j] * lp.lower[j];
    rows.push_back({row.coef, row.rel, b, 1.0});
  }
  for (int j = 0; j < nv; ++j) {
    if (std::isfinite(lp.upper[j])) {
      std::vector<double> coef(nv, 0.0);
      coef[j] = 1.0;
      rows.push_back({coef, Relation::le, lp.upper[j] - lp.lower[j], 1.0});
    }
  }
  for (auto& r : rows) {
    if (r.rhs < 0) {
      for (double& a : r.coef) a = -a;
      r.rhs = -r.rhs;
      r.flip = -1.0;
      if (r.rel == Relation::le) {
        r.rel = Relation::ge;
      } else if (r.rel == Relation::ge) {
        r.rel = Relation::le;
      }
    }
  }

  const int m = static_cast<int>(rows.size());
  int ncols = nv;
  std::vector<int> unit_col(m), surplus_col(m, -1);
  std::vector<char> is_art;
  for (int r = 0; r < m; ++r) {
    if (rows[r].rel == Relation::ge) surplus_col[r] = ncols++;
    unit_col[r] = ncols++;
  }
  is_art.assign(ncols, 0);
  for (int r = 0; r < m; ++r) {
    if (rows[r].rel != Relation::le) is_art[unit_col[r]] = 1;
  }

  Tableau t(m, ncols);
  for (int r = 0; r < m; ++r) {
    for (int j = 0; j < nv; ++j) t.at(r, j) = rows[r].coef[j];
    if (surplus_col[r] >= 0) t.at(r, surplus_col[r]) = -1.0;
    t.at(r, unit_col[r]) = 1.0;
    t.rhs(r) = rows[r].rhs;
    t.basis(r) = unit_col[r];
  }

  std::vector<char> allowed(ncols, 1);
  bool any_art = false;
  for (int j = 0; j < ncols; ++j) any_art |= is_art[j] != 0;
  if (any_art) {
    std::vector<double> c1(ncols, 0.0);
    for (int j = 0; j < ncols; ++j) {
      if (is_art[j]) c1[j] = -1.0;
    }
    t.price(c1);
    t.optimize(allowed);  // bounded by construction
    double infeas = 0, scale = 1;
    for (int r = 0; r < m; ++r) {
      if (is_art[t.basis(r)]) infeas += t.rhs(r);
      scale = std::max(scale, rows[r].rhs);
    }
    if (infeas > 1e-9 * scale) return sol;
    // Drive zero-level artificials out of the basis where possible.
    for (int r = 0; r < m; ++r) {
      if (!is_art[t.basis(r)]) continue;
      for (int j = 0; j < ncols; ++j) {
        if (!is_art[j] && std::abs(t.at(r, j)) > 1e-9) {
          t.pivot(r, j);
          break;
        }
      }
    }
    for (int j = 0; j < ncols; ++j) {
      if (is_art[j]) allowed[j] = 0;
    }
  }

  std::vector<double> c2(ncols, 0.0);
  for (int j = 0; j < nv; ++j) c2[j] = lp.objective[j];
  t.price(c2);
  if (!t.optimize(allowed)) {
    sol.status = LpStatus::unbounded;
    return sol;
  }

  sol.status = LpStatus::optimal;
  sol.values.assign(lp.lower.begin(), lp.lower.end());
  for (int r = 0; r < m; ++r) {
    const int b = t.basis(r);
    if (b < nv) sol.values[b] += std::max(0.0, t.rhs(r));
  }
  sol.objective = 0;
  for (int j = 0; j < nv; ++j) sol.objective += lp.objective[j] * sol.values[j];
  sol.duals.resize(lp.rows.size());
  for (std::size_t r = 0; r < lp.rows.size(); ++r) {
    sol.duals[r] = -t.cost(unit_col[r]) * rows[r].flip;
  }
  return sol;
}

// --- slope LP -----------------------------------------------------------------

SlopeLpResult solve_slope_lp(const std::vector<SlopeLpSegment>& segments,
                             const std::vector<SlopeLpUnique>& uniques,
                             double rho_E, const Slope& s) {
  double r0 = 0, r1 = 0, s0 = 0, drop = 0;
  for (const auto& seg : segments) {
    if (!(slope_between(seg.left, seg.right) == s) ||
        !(seg.left.xi > seg.right.xi)) {
      throw std::invalid_argument("solve_slope_lp: segment slope differs from " +
                                  s.str());
    }
    r0 += seg.p * seg.left.rho.to_double();
    r1 += seg.p * seg.right.rho.to_double();
    s0 += seg.p * seg.left.xi.to_double();
    drop += seg.p * (seg.left.xi.to_double() - seg.right.xi.to_double());
  }
  for (const auto& u : uniques) {
    r0 += u.p * u.point.rho.to_double();
    r1 += u.p * u.point.rho.to_double();
    s0 += u.p * u.point.xi.to_double();
  }
  SlopeLpResult res;
  double beta = 0;
  if (r0 < rho_E) {
    if (r1 < rho_E - 1e-9) return res;
    beta = r1 > r0 ? std::clamp((rho_E - r0) / (r1 - r0), 0.0, 1.0) : 0.0;
  }
  res.feasible = true;
  res.alpha.assign(segments.size(), 1.0 - beta);
  res.objective = s0 - beta * drop;
  res.receiver = r0 + beta * (r1 - r0);
  return res;
}

SlopeLpResult solve_slope_lp_generic(
    const std::vector<SlopeLpSegment>& segments,
    const std::vector<SlopeLpUnique>& uniques, double rho_E) {
  const int n = static_cast<int>(segments.size());
  LinearProgram lp(n);
  std::vector<double> recv(n);
  double const_r = 0, const_s = 0;
  for (int i = 0; i < n; ++i) {
    const auto& seg = segments[i];
    const double p = seg.p;
    lp.objective[i] = p * (seg.left.xi.to_double() - seg.right.xi.to_double());
    recv[i] = p * (seg.left.rho.to_double() - seg.right.rho.to_double());
    const_r += p * seg.right.rho.to_double();
    const_s += p * seg.right.xi.to_double();
    lp.upper[i] = 1.0;
  }
  for (const auto& u : uniques) {
    const_r += u.p * u.point.rho.to_double();
    const_s += u.p * u.point.xi.to_double();
  }
  lp.add_row(recv, Relation::ge, rho_E - const_r - 1e-9);
  const LpSolution sol = solve_lp(lp);
  SlopeLpResult res;
  if (sol.status != LpStatus::optimal) return res;
  res.feasible = true;
  res.alpha = sol.values;
  res.objective = sol.objective + const_s;
  res.receiver = const_r;
  for (int i = 0; i < n; ++i) res.receiver += recv[i] * sol.values[i];
  return res;
}

// --- block LP -----------------------------------------------------------------

void BlockLp::add_option(double value,
                         const std::vector<std::pair<int, double>>& entries) {
  option_value.push_back(value);
  for (const auto& [row, coef] : entries) {
    entry_row.push_back(row);
    entry_coef.push_back(coef);
  }
  option_begin.push_back(static_cast<int>(entry_row.size()));
}

namespace {

struct Column {
  std::vector<std::uint16_t> choice;  // option offset within each block
  double value = 0;
  std::vector<double> a;
};

Column make_column(const BlockLp& lp, std::vector<std::uint16_t> choice) {
  Column col;
  col.a.assign(lp.num_rows, 0.0);
  for (int b = 0; b < lp.num_blocks(); ++b) {
    const int o = lp.block_begin[b] + choice[b];
    const double w = lp.block_weight[b];
    col.value += w * lp.option_value[o];
    for (int e = lp.option_begin[o]; e < lp.option_begin[o + 1]; ++e) {
      col.a[lp.entry_row[e]] += w * lp.entry_coef[e];
    }
  }
  col.choice = std::move(choice);
  return col;
}

}  // namespace

BlockLpSolution solve_block_lp(const BlockLp& lp, int max_iterations) {
  const int R = lp.num_rows;
  const int B = lp.num_blocks();
  for (int b = 0; b < B; ++b) {
    const int count = lp.block_begin[b + 1] - lp.block_begin[b];
    if (count < 1 || count > 65535) {
      throw std::invalid_argument("solve_block_lp: bad option count");
    }
  }

  std::vector<Column> cols;
  std::set<std::vector<std::uint16_t>> seen;
  auto add = [&](std::vector<std::uint16_t> choice) {
    if (!seen.insert(choice).second) return false;
    cols.push_back(make_column(lp, std::move(choice)));
    return true;
  };

  // Pure choice maximizing the per-block score value*use_value - y·a.
  auto price = [&](const std::vector<double>& y, bool use_value,
                   double& reduced) {
    std::vector<std::uint16_t> choice(B);
    reduced = 0;
    for (int b = 0; b < B; ++b) {
      double best = -std::numeric_limits<double>::infinity();
      int arg = 0;
      for (int o = lp.block_begin[b]; o < lp.block_begin[b + 1]; ++o) {
        double score = use_value ? lp.option_value[o] : 0.0;
        for (int e = lp.option_begin[o]; e < lp.option_begin[o + 1]; ++e) {
          score -= y[lp.entry_row[e]] * lp.entry_coef[e];
        }
        if (score > best + 1e-15) {
          best = score;
          arg = o - lp.block_begin[b];
        }
      }
      choice[b] = static_cast<std::uint16_t>(arg);
      reduced += lp.block_weight[b] * best;
    }
    return choice;
  };

  {
    std::vector<double> zero(R, 0.0);
    double dummy;
    add(price(zero, true, dummy));
  }

  BlockLpSolution out;
  bool phase_one = true;
  std::vector<double> lambda;
  double rhs_scale = 1;
  for (double r : lp.rhs) rhs_scale = std::max(rhs_scale, std::abs(r));

  for (int iter = 0; iter < max_iterations; ++iter) {
    out.iterations = iter + 1;
    const int C = static_cast<int>(cols.size());
    const int nv = C + (phase_one ? R : 0);
    LinearProgram master(nv);
    for (int c = 0; c < C; ++c) master.objective[c] = phase_one ? 0.0 : cols[c].value;
    if (phase_one) {
      for (int r = 0; r < R; ++r) master.objective[C + r] = -1.0;
    }
    std::vector<double> conv(nv, 0.0);
    for (int c = 0; c < C; ++c) conv[c] = 1.0;
    master.add_row(conv, Relation::eq, 1.0);
    for (int r = 0; r < R; ++r) {
      std::vector<double> row(nv, 0.0);
      for (int c = 0; c < C; ++c) row[c] = cols[c].a[r];
      if (phase_one) row[C + r] = 1.0;
      master.add_row(std::move(row), Relation::ge, lp.rhs[r]);
    }
    const LpSolution ms = solve_lp(master);
    if (ms.status != LpStatus::optimal) {
      throw std::runtime_error("solve_block_lp: master LP not optimal");
    }
    lambda.assign(ms.values.begin(), ms.values.begin() + C);

    if (phase_one && ms.objective >= -1e-10 * rhs_scale) {
      phase_one = false;
      continue;
    }
    const double mu = ms.duals[0];
    std::vector<double> y(ms.duals.begin() + 1, ms.duals.end());
    double reduced;
    auto choice = price(y, !phase_one, reduced);
    reduced -= mu;
    if (reduced <= 1e-10 || !add(std::move(choice))) {
      if (phase_one) return out;  // infeasible
      out.status = LpStatus::optimal;
      out.objective = ms.objective;
      break;
    }

    // Keep the master small: drop unused columns once it grows.
    if (static_cast<int>(cols.size()) > 4 * (R + 1) + 64) {
      std::vector<Column> kept;
      for (int c = 0; c < C; ++c) {
        if (lambda[c] > 0 || c >= C - 8) kept.push_back(std::move(cols[c]));
      }
      kept.push_back(std::move(cols.back()));
      cols = std::move(kept);
      seen.clear();
      for (const auto& col : cols) seen.insert(col.choice);
    }
  }
  if (out.status != LpStatus::optimal) {
    throw std::runtime_error("solve_block_lp: iteration limit reached");
  }

  out.phi.assign(lp.num_options(), 0.0);
  for (std::size_t c = 0; c < lambda.size(); ++c) {
    if (lambda[c] <= 0) continue;
    for (int b = 0; b < B; ++b) {
      out.phi[lp.block_begin[b] + cols[c].choice[b]] += lambda[c];
    }
  }
  return out;
}

BlockLpSolution solve_block_lp_dense(const BlockLp& lp) {
  const int O = lp.num_options();
  LinearProgram dense(O);
  for (int b = 0; b < lp.num_blocks(); ++b) {
    std::vector<double> row(O, 0.0);
    for (int o = lp.block_begin[b]; o < lp.block_begin[b + 1]; ++o) {
      dense.objective[o] = lp.block_weight[b] * lp.option_value[o];
      row[o] = 1.0;
    }
    dense.add_row(std::move(row), Relation::eq, 1.0);
  }
  std::vector<std::vector<double>> coupling(lp.num_rows,
                                            std::vector<double>(O, 0.0));
  for (int b = 0; b < lp.num_blocks(); ++b) {
    for (int o = lp.block_begin[b]; o < lp.block_begin[b + 1]; ++o) {
      for (int e = lp.option_begin[o]; e < lp.option_begin[o + 1]; ++e) {
        coupling[lp.entry_row[e]][o] += lp.block_weight[b] * lp.entry_coef[e];
      }
    }
  }
  for (int r = 0; r < lp.num_rows; ++r) {
    dense.add_row(std::move(coupling[r]), Relation::ge, lp.rhs[r]);
  }
  const LpSolution s = solve_lp(dense);
  BlockLpSolution out;
  out.status = s.status;
  if (s.status == LpStatus::optimal) {
    out.objective = s.objective;
    out.phi = s.values;
  }
  return out;
}

}  // namespace persuasion
