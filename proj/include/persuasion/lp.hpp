#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "persuasion/geometry.hpp"

namespace persuasion {

/// Feasibility tolerance shared by the solvers and every verification path.
inline constexpr double kLpTolerance = 1e-8;

enum class Relation { le, ge, eq };
enum class LpStatus { optimal, infeasible, unbounded };

const char* status_name(LpStatus s);

/// maximize objective·x subject to rows and lower <= x <= upper.
/// Lower bounds must be finite; upper bounds may be +inf.
struct LinearProgram {
  struct Row {
    std::vector<double> coef;
    Relation rel = Relation::le;
    double rhs = 0;
  };

  explicit LinearProgram(int num_vars = 0)
      : objective(num_vars, 0.0),
        lower(num_vars, 0.0),
        upper(num_vars, std::numeric_limits<double>::infinity()) {}

  int num_vars() const { return static_cast<int>(objective.size()); }
  void add_row(std::vector<double> coef, Relation rel, double rhs) {
    rows.push_back({std::move(coef), rel, rhs});
  }

  std::vector<double> objective;
  std::vector<Row> rows;
  std::vector<double> lower;
  std::vector<double> upper;
};

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> values;
  double objective = 0;
  /// Shadow price d(objective)/d(rhs) per row; only when optimal.
  std::vector<double> duals;
};

/// Two-phase dense tableau simplex with Bland's rule. Deterministic.
LpSolution solve_lp(const LinearProgram& lp);

// --- the per-slope LP ---------------------------------------------------------

struct SlopeLpSegment {
  double p = 0;
  Point left;   // higher-xi endpoint
  Point right;  // higher-rho endpoint
};

struct SlopeLpUnique {
  double p = 0;
  Point point;
};

struct SlopeLpResult {
  bool feasible = false;
  std::vector<double> alpha;  // weight on each segment's left endpoint
  double objective = 0;       // sender utility
  double receiver = 0;        // receiver utility
};

/// Closed form for: maximize sum p(alpha xi_l + (1-alpha) xi_r) + sum p xi
/// subject to the matching receiver sum >= rho_E, alpha in [0,1]. Every
/// segment trades receiver for sender value at the same rate |s|, so one
/// common shift away from the left endpoints is optimal.
/// Throws std::invalid_argument when a segment's slope differs from s.
SlopeLpResult solve_slope_lp(const std::vector<SlopeLpSegment>& segments,
                             const std::vector<SlopeLpUnique>& uniques,
                             double rho_E, const Slope& s);

/// The same LP through solve_lp; kept as a cross-check.
SlopeLpResult solve_slope_lp_generic(
    const std::vector<SlopeLpSegment>& segments,
    const std::vector<SlopeLpUnique>& uniques, double rho_E);

// --- block-angular LPs --------------------------------------------------------

/// maximize  sum_b w_b sum_o phi_bo value_o
/// s.t.      sum_o phi_bo = 1, phi >= 0            for every block b
///           sum_b w_b sum_o phi_bo a_or >= rhs_r  for every coupling row r
///
/// Options of block b are block_begin[b] .. block_begin[b+1]-1; the sparse
/// coupling entries of option o are option_begin[o] .. option_begin[o+1]-1.
struct BlockLp {
  int num_rows = 0;
  std::vector<double> rhs;
  std::vector<double> block_weight;
  std::vector<int> block_begin{0};
  std::vector<double> option_value;
  std::vector<int> option_begin{0};
  std::vector<int> entry_row;
  std::vector<double> entry_coef;

  int num_blocks() const { return static_cast<int>(block_weight.size()); }
  int num_options() const { return static_cast<int>(option_value.size()); }

  void begin_block(double weight) { block_weight.push_back(weight); }
  void add_option(double value, const std::vector<std::pair<int, double>>& entries);
  void end_block() { block_begin.push_back(num_options()); }
};

struct BlockLpSolution {
  LpStatus status = LpStatus::infeasible;
  double objective = 0;
  std::vector<double> phi;  // per option
  int iterations = 0;
};

/// Column generation over pure choices (one option per block). The master
/// has one row per coupling constraint plus convexity, so the problem size is
/// driven by the coupling rows, not by the number of blocks.
BlockLpSolution solve_block_lp(const BlockLp& lp, int max_iterations = 20000);

/// Reference path: the same LP handed to solve_lp in one piece.
BlockLpSolution solve_block_lp_dense(const BlockLp& lp);

}  // namespace persuasion
