#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace lrcvar {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Sense { minimize, maximize };
enum class Relation { le, eq, ge };

struct LpVariable {
    std::string name;
    double lower = 0.0;
    double upper = kInfinity;
};

struct LpTerm {
    std::size_t var;
    double coef;
};

struct LpConstraint {
    std::string name;
    std::vector<LpTerm> terms;
    Relation relation = Relation::le;
    double rhs = 0.0;
};

/**
 * Backend-neutral linear program. Variables and constraints are addressed by
 * the index returned when they are added; names must be unique and are used
 * for export and diagnostics.
 */
class LinearProgram {
  public:
    std::size_t add_variable(std::string name, double lower = 0.0, double upper = kInfinity);
    std::size_t add_constraint(std::string name, std::vector<LpTerm> terms, Relation relation, double rhs);

    void set_sense(Sense sense) noexcept { sense_ = sense; }
    void set_objective(std::size_t var, double coef);
    /// Constant added to the objective (kept out of the solver, reported in values).
    void set_objective_offset(double offset) noexcept { offset_ = offset; }

    Sense sense() const noexcept { return sense_; }
    const std::vector<LpVariable>& variables() const noexcept { return vars_; }
    const std::vector<LpConstraint>& constraints() const noexcept { return cons_; }
    const std::vector<double>& objective() const noexcept { return obj_; }
    double objective_offset() const noexcept { return offset_; }
    std::size_t n_variables() const noexcept { return vars_.size(); }
    std::size_t n_constraints() const noexcept { return cons_.size(); }

    /// Index of a variable by name; throws InputError when absent.
    std::size_t variable(const std::string& name) const;

    /// Objective at a point, offset included.
    double evaluate(const std::vector<double>& values) const;
    /// Largest violation of a constraint or bound at a point.
    double max_violation(const std::vector<double>& values) const;

    /// Throws InputError on duplicate names, dangling indices, non-finite data or empty bound ranges.
    void check() const;

  private:
    Sense sense_ = Sense::minimize;
    std::vector<LpVariable> vars_;
    std::vector<LpConstraint> cons_;
    std::vector<double> obj_;
    double offset_ = 0.0;
};

enum class LpStatus { optimal, infeasible, unbounded };

std::string to_string(LpStatus status);

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    double objective = 0.0;
    std::vector<double> values;
    bool vertex = false;       ///< values form a basic feasible solution
    std::size_t iterations = 0;
    double max_violation = 0.0;
};

struct SolveOptions {
    bool require_vertex = true;
    double tol = 1e-8;
    std::size_t max_iterations = 200000;
};

/**
 * @brief Two-phase dense simplex with Bland's rule.
 *
 * The entering variable is the lowest-index column with a negative reduced
 * cost and ratio-test ties leave on the lowest basic index, so the pivot
 * sequence and the result depend only on the input. The final basis is
 * refactored with an LU solve and the point is checked against the original
 * constraints. Throws SolverError when the iteration cap is hit or the
 * refactored point is not feasible to tolerance.
 *
 * Every optimal answer is a basic solution, so vertex is always true.
 */
LpSolution solve(const LinearProgram& lp, const SolveOptions& options = {});

/// CPLEX LP file format.
void write_lp_format(const LinearProgram& lp, std::ostream& out, const std::string& title = {});
std::string to_lp_format(const LinearProgram& lp, const std::string& title = {});

struct ConstraintCounts {
    std::size_t structural = 0; ///< rows of the constraint matrix
    std::size_t bound_rows = 0; ///< finite variable bounds written as rows
    std::size_t total() const noexcept { return structural + bound_rows; }
};

ConstraintCounts constraint_counts(const LinearProgram& lp);

} // namespace lrcvar
