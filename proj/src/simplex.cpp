#include "lrcvar/errors.hpp"
#include "lrcvar/kernels.hpp"
#include "lrcvar/lp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>

namespace lrcvar {
namespace {

constexpr double kCostTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kPhaseOneTol = 1e-7;
constexpr std::size_t kRefactorInterval = 32;

// How an original variable is expressed through nonnegative standard-form columns:
// x = base + sign * col (- col2 when split).
struct ColumnMap {
    std::size_t col = 0;
    std::optional<std::size_t> col2;
    double sign = 1.0;
    double base = 0.0;
};

struct StandardForm {
    Eigen::MatrixXd a; // rows x (structural + slack + artificial)
    Eigen::VectorXd b; // nonnegative
    Eigen::VectorXd cost;
    std::size_t n_real = 0; // columns before the artificials
    std::vector<std::size_t> initial_basis;
    std::vector<std::size_t> artificial_row; // original row of each artificial column
    std::vector<ColumnMap> map;
};

StandardForm standardize(const LinearProgram& lp) {
    StandardForm sf;
    std::size_t n = 0;
    std::vector<std::size_t> bound_rows; // variables needing an upper-bound row
    for (std::size_t v = 0; v < lp.n_variables(); ++v) {
        const auto& var = lp.variables()[v];
        ColumnMap m;
        if (std::isfinite(var.lower)) {
            m.col = n++;
            m.base = var.lower;
            if (std::isfinite(var.upper)) bound_rows.push_back(v);
        } else if (std::isfinite(var.upper)) {
            m.col = n++;
            m.sign = -1.0;
            m.base = var.upper;
        } else {
            m.col = n++;
            m.col2 = n++;
        }
        sf.map.push_back(m);
    }
    const std::size_t n_struct = n;
    const std::size_t m_rows = lp.n_constraints() + bound_rows.size();
    std::size_t n_slack = bound_rows.size();
    for (const auto& c : lp.constraints()) {
        if (c.relation != Relation::eq) ++n_slack;
    }
    sf.n_real = n_struct + n_slack;

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m_rows),
                                              static_cast<Eigen::Index>(sf.n_real));
    Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m_rows));
    std::vector<std::optional<std::size_t>> slack_of(m_rows);
    std::size_t next_slack = n_struct;
    Eigen::Index r = 0;
    for (const auto& c : lp.constraints()) {
        double rhs = c.rhs;
        for (const auto& t : c.terms) {
            const auto& m = sf.map[t.var];
            rhs -= t.coef * m.base;
            a(r, static_cast<Eigen::Index>(m.col)) += t.coef * m.sign;
            if (m.col2) a(r, static_cast<Eigen::Index>(*m.col2)) -= t.coef;
        }
        if (c.relation != Relation::eq) {
            a(r, static_cast<Eigen::Index>(next_slack)) = c.relation == Relation::le ? 1.0 : -1.0;
            slack_of[static_cast<std::size_t>(r)] = next_slack++;
        }
        b(r) = rhs;
        ++r;
    }
    for (std::size_t v : bound_rows) {
        const auto& var = lp.variables()[v];
        a(r, static_cast<Eigen::Index>(sf.map[v].col)) = 1.0;
        a(r, static_cast<Eigen::Index>(next_slack)) = 1.0;
        slack_of[static_cast<std::size_t>(r)] = next_slack++;
        b(r) = var.upper - var.lower;
        ++r;
    }

    // nonnegative right-hand sides; a slack with coefficient +1 can start basic
    std::vector<Eigen::Index> need_artificial;
    sf.initial_basis.assign(m_rows, 0);
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        if (b(i) < 0.0) {
            a.row(i) *= -1.0;
            b(i) = -b(i);
        }
        const auto& s = slack_of[static_cast<std::size_t>(i)];
        if (s && a(i, static_cast<Eigen::Index>(*s)) == 1.0) {
            sf.initial_basis[static_cast<std::size_t>(i)] = *s;
        } else {
            need_artificial.push_back(i);
        }
    }
    sf.a = Eigen::MatrixXd::Zero(a.rows(), static_cast<Eigen::Index>(sf.n_real + need_artificial.size()));
    sf.a.leftCols(a.cols()) = a;
    for (std::size_t q = 0; q < need_artificial.size(); ++q) {
        const auto col = sf.n_real + q;
        sf.a(need_artificial[q], static_cast<Eigen::Index>(col)) = 1.0;
        sf.initial_basis[static_cast<std::size_t>(need_artificial[q])] = col;
        sf.artificial_row.push_back(static_cast<std::size_t>(need_artificial[q]));
    }
    sf.b = b;

    sf.cost = Eigen::VectorXd::Zero(sf.a.cols());
    const double flip = lp.sense() == Sense::maximize ? -1.0 : 1.0;
    for (std::size_t v = 0; v < lp.n_variables(); ++v) {
        const double c = flip * lp.objective()[v];
        const auto& m = sf.map[v];
        sf.cost(static_cast<Eigen::Index>(m.col)) += c * m.sign;
        if (m.col2) sf.cost(static_cast<Eigen::Index>(*m.col2)) -= c;
    }
    return sf;
}

class Tableau {
  public:
    Tableau(const StandardForm& sf, std::size_t max_iterations)
        : sf_(sf), n_(static_cast<std::size_t>(sf.a.cols())), stride_(n_ + 1),
          max_iterations_(max_iterations) {
        for (Eigen::Index i = 0; i < sf.a.rows(); ++i) rows_.push_back(static_cast<std::size_t>(i));
        basis_ = sf.initial_basis;
        eligible_.assign(n_, 1);
        t_.resize(rows_.size() * stride_);
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            for (std::size_t j = 0; j < n_; ++j) at(i, j) = sf.a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            at(i, n_) = sf.b(static_cast<Eigen::Index>(i));
        }
    }

    std::size_t iterations() const { return iterations_; }
    std::size_t rows() const { return rows_.size(); }

    void set_costs(const Eigen::VectorXd& cost) {
        cost_ = cost;
        reduce_costs();
    }

    void forbid_artificials() {
        for (std::size_t j = sf_.n_real; j < n_; ++j) eligible_[j] = 0;
    }

    // false when the objective is unbounded below
    bool optimize() {
        while (true) {
            std::size_t e = n_;
            for (std::size_t j = 0; j < n_; ++j) {
                if (eligible_[j] && d_[j] < -kCostTol) {
                    e = j;
                    break;
                }
            }
            if (e == n_) return true;
            double col_max = 0.0;
            for (std::size_t i = 0; i < rows_.size(); ++i) col_max = std::max(col_max, std::abs(at(i, e)));
            const double pivot_tol = kPivotTol * std::max(1.0, col_max);
            std::size_t r = rows_.size();
            double best = 0.0;
            for (std::size_t i = 0; i < rows_.size(); ++i) {
                const double aie = at(i, e);
                if (aie <= pivot_tol) continue;
                const double ratio = std::max(at(i, n_), 0.0) / aie;
                const double slack = 1e-12 * std::max(1.0, std::abs(best));
                if (r == rows_.size() || ratio < best - slack) {
                    best = ratio;
                    r = i;
                } else if (ratio <= best + slack && basis_[i] < basis_[r]) {
                    r = i;
                }
            }
            if (r == rows_.size()) return false;
            if (++iterations_ > max_iterations_) {
                throw SolverError("simplex iteration limit reached (" + std::to_string(max_iterations_) + ")");
            }
            pivot(r, e);
            if (++since_refactor_ >= kRefactorInterval) refactor();
        }
    }

    double objective() const { return -d_[n_]; }

    // After phase one: pivot basic artificials out or drop their rows when redundant.
    void expel_artificials() {
        for (std::size_t i = 0; i < rows_.size();) {
            if (basis_[i] < sf_.n_real) {
                ++i;
                continue;
            }
            std::size_t e = n_;
            double biggest = kPivotTol;
            for (std::size_t j = 0; j < sf_.n_real; ++j) {
                if (std::abs(at(i, j)) > biggest) {
                    biggest = std::abs(at(i, j));
                    e = j;
                }
            }
            if (e < n_) {
                pivot(i, e);
                ++i;
            } else {
                drop_row(i);
            }
        }
    }

    /// Rebuilds the tableau from the original data and the current basis.
    void refactor() {
        since_refactor_ = 0;
        const auto m = static_cast<Eigen::Index>(rows_.size());
        Eigen::MatrixXd basis_matrix(m, m);
        Eigen::MatrixXd full(m, static_cast<Eigen::Index>(stride_));
        for (Eigen::Index i = 0; i < m; ++i) {
            const auto src = static_cast<Eigen::Index>(rows_[static_cast<std::size_t>(i)]);
            full.row(i).head(static_cast<Eigen::Index>(n_)) = sf_.a.row(src);
            full(i, static_cast<Eigen::Index>(n_)) = sf_.b(src);
            for (Eigen::Index k = 0; k < m; ++k) {
                basis_matrix(i, k) = sf_.a(src, static_cast<Eigen::Index>(basis_[static_cast<std::size_t>(k)]));
            }
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);
        if (!(lu.rcond() > 1e-13)) throw SolverError("simplex basis became numerically singular");
        Eigen::MatrixXd solved = lu.solve(full);
        solved += lu.solve(full - basis_matrix * solved); // one refinement step
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            for (std::size_t j = 0; j <= n_; ++j) at(i, j) = solved(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            // basic columns are unit vectors by construction
            for (std::size_t k = 0; k < rows_.size(); ++k) at(i, basis_[k]) = (i == k) ? 1.0 : 0.0;
        }
        reduce_costs();
    }

    double rhs(std::size_t i) const { return at(i, n_); }
    std::size_t basic(std::size_t i) const { return basis_[i]; }
    bool basis_has_artificial() const {
        return std::any_of(basis_.begin(), basis_.end(), [&](std::size_t b) { return b >= sf_.n_real; });
    }

  private:
    double& at(std::size_t i, std::size_t j) { return t_[i * stride_ + j]; }
    double at(std::size_t i, std::size_t j) const { return t_[i * stride_ + j]; }
    std::span<double> row(std::size_t i) { return {t_.data() + i * stride_, stride_}; }

    void reduce_costs() {
        d_.assign(stride_, 0.0);
        for (std::size_t j = 0; j < n_; ++j) d_[j] = cost_(static_cast<Eigen::Index>(j));
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const double cb = cost_(static_cast<Eigen::Index>(basis_[i]));
            if (cb != 0.0) kernels::axpy(-cb, row(i), d_);
        }
        for (std::size_t i = 0; i < rows_.size(); ++i) d_[basis_[i]] = 0.0;
    }

    void pivot(std::size_t r, std::size_t e) {
        auto pr = row(r);
        const double inv = 1.0 / pr[e];
        for (double& v : pr) v *= inv;
        pr[e] = 1.0;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (i == r) continue;
            const double f = at(i, e);
            if (f == 0.0) continue;
            kernels::axpy(-f, pr, row(i));
            at(i, e) = 0.0;
        }
        const double f = d_[e];
        if (f != 0.0) {
            kernels::axpy(-f, pr, d_);
            d_[e] = 0.0;
        }
        basis_[r] = e;
    }

    // The tableau row is zero over the real columns, so the original row owning
    // the basic artificial is a combination of the others and can go.
    void drop_row(std::size_t i) {
        const std::size_t owner = sf_.artificial_row[basis_[i] - sf_.n_real];
        const auto pos = static_cast<std::size_t>(std::find(rows_.begin(), rows_.end(), owner) - rows_.begin());
        std::swap(rows_[pos], rows_[i]);
        const std::size_t last = rows_.size() - 1;
        if (i != last) {
            std::copy(t_.begin() + static_cast<std::ptrdiff_t>(last * stride_),
                      t_.begin() + static_cast<std::ptrdiff_t>((last + 1) * stride_),
                      t_.begin() + static_cast<std::ptrdiff_t>(i * stride_));
            rows_[i] = rows_[last];
            basis_[i] = basis_[last];
        }
        rows_.pop_back();
        basis_.pop_back();
        t_.resize(rows_.size() * stride_);
    }

    const StandardForm& sf_;
    std::size_t n_;
    std::size_t stride_;
    std::size_t max_iterations_;
    std::size_t iterations_ = 0;
    std::size_t since_refactor_ = 0;
    std::vector<std::size_t> rows_;  // original rows still present, as a set
    std::vector<std::size_t> basis_; // basic column of each tableau row
    std::vector<char> eligible_;
    std::vector<double> t_;
    std::vector<double> d_; // reduced costs, last entry = -objective
    Eigen::VectorXd cost_;
};

} // namespace

LpSolution solve(const LinearProgram& lp, const SolveOptions& options) {
    lp.check();
    const StandardForm sf = standardize(lp);
    Tableau tab(sf, options.max_iterations);
    LpSolution sol;

    if (tab.basis_has_artificial()) {
        Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(sf.a.cols());
        for (Eigen::Index j = static_cast<Eigen::Index>(sf.n_real); j < sf.a.cols(); ++j) phase1(j) = 1.0;
        tab.set_costs(phase1);
        tab.optimize();
        tab.refactor();
        tab.optimize();
        const double scale = std::max(1.0, sf.b.cwiseAbs().maxCoeff());
        if (tab.objective() > kPhaseOneTol * scale) {
            sol.status = LpStatus::infeasible;
            sol.iterations = tab.iterations();
            return sol;
        }
        tab.expel_artificials();
    }
    tab.forbid_artificials();
    tab.set_costs(sf.cost);
    bool bounded = tab.optimize();
    // polish: refactor from the final basis and continue if the refactored
    // reduced costs disagree with the pivoted ones
    for (int round = 0; bounded && round < 4; ++round) {
        const std::size_t before = tab.iterations();
        tab.refactor();
        bounded = tab.optimize();
        if (tab.iterations() == before) break;
    }
    sol.iterations = tab.iterations();
    if (!bounded) {
        sol.status = LpStatus::unbounded;
        return sol;
    }

    std::vector<double> xs(static_cast<std::size_t>(sf.a.cols()), 0.0);
    for (std::size_t i = 0; i < tab.rows(); ++i) {
        double v = tab.rhs(i);
        if (v < -1e-7 * std::max(1.0, sf.b.cwiseAbs().maxCoeff())) {
            throw SolverError("refactored simplex basis is primal infeasible");
        }
        xs[tab.basic(i)] = std::max(v, 0.0);
    }
    sol.values.resize(lp.n_variables());
    for (std::size_t v = 0; v < lp.n_variables(); ++v) {
        const auto& m = sf.map[v];
        double x = m.base + m.sign * xs[m.col];
        if (m.col2) x -= xs[*m.col2];
        sol.values[v] = x;
    }
    sol.status = LpStatus::optimal;
    sol.vertex = true;
    sol.objective = lp.evaluate(sol.values);
    sol.max_violation = lp.max_violation(sol.values);

    double coef_scale = 1.0;
    for (const auto& c : lp.constraints()) {
        coef_scale = std::max(coef_scale, std::abs(c.rhs));
        for (const auto& t : c.terms) coef_scale = std::max(coef_scale, std::abs(t.coef * sol.values[t.var]));
    }
    if (!(sol.max_violation <= options.tol * coef_scale)) {
        throw SolverError("simplex solution violates constraints by " + std::to_string(sol.max_violation));
    }
    return sol;
}

} // namespace lrcvar
