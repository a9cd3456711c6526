#include "lrcvar/lp.hpp"

#include "lrcvar/errors.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace lrcvar {

std::size_t LinearProgram::add_variable(std::string name, double lower, double upper) {
    for (const auto& v : vars_) {
        if (v.name == name) throw InputError("duplicate variable name " + name);
    }
    if (lower > upper) throw InputError("variable " + name + " has lower bound above upper bound");
    vars_.push_back({std::move(name), lower, upper});
    obj_.push_back(0.0);
    return vars_.size() - 1;
}

std::size_t LinearProgram::add_constraint(std::string name, std::vector<LpTerm> terms,
                                          Relation relation, double rhs) {
    for (const auto& t : terms) {
        if (t.var >= vars_.size()) throw InputError("constraint " + name + " references an undeclared variable");
    }
    cons_.push_back({std::move(name), std::move(terms), relation, rhs});
    return cons_.size() - 1;
}

void LinearProgram::set_objective(std::size_t var, double coef) {
    if (var >= obj_.size()) throw InputError("objective references an undeclared variable");
    obj_[var] = coef;
}

std::size_t LinearProgram::variable(const std::string& name) const {
    for (std::size_t v = 0; v < vars_.size(); ++v) {
        if (vars_[v].name == name) return v;
    }
    throw InputError("no LP variable named '" + name + "'");
}

double LinearProgram::evaluate(const std::vector<double>& values) const {
    double z = offset_;
    for (std::size_t v = 0; v < obj_.size(); ++v) z += obj_[v] * values.at(v);
    return z;
}

double LinearProgram::max_violation(const std::vector<double>& values) const {
    double worst = 0.0;
    for (std::size_t v = 0; v < vars_.size(); ++v) {
        worst = std::max(worst, vars_[v].lower - values.at(v));
        worst = std::max(worst, values.at(v) - vars_[v].upper);
    }
    for (const auto& c : cons_) {
        double lhs = 0.0;
        for (const auto& t : c.terms) lhs += t.coef * values.at(t.var);
        const double d = lhs - c.rhs;
        switch (c.relation) {
        case Relation::le:
            worst = std::max(worst, d);
            break;
        case Relation::ge:
            worst = std::max(worst, -d);
            break;
        case Relation::eq:
            worst = std::max(worst, std::abs(d));
            break;
        }
    }
    return worst;
}

void LinearProgram::check() const {
    std::unordered_set<std::string> names;
    for (const auto& v : vars_) {
        if (v.name.empty()) throw InputError("LP variable without a name");
        if (!names.insert(v.name).second) throw InputError("duplicate LP variable name '" + v.name + "'");
        if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper || v.lower == kInfinity ||
            v.upper == -kInfinity) {
            throw InputError("invalid bounds on LP variable '" + v.name + "'");
        }
    }
    names.clear();
    for (const auto& c : cons_) {
        if (!names.insert(c.name).second) throw InputError("duplicate LP constraint name '" + c.name + "'");
        if (!std::isfinite(c.rhs)) throw InputError("non-finite right-hand side in '" + c.name + "'");
        for (const auto& t : c.terms) {
            if (t.var >= vars_.size()) throw InputError("constraint '" + c.name + "' references an undeclared variable");
            if (!std::isfinite(t.coef)) throw InputError("non-finite coefficient in '" + c.name + "'");
        }
    }
    for (double c : obj_) {
        if (!std::isfinite(c)) throw InputError("non-finite objective coefficient");
    }
}

std::string to_string(LpStatus status) {
    switch (status) {
    case LpStatus::optimal:
        return "optimal";
    case LpStatus::infeasible:
        return "infeasible";
    case LpStatus::unbounded:
        return "unbounded";
    }
    return "unknown";
}

ConstraintCounts constraint_counts(const LinearProgram& lp) {
    ConstraintCounts counts;
    counts.structural = lp.n_constraints();
    for (const auto& v : lp.variables()) {
        if (std::isfinite(v.lower)) ++counts.bound_rows;
        if (std::isfinite(v.upper)) ++counts.bound_rows;
    }
    return counts;
}

} // namespace lrcvar
