#include "lrcvar/lp_builders.hpp"

#include "lrcvar/errors.hpp"

#include <algorithm>
#include <cmath>

namespace lrcvar {
namespace {

std::string x_name(const MdpInstance& mdp, std::size_t k) {
    return "x_" + std::to_string(mdp.pair_state(k)) + "_" + std::to_string(mdp.pair_action(k));
}

// Per-pair expectations over the next-state reward law.
class PairMoments {
  public:
    explicit PairMoments(const MdpInstance& mdp) : out_(reward_outcomes(mdp)), n_pairs_(mdp.n_pairs()) {}

    const RewardOutcomes& outcomes() const { return out_; }

    /// E_k[(r - level)^+]
    std::vector<double> excess(double level) const {
        std::vector<double> e(n_pairs_, 0.0);
        for (std::size_t o = 0; o < out_.size(); ++o) {
            const double d = out_.reward[o] - level;
            if (d > 0.0) e[out_.pair[o]] += out_.prob[o] * d;
        }
        return e;
    }

    std::vector<double> mean() const {
        std::vector<double> m(n_pairs_, 0.0);
        for (std::size_t o = 0; o < out_.size(); ++o) m[out_.pair[o]] += out_.prob[o] * out_.reward[o];
        return m;
    }

    /// P_k(r satisfies pred)
    template <typename Pred> std::vector<double> mass(Pred pred) const {
        std::vector<double> m(n_pairs_, 0.0);
        for (std::size_t o = 0; o < out_.size(); ++o) {
            if (pred(out_.reward[o])) m[out_.pair[o]] += out_.prob[o];
        }
        return m;
    }

  private:
    RewardOutcomes out_;
    std::size_t n_pairs_;
};

// Coefficients of x in v(x, y): y + E[r - y]^+ / (1 - alpha) + beta E[r]
std::vector<double> saddle_coefficients(const PairMoments& pm, double y, const RiskParams& params) {
    const auto excess = pm.excess(y);
    const auto mean = pm.mean();
    std::vector<double> c(excess.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
        c[k] = y + excess[k] / (1.0 - params.alpha) + params.beta * mean[k];
    }
    return c;
}

void check_inputs(const MdpInstance& mdp, const RiskParams& params) {
    params.check();
    if (mdp.n_pairs() == 0) throw InputError("instance has no state-action pairs");
}

} // namespace

std::vector<std::size_t> add_occupation_polytope(LinearProgram& lp, const MdpInstance& mdp) {
    std::vector<std::size_t> x(mdp.n_pairs());
    for (std::size_t k = 0; k < mdp.n_pairs(); ++k) x[k] = lp.add_variable(x_name(mdp, k), 0.0, kInfinity);
    for (std::size_t j = 0; j < mdp.n_states(); ++j) {
        std::vector<LpTerm> terms;
        for (std::size_t k = 0; k < mdp.n_pairs(); ++k) {
            const double coef = (mdp.pair_state(k) == j ? 1.0 : 0.0) - mdp.transition(k, j);
            if (coef != 0.0) terms.push_back({x[k], coef});
        }
        lp.add_constraint("balance_" + std::to_string(j), std::move(terms), Relation::eq, 0.0);
    }
    std::vector<LpTerm> norm;
    for (std::size_t k = 0; k < mdp.n_pairs(); ++k) norm.push_back({x[k], 1.0});
    lp.add_constraint("normalize", std::move(norm), Relation::eq, 1.0);
    return x;
}

DualLp build_dual_lp(const MdpInstance& mdp, const RiskParams& params, bool per_pair_rows) {
    check_inputs(mdp, params);
    const PairMoments pm(mdp);
    DualLp out;
    out.lp.set_sense(Sense::maximize);
    out.x = add_occupation_polytope(out.lp, mdp);
    out.z2 = out.lp.add_variable("z2", -kInfinity, kInfinity);
    out.lp.set_objective(out.z2, 1.0);

    std::vector<std::string> names;
    if (per_pair_rows) {
        const auto& o = pm.outcomes();
        for (std::size_t q = 0; q < o.size(); ++q) {
            const std::size_t k = o.pair[q];
            std::string name = "tail_" + std::to_string(mdp.pair_state(k)) + "_" + std::to_string(mdp.pair_action(k));
            if (mdp.future_state_rewards()) {
                // recover j from the kernel row order
                std::size_t seen = 0;
                for (std::size_t p = 0; p < q; ++p) seen += (o.pair[p] == k);
                std::size_t j = 0;
                for (std::size_t count = 0; j < mdp.n_states(); ++j) {
                    if (mdp.transition(k, j) > 0.0 && count++ == seen) break;
                }
                name += "_" + std::to_string(j);
            }
            out.endpoints.push_back(o.reward[q]);
            names.push_back(std::move(name));
        }
    } else {
        out.endpoints = breakpoints(mdp).values;
        for (std::size_t e = 0; e < out.endpoints.size(); ++e) names.push_back("tail_" + std::to_string(e));
    }
    for (std::size_t e = 0; e < out.endpoints.size(); ++e) {
        const auto c = saddle_coefficients(pm, out.endpoints[e], params);
        std::vector<LpTerm> terms;
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (c[k] != 0.0) terms.push_back({out.x[k], c[k]});
        }
        terms.push_back({out.z2, -1.0});
        out.lp.add_constraint(names[e], std::move(terms), Relation::ge, 0.0);
    }
    return out;
}

PrimalLp build_primal_lp(const MdpInstance& mdp, const VertexSet& vertices, const RiskParams& params) {
    check_inputs(mdp, params);
    if (vertices.vertices.empty()) throw InputError("primal program needs at least one vertex");
    const PairMoments pm(mdp);
    const auto& o = pm.outcomes();
    const auto mean = pm.mean();
    const Breakpoints bp = breakpoints(mdp);

    PrimalLp out;
    out.lp.set_sense(Sense::minimize);
    out.y = out.lp.add_variable("y", bp.lower, bp.upper);
    out.z1 = out.lp.add_variable("z1", -kInfinity, kInfinity);
    out.lp.set_objective(out.z1, 1.0);
    std::vector<std::size_t> seen(mdp.n_pairs(), 0);
    for (std::size_t q = 0; q < o.size(); ++q) {
        const std::size_t k = o.pair[q];
        std::string name = "w_" + std::to_string(mdp.pair_state(k)) + "_" + std::to_string(mdp.pair_action(k));
        if (mdp.future_state_rewards()) {
            std::size_t j = 0;
            for (std::size_t count = 0; j < mdp.n_states(); ++j) {
                if (mdp.transition(k, j) > 0.0 && count++ == seen[k]) break;
            }
            ++seen[k];
            name += "_" + std::to_string(j);
        }
        out.w.push_back(out.lp.add_variable(std::move(name), 0.0, kInfinity));
    }

    const double scale = 1.0 / (1.0 - params.alpha);
    for (std::size_t l = 0; l < vertices.vertices.size(); ++l) {
        const auto& x = vertices.vertices[l].x;
        if (x.size() != mdp.n_pairs()) throw InputError("vertex has the wrong size");
        double mass = 0.0;
        double mean_part = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            mass += x[k];
            mean_part += x[k] * mean[k];
        }
        std::vector<LpTerm> terms{{out.y, mass}};
        for (std::size_t q = 0; q < o.size(); ++q) {
            const double c = x[o.pair[q]] * o.prob[q] * scale;
            if (c != 0.0) terms.push_back({out.w[q], c});
        }
        terms.push_back({out.z1, -1.0});
        out.lp.add_constraint("vertex_" + std::to_string(l), std::move(terms), Relation::le,
                              -params.beta * mean_part);
    }
    for (std::size_t q = 0; q < o.size(); ++q) {
        out.lp.add_constraint("excess_" + std::to_string(q), {{out.w[q], 1.0}, {out.y, 1.0}}, Relation::ge,
                              o.reward[q]);
    }
    return out;
}

SparsifyLp build_sparsify_lp(const MdpInstance& mdp, double y_star, const RiskParams& params, double delta) {
    check_inputs(mdp, params);
    if (!(delta >= 0.0)) throw InputError("delta must be nonnegative");
    const PairMoments pm(mdp);
    SparsifyLp out;
    out.lp.set_sense(Sense::maximize);
    out.x = add_occupation_polytope(out.lp, mdp);
    out.x0 = out.lp.add_variable("x0", 0.0, kInfinity);
    const auto c = saddle_coefficients(pm, y_star, params);
    for (std::size_t k = 0; k < c.size(); ++k) out.lp.set_objective(out.x[k], c[k]);

    // P(R <= y*) >= alpha, relaxed by the quantile tolerance used to locate y*
    const auto at_most = pm.mass([y_star](double r) { return r <= y_star; });
    // P(R <= y* - delta) + x0 = alpha; with breakpoint data this is P(R < y*)
    const double below = delta > 0.0 ? y_star - 0.5 * delta : y_star;
    const auto strictly_below = pm.mass([below, delta, y_star](double r) {
        return delta > 0.0 ? r <= below : r < y_star;
    });
    std::vector<LpTerm> hi, lo;
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (at_most[k] != 0.0) hi.push_back({out.x[k], at_most[k]});
        if (strictly_below[k] != 0.0) lo.push_back({out.x[k], strictly_below[k]});
    }
    lo.push_back({out.x0, 1.0});
    out.lp.add_constraint("quantile_upper", std::move(hi), Relation::ge, params.alpha - 1e-9);
    out.lp.add_constraint("quantile_lower", std::move(lo), Relation::eq, params.alpha);
    return out;
}

AverageLp build_average_lp(const MdpInstance& mdp, double y, const RiskParams& params) {
    check_inputs(mdp, params);
    const PairMoments pm(mdp);
    AverageLp out;
    out.lp.set_sense(Sense::maximize);
    out.x = add_occupation_polytope(out.lp, mdp);
    const auto c = saddle_coefficients(pm, y, params);
    for (std::size_t k = 0; k < c.size(); ++k) out.lp.set_objective(out.x[k], c[k]);
    return out;
}

EnvelopeLp build_envelope_lp(const MdpInstance& mdp, double lo, double hi, const RiskParams& params) {
    check_inputs(mdp, params);
    if (!(lo < hi)) throw InputError("envelope interval must satisfy lo < hi");
    const PairMoments pm(mdp);
    const double scale = 1.0 / (1.0 - params.alpha);
    // for y in [lo, hi]: (r - y)^+ = (r - y) 1{r >= hi}, given no reward lies strictly inside
    const auto upper_mass = pm.mass([hi](double r) { return r >= hi; });
    std::vector<double> upper_sum(mdp.n_pairs(), 0.0);
    {
        const auto& o = pm.outcomes();
        for (std::size_t q = 0; q < o.size(); ++q) {
            if (o.reward[q] >= hi) upper_sum[o.pair[q]] += o.prob[q] * o.reward[q];
        }
    }
    const auto mean = pm.mean();

    EnvelopeLp out;
    out.lp.set_sense(Sense::minimize);
    out.g = out.lp.add_variable("g", -kInfinity, kInfinity);
    out.y = out.lp.add_variable("y", lo, hi);
    for (std::size_t i = 0; i < mdp.n_states(); ++i) {
        out.h.push_back(out.lp.add_variable("h_" + std::to_string(i), -kInfinity, kInfinity));
    }
    out.lp.set_objective(out.g, 1.0);
    for (std::size_t k = 0; k < mdp.n_pairs(); ++k) {
        const std::size_t i = mdp.pair_state(k);
        std::vector<LpTerm> terms{{out.g, 1.0}};
        for (std::size_t j = 0; j < mdp.n_states(); ++j) {
            const double coef = (j == i ? 1.0 : 0.0) - mdp.transition(k, j);
            if (coef != 0.0) terms.push_back({out.h[j], coef});
        }
        const double ycoef = -(1.0 - upper_mass[k] * scale);
        if (ycoef != 0.0) terms.push_back({out.y, ycoef});
        out.lp.add_constraint("gain_" + x_name(mdp, k).substr(2), std::move(terms), Relation::ge,
                              upper_sum[k] * scale + params.beta * mean[k]);
    }
    return out;
}

} // namespace lrcvar
