#include "lrcvar/risk.hpp"

#include "lrcvar/errors.hpp"
#include "lrcvar/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lrcvar {

DiscreteDistribution::DiscreteDistribution(std::vector<Atom> atoms) {
    constexpr double noise = 1e-9;
    double total = 0.0;
    for (auto& a : atoms) {
        if (!std::isfinite(a.value) || !std::isfinite(a.prob)) {
            throw InputError("distribution atom is not finite");
        }
        if (a.prob < -noise) throw InputError("distribution atom has negative probability");
        if (a.prob < 0.0) a.prob = 0.0;
        total += a.prob;
    }
    if (std::abs(total - 1.0) > noise) {
        throw InputError("distribution mass is " + std::to_string(total) + ", expected 1");
    }
    std::stable_sort(atoms.begin(), atoms.end(),
                     [](const Atom& a, const Atom& b) { return a.value < b.value; });
    for (const auto& a : atoms) {
        if (a.prob == 0.0) continue;
        if (!atoms_.empty() && atoms_.back().value == a.value) {
            atoms_.back().prob += a.prob;
        } else {
            atoms_.push_back(a);
        }
    }
}

double DiscreteDistribution::mean() const noexcept {
    double m = 0.0;
    for (const auto& a : atoms_) m += a.prob * a.value;
    return m;
}

double DiscreteDistribution::total_mass() const noexcept {
    double m = 0.0;
    for (const auto& a : atoms_) m += a.prob;
    return m;
}

double DiscreteDistribution::cdf(double z) const noexcept {
    double c = 0.0;
    for (const auto& a : atoms_) {
        if (a.value > z) break;
        c += a.prob;
    }
    return c;
}

void RiskParams::check() const {
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw InputError("alpha must lie in [0,1), got " + std::to_string(alpha));
    }
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        throw InputError("beta must be a finite nonnegative number, got " + std::to_string(beta));
    }
}

namespace {

void check_alpha_right(double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw InputError("alpha must lie in [0,1)");
}

void check_nonempty(const DiscreteDistribution& dist) {
    if (dist.empty()) throw InputError("empty distribution");
}

} // namespace

double var(const DiscreteDistribution& dist, double alpha, double tol) {
    check_nonempty(dist);
    check_alpha_right(alpha);
    double cum = 0.0;
    for (const auto& a : dist.atoms()) {
        cum += a.prob;
        if (cum >= alpha - tol) return a.value;
    }
    return dist.max();
}

double cvar_right(const DiscreteDistribution& dist, double alpha) {
    check_nonempty(dist);
    check_alpha_right(alpha);
    if (alpha == 0.0) return dist.mean();
    const double tail = 1.0 - alpha;
    // upper quantile: largest atom whose upper tail mass reaches 1 - alpha
    const auto& atoms = dist.atoms();
    double q = dist.min();
    double above = 0.0;
    for (auto it = atoms.rbegin(); it != atoms.rend(); ++it) {
        above += it->prob;
        if (above >= tail) {
            q = it->value;
            break;
        }
    }
    double excess = 0.0;
    for (const auto& a : atoms) {
        if (a.value > q) excess += a.prob * (a.value - q);
    }
    return q + excess / tail;
}

double cvar_left(const DiscreteDistribution& dist, double alpha) {
    check_nonempty(dist);
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InputError("left-tail alpha must lie in (0,1]");
    double remaining = alpha;
    double sum = 0.0;
    for (const auto& a : dist.atoms()) {
        if (remaining <= 0.0) break;
        const double take = std::min(a.prob, remaining);
        sum += take * a.value;
        remaining -= take;
    }
    if (remaining > 0.0) sum += remaining * dist.max();
    return sum / alpha;
}

double ru_objective(const DiscreteDistribution& dist, double y, double alpha) {
    check_alpha_right(alpha);
    double excess = 0.0;
    for (const auto& a : dist.atoms()) {
        if (a.value > y) excess += a.prob * (a.value - y);
    }
    return y + excess / (1.0 - alpha);
}

RuMinimum cvar_via_ru(const DiscreteDistribution& dist, double alpha) {
    check_nonempty(dist);
    const auto& atoms = dist.atoms();
    RuMinimum best{ru_objective(dist, atoms.front().value, alpha), atoms.front().value};
    for (const auto& a : atoms) {
        const double f = ru_objective(dist, a.value, alpha);
        // a later point must win by more than rounding to displace an earlier one
        if (f < best.value - 1e-12 * (1.0 + std::abs(best.value))) best = {f, a.value};
    }
    return best;
}

RewardOutcomes reward_outcomes(const MdpInstance& mdp) {
    RewardOutcomes out;
    for (std::size_t k = 0; k < mdp.n_pairs(); ++k) {
        if (mdp.reward_mode() == RewardMode::state_action) {
            out.pair.push_back(k);
            out.prob.push_back(1.0);
            out.reward.push_back(mdp.reward(k, 0));
        } else {
            mdp.for_each_outcome(k, [&](std::size_t, double p, double r) {
                out.pair.push_back(k);
                out.prob.push_back(p);
                out.reward.push_back(r);
            });
        }
    }
    return out;
}

DiscreteDistribution reward_distribution(const MdpInstance& mdp, std::span<const double> pair_mass) {
    if (pair_mass.size() != mdp.n_pairs()) throw InputError("pair distribution has the wrong size");
    const RewardOutcomes out = reward_outcomes(mdp);
    std::vector<Atom> atoms;
    atoms.reserve(out.size());
    for (std::size_t o = 0; o < out.size(); ++o) {
        atoms.push_back({out.reward[o], pair_mass[out.pair[o]] * out.prob[o]});
    }
    return DiscreteDistribution(std::move(atoms));
}

DiscreteDistribution reward_distribution(const MdpInstance& mdp, const OccupationMeasure& x) {
    return reward_distribution(mdp, std::span<const double>(x.values));
}

double saddle_value(const RewardOutcomes& out, const OccupationMeasure& x, double y,
                    const RiskParams& params) {
    params.check();
    std::vector<double> w(out.size());
    for (std::size_t o = 0; o < out.size(); ++o) w[o] = x[out.pair[o]] * out.prob[o];
    double mass = 0.0;
    for (double xv : x.values) mass += xv;
    const double excess = kernels::hinge_dot(w, out.reward, y);
    double value = y * mass + excess / (1.0 - params.alpha);
    if (params.beta != 0.0) value += params.beta * kernels::dot(w, out.reward);
    return value;
}

double saddle_value(const MdpInstance& mdp, const OccupationMeasure& x, double y,
                    const RiskParams& params) {
    if (x.size() != mdp.n_pairs()) throw InputError("occupation measure has the wrong size");
    return saddle_value(reward_outcomes(mdp), x, y, params);
}

Breakpoints breakpoints(const MdpInstance& mdp) {
    Breakpoints bp;
    bp.values = reward_outcomes(mdp).reward;
    std::sort(bp.values.begin(), bp.values.end());
    bp.values.erase(std::unique(bp.values.begin(), bp.values.end()), bp.values.end());
    if (bp.values.empty()) throw InputError("instance has no rewards");
    bp.lower = bp.values.front();
    bp.upper = bp.values.back();
    bp.delta = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < bp.values.size(); ++i) {
        bp.delta = std::min(bp.delta, bp.values[i] - bp.values[i - 1]);
    }
    if (bp.values.size() < 2) bp.delta = 0.0;
    return bp;
}

double mean_cvar(const DiscreteDistribution& dist, const RiskParams& params) {
    return cvar_right(dist, params.alpha) + params.beta * dist.mean();
}

} // namespace lrcvar
