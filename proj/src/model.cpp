#include "lrcvar/model.hpp"

#include "lrcvar/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lrcvar {
namespace {

bool same_value(double a, double b) {
    return a == b || (std::isnan(a) && std::isnan(b));
}

std::string pair_label(const MdpInstance& m, std::size_t k) {
    const std::size_t i = m.pair_state(k);
    return m.states()[i] + "," + m.actions(i)[m.pair_action(k)];
}

} // namespace

MdpInstance::MdpInstance(std::string name, std::vector<std::string> states,
                         std::vector<std::vector<std::string>> actions, std::vector<double> kernel,
                         RewardMode mode, std::vector<double> rewards)
    : name_(std::move(name)), states_(std::move(states)), actions_(std::move(actions)),
      kernel_(std::move(kernel)), mode_(mode), rewards_(std::move(rewards)) {
    if (states_.empty()) throw InputError("instance has no states");
    if (actions_.size() != states_.size()) {
        throw InputError("action sets given for " + std::to_string(actions_.size()) +
                         " states, expected " + std::to_string(states_.size()));
    }
    pair_begin_.reserve(states_.size());
    for (std::size_t i = 0; i < states_.size(); ++i) {
        pair_begin_.push_back(pair_state_.size());
        pair_state_.insert(pair_state_.end(), actions_[i].size(), i);
    }
    const std::size_t nk = pair_state_.size();
    const std::size_t ns = states_.size();
    if (kernel_.size() != nk * ns) {
        throw InputError("kernel has " + std::to_string(kernel_.size()) + " entries, expected " +
                         std::to_string(nk * ns));
    }
    const std::size_t expected = mode_ == RewardMode::state_action ? nk : nk * ns;
    if (rewards_.size() != expected) {
        throw InputError("reward table has " + std::to_string(rewards_.size()) +
                         " entries, expected " + std::to_string(expected));
    }
}

std::optional<std::size_t> MdpInstance::state_index(const std::string& state) const {
    const auto it = std::find(states_.begin(), states_.end(), state);
    if (it == states_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - states_.begin());
}

std::optional<std::size_t> MdpInstance::action_index(std::size_t state,
                                                     const std::string& action) const {
    const auto& acts = actions_.at(state);
    const auto it = std::find(acts.begin(), acts.end(), action);
    if (it == acts.end()) return std::nullopt;
    return static_cast<std::size_t>(it - acts.begin());
}

double MdpInstance::expected_reward(std::size_t pair) const {
    if (mode_ == RewardMode::state_action) return rewards_[pair];
    double sum = 0.0;
    for_each_outcome(pair, [&](std::size_t, double p, double r) { sum += p * r; });
    return sum;
}

std::pair<double, double> MdpInstance::reward_bounds() const {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n_pairs(); ++k) {
        if (mode_ == RewardMode::state_action) {
            lo = std::min(lo, rewards_[k]);
            hi = std::max(hi, rewards_[k]);
        } else {
            for_each_outcome(k, [&](std::size_t, double, double r) {
                lo = std::min(lo, r);
                hi = std::max(hi, r);
            });
        }
    }
    return {lo, hi};
}

std::uint64_t MdpInstance::n_deterministic_policies() const noexcept {
    constexpr std::uint64_t cap = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t count = 1;
    for (const auto& acts : actions_) {
        const std::uint64_t m = acts.size();
        if (m == 0) return 0;
        if (count > cap / m) return cap;
        count *= m;
    }
    return count;
}

bool operator==(const MdpInstance& a, const MdpInstance& b) {
    if (a.name_ != b.name_ || a.states_ != b.states_ || a.actions_ != b.actions_ ||
        a.mode_ != b.mode_ || a.kernel_ != b.kernel_ || a.rewards_.size() != b.rewards_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.rewards_.size(); ++i) {
        if (!same_value(a.rewards_[i], b.rewards_[i])) return false;
    }
    return true;
}

StationaryPolicy StationaryPolicy::deterministic(const MdpInstance& mdp,
                                                 const DeterministicPolicy& d) {
    if (d.choice.size() != mdp.n_states()) {
        throw InputError("deterministic policy covers " + std::to_string(d.choice.size()) +
                         " states, instance has " + std::to_string(mdp.n_states()));
    }
    std::vector<std::vector<double>> rule(mdp.n_states());
    for (std::size_t i = 0; i < mdp.n_states(); ++i) {
        if (d.choice[i] >= mdp.n_actions(i)) {
            throw InputError("action index " + std::to_string(d.choice[i]) +
                             " is not admissible in state " + mdp.states()[i]);
        }
        rule[i].assign(mdp.n_actions(i), 0.0);
        rule[i][d.choice[i]] = 1.0;
    }
    return StationaryPolicy(std::move(rule));
}

StationaryPolicy StationaryPolicy::uniform(const MdpInstance& mdp) {
    std::vector<std::vector<double>> rule(mdp.n_states());
    for (std::size_t i = 0; i < mdp.n_states(); ++i) {
        const auto m = mdp.n_actions(i);
        rule[i].assign(m, 1.0 / static_cast<double>(m));
    }
    return StationaryPolicy(std::move(rule));
}

std::vector<double> StationaryPolicy::pair_weights(const MdpInstance& mdp) const {
    if (rule_.size() != mdp.n_states()) {
        throw InputError("policy covers " + std::to_string(rule_.size()) +
                         " states, instance has " + std::to_string(mdp.n_states()));
    }
    std::vector<double> w(mdp.n_pairs());
    for (std::size_t i = 0; i < mdp.n_states(); ++i) {
        if (rule_[i].size() != mdp.n_actions(i)) {
            throw InputError("policy row for state " + mdp.states()[i] + " has " +
                             std::to_string(rule_[i].size()) + " actions, expected " +
                             std::to_string(mdp.n_actions(i)));
        }
        std::copy(rule_[i].begin(), rule_[i].end(), w.begin() + mdp.pair_begin(i));
    }
    return w;
}

TimeDependentPolicy::TimeDependentPolicy(std::size_t horizon, RuleFn rule, std::string description)
    : horizon_(horizon), rule_(std::move(rule)), description_(std::move(description)) {}

TimeDependentPolicy::TimeDependentPolicy(std::vector<StationaryPolicy> rules,
                                         std::string description)
    : horizon_(rules.size()), description_(std::move(description)) {
    rule_ = [rules = std::move(rules)](std::size_t t) { return rules[t]; };
}

StationaryPolicy TimeDependentPolicy::rule(std::size_t t) const {
    if (t >= horizon_) {
        throw InputError("time " + std::to_string(t) + " exceeds policy horizon " +
                         std::to_string(horizon_));
    }
    return rule_(t);
}

std::string ValidationReport::to_string() const {
    std::ostringstream out;
    for (const auto& v : violations) {
        out << v.location << ": " << v.rule << " (magnitude " << v.magnitude << ")\n";
    }
    return out.str();
}

ValidationReport validate(const MdpInstance& mdp) {
    ValidationReport report;
    for (std::size_t i = 0; i < mdp.n_states(); ++i) {
        if (mdp.n_actions(i) == 0) {
            report.violations.push_back({"state " + mdp.states()[i], "empty action set", 0.0});
        }
    }
    const std::size_t ns = mdp.n_states();
    for (std::size_t k = 0; k < mdp.n_pairs(); ++k) {
        const std::string where = "P(.|" + pair_label(mdp, k) + ")";
        double sum = 0.0;
        for (std::size_t j = 0; j < ns; ++j) {
            const double p = mdp.transition(k, j);
            if (!std::isfinite(p)) {
                report.violations.push_back({where, "non-finite probability", 0.0});
            } else if (p < 0.0) {
                report.violations.push_back({where, "negative probability", -p});
            }
            sum += p;
        }
        if (std::isfinite(sum) && std::abs(sum - 1.0) > kProbabilityTolerance) {
            report.violations.push_back({where, "probabilities do not sum to 1", std::abs(sum - 1.0)});
        }
        if (mdp.reward_mode() == RewardMode::state_action) {
            if (!std::isfinite(mdp.reward(k, 0))) {
                report.violations.push_back({"r(" + pair_label(mdp, k) + ")", "non-finite reward", 0.0});
            }
        } else {
            for (std::size_t j = 0; j < ns; ++j) {
                // entries of impossible transitions are never used
                if (mdp.transition(k, j) > 0.0 && !std::isfinite(mdp.reward(k, j))) {
                    report.violations.push_back({"r(" + pair_label(mdp, k) + "," + mdp.states()[j] + ")",
                                                 "missing or non-finite reward for a possible transition",
                                                 mdp.transition(k, j)});
                }
            }
        }
    }
    return report;
}

ValidationReport validate(const MdpInstance& mdp, const StationaryPolicy& policy) {
    ValidationReport report;
    if (policy.n_states() != mdp.n_states()) {
        report.violations.push_back({"policy", "wrong number of states",
                                     std::abs(static_cast<double>(policy.n_states()) -
                                              static_cast<double>(mdp.n_states()))});
        return report;
    }
    for (std::size_t i = 0; i < mdp.n_states(); ++i) {
        const auto& row = policy.at_state(i);
        const std::string where = "d(.|" + mdp.states()[i] + ")";
        if (row.size() != mdp.n_actions(i)) {
            report.violations.push_back({where, "wrong number of actions", 0.0});
            continue;
        }
        double sum = 0.0;
        for (double p : row) {
            if (!(p >= 0.0)) report.violations.push_back({where, "negative probability", -p});
            sum += p;
        }
        if (std::abs(sum - 1.0) > kProbabilityTolerance) {
            report.violations.push_back({where, "probabilities do not sum to 1", std::abs(sum - 1.0)});
        }
    }
    return report;
}

double occupation_residual(const MdpInstance& mdp, const OccupationMeasure& x) {
    const std::size_t ns = mdp.n_states();
    std::vector<double> balance(ns, 0.0);
    double total = 0.0;
    for (std::size_t k = 0; k < mdp.n_pairs(); ++k) {
        balance[mdp.pair_state(k)] += x[k];
        for (std::size_t j = 0; j < ns; ++j) balance[j] -= mdp.transition(k, j) * x[k];
        total += x[k];
    }
    double worst = std::abs(total - 1.0);
    for (double b : balance) worst = std::max(worst, std::abs(b));
    return worst;
}

ValidationReport validate(const MdpInstance& mdp, const OccupationMeasure& x, double tol) {
    ValidationReport report;
    if (x.size() != mdp.n_pairs()) {
        report.violations.push_back({"x", "wrong number of state-action entries", 0.0});
        return report;
    }
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (x[k] < -tol) report.violations.push_back({"x(" + pair_label(mdp, k) + ")", "negative", -x[k]});
    }
    const std::size_t ns = mdp.n_states();
    std::vector<double> balance(ns, 0.0);
    double total = 0.0;
    for (std::size_t k = 0; k < mdp.n_pairs(); ++k) {
        balance[mdp.pair_state(k)] += x[k];
        for (std::size_t j = 0; j < ns; ++j) balance[j] -= mdp.transition(k, j) * x[k];
        total += x[k];
    }
    for (std::size_t j = 0; j < ns; ++j) {
        if (std::abs(balance[j]) > tol) {
            report.violations.push_back({"balance " + mdp.states()[j], "flow balance violated",
                                         std::abs(balance[j])});
        }
    }
    if (std::abs(total - 1.0) > tol) {
        report.violations.push_back({"sum x", "normalization violated", std::abs(total - 1.0)});
    }
    return report;
}

StationaryPolicy extract_policy(const MdpInstance& mdp, const OccupationMeasure& x) {
    constexpr double zero_marginal = 1e-12;
    if (x.size() != mdp.n_pairs()) throw InputError("occupation measure has the wrong size");
    std::vector<std::vector<double>> rule(mdp.n_states());
    for (std::size_t i = 0; i < mdp.n_states(); ++i) {
        const std::size_t m = mdp.n_actions(i);
        const std::size_t b = mdp.pair_begin(i);
        double marginal = 0.0;
        for (std::size_t a = 0; a < m; ++a) marginal += std::max(x[b + a], 0.0);
        rule[i].assign(m, 0.0);
        if (marginal > zero_marginal) {
            for (std::size_t a = 0; a < m; ++a) rule[i][a] = std::max(x[b + a], 0.0) / marginal;
        } else if (m > 0) {
            rule[i][0] = 1.0;
        }
    }
    return StationaryPolicy(std::move(rule));
}

std::size_t n_randomizations(const StationaryPolicy& d, double tol) {
    std::size_t n = 0;
    for (const auto& row : d.rule()) {
        const auto support = static_cast<std::size_t>(
            std::count_if(row.begin(), row.end(), [tol](double p) { return p > tol; }));
        if (support > 1) n += support - 1;
    }
    return n;
}

void for_each_deterministic_policy(const MdpInstance& mdp,
                                   const std::function<bool(const DeterministicPolicy&)>& f) {
    for (std::size_t i = 0; i < mdp.n_states(); ++i) {
        if (mdp.n_actions(i) == 0) return;
    }
    DeterministicPolicy d{std::vector<std::size_t>(mdp.n_states(), 0)};
    while (true) {
        if (!f(d)) return;
        // odometer with the last state varying fastest
        std::size_t i = mdp.n_states();
        while (i > 0) {
            --i;
            if (++d.choice[i] < mdp.n_actions(i)) break;
            d.choice[i] = 0;
            if (i == 0) return;
        }
    }
}

} // namespace lrcvar
