#include "lrcvar/chains.hpp"

#include "lrcvar/errors.hpp"
#include "lrcvar/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

namespace lrcvar {
namespace {

// Tarjan's algorithm; returns the component id of each vertex.
class Tarjan {
  public:
    explicit Tarjan(const std::vector<std::vector<std::size_t>>& adj)
        : adj_(adj), index_(adj.size(), npos), low_(adj.size(), 0), on_stack_(adj.size(), false),
          comp_(adj.size(), npos) {
        for (std::size_t v = 0; v < adj.size(); ++v) {
            if (index_[v] == npos) visit(v);
        }
    }

    const std::vector<std::size_t>& components() const { return comp_; }
    std::size_t count() const { return n_comp_; }

  private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    void visit(std::size_t v) {
        index_[v] = low_[v] = next_++;
        stack_.push_back(v);
        on_stack_[v] = true;
        for (std::size_t w : adj_[v]) {
            if (index_[w] == npos) {
                visit(w);
                low_[v] = std::min(low_[v], low_[w]);
            } else if (on_stack_[w]) {
                low_[v] = std::min(low_[v], index_[w]);
            }
        }
        if (low_[v] == index_[v]) {
            std::size_t w;
            do {
                w = stack_.back();
                stack_.pop_back();
                on_stack_[w] = false;
                comp_[w] = n_comp_;
            } while (w != v);
            ++n_comp_;
        }
    }

    const std::vector<std::vector<std::size_t>>& adj_;
    std::vector<std::size_t> index_, low_;
    std::vector<bool> on_stack_;
    std::vector<std::size_t> comp_;
    std::vector<std::size_t> stack_;
    std::size_t next_ = 0;
    std::size_t n_comp_ = 0;
};

std::size_t class_period(const std::vector<std::vector<std::size_t>>& adj,
                         const std::vector<std::size_t>& members, const std::vector<std::size_t>& comp) {
    const std::size_t root = members.front();
    const std::size_t id = comp[root];
    std::vector<long long> level(adj.size(), -1);
    level[root] = 0;
    std::queue<std::size_t> queue;
    queue.push(root);
    long long g = 0;
    while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop();
        for (std::size_t v : adj[u]) {
            if (comp[v] != id) continue;
            if (level[v] < 0) {
                level[v] = level[u] + 1;
                queue.push(v);
            } else {
                g = std::gcd(g, std::llabs(level[u] + 1 - level[v]));
            }
        }
    }
    return static_cast<std::size_t>(g);
}

std::vector<double> solve_class(const Eigen::MatrixXd& p, const std::vector<std::size_t>& members) {
    const auto m = static_cast<Eigen::Index>(members.size());
    // (P_C^T - I) pi = 0 with the last balance row replaced by sum(pi) = 1
    Eigen::MatrixXd a(m, m);
    for (Eigen::Index r = 0; r < m; ++r) {
        for (Eigen::Index c = 0; c < m; ++c) {
            a(r, c) = p(members[c], members[r]) - (r == c ? 1.0 : 0.0);
        }
    }
    a.row(m - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
    b(m - 1) = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) throw SolverError("singular stationarity system for a recurrent class");
    Eigen::VectorXd pi = lu.solve(b);
    // one refinement step
    pi += lu.solve(b - a * pi);
    std::vector<double> out(p.rows(), 0.0);
    for (Eigen::Index r = 0; r < m; ++r) out[members[r]] = std::max(pi(r), 0.0);
    return out;
}

OccupationMeasure to_occupation(const MdpInstance& mdp, const StationaryPolicy& d,
                                const std::vector<double>& pi) {
    OccupationMeasure x{std::vector<double>(mdp.n_pairs(), 0.0)};
    for (std::size_t i = 0; i < mdp.n_states(); ++i) {
        for (std::size_t a = 0; a < mdp.n_actions(i); ++a) x.values[mdp.pair(i, a)] = pi[i] * d(i, a);
    }
    return x;
}

void check_policy(const MdpInstance& mdp, const StationaryPolicy& d) {
    const auto report = validate(mdp, d);
    if (!report.ok()) throw InputError("invalid policy: " + report.to_string());
}

} // namespace

Eigen::MatrixXd transition_matrix(const MdpInstance& mdp, const StationaryPolicy& d) {
    check_policy(mdp, d);
    const auto ns = static_cast<Eigen::Index>(mdp.n_states());
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(ns, ns);
    for (std::size_t i = 0; i < mdp.n_states(); ++i) {
        for (std::size_t a = 0; a < mdp.n_actions(i); ++a) {
            const double w = d(i, a);
            if (w == 0.0) continue;
            const auto row = mdp.kernel_row(mdp.pair(i, a));
            for (std::size_t j = 0; j < row.size(); ++j) p(i, j) += w * row[j];
        }
    }
    return p;
}

ChainClassification classify_chain(const Eigen::MatrixXd& p) {
    const auto n = static_cast<std::size_t>(p.rows());
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (p(i, j) > 0.0) adj[i].push_back(j);
        }
    }
    const Tarjan scc(adj);
    const auto& comp = scc.components();
    std::vector<bool> closed(scc.count(), true);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j : adj[i]) {
            if (comp[j] != comp[i]) closed[comp[i]] = false;
        }
    }
    // order classes by their smallest state
    std::vector<std::vector<std::size_t>> members(scc.count());
    for (std::size_t i = 0; i < n; ++i) members[comp[i]].push_back(i);
    std::sort(members.begin(), members.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });

    ChainClassification out;
    for (const auto& group : members) {
        if (closed[comp[group.front()]]) {
            const std::size_t period = class_period(adj, group, comp);
            out.recurrent_classes.push_back(group);
            out.period.push_back(period);
            out.aperiodic.push_back(period == 1);
        } else {
            out.transient_states.insert(out.transient_states.end(), group.begin(), group.end());
        }
    }
    std::sort(out.transient_states.begin(), out.transient_states.end());
    return out;
}

ChainClassification classify_chain(const MdpInstance& mdp, const StationaryPolicy& d) {
    return classify_chain(transition_matrix(mdp, d));
}

std::vector<OccupationMeasure> class_stationary_distributions(const MdpInstance& mdp,
                                                              const StationaryPolicy& d) {
    const Eigen::MatrixXd p = transition_matrix(mdp, d);
    const auto cls = classify_chain(p);
    std::vector<OccupationMeasure> out;
    for (const auto& members : cls.recurrent_classes) {
        out.push_back(to_occupation(mdp, d, solve_class(p, members)));
    }
    return out;
}

OccupationMeasure stationary_distribution(const MdpInstance& mdp, const StationaryPolicy& d) {
    const Eigen::MatrixXd p = transition_matrix(mdp, d);
    const auto cls = classify_chain(p);
    if (!cls.unichain()) {
        throw ChainError("policy induces " + std::to_string(cls.recurrent_classes.size()) +
                         " recurrent classes; the stationary distribution is not unique");
    }
    return to_occupation(mdp, d, solve_class(p, cls.recurrent_classes.front()));
}

ForwardEvolution::ForwardEvolution(const MdpInstance& mdp, MarkovPolicy policy, std::size_t s0)
    : mdp_(&mdp), policy_(std::move(policy)), state_mass_(mdp.n_states(), 0.0),
      pair_mass_(mdp.n_pairs(), 0.0) {
    if (s0 >= mdp.n_states()) throw InputError("initial state index out of range");
    state_mass_[s0] = 1.0;
    spread();
}

void ForwardEvolution::spread() {
    const StationaryPolicy rule = std::holds_alternative<StationaryPolicy>(policy_)
                                      ? std::get<StationaryPolicy>(policy_)
                                      : std::get<TimeDependentPolicy>(policy_).rule(t_);
    if (rule.n_states() != mdp_->n_states()) throw InputError("policy has the wrong number of states");
    for (std::size_t i = 0; i < mdp_->n_states(); ++i) {
        const auto& row = rule.at_state(i);
        if (row.size() != mdp_->n_actions(i)) throw InputError("policy row has the wrong number of actions");
        for (std::size_t a = 0; a < row.size(); ++a) pair_mass_[mdp_->pair(i, a)] = state_mass_[i] * row[a];
    }
}

void ForwardEvolution::advance() {
    std::fill(state_mass_.begin(), state_mass_.end(), 0.0);
    for (std::size_t k = 0; k < mdp_->n_pairs(); ++k) {
        if (pair_mass_[k] != 0.0) kernels::axpy(pair_mass_[k], mdp_->kernel_row(k), state_mass_);
    }
    ++t_;
    spread();
}

std::vector<double> t_step_distribution(const MdpInstance& mdp, const MarkovPolicy& policy,
                                        std::size_t s0, std::size_t t) {
    if (const auto* td = std::get_if<TimeDependentPolicy>(&policy); td != nullptr && t >= td->horizon()) {
        throw InputError("time " + std::to_string(t) + " exceeds policy horizon " +
                         std::to_string(td->horizon()));
    }
    ForwardEvolution evo(mdp, policy, s0);
    while (evo.time() < t) evo.advance();
    return evo.pair_mass();
}

AssumptionReport check_assumption(const MdpInstance& mdp, std::uint64_t cap) {
    const std::uint64_t count = mdp.n_deterministic_policies();
    if (count > cap) {
        throw InputError("instance has " + std::to_string(count) +
                         " deterministic policies, above the cap of " + std::to_string(cap));
    }
    AssumptionReport report;
    for_each_deterministic_policy(mdp, [&](const DeterministicPolicy& d) {
        ++report.policies_checked;
        auto cls = classify_chain(mdp, StationaryPolicy::deterministic(mdp, d));
        if (!cls.unichain_aperiodic()) report.violators.push_back({d, std::move(cls)});
        return true;
    });
    return report;
}

VertexSet polytope_vertices(const MdpInstance& mdp, std::uint64_t cap) {
    constexpr double dedup = 1e-8;
    const std::uint64_t count = mdp.n_deterministic_policies();
    if (count > cap) {
        throw InputError("instance has " + std::to_string(count) +
                         " deterministic policies, above the cap of " + std::to_string(cap));
    }
    VertexSet set;
    const auto is_new = [&](const OccupationMeasure& x) {
        for (const auto& v : set.vertices) {
            bool same = true;
            for (std::size_t k = 0; k < x.size() && same; ++k) {
                same = std::abs(v.x[k] - x[k]) <= dedup;
            }
            if (same) return false;
        }
        return true;
    };
    for_each_deterministic_policy(mdp, [&](const DeterministicPolicy& d) {
        ++set.policies_examined;
        auto points = class_stationary_distributions(mdp, StationaryPolicy::deterministic(mdp, d));
        for (std::size_t c = 0; c < points.size(); ++c) {
            if (is_new(points[c])) set.vertices.push_back({std::move(points[c]), d, c});
        }
        return true;
    });
    return set;
}

} // namespace lrcvar
