#include "lrcvar/cli.hpp"

#include "lrcvar/chains.hpp"
#include "lrcvar/errors.hpp"
#include "lrcvar/evaluate.hpp"
#include "lrcvar/instance_io.hpp"
#include "lrcvar/lp_builders.hpp"
#include "lrcvar/solver.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace lrcvar {
namespace {

using ojson = nlohmann::ordered_json;

struct RunConfig {
    std::string builtin;
    std::string instance;
    std::string gen;
    double alpha = std::numeric_limits<double>::quiet_NaN();
    double beta = 0.0;
    std::string mode = "dual";
    bool json = false;
    std::uint64_t seed = 0;
    std::size_t horizon = 1000;
    std::string policy = "optimal";
    double tol = 1e-8;
    bool waive = false;
    std::string s0;
    std::size_t window = 0;
    std::size_t replications = 0;
    std::size_t top = 0;
    std::string out_path;
    bool csv = false;
    std::size_t states = 3;
    std::size_t actions = 2;
    double lo = 0.0;
    double hi = 100.0;
    std::string lp_kind = "dual";
    double y = std::numeric_limits<double>::quiet_NaN();
};

std::string f4(double v) {
    // no "-0.0000"
    return fmt::format("{:.4f}", std::abs(v) < 5e-5 ? 0.0 : v);
}
std::string e4(double v) { return fmt::format("{:.4e}", v); }

RiskParams risk_params(const RunConfig& cfg) {
    if (std::isnan(cfg.alpha)) throw InputError("--alpha is required for this command");
    RiskParams p{cfg.alpha, cfg.beta};
    p.check();
    return p;
}

MdpInstance parse_gen_spec(const std::string& spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
    if (parts.size() != 3 && parts.size() != 5) {
        throw InputError("--gen expects seed,states,actions[,lo,hi]");
    }
    try {
        const auto seed = std::stoull(parts[0]);
        const auto ns = std::stoull(parts[1]);
        const auto na = std::stoull(parts[2]);
        const double lo = parts.size() == 5 ? std::stod(parts[3]) : 0.0;
        const double hi = parts.size() == 5 ? std::stod(parts[4]) : 100.0;
        return random_instance(seed, ns, na, lo, hi);
    } catch (const std::logic_error&) {
        throw InputError("--gen expects seed,states,actions[,lo,hi] with numeric fields, got '" + spec + "'");
    }
}

MdpInstance load_source(const RunConfig& cfg) {
    const int sources = !cfg.builtin.empty() + !cfg.instance.empty() + !cfg.gen.empty();
    if (sources != 1) throw InputError("give exactly one of --builtin, --instance or --gen");
    MdpInstance mdp = !cfg.builtin.empty()  ? builtin(cfg.builtin)
                      : !cfg.instance.empty() ? load_instance(cfg.instance)
                                              : parse_gen_spec(cfg.gen);
    const auto report = validate(mdp);
    if (!report.ok()) throw InputError("instance '" + mdp.name() + "' is invalid:\n" + report.to_string());
    return mdp;
}

SolverOptions solver_options(const RunConfig& cfg) {
    SolverOptions opt;
    if (cfg.mode == "dual") {
        opt.mode = SolveMode::dual_only;
    } else if (cfg.mode == "dual-primal") {
        opt.mode = SolveMode::dual_primal;
    } else {
        throw InputError("--mode must be dual or dual-primal");
    }
    opt.waive_assumption = cfg.waive;
    if (!(cfg.tol > 0.0)) throw InputError("--tol must be positive");
    opt.tol = cfg.tol;
    return opt;
}

std::size_t resolve_state(const MdpInstance& mdp, const std::string& s0) {
    if (s0.empty()) return 0;
    if (auto idx = mdp.state_index(s0)) return *idx;
    throw InputError("unknown initial state '" + s0 + "'");
}

ojson policy_json(const MdpInstance& mdp, const StationaryPolicy& d) {
    ojson p = ojson::object();
    for (std::size_t i = 0; i < mdp.n_states(); ++i) {
        ojson row = ojson::object();
        for (std::size_t a = 0; a < mdp.n_actions(i); ++a) row[mdp.actions(i)[a]] = d(i, a);
        p[mdp.states()[i]] = std::move(row);
    }
    return p;
}

void print_policy_table(std::ostream& out, const MdpInstance& mdp, const StationaryPolicy& d) {
    std::vector<std::string> cols;
    for (const auto& acts : mdp.action_sets()) {
        for (const auto& a : acts) {
            if (std::find(cols.begin(), cols.end(), a) == cols.end()) cols.push_back(a);
        }
    }
    std::size_t w0 = 5;
    for (const auto& s : mdp.states()) w0 = std::max(w0, s.size());
    std::size_t wc = 8;
    for (const auto& c : cols) wc = std::max(wc, c.size() + 2);
    out << fmt::format("  {:<{}}", "state", w0);
    for (const auto& c : cols) out << fmt::format("{:>{}}", c, wc);
    out << '\n';
    for (std::size_t i = 0; i < mdp.n_states(); ++i) {
        out << fmt::format("  {:<{}}", mdp.states()[i], w0);
        for (const auto& c : cols) {
            const auto a = mdp.action_index(i, c);
            out << fmt::format("{:>{}}", a ? f4(d(i, *a)) : std::string("-"), wc);
        }
        out << '\n';
    }
}

std::string policy_label(const MdpInstance& mdp, const DeterministicPolicy& d) {
    std::string s = "(";
    for (std::size_t i = 0; i < d.choice.size(); ++i) {
        if (i) s += ",";
        s += mdp.actions(i)[d.choice[i]];
    }
    return s + ")";
}

std::string join_flags(const std::vector<std::string>& flags) {
    if (flags.empty()) return "none";
    std::string s;
    for (const auto& f : flags) s += (s.empty() ? "" : ", ") + f;
    return s;
}

void write_text(const RunConfig& cfg, std::ostream& out, const std::string& text) {
    if (cfg.out_path.empty() || cfg.out_path == "-") {
        out << text;
        return;
    }
    std::ofstream file(cfg.out_path);
    if (!file) throw InputError("cannot write '" + cfg.out_path + "'");
    file << text;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
    const MdpInstance mdp = load_source(cfg);
    const RiskParams params = risk_params(cfg);
    const SaddleSolution sol = solve_cvar(mdp, params, solver_options(cfg));
    const auto& c = sol.certificates;
    if (cfg.json) {
        ojson j;
        j["value"] = sol.v_star;
        j["y_star"] = sol.y_star;
        j["cvar"] = sol.cvar_component;
        j["mean"] = sol.mean_component;
        j["policy"] = policy_json(mdp, sol.policy);
        j["n_randomizations"] = sol.n_rand;
        j["certificates"] = {{"left_gap", c.saddle_left_gap},
                             {"right_gap", c.saddle_right_gap},
                             {"oracle_gap", c.oracle_gap}};
        j["flags"] = sol.flags;
        j["instance"] = mdp.name();
        j["alpha"] = params.alpha;
        j["beta"] = params.beta;
        j["mode"] = cfg.mode;
        j["saddle_y"] = sol.saddle_y;
        j["z2"] = sol.z2;
        j["z1"] = sol.z1 ? ojson(*sol.z1) : ojson(nullptr);
        j["oracle_value"] = c.oracle_value;
        j["deterministic_best"] = c.deterministic_best ? ojson(*c.deterministic_best) : ojson(nullptr);
        ojson x = ojson::object();
        for (std::size_t k = 0; k < mdp.n_pairs(); ++k) {
            const std::size_t i = mdp.pair_state(k);
            x[mdp.states()[i]][mdp.actions(i)[mdp.pair_action(k)]] = sol.x_star[k];
        }
        j["x_star"] = std::move(x);
        out << j.dump(2) << '\n';
        return 0;
    }
    out << fmt::format("instance        {} ({} states, {} state-action pairs)\n", mdp.name(), mdp.n_states(),
                       mdp.n_pairs());
    out << fmt::format("alpha           {}\nbeta            {}\nmode            {}\n", f4(params.alpha),
                       f4(params.beta), cfg.mode);
    out << fmt::format("value v*        {}\n", f4(sol.v_star));
    out << fmt::format("y* (VaR)        {}\n", f4(sol.y_star));
    out << fmt::format("saddle y        {}\n", f4(sol.saddle_y));
    out << fmt::format("CVaR            {}\n", f4(sol.cvar_component));
    out << fmt::format("mean            {}\n", f4(sol.mean_component));
    if (sol.z1) out << fmt::format("primal z1       {}\n", f4(*sol.z1));
    out << fmt::format("randomizations  {}\n", sol.n_rand);
    out << "policy d*(a|s)\n";
    print_policy_table(out, mdp, sol.policy);
    out << "certificates\n";
    out << fmt::format("  left gap      {}\n", e4(c.saddle_left_gap));
    out << fmt::format("  right gap     {}\n", e4(c.saddle_right_gap));
    out << fmt::format("  oracle gap    {}\n", e4(c.oracle_gap));
    if (c.deterministic_best) out << fmt::format("  best deterministic  {}\n", f4(*c.deterministic_best));
    out << fmt::format("flags           {}\n", join_flags(sol.flags));
    return 0;
}

int cmd_enumerate(const RunConfig& cfg, std::ostream& out) {
    const MdpInstance mdp = load_source(cfg);
    const RiskParams params = risk_params(cfg);
    const auto en = enumerate_deterministic(mdp, params);
    const auto dual = build_dual_lp(mdp, params);
    const auto ds = solve(dual.lp, {true, cfg.tol});
    if (ds.status != LpStatus::optimal) throw SolverError("dual program is " + to_string(ds.status));
    const double v_star = ds.objective;
    const double best = en.rows[en.best].j;

    std::vector<std::size_t> order(en.rows.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return en.rows[a].j > en.rows[b].j; });
    const std::size_t shown = cfg.top == 0 ? order.size() : std::min(cfg.top, order.size());

    if (cfg.json) {
        ojson j;
        j["instance"] = mdp.name();
        j["alpha"] = params.alpha;
        j["beta"] = params.beta;
        ojson rows = ojson::array();
        for (std::size_t r = 0; r < shown; ++r) {
            const auto& row = en.rows[order[r]];
            ojson pol = ojson::object();
            for (std::size_t i = 0; i < mdp.n_states(); ++i) pol[mdp.states()[i]] = mdp.actions(i)[row.policy.choice[i]];
            rows.push_back({{"policy", pol}, {"mean", row.mean}, {"cvar", row.cvar}, {"j", row.j},
                            {"multichain", row.multichain}, {"aperiodic", row.aperiodic}});
        }
        j["rows"] = std::move(rows);
        j["best"] = best;
        j["value"] = v_star;
        j["gap"] = v_star - best;
        out << j.dump(2) << '\n';
        return 0;
    }
    std::size_t wp = 6;
    for (std::size_t r = 0; r < shown; ++r) wp = std::max(wp, policy_label(mdp, en.rows[order[r]].policy).size());
    out << fmt::format("  {:>5}  {:<{}}  {:>12}  {:>12}  {:>12}  notes\n", "rank", "policy", wp, "mean", "CVaR", "J");
    for (std::size_t r = 0; r < shown; ++r) {
        const auto& row = en.rows[order[r]];
        std::string notes;
        if (row.multichain) notes += "multichain(best class) ";
        if (!row.aperiodic) notes += "periodic";
        out << fmt::format("{} {:>5}  {:<{}}  {:>12}  {:>12}  {:>12}  {}\n", r == 0 ? '*' : ' ', r + 1,
                           policy_label(mdp, row.policy), wp, f4(row.mean), f4(row.cvar), f4(row.j), notes);
    }
    out << fmt::format("policies             {}\n", en.rows.size());
    out << fmt::format("best deterministic   {}\n", f4(best));
    out << fmt::format("v* (dual program)    {}\n", f4(v_star));
    out << fmt::format("gap                  {}\n", f4(v_star - best));
    return 0;
}

StationaryPolicy parse_policy_file(const MdpInstance& mdp, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("unknown policy '" + path + "' (expected example1, optimal, uniform or a file)");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed policy file: ") + e.what(), 0, "");
    }
    const auto& p = doc.contains("policy") ? doc["policy"] : doc;
    std::vector<std::vector<double>> rule(mdp.n_states());
    for (std::size_t i = 0; i < mdp.n_states(); ++i) {
        const auto& s = mdp.states()[i];
        if (!p.contains(s) || !p[s].is_object()) throw ParseError("policy has no row for state '" + s + "'", 0, "policy." + s);
        rule[i].assign(mdp.n_actions(i), 0.0);
        for (const auto& [a, v] : p[s].items()) {
            const auto idx = mdp.action_index(i, a);
            if (!idx) throw ParseError("action '" + a + "' is not admissible in state '" + s + "'", 0, "policy." + s + "." + a);
            if (!v.is_number()) throw ParseError("policy entries must be numbers", 0, "policy." + s + "." + a);
            rule[i][*idx] = v.get<double>();
        }
    }
    StationaryPolicy d(std::move(rule));
    const auto rep = validate(mdp, d);
    if (!rep.ok()) throw InputError("invalid policy:\n" + rep.to_string());
    return d;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
    const MdpInstance mdp = load_source(cfg);
    const RiskParams params = risk_params(cfg);
    if (cfg.horizon == 0) throw InputError("--T must be at least 1");
    const std::size_t s0 = resolve_state(mdp, cfg.s0);
    MarkovPolicy policy = StationaryPolicy::uniform(mdp);
    if (cfg.policy == "example1") {
        if (mdp.n_states() != 2 || mdp.n_actions(0) != 2 || mdp.n_actions(1) != 2) {
            throw InputError("the example1 schedule needs two states with two actions each");
        }
        policy = example1_policy(cfg.horizon);
    } else if (cfg.policy == "optimal") {
        policy = solve_cvar(mdp, params, solver_options(cfg)).policy;
    } else if (cfg.policy != "uniform") {
        policy = parse_policy_file(mdp, cfg.policy);
    }
    const CvarSequence seq = cvar_sequence(mdp, policy, s0, cfg.horizon, params.alpha);
    const std::size_t window = cfg.window == 0 ? std::max<std::size_t>(1, cfg.horizon / 2) : cfg.window;
    const LimitEstimate est = limsup_liminf_estimate(seq, window);

    std::ostringstream csv;
    write_sequence_csv(seq, csv);
    if (cfg.csv) {
        out << csv.str();
        return 0;
    }
    if (!cfg.out_path.empty()) write_text(cfg, out, csv.str());

    std::optional<double> mc_dev;
    if (cfg.replications > 0) {
        const auto mc = monte_carlo_eval(mdp, policy, s0, cfg.horizon, cfg.replications, cfg.seed, params.alpha);
        double dev = 0.0;
        for (std::size_t t = 0; t < cfg.horizon; ++t) dev = std::max(dev, std::abs(mc.cvar[t] - seq.per_step[t]));
        mc_dev = dev;
    }
    const auto [mn, mx] = std::minmax_element(seq.per_step.begin(), seq.per_step.end());
    if (cfg.json) {
        ojson j;
        j["instance"] = mdp.name();
        j["policy"] = cfg.policy;
        j["alpha"] = params.alpha;
        j["s0"] = mdp.states()[s0];
        j["T"] = cfg.horizon;
        j["window"] = window;
        j["final_cesaro"] = seq.cesaro.back();
        j["limsup_estimate"] = est.limsup;
        j["liminf_estimate"] = est.liminf;
        j["per_step_min"] = *mn;
        j["per_step_max"] = *mx;
        j["monte_carlo_max_deviation"] = mc_dev ? ojson(*mc_dev) : ojson(nullptr);
        j["csv"] = cfg.out_path.empty() ? ojson(nullptr) : ojson(cfg.out_path);
        out << j.dump(2) << '\n';
        return 0;
    }
    out << fmt::format("instance          {}\npolicy            {}\ninitial state     {}\n", mdp.name(), cfg.policy,
                       mdp.states()[s0]);
    out << fmt::format("alpha             {}\nT                 {}\nwindow            {}\n", f4(params.alpha),
                       cfg.horizon, window);
    out << fmt::format("per-step CVaR     min {}  max {}\n", f4(*mn), f4(*mx));
    out << fmt::format("final Cesaro      {}\n", f4(seq.cesaro.back()));
    out << fmt::format("limsup estimate   {}  (max of Cesaro averages over the last {} steps)\n", f4(est.limsup), window);
    out << fmt::format("liminf estimate   {}  (min of Cesaro averages over the last {} steps)\n", f4(est.liminf), window);
    if (mc_dev) out << fmt::format("Monte Carlo       {} replications, max |empirical - exact| = {}\n", cfg.replications, f4(*mc_dev));
    if (!cfg.out_path.empty()) out << fmt::format("sequence written  {}\n", cfg.out_path);
    return 0;
}

std::string describe(const ChainClassification& c) {
    std::string s;
    if (!c.unichain()) s += fmt::format("{} recurrent classes", c.recurrent_classes.size());
    for (std::size_t r = 0; r < c.period.size(); ++r) {
        if (c.period[r] != 1) s += (s.empty() ? "" : ", ") + fmt::format("class {} has period {}", r, c.period[r]);
    }
    return s;
}

int cmd_check(const RunConfig& cfg, std::ostream& out) {
    const MdpInstance mdp = load_source(cfg);
    const auto rep = check_assumption(mdp);
    const auto [lo, hi] = mdp.reward_bounds();
    if (cfg.json) {
        ojson j;
        j["instance"] = mdp.name();
        j["valid"] = true;
        j["reward_mode"] = mdp.future_state_rewards() ? "next_state" : "state_action";
        j["reward_bounds"] = {lo, hi};
        j["policies_checked"] = rep.policies_checked;
        j["assumption_holds"] = rep.ok();
        ojson v = ojson::array();
        for (const auto& viol : rep.violators) {
            ojson pol = ojson::object();
            for (std::size_t i = 0; i < mdp.n_states(); ++i) pol[mdp.states()[i]] = mdp.actions(i)[viol.policy.choice[i]];
            v.push_back({{"policy", pol},
                         {"recurrent_classes", viol.classification.recurrent_classes.size()},
                         {"periods", viol.classification.period},
                         {"reason", describe(viol.classification)}});
        }
        j["violators"] = std::move(v);
        out << j.dump(2) << '\n';
        return 0;
    }
    out << fmt::format("instance          {} ({} states, {} pairs, {} rewards)\n", mdp.name(), mdp.n_states(),
                       mdp.n_pairs(), mdp.future_state_rewards() ? "next-state" : "state-action");
    out << "validation        ok\n";
    out << fmt::format("reward bounds     [{}, {}]\n", f4(lo), f4(hi));
    out << fmt::format("policies checked  {}\n", rep.policies_checked);
    if (rep.ok()) {
        out << "assumption        every deterministic policy is unichain and aperiodic\n";
        return 0;
    }
    out << fmt::format("assumption        VIOLATED by {} deterministic policies\n", rep.violators.size());
    const std::size_t shown = std::min<std::size_t>(rep.violators.size(), 20);
    for (std::size_t v = 0; v < shown; ++v) {
        const auto& viol = rep.violators[v];
        out << fmt::format("  {}  {}\n", policy_label(mdp, viol.policy), describe(viol.classification));
    }
    if (shown < rep.violators.size()) out << fmt::format("  ... {} more\n", rep.violators.size() - shown);
    return 0;
}

int cmd_gen(const RunConfig& cfg, std::ostream& out) {
    const MdpInstance mdp = random_instance(cfg.seed, cfg.states, cfg.actions, cfg.lo, cfg.hi);
    write_text(cfg, out, serialize_instance(mdp));
    return 0;
}

int cmd_scan(const RunConfig& cfg, std::ostream& out) {
    const MdpInstance mdp = load_source(cfg);
    const RiskParams params = risk_params(cfg);
    const ScanResult scan = endpoint_scan_oracle(mdp, params);
    if (cfg.json) {
        ojson j;
        j["instance"] = mdp.name();
        ojson rows = ojson::array();
        for (const auto& r : scan.rows) rows.push_back({{"y", r.y}, {"value", r.value}});
        j["rows"] = std::move(rows);
        j["argmin_endpoint"] = scan.rows[scan.argmin].y;
        j["endpoint_min"] = scan.rows[scan.argmin].value;
        j["value"] = scan.value;
        j["y"] = scan.y;
        out << j.dump(2) << '\n';
        return 0;
    }
    out << fmt::format("  {:>12}  {:>14}\n", "y", "max_x v(x,y)");
    for (std::size_t r = 0; r < scan.rows.size(); ++r) {
        out << fmt::format("  {:>12}  {:>14}{}\n", f4(scan.rows[r].y), f4(scan.rows[r].value),
                           r == scan.argmin ? "  <- argmin" : "");
    }
    out << fmt::format("exact minimum     {} at y = {}\n", f4(scan.value), f4(scan.y));
    return 0;
}

int cmd_vertices(const RunConfig& cfg, std::ostream& out) {
    const MdpInstance mdp = load_source(cfg);
    const VertexSet vs = polytope_vertices(mdp);
    if (cfg.json) {
        ojson j;
        j["instance"] = mdp.name();
        j["policies_examined"] = vs.policies_examined;
        ojson arr = ojson::array();
        for (const auto& v : vs.vertices) {
            ojson pol = ojson::object();
            for (std::size_t i = 0; i < mdp.n_states(); ++i) pol[mdp.states()[i]] = mdp.actions(i)[v.policy.choice[i]];
            arr.push_back({{"policy", pol}, {"class", v.recurrent_class}, {"x", v.x.values}});
        }
        j["vertices"] = std::move(arr);
        out << j.dump(2) << '\n';
        return 0;
    }
    out << fmt::format("{} distinct vertices from {} deterministic policies\n", vs.vertices.size(), vs.policies_examined);
    for (std::size_t l = 0; l < vs.vertices.size(); ++l) {
        const auto& v = vs.vertices[l];
        out << fmt::format("  {:>4}  {}", l, policy_label(mdp, v.policy));
        if (v.recurrent_class) out << fmt::format(" class {}", v.recurrent_class);
        out << " :";
        for (std::size_t k = 0; k < v.x.size(); ++k) {
            if (v.x[k] > 0.0) {
                const std::size_t i = mdp.pair_state(k);
                out << fmt::format(" x({},{})={}", mdp.states()[i], mdp.actions(i)[mdp.pair_action(k)], f4(v.x[k]));
            }
        }
        out << '\n';
    }
    return 0;
}

int cmd_export_lp(const RunConfig& cfg, std::ostream& out) {
    const MdpInstance mdp = load_source(cfg);
    const RiskParams params = risk_params(cfg);
    LinearProgram lp;
    const auto need_y = [&] {
        if (std::isnan(cfg.y)) throw InputError("--y is required for the " + cfg.lp_kind + " program");
        return cfg.y;
    };
    if (cfg.lp_kind == "dual") {
        lp = build_dual_lp(mdp, params).lp;
    } else if (cfg.lp_kind == "dual-per-pair") {
        lp = build_dual_lp(mdp, params, true).lp;
    } else if (cfg.lp_kind == "primal") {
        lp = build_primal_lp(mdp, polytope_vertices(mdp), params).lp;
    } else if (cfg.lp_kind == "sparsify") {
        lp = build_sparsify_lp(mdp, need_y(), params, breakpoints(mdp).delta).lp;
    } else if (cfg.lp_kind == "average") {
        lp = build_average_lp(mdp, need_y(), params).lp;
    } else {
        throw InputError("--lp must be dual, dual-per-pair, primal, sparsify or average");
    }
    const auto counts = constraint_counts(lp);
    std::ostringstream text;
    text << fmt::format("\\ {} program for {} (alpha {}, beta {})\n", cfg.lp_kind, mdp.name(), params.alpha, params.beta);
    text << fmt::format("\\ structural rows {}, rows including finite bounds {}\n", counts.structural, counts.total());
    write_lp_format(lp, text);
    write_text(cfg, out, text.str());
    return 0;
}

void add_source(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--builtin", cfg.builtin, "builtin instance: example1, example2, endowment");
    cmd->add_option("--instance", cfg.instance, "instance file");
    cmd->add_option("--gen", cfg.gen, "random instance: seed,states,actions[,lo,hi]");
}

void add_risk(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--alpha", cfg.alpha, "probability level in [0,1)");
    cmd->add_option("--beta", cfg.beta, "weight of the mean (default 0)");
}

void add_solver(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--mode", cfg.mode, "dual or dual-primal");
    cmd->add_option("--tol", cfg.tol, "LP feasibility tolerance");
    cmd->add_flag("--waive-assumption", cfg.waive, "solve even if some policy is multichain or periodic");
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Long-run CVaR and mean-CVaR optimization for finite MDPs", "lrcvar"};
    app.require_subcommand(1);

    auto* solve_cmd = app.add_subcommand("solve", "optimal stationary randomized policy");
    add_source(solve_cmd, cfg);
    add_risk(solve_cmd, cfg);
    add_solver(solve_cmd, cfg);
    solve_cmd->add_flag("--json", cfg.json, "structured output");

    auto* enum_cmd = app.add_subcommand("enumerate", "evaluate every deterministic policy");
    add_source(enum_cmd, cfg);
    add_risk(enum_cmd, cfg);
    enum_cmd->add_option("--top", cfg.top, "rows to print (0 = all)");
    enum_cmd->add_option("--tol", cfg.tol, "LP feasibility tolerance");
    enum_cmd->add_flag("--json", cfg.json, "structured output");

    auto* sim_cmd = app.add_subcommand("simulate", "exact per-step CVaR and Cesaro averages");
    add_source(sim_cmd, cfg);
    add_risk(sim_cmd, cfg);
    add_solver(sim_cmd, cfg);
    sim_cmd->add_option("--T", cfg.horizon, "number of steps");
    sim_cmd->add_option("--policy", cfg.policy, "example1, optimal, uniform or a policy file");
    sim_cmd->add_option("--s0", cfg.s0, "initial state (default: first state)");
    sim_cmd->add_option("--window", cfg.window, "trailing window for the estimates (default T/2)");
    sim_cmd->add_option("--replications", cfg.replications, "Monte Carlo replications (0 = skip)");
    sim_cmd->add_option("--seed", cfg.seed, "Monte Carlo seed");
    sim_cmd->add_option("--out", cfg.out_path, "write the sequence as CSV");
    sim_cmd->add_flag("--csv", cfg.csv, "print the sequence as CSV instead of the summary");
    sim_cmd->add_flag("--json", cfg.json, "structured output");

    auto* check_cmd = app.add_subcommand("check", "validate an instance and test the chain assumption");
    add_source(check_cmd, cfg);
    check_cmd->add_flag("--json", cfg.json, "structured output");

    auto* gen_cmd = app.add_subcommand("gen", "write a random instance");
    gen_cmd->add_option("--seed", cfg.seed, "generator seed");
    gen_cmd->add_option("--states", cfg.states, "number of states");
    gen_cmd->add_option("--actions", cfg.actions, "actions per state");
    gen_cmd->add_option("--lo", cfg.lo, "smallest reward");
    gen_cmd->add_option("--hi", cfg.hi, "largest reward");
    gen_cmd->add_option("--out", cfg.out_path, "output file (default stdout)");

    auto* scan_cmd = app.add_subcommand("scan", "max_x v(x,y) at every reward value");
    add_source(scan_cmd, cfg);
    add_risk(scan_cmd, cfg);
    scan_cmd->add_flag("--json", cfg.json, "structured output");

    auto* vert_cmd = app.add_subcommand("vertices", "stationary points of all deterministic policies");
    add_source(vert_cmd, cfg);
    vert_cmd->add_flag("--json", cfg.json, "structured output");

    auto* lp_cmd = app.add_subcommand("export-lp", "write a program in LP file format");
    add_source(lp_cmd, cfg);
    add_risk(lp_cmd, cfg);
    lp_cmd->add_option("--lp", cfg.lp_kind, "dual, dual-per-pair, primal, sparsify or average");
    lp_cmd->add_option("--y", cfg.y, "level for the sparsify and average programs");
    lp_cmd->add_option("--out", cfg.out_path, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (solve_cmd->parsed()) return cmd_solve(cfg, out);
        if (enum_cmd->parsed()) return cmd_enumerate(cfg, out);
        if (sim_cmd->parsed()) return cmd_simulate(cfg, out);
        if (check_cmd->parsed()) return cmd_check(cfg, out);
        if (gen_cmd->parsed()) return cmd_gen(cfg, out);
        if (scan_cmd->parsed()) return cmd_scan(cfg, out);
        if (vert_cmd->parsed()) return cmd_vertices(cfg, out);
        if (lp_cmd->parsed()) return cmd_export_lp(cfg, out);
    } catch (const ParseError& e) {
        err << "error: " << e.what();
        if (e.line() > 0) err << " [line " << e.line() << "]";
        err << '\n';
        return 2;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const SolverError& e) {
        err << "solver error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 3;
    }
    return 2;
}

} // namespace lrcvar
