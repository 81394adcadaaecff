#include "sizeclust/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sizeclust/composition.hpp"
#include "sizeclust/errors.hpp"
#include "sizeclust/information.hpp"
#include "sizeclust/io.hpp"
#include "sizeclust/relabel.hpp"

namespace sizeclust {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::size_t sz(int v) { return static_cast<std::size_t>(v); }

// ---------------------------------------------------------------------------
// config parsing helpers

void check_keys(const json& j, const std::string& section, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError("config: '" + section + "' must be an object");
    for (const auto& [key, value] : j.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            throw ConfigError("config: unknown key '" + key + "' in " + section);
    }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: bad value for '") + key + "': " + e.what());
    }
}

std::vector<double> flatten(const json& j) {
    std::vector<double> out;
    if (j.is_number()) {
        out.push_back(j.get<double>());
    } else if (j.is_array()) {
        for (const auto& e : j) {
            auto part = flatten(e);
            out.insert(out.end(), part.begin(), part.end());
        }
    } else {
        throw ConfigError("config: expected numbers or nested arrays of numbers");
    }
    return out;
}

void read_prior_values(const json& j, PriorSource& p) {
    if (j.contains("alpha")) {
        if (j["alpha"].is_number()) p.alpha = j["alpha"].get<double>();
        else p.alpha_values = flatten(j["alpha"]);
    }
    if (j.contains("beta")) {
        if (j["beta"].is_number()) p.beta = j["beta"].get<double>();
        else p.beta_values = flatten(j["beta"]);
    }
}

fs::path resolve(const fs::path& base, const fs::path& p) {
    if (p.empty() || p.is_absolute() || base.empty()) return p;
    return base / p;
}

// ---------------------------------------------------------------------------
// output helpers

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    return out;
}

void write_json(const fs::path& path, const json& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

json sampler_json(const SamplerConfig& s) {
    return {{"chains", s.chains}, {"burn_in", s.burn_in}, {"kept", s.kept}, {"seed", s.seed},
            {"rhat_threshold", s.rhat_threshold}};
}

json loss_json(const LossSpec& s) {
    return {{"mode", to_string(s.mode)}, {"eta", s.eta}, {"lambda", s.lambda}, {"delta", s.delta}, {"K", s.k}};
}

void write_posterior_files(const fs::path& dir, const SurveyData& data, const PosteriorFit& fit) {
    const auto summary = summarize_posterior(fit.samples);
    {
        auto out = open_out(dir / "posterior_summary.csv");
        out << "parameter,mean,q2.5,q97.5\n";
        for (const auto& s : summary)
            out << s.parameter << ',' << format_number(s.mean) << ',' << format_number(s.lower) << ','
                << format_number(s.upper) << '\n';
    }
    {
        auto out = open_out(dir / "diagnostics.csv");
        out << "parameter,rhat\n";
        for (const auto& r : fit.diagnostics.rhat) out << r.parameter << ',' << format_number(r.rhat) << '\n';
    }
    {
        // plot-ready draws for ternary / interval plots
        const auto& s = fit.samples;
        auto out = open_out(dir / "theta_draws.csv");
        out << "draw,chain,respondent";
        for (int c = 1; c <= s.k; ++c) out << ",theta_" << c;
        out << '\n';
        for (int t = 0; t < s.draws; ++t)
            for (int n = 0; n < s.respondents; ++n) {
                out << t + 1 << ',' << s.chain_id[sz(t)] + 1 << ',' << data.respondent_ids[sz(n)];
                for (double v : s.theta_row(t, n)) out << ',' << format_number(v);
                out << '\n';
            }
    }
}

json posterior_json(const PosteriorFit& fit) {
    json summary = json::array();
    for (const auto& s : summarize_posterior(fit.samples))
        summary.push_back({{"parameter", s.parameter}, {"mean", s.mean}, {"q2.5", s.lower}, {"q97.5", s.upper}});
    json rhat = json::object();
    for (const auto& r : fit.diagnostics.rhat) rhat[r.parameter] = r.rhat;
    return {{"summary", summary},
            {"rhat", rhat},
            {"max_rhat", fit.diagnostics.max_rhat},
            {"max_rhat_parameter", fit.diagnostics.max_rhat_parameter},
            {"converged", fit.diagnostics.converged}};
}

std::string diagnostics_lines(const Diagnostics& d) {
    std::ostringstream os;
    os << "max_rhat: " << format_number(d.max_rhat) << " (" << d.max_rhat_parameter << ")\n";
    os << "rhat_threshold: " << format_number(d.threshold) << '\n';
    os << "convergence: " << (d.converged ? "pass" : "FAIL") << '\n';
    return os.str();
}

SurveyData load_data(const RunConfig& cfg) {
    if (cfg.data_path.empty()) throw ConfigError("config: no data path given");
    return read_survey_csv(cfg.data_path);
}

void check_k(const RunConfig& cfg) {
    if (cfg.k < 2) throw ConfigError("config: K must be at least 2");
}

int occupied_groups(const Assignment& a) {
    return static_cast<int>(std::set<Label>(a.begin(), a.end()).size());
}

}  // namespace

// ---------------------------------------------------------------------------
// RunConfig

void RunConfig::apply_seed(std::uint64_t seed) {
    sampler.seed = derive_seed(seed, 1);
    optimizer.seed = derive_seed(seed, 2);
    simulation.seed = derive_seed(seed, 3);
}

LossSpec RunConfig::resolved_loss() const {
    LossSpec spec = loss;
    spec.k = k;
    if (spec.eta.empty()) spec.eta.assign(sz(k), 1.0 / k);
    spec.validate();
    return spec;
}

RunConfig parse_run_config(const std::string& json_text, const fs::path& base_dir) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    check_keys(j, "config",
               {"seed", "data", "K", "output", "prior", "loss", "sampler", "optimizer", "simulation", "benchmark"});
    RunConfig cfg;
    std::string path;
    read(j, "data", path);
    cfg.data_path = resolve(base_dir, path);
    read(j, "K", cfg.k);
    path.clear();
    read(j, "output", path);
    if (!path.empty()) cfg.output_dir = resolve(base_dir, path);

    if (j.contains("prior")) {
        const auto& p = j["prior"];
        check_keys(p, "prior", {"alpha", "beta", "file"});
        if (p.contains("file")) cfg.prior = read_prior_file(resolve(base_dir, p["file"].get<std::string>()));
        read_prior_values(p, cfg.prior);
    }
    if (j.contains("loss")) {
        const auto& l = j["loss"];
        check_keys(l, "loss", {"mode", "eta", "lambda", "delta"});
        std::string mode = to_string(cfg.loss.mode);
        read(l, "mode", mode);
        cfg.loss.mode = parse_loss_mode(mode);
        read(l, "eta", cfg.loss.eta);
        read(l, "lambda", cfg.loss.lambda);
        read(l, "delta", cfg.loss.delta);
    }
    if (j.contains("sampler")) {
        const auto& s = j["sampler"];
        check_keys(s, "sampler", {"chains", "burn_in", "kept", "seed", "rhat_threshold"});
        read(s, "chains", cfg.sampler.chains);
        read(s, "burn_in", cfg.sampler.burn_in);
        read(s, "kept", cfg.sampler.kept);
        read(s, "seed", cfg.sampler.seed);
        read(s, "rhat_threshold", cfg.sampler.rhat_threshold);
    }
    if (j.contains("optimizer")) {
        const auto& o = j["optimizer"];
        check_keys(o, "optimizer",
                   {"population_size", "max_generations", "wait_generations", "mutation_rate", "crossover_rate",
                    "tournament_size", "seed", "local_search"});
        read(o, "population_size", cfg.optimizer.population_size);
        read(o, "max_generations", cfg.optimizer.max_generations);
        read(o, "wait_generations", cfg.optimizer.wait_generations);
        read(o, "mutation_rate", cfg.optimizer.mutation_rate);
        read(o, "crossover_rate", cfg.optimizer.crossover_rate);
        read(o, "tournament_size", cfg.optimizer.tournament_size);
        read(o, "seed", cfg.optimizer.seed);
        read(o, "local_search", cfg.optimizer.local_search);
    }
    if (j.contains("simulation")) {
        const auto& s = j["simulation"];
        check_keys(s, "simulation",
                   {"N", "K", "Q", "levels", "group_sizes", "theta_concentration", "phi_concentration", "seed",
                    "beta_noise", "prior_alpha"});
        auto& sim = cfg.simulation;
        read(s, "N", sim.respondents);
        read(s, "K", sim.clusters);
        read(s, "Q", sim.questions);
        read(s, "levels", sim.levels);
        read(s, "group_sizes", sim.group_sizes);
        read(s, "theta_concentration", sim.theta_concentration);
        read(s, "phi_concentration", sim.phi_concentration);
        read(s, "seed", sim.seed);
        read(s, "beta_noise", sim.beta_noise);
        read(s, "prior_alpha", sim.prior_alpha);
    }
    if (j.contains("benchmark")) {
        const auto& b = j["benchmark"];
        check_keys(b, "benchmark", {"replicates", "lambda", "eta", "include_invariant"});
        read(b, "replicates", cfg.benchmark.replicates);
        read(b, "lambda", cfg.benchmark.lambda);
        read(b, "eta", cfg.benchmark.eta);
        read(b, "include_invariant", cfg.benchmark.include_invariant);
    }
    if (j.contains("seed")) cfg.apply_seed(j["seed"].get<std::uint64_t>());
    return cfg;
}

RunConfig load_run_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str(), path.parent_path());
}

PriorSource read_prior_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open prior file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("prior file " + path.string() + ": " + e.what());
    }
    check_keys(j, "prior file", {"alpha", "beta"});
    PriorSource p;
    read_prior_values(j, p);
    return p;
}

PriorSpec resolve_prior(const PriorSource& source, const SurveyData& data, int k) {
    PriorSpec prior = PriorSpec::symmetric(data, k, source.alpha, source.beta);
    if (!source.alpha_values.empty()) {
        if (source.alpha_values.size() == sz(k)) {
            for (int n = 0; n < data.respondents; ++n)
                std::copy(source.alpha_values.begin(), source.alpha_values.end(),
                          prior.alpha.begin() + static_cast<long>(sz(n) * sz(k)));
        } else if (source.alpha_values.size() == prior.alpha.size()) {
            prior.alpha = source.alpha_values;
        } else {
            throw ConfigError("prior: alpha must have K or N x K entries");
        }
    }
    if (!source.beta_values.empty()) {
        if (source.beta_values.size() != prior.beta.size())
            throw ConfigError("prior: beta must have K x sum(V_q) = " + std::to_string(prior.beta.size()) +
                              " entries");
        prior.beta = source.beta_values;
    }
    prior.validate(data);
    return prior;
}

// ---------------------------------------------------------------------------
// Sort

SortOutcome sort_respondents(const SurveyData& data, const PriorSpec& prior, const LossSpec& spec,
                             const SamplerConfig& sampler, const OptimizerConfig& optimizer) {
    spec.validate();
    SortOutcome out;
    out.spec = spec;
    out.fit = fit_posterior(data, prior, sampler);
    const auto draws = out.fit.samples.z_draws();
    out.label_switching_suspected =
        out.fit.samples.chains() > 1 && check_label_switching(out.fit.samples).suspected;

    const auto chosen = optimize_assignment(draws, spec, optimizer);
    out.raw_action = chosen.assignment;
    out.action = chosen.assignment;
    if (spec.label_invariant() && spec.target_labels() == spec.k) {
        auto id = identify_labels(chosen.assignment, out.fit.samples);
        out.action = std::move(id.assignment);
        out.sigma = std::move(id.sigma);
    }
    out.expected_loss = expected_loss(out.action, draws, spec);

    LossSpec vi_spec = LossSpec::uniform(spec.k);
    vi_spec.lambda = 0.0;
    vi_spec.delta = spec.delta;
    const auto vi_only = optimize_assignment(draws, vi_spec, optimizer);
    out.vi_action = identify_labels(vi_only.assignment, out.fit.samples).assignment;
    if (spec.target_labels() == spec.k) out.vi_expected_loss = expected_loss(out.vi_action, draws, spec);
    else out.vi_expected_loss = expected_vi(out.vi_action, draws);
    return out;
}

int run_fit(const RunConfig& cfg) {
    check_k(cfg);
    const SurveyData data = load_data(cfg);
    const PriorSpec prior = resolve_prior(cfg.prior, data, cfg.k);
    const PosteriorFit fit = fit_posterior(data, prior, cfg.sampler);
    fs::create_directories(cfg.output_dir);
    write_posterior_files(cfg.output_dir, data, fit);
    {
        auto out = open_out(cfg.output_dir / "z_draws.csv");
        out << "draw,chain";
        for (const auto& id : data.respondent_ids) out << ',' << id;
        out << '\n';
        for (int t = 0; t < fit.samples.draws; ++t) {
            out << t + 1 << ',' << fit.samples.chain_id[sz(t)] + 1;
            for (Label l : fit.samples.z_draw(t)) out << ',' << l;
            out << '\n';
        }
    }
    {
        auto out = open_out(cfg.output_dir / "report.txt");
        out << "mode: fit\nrespondents: " << data.respondents << "\nquestions: " << data.questions
            << "\nK: " << cfg.k << "\ndraws: " << fit.samples.draws << '\n'
            << diagnostics_lines(fit.diagnostics);
    }
    json j = {{"mode", "fit"}, {"K", cfg.k}, {"sampler", sampler_json(cfg.sampler)}, {"posterior", posterior_json(fit)}};
    write_json(cfg.output_dir / "results.json", j);
    return fit.diagnostics.converged ? kExitOk : kExitConvergence;
}

int run_sort(const RunConfig& cfg) {
    check_k(cfg);
    const SurveyData data = load_data(cfg);
    const PriorSpec prior = resolve_prior(cfg.prior, data, cfg.k);
    const LossSpec spec = cfg.resolved_loss();
    const SortOutcome res = sort_respondents(data, prior, spec, cfg.sampler, cfg.optimizer);
    const auto draws = res.fit.samples.z_draws();
    const auto theta_mean = posterior_mean_theta(res.fit.samples);

    fs::create_directories(cfg.output_dir);
    write_posterior_files(cfg.output_dir, data, res.fit);
    {
        auto out = open_out(cfg.output_dir / "assignments.csv");
        out << "respondent,label,raw_label,vi_only_label";
        for (int c = 1; c <= cfg.k; ++c) out << ",theta_mean_" << c;
        out << '\n';
        for (int n = 0; n < data.respondents; ++n) {
            out << data.respondent_ids[sz(n)] << ',' << res.action[sz(n)] << ',' << res.raw_action[sz(n)] << ','
                << res.vi_action[sz(n)];
            for (int c = 0; c < cfg.k; ++c) out << ',' << format_number(theta_mean[sz(n) * sz(cfg.k) + sz(c)]);
            out << '\n';
        }
    }
    const double chosen_vi = expected_vi(res.action, draws);
    const double vi_vi = expected_vi(res.vi_action, draws);
    const bool same_k = spec.target_labels() == spec.k;
    const double chosen_size = size_penalty(res.action, spec);
    const double vi_size = same_k ? size_penalty(res.vi_action, spec) : 0.0;
    {
        auto out = open_out(cfg.output_dir / "loss_comparison.csv");
        out << "action,lambda,expected_vi,size_penalty,expected_loss\n";
        out << "size_constrained," << format_number(spec.lambda) << ',' << format_number(chosen_vi) << ','
            << format_number(chosen_size) << ',' << format_number(res.expected_loss) << '\n';
        out << "vi_only,0," << format_number(vi_vi) << ',' << (same_k ? format_number(vi_size) : "NA") << ','
            << format_number(res.vi_expected_loss) << '\n';
    }
    {
        auto out = open_out(cfg.output_dir / "report.txt");
        out << "mode: sort\nrespondents: " << data.respondents << "\nK: " << cfg.k
            << "\nloss: " << to_string(spec.mode) << "\nlambda: " << format_number(spec.lambda)
            << "\ndelta: " << format_number(spec.delta) << "\neta:";
        for (double e : spec.eta) out << ' ' << format_number(e);
        out << '\n' << diagnostics_lines(res.fit.diagnostics);
        out << "label_switching_suspected: " << (res.label_switching_suspected ? "yes" : "no") << '\n';
        if (res.sigma) {
            out << "sigma_hat:";
            for (Label l : *res.sigma) out << ' ' << l;
            out << '\n';
        }
        out << "expected_loss: " << format_number(res.expected_loss) << '\n';
        out << "vi_only_expected_loss: " << format_number(res.vi_expected_loss) << '\n';
        const auto sizes = closure(res.action, spec.target_labels());
        out << "group_sizes:";
        for (double s : sizes) out << ' ' << static_cast<int>(std::lround(s * data.respondents));
        out << '\n';
    }
    json j = {{"mode", "sort"},
              {"K", cfg.k},
              {"loss", loss_json(spec)},
              {"sampler", sampler_json(cfg.sampler)},
              {"assignment", res.action},
              {"raw_assignment", res.raw_action},
              {"vi_only_assignment", res.vi_action},
              {"expected_loss", res.expected_loss},
              {"vi_only_expected_loss", res.vi_expected_loss},
              {"expected_vi", chosen_vi},
              {"size_penalty", chosen_size},
              {"label_switching_suspected", res.label_switching_suspected},
              {"posterior", posterior_json(res.fit)}};
    if (res.sigma) j["sigma_hat"] = *res.sigma;
    write_json(cfg.output_dir / "results.json", j);

    if (!res.fit.diagnostics.converged) {
        std::cerr << "warning: max R-hat " << format_number(res.fit.diagnostics.max_rhat) << " >= "
                  << format_number(res.fit.diagnostics.threshold) << '\n';
        return kExitConvergence;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// Simulate

int run_simulate(const RunConfig& cfg) {
    SimConfig sim = cfg.simulation;
    sim.validate();
    const auto ds = simulate_dataset(sim);
    const PriorSpec prior = simulation_prior(ds, sim);
    fs::create_directories(cfg.output_dir);
    write_survey_csv(cfg.output_dir / "survey.csv", ds.data);
    {
        auto out = open_out(cfg.output_dir / "truth.csv");
        out << "respondent,z_true";
        for (int c = 1; c <= sim.clusters; ++c) out << ",theta_" << c;
        out << '\n';
        for (int n = 0; n < sim.respondents; ++n) {
            out << ds.data.respondent_ids[sz(n)] << ',' << ds.truth.z_true[sz(n)];
            for (int c = 0; c < sim.clusters; ++c)
                out << ',' << format_number(ds.truth.theta_true[sz(n) * sz(sim.clusters) + sz(c)]);
            out << '\n';
        }
    }
    {
        const ProfileLayout layout(sim.clusters, sim.levels);
        auto out = open_out(cfg.output_dir / "phi_true.csv");
        out << "cluster,question,option,phi\n";
        for (int c = 0; c < sim.clusters; ++c)
            for (int q = 0; q < sim.questions; ++q)
                for (int v = 0; v < layout.levels(q); ++v)
                    out << c + 1 << ',' << q + 1 << ',' << v + 1 << ','
                        << format_number(ds.truth.phi_true[layout.index(c, q, v)]) << '\n';
    }
    {
        const ProfileLayout layout(sim.clusters, sim.levels);
        json alpha = json::array();
        for (int n = 0; n < sim.respondents; ++n)
            alpha.push_back(std::vector<double>(prior.alpha.begin() + static_cast<long>(sz(n) * sz(sim.clusters)),
                                                prior.alpha.begin() + static_cast<long>(sz(n + 1) * sz(sim.clusters))));
        json beta = json::array();
        for (int c = 0; c < sim.clusters; ++c) {
            json per_q = json::array();
            for (int q = 0; q < sim.questions; ++q) {
                const auto o = static_cast<long>(layout.index(c, q));
                per_q.push_back(std::vector<double>(prior.beta.begin() + o, prior.beta.begin() + o + layout.levels(q)));
            }
            beta.push_back(per_q);
        }
        write_json(cfg.output_dir / "prior.json", {{"alpha", alpha}, {"beta", beta}});
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// Benchmark

const BenchmarkSummary& BenchmarkReport::variant(const std::string& name) const {
    for (const auto& s : summary)
        if (s.variant == name) return s;
    throw DomainError("benchmark: no variant " + name);
}

BenchmarkReport benchmark_study(const SimConfig& sim_in, const BenchmarkConfig& bench, const SamplerConfig& sampler_in,
                                const OptimizerConfig& optimizer_in, std::uint64_t base_seed) {
    if (bench.replicates < 1) throw ConfigError("benchmark: replicates must be >= 1");
    SimConfig sim = sim_in;
    sim.validate();
    const int k = sim.clusters;

    Composition truth_eta(sz(k));
    for (int c = 0; c < k; ++c) truth_eta[sz(c)] = static_cast<double>(sim.group_sizes[sz(c)]) / sim.respondents;
    const Composition lss_eta = bench.eta.empty() ? truth_eta : bench.eta;

    BenchmarkReport report;
    for (int r = 0; r < bench.replicates; ++r) {
        const auto ur = static_cast<std::uint64_t>(r);
        sim.seed = derive_seed(base_seed, 100 + ur);
        SamplerConfig sampler = sampler_in;
        sampler.seed = derive_seed(base_seed, 200 + ur);
        OptimizerConfig optimizer = optimizer_in;
        optimizer.seed = derive_seed(base_seed, 300 + ur);

        const auto ds = simulate_dataset(sim);
        const auto prior = simulation_prior(ds, sim);
        sampler.compute_rhat = false;
        const auto fit = fit_posterior(ds.data, prior, sampler);
        const auto draws = fit.samples.z_draws();

        auto score = [&](const std::string& name, const LossSpec& spec) {
            auto res = optimize_assignment(draws, spec, optimizer);
            Assignment a = res.assignment;
            if (spec.label_invariant()) a = identify_labels(a, fit.samples).assignment;
            report.rows.push_back({r + 1, name, accuracy(a, ds.truth.z_true), vi_from_truth(a, ds.truth.z_true),
                                   occupied_groups(a), a});
        };

        LossSpec vi = LossSpec::uniform(k);
        vi.lambda = 0.0;
        score("VI", vi);

        LossSpec lss;
        lss.mode = LossMode::sensitive;
        lss.k = k;
        lss.eta = lss_eta;
        lss.lambda = bench.lambda;
        score("LSS", lss);

        if (bench.include_invariant) {
            LossSpec lsi = lss;
            lsi.mode = LossMode::invariant;
            Rng rng(derive_seed(base_seed, 400 + ur));
            std::shuffle(lsi.eta.begin(), lsi.eta.end(), rng);
            score("LSI", lsi);
        }
    }

    for (const std::string name : {"VI", "LSS", "LSI"}) {
        BenchmarkSummary s{name};
        int count = 0;
        for (const auto& row : report.rows) {
            if (row.variant != name) continue;
            ++count;
            s.mean_accuracy += row.accuracy;
            s.mean_vi_from_truth += row.vi_from_truth;
            s.collapse_rate += row.groups_used == 1 ? 1.0 : 0.0;
        }
        if (count == 0) continue;
        s.mean_accuracy /= count;
        s.mean_vi_from_truth /= count;
        s.collapse_rate /= count;
        report.summary.push_back(s);
    }
    return report;
}

int run_benchmark(const RunConfig& cfg) {
    const auto report =
        benchmark_study(cfg.simulation, cfg.benchmark, cfg.sampler, cfg.optimizer, cfg.simulation.seed);
    fs::create_directories(cfg.output_dir);
    {
        auto out = open_out(cfg.output_dir / "benchmark.csv");
        out << "replicate,variant,accuracy,vi_from_truth,groups_used\n";
        for (const auto& r : report.rows)
            out << r.replicate << ',' << r.variant << ',' << format_number(r.accuracy) << ','
                << format_number(r.vi_from_truth) << ',' << r.groups_used << '\n';
    }
    {
        auto out = open_out(cfg.output_dir / "benchmark_summary.csv");
        out << "variant,mean_accuracy,mean_vi_from_truth,collapse_rate\n";
        for (const auto& s : report.summary)
            out << s.variant << ',' << format_number(s.mean_accuracy) << ',' << format_number(s.mean_vi_from_truth)
                << ',' << format_number(s.collapse_rate) << '\n';
    }
    json rows = json::array();
    for (const auto& r : report.rows)
        rows.push_back({{"replicate", r.replicate},
                        {"variant", r.variant},
                        {"accuracy", r.accuracy},
                        {"vi_from_truth", r.vi_from_truth},
                        {"assignment", r.action}});
    write_json(cfg.output_dir / "results.json", {{"mode", "benchmark"}, {"rows", rows}});
    return kExitOk;
}

}  // namespace sizeclust
