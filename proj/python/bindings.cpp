#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "sizeclust/composition.hpp"
#include "sizeclust/errors.hpp"
#include "sizeclust/information.hpp"
#include "sizeclust/io.hpp"
#include "sizeclust/loss.hpp"
#include "sizeclust/model.hpp"
#include "sizeclust/optimize.hpp"
#include "sizeclust/pipeline.hpp"
#include "sizeclust/relabel.hpp"
#include "sizeclust/simulate.hpp"

namespace py = pybind11;
using namespace sizeclust;

namespace {

using Draws = std::vector<Assignment>;

void register_errors(py::module_& m) {
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DataError>(m, "DataError", PyExc_IOError);
}

void register_composition(py::module_& m) {
    m.def("closure", [](const Assignment& a, int k) { return closure(a, k); }, py::arg("a"), py::arg("k"));
    m.def("closure_pseudo", [](const Assignment& a, int k, double d) { return closure_pseudo(a, k, d); }, py::arg("a"), py::arg("k"), py::arg("delta"));
    m.def("aitchison_distance", [](const Composition& x, const Composition& y) { return aitchison_distance(x, y); }, py::arg("x"), py::arg("y"));
    m.def(
        "min_perm_aitchison",
        [](const Composition& eta, const Composition& c) {
            auto r = min_perm_aitchison(eta, c);
            return py::make_tuple(r.distance, r.best);
        },
        py::arg("eta"), py::arg("c"), "Returns (distance, best permutation).");
}

void register_information(py::module_& m) {
    m.def("entropy", [](const Assignment& a) { return entropy(a); }, py::arg("a"));
    m.def("joint_entropy", [](const Assignment& a, const Assignment& z) { return joint_entropy(a, z); }, py::arg("a"), py::arg("z"));
    m.def("vi_loss", [](const Assignment& a, const Assignment& z) { return vi_loss(a, z); }, py::arg("a"), py::arg("z"));
    m.def(
        "contingency",
        [](const Assignment& a, const Assignment& z) {
            const ContingencyTable t(a, z);
            std::vector<std::vector<long>> rows(static_cast<std::size_t>(t.rows()));
            for (int g = 1; g <= t.rows(); ++g)
                for (int h = 1; h <= t.cols(); ++h) rows[static_cast<std::size_t>(g - 1)].push_back(t.count(g, h));
            return rows;
        },
        py::arg("a"), py::arg("z"));
}

void register_loss(py::module_& m) {
    py::enum_<LossMode>(m, "LossMode")
        .value("sensitive", LossMode::sensitive)
        .value("invariant", LossMode::invariant);

    py::class_<LossSpec>(m, "LossSpec")
        .def(py::init([](const Composition& eta, int k, LossMode mode, double lambda, double delta) {
                 LossSpec s;
                 s.eta = eta;
                 s.k = k;
                 s.mode = mode;
                 s.lambda = lambda;
                 s.delta = delta;
                 s.validate();
                 return s;
             }),
             py::arg("eta"), py::arg("k"), py::arg("mode") = LossMode::sensitive, py::arg("lambda_") = 1.0,
             py::arg("delta") = 0.1)
        .def_readwrite("eta", &LossSpec::eta)
        .def_readwrite("k", &LossSpec::k)
        .def_readwrite("mode", &LossSpec::mode)
        .def_readwrite("lambda_", &LossSpec::lambda)
        .def_readwrite("delta", &LossSpec::delta)
        .def("label_invariant", &LossSpec::label_invariant);

    m.def("loss_sensitive", [](const Assignment& a, const Assignment& z, const LossSpec& s) { return loss_sensitive(a, z, s); }, py::arg("a"), py::arg("z"), py::arg("spec"));
    m.def("loss_invariant", [](const Assignment& a, const Assignment& z, const LossSpec& s) { return loss_invariant(a, z, s); }, py::arg("a"), py::arg("z"), py::arg("spec"));
    m.def("size_penalty", [](const Assignment& a, const LossSpec& s) { return size_penalty(a, s); }, py::arg("a"), py::arg("spec"));
    m.def(
        "expected_loss", [](const Assignment& a, const Draws& zs, const LossSpec& spec) { return expected_loss(a, zs, spec); },
        py::arg("a"), py::arg("draws"), py::arg("spec"));
}

void register_model(py::module_& m) {
    py::class_<SurveyData>(m, "SurveyData")
        .def(py::init(&SurveyData::from_rows), py::arg("rows"), py::arg("levels"))
        .def_readonly("respondents", &SurveyData::respondents)
        .def_readonly("questions", &SurveyData::questions)
        .def_readonly("levels", &SurveyData::levels)
        .def_readonly("respondent_ids", &SurveyData::respondent_ids)
        .def("at", &SurveyData::at);

    py::class_<PriorSpec>(m, "PriorSpec")
        .def_static("symmetric", &PriorSpec::symmetric, py::arg("data"), py::arg("k"), py::arg("alpha") = 0.5,
                    py::arg("beta") = 1.0)
        .def_readwrite("k", &PriorSpec::k)
        .def_readwrite("alpha", &PriorSpec::alpha)
        .def_readwrite("beta", &PriorSpec::beta);

    py::class_<SamplerConfig>(m, "SamplerConfig")
        .def(py::init<>())
        .def_readwrite("chains", &SamplerConfig::chains)
        .def_readwrite("burn_in", &SamplerConfig::burn_in)
        .def_readwrite("kept", &SamplerConfig::kept)
        .def_readwrite("seed", &SamplerConfig::seed)
        .def_readwrite("rhat_threshold", &SamplerConfig::rhat_threshold);

    py::class_<PosteriorSamples>(m, "PosteriorSamples")
        .def_readonly("draws", &PosteriorSamples::draws)
        .def_readonly("respondents", &PosteriorSamples::respondents)
        .def_readonly("k", &PosteriorSamples::k)
        .def_readonly("theta", &PosteriorSamples::theta)
        .def_readonly("phi", &PosteriorSamples::phi)
        .def_readonly("chain_id", &PosteriorSamples::chain_id)
        .def("z_draws", &PosteriorSamples::z_draws);

    py::class_<Diagnostics>(m, "Diagnostics")
        .def_readonly("max_rhat", &Diagnostics::max_rhat)
        .def_readonly("max_rhat_parameter", &Diagnostics::max_rhat_parameter)
        .def_readonly("converged", &Diagnostics::converged)
        .def_property_readonly("rhat", [](const Diagnostics& d) {
            py::dict out;
            for (const auto& r : d.rhat) out[py::str(r.parameter)] = r.rhat;
            return out;
        });

    m.def(
        "fit_posterior",
        [](const SurveyData& data, const PriorSpec& prior, const SamplerConfig& cfg) {
            auto fit = fit_posterior(data, prior, cfg);
            return py::make_tuple(std::move(fit.samples), std::move(fit.diagnostics));
        },
        py::arg("data"), py::arg("prior"), py::arg("config") = SamplerConfig{});
    m.def("log_likelihood", [](const SurveyData& d, const std::vector<double>& theta, const std::vector<double>& phi, int k) { return log_likelihood(d, theta, phi, k); }, py::arg("data"), py::arg("theta"), py::arg("phi"), py::arg("k"));
    m.def("split_rhat", [](const std::vector<std::vector<double>>& chains) { return split_rhat(chains); },
          py::arg("chains"));
}

void register_optimize(py::module_& m) {
    py::class_<OptimizerConfig>(m, "OptimizerConfig")
        .def(py::init<>())
        .def_readwrite("population_size", &OptimizerConfig::population_size)
        .def_readwrite("max_generations", &OptimizerConfig::max_generations)
        .def_readwrite("wait_generations", &OptimizerConfig::wait_generations)
        .def_readwrite("mutation_rate", &OptimizerConfig::mutation_rate)
        .def_readwrite("crossover_rate", &OptimizerConfig::crossover_rate)
        .def_readwrite("seed", &OptimizerConfig::seed)
        .def_readwrite("local_search", &OptimizerConfig::local_search);

    m.def(
        "optimize_assignment",
        [](const Draws& zs, const LossSpec& spec, const OptimizerConfig& cfg) {
            auto r = optimize_assignment(zs, spec, cfg);
            return py::make_tuple(r.assignment, r.value);
        },
        py::arg("draws"), py::arg("spec"), py::arg("config") = OptimizerConfig{});
    m.def(
        "brute_force_assignment",
        [](const Draws& zs, const LossSpec& spec) {
            auto r = brute_force_assignment(zs, spec);
            return py::make_tuple(r.assignment, r.value);
        },
        py::arg("draws"), py::arg("spec"));
    m.def(
        "local_search", [](const Assignment& a0, const Draws& zs, const LossSpec& spec) { return local_search(a0, zs, spec); },
        py::arg("start"), py::arg("draws"), py::arg("spec"));
}

void register_relabel(py::module_& m) {
    m.def(
        "identify_labels",
        [](const Assignment& a_hat, const PosteriorSamples& samples) {
            auto id = identify_labels(a_hat, samples);
            return py::make_tuple(id.assignment, id.sigma);
        },
        py::arg("a_hat"), py::arg("samples"));
    m.def(
        "build_score_matrix",
        [](const Assignment& a_hat, const std::vector<double>& theta, int respondents, int k) {
            auto s = build_score_matrix(a_hat, theta, respondents, k);
            std::vector<std::vector<double>> rows(static_cast<std::size_t>(k));
            for (int i = 1; i <= k; ++i)
                for (int j = 1; j <= k; ++j) rows[static_cast<std::size_t>(i - 1)].push_back(s.at(i, j));
            return rows;
        },
        py::arg("a_hat"), py::arg("theta"), py::arg("respondents"), py::arg("k"));
}

void register_simulate(py::module_& m) {
    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("respondents", &SimConfig::respondents)
        .def_readwrite("clusters", &SimConfig::clusters)
        .def_readwrite("questions", &SimConfig::questions)
        .def_readwrite("levels", &SimConfig::levels)
        .def_readwrite("group_sizes", &SimConfig::group_sizes)
        .def_readwrite("theta_concentration", &SimConfig::theta_concentration)
        .def_readwrite("phi_concentration", &SimConfig::phi_concentration)
        .def_readwrite("seed", &SimConfig::seed);

    m.def(
        "simulate_dataset",
        [](const SimConfig& cfg) {
            auto ds = simulate_dataset(cfg);
            return py::make_tuple(std::move(ds.data), ds.truth.z_true, ds.truth.theta_true, ds.truth.phi_true);
        },
        py::arg("config"), "Returns (data, z_true, theta_true, phi_true).");
    m.def("accuracy", [](const Assignment& a, const Assignment& z) { return accuracy(a, z); }, py::arg("a"), py::arg("z_true"));
    m.def("vi_from_truth", [](const Assignment& a, const Assignment& z) { return vi_from_truth(a, z); }, py::arg("a"), py::arg("z_true"));
    m.def("read_survey_csv", py::overload_cast<const std::filesystem::path&>(&read_survey_csv), py::arg("path"));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Decision-theoretic size-constrained clustering of categorical survey data.";

    register_errors(m);
    register_composition(m);
    register_information(m);
    register_loss(m);
    register_model(m);
    register_optimize(m);
    register_relabel(m);
    register_simulate(m);

    m.attr("__version__") = "0.1.0";
}
