#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "darom/diagnostics.hpp"
#include "darom/errors.hpp"
#include "darom/experiment.hpp"
#include "darom/pod.hpp"
#include "darom/quadrature.hpp"
#include "darom/sampler.hpp"
#include "darom/toy.hpp"

namespace py = pybind11;
using namespace darom;

namespace {

AdaptationConfig make_adaptation(double epsilon, double epsilon0,
                                 int subchain_length, int max_basis_dim,
                                 double criterion_c) {
  AdaptationConfig config{epsilon, epsilon0, subchain_length, max_basis_dim,
                          criterion_c};
  config.validate();
  return config;
}

}  // namespace

PYBIND11_MODULE(_darom, m) {
  m.doc() = "delayed-acceptance MCMC with data-driven reduced-order models";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<ConfigError>(m, "ConfigurationError", PyExc_ValueError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_RuntimeError);

  py::class_<Mesh>(m, "Mesh")
      .def_readonly("nx", &Mesh::nx)
      .def_readonly("ny", &Mesh::ny)
      .def_readonly("nodes", &Mesh::nodes)
      .def_readonly("elements", &Mesh::elements)
      .def_readonly("boundary_nodes", &Mesh::boundary_nodes)
      .def_property_readonly("node_count", &Mesh::node_count)
      .def_property_readonly("element_count", &Mesh::element_count);
  m.def("build_mesh", &build_mesh, py::arg("nx"), py::arg("ny"));
  m.def("source_term", &source_term);
  m.def("source_density", &source_density, py::arg("x"), py::arg("y"));

  py::class_<PermeabilityMap>(m, "PermeabilityMap")
      .def_static("rbf_default", &PermeabilityMap::rbf_default, py::arg("mesh"))
      .def_static("rbf", &PermeabilityMap::rbf, py::arg("mesh"),
                  py::arg("centers"), py::arg("width"))
      .def_static("kl_expansion", &PermeabilityMap::kl_expansion,
                  py::arg("mesh"), py::arg("length_scale"), py::arg("energy"))
      .def_property_readonly("parameter_dim", &PermeabilityMap::parameter_dim)
      .def("nodal_field", &PermeabilityMap::nodal_field, py::arg("x"))
      .def_property_readonly("kl_eigenvalues", &PermeabilityMap::kl_eigenvalues)
      .def_property_readonly("kl_modes", &PermeabilityMap::kl_modes);

  py::class_<PriorModel>(m, "PriorModel")
      .def_static("independent_log_normal", &PriorModel::independent_log_normal,
                  py::arg("dim"), py::arg("sigma0"))
      .def_static("standard_gaussian_kl", &PriorModel::standard_gaussian_kl,
                  py::arg("dim"))
      .def_property_readonly("dim", &PriorModel::dim)
      .def("log_density", &PriorModel::log_density, py::arg("x"))
      .def("marginal_std", &PriorModel::marginal_std, py::arg("i"))
      .def("sample", [](const PriorModel& prior, std::uint64_t seed, int count) {
        std::mt19937_64 rng(seed);
        Matrix out(count, prior.dim());
        for (int i = 0; i < count; ++i) out.row(i) = prior.sample(rng).transpose();
        return out;
      }, py::arg("seed"), py::arg("count") = 1);

  py::class_<ObservationOperator>(m, "ObservationOperator")
      .def_static("interior_grid", &ObservationOperator::interior_grid,
                  py::arg("mesh"), py::arg("spacing") = 0.1)
      .def_static("at_points", &ObservationOperator::at_points, py::arg("mesh"),
                  py::arg("coords"))
      .def_readonly("sensor_coords", &ObservationOperator::sensor_coords)
      .def_property_readonly("output_dim", &ObservationOperator::output_dim)
      .def("observe", &ObservationOperator::observe, py::arg("state"));

  py::class_<ForwardSolve>(m, "ForwardSolve")
      .def_readonly("state", &ForwardSolve::state)
      .def_readonly("outputs", &ForwardSolve::outputs)
      .def_readonly("multiplier", &ForwardSolve::multiplier)
      .def_readonly("residual", &ForwardSolve::residual)
      .def_readonly("wall_seconds", &ForwardSolve::wall_seconds);

  py::class_<ForwardModel, std::shared_ptr<ForwardModel>>(m, "ForwardModel")
      .def(py::init<Mesh, PermeabilityMap, ObservationOperator, double>(),
           py::arg("mesh"), py::arg("map"), py::arg("observation"),
           py::arg("solve_rtol") = 1e-10)
      .def("solve", &ForwardModel::solve, py::arg("x"))
      .def("solve_with_field", &ForwardModel::solve_with_field, py::arg("field"))
      .def_property_readonly("state_dim", &ForwardModel::state_dim)
      .def_property_readonly("output_dim", &ForwardModel::output_dim)
      .def_property_readonly("parameter_dim", &ForwardModel::parameter_dim);

  py::class_<NoiseModel>(m, "NoiseModel")
      .def_static("isotropic", &NoiseModel::isotropic, py::arg("dim"), py::arg("sigma"))
      .def_property_readonly("std_devs", &NoiseModel::std_devs)
      .def("whiten", &NoiseModel::whiten)
      .def("misfit", &NoiseModel::misfit, py::arg("outputs"), py::arg("observations"));

  py::class_<Dataset>(m, "Dataset")
      .def_readonly("observations", &Dataset::observations)
      .def_readonly("seed", &Dataset::seed)
      .def_readonly("snr", &Dataset::snr)
      .def_readonly("truth_description", &Dataset::truth_description)
      .def_property_readonly("truth_parameter", [](const Dataset& d) {
        return d.truth_parameter ? py::cast(*d.truth_parameter) : py::none();
      });
  m.def("generate_data", &generate_data, py::arg("model"), py::arg("truth_x"),
        py::arg("snr"), py::arg("seed"));
  m.def("generate_data_from_field", &generate_data_from_field, py::arg("model"),
        py::arg("field"), py::arg("snr"), py::arg("seed"), py::arg("description"));

  py::class_<SnapshotInfo>(m, "SnapshotInfo")
      .def(py::init<>())
      .def_readwrite("parameter", &SnapshotInfo::parameter)
      .def_readwrite("chain_step", &SnapshotInfo::chain_step)
      .def_readwrite("source", &SnapshotInfo::source);

  py::enum_<ReducedBasis::EnrichOutcome>(m, "EnrichOutcome")
      .value("Added", ReducedBasis::EnrichOutcome::Added)
      .value("Dependent", ReducedBasis::EnrichOutcome::Dependent)
      .value("AtCapacity", ReducedBasis::EnrichOutcome::AtCapacity);

  py::class_<ReducedBasis, std::shared_ptr<ReducedBasis>>(m, "ReducedBasis")
      .def(py::init<int, int>(), py::arg("full_dim"), py::arg("max_dim"))
      .def_property_readonly("dim", &ReducedBasis::dim)
      .def_property_readonly("generation", &ReducedBasis::generation)
      .def_property_readonly("columns",
                             [](const ReducedBasis& b) { return Matrix(b.columns()); })
      .def("enrich",
           [](ReducedBasis& b, const Vector& u, const std::string& source) {
             SnapshotInfo info;
             info.source = source;
             return b.enrich(u, std::move(info));
           },
           py::arg("state"), py::arg("source") = "manual")
      .def("truncated", &ReducedBasis::truncated, py::arg("m"))
      .def("save", &ReducedBasis::save, py::arg("path"))
      .def_static("load", &ReducedBasis::load, py::arg("path"));

  py::class_<RomSolveResult>(m, "RomSolveResult")
      .def_readonly("reduced_state", &RomSolveResult::reduced_state)
      .def_readonly("outputs", &RomSolveResult::outputs)
      .def_readonly("generation", &RomSolveResult::generation);

  py::class_<RomEvaluator>(m, "RomEvaluator")
      .def(py::init<const ForwardModel&, const ReducedBasis&, const NoiseModel&>(),
           py::keep_alive<1, 2>(), py::keep_alive<1, 3>(), py::keep_alive<1, 4>(),
           py::arg("model"), py::arg("basis"), py::arg("noise"))
      .def("solve", &RomEvaluator::solve, py::arg("x"))
      .def("error_indicator",
           [](RomEvaluator& rom, const RomSolveResult& solution) {
             return rom.error_indicator(solution).values;
           }, py::arg("solution"))
      .def("true_scaled_error",
           [](RomEvaluator& rom, const Vector& x) {
             return rom.true_scaled_error(x).values;
           }, py::arg("x"));

  py::class_<PodSpectrum>(m, "PodSpectrum")
      .def_readonly("eigenvalues", &PodSpectrum::eigenvalues)
      .def_readonly("retained", &PodSpectrum::retained)
      .def_readonly("total_sq_sum", &PodSpectrum::total_sq_sum);
  m.def("pod_from_prior",
        [](const ForwardModel& model, const PriorModel& prior, int n_samples,
           double criterion, std::uint64_t seed, int max_dim, int threads) {
          auto [basis, spectrum] = pod_from_prior(model, prior, n_samples,
                                                  criterion, seed, max_dim, threads);
          return py::make_tuple(
              std::make_shared<ReducedBasis>(std::move(basis)), spectrum);
        },
        py::arg("model"), py::arg("prior"), py::arg("n_samples"),
        py::arg("energy_criterion"), py::arg("seed"), py::arg("max_dim") = 0,
        py::arg("threads") = 0);

  py::enum_<EvalKind>(m, "EvalKind")
      .value("Full", EvalKind::Full)
      .value("Reduced", EvalKind::Reduced);

  py::class_<PosteriorEvaluation>(m, "PosteriorEvaluation")
      .def_readonly("log_posterior", &PosteriorEvaluation::log_posterior)
      .def_readonly("misfit", &PosteriorEvaluation::misfit)
      .def_readonly("log_prior", &PosteriorEvaluation::log_prior)
      .def_readonly("outputs", &PosteriorEvaluation::outputs)
      .def_readonly("kind", &PosteriorEvaluation::kind)
      .def_readonly("admissible", &PosteriorEvaluation::admissible)
      .def_readonly("indicator_inf", &PosteriorEvaluation::indicator_inf)
      .def_readonly("wall_seconds", &PosteriorEvaluation::wall_seconds);

  py::class_<Posterior, std::shared_ptr<Posterior>>(m, "Posterior")
      .def_property_readonly("dim", &Posterior::dim)
      .def("evaluate_full", &Posterior::evaluate_full, py::arg("x"))
      .def("evaluate_reduced", &Posterior::evaluate_reduced, py::arg("x"))
      .def_property_readonly("basis_dim", &Posterior::basis_dim);

  py::class_<PdePosterior, Posterior, std::shared_ptr<PdePosterior>>(m, "PdePosterior")
      .def(py::init<const ForwardModel&, const PriorModel&, Dataset, NoiseModel,
                    std::shared_ptr<ReducedBasis>>(),
           py::keep_alive<1, 2>(), py::keep_alive<1, 3>(), py::arg("model"),
           py::arg("prior"), py::arg("dataset"), py::arg("noise"),
           py::arg("basis") = nullptr);

  py::class_<ToySpec>(m, "ToySpec")
      .def_static("standard_2d", &ToySpec::standard_2d, py::arg("approx_amp") = 0.0)
      .def_readwrite("forward", &ToySpec::forward)
      .def_readwrite("noise_sigma", &ToySpec::noise_sigma)
      .def_readwrite("data", &ToySpec::data)
      .def_readwrite("approx_amp", &ToySpec::approx_amp);

  py::class_<ToyPosterior, Posterior, std::shared_ptr<ToyPosterior>>(m, "ToyPosterior")
      .def(py::init<ToySpec, double>(), py::arg("spec"),
           py::arg("log_density_shift") = 0.0)
      .def("posterior_mean", &ToyPosterior::posterior_mean)
      .def("posterior_cov", &ToyPosterior::posterior_cov)
      .def("log_full_density", &ToyPosterior::log_full_density)
      .def("log_reduced_density", &ToyPosterior::log_reduced_density);

  py::enum_<Algorithm>(m, "Algorithm")
      .value("Reference", Algorithm::Reference)
      .value("FullTarget", Algorithm::FullTarget)
      .value("EpsApproximate", Algorithm::EpsApproximate);

  py::class_<AdaptationConfig>(m, "AdaptationConfig")
      .def(py::init(&make_adaptation), py::arg("epsilon") = 1e-1,
           py::arg("epsilon0") = 1.0, py::arg("subchain_length") = 50,
           py::arg("max_basis_dim") = 200, py::arg("criterion_c") = 0.1)
      .def_readonly("epsilon", &AdaptationConfig::epsilon)
      .def_property_readonly("n_max", &AdaptationConfig::n_max);

  py::class_<AdaptationState>(m, "AdaptationState")
      .def_readonly("enrichment_count", &AdaptationState::enrichment_count)
      .def_readonly("step_count", &AdaptationState::step_count)
      .def_readonly("stopped", &AdaptationState::stopped)
      .def_readonly("stop_reason", &AdaptationState::stop_reason);
  m.def("finite_adaptation_check", &finite_adaptation_check, py::arg("state"),
        py::arg("config"));

  py::class_<ChainRecord>(m, "ChainRecord")
      .def_property_readonly("dim", [](const ChainRecord& r) { return r.dim; })
      .def_property_readonly("algorithm", [](const ChainRecord& r) { return r.algorithm; })
      .def_property_readonly("final_basis_dim",
                             [](const ChainRecord& r) { return r.final_basis_dim; })
      .def_readonly("adaptation", &ChainRecord::adaptation)
      .def("samples_matrix", &ChainRecord::samples_matrix, py::arg("burn_in") = 0)
      .def("total_full_evals", &ChainRecord::total_full_evals)
      .def("total_reduced_evals", &ChainRecord::total_reduced_evals)
      .def("average_stage2_prob", &ChainRecord::average_stage2_prob,
           py::arg("burn_in") = 0)
      .def("eval_wall_seconds", &ChainRecord::eval_wall_seconds)
      .def("stage2_probs",
           [](const ChainRecord& r) {
             Vector v(r.steps.size());
             for (std::size_t i = 0; i < r.steps.size(); ++i) v[i] = r.steps[i].stage2_prob;
             return v;
           })
      .def("indicator_inf_norms",
           [](const ChainRecord& r) {
             Vector v(r.steps.size());
             for (std::size_t i = 0; i < r.steps.size(); ++i) v[i] = r.steps[i].indicator_inf;
             return v;
           })
      .def("save_csv", &ChainRecord::save_csv, py::arg("path"))
      .def("save_binary", &ChainRecord::save_binary, py::arg("path"))
      .def_static("load_binary", &ChainRecord::load_binary, py::arg("path"));

  m.def("run_chain",
        [](std::shared_ptr<Posterior> posterior, const Matrix& proposal_cov,
           double proposal_scale, const AdaptationConfig& adaptation,
           Algorithm algorithm, const Vector& x0, std::size_t steps,
           std::uint64_t seed) {
          ProposalConfig config;
          config.covariance = proposal_cov;
          config.scale = proposal_scale;
          config.provenance = "python";
          return run_chain(*posterior, GaussianProposal(config), adaptation,
                           algorithm, x0, steps, seed);
        },
        py::arg("posterior"), py::arg("proposal_cov"), py::arg("proposal_scale"),
        py::arg("adaptation"), py::arg("algorithm"), py::arg("x0"),
        py::arg("steps"), py::arg("seed"));

  m.def("iact", [](const Vector& series) {
    const IactResult r = iact(series);
    return py::make_tuple(r.value, r.degenerate);
  }, py::arg("series"));
  m.def("ess", [](const Matrix& samples) {
    const EssResult r = ess(samples);
    return py::make_tuple(r.per_component, r.min_ess, r.degenerate);
  }, py::arg("samples"));
  m.def("tightness", &tightness, py::arg("posterior_samples"), py::arg("prior"));
  m.def("hellinger_gaussian_1d", &hellinger_gaussian_1d, py::arg("mean1"),
        py::arg("std1"), py::arg("mean2"), py::arg("std2"));

  m.def("toy_quadrature",
        [](const ToyPosterior& toy, const Vector& lower, const Vector& upper,
           int points) {
          const ToyOracleResult r = toy_quadrature_oracle(
              [&toy](const Vector& x) { return toy.log_full_density(x); },
              [&toy](const Vector& x) { return toy.log_reduced_density(x); },
              static_cast<int>(lower.size()), lower, upper, points);
          py::dict out;
          out["z_full"] = r.z_full;
          out["z_reduced"] = r.z_reduced;
          out["hellinger"] = r.hellinger;
          out["mean_full"] = r.mean_full;
          out["cov_full"] = r.cov_full;
          out["mean_reduced"] = r.mean_reduced;
          return out;
        },
        py::arg("toy"), py::arg("lower"), py::arg("upper"), py::arg("points") = 401);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_static("parse", &ExperimentConfig::parse, py::arg("text"))
      .def_static("load", &ExperimentConfig::load, py::arg("path"))
      .def("emit", &ExperimentConfig::emit)
      .def("save", &ExperimentConfig::save, py::arg("path"))
      .def_readwrite("iterations", &ExperimentConfig::iterations)
      .def_readwrite("burn_in", &ExperimentConfig::burn_in)
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("output", &ExperimentConfig::output)
      .def_readwrite("mesh_nx", &ExperimentConfig::mesh_nx)
      .def_readwrite("mesh_ny", &ExperimentConfig::mesh_ny)
      .def_readwrite("snr", &ExperimentConfig::snr)
      .def_readwrite("epsilon", &ExperimentConfig::epsilon)
      .def_readwrite("pilot_steps", &ExperimentConfig::pilot_steps)
      .def_property("problem",
          [](const ExperimentConfig& c) { return problem_name(c.problem); },
          [](ExperimentConfig& c, const std::string& v) { c.problem = problem_from_name(v); })
      .def_property("algorithm",
          [](const ExperimentConfig& c) { return algorithm_name(c.algorithm); },
          [](ExperimentConfig& c, const std::string& v) { c.algorithm = algorithm_from_name(v); });

  m.def("run_experiment",
        [](const ExperimentConfig& config, bool resume) {
          const RunOutputs out = run_experiment(config, resume);
          py::dict d;
          d["directory"] = out.directory.string();
          d["steps"] = out.record.steps.size();
          d["final_basis_dim"] = out.record.final_basis_dim;
          d["full_evals"] = out.record.total_full_evals();
          if (!out.record.steps.empty()) {
            d["summary"] = summary_record_json(out.report);
          }
          return d;
        },
        py::arg("config"), py::arg("resume") = false);
}
