// pybind11 bindings exposing the main pipeline operations.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "ideq/denoiser.hpp"
#include "ideq/errors.hpp"
#include "ideq/exact.hpp"
#include "ideq/local_search.hpp"
#include "ideq/solver.hpp"
#include "ideq/tsplib.hpp"

namespace py = pybind11;
using namespace ideq;

namespace {

std::vector<std::vector<double>> field_to_matrix(const EdgeStateField& field) {
    std::vector<std::vector<double>> matrix(field.n(), std::vector<double>(field.n(), 0.0));
    for (int i = 0; i < field.n(); ++i)
        for (int j = 0; j < field.n(); ++j) matrix[i][j] = field.at(i, j);
    return matrix;
}

EdgeStateField matrix_to_field(const std::vector<std::vector<double>>& matrix,
                               EdgeStateField::Kind kind) {
    const int n = static_cast<int>(matrix.size());
    EdgeStateField field(n, kind);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(matrix[i].size()) != n)
            throw DimensionError("matrix must be square");
        for (int j = i + 1; j < n; ++j) field.set(i, j, matrix[i][j]);
    }
    return field;
}

ProjectionMode mode_from_string(const std::string& mode) {
    if (mode == "ideq") return ProjectionMode::ideq;
    if (mode == "decode2opt") return ProjectionMode::decode_only;
    if (mode == "threshold") return ProjectionMode::none;
    throw ConfigError("unknown projection mode '" + mode + "'");
}

py::dict result_to_dict(const SolveResult& result) {
    py::dict out;
    out["order"] = result.tour.order;
    out["length"] = result.length;
    out["round_lengths"] = result.round_lengths;
    out["seed"] = result.seed;
    out["wall_seconds"] = result.wall_seconds;
    return out;
}

SolveConfig build_config(const Checkpoint& checkpoint, int steps, int samples, int rounds,
                         double alpha, const std::string& mode, std::uint64_t seed) {
    SolveConfig config;
    config.schedule = make_schedule(checkpoint.params.t_max, checkpoint.config.beta_min,
                                    checkpoint.config.beta_max,
                                    std::min(steps, checkpoint.params.t_max),
                                    checkpoint.config.beta_curve);
    config.samples = samples;
    config.refinement_rounds = rounds;
    config.renoise_fraction = alpha;
    config.projection_mode = mode_from_string(mode);
    config.seed = seed;
    return config;
}

}  // namespace

PYBIND11_MODULE(_ideq, m) {
    m.doc() = "Discrete-diffusion TSP solver: instances, oracles, 2-opt, diffusion pipeline";

    py::register_exception<Error>(m, "IdeqError");

    py::class_<Instance>(m, "Instance")
        .def_property_readonly("id", &Instance::id)
        .def_property_readonly("n", &Instance::n)
        .def("dist", &Instance::dist, py::arg("i"), py::arg("j"))
        .def_property_readonly("coords",
                               [](const Instance& inst) {
                                   std::vector<std::pair<double, double>> out;
                                   for (const Point& p : inst.coords()) out.emplace_back(p.x, p.y);
                                   return out;
                               })
        .def("__repr__", [](const Instance& inst) {
            return "<Instance '" + inst.id() + "' n=" + std::to_string(inst.n()) + ">";
        });

    py::class_<Checkpoint>(m, "Checkpoint")
        .def_static("load", [](const std::string& path) { return load_checkpoint_file(path); },
                    py::arg("path"))
        .def("save", [](const Checkpoint& ck, const std::string& path) {
            save_checkpoint_file(ck, path);
        })
        .def_property_readonly("loss_curve", [](const Checkpoint& ck) { return ck.loss_curve; })
        .def_property_readonly("t_max", [](const Checkpoint& ck) { return ck.params.t_max; })
        .def_property_readonly("hidden", [](const Checkpoint& ck) { return ck.params.hidden; });

    m.def("generate_random_instance", &generate_random_instance, py::arg("n"), py::arg("seed"));
    m.def("parse_tsplib", py::overload_cast<const std::string&>(&tsplib::parse_tsplib),
          py::arg("text"), "Parse TSPLIB-format text into an Instance");
    m.def("load_tsplib", &tsplib::load_tsplib, py::arg("path"));

    m.def(
        "tour_length",
        [](const Instance& inst, const std::vector<int>& order) {
            return tour_length(inst, Tour{order});
        },
        py::arg("instance"), py::arg("order"));
    m.def(
        "optimality_gap",
        [](double found, double reference) { return optimality_gap(found, reference).gap; },
        py::arg("found_length"), py::arg("reference_length"));
    m.def(
        "tour_to_adjacency",
        [](const std::vector<int>& order) { return field_to_matrix(tour_to_adjacency(Tour{order})); },
        py::arg("order"));

    m.def(
        "brute_force",
        [](const Instance& inst) {
            const ExactResult result = brute_force(inst);
            return py::make_tuple(result.tour.order, result.length);
        },
        py::arg("instance"), "Exact optimum by pruned enumeration (n <= 11)");
    m.def(
        "held_karp",
        [](const Instance& inst) {
            const ExactResult result = held_karp(inst);
            return py::make_tuple(result.tour.order, result.length);
        },
        py::arg("instance"), "Exact optimum by subset DP (n <= 18)");

    m.def(
        "two_opt",
        [](const Instance& inst, const std::vector<int>& order) {
            return two_opt(inst, Tour{order}).order;
        },
        py::arg("instance"), py::arg("order"), "Best-improvement 2-opt to a fixed point");
    m.def(
        "is_two_opt_fixed_point",
        [](const Instance& inst, const std::vector<int>& order) {
            return is_two_opt_fixed_point(inst, Tour{order});
        },
        py::arg("instance"), py::arg("order"));
    m.def(
        "sample_equivalence_target",
        [](const std::vector<int>& order, std::uint64_t seed) {
            CounterRng rng(seed);
            return sample_equivalence_target(Tour{order}, rng).order;
        },
        py::arg("order"), py::arg("seed"),
        "Two random 2-changes applied to a tour (equivalence-class sample)");

    m.def(
        "reconstruct_hamiltonian",
        [](const Instance& inst, const std::vector<std::vector<double>>& heatmap) {
            return reconstruct_hamiltonian(inst, matrix_to_field(heatmap, EdgeStateField::Kind::soft))
                .order;
        },
        py::arg("instance"), py::arg("heatmap"),
        "Greedy edge-insertion decoding of a heatmap into a tour");

    m.def(
        "train_checkpoint",
        [](const std::vector<std::pair<Instance, std::vector<int>>>& dataset, int n,
           const std::string& mode, int epochs, int batch_size, double learning_rate,
           double momentum, std::uint64_t seed, int T, double beta_min, double beta_max,
           int hidden) {
            TrainingConfig config;
            config.target_mode = mode == "equivalence"
                                     ? TrainingConfig::TargetMode::equivalence_class
                                     : TrainingConfig::TargetMode::dirac;
            config.n = n;
            config.epochs = epochs;
            config.batch_size = batch_size;
            config.learning_rate = learning_rate;
            config.momentum = momentum;
            config.seed = seed;
            config.T = T;
            config.beta_min = beta_min;
            config.beta_max = beta_max;
            config.hidden = hidden;
            std::vector<std::pair<Instance, Tour>> labelled;
            labelled.reserve(dataset.size());
            for (const auto& [inst, order] : dataset) labelled.emplace_back(inst, Tour{order});
            return train(config, labelled);
        },
        py::arg("dataset"), py::arg("n"), py::arg("mode") = "dirac", py::arg("epochs") = 50,
        py::arg("batch_size") = 8, py::arg("learning_rate") = 0.1, py::arg("momentum") = 0.9,
        py::arg("seed") = 0, py::arg("T") = 50, py::arg("beta_min") = 0.015,
        py::arg("beta_max") = 0.25, py::arg("hidden") = 16,
        "Train a denoiser on (instance, tour) pairs");

    m.def(
        "solve",
        [](const Instance& inst, const Checkpoint& checkpoint, std::uint64_t seed, int samples,
           int rounds, double alpha, int steps, const std::string& mode) {
            return result_to_dict(
                solve(inst, checkpoint, build_config(checkpoint, steps, samples, rounds, alpha,
                                                     mode, seed)));
        },
        py::arg("instance"), py::arg("checkpoint"), py::arg("seed") = 0, py::arg("samples") = 1,
        py::arg("rounds") = 3, py::arg("alpha") = 0.15, py::arg("steps") = 10,
        py::arg("mode") = "ideq", "Run the diffusion solver with a trained checkpoint");

    m.def(
        "solve_with_oracle",
        [](const Instance& inst, const std::vector<int>& optimal, std::uint64_t seed, int rounds,
           int steps) {
            const DiffusionSchedule schedule = make_schedule(50, 0.015, 0.25, std::min(steps, 50));
            SolveConfig config;
            config.schedule = schedule;
            config.refinement_rounds = rounds;
            config.seed = seed;
            const OracleDenoiser oracle(Tour{optimal}, 50);
            return result_to_dict(solve(inst, oracle, config));
        },
        py::arg("instance"), py::arg("optimal_order"), py::arg("seed") = 0, py::arg("rounds") = 2,
        py::arg("steps") = 10, "Run the pipeline with a perfect denoiser (testing aid)");

    m.attr("__version__") = "0.1.0";
}
