// Command-line front end: instance generation, exact solving, training,
// diffusion solving, benchmarking with variance statistics, and the
// checkpoint/projection ablation grid.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ideq/bench.hpp"
#include "ideq/denoiser.hpp"
#include "ideq/errors.hpp"
#include "ideq/exact.hpp"
#include "ideq/local_search.hpp"
#include "ideq/solver.hpp"
#include "ideq/tsplib.hpp"

namespace fs = std::filesystem;
using namespace ideq;

namespace {

struct ScheduleFlags {
    int T = 50;
    double beta_min = 0.015;
    double beta_max = 0.25;
    int steps = 10;
};

struct SolveFlags {
    int samples = 1;
    int rounds = 3;
    double alpha = 0.15;
    std::string mode = "ideq";
};

ProjectionMode parse_mode(const std::string& mode) {
    if (mode == "ideq") return ProjectionMode::ideq;
    if (mode == "decode2opt") return ProjectionMode::decode_only;
    if (mode == "threshold") return ProjectionMode::none;
    throw ConfigError("unknown projection mode '" + mode + "'");
}

std::vector<Instance> load_instance_set(const std::string& dir,
                                        const std::vector<std::string>& files) {
    std::vector<std::string> paths = files;
    if (!dir.empty()) {
        for (const auto& entry : fs::directory_iterator(dir))
            if (entry.is_regular_file() && entry.path().extension() == ".tsp")
                paths.push_back(entry.path().string());
    }
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) throw ConfigError("no .tsp inputs given (use --in or --tsplib)");

    std::vector<Instance> instances;
    instances.reserve(paths.size());
    for (const std::string& path : paths) {
        std::cerr << "[load] " << path << "\n";
        instances.push_back(tsplib::load_tsplib(path));
    }
    return instances;
}

/// Reference length per instance: --ref CSV by instance id, else the exact
/// oracle when the instance is small enough, else missing (NaN).
std::vector<double> resolve_references(const std::vector<Instance>& instances,
                                       const std::string& ref_csv) {
    std::map<std::string, double> from_csv;
    if (!ref_csv.empty()) {
        std::ifstream in(ref_csv);
        if (!in) throw Error("cannot open reference CSV '" + ref_csv + "'");
        std::string header;
        std::getline(in, header);
        // Accept both the bundled reference schema and the BenchRow schema:
        // the instance id is the first field, the reference length the third.
        std::string line;
        int line_number = 1;
        while (std::getline(in, line)) {
            ++line_number;
            if (line.empty()) continue;
            std::istringstream row(line);
            std::string id, n_field, ref_field;
            if (!std::getline(row, id, ',') || !std::getline(row, n_field, ',') ||
                !std::getline(row, ref_field, ','))
                throw ParseError("bad reference row", line_number);
            from_csv[id] = std::stod(ref_field);
        }
    }

    std::vector<double> references;
    references.reserve(instances.size());
    for (const Instance& inst : instances) {
        if (auto it = from_csv.find(inst.id()); it != from_csv.end()) {
            references.push_back(it->second);
        } else if (inst.n() <= kHeldKarpMaxN) {
            references.push_back(held_karp(inst).length);
        } else {
            std::cerr << "[ref] no reference for '" << inst.id() << "' (n=" << inst.n() << ")\n";
            references.push_back(std::numeric_limits<double>::quiet_NaN());
        }
    }
    return references;
}

void emit_rows(const std::vector<BenchRow>& rows, const std::string& out_path,
               const std::string& json_path) {
    if (out_path.empty()) {
        tsplib::write_report_csv(rows, std::cout);
    } else {
        std::ofstream out(out_path);
        if (!out) throw Error("cannot open '" + out_path + "' for writing");
        tsplib::write_report_csv(rows, out);
        std::cerr << "[out] " << rows.size() << " rows -> " << out_path << "\n";
    }
    if (!json_path.empty()) {
        std::ofstream json(json_path);
        if (!json) throw Error("cannot open '" + json_path + "' for writing");
        json << tsplib::summary_json(rows) << "\n";
        std::cerr << "[out] summary -> " << json_path << "\n";
    }
}

/// Expands `--config FILE` (key=value lines, # comments) into `--key=value`
/// tokens appended after the explicit arguments; keys already given on the
/// command line keep their explicit values.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    const auto config_at = std::find(args.begin(), args.end(), "--config");
    if (config_at == args.end()) return args;
    if (std::next(config_at) == args.end()) throw ConfigError("--config needs a file path");
    const std::string path = *std::next(config_at);

    std::ifstream in(path);
    if (!in) throw Error("cannot open config file '" + path + "'");
    const auto trim = [](const std::string& s) {
        const auto begin = s.find_first_not_of(" \t\r");
        if (begin == std::string::npos) return std::string();
        return s.substr(begin, s.find_last_not_of(" \t\r") - begin + 1);
    };
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#' || text[0] == '[') continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected key=value in config", line_number);
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        const std::string flag = "--" + key;
        const bool overridden = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
            return a == flag || a.rfind(flag + "=", 0) == 0;
        });
        if (!overridden) args.push_back(flag + "=" + value);
    }
    return args;
}

Tour random_tour_for(const Instance& instance, CounterRng& rng) {
    Tour tour;
    tour.order.resize(instance.n());
    for (int i = 0; i < instance.n(); ++i) tour.order[i] = i;
    for (int k = instance.n(); k > 1; --k)
        std::swap(tour.order[k - 1], tour.order[rng.next_below(static_cast<std::uint64_t>(k))]);
    return tour;
}

Tour label_tour(const Instance& instance, const std::string& labels, int restarts,
                CounterRng& rng) {
    if (labels == "exact" && instance.n() <= kHeldKarpMaxN) return held_karp(instance).tour;
    Tour best;
    double best_length = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        Tour candidate = two_opt(instance, random_tour_for(instance, rng));
        const double length = tour_length(instance, candidate);
        if (length < best_length) {
            best_length = length;
            best = std::move(candidate);
        }
    }
    return best;
}

int run_gen(int n, int count, std::uint64_t seed, const std::string& out_dir,
            const std::string& prefix) {
    fs::create_directories(out_dir);
    CounterRng root(seed);
    for (int k = 0; k < count; ++k) {
        const std::uint64_t instance_seed = root.derive(static_cast<std::uint64_t>(k)).key();
        const Instance inst = generate_random_instance(n, instance_seed);
        const std::string name =
            prefix + "-n" + std::to_string(n) + "-s" + std::to_string(seed) + "-i" + std::to_string(k);
        const fs::path path = fs::path(out_dir) / (name + ".tsp");
        std::ofstream out(path);
        if (!out) throw Error("cannot open '" + path.string() + "' for writing");
        out << "NAME : " << name << "\n";
        out << "TYPE : TSP\n";
        out << "DIMENSION : " << n << "\n";
        out << "EDGE_WEIGHT_TYPE : EUC_2D\n";
        out << "NODE_COORD_SECTION\n";
        char line[96];
        for (int i = 0; i < n; ++i) {
            std::snprintf(line, sizeof(line), "%d %.17g %.17g\n", i + 1, inst.coords()[i].x,
                          inst.coords()[i].y);
            out << line;
        }
        out << "EOF\n";
        std::cerr << "[gen] " << path.string() << "\n";
    }
    return 0;
}

int run_exact(const std::string& in_dir, const std::vector<std::string>& files,
              const std::string& method, const std::string& out_path,
              const std::string& json_path, bool zero_time) {
    const std::vector<Instance> instances = load_instance_set(in_dir, files);
    std::vector<BenchRow> rows;
    for (const Instance& inst : instances) {
        const auto started = std::chrono::steady_clock::now();
        ExactResult result;
        std::string used = method;
        if (method == "auto") used = inst.n() <= kBruteForceMaxN ? "brute-force" : "held-karp";
        if (used == "brute-force") result = brute_force(inst);
        else if (used == "held-karp") result = held_karp(inst);
        else throw ConfigError("unknown method '" + method + "'");
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        rows.push_back({inst.id(), inst.n(), used, result.length, result.length, 0.0,
                        zero_time ? 0.0 : seconds, 0});
    }
    emit_rows(rows, out_path, json_path);
    return 0;
}

int run_train(int n, int count, std::uint64_t seed, const std::string& mode,
              const std::string& labels, int label_restarts, const ScheduleFlags& schedule,
              int epochs, int batch, double lr, double momentum, int hidden,
              const std::string& redraw, const std::string& beta_curve,
              const std::string& init_path, const std::string& out_path) {
    TrainingConfig config;
    config.target_mode = mode == "equivalence" ? TrainingConfig::TargetMode::equivalence_class
                                               : TrainingConfig::TargetMode::dirac;
    if (mode != "dirac" && mode != "equivalence")
        throw ConfigError("unknown training mode '" + mode + "'");
    config.equivalence_redraw = redraw == "per-step" ? TrainingConfig::RedrawPolicy::per_step
                                                     : TrainingConfig::RedrawPolicy::per_epoch;
    config.n = n;
    config.epochs = epochs;
    config.batch_size = batch;
    config.learning_rate = lr;
    config.momentum = momentum;
    config.seed = seed;
    config.T = schedule.T;
    config.beta_min = schedule.beta_min;
    config.beta_max = schedule.beta_max;
    if (beta_curve == "cosine") config.beta_curve = DiffusionSchedule::BetaCurve::cosine;
    else if (beta_curve != "linear") throw ConfigError("unknown beta curve '" + beta_curve + "'");
    config.hidden = hidden;

    CounterRng root(seed);
    CounterRng data_rng = root.derive(100);
    CounterRng label_rng = root.derive(101);
    std::vector<std::pair<Instance, Tour>> dataset;
    dataset.reserve(count);
    for (int k = 0; k < count; ++k) {
        Instance inst = generate_random_instance(n, data_rng.next_u64());
        Tour label = label_tour(inst, labels, label_restarts, label_rng);
        dataset.emplace_back(std::move(inst), std::move(label));
    }
    std::cerr << "[train] dataset ready: " << count << " instances of n=" << n << "\n";

    Checkpoint init;
    const Checkpoint* init_ptr = nullptr;
    if (!init_path.empty()) {
        init = load_checkpoint_file(init_path);
        init_ptr = &init;
        std::cerr << "[train] initialized from " << init_path << "\n";
    }

    const Checkpoint checkpoint = train(config, dataset, init_ptr);
    std::cerr << "[train] loss " << checkpoint.loss_curve.front() << " -> "
              << checkpoint.loss_curve.back() << " over " << epochs << " epochs ("
              << checkpoint.wall_seconds << "s)\n";
    save_checkpoint_file(checkpoint, out_path);
    std::cerr << "[train] checkpoint -> " << out_path << "\n";
    return 0;
}

SolveConfig make_solve_config(const Checkpoint& checkpoint, const ScheduleFlags& schedule,
                              const SolveFlags& flags) {
    SolveConfig config;
    const int T = checkpoint.params.t_max;
    config.schedule = make_schedule(T, checkpoint.config.beta_min, checkpoint.config.beta_max,
                                    std::min(schedule.steps, T), checkpoint.config.beta_curve);
    config.samples = flags.samples;
    config.refinement_rounds = flags.rounds;
    config.renoise_fraction = flags.alpha;
    config.projection_mode = parse_mode(flags.mode);
    return config;
}

int run_solve(const std::string& in_dir, const std::vector<std::string>& files,
              const std::string& checkpoint_path, const ScheduleFlags& schedule,
              const SolveFlags& flags, std::uint64_t seed, const std::string& ref_csv,
              const std::string& out_path, const std::string& json_path, bool zero_time) {
    const std::vector<Instance> instances = load_instance_set(in_dir, files);
    const std::vector<double> references = resolve_references(instances, ref_csv);
    const Checkpoint checkpoint = load_checkpoint_file(checkpoint_path);
    SolveConfig config = make_solve_config(checkpoint, schedule, flags);

    const std::string method =
        flags.mode + (flags.samples > 1 ? "-x" + std::to_string(flags.samples) : "");
    std::vector<BenchRow> rows;
    const CounterRng master(seed);
    for (std::size_t k = 0; k < instances.size(); ++k) {
        config.seed = master.derive(k).key();
        const SolveResult result = solve(instances[k], checkpoint, config);
        BenchRow row{instances[k].id(),
                     instances[k].n(),
                     method,
                     result.length,
                     0.0,
                     0.0,
                     zero_time ? 0.0 : result.wall_seconds,
                     config.seed};
        if (std::isfinite(references[k]) && references[k] > 0.0) {
            row.ref_length = references[k];
            row.gap = optimality_gap(result.length, references[k]).gap;
        } else {
            row.ref_length = std::numeric_limits<double>::quiet_NaN();
            row.gap = std::numeric_limits<double>::quiet_NaN();
        }
        std::cerr << "[solve] " << instances[k].id() << " length " << result.length << "\n";
        rows.push_back(std::move(row));
    }
    emit_rows(rows, out_path, json_path);
    return 0;
}

int run_bench(const std::string& in_dir, const std::vector<std::string>& files,
              const std::string& checkpoint_path, const std::string& modes_csv, int reps,
              std::uint64_t seed, int threads, const ScheduleFlags& schedule,
              const SolveFlags& flags, const std::string& ref_csv, const std::string& out_path,
              const std::string& json_path, bool zero_time) {
    const std::vector<Instance> instances = load_instance_set(in_dir, files);
    const std::vector<double> references = resolve_references(instances, ref_csv);

    Checkpoint checkpoint;
    bool have_checkpoint = false;
    if (!checkpoint_path.empty()) {
        checkpoint = load_checkpoint_file(checkpoint_path);
        have_checkpoint = true;
    }

    std::vector<MethodConfig> methods;
    std::istringstream mode_stream(modes_csv);
    std::string mode;
    while (std::getline(mode_stream, mode, ',')) {
        if (mode == "2opt") {
            MethodConfig m;
            m.name = "2opt-random";
            m.kind = MethodConfig::Kind::two_opt_random;
            methods.push_back(std::move(m));
            continue;
        }
        if (!have_checkpoint)
            throw ConfigError("mode '" + mode + "' needs --checkpoint");
        MethodConfig m;
        m.name = mode;
        m.kind = MethodConfig::Kind::solver;
        m.checkpoint = &checkpoint;
        SolveFlags mode_flags = flags;
        mode_flags.mode = mode;
        m.solve_config = make_solve_config(checkpoint, schedule, mode_flags);
        methods.push_back(std::move(m));
    }
    if (methods.empty()) throw ConfigError("no methods selected");

    BenchOptions options;
    options.repetitions = reps;
    options.seed = seed;
    options.threads = threads;
    options.zero_time = zero_time;
    const BenchOutput output = run_benchmark(instances, references, methods, options);
    for (const std::string& error : output.errors) std::cerr << "[bench] error: " << error << "\n";
    std::cerr << "[bench] " << output.rows.size() << " cells done\n";
    emit_rows(output.rows, out_path, json_path);
    return 0;
}

int run_ablate_cmd(const std::string& in_dir, const std::vector<std::string>& files,
                   const std::string& dirac_path, const std::string& equiv_path, int reps,
                   std::uint64_t seed, int threads, const ScheduleFlags& schedule,
                   const SolveFlags& flags, const std::string& ref_csv,
                   const std::string& out_path, const std::string& json_path, bool zero_time) {
    const std::vector<Instance> instances = load_instance_set(in_dir, files);
    const std::vector<double> references = resolve_references(instances, ref_csv);
    const Checkpoint dirac = load_checkpoint_file(dirac_path);
    const Checkpoint equivalence = load_checkpoint_file(equiv_path);

    const SolveConfig base = make_solve_config(dirac, schedule, flags);
    BenchOptions options;
    options.repetitions = reps;
    options.seed = seed;
    options.threads = threads;
    options.zero_time = zero_time;
    const BenchOutput output = run_ablation(instances, references, dirac, equivalence, base, options);
    for (const std::string& error : output.errors) std::cerr << "[ablate] error: " << error << "\n";
    emit_rows(output.rows, out_path, json_path);
    return 0;
}

int run_variance(const std::string& in_dir, const std::vector<std::string>& files,
                 const std::string& checkpoint_path, int reps, std::uint64_t seed, int threads,
                 const ScheduleFlags& schedule, const SolveFlags& flags,
                 const std::string& ref_csv, const std::string& out_path,
                 const std::string& hist_path, const std::string& json_path,
                 const std::string& rows_path, bool zero_time) {
    const std::vector<Instance> instances = load_instance_set(in_dir, files);
    const std::vector<double> references = resolve_references(instances, ref_csv);
    const Checkpoint checkpoint = load_checkpoint_file(checkpoint_path);

    MethodConfig method;
    method.name = flags.mode;
    method.kind = MethodConfig::Kind::solver;
    method.checkpoint = &checkpoint;
    method.solve_config = make_solve_config(checkpoint, schedule, flags);

    BenchOptions options;
    options.repetitions = reps;
    options.seed = seed;
    options.threads = threads;
    options.zero_time = zero_time;
    const BenchOutput output = run_benchmark(instances, references, {method}, options);
    for (const std::string& error : output.errors)
        std::cerr << "[variance] error: " << error << "\n";

    // Per-instance mean/std table.
    std::ostringstream table;
    table << "instance,n,method,mean_gap_pct,std_gap_pct,repetitions\n";
    char line[256];
    for (const auto& [name, report] : output.variance)
        for (const auto& entry : report.per_instance) {
            int n = 0;
            for (const Instance& inst : instances)
                if (inst.id() == entry.instance_id) n = inst.n();
            std::snprintf(line, sizeof(line), "%s,%d,%s,%.17g,%.17g,%d\n",
                          entry.instance_id.c_str(), n, name.c_str(), entry.mean_gap * 100.0,
                          entry.std_gap * 100.0, entry.repetitions);
            table << line;
        }
    if (out_path.empty()) {
        std::cout << table.str();
    } else {
        std::ofstream out(out_path);
        if (!out) throw Error("cannot open '" + out_path + "'");
        out << table.str();
        std::cerr << "[variance] table -> " << out_path << "\n";
    }

    if (!hist_path.empty()) {
        std::vector<double> gaps;
        for (const BenchRow& row : output.rows)
            if (std::isfinite(row.gap)) gaps.push_back(row.gap * 100.0);
        std::ofstream hist(hist_path);
        if (!hist) throw Error("cannot open '" + hist_path + "'");
        hist << histogram_csv(gaps, 32);
        std::cerr << "[variance] histogram -> " << hist_path << "\n";
    }
    if (!json_path.empty()) {
        std::ofstream json(json_path);
        if (!json) throw Error("cannot open '" + json_path + "'");
        json << tsplib::summary_json(output.rows) << "\n";
    }
    if (!rows_path.empty()) {
        std::ofstream rows(rows_path);
        if (!rows) throw Error("cannot open '" + rows_path + "'");
        tsplib::write_report_csv(output.rows, rows);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"IDEQ: discrete-diffusion TSP solver with Hamiltonian projection and 2-opt"};
    app.require_subcommand(1);

    // Every subcommand accepts --config (handled by expand_config below).
    const auto add_config = [](CLI::App* cmd) {
        cmd->add_option("--config", "Read options from a key=value file; explicit flags win")
            ->check(CLI::ExistingFile);
    };

    // gen
    auto* gen = app.add_subcommand("gen", "Generate random instances as .tsp files");
    add_config(gen);
    int gen_n = 20, gen_count = 1;
    std::uint64_t gen_seed = 0;
    std::string gen_out = ".", gen_prefix = "rand";
    gen->add_option("--n", gen_n, "Cities per instance")->check(CLI::Range(3, 100000));
    gen->add_option("--count", gen_count, "Number of instances");
    gen->add_option("--seed", gen_seed, "Master seed");
    gen->add_option("--out", gen_out, "Output directory");
    gen->add_option("--prefix", gen_prefix, "Instance name prefix");

    // shared flags factories
    const auto add_inputs = [](CLI::App* cmd, std::string* dir, std::vector<std::string>* files) {
        cmd->add_option("--in", *dir, "Directory of .tsp files");
        cmd->add_option("--tsplib", *files, "Individual .tsp files");
    };
    const auto add_outputs = [](CLI::App* cmd, std::string* out, std::string* json) {
        cmd->add_option("--out", *out, "CSV output file (default: stdout)");
        cmd->add_option("--json", *json, "JSON summary file");
    };
    const auto add_solver_flags = [](CLI::App* cmd, ScheduleFlags* sched, SolveFlags* flags) {
        cmd->add_option("--steps", sched->steps, "Inference timesteps")->check(CLI::Range(1, 100000));
        cmd->add_option("--samples", flags->samples, "Independent replicas, best kept");
        cmd->add_option("--rounds", flags->rounds, "Refinement rounds");
        cmd->add_option("--alpha", flags->alpha, "Re-noise fraction in (0,1)");
        cmd->add_option("--mode", flags->mode, "Projection: ideq | decode2opt | threshold");
    };

    // exact
    auto* exact = app.add_subcommand("exact", "Solve instances exactly (oracle)");
    add_config(exact);
    std::string exact_dir, exact_method = "auto", exact_out, exact_json;
    std::vector<std::string> exact_files;
    bool exact_zero_time = false;
    add_inputs(exact, &exact_dir, &exact_files);
    exact->add_option("--method", exact_method, "auto | brute-force | held-karp");
    add_outputs(exact, &exact_out, &exact_json);
    exact->add_flag("--zero-time", exact_zero_time, "Write 0 in the seconds column");

    // train
    auto* train_cmd = app.add_subcommand("train", "Train a denoiser checkpoint");
    add_config(train_cmd);
    int train_n = 20, train_count = 200, train_epochs = 150, train_batch = 8, train_hidden = 16;
    int train_restarts = 64;
    std::uint64_t train_seed = 0;
    double train_lr = 0.2, train_momentum = 0.9;
    std::string train_mode = "dirac", train_labels = "2opt", train_redraw = "per-epoch";
    std::string train_beta_curve = "linear";
    std::string train_init, train_out = "checkpoint.bin";
    ScheduleFlags train_schedule;
    train_cmd->add_option("--n", train_n, "Instance size")->check(CLI::Range(5, 10000));
    train_cmd->add_option("--count", train_count, "Dataset size");
    train_cmd->add_option("--seed", train_seed, "Training seed");
    train_cmd->add_option("--mode", train_mode, "dirac | equivalence");
    train_cmd->add_option("--labels", train_labels, "exact | 2opt (best-of-K restarts)");
    train_cmd->add_option("--label-restarts", train_restarts, "K for 2opt labels");
    train_cmd->add_option("--epochs", train_epochs, "Training epochs");
    train_cmd->add_option("--batch", train_batch, "Batch size");
    train_cmd->add_option("--lr", train_lr, "Learning rate");
    train_cmd->add_option("--momentum", train_momentum, "SGD momentum");
    train_cmd->add_option("--hidden", train_hidden, "Hidden width")->check(CLI::Range(2, 64));
    train_cmd->add_option("--T", train_schedule.T, "Diffusion steps");
    train_cmd->add_option("--beta-min", train_schedule.beta_min, "Schedule beta_min");
    train_cmd->add_option("--beta-max", train_schedule.beta_max, "Schedule beta_max");
    train_cmd->add_option("--beta-curve", train_beta_curve, "linear | cosine");
    train_cmd->add_option("--redraw", train_redraw, "per-epoch | per-step (equivalence mode)");
    train_cmd->add_option("--init", train_init, "Checkpoint to fine-tune from")
        ->check(CLI::ExistingFile);
    train_cmd->add_option("--out", train_out, "Checkpoint output path");

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "Run the diffusion solver");
    add_config(solve_cmd);
    std::string solve_dir, solve_ckpt, solve_ref, solve_out, solve_json;
    std::vector<std::string> solve_files;
    std::uint64_t solve_seed = 0;
    bool solve_zero_time = false;
    ScheduleFlags solve_schedule;
    SolveFlags solve_flags;
    add_inputs(solve_cmd, &solve_dir, &solve_files);
    solve_cmd->add_option("--checkpoint", solve_ckpt, "Trained checkpoint")
        ->required()
        ->check(CLI::ExistingFile);
    solve_cmd->add_option("--seed", solve_seed, "Master seed");
    solve_cmd->add_option("--ref", solve_ref, "Reference lengths CSV")->check(CLI::ExistingFile);
    add_solver_flags(solve_cmd, &solve_schedule, &solve_flags);
    add_outputs(solve_cmd, &solve_out, &solve_json);
    solve_cmd->add_flag("--zero-time", solve_zero_time, "Write 0 in the seconds column");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Benchmark methods over an instance set");
    add_config(bench_cmd);
    std::string bench_dir, bench_ckpt, bench_ref, bench_out, bench_json;
    std::string bench_modes = "2opt,ideq";
    std::vector<std::string> bench_files;
    int bench_reps = 1, bench_threads = 0;
    std::uint64_t bench_seed = 0;
    bool bench_zero_time = false;
    ScheduleFlags bench_schedule;
    SolveFlags bench_flags;
    add_inputs(bench_cmd, &bench_dir, &bench_files);
    bench_cmd->add_option("--checkpoint", bench_ckpt, "Trained checkpoint")
        ->check(CLI::ExistingFile);
    bench_cmd->add_option("--methods", bench_modes,
                          "Comma list from {2opt, ideq, decode2opt, threshold}");
    bench_cmd->add_option("--reps", bench_reps, "Repetitions per cell");
    bench_cmd->add_option("--seed", bench_seed, "Master seed");
    bench_cmd->add_option("--threads", bench_threads, "Worker threads (default: IDEQ_THREADS or cores)");
    bench_cmd->add_option("--ref", bench_ref, "Reference lengths CSV")->check(CLI::ExistingFile);
    add_solver_flags(bench_cmd, &bench_schedule, &bench_flags);
    add_outputs(bench_cmd, &bench_out, &bench_json);
    bench_cmd->add_flag("--zero-time", bench_zero_time, "Write 0 in the seconds column");

    // ablate
    auto* ablate_cmd = app.add_subcommand("ablate", "Checkpoint x projection ablation grid");
    add_config(ablate_cmd);
    std::string ablate_dir, ablate_dirac, ablate_equiv, ablate_ref, ablate_out, ablate_json;
    std::vector<std::string> ablate_files;
    int ablate_reps = 1, ablate_threads = 0;
    std::uint64_t ablate_seed = 0;
    bool ablate_zero_time = false;
    ScheduleFlags ablate_schedule;
    SolveFlags ablate_flags;
    add_inputs(ablate_cmd, &ablate_dir, &ablate_files);
    ablate_cmd->add_option("--dirac", ablate_dirac, "Dirac-trained checkpoint")
        ->required()
        ->check(CLI::ExistingFile);
    ablate_cmd->add_option("--equiv", ablate_equiv, "Equivalence-class checkpoint")
        ->required()
        ->check(CLI::ExistingFile);
    ablate_cmd->add_option("--reps", ablate_reps, "Repetitions per cell");
    ablate_cmd->add_option("--seed", ablate_seed, "Master seed");
    ablate_cmd->add_option("--threads", ablate_threads, "Worker threads");
    ablate_cmd->add_option("--ref", ablate_ref, "Reference lengths CSV")->check(CLI::ExistingFile);
    add_solver_flags(ablate_cmd, &ablate_schedule, &ablate_flags);
    add_outputs(ablate_cmd, &ablate_out, &ablate_json);
    ablate_cmd->add_flag("--zero-time", ablate_zero_time, "Write 0 in the seconds column");

    // variance
    auto* variance_cmd = app.add_subcommand("variance", "Repeated-solve variance analysis");
    add_config(variance_cmd);
    std::string var_dir, var_ckpt, var_ref, var_out, var_hist, var_json, var_rows;
    std::vector<std::string> var_files;
    int var_reps = 32, var_threads = 0;
    std::uint64_t var_seed = 0;
    bool var_zero_time = false;
    ScheduleFlags var_schedule;
    SolveFlags var_flags;
    add_inputs(variance_cmd, &var_dir, &var_files);
    variance_cmd->add_option("--checkpoint", var_ckpt, "Trained checkpoint")
        ->required()
        ->check(CLI::ExistingFile);
    variance_cmd->add_option("--reps", var_reps, "Repetitions per instance");
    variance_cmd->add_option("--seed", var_seed, "Master seed");
    variance_cmd->add_option("--threads", var_threads, "Worker threads");
    variance_cmd->add_option("--ref", var_ref, "Reference lengths CSV")->check(CLI::ExistingFile);
    add_solver_flags(variance_cmd, &var_schedule, &var_flags);
    variance_cmd->add_option("--out", var_out, "Per-instance mean/std CSV (default: stdout)");
    variance_cmd->add_option("--hist", var_hist, "Gap histogram CSV");
    variance_cmd->add_option("--json", var_json, "JSON summary file");
    variance_cmd->add_option("--rows", var_rows, "Raw per-repetition rows CSV");
    variance_cmd->add_flag("--zero-time", var_zero_time, "Write 0 in the seconds column");

    try {
        std::vector<std::string> args = expand_config(argc, argv);
        std::reverse(args.begin(), args.end());  // CLI11's vector parse pops from the back
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
            e.get_name() == "CallForVersion")
            return app.exit(e);
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 2;
    }

    try {
        if (gen->parsed()) return run_gen(gen_n, gen_count, gen_seed, gen_out, gen_prefix);
        if (exact->parsed())
            return run_exact(exact_dir, exact_files, exact_method, exact_out, exact_json,
                             exact_zero_time);
        if (train_cmd->parsed())
            return run_train(train_n, train_count, train_seed, train_mode, train_labels,
                             train_restarts, train_schedule, train_epochs, train_batch, train_lr,
                             train_momentum, train_hidden, train_redraw, train_beta_curve,
                             train_init, train_out);
        if (solve_cmd->parsed())
            return run_solve(solve_dir, solve_files, solve_ckpt, solve_schedule, solve_flags,
                             solve_seed, solve_ref, solve_out, solve_json, solve_zero_time);
        if (bench_cmd->parsed())
            return run_bench(bench_dir, bench_files, bench_ckpt, bench_modes, bench_reps,
                             bench_seed, bench_threads, bench_schedule, bench_flags, bench_ref,
                             bench_out, bench_json, bench_zero_time);
        if (ablate_cmd->parsed())
            return run_ablate_cmd(ablate_dir, ablate_files, ablate_dirac, ablate_equiv,
                                  ablate_reps, ablate_seed, ablate_threads, ablate_schedule,
                                  ablate_flags, ablate_ref, ablate_out, ablate_json,
                                  ablate_zero_time);
        if (variance_cmd->parsed())
            return run_variance(var_dir, var_files, var_ckpt, var_reps, var_seed, var_threads,
                                var_schedule, var_flags, var_ref, var_out, var_hist, var_json,
                                var_rows, var_zero_time);
    } catch (const Error& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 1;
    } catch (const std::exception& error) {
        std::cerr << "unexpected error: " << error.what() << "\n";
        return 1;
    }
    return 2;
}
