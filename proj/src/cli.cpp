#include "eigenemo/cli.hpp"

#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "eigenemo/dmd.hpp"
#include "eigenemo/errors.hpp"
#include "eigenemo/experiment.hpp"
#include "eigenemo/io.hpp"
#include "eigenemo/method.hpp"
#include "eigenemo/parallel.hpp"
#include "eigenemo/report.hpp"
#include "eigenemo/synth.hpp"

namespace eigenemo::cli {

namespace {

void emit(std::string_view level, std::string_view kind, std::string_view message) {
    nlohmann::json j{{level, kind}, {"message", message}};
    std::cerr << j.dump() << '\n';
}

struct SynthArgs {
    std::string config;
    std::string out_eep;
    std::string out_bep;
    std::optional<std::uint64_t> seed;
    std::size_t jobs = 1;
};

struct SummarizeArgs {
    std::string method;
    std::string powers = "1";
    std::size_t k = 1;
    std::string d = "1";
    std::string input;
    std::string output;
    std::string kind;
    std::size_t jobs = 1;
};

struct EvalArgs {
    std::string grid;
    std::string eep;
    std::string bep;
    std::string out;
    std::string table;
    std::string confusion_csv;
    std::optional<std::uint64_t> seed;
    std::size_t jobs = 1;
};

struct ReportArgs {
    std::string input;
    std::string out;
    std::string confusion_csv;
};

void run_synth(const SynthArgs& a) {
    synth::SynthConfig cfg =
        a.config.empty() ? synth::default_benchmark() : synth::config_from_json(io::read_file(a.config));
    if (a.seed) cfg.seed = *a.seed;
    const auto data = synth::generate(cfg, a.jobs);
    save_dataset(data.eep, a.out_eep);
    save_dataset(data.bep, a.out_bep);
}

void run_summarize(const SummarizeArgs& a) {
    MethodSpec spec;
    spec.method = parse_method(a.method);
    if (spec.method == Method::PMeans) {
        spec.pmeans.powers.clear();
        for (auto p : parse_index_list(a.powers)) spec.pmeans.powers.push_back(static_cast<int>(p));
    }
    spec.dct.k = a.k;
    if (spec.method == Method::Dmd) spec.d_set = dmd::make_order_set(parse_index_list(a.d));
    spec.check();

    const EpKind kind = a.kind.empty() ? detect_kind(a.input) : parse_ep_kind(a.kind);
    const Dataset data = load_dataset(a.input, kind);

    std::vector<std::optional<Representation>> slots(data.size());
    parallel_for(data.size(), a.jobs, [&](std::size_t i) {
        const auto& seq = data.sequences[i];
        if (seq.length() < spec.min_frames()) return;
        slots[i] = summarize_sequence(seq, spec);
    });
    std::vector<Representation> reps;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i]) {
            reps.push_back(std::move(*slots[i]));
        } else {
            emit("warning", "skipped", "utterance '" + data.sequences[i].id + "' has N=" +
                                           std::to_string(data.sequences[i].length()) +
                                           " frames, too short for " + spec.descriptor());
        }
    }
    if (reps.empty()) throw ValidationError("every utterance is too short for " + spec.descriptor());
    save_representations(reps, a.output);
}

void run_eval(const EvalArgs& a) {
    eval::ExperimentConfig cfg = eval::parse_experiment(io::read_file(a.grid));
    if (a.seed) {
        cfg.cv.seed = *a.seed;
        cfg.forest.seed = *a.seed;
    }
    const Dataset eep = load_dataset(a.eep, EpKind::EEP);
    const Dataset bep = load_dataset(a.bep, EpKind::BEP);
    const auto reports = eval::run_experiment(cfg, eep, bep, a.jobs);
    io::write_atomic(a.out, report::to_json(reports, cfg));
    if (!a.table.empty()) io::write_atomic(a.table, report::render_table(reports));
    if (!a.confusion_csv.empty()) io::write_atomic(a.confusion_csv, report::render_confusion_csv(reports));
}

void run_report(const ReportArgs& a) {
    const auto reports = report::from_json(io::read_file(a.input));
    const std::string table = report::render_table(reports);
    if (a.out.empty()) {
        std::cout << table;
    } else {
        io::write_atomic(a.out, table);
    }
    if (!a.confusion_csv.empty()) io::write_atomic(a.confusion_csv, report::render_confusion_csv(reports));
}

}  // namespace

int run(int argc, char** argv) {
    CLI::App app{"Utterance representations from emotion-profile sequences via higher-order DMD"};
    app.require_subcommand(1, 1);

    SynthArgs synth_args;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic EEP/BEP dataset pair");
    synth_cmd->add_option("--config", synth_args.config, "Synthetic config JSON (default: built-in benchmark)")
        ->check(CLI::ExistingFile);
    synth_cmd->add_option("--out-eep", synth_args.out_eep, "EEP dataset output (JSON lines)")->required();
    synth_cmd->add_option("--out-bep", synth_args.out_bep, "BEP dataset output (JSON lines)")->required();
    synth_cmd->add_option("--seed", synth_args.seed, "Override the config seed");
    synth_cmd->add_option("--jobs", synth_args.jobs, "Worker threads")->check(CLI::PositiveNumber);

    SummarizeArgs sum_args;
    auto* sum_cmd = app.add_subcommand("summarize", "Compute one representation per utterance");
    sum_cmd->add_option("--method", sum_args.method, "avg|pmeans|functionals|dct|dmd")
        ->required()
        ->check(CLI::IsMember({"avg", "pmeans", "functionals", "dct", "dmd"}));
    sum_cmd->add_option("--powers", sum_args.powers, "p-means powers, e.g. 1,2,3 or 1-6");
    sum_cmd->add_option("--k", sum_args.k, "DCT coefficients kept per dimension")->check(CLI::PositiveNumber);
    sum_cmd->add_option("--d", sum_args.d, "DMD order parameters, e.g. 1,2,6 or 1-3");
    sum_cmd->add_option("--input", sum_args.input, "Dataset (JSON lines)")->required()->check(CLI::ExistingFile);
    sum_cmd->add_option("--output", sum_args.output, "Representations output (JSON lines)")->required();
    sum_cmd->add_option("--kind", sum_args.kind, "eep|bep (default: read from the file)")
        ->check(CLI::IsMember({"eep", "bep"}));
    sum_cmd->add_option("--jobs", sum_args.jobs, "Worker threads")->check(CLI::PositiveNumber);

    EvalArgs eval_args;
    auto* eval_cmd = app.add_subcommand("eval", "Cross-validate a grid of representation methods");
    eval_cmd->add_option("--grid", eval_args.grid, "Experiment config JSON")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--eep", eval_args.eep, "EEP dataset")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--bep", eval_args.bep, "BEP dataset")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--out", eval_args.out, "Report JSON output")->required();
    eval_cmd->add_option("--table", eval_args.table, "Also write the rendered table here");
    eval_cmd->add_option("--confusion-csv", eval_args.confusion_csv, "Also write confusion matrices here");
    eval_cmd->add_option("--seed", eval_args.seed, "Override the CV and forest seeds");
    eval_cmd->add_option("--jobs", eval_args.jobs, "Worker threads")->check(CLI::PositiveNumber);

    ReportArgs report_args;
    auto* report_cmd = app.add_subcommand("report", "Render a report JSON as a table");
    report_cmd->add_option("--input", report_args.input, "Report JSON")->required()->check(CLI::ExistingFile);
    report_cmd->add_option("--out", report_args.out, "Table output (default: stdout)");
    report_cmd->add_option("--confusion-csv", report_args.confusion_csv, "Confusion matrices CSV output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit("error", "usage", e.what());
        return kUsage;
    }

    try {
        if (*synth_cmd) run_synth(synth_args);
        if (*sum_cmd) run_summarize(sum_args);
        if (*eval_cmd) run_eval(eval_args);
        if (*report_cmd) run_report(report_args);
    } catch (const NumericError& e) {
        emit("error", "numeric", e.what());
        return kNumericError;
    } catch (const MetricError& e) {
        emit("error", "numeric", e.what());
        return kNumericError;
    } catch (const IoError& e) {
        emit("error", "io", e.what());
        return kFailure;
    } catch (const Error& e) {
        emit("error", "data", e.what());
        return kDataError;
    } catch (const std::exception& e) {
        emit("error", "internal", e.what());
        return kFailure;
    }
    return kOk;
}

int run(const std::vector<std::string>& args) {
    std::vector<std::string> storage;
    storage.reserve(args.size() + 1);
    storage.emplace_back("eigenemo");
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) argv.push_back(s.data());
    argv.push_back(nullptr);
    return run(static_cast<int>(storage.size()), argv.data());
}

}  // namespace eigenemo::cli
