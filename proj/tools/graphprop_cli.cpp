// Command-line driver for the GraphProp experiments.
#include "graphprop/errors.hpp"
#include "graphprop/harness.hpp"
#include "graphprop/tensor_io.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <fstream>
#include <optional>

namespace gh = graphprop::harness;

namespace {

struct CommonFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::optional<long> workers;
    bool full_scale = false;
};

void add_common(CLI::App* sub, CommonFlags& f) {
    sub->add_option("--config", f.config, "JSON experiment config")->check(CLI::ExistingFile);
    sub->add_option("--seed", f.seed, "Master seed (overrides the config)");
    sub->add_option("--out-dir", f.out_dir, "Output directory (overrides the config)");
    sub->add_option("--workers", f.workers, "Concurrent instances")->check(CLI::PositiveNumber);
    sub->add_flag("--full-scale", f.full_scale, "Use the published problem sizes and repeat counts");
}

gh::ExperimentConfig build_config(gh::ExperimentKind kind, const CommonFlags& f) {
    gh::ExperimentConfig cfg = gh::default_config(kind, f.full_scale);
    if (!f.config.empty()) {
        std::ifstream is(f.config);
        if (!is) graphprop::fail(graphprop::ErrorKind::Config, "cannot open config " + f.config);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(is);
        } catch (const nlohmann::json::exception& e) {
            graphprop::fail(graphprop::ErrorKind::Config, std::string("config is not valid JSON: ") + e.what());
        }
        if (j.contains("kind") && gh::parse_kind(j["kind"].get<std::string>()) != kind) {
            graphprop::fail(graphprop::ErrorKind::Config, "config kind does not match the subcommand");
        }
        cfg = gh::apply_json(cfg, j);
    }
    if (f.seed) cfg.seed = *f.seed;
    if (!f.out_dir.empty()) cfg.out_dir = f.out_dir;
    if (f.workers) cfg.workers = *f.workers;
    cfg.validate();
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    spdlog::set_default_logger(spdlog::stderr_color_mt("graphprop"));

    CLI::App app{"Graph-based tensor completion experiments"};
    app.require_subcommand(1);
    std::string log_level = "info";
    app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off");

    CommonFlags flags;
    std::vector<std::pair<CLI::App*, gh::ExperimentKind>> experiments;
    const std::pair<const char*, gh::ExperimentKind> subcommands[] = {
        {"rank-sweep", gh::ExperimentKind::RankSweep},
        {"missing-sweep", gh::ExperimentKind::MissingSweep},
        {"overlap-sim", gh::ExperimentKind::OverlapSim},
        {"blogs", gh::ExperimentKind::Blogs},
        {"complete", gh::ExperimentKind::Complete},
        {"bound-report", gh::ExperimentKind::BoundReport},
    };
    for (const auto& [name, kind] : subcommands) {
        CLI::App* sub = app.add_subcommand(name, "Run the " + std::string(name) + " experiment");
        add_common(sub, flags);
        experiments.emplace_back(sub, kind);
    }

    std::string raw, sidecar, output;
    CLI::App* convert = app.add_subcommand("convert-raster", "Convert a flat band-interleaved raster to a tensor file");
    convert->add_option("--input", raw, "Raw raster")->required()->check(CLI::ExistingFile);
    convert->add_option("--sidecar", sidecar, "JSON sidecar (height, width, bands, dtype, interleave)")
        ->required()
        ->check(CLI::ExistingFile);
    convert->add_option("--output", output, "Tensor file to write")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    spdlog::set_level(spdlog::level::from_str(log_level));

    try {
        if (convert->parsed()) {
            const graphprop::DenseTensor t = gh::convert_raster(raw, gh::read_sidecar(sidecar));
            graphprop::write_tensor(output, t);
            spdlog::info("wrote {} ({}x{}x{})", output, t.extent(0), t.extent(1), t.extent(2));
            return 0;
        }
        for (const auto& [sub, kind] : experiments) {
            if (!sub->parsed()) continue;
            const gh::ExperimentConfig cfg = build_config(kind, flags);
            const gh::ExperimentOutput out = gh::run_experiment(cfg);
            gh::write_outputs(cfg, out);
            spdlog::info("{} rows written to {}", out.rows.size(), cfg.out_dir.string());
            if (kind == gh::ExperimentKind::BoundReport && out.manifest.value("violations", 0) > 0) {
                spdlog::error("bound violated on {} acquisition(s)", out.manifest["violations"].get<int>());
                return 1;
            }
            return 0;
        }
    } catch (const graphprop::Error& e) {
        spdlog::error("{}", e.what());
        return gh::exit_code_for(e.kind());
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 3;
    }
    return 0;
}
