#pragma once

#include "graphprop/baselines.hpp"
#include "graphprop/bounds.hpp"
#include "graphprop/errors.hpp"
#include "graphprop/metrics.hpp"
#include "graphprop/propagation.hpp"
#include "graphprop/tensor.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace graphprop::harness {

enum class ExperimentKind { RankSweep, MissingSweep, OverlapSim, Blogs, Complete, BoundReport };

std::string to_string(ExperimentKind k);
ExperimentKind parse_kind(const std::string& s);

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::RankSweep;
    std::uint64_t seed = 0;
    Index repeats = 3;
    Index workers = 1;
    std::filesystem::path out_dir = "results";

    Index k = 10;
    SolveOptions solve{.unreachable = UnreachablePolicy::Exclude};
    HalrtcParams halrtc;
    GtvmOptions gtvm;
    RmseForm rmse_form = RmseForm::RootMean;
    PsnrVariant psnr = PsnrVariant::MaxError;
    std::optional<double> psnr_peak;

    // synthetic sweeps
    Shape shape{60, 60, 3};
    Index acquisitions = 2;
    bool normalize = true;
    std::vector<Index> ranks{5, 10, 20, 30, 40, 50, 60};
    double missing_frac = 0.4;
    std::vector<double> missing_fracs{0.05, 0.15, 0.25, 0.35, 0.45};
    std::vector<Index> tile_ranks{5, 30, 60};

    // overlap simulation
    Index height = 128, width = 128, bands = 4;
    std::vector<double> area_fracs{0.4};
    std::vector<std::filesystem::path> rasters;   // empty: synthetic pairs, one per repeat
    std::vector<std::string> methods{"graphprop", "halrtc", "gtvm"};
    bool write_rasters = true;

    // label propagation
    std::vector<double> label_fracs{0.05, 0.1, 0.2, 0.4, 0.6, 0.8};
    std::filesystem::path edge_list, labels;      // empty: synthetic two-block graph
    Index block_size = 100;

    // generic completion
    std::vector<std::filesystem::path> inputs, masks, truth;
    bool bound_report = false;

    void validate() const;
};

/// Desk-scale defaults for `kind`, or the larger published scales when `full_scale`.
ExperimentConfig default_config(ExperimentKind kind, bool full_scale = false);

/// Overlays the keys present in `j` on `base`. Unknown keys and invalid values
/// throw ErrorKind::Config.
ExperimentConfig apply_json(ExperimentConfig base, const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& cfg);

struct ResultRow {
    std::string experiment;
    Index instance = 0;               // repeat (or location) index
    std::uint64_t seed = 0;
    std::optional<double> r, missing_frac, area_frac, label_frac;
    std::string method, metric, variant;
    double value = 0.0;
    double runtime_seconds = 0.0;
};

inline constexpr int kResultSchemaVersion = 1;

/// Results table without runtimes, so that identical runs give identical bytes.
void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows);
/// Runtime per (instance, method); informational only.
void write_timings_csv(std::ostream& os, const std::vector<ResultRow>& rows);
/// Mean and sample standard deviation over instances per (coordinates, method, metric).
void write_summary_csv(std::ostream& os, const std::vector<ResultRow>& rows);

struct SummaryRow {
    std::optional<double> r, missing_frac, area_frac, label_frac;
    std::string method, metric, variant;
    double mean = 0.0, stddev = 0.0;
    Index count = 0;
};
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);

/// A named tensor artifact written next to the results.
using Artifact = std::pair<std::string, DenseTensor>;

struct ExperimentOutput {
    std::vector<ResultRow> rows;
    nlohmann::json manifest = nlohmann::json::object();
    std::vector<Artifact> artifacts;
};

ExperimentOutput run_rank_sweep(const ExperimentConfig& cfg);
ExperimentOutput run_missing_sweep(const ExperimentConfig& cfg);

/// `pairs[i]` is one location (two co-registered rasters of identical shape).
/// With no pairs, synthetic smooth pairs are generated, one per repeat.
ExperimentOutput run_overlap_sim(const ExperimentConfig& cfg, const std::vector<std::vector<DenseTensor>>& pairs = {});

/// Labels are 0/1 per node. With an empty graph the synthetic two-block graph is used.
ExperimentOutput run_blogs(const ExperimentConfig& cfg, const EdgeSet& edges, const std::vector<int>& labels);

/// Acquisitions of shape (I_1..I_m) and per-acquisition fiber masks of shape
/// (I_1..I_{m-1}), nonzero meaning observed. `truth` is only needed for bound reports.
ExperimentOutput run_complete(const ExperimentConfig& cfg, const std::vector<DenseTensor>& acquisitions,
                              const std::vector<DenseTensor>& masks, const std::vector<DenseTensor>& truth = {});

/// Synthetic instance with known truth; one report per acquisition under "reports".
ExperimentOutput run_bound_report(const ExperimentConfig& cfg);

/// Dispatches on cfg.kind, loading any files the config names.
ExperimentOutput run_experiment(const ExperimentConfig& cfg);

/// Writes results.csv, summary.csv, timings.csv, manifest.json and artifacts into cfg.out_dir.
void write_outputs(const ExperimentConfig& cfg, const ExperimentOutput& out);

/// Labels file: one "id label" pair per line, ids 1-based; '#' starts a comment.
std::vector<int> read_labels(const std::filesystem::path& path, Index n);

struct RasterSidecar {
    Index height = 0, width = 0, bands = 0;
    std::string dtype = "f32";          // u8 u16 i16 u32 i32 f32 f64, little endian
    std::string interleave = "bsq";     // bsq (band sequential), bil or bip
};
RasterSidecar read_sidecar(const std::filesystem::path& path);

/// Flat band-interleaved binary to a (height, width, bands) tensor. Within a
/// band, pixels are stored row by row.
DenseTensor convert_raster(const std::filesystem::path& raw, const RasterSidecar& sidecar);

/// Process exit code for an error kind: 2 for configuration problems, 3 for data.
int exit_code_for(ErrorKind kind);

} // namespace graphprop::harness
