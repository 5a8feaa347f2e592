#include "graphprop/datagen.hpp"
#include "graphprop/errors.hpp"
#include "graphprop/harness.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace graphprop::harness {

namespace {

constexpr std::array<std::pair<ExperimentKind, const char*>, 6> kKindNames{{
    {ExperimentKind::RankSweep, "rank-sweep"},
    {ExperimentKind::MissingSweep, "missing-sweep"},
    {ExperimentKind::OverlapSim, "overlap-sim"},
    {ExperimentKind::Blogs, "blogs"},
    {ExperimentKind::Complete, "complete"},
    {ExperimentKind::BoundReport, "bound-report"},
}};

[[noreturn]] void config_error(const std::string& msg) { fail(ErrorKind::Config, msg); }

template <class T>
T get_as(const nlohmann::json& v, const std::string& key) {
    try {
        return v.get<T>();
    } catch (const nlohmann::json::exception&) {
        config_error("config key '" + key + "' has the wrong type");
    }
}

std::vector<std::filesystem::path> get_paths(const nlohmann::json& v, const std::string& key) {
    std::vector<std::filesystem::path> out;
    for (const auto& s : get_as<std::vector<std::string>>(v, key)) out.emplace_back(s);
    return out;
}

} // namespace

std::string to_string(ExperimentKind k) {
    for (const auto& [kind, name] : kKindNames) {
        if (kind == k) return name;
    }
    return "unknown";
}

ExperimentKind parse_kind(const std::string& s) {
    for (const auto& [kind, name] : kKindNames) {
        if (s == name) return kind;
    }
    config_error("unknown experiment kind '" + s + "'");
}

ExperimentConfig default_config(ExperimentKind kind, bool full_scale) {
    ExperimentConfig c;
    c.kind = kind;
    if (kind == ExperimentKind::OverlapSim) c.repeats = 5;
    if (kind == ExperimentKind::Blogs) c.repeats = 10;
    if (full_scale) {
        c.shape = {200, 200, 3};
        c.ranks = {5, 25, 50, 75, 100, 125, 150, 175, 200};
        c.tile_ranks = {5, 100, 200};
        c.repeats = kind == ExperimentKind::Blogs ? 30 : 10;
        c.height = c.width = 500;
        c.bands = 7;
        c.area_fracs = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
        c.label_fracs = {0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    }
    if (kind == ExperimentKind::BoundReport) c.ranks = {5};
    return c;
}

void ExperimentConfig::validate() const {
    if (k < 1) config_error("k must be at least 1");
    if (repeats < 1) config_error("repeats must be at least 1");
    if (workers < 1) config_error("workers must be at least 1");
    if (!(solve.rel_tol > 0.0)) config_error("solver tolerance must be positive");
    if (kind == ExperimentKind::RankSweep || kind == ExperimentKind::MissingSweep ||
        kind == ExperimentKind::OverlapSim) {
        try {
            halrtc.validate(4);  // stacked acquisitions: three modes plus the acquisition mode
        } catch (const Error& e) {
            config_error(std::string("halrtc: ") + e.what());
        }
    }
    if (psnr == PsnrVariant::Standard && !psnr_peak) config_error("standard PSNR needs psnr_peak");

    const bool synthetic = kind == ExperimentKind::RankSweep || kind == ExperimentKind::MissingSweep ||
                           kind == ExperimentKind::BoundReport;
    if (synthetic) {
        if (shape.size() != 3) config_error("synthetic instances need a 3-mode shape");
        if (std::any_of(shape.begin(), shape.end(), [](Index e) { return e < 1; })) {
            config_error("shape extents must be positive");
        }
        if (acquisitions < 1) config_error("need at least one acquisition");
        const std::vector<Index>& grid = kind == ExperimentKind::MissingSweep ? tile_ranks : ranks;
        if (grid.empty()) config_error("rank grid is empty");
        for (Index r : grid) {
            if (r < 1 || r > std::min(shape[0], shape[1])) config_error("rank outside [1, min(I1, I2)]");
        }
        const std::vector<double> fracs =
            kind == ExperimentKind::MissingSweep ? missing_fracs : std::vector<double>{missing_frac};
        if (fracs.empty()) config_error("missing-fraction grid is empty");
        for (double f : fracs) {
            try {
                check_missing_fraction(f, acquisitions);
            } catch (const Error& e) {
                config_error(e.what());
            }
        }
    }
    if (kind == ExperimentKind::OverlapSim) {
        if (area_fracs.empty()) config_error("area-fraction grid is empty");
        for (double a : area_fracs) {
            if (!(a >= 0.0 && a <= 0.7)) config_error("area fractions must lie in [0, 0.7]");
        }
        if (height < 2 || width < 2 || bands < 1) config_error("raster extents too small");
        if (!rasters.empty() && rasters.size() % 2 != 0) config_error("rasters come in pairs");
        if (methods.empty()) config_error("no methods selected");
        const std::set<std::string> known{"graphprop", "halrtc", "gtvm"};
        for (const auto& m : methods) {
            if (!known.contains(m)) config_error("unknown method '" + m + "'");
        }
    }
    if (kind == ExperimentKind::Blogs) {
        if (label_fracs.empty()) config_error("label-fraction grid is empty");
        for (double f : label_fracs) {
            if (!(f > 0.0 && f <= 1.0)) config_error("label fractions must lie in (0, 1]");
        }
        if (edge_list.empty() != labels.empty()) config_error("edge_list and labels must be given together");
        if (edge_list.empty() && block_size < 2) config_error("block_size must be at least 2");
    }
    if (kind == ExperimentKind::Complete) {
        if (inputs.empty()) config_error("complete needs input tensors");
        if (masks.size() != inputs.size()) config_error("one mask per input tensor is required");
        if (!truth.empty() && truth.size() != inputs.size()) config_error("one truth tensor per input is required");
    }
}

ExperimentConfig apply_json(ExperimentConfig c, const nlohmann::json& j) {
    if (!j.is_object()) config_error("config must be a JSON object");
    for (const auto& [key, v] : j.items()) {
        if (key == "kind") {
            c.kind = parse_kind(get_as<std::string>(v, key));
        } else if (key == "seed") {
            c.seed = get_as<std::uint64_t>(v, key);
        } else if (key == "repeats") {
            c.repeats = get_as<Index>(v, key);
        } else if (key == "workers") {
            c.workers = get_as<Index>(v, key);
        } else if (key == "out_dir") {
            c.out_dir = get_as<std::string>(v, key);
        } else if (key == "k") {
            c.k = get_as<Index>(v, key);
        } else if (key == "solver") {
            const auto s = get_as<std::string>(v, key);
            if (s == "cg") {
                c.solve.solver = LinearSolver::ConjugateGradient;
            } else if (s == "cholesky") {
                c.solve.solver = LinearSolver::Cholesky;
            } else {
                config_error("solver must be 'cg' or 'cholesky'");
            }
        } else if (key == "solver_tol") {
            c.solve.rel_tol = get_as<double>(v, key);
        } else if (key == "solver_max_iters") {
            c.solve.max_iters = get_as<Index>(v, key);
        } else if (key == "rmse_form") {
            const auto s = get_as<std::string>(v, key);
            if (s == "root-mean") {
                c.rmse_form = RmseForm::RootMean;
            } else if (s == "literal") {
                c.rmse_form = RmseForm::Literal;
            } else {
                config_error("rmse_form must be 'root-mean' or 'literal'");
            }
        } else if (key == "psnr") {
            const auto s = get_as<std::string>(v, key);
            if (s == "max-error") {
                c.psnr = PsnrVariant::MaxError;
            } else if (s == "standard") {
                c.psnr = PsnrVariant::Standard;
            } else {
                config_error("psnr must be 'max-error' or 'standard'");
            }
        } else if (key == "psnr_peak") {
            if (v.is_null()) {
                c.psnr_peak.reset();
            } else {
                c.psnr_peak = get_as<double>(v, key);
            }
        } else if (key == "halrtc") {
            if (!v.is_object()) config_error("halrtc must be an object");
            for (const auto& [hk, hv] : v.items()) {
                const std::string name = "halrtc." + hk;
                if (hk == "alphas") {
                    c.halrtc.alphas = get_as<std::vector<double>>(hv, name);
                } else if (hk == "rho") {
                    c.halrtc.rho = get_as<double>(hv, name);
                } else if (hk == "rho_growth") {
                    c.halrtc.rho_growth = get_as<double>(hv, name);
                } else if (hk == "rho_max") {
                    c.halrtc.rho_max = get_as<double>(hv, name);
                } else if (hk == "max_iters") {
                    c.halrtc.max_iters = get_as<Index>(hv, name);
                } else if (hk == "tol") {
                    c.halrtc.tol = get_as<double>(hv, name);
                } else {
                    config_error("unknown config key '" + name + "'");
                }
            }
        } else if (key == "gtvm_tol") {
            c.gtvm.rel_tol = get_as<double>(v, key);
        } else if (key == "shape") {
            c.shape = get_as<Shape>(v, key);
        } else if (key == "acquisitions") {
            c.acquisitions = get_as<Index>(v, key);
        } else if (key == "normalize") {
            c.normalize = get_as<bool>(v, key);
        } else if (key == "ranks") {
            c.ranks = get_as<std::vector<Index>>(v, key);
        } else if (key == "missing_frac") {
            c.missing_frac = get_as<double>(v, key);
        } else if (key == "missing_fracs") {
            c.missing_fracs = get_as<std::vector<double>>(v, key);
        } else if (key == "tile_ranks") {
            c.tile_ranks = get_as<std::vector<Index>>(v, key);
        } else if (key == "raster") {
            if (!v.is_object()) config_error("raster must be an object");
            for (const auto& [rk, rv] : v.items()) {
                if (rk == "height") {
                    c.height = get_as<Index>(rv, "raster.height");
                } else if (rk == "width") {
                    c.width = get_as<Index>(rv, "raster.width");
                } else if (rk == "bands") {
                    c.bands = get_as<Index>(rv, "raster.bands");
                } else {
                    config_error("unknown config key 'raster." + rk + "'");
                }
            }
        } else if (key == "area_fracs") {
            c.area_fracs = get_as<std::vector<double>>(v, key);
        } else if (key == "rasters") {
            c.rasters = get_paths(v, key);
        } else if (key == "methods") {
            c.methods = get_as<std::vector<std::string>>(v, key);
        } else if (key == "write_rasters") {
            c.write_rasters = get_as<bool>(v, key);
        } else if (key == "label_fracs") {
            c.label_fracs = get_as<std::vector<double>>(v, key);
        } else if (key == "edge_list") {
            c.edge_list = get_as<std::string>(v, key);
        } else if (key == "labels") {
            c.labels = get_as<std::string>(v, key);
        } else if (key == "block_size") {
            c.block_size = get_as<Index>(v, key);
        } else if (key == "inputs") {
            c.inputs = get_paths(v, key);
        } else if (key == "masks") {
            c.masks = get_paths(v, key);
        } else if (key == "truth") {
            c.truth = get_paths(v, key);
        } else if (key == "bound_report") {
            c.bound_report = get_as<bool>(v, key);
        } else {
            config_error("unknown config key '" + key + "'");
        }
    }
    return c;
}

nlohmann::json to_json(const ExperimentConfig& c) {
    auto paths = [](const std::vector<std::filesystem::path>& ps) {
        std::vector<std::string> out;
        for (const auto& p : ps) out.push_back(p.string());
        return out;
    };
    nlohmann::json j;
    j["kind"] = to_string(c.kind);
    j["seed"] = c.seed;
    j["repeats"] = c.repeats;
    j["k"] = c.k;
    j["solver"] = c.solve.solver == LinearSolver::Cholesky ? "cholesky" : "cg";
    j["solver_tol"] = c.solve.rel_tol;
    j["solver_max_iters"] = c.solve.max_iters;
    j["rmse_form"] = c.rmse_form == RmseForm::Literal ? "literal" : "root-mean";
    j["psnr"] = c.psnr == PsnrVariant::Standard ? "standard" : "max-error";
    j["psnr_peak"] = c.psnr_peak ? nlohmann::json(*c.psnr_peak) : nlohmann::json(nullptr);
    j["halrtc"] = {{"alphas", c.halrtc.alphas},     {"rho", c.halrtc.rho},
                   {"rho_growth", c.halrtc.rho_growth}, {"rho_max", c.halrtc.rho_max},
                   {"max_iters", c.halrtc.max_iters}, {"tol", c.halrtc.tol}};
    j["gtvm_tol"] = c.gtvm.rel_tol;
    switch (c.kind) {
    case ExperimentKind::RankSweep:
    case ExperimentKind::MissingSweep:
    case ExperimentKind::BoundReport:
        j["shape"] = c.shape;
        j["acquisitions"] = c.acquisitions;
        j["normalize"] = c.normalize;
        if (c.kind == ExperimentKind::MissingSweep) {
            j["missing_fracs"] = c.missing_fracs;
            j["tile_ranks"] = c.tile_ranks;
        } else {
            j["ranks"] = c.ranks;
            j["missing_frac"] = c.missing_frac;
        }
        break;
    case ExperimentKind::OverlapSim:
        j["raster"] = {{"height", c.height}, {"width", c.width}, {"bands", c.bands}};
        j["area_fracs"] = c.area_fracs;
        j["rasters"] = paths(c.rasters);
        j["methods"] = c.methods;
        j["write_rasters"] = c.write_rasters;
        break;
    case ExperimentKind::Blogs:
        j["label_fracs"] = c.label_fracs;
        j["edge_list"] = c.edge_list.string();
        j["labels"] = c.labels.string();
        j["block_size"] = c.block_size;
        break;
    case ExperimentKind::Complete:
        j["inputs"] = paths(c.inputs);
        j["masks"] = paths(c.masks);
        j["truth"] = paths(c.truth);
        j["bound_report"] = c.bound_report;
        break;
    }
    return j;
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::InvalidArgument:
    case ErrorKind::InfeasibleFraction:
        return 2;
    default:
        return 3;
    }
}

} // namespace graphprop::harness
