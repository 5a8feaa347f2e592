#include "graphprop/errors.hpp"
#include "graphprop/harness.hpp"
#include "graphprop/tensor_io.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <tuple>

namespace graphprop::harness {

namespace {

std::string opt(const std::optional<double>& v) { return v ? fmt::format("{}", *v) : std::string(); }

std::string coords(const std::optional<double>& r, const std::optional<double>& mf, const std::optional<double>& af,
                   const std::optional<double>& lf) {
    return fmt::format("{},{},{},{}", opt(r), opt(mf), opt(af), opt(lf));
}

void schema_line(std::ostream& os, const char* table) {
    os << "# graphprop-" << table << " schema=" << kResultSchemaVersion << '\n';
}

using SummaryKey = std::tuple<std::string, std::string, std::string, std::string, std::string, std::string, std::string>;

SummaryKey key_of(const ResultRow& r) {
    return {opt(r.r), opt(r.missing_frac), opt(r.area_frac), opt(r.label_frac), r.method, r.metric, r.variant};
}

} // namespace

void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
    schema_line(os, "results");
    os << "experiment,instance,seed,r,missing_frac,area_frac,label_frac,method,metric,variant,value\n";
    for (const auto& r : rows) {
        os << fmt::format("{},{},{},{},{},{},{},{}\n", r.experiment, r.instance, r.seed,
                          coords(r.r, r.missing_frac, r.area_frac, r.label_frac), r.method, r.metric, r.variant,
                          r.value);
    }
}

void write_timings_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
    schema_line(os, "timings");
    os << "experiment,instance,seed,r,missing_frac,area_frac,label_frac,method,runtime_seconds\n";
    std::string last;
    for (const auto& r : rows) {
        const std::string line = fmt::format("{},{},{},{},{}", r.experiment, r.instance, r.seed,
                                             coords(r.r, r.missing_frac, r.area_frac, r.label_frac), r.method);
        if (line == last) continue;  // one timing per (instance, method)
        last = line;
        os << line << ',' << fmt::format("{}", r.runtime_seconds) << '\n';
    }
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
    std::map<SummaryKey, std::size_t> slot;
    std::vector<SummaryRow> out;
    std::vector<std::vector<double>> values;
    for (const auto& r : rows) {
        auto [it, inserted] = slot.try_emplace(key_of(r), out.size());
        if (inserted) {
            out.push_back({r.r, r.missing_frac, r.area_frac, r.label_frac, r.method, r.metric, r.variant});
            values.emplace_back();
        }
        values[it->second].push_back(r.value);
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto& v = values[i];
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        out[i].mean = mean;
        out[i].stddev = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
        out[i].count = static_cast<Index>(v.size());
    }
    return out;
}

void write_summary_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
    schema_line(os, "summary");
    os << "r,missing_frac,area_frac,label_frac,method,metric,variant,count,mean,std\n";
    for (const auto& s : summarize(rows)) {
        os << fmt::format("{},{},{},{},{},{},{}\n", coords(s.r, s.missing_frac, s.area_frac, s.label_frac), s.method,
                          s.metric, s.variant, s.count, s.mean, s.stddev);
    }
}

void write_outputs(const ExperimentConfig& cfg, const ExperimentOutput& out) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) fail(ErrorKind::Io, "cannot create output directory " + cfg.out_dir.string() + ": " + ec.message());

    auto open = [](const fs::path& p) {
        std::ofstream os(p, std::ios::binary);
        if (!os) fail(ErrorKind::Io, "cannot write " + p.string());
        return os;
    };
    {
        auto os = open(cfg.out_dir / "results.csv");
        write_results_csv(os, out.rows);
    }
    {
        auto os = open(cfg.out_dir / "summary.csv");
        write_summary_csv(os, out.rows);
    }
    {
        auto os = open(cfg.out_dir / "timings.csv");
        write_timings_csv(os, out.rows);
    }
    nlohmann::json manifest = out.manifest;
    manifest["schema"] = kResultSchemaVersion;
    manifest["config"] = to_json(cfg);
    manifest["files"] = {"results.csv", "summary.csv", "timings.csv"};
    for (const auto& [name, tensor] : out.artifacts) {
        const fs::path p = cfg.out_dir / name;
        fs::create_directories(p.parent_path(), ec);
        write_tensor(p, tensor);
        manifest["files"].push_back(name);
    }
    {
        auto os = open(cfg.out_dir / "manifest.json");
        os << manifest.dump(2) << '\n';
    }
}

} // namespace graphprop::harness
