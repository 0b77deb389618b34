#include "hexsweep/csv.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "hexsweep/errors.hpp"

namespace hexsweep {

std::string csv_file_name(CsvKind kind) {
    switch (kind) {
    case CsvKind::GrindHist: return "grind_hist.csv";
    case CsvKind::Wavefront: return "wavefront.csv";
    case CsvKind::Timing: return "timing.csv";
    case CsvKind::Flux: return "flux.csv";
    }
    return "report.csv";
}

namespace {

constexpr int kGrindBins = 64;

std::ofstream open_csv(const std::string& out_dir, const std::string& name, std::string& path) {
    std::filesystem::create_directories(out_dir);
    path = (std::filesystem::path(out_dir) / name).string();
    std::ofstream out(path, std::ios::binary); // binary keeps LF endings
    if (!out) {
        throw Error("emit_csv: cannot open " + path);
    }
    out.precision(17);
    return out;
}

void write_grind_hist(const RunReport& report, std::ofstream& out) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const double s : report.grind_samples) {
        if (s > 0.0) {
            lo = std::min(lo, s);
        }
        hi = std::max(hi, s);
    }
    if (!(lo < hi)) {
        // No usable samples: emit the fixed default range with zero counts.
        lo = 1e-9;
        hi = 1.0;
    }
    const double log_lo = std::log(lo);
    const double span = std::log(hi) - log_lo;
    std::array<std::int64_t, kGrindBins> counts{};
    for (const double s : report.grind_samples) {
        int bin = 0;
        if (s > 0.0 && span > 0.0) {
            bin = static_cast<int>(kGrindBins * (std::log(s) - log_lo) / span);
        }
        counts[std::clamp(bin, 0, kGrindBins - 1)] += 1;
    }
    out << "bin_lower_s,bin_upper_s,count\n";
    for (int b = 0; b < kGrindBins; ++b) {
        const double lower = std::exp(log_lo + span * b / kGrindBins);
        const double upper = std::exp(log_lo + span * (b + 1) / kGrindBins);
        out << lower << "," << upper << "," << counts[b] << "\n";
    }
}

} // namespace

std::string emit_csv(const RunReport& report, CsvKind kind, const std::string& out_dir) {
    std::string path;
    std::ofstream out = open_csv(out_dir, csv_file_name(kind), path);

    switch (kind) {
    case CsvKind::GrindHist:
        write_grind_hist(report, out);
        break;
    case CsvKind::Wavefront:
        out << "octant,angle,t_level,element_count\n";
        for (const WavefrontRow& r : report.wavefront) {
            out << r.octant << "," << r.angle << "," << r.t_level << "," << r.element_count
                << "\n";
        }
        break;
    case CsvKind::Timing:
        out << "phase,seconds\n";
        out << "schedule_build," << report.phases.schedule_build << "\n";
        out << "sweep," << report.phases.sweep << "\n";
        out << "source_update," << report.phases.source_update << "\n";
        out << "total," << report.phases.total << "\n";
        break;
    case CsvKind::Flux:
        out << "outer_iter,group,integrated_flux\n";
        for (std::size_t o = 0; o < report.outer_flux.size(); ++o) {
            for (std::size_t g = 0; g < report.outer_flux[o].size(); ++g) {
                out << o << "," << g << "," << report.outer_flux[o][g] << "\n";
            }
        }
        out << "total,all," << report.total_flux << "\n";
        break;
    }
    if (!out) {
        throw Error("emit_csv: write failed for " + path);
    }
    return path;
}

} // namespace hexsweep
