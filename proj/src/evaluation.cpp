#include "fadecode/evaluation.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <stdexcept>
#include <thread>

namespace fadecode {

BlerPoint estimate_bler(const Chain& chain, double snr_db, std::uint64_t trials, Rng& rng) {
    if (trials < 1) throw std::invalid_argument("estimate_bler: trials must be at least 1");
    TrialCounts counts = chain.run(snr_db, rng, trials);
    BlerPoint pt;
    pt.snr_db = snr_db;
    pt.trials = counts.units;
    pt.bler = double(counts.errors) / double(counts.units);
    pt.stderr_ = std::sqrt(pt.bler * (1.0 - pt.bler) / double(counts.units));
    return pt;
}

double SnrGrid::at(std::size_t i) const {
    if (count == 1) return lo_db;
    return lo_db + (hi_db - lo_db) * double(i) / double(count - 1);
}

std::vector<double> SnrGrid::values() const {
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i) v[i] = at(i);
    return v;
}

BlerCurve sweep(const Chain& chain, const SnrGrid& grid, std::uint64_t trials_per_point,
                std::uint64_t seed, std::uint64_t stream_base) {
    if (grid.count == 0) throw std::invalid_argument("sweep: empty grid");
    BlerCurve curve;
    curve.system_label = chain.label();
    curve.points.resize(grid.count);

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>(hw, grid.count);

    auto eval_point = [&](std::size_t i) {
        Rng rng(seed, stream_base + i);
        curve.points[i] = estimate_bler(chain, grid.at(i), trials_per_point, rng);
    };

    if (workers <= 1) {
        for (std::size_t i = 0; i < grid.count; ++i) eval_point(i);
        return curve;
    }
    // fan out; each point owns its stream, results land by index
    std::vector<std::future<void>> futs;
    futs.reserve(grid.count);
    for (std::size_t i = 0; i < grid.count; ++i)
        futs.push_back(std::async(std::launch::async, eval_point, i));
    for (auto& f : futs) f.get();
    return curve;
}

std::string curve_to_csv(const BlerCurve& curve) {
    std::string out = "snr_db,bler,trials,stderr,label\n";
    char buf[200];
    for (const auto& pt : curve.points) {
        std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%llu,%.6g,%s\n", pt.snr_db, pt.bler,
                      static_cast<unsigned long long>(pt.trials), pt.stderr_,
                      curve.system_label.c_str());
        out += buf;
    }
    return out;
}

void write_csv(const std::string& path, const std::vector<BlerCurve>& curves) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "snr_db,bler,trials,stderr,label\n";
    char buf[200];
    for (const auto& curve : curves) {
        for (const auto& pt : curve.points) {
            std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%llu,%.6g,%s\n", pt.snr_db, pt.bler,
                          static_cast<unsigned long long>(pt.trials), pt.stderr_,
                          curve.system_label.c_str());
            out << buf;
        }
    }
}

GramReport analyze_codebook(const Matrix& codebook) {
    const std::size_t M = codebook.rows;
    const std::size_t n = codebook.cols;
    GramReport report;
    report.gram = Matrix(M, M);
    report.energies.resize(M);
    double max_off = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
        for (std::size_t j = 0; j < M; ++j) {
            double dotv = 0.0;
            for (std::size_t k = 0; k < n; ++k) dotv += codebook(i, k) * codebook(j, k);
            report.gram(i, j) = dotv;
            if (i != j) max_off = std::max(max_off, std::abs(dotv) / double(n));
        }
        report.energies[i] = report.gram(i, i);
    }
    report.max_offdiag_normalized = max_off;
    if (max_off < 0.05)
        report.classification = OrthClass::orthogonal;
    else if (max_off > 0.8)
        report.classification = OrthClass::non_orthogonal;
    else
        report.classification = OrthClass::indeterminate;
    return report;
}

std::string orth_class_name(OrthClass c) {
    switch (c) {
        case OrthClass::orthogonal: return "orthogonal";
        case OrthClass::non_orthogonal: return "non_orthogonal";
        case OrthClass::indeterminate: return "indeterminate";
    }
    return "?";
}

std::string render_codebook(const Matrix& codebook) {
    std::string out;
    char buf[48];
    for (std::size_t i = 0; i < codebook.rows; ++i) {
        out += "[";
        for (std::size_t j = 0; j < codebook.cols; ++j) {
            std::snprintf(buf, sizeof(buf), "%.2f", codebook(i, j));
            std::string cell = buf;
            if (cell == "-0.00") cell = "0.00";
            if (j) out += ", ";
            out += cell;
        }
        out += "]\n";
    }
    return out;
}

}  // namespace fadecode
