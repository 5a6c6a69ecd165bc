#include "fragnet/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace fragnet {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out)
            throw std::runtime_error("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw std::runtime_error("rename to " + path.string() + " failed: " + ec.message());
}

std::string meanfield_csv(const MeanFieldTrajectory& traj) {
    std::string out = "t,p,q,E_s,E_d,x,sensitivity\n";
    for (const auto& row : traj.rows) {
        out += std::to_string(row.t);
        out += ',';
        out += format_double(row.p);
        out += ',';
        out += format_double(row.q);
        out += ',';
        out += format_double(row.e_s);
        out += ',';
        out += format_double(row.e_d);
        out += ',';
        out += format_double(row.x);
        out += ',';
        out += format_double(row.sensitivity);
        out += '\n';
    }
    return out;
}

std::string abm_csv(const std::vector<MetricSeries>& replicas) {
    std::string out = "replica,t,x_hat,mean_degree,n_similar,n_dissimilar,skipped,rewired\n";
    for (const auto& series : replicas) {
        if (series.replica < 0)
            throw std::invalid_argument("abm_csv: series lacks a replica index");
        for (const auto& row : series.rows) {
            out += std::to_string(series.replica);
            out += ',';
            out += std::to_string(row.t);
            out += ',';
            out += format_double(row.x_hat);
            out += ',';
            out += format_double(row.mean_degree);
            out += ',';
            out += format_double(row.n_similar);
            out += ',';
            out += format_double(row.n_dissimilar);
            out += ',';
            out += std::to_string(row.skipped);
            out += ',';
            out += std::to_string(row.rewired);
            out += '\n';
        }
    }
    return out;
}

}  // namespace fragnet
