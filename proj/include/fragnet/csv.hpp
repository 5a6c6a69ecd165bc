#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fragnet/meanfield.hpp"
#include "fragnet/series.hpp"

namespace fragnet {

/// Shortest round-trip decimal representation ("%.17g"); nan prints as "nan".
std::string format_double(double v);

/// Writes content to a sibling temp file, then renames over the target, so
/// readers never observe a partial file.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

/// Header: t,p,q,E_s,E_d,x,sensitivity
std::string meanfield_csv(const MeanFieldTrajectory& traj);

/// Header: replica,t,x_hat,mean_degree,n_similar,n_dissimilar,skipped,rewired.
/// Each series must carry its replica index.
std::string abm_csv(const std::vector<MetricSeries>& replicas);

}  // namespace fragnet
