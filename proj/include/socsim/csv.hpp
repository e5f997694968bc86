#pragma once

#include <filesystem>
#include <vector>

#include "socsim/harness.hpp"

namespace socsim {

// Writes agents_evolution.csv and, when the environment carries an arm table,
// recommender_q.csv into out_dir. UTF-8, LF endings, decimals with 17
// significant digits so reruns are byte-comparable. Returns the paths written.
std::vector<std::filesystem::path> write_csv(const BatchResult& result,
                                             const std::filesystem::path& out_dir);

// Optional bulk dump of full per-replication traces (replication-major).
std::filesystem::path write_traces(const std::vector<ReplicationTrace>& traces,
                                   const std::filesystem::path& out_dir);

} // namespace socsim
