#pragma once

#include <filesystem>

namespace socsim {

enum class ChartKind { AgentsEvolution, RecommenderQ };

// Renders a CSV produced by write_csv as a self-contained SVG line chart:
// agents_evolution plots non_addicted over iterations, recommender_q one
// polyline per arm with a legend. Linear axes auto-scaled to the data with 5%
// padding. Throws on schema mismatch or an empty CSV.
void render_chart(const std::filesystem::path& csv_path, ChartKind kind,
                  const std::filesystem::path& out_path);

} // namespace socsim
