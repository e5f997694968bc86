#include "socsim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace socsim {

namespace {

struct Series {
    std::string label;
    std::vector<double> x, y;
};

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<Series> load_series(const std::filesystem::path& csv_path, ChartKind kind) {
    std::ifstream in(csv_path);
    if (!in) throw std::runtime_error("cannot read " + csv_path.string());
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + csv_path.string());

    const std::string want = kind == ChartKind::AgentsEvolution
                                 ? "iteration,non_addicted,addicted,fraction_non_addicted"
                                 : "iteration,arm,mean_q";
    std::string header = line;
    if (!header.empty() && header.back() == '\r') header.pop_back();
    if (header != want)
        throw std::runtime_error("CSV header mismatch for chart kind: got '" + header + "'");

    std::map<int, Series> by_key;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (kind == ChartKind::AgentsEvolution) {
            if (cells.size() != 4) throw std::runtime_error("malformed CSV row: " + line);
            auto& s = by_key[0];
            s.label = "non_addicted";
            s.x.push_back(std::stod(cells[0]));
            s.y.push_back(std::stod(cells[1]));
        } else {
            if (cells.size() != 3) throw std::runtime_error("malformed CSV row: " + line);
            const int arm = std::stoi(cells[1]);
            auto& s = by_key[arm];
            s.label = "arm " + std::to_string(arm);
            s.x.push_back(std::stod(cells[0]));
            s.y.push_back(std::stod(cells[2]));
        }
        ++rows;
    }
    if (rows == 0) throw std::runtime_error("CSV has no data rows: " + csv_path.string());

    std::vector<Series> series;
    for (auto& [k, s] : by_key) series.push_back(std::move(s));
    return series;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

} // namespace

void render_chart(const std::filesystem::path& csv_path, ChartKind kind,
                  const std::filesystem::path& out_path) {
    const auto series = load_series(csv_path, kind);

    double xmin = series[0].x[0], xmax = xmin, ymin = series[0].y[0], ymax = ymin;
    for (const auto& s : series) {
        for (double v : s.x) {
            xmin = std::min(xmin, v);
            xmax = std::max(xmax, v);
        }
        for (double v : s.y) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    }
    auto pad = [](double& lo, double& hi) {
        double span = hi - lo;
        if (span <= 0.0) span = std::max(1.0, std::fabs(hi));
        lo -= 0.05 * span;
        hi += 0.05 * span;
    };
    pad(xmin, xmax);
    pad(ymin, ymax);

    const double width = 960, height = 600;
    const double ml = 70, mr = 160, mt = 40, mb = 50;
    const double pw = width - ml - mr, ph = height - mt - mb;
    auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double y) { return mt + ph - (y - ymin) / (ymax - ymin) * ph; };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

    const char* title = kind == ChartKind::AgentsEvolution ? "Evolution of agents"
                                                           : "Recommender Q-values";
    svg << "<text x=\"" << ml << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"18\">"
        << title << "</text>\n";

    // axes
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
        << mt + ph << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
        << "\" stroke=\"black\"/>\n";

    const int n_ticks = 5;
    for (int i = 0; i <= n_ticks; ++i) {
        const double fx = xmin + (xmax - xmin) * i / n_ticks;
        const double fy = ymin + (ymax - ymin) * i / n_ticks;
        svg << "<line x1=\"" << sx(fx) << "\" y1=\"" << mt + ph << "\" x2=\"" << sx(fx)
            << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << sx(fx) << "\" y=\"" << mt + ph + 20
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" << num(fx)
            << "</text>\n";
        svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << sy(fy) << "\" x2=\"" << ml << "\" y2=\""
            << sy(fy) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << ml - 8 << "\" y=\"" << sy(fy) + 4
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << num(fy)
            << "</text>\n";
    }

    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const char* color = kPalette[i % (sizeof kPalette / sizeof *kPalette)];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            if (k) svg << ' ';
            svg << num(sx(s.x[k])) << ',' << num(sy(s.y[k]));
        }
        svg << "\"/>\n";
        // legend entry
        const double ly = mt + 14 + 18 * static_cast<double>(i);
        svg << "<line x1=\"" << ml + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << ml + pw + 34
            << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << ml + pw + 40 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
    }

    svg << "</svg>\n";

    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + out_path.string());
    out << svg.str();
}

} // namespace socsim
