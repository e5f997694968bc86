#include "socsim/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace socsim {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary); // binary: LF endings everywhere
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

} // namespace

std::vector<std::filesystem::path> write_csv(const BatchResult& result,
                                             const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> paths;

    {
        const auto path = out_dir / "agents_evolution.csv";
        auto out = open_out(path);
        out << "iteration,non_addicted,addicted,fraction_non_addicted\n";
        for (int t = 0; t < result.horizon; ++t) {
            const int na = result.non_addicted[t];
            const double frac = static_cast<double>(na) / result.n_replications;
            out << t << ',' << na << ',' << (result.n_replications - na) << ',' << num(frac)
                << '\n';
        }
        paths.push_back(path);
    }

    if (result.has_arm_table) {
        const auto path = out_dir / "recommender_q.csv";
        auto out = open_out(path);
        out << "iteration,arm,mean_q\n";
        for (int t = 0; t < result.horizon; ++t)
            for (int k = 0; k < result.n_arms; ++k)
                out << t << ',' << k << ','
                    << num(result.mean_q_arms[static_cast<std::size_t>(t) * result.n_arms + k])
                    << '\n';
        paths.push_back(path);
    }

    return paths;
}

std::filesystem::path write_traces(const std::vector<ReplicationTrace>& traces,
                                   const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const auto path = out_dir / "replication_traces.csv";
    auto out = open_out(path);
    out << "replication,iteration,state,arm,action,user_reward,recommender_reward,addicted\n";
    for (std::size_t i = 0; i < traces.size(); ++i) {
        const auto& steps = traces[i].steps;
        for (std::size_t t = 0; t < steps.size(); ++t) {
            const auto& rec = steps[t];
            out << i << ',' << t << ',' << rec.state << ',' << rec.arm << ',' << rec.action << ','
                << num(rec.user_reward) << ',' << num(rec.rec_reward) << ','
                << (rec.addicted ? 1 : 0) << '\n';
        }
    }
    return path;
}

} // namespace socsim
