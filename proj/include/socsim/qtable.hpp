#pragma once

#include <cassert>
#include <span>
#include <vector>

namespace socsim {

using StateId = int;
using ActionId = int;

// Dense action-value table over a ragged (state, action) index space.
// Values are stored flat; per-state rows are contiguous so Bellman sweeps
// and argmax scans stay cache-friendly.
class QTable {
public:
    QTable() = default;

    explicit QTable(std::span<const int> actions_per_state, double init = 0.0) {
        offsets_.reserve(actions_per_state.size() + 1);
        offsets_.push_back(0);
        for (int n : actions_per_state) {
            assert(n >= 1);
            offsets_.push_back(offsets_.back() + n);
        }
        values_.assign(static_cast<std::size_t>(offsets_.back()), init);
    }

    int n_states() const { return static_cast<int>(offsets_.size()) - 1; }
    int n_actions(StateId s) const { return offsets_[s + 1] - offsets_[s]; }
    int n_entries() const { return static_cast<int>(values_.size()); }

    double& at(StateId s, ActionId a) { return values_[offsets_[s] + a]; }
    double at(StateId s, ActionId a) const { return values_[offsets_[s] + a]; }

    std::span<const double> row(StateId s) const {
        return {values_.data() + offsets_[s], static_cast<std::size_t>(n_actions(s))};
    }
    std::span<double> row(StateId s) {
        return {values_.data() + offsets_[s], static_cast<std::size_t>(n_actions(s))};
    }

    double row_max(StateId s) const {
        auto r = row(s);
        double m = r[0];
        for (double v : r) m = v > m ? v : m;
        return m;
    }

    // Lowest-index maximizing action; the project-wide deterministic tie-break.
    ActionId row_argmax(StateId s) const {
        auto r = row(s);
        int best = 0;
        for (int a = 1; a < static_cast<int>(r.size()); ++a)
            if (r[a] > r[best]) best = a;
        return best;
    }

    // All actions within tie_tol of the row maximum, ascending.
    std::vector<ActionId> greedy_set(StateId s, double tie_tol) const {
        auto r = row(s);
        const double m = row_max(s);
        std::vector<ActionId> out;
        for (int a = 0; a < static_cast<int>(r.size()); ++a)
            if (m - r[a] <= tie_tol) out.push_back(a);
        return out;
    }

    std::span<const double> flat() const { return values_; }
    std::span<double> flat() { return values_; }

    bool same_shape(const QTable& other) const { return offsets_ == other.offsets_; }

    friend bool operator==(const QTable&, const QTable&) = default;

private:
    std::vector<int> offsets_;
    std::vector<double> values_;
};

} // namespace socsim
