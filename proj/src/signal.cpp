#include "fracorder/signal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracorder {

TimeSignal TimeSignal::constant(std::vector<double> per_mode) {
    TimeSignal s;
    s.kind = SignalKind::ConstantInTime;
    s.coeffs = std::move(per_mode);
    return s;
}

TimeSignal TimeSignal::sampled(std::vector<double> grid,
                               std::vector<std::vector<double>> values) {
    TimeSignal s;
    s.kind = SignalKind::Sampled;
    s.grid = std::move(grid);
    s.values = std::move(values);
    return s;
}

int TimeSignal::modes() const {
    switch (kind) {
        case SignalKind::Zero: return -1;
        case SignalKind::ConstantInTime: return static_cast<int>(coeffs.size());
        case SignalKind::Sampled: return static_cast<int>(values.size());
    }
    return -1;
}

double TimeSignal::value(int mode, double t) const {
    switch (kind) {
        case SignalKind::Zero: return 0.0;
        case SignalKind::ConstantInTime: return coeffs.at(static_cast<std::size_t>(mode));
        case SignalKind::Sampled: break;
    }
    const auto& v = values.at(static_cast<std::size_t>(mode));
    if (t <= grid.front()) return v.front();
    if (t >= grid.back()) return v.back();
    const auto it = std::upper_bound(grid.begin(), grid.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - grid.begin());
    const std::size_t lo = hi - 1;
    const double w = (t - grid[lo]) / (grid[hi] - grid[lo]);
    return v[lo] + w * (v[hi] - v[lo]);
}

double TimeSignal::sup_abs(int mode) const {
    switch (kind) {
        case SignalKind::Zero: return 0.0;
        case SignalKind::ConstantInTime:
            return std::abs(coeffs.at(static_cast<std::size_t>(mode)));
        case SignalKind::Sampled: break;
    }
    double sup = 0.0;
    for (double x : values.at(static_cast<std::size_t>(mode))) sup = std::max(sup, std::abs(x));
    return sup;
}

bool TimeSignal::mode_is_zero(int mode) const {
    if (kind == SignalKind::Zero) return true;
    if (mode >= modes()) return true;
    return sup_abs(mode) == 0.0;
}

void TimeSignal::validate(int basis_modes, double horizon) const {
    switch (kind) {
        case SignalKind::Zero: return;
        case SignalKind::ConstantInTime: {
            if (static_cast<int>(coeffs.size()) != basis_modes)
                throw std::invalid_argument("TimeSignal: coefficient count differs from basis");
            for (double c : coeffs)
                if (!std::isfinite(c)) throw std::invalid_argument("TimeSignal: non-finite value");
            return;
        }
        case SignalKind::Sampled: break;
    }
    if (grid.size() < 2) throw std::invalid_argument("TimeSignal: sampled grid needs >= 2 nodes");
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        if (!(grid[i] < grid[i + 1]))
            throw std::invalid_argument("TimeSignal: sampled grid must be strictly increasing");
    const double pad = 1e-12 * (1.0 + horizon);
    if (grid.front() > pad || grid.back() < horizon - pad)
        throw std::invalid_argument("TimeSignal: sampled grid must span [0, T]");
    if (static_cast<int>(values.size()) != basis_modes)
        throw std::invalid_argument("TimeSignal: mode count differs from basis");
    for (const auto& row : values) {
        if (row.size() != grid.size())
            throw std::invalid_argument("TimeSignal: value row length differs from grid");
        for (double x : row)
            if (!std::isfinite(x)) throw std::invalid_argument("TimeSignal: non-finite value");
    }
}

}  // namespace fracorder
