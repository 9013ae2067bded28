#pragma once

#include <vector>

namespace fracorder {

enum class SignalKind { Zero, ConstantInTime, Sampled };

/// Per-mode time dependence of a forcing term or tracking target. Mode slots
/// are addressed by position in the owning basis. Sampled signals are
/// interpolated piecewise-linearly between grid nodes.
struct TimeSignal {
    SignalKind kind = SignalKind::Zero;
    std::vector<double> coeffs;               // ConstantInTime: one value per mode
    std::vector<double> grid;                 // Sampled: strictly increasing, spans [0, T]
    std::vector<std::vector<double>> values;  // Sampled: values[mode][node]

    static TimeSignal zero() { return {}; }
    static TimeSignal constant(std::vector<double> per_mode);
    static TimeSignal sampled(std::vector<double> grid,
                              std::vector<std::vector<double>> values);

    /// Number of mode slots carried by the signal; -1 when any width fits (Zero).
    int modes() const;

    /// f_mode(t); piecewise linear for Sampled, clamped to the grid range.
    double value(int mode, double t) const;

    /// sup_t |f_mode(t)| over the carried representation.
    double sup_abs(int mode) const;

    /// True when the mode contributes nothing at any time.
    bool mode_is_zero(int mode) const;

    /// Throws std::invalid_argument on structural defects (non-finite values,
    /// non-increasing grid, grid not spanning [0, T], width mismatches).
    void validate(int basis_modes, double horizon) const;
};

}  // namespace fracorder
