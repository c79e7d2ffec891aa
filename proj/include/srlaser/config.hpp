#ifndef SRLASER_CONFIG_HPP
#define SRLASER_CONFIG_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "srlaser/model.hpp"

namespace srlaser {

enum class Task { PhaseDiagram, Hysteresis, Spectra, SqueezeMap, QSnapshots, ExactSteadyState };

const char* task_name(Task t);
std::optional<Task> task_from_name(const std::string& name);

struct AxisSpec {
    std::string param; ///< a ModelParams field or "g_sqrt_n"
    double min = 0.0;
    double max = 0.0;
    int count = 1;
    bool log_scale = false;

    double value(int i) const;
};

struct SpectraConfig {
    double omega_min = -8.0;
    double omega_max = 8.0;
    int omega_count = 401;
};

struct HysteresisConfig {
    double w_start = 0.02;
    double w_end = 1.5;
    int n_steps = 100;
};

struct QSnapConfig {
    std::vector<double> times{0.5, 4.0, 40.0};
    double z0 = 0.0;
    double phi0 = 0.0;
    int resolution = 161;
    double half_extent = 5.0;
};

struct ExactConfig {
    int n_cut_start = 8;
    int n_cut_max = 256;
    double tail_tol = 1e-8;
};

struct SweepSpec {
    ModelParams base;
    std::vector<AxisSpec> axes; ///< 0, 1 or 2 axes
    std::set<Task> tasks{Task::PhaseDiagram};
    std::string out_dir = "out";
    int jobs = 1;
    SpectraConfig spectra;
    HysteresisConfig hysteresis;
    QSnapConfig qsnap;
    ExactConfig exact;

    int point_count() const;
    /// Model parameters at flattened grid point i (row-major, axis1 fastest).
    ModelParams point(int i) const;
    void validate() const;
};

/// Parse the line-oriented `key = value` config with [sections].
/// Throws ParseError (with line number), UnknownKey, or RangeError.
SweepSpec load_config(const std::string& path);
SweepSpec parse_config(const std::string& text);

} // namespace srlaser

#endif
