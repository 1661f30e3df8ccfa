#pragma once

#include <atomic>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "featfield/sim/scenario.hpp"

namespace featfield::sim {

/// One-parameter sweep: every value is run `repetitions` times with derived seeds.
struct SweepSpec {
    std::string parameter;       ///< one of lambda, theta_cs_hat_deg, r, s
    std::vector<double> values;
    int repetitions = 1;
    std::uint64_t base_seed = 1;

    void validate() const {
        if (parameter != "lambda" && parameter != "theta_cs_hat_deg" && parameter != "r" &&
            parameter != "s")
            throw std::invalid_argument("sweep: unknown parameter '" + parameter +
                                        "' (expected lambda, theta_cs_hat_deg, r or s)");
        if (values.empty()) throw std::invalid_argument("sweep: no values given");
        if (repetitions < 1) throw std::invalid_argument("sweep: repetitions must be >= 1");
    }
};

inline void apply_field_parameter(Scenario& scenario, const std::string& name, double value) {
    if (name == "lambda") scenario.field.goal_weight = value;
    else if (name == "theta_cs_hat_deg")
        scenario.field.neutral_angle_rad = value * std::numbers::pi / 180.0;
    else if (name == "r") scenario.field.dead_zone_px = value;
    else if (name == "s") scenario.field.spread_px = value;
    else throw std::invalid_argument("sweep: unknown parameter '" + name + "'");
    scenario.field.validate();
}

struct SweepCell {
    double value = 0.0;
    int repetition = 0;
    std::uint64_t seed = 0;
    RunResult result;
};

struct SweepSummaryRow {
    double value = 0.0;
    double success_rate = 0.0;
    double mean_path_length = 0.0;
    double mean_min_inliers = 0.0;
};

struct SweepResult {
    std::vector<SweepCell> cells;        ///< value-major, repetition-minor order
    std::vector<SweepSummaryRow> summary;
};

/**
 * @brief Run the sweep grid on a worker pool.
 *
 * Cell (value index i, repetition k) runs with seed base_seed + i*reps + k.
 * Cells share nothing mutable; the output ordering is independent of the
 * worker count.
 */
inline SweepResult run_sweep(const Scenario& base, const SweepSpec& spec, unsigned workers = 0) {
    spec.validate();
    {
        Scenario probe = base;  // fail fast on out-of-range values
        for (double v : spec.values) apply_field_parameter(probe, spec.parameter, v);
    }
    SweepResult out;
    out.cells.resize(spec.values.size() * static_cast<std::size_t>(spec.repetitions));
    for (std::size_t i = 0; i < spec.values.size(); ++i)
        for (int k = 0; k < spec.repetitions; ++k) {
            SweepCell& cell = out.cells[i * spec.repetitions + k];
            cell.value = spec.values[i];
            cell.repetition = k;
            cell.seed = spec.base_seed + i * spec.repetitions + k;
        }

    auto run_cell = [&](SweepCell& cell) {
        Scenario scenario = base;
        apply_field_parameter(scenario, spec.parameter, cell.value);
        scenario.run.seed = cell.seed;
        cell.result = run_scenario(scenario);
    };

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    if (workers <= 1 || out.cells.size() <= 1) {
        for (SweepCell& cell : out.cells) run_cell(cell);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const unsigned count = std::min<std::size_t>(workers, out.cells.size());
        for (unsigned w = 0; w < count; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < out.cells.size();
                     i = next.fetch_add(1))
                    run_cell(out.cells[i]);
            });
        for (auto& t : pool) t.join();
    }

    for (std::size_t i = 0; i < spec.values.size(); ++i) {
        SweepSummaryRow row;
        row.value = spec.values[i];
        for (int k = 0; k < spec.repetitions; ++k) {
            const RunResult& r = out.cells[i * spec.repetitions + k].result;
            row.success_rate += r.outcome == Outcome::Success ? 1.0 : 0.0;
            row.mean_path_length += r.path_length;
            row.mean_min_inliers += r.min_inliers;
        }
        row.success_rate /= spec.repetitions;
        row.mean_path_length /= spec.repetitions;
        row.mean_min_inliers /= spec.repetitions;
        out.summary.push_back(row);
    }
    return out;
}

/// Summary serialized as CSV.
inline std::string sweep_summary_csv(const SweepResult& sweep, const std::string& parameter) {
    std::string out = parameter + ",success_rate,mean_path_length,mean_min_inliers\n";
    for (const SweepSummaryRow& row : sweep.summary) {
        out += format_number(row.value);
        out += ',';
        out += format_number(row.success_rate);
        out += ',';
        out += format_number(row.mean_path_length);
        out += ',';
        out += format_number(row.mean_min_inliers);
        out += '\n';
    }
    return out;
}

}  // namespace featfield::sim
