// Acceptance suite: end-to-end checks of the field law, the map artifacts,
// and the closed-loop scenario behaviors, each printed as one PASS/FAIL line.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "featfield/command.hpp"
#include "featfield/field.hpp"
#include "featfield/grid_map.hpp"
#include "featfield/sim/filter.hpp"
#include "featfield/sim/scenario.hpp"
#include "support/oracles.hpp"
#include "support/scenes.hpp"

using namespace featfield;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

class Acceptance {
  public:
    void report(int index, const std::string& name, bool ok, const std::string& detail = "") {
        std::printf("[%s] %d. %s%s%s\n", ok ? "PASS" : "FAIL", index, name.c_str(),
                    detail.empty() ? "" : " -- ", detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures_;
    }

    int failures() const { return failures_; }

  private:
    int failures_ = 0;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// 1. charging policy matches the closed form on random angle pairs
void criterion_charging_policy(Acceptance& acc) {
    const auto start = std::chrono::steady_clock::now();
    oracle::Rand rand(1001u);
    double worst = 0.0;
    bool exact_ok = true;
    for (int i = 0; i < 10000; ++i) {
        const double neutral = rand.uniform(0.0, 2.0 * kPi * (1.0 - 1e-9));
        const double cutoff = attraction_cutoff(neutral);
        const double theta = rand.uniform(0.0, kPi);
        const double expected = theta <= cutoff ? 1.0 - theta / cutoff : 0.0;
        worst = std::max(worst, std::abs(charge_energy(theta, cutoff) - expected));

        if (charge_energy(0.0, cutoff) != 1.0) exact_ok = false;
        const double past = cutoff + rand.uniform(0.0, 1.0) * (kPi - cutoff);
        if (charge_energy(past, cutoff) != 0.0) exact_ok = false;
        if (charge_energy(cutoff, cutoff) != 0.0) exact_ok = false;
    }
    const double elapsed = seconds_since(start);
    char detail[128];
    std::snprintf(detail, sizeof(detail), "max |q - closed form| = %.3g, %.2fs", worst, elapsed);
    acc.report(1, "charging-policy exactness (10000 pairs, tol 1e-12, <1s)",
               worst <= 1e-12 && exact_ok && elapsed < 1.0, detail);
}

// 2. force law: continuity at the branch seams, magnitude bounded by energy
void criterion_force_law(Acceptance& acc) {
    FieldParams params;
    params.dead_zone_px = 50.0;
    params.spread_px = 150.0;
    const double cutoff = attraction_cutoff(params.neutral_angle_rad);

    bool ok = true;
    const double delta = 1e-10;
    for (double q : {1.0, 0.73, 0.21}) {
        for (double seam :
             {params.dead_zone_px, params.dead_zone_px + params.spread_px}) {
            const Charge below{{seam - delta, 0.0}, q, cutoff};
            const Charge above{{seam + delta, 0.0}, q, cutoff};
            if (std::abs(charge_force(below, params).norm() -
                         charge_force(above, params).norm()) >= 1e-9)
                ok = false;
        }
    }
    oracle::Rand rand(1002u);
    for (int i = 0; i < 1000; ++i) {
        const double d = 600.0 * i / 999.0;
        const double q = rand.uniform(0.0, 1.0);
        const Charge c{Vec2{d, 0.0}.rotated(rand.uniform(0.0, 2.0 * kPi)), q, cutoff};
        if (charge_force(c, params).norm() > q * (1.0 + 1e-12)) ok = false;
    }
    acc.report(2, "force-law continuity at d=r and d=s+r (tol 1e-9) and |f| <= q on 1000-point sweep",
               ok);
}

// 3. rotation equivariance and goal-scale invariance
void criterion_equivariance(Acceptance& acc) {
    oracle::Rand rand(1003u);
    const CameraRig rig = make_nadir_rig(120.0);
    const Vec2 pc = rig.principal_point();
    bool rotation_ok = true, scale_ok = true;
    for (int i = 0; i < 1000; ++i) {
        FieldParams params;
        params.dead_zone_px = rand.uniform(0.0, 100.0);
        params.spread_px = rand.uniform(20.0, 300.0);
        params.neutral_angle_rad = rand.uniform(0.0, 350.0) * kPi / 180.0;
        params.goal_weight = rand.uniform(0.0, 1.0);

        FeatureSet features, rotated;
        const double rho = rand.uniform(0.0, 2.0 * kPi);
        const Vec2 goal_dir = Vec2{1.0, 0.0}.rotated(rand.uniform(0.0, 2.0 * kPi));
        const int n = 1 + static_cast<int>(rand.uniform(0.0, 20.0));
        for (int k = 0; k < n; ++k) {
            const Vec2 offset{rand.uniform(-350.0, 350.0), rand.uniform(-350.0, 350.0)};
            features.push_back(pc + offset);
            rotated.push_back(pc + offset.rotated(rho));
        }
        const auto base = feature_direction(features, pc, goal_dir, params);
        const auto turned = feature_direction(rotated, pc, goal_dir.rotated(rho), params);
        if (base.has_value() != turned.has_value()) rotation_ok = false;
        if (base && turned) {
            const Vec2 expect = base->rotated(rho);
            if (std::abs(turned->x - expect.x) > 1e-6 || std::abs(turned->y - expect.y) > 1e-6)
                rotation_ok = false;
        }

        const Vec2 vg = Vec2{1.0, 0.0}.rotated(rand.uniform(0.0, 2.0 * kPi));
        const double scale = rand.uniform(1e-3, 1e3);
        const Vec2 a = compute_command(features, pc, vg, rig, params, 1.0);
        const Vec2 b = compute_command(features, pc, vg * scale, rig, params, 1.0);
        if (std::abs(a.x - b.x) > 1e-6 || std::abs(a.y - b.y) > 1e-6) scale_ok = false;
    }
    acc.report(3, "rotation equivariance and goal-scale invariance (1000 instances, tol 1e-6)",
               rotation_ok && scale_ok);
}

// 4. pipeline equals an independent per-charge summation
void criterion_oracle_equivalence(Acceptance& acc) {
    oracle::Rand rand(1004u);
    const Vec2 pc{360.0, 240.0};
    bool ok = true;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        FieldParams params;
        params.dead_zone_px = rand.uniform(0.0, 120.0);
        params.spread_px = rand.uniform(10.0, 400.0);
        params.neutral_angle_rad = rand.uniform(0.0, 2.0 * kPi * (1.0 - 1e-9));
        const Vec2 goal_dir = Vec2{1.0, 0.0}.rotated(rand.uniform(0.0, 2.0 * kPi));
        FeatureSet features;
        std::vector<oracle::V2> raw;
        const int n = static_cast<int>(rand.uniform(0.0, 21.0));
        for (int k = 0; k < n; ++k) {
            const double u = rand.uniform(0.0, 720.0);
            const double v = rand.uniform(0.0, 480.0);
            features.push_back({u, v});
            raw.push_back({u, v});
        }
        const auto expected = oracle::brute_force_field(
            raw, {pc.x, pc.y}, {goal_dir.x, goal_dir.y}, params.dead_zone_px, params.spread_px,
            params.neutral_angle_rad, params.force_epsilon);
        const Vec2 force = total_force(make_charges(features, pc, goal_dir, params), params);
        worst = std::max({worst, std::abs(force.x - expected.fx), std::abs(force.y - expected.fy)});
        const auto dir = feature_velocity(force, params);
        if (dir.has_value() != expected.has_direction) ok = false;
        if (dir)
            worst = std::max({worst, std::abs(dir->x - expected.dir_x),
                              std::abs(dir->y - expected.dir_y)});
    }
    char detail[96];
    std::snprintf(detail, sizeof(detail), "max deviation %.3g", worst);
    acc.report(4, "brute-force oracle equivalence (1000 instances, <=20 features, tol 1e-9)",
               ok && worst <= 1e-9, detail);
}

// 5. case-study map: both regions present, cells past the cluster along the
// goal direction are feature-friendly
void criterion_field_map(Acceptance& acc) {
    const auto start = std::chrono::steady_clock::now();
    FieldParams params;
    params.dead_zone_px = 50.0;
    params.spread_px = 150.0;
    params.neutral_angle_rad = 10.0 * kPi / 180.0;
    params.goal_weight = 0.1;

    const auto scene = scenes::make_offaxis_cluster_scene();
    const GridSpec grid{720, 480, 8};
    const FieldMap map = evaluate_grid(scene.features, scene.goal_dir_img, params, grid);

    int goal_friendly = 0, feature_friendly = 0;
    for (const FieldCell& cell : map.cells) {
        goal_friendly += cell.label == RegionLabel::GoalFriendly;
        feature_friendly += cell.label == RegionLabel::FeatureFriendly;
    }

    // probe the cells just past the cluster along the goal direction (the far
    // side as seen from the approach): the field must pull back toward the
    // cluster there, away from the goal
    bool far_side_ok = true;
    for (double t = scene.cluster_radius + 10.0; t <= scene.cluster_radius + 60.0; t += 10.0) {
        for (double w : {-15.0, 0.0, 15.0}) {
            const Vec2 transverse{-scene.goal_dir_img.y, scene.goal_dir_img.x};
            const Vec2 probe =
                scene.cluster_center + scene.goal_dir_img * t + transverse * w;
            const int col = std::clamp(static_cast<int>(probe.x) / grid.step_px, 0,
                                       grid.cols() - 1);
            const int row = std::clamp(static_cast<int>(probe.y) / grid.step_px, 0,
                                       grid.rows() - 1);
            if (map.at(col, row).label != RegionLabel::FeatureFriendly) far_side_ok = false;
        }
    }
    const double elapsed = seconds_since(start);
    char detail[128];
    std::snprintf(detail, sizeof(detail), "goal_friendly=%d feature_friendly=%d, %.2fs",
                  goal_friendly, feature_friendly, elapsed);
    acc.report(5, "case-study field map: both regions nonempty, far side feature-friendly (<5s)",
               goal_friendly > 0 && feature_friendly > 0 && far_side_ok && elapsed < 5.0, detail);
}

// 6. closed-loop behaviors on the bundled arena
void criterion_scenario_behaviors(Acceptance& acc) {
    const auto start = std::chrono::steady_clock::now();
    const std::string config = std::string(FEATFIELD_CONFIG_DIR) + "/arena_detour.ini";
    const sim::Scenario base = sim::load_scenario(IniDocument::load(config));

    int lost = 0;
    for (int k = 0; k < 20; ++k) {
        sim::Scenario sc = base;
        sc.field.goal_weight = 1.0;  // straight path
        sc.run.seed = base.run.seed + k;
        if (sim::run_scenario(sc).outcome == sim::Outcome::LostTracking) ++lost;
    }

    int success = 0;
    bool success_valid = true;
    for (int k = 0; k < 20; ++k) {
        sim::Scenario sc = base;  // lambda = 0.45, neutral segment 30 deg from the config
        sc.run.seed = base.run.seed + k;
        const sim::RunResult r = sim::run_scenario(sc);
        if (r.outcome == sim::Outcome::Success) {
            ++success;
            if (distance(r.trajectory.back().position, sc.arena.goal) > 0.2)
                success_valid = false;
            for (const sim::FrameRecord& rec : r.trajectory)
                if (rec.lost) success_valid = false;
        }
    }
    const double elapsed = seconds_since(start);
    const bool config_ok = std::abs(base.field.goal_weight - 0.45) < 1e-12 &&
                           std::abs(base.field.neutral_angle_rad - 30.0 * kPi / 180.0) < 1e-12 &&
                           std::abs(base.arena.goal_radius - 0.2) < 1e-12;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "straight: %d/20 lost; guided: %d/20 success; %.1fs", lost, success, elapsed);
    acc.report(6,
               "bundled arena: straight path loses tracking >=95%, guided runs succeed >=95% "
               "(20 seeds each, <60s)",
               lost >= 19 && success >= 19 && success_valid && config_ok && elapsed < 60.0,
               detail);
}

// 7. low-pass filter: DC gain one, smoothing factor from the RC formula
void criterion_low_pass(Acceptance& acc) {
    const Vec2 c{0.6, -0.8};
    const Vec2 fixed = sim::low_pass(c, c, sim::lowpass_alpha(1.0 / 30.0, 20.0));
    const bool dc_ok = fixed.x == c.x && fixed.y == c.y;
    const double alpha = sim::lowpass_alpha(1.0 / 30.0, 20.0);
    const bool alpha_ok =
        std::abs(alpha - 0.8073) < 1e-4 && std::abs(alpha - 0.8072768486423768) < 1e-12;
    char detail[64];
    std::snprintf(detail, sizeof(detail), "alpha = %.10f", alpha);
    acc.report(7, "low-pass filter: exact DC gain 1, alpha matches RC formula (tol 1e-4)",
               dc_ok && alpha_ok, detail);
}

// 8. the simulate command replays byte-identically
void criterion_determinism(Acceptance& acc) {
    const std::string config = std::string(FEATFIELD_CONFIG_DIR) + "/arena_detour.ini";
    const fs::path base = fs::temp_directory_path() / "featfield_acceptance";
    fs::remove_all(base);
    fs::create_directories(base / "a");
    fs::create_directories(base / "b");
    bool ok = true;
    for (const char* sub : {"a", "b"}) {
        const std::string cmd = std::string(FEATFIELD_CLI_PATH) + " simulate " + config +
                                " --out " + (base / sub).string() + " > /dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) ok = false;
    }
    const std::string a = slurp(base / "a" / "arena_detour-s1" / "trajectory.csv");
    const std::string b = slurp(base / "b" / "arena_detour-s1" / "trajectory.csv");
    char detail[64];
    std::snprintf(detail, sizeof(detail), "%zu bytes each", a.size());
    acc.report(8, "repeated simulate runs produce byte-identical trajectory CSVs",
               ok && !a.empty() && a == b, detail);
}

}  // namespace

int main() {
    Acceptance acc;
    criterion_charging_policy(acc);
    criterion_force_law(acc);
    criterion_equivariance(acc);
    criterion_oracle_equivalence(acc);
    criterion_field_map(acc);
    criterion_scenario_behaviors(acc);
    criterion_low_pass(acc);
    criterion_determinism(acc);
    if (acc.failures() > 0) {
        std::printf("%d criterion(s) failed\n", acc.failures());
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
