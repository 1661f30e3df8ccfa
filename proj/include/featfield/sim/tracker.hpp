#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace featfield::sim {

/// Localization-health thresholds.
struct TrackerParams {
    int min_inliers = 8;  ///< co-visible features needed per frame
    int patience = 15;    ///< consecutive starved frames before the track is lost

    void validate() const {
        if (min_inliers < 1) throw std::invalid_argument("tracker: min_inliers must be >= 1");
        if (patience < 1) throw std::invalid_argument("tracker: patience must be >= 1");
    }
};

/**
 * @brief Co-visibility proxy for visual-odometry health.
 *
 * Counts world identities shared between consecutive frames; a sustained
 * shortage declares the track lost, and a lost track stays lost (no
 * relocalization).
 */
struct TrackerState {
    std::vector<std::uint32_t> previous_ids;  ///< sorted
    int low_streak = 0;
    bool lost = false;
};

/**
 * @brief Advance the tracker by one frame and return the inlier count.
 *
 * @param current_ids sorted world identities visible this frame
 */
inline int track_step(TrackerState& tracker, const std::vector<std::uint32_t>& current_ids,
                      const TrackerParams& params) {
    int inliers = 0;
    auto a = tracker.previous_ids.begin();
    auto b = current_ids.begin();
    while (a != tracker.previous_ids.end() && b != current_ids.end()) {
        if (*a < *b) ++a;
        else if (*b < *a) ++b;
        else { ++inliers; ++a; ++b; }
    }
    if (!tracker.lost) {
        if (inliers < params.min_inliers) {
            if (++tracker.low_streak >= params.patience) tracker.lost = true;
        } else {
            tracker.low_streak = 0;
        }
    }
    tracker.previous_ids = current_ids;
    return inliers;
}

}  // namespace featfield::sim
