#pragma once

#include <iosfwd>
#include <vector>

#include "orthoplanar/core.hpp"
#include "orthoplanar/rng.hpp"

namespace orthoplanar {

struct SimOutcome {
    MotionState final;
    RegionClass region;
    double t_vertical = 0.0;

    bool operator==(const SimOutcome&) const = default;
};

struct Breakpoint {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    Direction dir{};
};

/// Breakpoints at t = 0, at every Poisson epoch, and at t_end. Motion between
/// consecutive breakpoints is linear with speed c along the earlier
/// breakpoint's direction.
struct Trajectory {
    std::vector<Breakpoint> breakpoints;
};

/// A row of the (T(t), Y(t)) path on the triangle |y| <= c s.
struct TrianglePoint {
    double t = 0.0;
    double s = 0.0;
    double y = 0.0;
};

/// Simulates (X, Y, T) up to t_end. Stream layout: one uniform for the initial
/// direction, then per event an exponential waiting time followed by one
/// uniform for the turn.
SimOutcome simulate(const ModelParams& params, double t_end, RandomStream& rng);

/// Region of the terminal point, decided from the event history only.
RegionClass classify(const MotionState& state, const ModelParams& params, double t_end);

/// Same path as simulate() for the same stream state, with all breakpoints.
Trajectory export_trajectory(const ModelParams& params, double t_end, RandomStream& rng);

/// Time spent on vertical segments, recomputed from the breakpoints.
double replay_vertical_time(const Trajectory& traj);

/// Replays the breakpoints into the (T, Y) path; one row per breakpoint.
std::vector<TrianglePoint> triangle_path(const Trajectory& traj);

/// Trajectory CSV: header "t,x,y,dir", LF endings, shortest round-trip
/// doubles. With path_id >= 0 a leading "path" column is written instead
/// (header "path,t,x,y,dir").
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, long path_id = -1,
                          bool header = true);
void write_triangle_csv(std::ostream& out, const std::vector<TrianglePoint>& rows,
                        long path_id = -1, bool header = true);

}  // namespace orthoplanar
