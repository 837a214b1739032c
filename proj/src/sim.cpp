#include "orthoplanar/sim.hpp"

#include <algorithm>
#include <ostream>

#include "orthoplanar/format.hpp"

namespace orthoplanar {
namespace {

struct NoSink {
    void operator()(double, double, double, Direction) const noexcept {}
};

struct BreakpointSink {
    std::vector<Breakpoint>* out;
    void operator()(double t, double x, double y, Direction dir) const {
        out->push_back({t, x, y, dir});
    }
};

template <class Sink>
MotionState run_path(const ModelParams& params, double t_end, RandomStream& rng,
                     Sink&& sink) {
    MotionState state;
    state.dir = Direction(static_cast<int>(rng.uniform() * 4.0));
    state.initial_dir = state.dir;
    sink(0.0, 0.0, 0.0, state.dir);

    const double c = params.c();
    for (;;) {
        const double wait = rng.exponential(params.lambda());
        const bool last = state.t + wait >= t_end;
        const double dt = last ? t_end - state.t : wait;

        state.history.record_direction(state.dir);
        state.x += c * dt * state.dir.dx();
        state.y += c * dt * state.dir.dy();
        if (state.dir.vertical()) state.t_vertical += dt;

        if (last) {
            state.t = t_end;
            if (!state.history.ever_horizontal()) state.t_vertical = t_end;
            state.t_vertical = std::min(state.t_vertical, t_end);
            sink(state.t, state.x, state.y, state.dir);
            return state;
        }
        state.t += dt;

        const TurnKind turn = sample_turn(params, rng.uniform());
        state.history.record_turn(turn, state.n_events);
        ++state.n_events;
        state.dir = apply_turn(state.dir, turn);
        sink(state.t, state.x, state.y, state.dir);
    }
}

}  // namespace

RegionClass classify(const MotionState& state, const ModelParams& params, double t_end) {
    (void)params;
    (void)t_end;
    RegionClass region;
    const PathHistory& h = state.history;
    if (state.n_events == 0) {
        region.kind = RegionKind::Vertex;
        region.index = state.dir.index();
        region.axis = state.dir.vertical() ? Axis::Vertical : Axis::Horizontal;
        region.coordinate = state.dir.vertical() ? state.y : state.x;
        return region;
    }
    if (h.alternating_turns) {
        // Exactly two contiguous directions {j, j+1} were used.
        int quadrant = 0;
        for (int j = 0; j < 4; ++j) {
            if (h.visited_dir(j) && h.visited_dir((j + 1) % 4)) {
                quadrant = j;
                break;
            }
        }
        double xr = state.x;
        double yr = state.y;
        switch (quadrant) {
            case 1:
                xr = state.y;
                yr = -state.x;
                break;
            case 2:
                xr = -state.x;
                yr = -state.y;
                break;
            case 3:
                xr = -state.y;
                yr = state.x;
                break;
            default:
                break;
        }
        region.kind = RegionKind::SideInterior;
        region.index = quadrant;
        region.coordinate = xr - yr;
        return region;
    }
    if (h.only_reflections) {
        region.kind = RegionKind::DiagonalInterior;
        region.axis = state.initial_dir.vertical() ? Axis::Vertical : Axis::Horizontal;
        region.index = region.axis == Axis::Vertical ? 1 : 0;
        region.coordinate = region.axis == Axis::Vertical ? state.y : state.x;
        return region;
    }
    region.kind = RegionKind::Interior;
    return region;
}

SimOutcome simulate(const ModelParams& params, double t_end, RandomStream& rng) {
    SimOutcome out;
    out.final = run_path(params, t_end, rng, NoSink{});
    out.region = classify(out.final, params, t_end);
    out.t_vertical = out.final.t_vertical;
    return out;
}

Trajectory export_trajectory(const ModelParams& params, double t_end, RandomStream& rng) {
    Trajectory traj;
    run_path(params, t_end, rng, BreakpointSink{&traj.breakpoints});
    return traj;
}

double replay_vertical_time(const Trajectory& traj) {
    double total = 0.0;
    const auto& b = traj.breakpoints;
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
        if (b[i].dir.vertical()) total += b[i + 1].t - b[i].t;
    }
    return total;
}

std::vector<TrianglePoint> triangle_path(const Trajectory& traj) {
    std::vector<TrianglePoint> rows;
    const auto& b = traj.breakpoints;
    rows.reserve(b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (i > 0 && b[i - 1].dir.vertical()) s += b[i].t - b[i - 1].t;
        rows.push_back({b[i].t, s, b[i].y});
    }
    return rows;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, long path_id,
                          bool header) {
    if (header) out << (path_id >= 0 ? "path,t,x,y,dir\n" : "t,x,y,dir\n");
    for (const auto& bp : traj.breakpoints) {
        if (path_id >= 0) out << path_id << ',';
        out << format_double(bp.t) << ',' << format_double(bp.x) << ','
            << format_double(bp.y) << ',' << bp.dir.index() << '\n';
    }
}

void write_triangle_csv(std::ostream& out, const std::vector<TrianglePoint>& rows,
                        long path_id, bool header) {
    if (header) out << (path_id >= 0 ? "path,t,s,y\n" : "t,s,y\n");
    for (const auto& row : rows) {
        if (path_id >= 0) out << path_id << ',';
        out << format_double(row.t) << ',' << format_double(row.s) << ','
            << format_double(row.y) << '\n';
    }
}

}  // namespace orthoplanar
