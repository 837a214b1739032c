#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "orthoplanar/errors.hpp"

namespace orthoplanar {

/// Parameters (lambda, c, p, q) of the planar motion. Only constructible
/// through validate_params, so every instance satisfies lambda, c > 0,
/// p, q >= 0 and p + q <= 1.
class ModelParams {
public:
    double lambda() const noexcept { return lambda_; }
    double c() const noexcept { return c_; }
    double p() const noexcept { return p_; }
    double q() const noexcept { return q_; }

    /// Reflection probability 1 - p - q, computed on demand.
    double reflect() const noexcept { return 1.0 - p_ - q_; }

    bool operator==(const ModelParams&) const = default;

private:
    ModelParams(double lambda, double c, double p, double q) noexcept
        : lambda_(lambda), c_(c), p_(p), q_(q) {}

    friend ModelParams validate_params(double lambda, double c, double p,
                                       double q);

    double lambda_;
    double c_;
    double p_;
    double q_;
};

/// Throws NonPositiveRate or InvalidProbability.
ModelParams validate_params(double lambda, double c, double p, double q);

/// Tolerance used when deciding whether a parameter set lies on one of the
/// special manifolds p + q = 1 or p = q.
inline constexpr double kRegimeTolerance = 1e-12;

bool no_reflection(const ModelParams& params) noexcept;
bool symmetric_turns(const ModelParams& params) noexcept;

/// One of the four orthogonal directions d_j = (cos(j*pi/2), sin(j*pi/2)).
class Direction {
public:
    constexpr Direction() noexcept = default;
    constexpr explicit Direction(int index) noexcept
        : index_(static_cast<std::uint8_t>(((index % 4) + 4) % 4)) {}

    constexpr int index() const noexcept { return index_; }
    constexpr bool vertical() const noexcept { return (index_ & 1) != 0; }
    constexpr bool horizontal() const noexcept { return !vertical(); }

    /// Unit components, exactly in {-1, 0, 1}.
    constexpr int dx() const noexcept {
        constexpr std::array<int, 4> table{1, 0, -1, 0};
        return table[index_];
    }
    constexpr int dy() const noexcept {
        constexpr std::array<int, 4> table{0, 1, 0, -1};
        return table[index_];
    }

    constexpr bool operator==(const Direction&) const = default;

private:
    std::uint8_t index_ = 0;
};

enum class TurnKind : std::uint8_t { CCW, CW, REFLECT };

std::string_view to_string(TurnKind kind) noexcept;

constexpr Direction apply_turn(Direction dir, TurnKind kind) noexcept {
    switch (kind) {
        case TurnKind::CCW:
            return Direction(dir.index() + 1);
        case TurnKind::CW:
            return Direction(dir.index() + 3);
        case TurnKind::REFLECT:
            break;
    }
    return Direction(dir.index() + 2);
}

/// CCW on [0, p), CW on [p, p + q), REFLECT on [p + q, 1).
TurnKind sample_turn(const ModelParams& params, double u) noexcept;

/// Event-history flags of a path. Both start true and can only be cleared.
struct PathHistory {
    bool only_reflections = true;
    bool alternating_turns = true;
    /// Bit j set once the particle has moved along d_j for positive time.
    std::uint8_t visited = 0;

    void record_turn(TurnKind kind, std::uint32_t events_before) noexcept;
    void record_direction(Direction dir) noexcept {
        visited = static_cast<std::uint8_t>(visited | (1u << dir.index()));
    }

    bool visited_dir(int j) const noexcept { return (visited >> j) & 1u; }
    bool ever_vertical() const noexcept { return visited_dir(1) || visited_dir(3); }
    bool ever_horizontal() const noexcept { return visited_dir(0) || visited_dir(2); }

    bool operator==(const PathHistory&) const = default;

private:
    TurnKind last_turn_ = TurnKind::REFLECT;
};

struct MotionState {
    double x = 0.0;
    double y = 0.0;
    double t = 0.0;
    Direction dir{};
    Direction initial_dir{};
    double t_vertical = 0.0;
    std::uint32_t n_events = 0;
    PathHistory history{};

    bool operator==(const MotionState&) const = default;
};

enum class RegionKind : std::uint8_t { Vertex, SideInterior, DiagonalInterior, Interior };
enum class Axis : std::uint8_t { Horizontal, Vertical };

/// Which singular or absolutely continuous component of the law a terminal
/// point belongs to.
struct RegionClass {
    RegionKind kind = RegionKind::Interior;
    /// Vertex: direction index. SideInterior: quadrant 0..3 (the side joining
    /// the vertices c*t*d_j and c*t*d_{j+1}).
    int index = 0;
    /// SideInterior: coordinate along the side after rotating it into the
    /// first quadrant (eta = x - y there). DiagonalInterior: signed position
    /// along the axis.
    double coordinate = 0.0;
    Axis axis = Axis::Horizontal;

    bool operator==(const RegionClass&) const = default;
};

std::string_view to_string(RegionKind kind) noexcept;

}  // namespace orthoplanar
