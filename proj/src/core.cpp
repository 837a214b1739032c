#include "orthoplanar/core.hpp"

#include <cmath>
#include <sstream>

namespace orthoplanar {

ModelParams validate_params(double lambda, double c, double p, double q) {
    if (!(lambda > 0.0) || !std::isfinite(lambda) || !(c > 0.0) || !std::isfinite(c)) {
        std::ostringstream msg;
        msg << "rate and speed must be positive and finite (lambda=" << lambda
            << ", c=" << c << ")";
        throw NonPositiveRate(msg.str());
    }
    if (!(p >= 0.0) || !(q >= 0.0) || !(p + q <= 1.0)) {
        std::ostringstream msg;
        msg << "turn probabilities need p>=0, q>=0, p+q<=1 (p=" << p << ", q=" << q
            << ")";
        throw InvalidProbability(msg.str());
    }
    return ModelParams(lambda, c, p, q);
}

bool no_reflection(const ModelParams& params) noexcept {
    return std::abs(params.reflect()) <= kRegimeTolerance;
}

bool symmetric_turns(const ModelParams& params) noexcept {
    return std::abs(params.p() - params.q()) <= kRegimeTolerance;
}

std::string_view to_string(TurnKind kind) noexcept {
    switch (kind) {
        case TurnKind::CCW:
            return "CCW";
        case TurnKind::CW:
            return "CW";
        case TurnKind::REFLECT:
            break;
    }
    return "REFLECT";
}

TurnKind sample_turn(const ModelParams& params, double u) noexcept {
    if (u < params.p()) return TurnKind::CCW;
    if (u < params.p() + params.q()) return TurnKind::CW;
    return TurnKind::REFLECT;
}

void PathHistory::record_turn(TurnKind kind, std::uint32_t events_before) noexcept {
    if (kind != TurnKind::REFLECT) only_reflections = false;
    if (kind == TurnKind::REFLECT || (events_before > 0 && kind == last_turn_)) {
        alternating_turns = false;
    }
    last_turn_ = kind;
}

std::string_view to_string(RegionKind kind) noexcept {
    switch (kind) {
        case RegionKind::Vertex:
            return "vertex";
        case RegionKind::SideInterior:
            return "side";
        case RegionKind::DiagonalInterior:
            return "diagonal";
        case RegionKind::Interior:
            break;
    }
    return "interior";
}

}  // namespace orthoplanar
