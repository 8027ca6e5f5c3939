// Chains of congruent parabolic rectangles joining a small rectangle in the
// past part of R to one in its future part, with overlap certificates.
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "parawt/geometry.hpp"

namespace parawt
{

struct ChainParams
{
    double gamma = 0.25;
    double alpha = 0.5;
    double tau = 1.0;
    ParabolicRectangle base;
    // Spatial subcube indices in [1, 2^{nm}], temporal slot indices in [1, J].
    std::uint64_t i = 1;  // future-side subcube
    std::uint64_t j = 1;  // future-side slot
    std::uint64_t k = 1;  // past-side subcube
    std::uint64_t iota = 1;  // past-side slot

    void validate() const;
};

// Quantities fixed by (n, p, γ, α, τ) alone.
struct ChainScales
{
    int m = 0;
    std::uint64_t J = 0;
    std::uint64_t subcubes = 0;  // 2^{nm}
    double C1 = 0.0;

    static ChainScales from(int n, double p, double gamma, double alpha, double tau);
};

struct Chain
{
    ChainParams params;
    ChainScales scales;
    double l = 0.0;     // common half-edge L/2^m
    double step = 0.0;  // τ(1+α) l^p, the shift defining S^-
    std::vector<ParabolicRectangle> rects;
    std::size_t dual_length = 0;    // Ñ: steps from the past rectangle to the hub
    std::size_t primal_length = 0;  // N_j: steps from the hub to the future rectangle
    ParabolicRectangle hub;         // the common rectangle
    double beta_j = 0.0;            // temporal slack fraction on the future side
    double beta_bound = 0.0;        // ½ (γ/(1+α))^{1/(p−1)}
    double dual_slack = 0.0;        // per-step temporal slack on the past side, in units of (1−α) l^p
};

ChainScales chain_scales(ChainParams const& cp);
// Prescribed endpoints, computed from the parameters alone.
ParabolicRectangle chain_start(ChainParams const& cp);
ParabolicRectangle chain_end(ChainParams const& cp);

Chain build_chain(ChainParams const& cp);

struct ChainReport
{
    bool pass = false;
    bool congruent = false;
    bool endpoints_ok = false;
    bool hub_ok = false;
    bool contained = false;
    bool lengths_ok = false;
    bool beta_ok = false;
    double min_overlap = INFINITY;
    double max_overlap = -INFINITY;
    double lower_bound = 0.0;  // 2^{-(n+1)}
    std::optional<std::size_t> first_violation;
    std::string failure;
};

// Checks congruence, endpoints, the hub, containment in R, every
// consecutive overlap |S_d^- ∩ P_{d-1}^+| / |S_d^-| ∈ [2^{-(n+1)}, 1], and
// the length bounds N_j ≤ C₁, Ñ ≤ 2C₁.
ChainReport verify_chain(Chain const& c, double slack = 1e-9);

}  // namespace parawt
