// Two-pass greedy selection of rectangles from (point, rectangle) pairs,
// with covering and bounded-overlap certificates.
#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "parawt/geometry.hpp"
#include "parawt/grid.hpp"

namespace parawt
{

struct SelectionInput
{
    Point point;
    ParabolicRectangle rect;
};

struct Selection
{
    double gamma = 0.5;
    double alpha = 0.0;  // γ/5^p
    std::vector<SelectionInput> inputs;
    std::vector<std::size_t> first_pass;  // survivors of pass 1, input order
    std::vector<std::size_t> selected;    // survivors of pass 2, input order

    ParabolicRectangle dilated(std::size_t idx) const;
};

Selection select_covering(std::vector<SelectionInput> inputs, double gamma,
                          double slack = 1e-9);

// True when `target` lies in the closed union of `cover` (up to slack).
bool covered_by_union(Box const& target, std::vector<Box> const& cover, double slack);

// Band k with half-edge in (2^{-k-1}, 2^{-k}].
int dyadic_band(double half_edge);

struct CoveringConstants
{
    double C1 = 0.0;         // 2(C₂ + C₃)
    double C4_band = 0.0;    // 2^{2n+p+2}/(1−γ)
    double C4 = 0.0;         // C4_band + 2⌈C1⌉
    std::size_t threshold = 0;  // 2⌈C1⌉
};

CoveringConstants covering_constants(int n, double p, double gamma);

struct FieldWitness
{
    SampledField const* f = nullptr;
    double lambda = 0.0;
    double beta = 0.0;
};

struct SelectionReport
{
    bool pass = false;
    std::size_t band_violations = 0;
    std::optional<std::pair<std::size_t, std::size_t>> first_band_violation;  // input indices
    std::size_t uncovered_points = 0;
    std::size_t max_overlap = 0;
    std::size_t trimmed_sets = 0;  // F_i strictly smaller than R_i^+
    bool idempotent = false;
    CoveringConstants constants;
    // Field property: min over i of ∫_{F_i}|f| / ((λ/2)|R_i^+|^{1−β}).
    std::optional<double> min_mass_ratio;
    std::size_t mass_violations = 0;
};

SelectionReport verify_selection(Selection const& s,
                                 std::optional<FieldWitness> field = std::nullopt,
                                 double slack = 1e-9);

}  // namespace parawt
