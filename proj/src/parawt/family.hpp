// Finite search families standing in for "all parabolic rectangles".
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "parawt/geometry.hpp"
#include "parawt/grid.hpp"

namespace parawt
{

struct FamilySpec
{
    enum class Centers
    {
        nodes,       // cell corners, every `center_stride`-th one
        half_cells,  // corners and centers on every axis
        random,      // `random_count` uniform draws
    };
    enum class Ladder
    {
        geometric,  // l_min · ratio^k up to l_max
        multiples,  // k · l_unit up to l_max
    };

    Centers centers = Centers::nodes;
    int center_stride = 2;
    Ladder ladder = Ladder::geometric;
    double ratio = 1.4142135623730951;
    // Zero selects the grid-relative default.
    double l_min = 0.0;
    double l_max = 0.0;
    double l_unit = 0.0;
    int random_count = 0;
    std::uint64_t seed = 0;

    // Default lattice: stride-2 node centers, √2 ladder from 2h_x to
    // (window width)/4.
    static FamilySpec lattice();
    // Every center on the half-cell lattice with L = k·h_x/2.
    static FamilySpec exhaustive();
    // Cell-centered rectangles with L = k·h_x for k = 1..k_max.
    static FamilySpec aligned(int k_max);
    std::string id() const;
};

struct RectangleFamily
{
    std::string id;
    double p = 2.0;
    std::vector<ParabolicRectangle> rects;
};

// Scale ladder of the family; rectangles are built from it.
std::vector<double> scale_ladder(FamilySpec const& fs, GridSpec const& g, double p);

// True when R lies in the window and both γ-parts contain a cell center.
bool admissible(GridSpec const& g, ParabolicRectangle const& r, double gamma);

// Admissible rectangles for every γ in [0, gamma].
RectangleFamily make_family(FamilySpec const& fs, GridSpec const& g, double p,
                            double gamma);

}  // namespace parawt
