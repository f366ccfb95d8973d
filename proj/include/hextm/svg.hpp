#pragma once

#include <string>

#include "hextm/board.hpp"
#include "hextm/interpret.hpp"

namespace hextm {

// Rhombus of hexagons with the board's pieces and the per-cell counts of a
// local interpretation, Black counts tinted red, White counts blue.
std::string heatmap_svg(const Board& board, const Heatmap& heatmap);

// One mini-board per ranked clause, laid out in a row, with the four marks
// (required/forbidden x Black/White) and the score underneath.
std::string patterns_svg(const TopClauses& top, Polarity polarity);

}  // namespace hextm
