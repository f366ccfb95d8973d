#include "hextm/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace hextm {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

struct Point {
  double x, y;
};

// Pointy-top hexagon centre for (row, col), rows shifted right by half a cell.
Point hex_center(int row, int col, double r, Point origin) {
  const double w = kSqrt3 * r;
  return {origin.x + w * (col + 0.5 * row) + w / 2, origin.y + 1.5 * r * row + r};
}

std::string hex_points(Point c, double r) {
  std::ostringstream out;
  for (int i = 0; i < 6; ++i) {
    const double a = M_PI / 180.0 * (60.0 * i - 30.0);
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.2f,%.2f ", c.x + r * std::cos(a), c.y + r * std::sin(a));
    out << buf;
  }
  return out.str();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

void edges(std::ostringstream& out, int n, double r, Point o) {
  // Black owns top and bottom, White owns left and right.
  const Point tl = hex_center(0, 0, r, o), tr = hex_center(0, n - 1, r, o);
  const Point bl = hex_center(n - 1, 0, r, o), br = hex_center(n - 1, n - 1, r, o);
  const double d = r * 1.1;
  out << "<line x1=\"" << fmt(tl.x) << "\" y1=\"" << fmt(tl.y - d) << "\" x2=\"" << fmt(tr.x) << "\" y2=\""
      << fmt(tr.y - d) << "\" stroke=\"#222\" stroke-width=\"4\"/>\n";
  out << "<line x1=\"" << fmt(bl.x) << "\" y1=\"" << fmt(bl.y + d) << "\" x2=\"" << fmt(br.x) << "\" y2=\""
      << fmt(br.y + d) << "\" stroke=\"#222\" stroke-width=\"4\"/>\n";
  out << "<line x1=\"" << fmt(tl.x - d) << "\" y1=\"" << fmt(tl.y) << "\" x2=\"" << fmt(bl.x - d) << "\" y2=\""
      << fmt(bl.y) << "\" stroke=\"#bbb\" stroke-width=\"4\"/>\n";
  out << "<line x1=\"" << fmt(tr.x + d) << "\" y1=\"" << fmt(tr.y) << "\" x2=\"" << fmt(br.x + d) << "\" y2=\""
      << fmt(br.y) << "\" stroke=\"#bbb\" stroke-width=\"4\"/>\n";
}

}  // namespace

std::string heatmap_svg(const Board& board, const Heatmap& heatmap) {
  const int n = board.size();
  const double r = 24.0;
  const Point o{30.0, 30.0};
  const double width = o.x * 2 + kSqrt3 * r * (n + 0.5 * (n - 1)) + 10;
  const double height = o.y * 2 + 1.5 * r * (n - 1) + 2 * r + 30;
  int max_count = 1;
  for (int i = 0; i < n * n; ++i) {
    max_count = std::max({max_count, heatmap.black_counts[static_cast<std::size_t>(i)],
                          heatmap.white_counts[static_cast<std::size_t>(i)]});
  }

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\"" << fmt(height)
      << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
  edges(out, n, r, o);
  for (int i = 0; i < n * n; ++i) {
    const int row = i / n, col = i % n;
    const Point c = hex_center(row, col, r, o);
    const int b = heatmap.black_counts[static_cast<std::size_t>(i)];
    const int w = heatmap.white_counts[static_cast<std::size_t>(i)];
    out << "<polygon points=\"" << hex_points(c, r) << "\" fill=\"#f4f0e6\" stroke=\"#888\"/>\n";
    if (b > 0) {
      out << "<polygon points=\"" << hex_points(c, r) << "\" fill=\"#d62728\" fill-opacity=\""
          << fmt(static_cast<double>(b) / max_count * 0.5) << "\"/>\n";
    }
    if (w > 0) {
      out << "<polygon points=\"" << hex_points(c, r) << "\" fill=\"#1f77b4\" fill-opacity=\""
          << fmt(static_cast<double>(w) / max_count * 0.5) << "\"/>\n";
    }
    const Cell piece = board.at_index(i);
    if (piece != Cell::Empty) {
      out << "<circle cx=\"" << fmt(c.x) << "\" cy=\"" << fmt(c.y) << "\" r=\"" << fmt(r * 0.55) << "\" fill=\""
          << (piece == Cell::Black ? "#111" : "#fff") << "\" stroke=\"#111\"/>\n";
    }
    if (b > 0 || w > 0) {
      out << "<text x=\"" << fmt(c.x) << "\" y=\"" << fmt(c.y + 3) << "\" text-anchor=\"middle\" fill=\""
          << (piece == Cell::Black ? "#fff" : "#000") << "\">" << b << "/" << w << "</text>\n";
    }
  }
  out << "<text x=\"" << fmt(o.x) << "\" y=\"" << fmt(height - 10) << "\">predicted "
      << (heatmap.prediction.label == 1 ? "black" : "white") << ", vote sum " << heatmap.prediction.vote_sum
      << " (counts shown black/white)</text>\n";
  out << "</svg>\n";
  return out.str();
}

std::string patterns_svg(const TopClauses& top, Polarity polarity) {
  const double r = 10.0;
  const int n = top.clauses.empty() ? kDefaultBoardSize : top.clauses.front().pattern.board_size;
  const double board_w = kSqrt3 * r * (n + 0.5 * (n - 1)) + 20;
  const double board_h = 1.5 * r * (n - 1) + 2 * r + 40;
  const auto count = std::max<std::size_t>(top.clauses.size(), 1);

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(board_w * static_cast<double>(count) + 20)
      << "\" height=\"" << fmt(board_h + 30) << "\" font-family=\"sans-serif\" font-size=\"9\">\n";
  out << "<text x=\"10\" y=\"14\">" << to_string(polarity) << " polarity clauses</text>\n";
  for (std::size_t k = 0; k < top.clauses.size(); ++k) {
    const auto& rc = top.clauses[k];
    const Point o{10.0 + board_w * static_cast<double>(k), 24.0};
    for (int i = 0; i < n * n; ++i) {
      const Point c = hex_center(i / n, i % n, r, o);
      const auto& m = rc.pattern.cells[static_cast<std::size_t>(i)];
      out << "<polygon points=\"" << hex_points(c, r) << "\" fill=\"#f4f0e6\" stroke=\"#999\"/>\n";
      if (m.black) out << "<circle cx=\"" << fmt(c.x) << "\" cy=\"" << fmt(c.y) << "\" r=\"5\" fill=\"#111\"/>\n";
      if (m.white) {
        out << "<circle cx=\"" << fmt(c.x) << "\" cy=\"" << fmt(c.y) << "\" r=\"5\" fill=\"#fff\" stroke=\"#111\"/>\n";
      }
      if (m.forbid_black) {
        out << "<line x1=\"" << fmt(c.x - 5) << "\" y1=\"" << fmt(c.y - 5) << "\" x2=\"" << fmt(c.x + 5)
            << "\" y2=\"" << fmt(c.y + 5) << "\" stroke=\"#111\" stroke-width=\"2\"/>\n";
      }
      if (m.forbid_white) {
        out << "<line x1=\"" << fmt(c.x + 5) << "\" y1=\"" << fmt(c.y - 5) << "\" x2=\"" << fmt(c.x - 5)
            << "\" y2=\"" << fmt(c.y + 5) << "\" stroke=\"#888\" stroke-width=\"2\"/>\n";
      }
    }
    out << "<text x=\"" << fmt(o.x) << "\" y=\"" << fmt(o.y + board_h - 12) << "\">#" << rc.clause << " score "
        << fmt(rc.score) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace hextm
