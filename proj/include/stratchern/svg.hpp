// Deterministic SVG rendering of 2-dimensional embedded complexes:
// simplices with stratum coloring, dual cells, field arrows at carrier
// vertices, singular points with index labels, and a stratum legend.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "stratchern/obstruction.hpp"

namespace stratchern {

struct SvgOptions {
  bool show_dual = false;
  const RField* field = nullptr;            // arrows at carrier vertices
  const ObstructionCocycle* cocycle = nullptr;  // index labels
  double width = 720.0;
};

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return std::string(buf);
}

inline const char* stratum_color(size_t i) {
  static const char* palette[] = {"#4878cf", "#e8a33d", "#6acc65", "#d65f5f",
                                  "#956cb4", "#8c613c", "#dc7ec0", "#797979"};
  return palette[i % 8];
}

inline const char* dual_color(size_t i) {
  static const char* palette[] = {"#1b6ca8", "#c55a11", "#2e8540", "#a4262c",
                                  "#68478d", "#038387"};
  return palette[i % 6];
}

}  // namespace detail

inline std::string render_svg(const EmbeddedComplex& k,
                              const DualDecomposition* dd,
                              const SvgOptions& opt) {
  if (k.ambient_dim != 2)
    throw StratError("bad-config",
                     "svg rendering needs ambient dimension 2 (got " +
                         std::to_string(k.ambient_dim) + ")");
  // World bounding box with margin, flipped y (SVG y grows downward).
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const RatVec& v : k.vertices) {
    xmin = std::min(xmin, to_double(v[0]));
    xmax = std::max(xmax, to_double(v[0]));
    ymin = std::min(ymin, to_double(v[1]));
    ymax = std::max(ymax, to_double(v[1]));
  }
  double span = std::max(xmax - xmin, ymax - ymin);
  if (span <= 0) span = 1;
  double margin = 0.15 * span;
  double scale = opt.width / (span + 2 * margin);
  double height = (ymax - ymin + 2 * margin) * scale;
  auto P = [&](const RatVec& v) {
    double x = (to_double(v[0]) - xmin + margin) * scale;
    double y = height - (to_double(v[1]) - ymin + margin) * scale;
    return detail::fmt(x) + "," + detail::fmt(y);
  };
  auto PX = [&](const RatVec& v) {
    return (to_double(v[0]) - xmin + margin) * scale;
  };
  auto PY = [&](const RatVec& v) {
    return height - (to_double(v[1]) - ymin + margin) * scale;
  };

  // Stratum ids in stable order -> palette slots.
  std::map<int, size_t> slot;
  for (const StratumInfo& st : k.strata)
    slot.emplace(st.id, slot.size());

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
      << detail::fmt(opt.width) << "\" height=\"" << detail::fmt(height)
      << "\" viewBox=\"0 0 " << detail::fmt(opt.width) << " "
      << detail::fmt(height) << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

  // Filled 2-simplices.
  for (int t : k.simplices_of_dim(2)) {
    const Simplex& s = k.simplices[t];
    svg << "<polygon points=\"";
    for (size_t i = 0; i < s.verts.size(); ++i)
      svg << (i ? " " : "") << P(k.vertices[s.verts[i]]);
    svg << "\" fill=\"" << detail::stratum_color(slot[s.stratum])
        << "\" fill-opacity=\"0.30\" stroke=\"#c0c0c0\" stroke-width=\"0.6\"/>"
        << "\n";
  }
  // Edges: 1-simplices in lower-dimensional strata drawn boldly.
  for (int e : k.simplices_of_dim(1)) {
    const Simplex& s = k.simplices[e];
    const StratumInfo* st = stratum_info(k, s.stratum);
    bool crease = st && st->real_dim <= 1;
    svg << "<line x1=\"" << detail::fmt(PX(k.vertices[s.verts[0]]))
        << "\" y1=\"" << detail::fmt(PY(k.vertices[s.verts[0]])) << "\" x2=\""
        << detail::fmt(PX(k.vertices[s.verts[1]])) << "\" y2=\""
        << detail::fmt(PY(k.vertices[s.verts[1]])) << "\" stroke=\""
        << (crease ? detail::stratum_color(slot[s.stratum]) : "#707070")
        << "\" stroke-width=\"" << (crease ? "2.4" : "0.9") << "\"/>\n";
  }

  // Dual cells over the source complex: flag triangles of vertex duals,
  // flag segments of edge duals.
  if (opt.show_dual && dd != nullptr) {
    size_t cell_color = 0;
    for (int v : k.simplices_of_dim(0)) {
      const DualCell& c = dd->cells[v];
      const char* col = detail::dual_color(cell_color++);
      for (const auto& flag : c.members) {
        if (flag.size() != 3) continue;
        svg << "<polygon points=\"" << P(k.barycenter(flag[0])) << " "
            << P(k.barycenter(flag[1])) << " " << P(k.barycenter(flag[2]))
            << "\" fill=\"" << col
            << "\" fill-opacity=\"0.22\" stroke=\"none\"/>\n";
      }
    }
    for (int e : k.simplices_of_dim(1)) {
      const DualCell& c = dd->cells[e];
      for (const auto& flag : c.members) {
        if (flag.size() != 2) continue;
        svg << "<line x1=\"" << detail::fmt(PX(k.barycenter(flag[0])))
            << "\" y1=\"" << detail::fmt(PY(k.barycenter(flag[0])))
            << "\" x2=\"" << detail::fmt(PX(k.barycenter(flag[1])))
            << "\" y2=\"" << detail::fmt(PY(k.barycenter(flag[1])))
            << "\" stroke=\"#303030\" stroke-width=\"1.4\""
            << " stroke-dasharray=\"4 2\"/>\n";
      }
    }
  }

  // Field arrows at carrier vertices (last component of the frame).
  if (opt.field != nullptr && !opt.field->fields.empty()) {
    const EmbeddedComplex& carrier = opt.field->carrier;
    const PAField& f = opt.field->fields.back();
    double vmax = 0;
    for (const auto& [v, val] : f.values)
      vmax = std::max(vmax,
                      std::sqrt(to_double(val[0] * val[0] + val[1] * val[1])));
    double arrow = vmax > 0 ? 0.05 * span / vmax : 0;
    for (const auto& [v, val] : f.values) {
      double x0 = PX(carrier.vertices[v]), y0 = PY(carrier.vertices[v]);
      double dx = to_double(val[0]) * arrow * scale;
      double dy = -to_double(val[1]) * arrow * scale;
      double x1 = x0 + dx, y1 = y0 + dy;
      svg << "<line x1=\"" << detail::fmt(x0) << "\" y1=\"" << detail::fmt(y0)
          << "\" x2=\"" << detail::fmt(x1) << "\" y2=\"" << detail::fmt(y1)
          << "\" stroke=\"#111111\" stroke-width=\"1.0\"/>\n";
      double len = std::sqrt(dx * dx + dy * dy);
      if (len > 1e-9) {
        double ux = dx / len, uy = dy / len;
        double hx = 4.0 * ux, hy = 4.0 * uy;
        svg << "<line x1=\"" << detail::fmt(x1) << "\" y1=\""
            << detail::fmt(y1) << "\" x2=\""
            << detail::fmt(x1 - hx - 0.6 * hy) << "\" y2=\""
            << detail::fmt(y1 - hy + 0.6 * hx)
            << "\" stroke=\"#111111\" stroke-width=\"1.0\"/>\n";
        svg << "<line x1=\"" << detail::fmt(x1) << "\" y1=\""
            << detail::fmt(y1) << "\" x2=\""
            << detail::fmt(x1 - hx + 0.6 * hy) << "\" y2=\""
            << detail::fmt(y1 - hy - 0.6 * hx)
            << "\" stroke=\"#111111\" stroke-width=\"1.0\"/>\n";
      }
    }
  }

  // Singular points with index labels.
  if (opt.cocycle != nullptr) {
    for (const IndexRecord& rec : opt.cocycle->records) {
      double x = PX(rec.barycenter), y = PY(rec.barycenter);
      svg << "<circle cx=\"" << detail::fmt(x) << "\" cy=\"" << detail::fmt(y)
          << "\" r=\"4.5\" fill=\"#ffffff\" stroke=\"#000000\""
          << " stroke-width=\"1.2\"/>\n";
      std::string label = (rec.index > 0 ? "+" : "") +
                          std::to_string(rec.index);
      svg << "<text x=\"" << detail::fmt(x + 6.5) << "\" y=\""
          << detail::fmt(y - 4.0)
          << "\" font-family=\"monospace\" font-size=\"13\""
          << " fill=\"#000000\">" << label << "</text>\n";
    }
  }

  // Legend: one row per stratum.
  double ly = 18;
  for (const StratumInfo& st : k.strata) {
    svg << "<rect x=\"10\" y=\"" << detail::fmt(ly - 10)
        << "\" width=\"12\" height=\"12\" fill=\""
        << detail::stratum_color(slot[st.id]) << "\" fill-opacity=\"0.6\"/>\n";
    svg << "<text x=\"27\" y=\"" << detail::fmt(ly)
        << "\" font-family=\"monospace\" font-size=\"12\" fill=\"#000000\">"
        << "stratum " << st.id << " (dim " << st.real_dim;
    if (st.complex_dim) svg << ", complex dim " << *st.complex_dim;
    svg << ")</text>\n";
    ly += 17;
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace stratchern
