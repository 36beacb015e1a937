#ifndef SEMQUAD_PLOT_HPP_
#define SEMQUAD_PLOT_HPP_

#include <string>
#include <vector>

#include "semquad/report_io.hpp"
#include "semquad/types.hpp"

namespace semquad {

void render_curve_svg(const std::string& path, const Curve& curve,
                      const std::string& title);

// 2D view for scatter plots: one dimension maps to (x, 0), two pass through,
// higher dimensions project onto the two principal components.
std::vector<CurvePoint> project_2d(const std::vector<Embedding>& embeddings);

void render_scatter_svg(const std::string& path, const std::vector<CurvePoint>& points,
                        const std::vector<Label>& colors, const std::string& title);

// Renders every two-column CSV in report_dir to out_dir/<stem>.svg and
// returns how many were written. Throws IoError when the directory has no
// curve CSVs at all.
std::size_t plot_report_dir(const std::string& report_dir, const std::string& out_dir);

}  // namespace semquad

#endif  // SEMQUAD_PLOT_HPP_
