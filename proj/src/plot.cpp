#include "semquad/plot.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace semquad {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;

  double place(double v, double near, double far) const {
    return near + (v - lo) / (hi - lo) * (far - near);
  }
};

Range data_range(const std::vector<double>& values) {
  Range r{values.front(), values.front()};
  for (double v : values) {
    r.lo = std::min(r.lo, v);
    r.hi = std::max(r.hi, v);
  }
  if (r.lo == r.hi) {
    r.lo -= 0.5;
    r.hi += 0.5;
  }
  return r;
}

void write_frame(std::ofstream& out, const std::string& title, const Range& xr,
                 const Range& yr, const std::string& x_name,
                 const std::string& y_name) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

  const double x0 = kLeft, x1 = kWidth - kRight;
  const double y0 = kHeight - kBottom, y1 = kTop;
  out << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1
      << "\" y2=\"" << y0 << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0
      << "\" y2=\"" << y1 << "\" stroke=\"black\"/>\n";

  for (int k = 0; k <= 4; ++k) {
    const double fx = xr.lo + (xr.hi - xr.lo) * k / 4.0;
    const double px = xr.place(fx, x0, x1);
    out << "<line x1=\"" << coord(px) << "\" y1=\"" << y0 << "\" x2=\""
        << coord(px) << "\" y2=\"" << y0 + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << coord(px) << "\" y=\"" << y0 + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"11\">" << tick_label(fx) << "</text>\n";

    const double fy = yr.lo + (yr.hi - yr.lo) * k / 4.0;
    const double py = yr.place(fy, y0, y1);
    out << "<line x1=\"" << x0 - 5 << "\" y1=\"" << coord(py) << "\" x2=\"" << x0
        << "\" y2=\"" << coord(py) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << x0 - 8 << "\" y=\"" << coord(py + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << tick_label(fy) << "</text>\n";
  }

  out << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << x_name << "</text>\n";
  out << "<text x=\"16\" y=\"" << (y0 + y1) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 16 " << (y0 + y1) / 2 << ")\">" << y_name
      << "</text>\n";
}

}  // namespace

void render_curve_svg(const std::string& path, const Curve& curve,
                      const std::string& title) {
  if (curve.points.empty()) throw ConfigError("cannot plot an empty curve");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open SVG for writing: " + path);

  std::vector<double> xs, ys;
  for (const CurvePoint& p : curve.points) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  const Range xr = data_range(xs);
  const Range yr = data_range(ys);
  write_frame(out, title, xr, yr, curve.x_name, curve.y_name);

  out << "<polyline fill=\"none\" stroke=\"" << kPalette[0]
      << "\" stroke-width=\"1.5\" points=\"";
  for (const CurvePoint& p : curve.points) {
    out << coord(xr.place(p.x, kLeft, kWidth - kRight)) << ","
        << coord(yr.place(p.y, kHeight - kBottom, kTop)) << " ";
  }
  out << "\"/>\n</svg>\n";
  if (!out) throw IoError("failed while writing SVG: " + path);
}

std::vector<CurvePoint> project_2d(const std::vector<Embedding>& embeddings) {
  if (embeddings.empty()) throw ConfigError("cannot project an empty embedding set");
  const std::size_t d = embeddings.front().size();
  if (d == 0) throw ConfigError("cannot project zero-dimensional embeddings");
  for (const Embedding& e : embeddings) {
    if (e.size() != d) throw DimensionError("project_2d: inconsistent dimensions");
  }

  std::vector<CurvePoint> out(embeddings.size());
  if (d == 1) {
    for (std::size_t k = 0; k < embeddings.size(); ++k) {
      out[k] = CurvePoint{embeddings[k][0], 0.0};
    }
    return out;
  }
  if (d == 2) {
    for (std::size_t k = 0; k < embeddings.size(); ++k) {
      out[k] = CurvePoint{embeddings[k][0], embeddings[k][1]};
    }
    return out;
  }

  const Eigen::Index n = static_cast<Eigen::Index>(embeddings.size());
  const Eigen::Index dim = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd data(n, dim);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      data(r, c) = embeddings[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
  }
  data.rowwise() -= data.colwise().mean();
  const Eigen::MatrixXd cov =
      data.transpose() * data / std::max<double>(1.0, static_cast<double>(n - 1));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  Eigen::MatrixXd components = solver.eigenvectors().rightCols(2).rowwise().reverse();
  for (Eigen::Index c = 0; c < 2; ++c) {
    Eigen::Index peak = 0;
    components.col(c).cwiseAbs().maxCoeff(&peak);
    if (components(peak, c) < 0.0) components.col(c) = -components.col(c);
  }

  const Eigen::MatrixXd projected = data * components;
  for (Eigen::Index r = 0; r < n; ++r) {
    out[static_cast<std::size_t>(r)] = CurvePoint{projected(r, 0), projected(r, 1)};
  }
  return out;
}

void render_scatter_svg(const std::string& path, const std::vector<CurvePoint>& points,
                        const std::vector<Label>& colors, const std::string& title) {
  if (points.empty()) throw ConfigError("cannot plot an empty scatter");
  if (points.size() != colors.size()) {
    throw DimensionError("scatter: point and color counts differ");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open SVG for writing: " + path);

  std::vector<double> xs, ys;
  for (const CurvePoint& p : points) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  const Range xr = data_range(xs);
  const Range yr = data_range(ys);
  write_frame(out, title, xr, yr, "component 1", "component 2");

  for (std::size_t k = 0; k < points.size(); ++k) {
    out << "<circle cx=\"" << coord(xr.place(points[k].x, kLeft, kWidth - kRight))
        << "\" cy=\"" << coord(yr.place(points[k].y, kHeight - kBottom, kTop))
        << "\" r=\"3\" fill=\"" << kPalette[colors[k] % 10]
        << "\" fill-opacity=\"0.8\"/>\n";
  }
  out << "</svg>\n";
  if (!out) throw IoError("failed while writing SVG: " + path);
}

std::size_t plot_report_dir(const std::string& report_dir, const std::string& out_dir) {
  const std::filesystem::path source(report_dir);
  if (!std::filesystem::is_directory(source)) {
    throw IoError("report directory not found: " + report_dir);
  }
  std::vector<std::filesystem::path> csvs;
  for (const auto& entry : std::filesystem::directory_iterator(source)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") {
      csvs.push_back(entry.path());
    }
  }
  std::sort(csvs.begin(), csvs.end());

  std::filesystem::create_directories(out_dir);
  std::size_t written = 0;
  for (const auto& csv : csvs) {
    Curve curve;
    try {
      curve = load_curve(csv.string());
    } catch (const ParseError&) {
      continue;  // not a two-column curve (e.g. an embeddings table)
    }
    if (curve.points.empty()) continue;
    const std::string stem = csv.stem().string();
    render_curve_svg((std::filesystem::path(out_dir) / (stem + ".svg")).string(),
                     curve, stem);
    ++written;
  }
  if (written == 0) {
    throw IoError("no curve CSVs found in report directory: " + report_dir);
  }
  return written;
}

}  // namespace semquad
