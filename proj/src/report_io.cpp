#include "semquad/report_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace semquad {

namespace {

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_csv_double(const std::string& path, std::size_t line_no,
                        const std::string& field) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (end == field.c_str() || *end != '\0' || errno == ERANGE) {
    throw ParseError(path + ":" + std::to_string(line_no) + ": '" + field +
                     "' is not a number");
  }
  return v;
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  return fields;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open file for writing: " + path);
  return out;
}

}  // namespace

void EmbeddingTable::validate() const {
  if (ids.size() != values.size()) {
    throw ValidationError("embedding table: id and row counts differ");
  }
  const std::size_t d = dim();
  if (!values.empty() && d == 0) {
    throw ValidationError("embedding table: zero-dimensional rows");
  }
  std::set<std::uint64_t> seen;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (!seen.insert(ids[k]).second) {
      throw ValidationError("embedding table: duplicate id " + std::to_string(ids[k]));
    }
    if (values[k].size() != d) {
      throw ValidationError("embedding table: row for id " + std::to_string(ids[k]) +
                            " has " + std::to_string(values[k].size()) +
                            " values, expected " + std::to_string(d));
    }
    for (double v : values[k]) {
      if (!std::isfinite(v)) {
        throw ValidationError("embedding table: non-finite value for id " +
                              std::to_string(ids[k]));
      }
    }
  }
}

void save_embeddings(const std::string& path, const EmbeddingTable& table) {
  table.validate();
  auto out = open_for_write(path);
  out << "id";
  for (std::size_t k = 0; k < table.dim(); ++k) out << ",e" << k;
  out << "\n";
  for (std::size_t row = 0; row < table.size(); ++row) {
    out << table.ids[row];
    for (double v : table.values[row]) out << "," << format_value(v);
    out << "\n";
  }
  if (!out) throw IoError("failed while writing embeddings: " + path);
}

EmbeddingTable load_embeddings(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open embeddings file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  const auto header = split_csv_row(line);
  if (header.empty() || header[0] != "id") {
    throw ParseError(path + ":1: expected a header starting with 'id'");
  }
  const std::size_t d = header.size() - 1;
  if (d == 0) throw ParseError(path + ":1: no embedding columns");

  EmbeddingTable table;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_row(line);
    if (fields.size() != d + 1) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(d + 1) + " fields, got " +
                       std::to_string(fields.size()));
    }
    errno = 0;
    char* end = nullptr;
    const unsigned long long id = std::strtoull(fields[0].c_str(), &end, 10);
    if (end == fields[0].c_str() || *end != '\0' || errno == ERANGE) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": bad id '" +
                       fields[0] + "'");
    }
    table.ids.push_back(static_cast<std::uint64_t>(id));
    Embedding row;
    row.reserve(d);
    for (std::size_t k = 1; k < fields.size(); ++k) {
      row.push_back(parse_csv_double(path, line_no, fields[k]));
    }
    table.values.push_back(std::move(row));
  }
  try {
    table.validate();
  } catch (const ValidationError& e) {
    throw ParseError(path + ": " + e.what());
  }
  return table;
}

void save_history(const std::string& path, const std::vector<EpochStats>& history) {
  auto out = open_for_write(path);
  out << "epoch,train_loss,val_loss\n";
  for (const EpochStats& row : history) {
    out << row.epoch << "," << format_value(row.train_loss) << ","
        << format_value(row.val_loss) << "\n";
  }
  if (!out) throw IoError("failed while writing history: " + path);
}

void save_curve(const std::string& path, const Curve& curve) {
  auto out = open_for_write(path);
  out << curve.x_name << "," << curve.y_name << "\n";
  for (const CurvePoint& p : curve.points) {
    out << format_value(p.x) << "," << format_value(p.y) << "\n";
  }
  if (!out) throw IoError("failed while writing curve: " + path);
}

Curve load_curve(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open curve file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  const auto header = split_csv_row(line);
  if (header.size() != 2) {
    throw ParseError(path + ":1: expected a two-column header");
  }
  Curve curve;
  curve.x_name = header[0];
  curve.y_name = header[1];
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_row(line);
    if (fields.size() != 2) {
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected two fields");
    }
    curve.points.push_back(CurvePoint{parse_csv_double(path, line_no, fields[0]),
                                      parse_csv_double(path, line_no, fields[1])});
  }
  return curve;
}

std::string format_scalars(const EvalReport& report) {
  std::ostringstream out;
  out << "mean_average_precision=" << format_value(report.map_score) << "\n";
  out << "map_excluded_queries=" << report.map_excluded_queries << "\n";
  out << "rank1=" << format_value(report.rank1) << "\n";
  out << "top10=" << format_value(report.top10) << "\n";
  out << "labelling_error=" << format_value(report.labelling_error) << "\n";
  out << "retrieval_emptied_queries=" << report.retrieval_emptied_queries << "\n";
  out << "rank1_mean=" << format_value(report.rank1_stat.mean) << "\n";
  out << "rank1_stddev=" << format_value(report.rank1_stat.stddev) << "\n";
  out << "map_mean=" << format_value(report.map_stat.mean) << "\n";
  out << "map_stddev=" << format_value(report.map_stat.stddev) << "\n";
  out << "labelling_error_mean=" << format_value(report.labelling_error_stat.mean)
      << "\n";
  out << "labelling_error_stddev="
      << format_value(report.labelling_error_stat.stddev) << "\n";
  return out.str();
}

void write_report(const std::string& dir, const EvalReport& report) {
  std::filesystem::create_directories(dir);
  const auto path = [&](const char* name) {
    return (std::filesystem::path(dir) / name).string();
  };

  save_curve(path("roc.csv"), Curve{"far", "vr", report.roc});
  save_curve(path("cmc.csv"), Curve{"rank", "rate", report.cmc});
  if (!report.dir_rank1.empty()) {
    save_curve(path("dir.csv"), Curve{"far", "dir", report.dir_rank1});
  }
  save_curve(path("hit_penetration.csv"),
             Curve{"penetration", "hit", report.hit_penetration});
  if (!report.hit_penetration_baseline.empty()) {
    save_curve(path("hit_penetration_baseline.csv"),
               Curve{"penetration", "hit", report.hit_penetration_baseline});
  }

  auto out = open_for_write(path("scalars.txt"));
  out << format_scalars(report);
  if (!out) throw IoError("failed while writing scalars: " + path("scalars.txt"));
}

}  // namespace semquad
