#include "semquad/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "semquad/rng.hpp"

namespace semquad {

namespace {

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void Dataset::validate() const {
  if (header.label_dims == 0) {
    throw ValidationError("dataset needs at least the identity label dimension");
  }
  if (header.cardinalities.size() != header.label_dims ||
      header.names.size() != header.label_dims) {
    throw ValidationError("dataset header: cardinality/name count does not match t");
  }
  if (header.names[0] != "ID") {
    throw ValidationError("dataset header: label dimension 0 must be named ID");
  }
  for (std::size_t d = 0; d < header.label_dims; ++d) {
    if (header.cardinalities[d] == 0) {
      throw ValidationError("dataset header: cardinality of dimension " +
                            std::to_string(d) + " must be >= 1");
    }
  }

  std::set<std::uint64_t> seen_ids;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const Sample& sample = samples[k];
    if (!seen_ids.insert(sample.id).second) {
      throw ValidationError("duplicate sample id " + std::to_string(sample.id));
    }
    if (sample.features.size() != header.feature_dim) {
      throw ValidationError("sample " + std::to_string(sample.id) + " has " +
                            std::to_string(sample.features.size()) +
                            " features, header declares " +
                            std::to_string(header.feature_dim));
    }
    if (sample.labels.size() != header.label_dims) {
      throw ValidationError("sample " + std::to_string(sample.id) + " has " +
                            std::to_string(sample.labels.size()) +
                            " labels, header declares " +
                            std::to_string(header.label_dims));
    }
    for (std::size_t d = 0; d < header.label_dims; ++d) {
      if (sample.labels[d] >= header.cardinalities[d]) {
        throw ValidationError("sample " + std::to_string(sample.id) +
                              ": label dimension " + std::to_string(d) +
                              " holds " + std::to_string(sample.labels[d]) +
                              ", cardinality is " +
                              std::to_string(header.cardinalities[d]));
      }
    }
    for (double f : sample.features) {
      if (!std::isfinite(f)) {
        throw ValidationError("sample " + std::to_string(sample.id) +
                              " contains a non-finite feature");
      }
    }
  }
}

std::size_t Dataset::identity_count() const {
  std::set<Label> ids;
  for (const Sample& sample : samples) {
    if (!sample.labels.empty()) ids.insert(sample.labels[0]);
  }
  return ids.size();
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset file: " + path);

  std::string line;
  std::size_t line_no = 0;
  const auto next_line = [&]() {
    if (!std::getline(in, line)) {
      throw ParseError(path + ": unexpected end of file at line " +
                       std::to_string(line_no + 1));
    }
    ++line_no;
    return std::istringstream(line);
  };
  const auto fail = [&](const std::string& message) -> ParseError {
    return ParseError(path + ":" + std::to_string(line_no) + ": " + message);
  };

  next_line();
  if (line != "semquad dataset v1") {
    throw ParseError(path + ":1: not a semquad dataset file (bad magic line)");
  }

  Dataset dataset;
  const auto read_count = [&](const char* key) {
    auto s = next_line();
    std::string k;
    std::size_t value = 0;
    if (!(s >> k >> value) || k != key) {
      throw fail(std::string("expected '") + key + " <count>'");
    }
    return value;
  };
  dataset.header.feature_dim = read_count("features");
  dataset.header.label_dims = read_count("labels");
  {
    auto s = next_line();
    std::string k;
    if (!(s >> k) || k != "cardinality") throw fail("expected cardinality line");
    Label c = 0;
    while (s >> c) dataset.header.cardinalities.push_back(c);
  }
  {
    auto s = next_line();
    std::string k;
    if (!(s >> k) || k != "name") throw fail("expected name line");
    std::string name;
    while (s >> name) dataset.header.names.push_back(name);
  }
  const std::size_t declared = read_count("samples");

  for (std::size_t row = 0; row < declared; ++row) {
    auto s = next_line();
    Sample sample;
    if (!(s >> sample.id)) throw fail("expected a sample id");
    for (std::size_t d = 0; d < dataset.header.label_dims; ++d) {
      Label value = 0;
      if (!(s >> value)) {
        throw fail("sample row needs " + std::to_string(dataset.header.label_dims) +
                   " label codes");
      }
      sample.labels.push_back(value);
    }
    for (std::size_t f = 0; f < dataset.header.feature_dim; ++f) {
      double value = 0.0;
      if (!(s >> value)) {
        throw fail("sample row needs " + std::to_string(dataset.header.feature_dim) +
                   " features");
      }
      sample.features.push_back(value);
    }
    std::string extra;
    if (s >> extra) throw fail("trailing content '" + extra + "' on sample row");
    dataset.samples.push_back(std::move(sample));
  }
  if (std::getline(in, line) && !line.empty()) {
    throw ParseError(path + ":" + std::to_string(line_no + 1) +
                     ": content after the declared samples");
  }

  try {
    dataset.validate();
  } catch (const ValidationError& e) {
    throw ParseError(path + ": " + e.what());
  }
  return dataset;
}

void save_dataset(const std::string& path, const Dataset& dataset) {
  dataset.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open dataset file for writing: " + path);

  out << "semquad dataset v1\n";
  out << "features " << dataset.header.feature_dim << "\n";
  out << "labels " << dataset.header.label_dims << "\n";
  out << "cardinality";
  for (Label c : dataset.header.cardinalities) out << " " << c;
  out << "\nname";
  for (const std::string& n : dataset.header.names) out << " " << n;
  out << "\nsamples " << dataset.samples.size() << "\n";
  for (const Sample& sample : dataset.samples) {
    out << sample.id;
    for (Label l : sample.labels) out << " " << l;
    for (double f : sample.features) out << " " << format_value(f);
    out << "\n";
  }
  if (!out) throw IoError("failed while writing dataset file: " + path);
}

void SyntheticSpec::validate() const {
  if (identities < 2) throw ConfigError("synthetic data needs at least 2 identities");
  if (soft_dims == 0) throw ConfigError("synthetic data needs at least 1 soft dimension");
  if (soft_cardinality < 2) {
    throw ConfigError("soft label cardinality must be >= 2");
  }
  if (samples_per_identity == 0) {
    throw ConfigError("samples_per_identity must be >= 1");
  }
  if (feature_dim == 0) throw ConfigError("feature_dim must be >= 1");
  if (noise_sigma < 0.0) throw ConfigError("noise_sigma must be non-negative");
  if (identity_sigma < 0.0) throw ConfigError("identity_sigma must be non-negative");
  if (spread <= 0.0) throw ConfigError("spread must be positive");
  if (semantic_correlation < 0.0 || semantic_correlation > 1.0) {
    throw ConfigError("semantic_correlation must lie in [0, 1]");
  }
  if (semantic_correlation > 0.0 &&
      feature_dim < soft_dims * static_cast<std::size_t>(soft_cardinality)) {
    throw ConfigError(
        "semantic_correlation > 0 requires feature_dim >= soft_dims * "
        "soft_cardinality (the label-derived centroid uses one coordinate per "
        "soft label value)");
  }
}

Dataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  spec.validate();
  const double rho = spec.semantic_correlation;

  Dataset dataset;
  dataset.header.feature_dim = spec.feature_dim;
  dataset.header.label_dims = spec.soft_dims + 1;
  dataset.header.cardinalities.push_back(static_cast<Label>(spec.identities));
  dataset.header.names.push_back("ID");
  for (std::size_t d = 1; d <= spec.soft_dims; ++d) {
    dataset.header.cardinalities.push_back(spec.soft_cardinality);
    dataset.header.names.push_back("soft" + std::to_string(d));
  }

  Rng label_rng(derive_seed(seed, "labels"));
  Rng centroid_rng(derive_seed(seed, "centroids"));
  Rng offset_rng(derive_seed(seed, "offsets"));
  Rng noise_rng(derive_seed(seed, "noise"));
  std::uniform_int_distribution<Label> soft_value(0, spec.soft_cardinality - 1);
  std::normal_distribution<double> unit_gauss(0.0, 1.0);

  std::vector<LabelVector> identity_labels(spec.identities);
  std::vector<std::vector<double>> centroids(
      spec.identities, std::vector<double>(spec.feature_dim, 0.0));
  for (std::size_t id = 0; id < spec.identities; ++id) {
    LabelVector& labels = identity_labels[id];
    labels.push_back(static_cast<Label>(id));
    for (std::size_t d = 0; d < spec.soft_dims; ++d) {
      labels.push_back(soft_value(label_rng));
    }

    std::vector<double>& centroid = centroids[id];
    // Label-derived part: one indicator coordinate per (dimension, value), so
    // squared centroid distance grows by 2*spread^2 per disagreeing label.
    for (std::size_t d = 0; d < spec.soft_dims; ++d) {
      const std::size_t coord =
          d * static_cast<std::size_t>(spec.soft_cardinality) + labels[d + 1];
      centroid[coord] += rho * spec.spread;
    }
    for (std::size_t k = 0; k < spec.feature_dim; ++k) {
      centroid[k] += (1.0 - rho) * spec.spread * unit_gauss(centroid_rng);
      centroid[k] += spec.identity_sigma * unit_gauss(offset_rng);
    }
  }

  std::uint64_t next_id = 0;
  for (std::size_t id = 0; id < spec.identities; ++id) {
    for (std::size_t k = 0; k < spec.samples_per_identity; ++k) {
      Sample sample;
      sample.id = next_id++;
      sample.labels = identity_labels[id];
      sample.features = centroids[id];
      for (double& f : sample.features) f += spec.noise_sigma * unit_gauss(noise_rng);
      dataset.samples.push_back(std::move(sample));
    }
  }
  dataset.validate();
  return dataset;
}

DatasetSplit split_dataset(const Dataset& dataset, double train_fraction,
                           bool stratify_by_identity, std::uint64_t seed) {
  if (train_fraction <= 0.0 || train_fraction >= 1.0) {
    throw ConfigError("train_fraction must lie in (0, 1)");
  }
  dataset.validate();
  if (dataset.samples.empty()) throw ConfigError("cannot split an empty dataset");

  Rng rng(seed);
  std::vector<std::size_t> train_rows, test_rows;
  if (stratify_by_identity) {
    std::map<Label, std::vector<std::size_t>> groups;
    for (std::size_t k = 0; k < dataset.size(); ++k) {
      groups[dataset.samples[k].labels[0]].push_back(k);
    }
    std::size_t singletons = 0;
    for (auto& [id, members] : groups) {
      if (members.size() == 1) {
        train_rows.push_back(members[0]);
        ++singletons;
        continue;
      }
      std::shuffle(members.begin(), members.end(), rng);
      std::size_t n_train = static_cast<std::size_t>(
          std::llround(train_fraction * static_cast<double>(members.size())));
      n_train = std::clamp<std::size_t>(n_train, 1, members.size() - 1);
      for (std::size_t k = 0; k < members.size(); ++k) {
        (k < n_train ? train_rows : test_rows).push_back(members[k]);
      }
    }
    DatasetSplit split;
    split.singleton_identities = singletons;
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(test_rows.begin(), test_rows.end());
    split.train.header = dataset.header;
    split.test.header = dataset.header;
    for (std::size_t k : train_rows) split.train.samples.push_back(dataset.samples[k]);
    for (std::size_t k : test_rows) split.test.samples.push_back(dataset.samples[k]);
    return split;
  }

  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::size_t n_train = static_cast<std::size_t>(
      std::llround(train_fraction * static_cast<double>(dataset.size())));
  n_train = std::clamp<std::size_t>(n_train, 1, dataset.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    (k < n_train ? train_rows : test_rows).push_back(order[k]);
  }
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());

  DatasetSplit split;
  split.train.header = dataset.header;
  split.test.header = dataset.header;
  for (std::size_t k : train_rows) split.train.samples.push_back(dataset.samples[k]);
  for (std::size_t k : test_rows) split.test.samples.push_back(dataset.samples[k]);
  return split;
}

}  // namespace semquad
