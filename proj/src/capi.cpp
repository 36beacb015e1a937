#include "semquad.h"

#include <cstdio>
#include <cstring>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "semquad/config.hpp"
#include "semquad/data.hpp"
#include "semquad/eval.hpp"
#include "semquad/network.hpp"
#include "semquad/plot.hpp"
#include "semquad/report_io.hpp"
#include "semquad/run_config.hpp"
#include "semquad/train.hpp"
#include "semquad/types.hpp"

struct semquad_dataset {
  semquad::Dataset value;
};

struct semquad_model {
  semquad::NetworkConfig config;
  semquad::NetworkParams params;
  std::string history_csv;
};

struct semquad_embeddings {
  semquad::EmbeddingTable table;
};

struct semquad_report {
  semquad::EvalReport value;
  std::string scalars;
};

namespace {

thread_local std::string g_last_error;

semquad_status fail(semquad_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename Fn>
semquad_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return SEMQUAD_OK;
  } catch (const semquad::ConfigError& e) {
    return fail(SEMQUAD_ERR_INVALID_ARGUMENT, e.what());
  } catch (const semquad::ValidationError& e) {
    return fail(SEMQUAD_ERR_INVALID_ARGUMENT, e.what());
  } catch (const semquad::DimensionError& e) {
    return fail(SEMQUAD_ERR_DIMENSION, e.what());
  } catch (const semquad::ParseError& e) {
    return fail(SEMQUAD_ERR_PARSE, e.what());
  } catch (const semquad::ProtocolError& e) {
    return fail(SEMQUAD_ERR_PROTOCOL, e.what());
  } catch (const semquad::DegenerateDataError& e) {
    return fail(SEMQUAD_ERR_DEGENERATE, e.what());
  } catch (const semquad::IoError& e) {
    return fail(SEMQUAD_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(SEMQUAD_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SEMQUAD_ERR_INTERNAL, "unknown error");
  }
}

semquad_status require(bool ok, const char* message) {
  return ok ? SEMQUAD_OK : fail(SEMQUAD_ERR_INVALID_ARGUMENT, message);
}

std::string history_to_csv(const std::vector<semquad::EpochStats>& history) {
  std::string csv = "epoch,train_loss,val_loss\n";
  char buf[96];
  for (const semquad::EpochStats& row : history) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g\n", row.epoch, row.train_loss,
                  row.val_loss);
    csv += buf;
  }
  return csv;
}

}  // namespace

extern "C" {

const char* semquad_version(void) { return "1.0.0"; }

const char* semquad_last_error(void) { return g_last_error.c_str(); }

semquad_status semquad_config_normalize(const char* config, char** out_text) {
  if (semquad_status s = require(config && out_text, "null argument"); s != SEMQUAD_OK)
    return s;
  return guarded([&] {
    const std::string text = semquad::KeyValueConfig::parse(config).serialize();
    char* copy = new char[text.size() + 1];
    std::memcpy(copy, text.c_str(), text.size() + 1);
    *out_text = copy;
  });
}

void semquad_string_free(char* text) { delete[] text; }

semquad_status semquad_dataset_load(const char* path, semquad_dataset** out_dataset) {
  if (semquad_status s = require(path && out_dataset, "null argument");
      s != SEMQUAD_OK)
    return s;
  return guarded([&] {
    auto handle = std::make_unique<semquad_dataset>();
    handle->value = semquad::load_dataset(path);
    *out_dataset = handle.release();
  });
}

semquad_status semquad_dataset_save(const semquad_dataset* dataset, const char* path) {
  if (semquad_status s = require(dataset && path, "null argument"); s != SEMQUAD_OK)
    return s;
  return guarded([&] { semquad::save_dataset(path, dataset->value); });
}

semquad_status semquad_dataset_generate(const char* config,
                                        semquad_dataset** out_dataset) {
  if (semquad_status s = require(config && out_dataset, "null argument");
      s != SEMQUAD_OK)
    return s;
  return guarded([&] {
    const semquad::GenSetup setup =
        semquad::parse_gen_config(semquad::KeyValueConfig::parse(config));
    auto handle = std::make_unique<semquad_dataset>();
    handle->value = semquad::generate_synthetic(setup.spec, setup.seed);
    *out_dataset = handle.release();
  });
}

semquad_status semquad_dataset_split(const semquad_dataset* dataset,
                                     double train_fraction, int stratify,
                                     uint64_t seed, semquad_dataset** out_train,
                                     semquad_dataset** out_test) {
  if (semquad_status s = require(dataset && out_train && out_test, "null argument");
      s != SEMQUAD_OK)
    return s;
  return guarded([&] {
    semquad::DatasetSplit split = semquad::split_dataset(
        dataset->value, train_fraction, stratify != 0, seed);
    auto train = std::make_unique<semquad_dataset>();
    auto test = std::make_unique<semquad_dataset>();
    train->value = std::move(split.train);
    test->value = std::move(split.test);
    *out_train = train.release();
    *out_test = test.release();
  });
}

size_t semquad_dataset_size(const semquad_dataset* dataset) {
  return dataset ? dataset->value.size() : 0;
}

size_t semquad_dataset_feature_dim(const semquad_dataset* dataset) {
  return dataset ? dataset->value.header.feature_dim : 0;
}

size_t semquad_dataset_label_dims(const semquad_dataset* dataset) {
  return dataset ? dataset->value.header.label_dims : 0;
}

void semquad_dataset_free(semquad_dataset* dataset) { delete dataset; }

semquad_status semquad_train(const semquad_dataset* dataset, const char* config,
                             const semquad_model* resume,
                             semquad_model** out_model) {
  if (semquad_status s = require(dataset && config && out_model, "null argument");
      s != SEMQUAD_OK)
    return s;
  return guarded([&] {
    semquad::TrainSetup setup =
        semquad::parse_train_config(semquad::KeyValueConfig::parse(config));
    if (resume != nullptr) setup.network = resume->config;
    const semquad::TrainResult result =
        semquad::train(dataset->value, setup.network, setup.train,
                       resume != nullptr ? &resume->params : nullptr);
    auto handle = std::make_unique<semquad_model>();
    handle->config = result.network;
    handle->params = result.params;
    handle->history_csv = history_to_csv(result.history);
    *out_model = handle.release();
  });
}

semquad_status semquad_model_load(const char* path, semquad_model** out_model) {
  if (semquad_status s = require(path && out_model, "null argument"); s != SEMQUAD_OK)
    return s;
  return guarded([&] {
    semquad::ModelFile file = semquad::load_model(path);
    auto handle = std::make_unique<semquad_model>();
    handle->config = std::move(file.config);
    handle->params = std::move(file.params);
    *out_model = handle.release();
  });
}

semquad_status semquad_model_save(const semquad_model* model, const char* path) {
  if (semquad_status s = require(model && path, "null argument"); s != SEMQUAD_OK)
    return s;
  return guarded([&] { semquad::save_model(path, model->config, model->params); });
}

const char* semquad_model_history_csv(const semquad_model* model) {
  return model ? model->history_csv.c_str() : "";
}

size_t semquad_model_input_dim(const semquad_model* model) {
  return model ? model->config.input_dim : 0;
}

size_t semquad_model_embedding_dim(const semquad_model* model) {
  return model ? model->config.embedding_dim : 0;
}

void semquad_model_free(semquad_model* model) { delete model; }

semquad_status semquad_embed(const semquad_model* model,
                             const semquad_dataset* dataset,
                             semquad_embeddings** out_embeddings) {
  if (semquad_status s = require(model && dataset && out_embeddings, "null argument");
      s != SEMQUAD_OK)
    return s;
  return guarded([&] {
    dataset->value.validate();
    auto handle = std::make_unique<semquad_embeddings>();
    handle->table.ids.reserve(dataset->value.size());
    handle->table.values.reserve(dataset->value.size());
    for (const semquad::Sample& sample : dataset->value.samples) {
      handle->table.ids.push_back(sample.id);
      handle->table.values.push_back(
          semquad::forward(model->config, model->params, sample.features));
    }
    *out_embeddings = handle.release();
  });
}

semquad_status semquad_embeddings_load(const char* path,
                                       semquad_embeddings** out_embeddings) {
  if (semquad_status s = require(path && out_embeddings, "null argument");
      s != SEMQUAD_OK)
    return s;
  return guarded([&] {
    auto handle = std::make_unique<semquad_embeddings>();
    handle->table = semquad::load_embeddings(path);
    *out_embeddings = handle.release();
  });
}

semquad_status semquad_embeddings_save(const semquad_embeddings* embeddings,
                                       const char* path) {
  if (semquad_status s = require(embeddings && path, "null argument");
      s != SEMQUAD_OK)
    return s;
  return guarded([&] { semquad::save_embeddings(path, embeddings->table); });
}

size_t semquad_embeddings_count(const semquad_embeddings* embeddings) {
  return embeddings ? embeddings->table.size() : 0;
}

size_t semquad_embeddings_dim(const semquad_embeddings* embeddings) {
  return embeddings ? embeddings->table.dim() : 0;
}

semquad_status semquad_embeddings_row(const semquad_embeddings* embeddings,
                                      size_t row, uint64_t* out_id,
                                      const double** out_values, size_t* out_dim) {
  if (semquad_status s = require(embeddings && out_id && out_values && out_dim,
                                 "null argument");
      s != SEMQUAD_OK)
    return s;
  if (row >= embeddings->table.size()) {
    return fail(SEMQUAD_ERR_INVALID_ARGUMENT,
                "embedding row " + std::to_string(row) + " out of range");
  }
  *out_id = embeddings->table.ids[row];
  *out_values = embeddings->table.values[row].data();
  *out_dim = embeddings->table.values[row].size();
  g_last_error.clear();
  return SEMQUAD_OK;
}

void semquad_embeddings_free(semquad_embeddings* embeddings) { delete embeddings; }

semquad_status semquad_evaluate(const semquad_embeddings* embeddings,
                                const semquad_dataset* dataset,
                                const char* config, semquad_report** out_report) {
  if (semquad_status s = require(embeddings && dataset && config && out_report,
                                 "null argument");
      s != SEMQUAD_OK)
    return s;
  return guarded([&] {
    const semquad::EvalSetup setup =
        semquad::parse_eval_config(semquad::KeyValueConfig::parse(config));
    dataset->value.validate();
    embeddings->table.validate();

    std::map<std::uint64_t, const semquad::Sample*> by_id;
    for (const semquad::Sample& sample : dataset->value.samples) {
      by_id[sample.id] = &sample;
    }
    std::vector<semquad::LabelVector> labels;
    labels.reserve(embeddings->table.size());
    for (std::uint64_t id : embeddings->table.ids) {
      const auto it = by_id.find(id);
      if (it == by_id.end()) {
        throw semquad::ConfigError("embedding id " + std::to_string(id) +
                                   " is not present in the dataset");
      }
      labels.push_back(it->second->labels);
    }

    const semquad::GalleryProbeSplit split = semquad::make_gallery_probe_split(
        embeddings->table.values, labels, setup.split);
    auto handle = std::make_unique<semquad_report>();
    handle->value = semquad::evaluate(split, setup.report);
    handle->scalars = semquad::format_scalars(handle->value);
    *out_report = handle.release();
  });
}

semquad_status semquad_report_write(const semquad_report* report,
                                    const char* out_dir) {
  if (semquad_status s = require(report && out_dir, "null argument"); s != SEMQUAD_OK)
    return s;
  return guarded([&] { semquad::write_report(out_dir, report->value); });
}

const char* semquad_report_scalars(const semquad_report* report) {
  return report ? report->scalars.c_str() : "";
}

void semquad_report_free(semquad_report* report) { delete report; }

semquad_status semquad_plot_report(const char* report_dir, const char* out_dir,
                                   size_t* out_count) {
  if (semquad_status s = require(report_dir && out_dir, "null argument");
      s != SEMQUAD_OK)
    return s;
  return guarded([&] {
    const std::size_t written = semquad::plot_report_dir(report_dir, out_dir);
    if (out_count != nullptr) *out_count = written;
  });
}

semquad_status semquad_plot_embeddings(const semquad_embeddings* embeddings,
                                       const semquad_dataset* dataset,
                                       size_t label_dim, const char* out_path) {
  if (semquad_status s = require(embeddings && dataset && out_path, "null argument");
      s != SEMQUAD_OK)
    return s;
  return guarded([&] {
    dataset->value.validate();
    embeddings->table.validate();
    if (label_dim >= dataset->value.header.label_dims) {
      throw semquad::DimensionError("label dimension " + std::to_string(label_dim) +
                                    " out of range");
    }
    std::map<std::uint64_t, semquad::Label> color_by_id;
    for (const semquad::Sample& sample : dataset->value.samples) {
      color_by_id[sample.id] = sample.labels[label_dim];
    }
    std::vector<semquad::Label> colors;
    colors.reserve(embeddings->table.size());
    for (std::uint64_t id : embeddings->table.ids) {
      const auto it = color_by_id.find(id);
      if (it == color_by_id.end()) {
        throw semquad::ConfigError("embedding id " + std::to_string(id) +
                                   " is not present in the dataset");
      }
      colors.push_back(it->second);
    }
    const auto points = semquad::project_2d(embeddings->table.values);
    semquad::render_scatter_svg(out_path, points, colors,
                                "embeddings by " +
                                    dataset->value.header.names[label_dim]);
  });
}

}  // extern "C"
