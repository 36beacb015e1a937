#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "semquad.h"

namespace {

namespace fs = std::filesystem;

void check(semquad_status status) {
  if (status != SEMQUAD_OK) throw std::runtime_error(semquad_last_error());
}

template <typename T, void (*Free)(T*)>
class Handle {
 public:
  Handle() = default;
  ~Handle() {
    if (ptr_ != nullptr) Free(ptr_);
  }
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;

  T** out() { return &ptr_; }
  T* get() const { return ptr_; }
  explicit operator bool() const { return ptr_ != nullptr; }

 private:
  T* ptr_ = nullptr;
};

using DatasetHandle = Handle<semquad_dataset, semquad_dataset_free>;
using ModelHandle = Handle<semquad_model, semquad_model_free>;
using EmbeddingsHandle = Handle<semquad_embeddings, semquad_embeddings_free>;
using ReportHandle = Handle<semquad_report, semquad_report_free>;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
  if (!out) throw std::runtime_error("failed while writing file: " + path);
}

// Config sources in precedence order: defaults (inside the library), then the
// --config file, then --set pairs, then --seed.
struct ConfigArgs {
  std::string config_path;
  std::vector<std::string> sets;
  std::int64_t seed = -1;  // negative means unset

  std::string merged() const {
    std::string text;
    if (!config_path.empty()) text = read_text_file(config_path) + "\n";
    for (const std::string& pair : sets) text += pair + "\n";
    if (seed >= 0) text += "seed=" + std::to_string(seed) + "\n";
    return text;
  }

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key=value config file");
    cmd->add_option("--set", sets, "config override, key=value (repeatable)");
    cmd->add_option("--seed", seed, "random seed (overrides the config file)")
        ->check(CLI::NonNegativeNumber);
  }
};

std::string normalized(const std::string& config) {
  char* text = nullptr;
  check(semquad_config_normalize(config.c_str(), &text));
  std::string out(text);
  semquad_string_free(text);
  return out;
}

void write_manifest(const std::string& out_dir, const std::string& command,
                    const std::string& config) {
  std::string manifest = "command=" + command + "\n" + normalized(config);
  write_text_file((fs::path(out_dir) / "manifest.txt").string(), manifest);
}

void cmd_gen(const ConfigArgs& config, const std::string& out_dir) {
  const std::string text = config.merged();
  DatasetHandle dataset;
  check(semquad_dataset_generate(text.c_str(), dataset.out()));
  fs::create_directories(out_dir);
  check(semquad_dataset_save(dataset.get(),
                             (fs::path(out_dir) / "dataset.txt").string().c_str()));
  write_manifest(out_dir, "gen", text);
  std::cout << "wrote " << semquad_dataset_size(dataset.get()) << " samples to "
            << out_dir << "/dataset.txt\n";
}

void cmd_train(const std::string& data_path, const std::string& resume_path,
               const ConfigArgs& config, const std::string& out_dir) {
  const std::string text = config.merged();
  DatasetHandle dataset;
  check(semquad_dataset_load(data_path.c_str(), dataset.out()));
  ModelHandle resume;
  if (!resume_path.empty()) {
    check(semquad_model_load(resume_path.c_str(), resume.out()));
  }
  ModelHandle model;
  check(semquad_train(dataset.get(), text.c_str(), resume.get(), model.out()));

  fs::create_directories(out_dir);
  check(semquad_model_save(model.get(),
                           (fs::path(out_dir) / "model.txt").string().c_str()));
  write_text_file((fs::path(out_dir) / "history.csv").string(),
                  semquad_model_history_csv(model.get()));
  write_manifest(out_dir, "train", text);
  std::cout << "trained model (input " << semquad_model_input_dim(model.get())
            << " -> embedding " << semquad_model_embedding_dim(model.get())
            << ") written to " << out_dir << "/model.txt\n";
}

void cmd_embed(const std::string& model_path, const std::string& data_path,
               const std::string& out_dir) {
  ModelHandle model;
  check(semquad_model_load(model_path.c_str(), model.out()));
  DatasetHandle dataset;
  check(semquad_dataset_load(data_path.c_str(), dataset.out()));
  EmbeddingsHandle embeddings;
  check(semquad_embed(model.get(), dataset.get(), embeddings.out()));

  fs::create_directories(out_dir);
  check(semquad_embeddings_save(
      embeddings.get(), (fs::path(out_dir) / "embeddings.csv").string().c_str()));
  write_manifest(out_dir, "embed", "");
  std::cout << "embedded " << semquad_embeddings_count(embeddings.get())
            << " samples into " << semquad_embeddings_dim(embeddings.get())
            << " dimensions\n";
}

void cmd_eval(const std::string& model_path, const std::string& embeddings_path,
              const std::string& data_path, const ConfigArgs& config,
              const std::string& out_dir) {
  const std::string text = config.merged();
  DatasetHandle dataset;
  check(semquad_dataset_load(data_path.c_str(), dataset.out()));

  EmbeddingsHandle embeddings;
  if (!model_path.empty()) {
    ModelHandle model;
    check(semquad_model_load(model_path.c_str(), model.out()));
    check(semquad_embed(model.get(), dataset.get(), embeddings.out()));
  } else {
    check(semquad_embeddings_load(embeddings_path.c_str(), embeddings.out()));
  }

  ReportHandle report;
  check(semquad_evaluate(embeddings.get(), dataset.get(), text.c_str(),
                         report.out()));
  fs::create_directories(out_dir);
  check(semquad_report_write(report.get(), out_dir.c_str()));
  write_manifest(out_dir, "eval", text);
  std::cout << semquad_report_scalars(report.get());
}

void cmd_plot(const std::string& report_dir, const std::string& embeddings_path,
              const std::string& data_path, std::size_t label_dim,
              const std::string& out_dir) {
  fs::create_directories(out_dir);
  std::size_t written = 0;
  if (!report_dir.empty()) {
    std::size_t count = 0;
    check(semquad_plot_report(report_dir.c_str(), out_dir.c_str(), &count));
    written += count;
  }
  if (!embeddings_path.empty()) {
    EmbeddingsHandle embeddings;
    check(semquad_embeddings_load(embeddings_path.c_str(), embeddings.out()));
    DatasetHandle dataset;
    check(semquad_dataset_load(data_path.c_str(), dataset.out()));
    check(semquad_plot_embeddings(
        embeddings.get(), dataset.get(), label_dim,
        (fs::path(out_dir) / "embeddings.svg").string().c_str()));
    ++written;
  }
  write_manifest(out_dir, "plot", "");
  std::cout << "wrote " << written << " SVG file(s) to " << out_dir << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semantically-coherent quadruplet metric learning"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(semquad_version()));

  ConfigArgs gen_config;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("gen", "generate a synthetic dataset");
  gen_config.attach(gen);
  gen->add_option("--out", gen_out, "output directory")->required();

  ConfigArgs train_config;
  std::string train_data, train_resume, train_out;
  CLI::App* train = app.add_subcommand("train", "train an embedding network");
  train_config.attach(train);
  train->add_option("--data", train_data, "dataset file")->required();
  train->add_option("--resume", train_resume, "checkpoint to continue from");
  train->add_option("--out", train_out, "output directory")->required();

  std::string embed_model, embed_data, embed_out;
  CLI::App* embed = app.add_subcommand("embed", "embed a dataset with a checkpoint");
  embed->add_option("--model", embed_model, "model checkpoint")->required();
  embed->add_option("--data", embed_data, "dataset file")->required();
  embed->add_option("--out", embed_out, "output directory")->required();

  ConfigArgs eval_config;
  std::string eval_model, eval_embeddings, eval_data, eval_out;
  CLI::App* eval = app.add_subcommand("eval", "run the evaluation protocols");
  eval_config.attach(eval);
  CLI::Option* eval_model_opt =
      eval->add_option("--model", eval_model, "model checkpoint");
  CLI::Option* eval_emb_opt =
      eval->add_option("--embeddings", eval_embeddings, "embeddings CSV");
  eval_model_opt->excludes(eval_emb_opt);
  eval->add_option("--data", eval_data, "dataset file")->required();
  eval->add_option("--out", eval_out, "output directory")->required();

  std::string plot_report, plot_embeddings, plot_data, plot_out;
  std::size_t plot_label_dim = 0;
  CLI::App* plot = app.add_subcommand("plot", "render curves and scatters as SVG");
  plot->add_option("--report", plot_report, "evaluation report directory");
  CLI::Option* plot_emb_opt =
      plot->add_option("--embeddings", plot_embeddings, "embeddings CSV to scatter");
  plot->add_option("--data", plot_data, "dataset file providing scatter colors")
      ->needs(plot_emb_opt);
  plot->add_option("--label-dim", plot_label_dim,
                   "label dimension coloring the scatter (default 0)");
  plot->add_option("--out", plot_out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      cmd_gen(gen_config, gen_out);
    } else if (train->parsed()) {
      cmd_train(train_data, train_resume, train_config, train_out);
    } else if (embed->parsed()) {
      cmd_embed(embed_model, embed_data, embed_out);
    } else if (eval->parsed()) {
      if (eval_model.empty() && eval_embeddings.empty()) {
        throw std::runtime_error("eval needs --model or --embeddings");
      }
      cmd_eval(eval_model, eval_embeddings, eval_data, eval_config, eval_out);
    } else if (plot->parsed()) {
      if (plot_report.empty() && plot_embeddings.empty()) {
        throw std::runtime_error("plot needs --report or --embeddings");
      }
      if (!plot_embeddings.empty() && plot_data.empty()) {
        throw std::runtime_error("plotting embeddings needs --data for labels");
      }
      cmd_plot(plot_report, plot_embeddings, plot_data, plot_label_dim, plot_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
