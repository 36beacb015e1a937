#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "semquad.h"

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << text;
}

constexpr const char* kGenConfig =
    "seed=3\n"
    "identities=6\n"
    "soft_dims=2\n"
    "soft_cardinality=2\n"
    "samples_per_identity=5\n"
    "feature_dim=8\n"
    "noise_sigma=0.05\n"
    "semantic_correlation=0.8\n";

constexpr const char* kTrainConfig =
    "seed=11\n"
    "loss=quadruplet\n"
    "learning_rate=0.05\n"
    "batch_size=18\n"
    "minibatch_size=12\n"
    "max_epochs=4\n"
    "patience=4\n"
    "hidden=8\n"
    "embedding_dim=4\n";

semquad_dataset* generated_dataset() {
  semquad_dataset* dataset = nullptr;
  REQUIRE(semquad_dataset_generate(kGenConfig, &dataset) == SEMQUAD_OK);
  REQUIRE(dataset != nullptr);
  return dataset;
}

}  // namespace

TEST_CASE("the library reports a version and normalizes config text") {
  REQUIRE(semquad_version() != nullptr);
  CHECK(std::strchr(semquad_version(), '.') != nullptr);

  char* text = nullptr;
  REQUIRE(semquad_config_normalize("zeta=1\n# note\nalpha= 2 \nzeta=3\n", &text) ==
          SEMQUAD_OK);
  CHECK(std::string(text) == "alpha=2\nzeta=3\n");
  semquad_string_free(text);

  CHECK(semquad_config_normalize(nullptr, &text) == SEMQUAD_ERR_INVALID_ARGUMENT);
  CHECK(std::string(semquad_last_error()) == "null argument");

  CHECK(semquad_config_normalize("broken line\n", &text) ==
        SEMQUAD_ERR_INVALID_ARGUMENT);
  CHECK(std::string(semquad_last_error()).find("line 1") != std::string::npos);
}

TEST_CASE("datasets generate, persist and split through the C boundary") {
  semquad_dataset* dataset = generated_dataset();
  CHECK(semquad_dataset_size(dataset) == 30);
  CHECK(semquad_dataset_feature_dim(dataset) == 8);
  CHECK(semquad_dataset_label_dims(dataset) == 3);

  const std::string path = temp_path("semquad_capi_dataset.txt");
  REQUIRE(semquad_dataset_save(dataset, path.c_str()) == SEMQUAD_OK);

  semquad_dataset* loaded = nullptr;
  REQUIRE(semquad_dataset_load(path.c_str(), &loaded) == SEMQUAD_OK);
  CHECK(semquad_dataset_size(loaded) == 30);
  CHECK(semquad_dataset_label_dims(loaded) == 3);

  semquad_dataset* train = nullptr;
  semquad_dataset* test = nullptr;
  REQUIRE(semquad_dataset_split(loaded, 0.8, 1, 7, &train, &test) == SEMQUAD_OK);
  CHECK(semquad_dataset_size(train) + semquad_dataset_size(test) == 30);
  CHECK(semquad_dataset_size(train) > 0);
  CHECK(semquad_dataset_size(test) > 0);

  CHECK(semquad_dataset_save(dataset, "/no/such/dir/out.txt") == SEMQUAD_ERR_IO);
  CHECK(semquad_dataset_split(loaded, 0.0, 1, 7, &train, &test) ==
        SEMQUAD_ERR_INVALID_ARGUMENT);

  semquad_dataset_free(test);
  semquad_dataset_free(train);
  semquad_dataset_free(loaded);
  semquad_dataset_free(dataset);
  std::filesystem::remove(path);
}

TEST_CASE("generation rejects unknown keys and bad values with messages") {
  semquad_dataset* dataset = nullptr;
  CHECK(semquad_dataset_generate("seed=1\nidentities=4\nbogus_knob=2\n", &dataset) ==
        SEMQUAD_ERR_INVALID_ARGUMENT);
  CHECK(std::string(semquad_last_error()).find("bogus_knob") != std::string::npos);

  CHECK(semquad_dataset_generate("identities=0\n", &dataset) ==
        SEMQUAD_ERR_INVALID_ARGUMENT);
  CHECK(semquad_dataset_load("/no/such/file.txt", &dataset) == SEMQUAD_ERR_IO);
  CHECK(std::string(semquad_last_error()).find("/no/such/file.txt") !=
        std::string::npos);
}

TEST_CASE("a model trains, persists, embeds and evaluates end to end") {
  semquad_dataset* dataset = generated_dataset();

  semquad_model* model = nullptr;
  REQUIRE(semquad_train(dataset, kTrainConfig, nullptr, &model) == SEMQUAD_OK);
  CHECK(semquad_model_input_dim(model) == 8);
  CHECK(semquad_model_embedding_dim(model) == 4);
  const std::string history = semquad_model_history_csv(model);
  CHECK(history.rfind("epoch,train_loss,val_loss\n", 0) == 0);
  CHECK(history.find("\n1,") != std::string::npos);

  const std::string model_path = temp_path("semquad_capi_model.txt");
  REQUIRE(semquad_model_save(model, model_path.c_str()) == SEMQUAD_OK);
  semquad_model* reloaded = nullptr;
  REQUIRE(semquad_model_load(model_path.c_str(), &reloaded) == SEMQUAD_OK);
  CHECK(semquad_model_embedding_dim(reloaded) == 4);
  CHECK(std::string(semquad_model_history_csv(reloaded)).empty());

  semquad_model* resumed = nullptr;
  REQUIRE(semquad_train(dataset, kTrainConfig, reloaded, &resumed) == SEMQUAD_OK);
  CHECK(semquad_model_embedding_dim(resumed) == 4);

  semquad_embeddings* embeddings = nullptr;
  REQUIRE(semquad_embed(model, dataset, &embeddings) == SEMQUAD_OK);
  CHECK(semquad_embeddings_count(embeddings) == 30);
  CHECK(semquad_embeddings_dim(embeddings) == 4);

  uint64_t id = 0;
  const double* values = nullptr;
  size_t dim = 0;
  REQUIRE(semquad_embeddings_row(embeddings, 0, &id, &values, &dim) == SEMQUAD_OK);
  CHECK(id == 0);
  CHECK(dim == 4);
  REQUIRE(values != nullptr);
  CHECK(semquad_embeddings_row(embeddings, 30, &id, &values, &dim) ==
        SEMQUAD_ERR_INVALID_ARGUMENT);
  CHECK(std::string(semquad_last_error()).find("out of range") != std::string::npos);

  const std::string emb_path = temp_path("semquad_capi_embeddings.csv");
  REQUIRE(semquad_embeddings_save(embeddings, emb_path.c_str()) == SEMQUAD_OK);
  semquad_embeddings* emb_loaded = nullptr;
  REQUIRE(semquad_embeddings_load(emb_path.c_str(), &emb_loaded) == SEMQUAD_OK);
  CHECK(semquad_embeddings_count(emb_loaded) == 30);

  semquad_report* report = nullptr;
  REQUIRE(semquad_evaluate(embeddings, dataset,
                           "seed=5\nbootstrap_trials=3\nfilter_dims=1\n",
                           &report) == SEMQUAD_OK);
  const std::string scalars = semquad_report_scalars(report);
  CHECK(scalars.find("rank1=") != std::string::npos);
  CHECK(scalars.find("labelling_error_mean=") != std::string::npos);

  const std::string report_dir = temp_path("semquad_capi_report");
  std::filesystem::remove_all(report_dir);
  REQUIRE(semquad_report_write(report, report_dir.c_str()) == SEMQUAD_OK);
  CHECK(std::filesystem::exists(report_dir + "/roc.csv"));
  CHECK(std::filesystem::exists(report_dir + "/cmc.csv"));
  CHECK(std::filesystem::exists(report_dir + "/hit_penetration_baseline.csv"));
  CHECK(std::filesystem::exists(report_dir + "/scalars.txt"));

  const std::string plot_dir = temp_path("semquad_capi_plots");
  std::filesystem::remove_all(plot_dir);
  size_t plotted = 0;
  REQUIRE(semquad_plot_report(report_dir.c_str(), plot_dir.c_str(), &plotted) ==
          SEMQUAD_OK);
  CHECK(plotted >= 3);
  CHECK(std::filesystem::exists(plot_dir + "/roc.svg"));

  const std::string scatter_path = temp_path("semquad_capi_scatter.svg");
  REQUIRE(semquad_plot_embeddings(embeddings, dataset, 1, scatter_path.c_str()) ==
          SEMQUAD_OK);
  CHECK(std::filesystem::exists(scatter_path));
  CHECK(semquad_plot_embeddings(embeddings, dataset, 9, scatter_path.c_str()) ==
        SEMQUAD_ERR_DIMENSION);

  semquad_report_free(report);
  semquad_embeddings_free(emb_loaded);
  semquad_embeddings_free(embeddings);
  semquad_model_free(resumed);
  semquad_model_free(reloaded);
  semquad_model_free(model);
  semquad_dataset_free(dataset);
  std::filesystem::remove(model_path);
  std::filesystem::remove(emb_path);
  std::filesystem::remove(scatter_path);
  std::filesystem::remove_all(report_dir);
  std::filesystem::remove_all(plot_dir);
}

TEST_CASE("training failures map onto the matching status codes") {
  const std::string flat_path = temp_path("semquad_capi_flat.txt");
  spit(flat_path,
       "semquad dataset v1\n"
       "features 2\n"
       "labels 1\n"
       "cardinality 1\n"
       "name ID\n"
       "samples 4\n"
       "0 0 0 0.5\n"
       "1 0 1 0.25\n"
       "2 0 0.5 1\n"
       "3 0 0.75 0.125\n");

  semquad_dataset* flat = nullptr;
  REQUIRE(semquad_dataset_load(flat_path.c_str(), &flat) == SEMQUAD_OK);

  semquad_model* model = nullptr;
  CHECK(semquad_train(flat, "seed=1\nloss=quadruplet\nmax_epochs=1\n", nullptr,
                      nullptr) == SEMQUAD_ERR_INVALID_ARGUMENT);
  CHECK(semquad_train(flat, "seed=1\nloss=quadruplet\nmax_epochs=1\n", nullptr,
                      &model) == SEMQUAD_ERR_DEGENERATE);
  CHECK(semquad_train(flat, "seed=1\nloss=warp\n", nullptr, &model) ==
        SEMQUAD_ERR_INVALID_ARGUMENT);
  CHECK(std::string(semquad_last_error()).find("warp") != std::string::npos);

  semquad_model* bogus = nullptr;
  CHECK(semquad_model_load(flat_path.c_str(), &bogus) == SEMQUAD_ERR_PARSE);

  semquad_dataset_free(flat);
  std::filesystem::remove(flat_path);
}

TEST_CASE("evaluation rejects embeddings that reference unknown sample ids") {
  semquad_dataset* dataset = generated_dataset();

  const std::string emb_path = temp_path("semquad_capi_orphan.csv");
  spit(emb_path, "id,e0,e1\n999,0.5,0.25\n0,1,0\n");
  semquad_embeddings* orphan = nullptr;
  REQUIRE(semquad_embeddings_load(emb_path.c_str(), &orphan) == SEMQUAD_OK);

  semquad_report* report = nullptr;
  CHECK(semquad_evaluate(orphan, dataset, "seed=1\n", &report) ==
        SEMQUAD_ERR_INVALID_ARGUMENT);
  CHECK(std::string(semquad_last_error()).find("999") != std::string::npos);

  semquad_embeddings_free(orphan);
  semquad_dataset_free(dataset);
  std::filesystem::remove(emb_path);
}

TEST_CASE("null handles are rejected and accessors stay safe") {
  CHECK(semquad_dataset_load(nullptr, nullptr) == SEMQUAD_ERR_INVALID_ARGUMENT);
  CHECK(semquad_train(nullptr, "seed=1\n", nullptr, nullptr) ==
        SEMQUAD_ERR_INVALID_ARGUMENT);
  CHECK(semquad_embed(nullptr, nullptr, nullptr) == SEMQUAD_ERR_INVALID_ARGUMENT);
  CHECK(semquad_evaluate(nullptr, nullptr, nullptr, nullptr) ==
        SEMQUAD_ERR_INVALID_ARGUMENT);
  CHECK(semquad_report_write(nullptr, "x") == SEMQUAD_ERR_INVALID_ARGUMENT);
  CHECK(semquad_plot_report(nullptr, nullptr, nullptr) ==
        SEMQUAD_ERR_INVALID_ARGUMENT);

  CHECK(semquad_dataset_size(nullptr) == 0);
  CHECK(semquad_model_input_dim(nullptr) == 0);
  CHECK(semquad_embeddings_count(nullptr) == 0);
  CHECK(std::string(semquad_model_history_csv(nullptr)).empty());
  CHECK(std::string(semquad_report_scalars(nullptr)).empty());

  semquad_dataset_free(nullptr);
  semquad_model_free(nullptr);
  semquad_embeddings_free(nullptr);
  semquad_report_free(nullptr);
  semquad_string_free(nullptr);
}
