#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"

namespace {

namespace fs = std::filesystem;

std::string cli_binary() {
  const char* path = std::getenv("SEMQUAD_CLI");
  REQUIRE_MESSAGE(path != nullptr, "SEMQUAD_CLI must point at the CLI binary");
  return path;
}

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const std::string log = (fs::temp_directory_path() / "semquad_cli_log.txt").string();
  const std::string command = cli_binary() + " " + args + " > " + log + " 2>&1";
  const int status = std::system(command.c_str());

  RunResult result;
  result.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log, std::ios::binary);
  result.output.assign(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
  fs::remove(log);
  return result;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

std::string fresh_dir(const std::string& name) {
  const std::string dir = (fs::temp_directory_path() / name).string();
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const std::string kGenFlags =
    " --seed 3 --set identities=5 --set soft_dims=2 --set soft_cardinality=2"
    " --set samples_per_identity=4 --set feature_dim=6"
    " --set semantic_correlation=0.8 --set noise_sigma=0.05";

const std::string kTrainFlags =
    " --seed 11 --set loss=quadruplet --set learning_rate=0.05"
    " --set batch_size=12 --set minibatch_size=8 --set max_epochs=2"
    " --set hidden=6 --set embedding_dim=2";

}  // namespace

TEST_CASE("the binary reports a version and per-command help") {
  const RunResult version = run_cli("--version");
  CHECK(version.exit_code == 0);
  CHECK(version.output.find('.') != std::string::npos);

  const RunResult help = run_cli("--help");
  CHECK(help.exit_code == 0);
  for (const char* name : {"gen", "train", "embed", "eval", "plot"}) {
    CHECK(help.output.find(name) != std::string::npos);
  }

  CHECK(run_cli("").exit_code != 0);
  CHECK(run_cli("frobnicate").exit_code != 0);
}

TEST_CASE("the pipeline runs end to end and reruns byte-identically") {
  const std::string gen_dir = fresh_dir("semquad_cli_gen");
  const std::string gen_again = fresh_dir("semquad_cli_gen2");
  const std::string train_dir = fresh_dir("semquad_cli_train");
  const std::string train_again = fresh_dir("semquad_cli_train2");
  const std::string embed_dir = fresh_dir("semquad_cli_embed");
  const std::string eval_dir = fresh_dir("semquad_cli_eval");
  const std::string eval_again = fresh_dir("semquad_cli_eval2");
  const std::string plot_dir = fresh_dir("semquad_cli_plot");

  REQUIRE(run_cli("gen --out " + gen_dir + kGenFlags).exit_code == 0);
  REQUIRE(fs::exists(gen_dir + "/dataset.txt"));
  const std::string manifest = slurp(gen_dir + "/manifest.txt");
  CHECK(manifest.rfind("command=gen\n", 0) == 0);
  CHECK(manifest.find("seed=3\n") != std::string::npos);

  REQUIRE(run_cli("gen --out " + gen_again + kGenFlags).exit_code == 0);
  CHECK(slurp(gen_again + "/dataset.txt") == slurp(gen_dir + "/dataset.txt"));

  const std::string data = gen_dir + "/dataset.txt";
  REQUIRE(run_cli("train --data " + data + " --out " + train_dir + kTrainFlags)
              .exit_code == 0);
  REQUIRE(fs::exists(train_dir + "/model.txt"));
  REQUIRE(fs::exists(train_dir + "/history.csv"));
  CHECK(slurp(train_dir + "/history.csv").rfind("epoch,train_loss,val_loss\n", 0) ==
        0);

  REQUIRE(run_cli("train --data " + data + " --out " + train_again + kTrainFlags)
              .exit_code == 0);
  CHECK(slurp(train_again + "/model.txt") == slurp(train_dir + "/model.txt"));
  CHECK(slurp(train_again + "/history.csv") == slurp(train_dir + "/history.csv"));

  const std::string model = train_dir + "/model.txt";
  REQUIRE(run_cli("embed --model " + model + " --data " + data + " --out " +
                  embed_dir)
              .exit_code == 0);
  REQUIRE(fs::exists(embed_dir + "/embeddings.csv"));
  CHECK(slurp(embed_dir + "/embeddings.csv").rfind("id,e0,e1\n", 0) == 0);

  const std::string eval_args = " --data " + data +
                                " --seed 5 --set bootstrap_trials=3"
                                " --set filter_dims=1";
  const RunResult eval = run_cli("eval --model " + model + " --out " + eval_dir +
                                 eval_args);
  REQUIRE(eval.exit_code == 0);
  CHECK(eval.output.find("rank1=") != std::string::npos);
  REQUIRE(fs::exists(eval_dir + "/roc.csv"));
  REQUIRE(fs::exists(eval_dir + "/scalars.txt"));

  const RunResult eval_repeat = run_cli("eval --model " + model + " --out " +
                                        eval_again + eval_args);
  REQUIRE(eval_repeat.exit_code == 0);
  CHECK(eval_repeat.output == eval.output);
  CHECK(slurp(eval_again + "/scalars.txt") == slurp(eval_dir + "/scalars.txt"));
  CHECK(slurp(eval_again + "/roc.csv") == slurp(eval_dir + "/roc.csv"));

  const RunResult eval_from_csv =
      run_cli("eval --embeddings " + embed_dir + "/embeddings.csv --out " +
              fresh_dir("semquad_cli_eval3") + eval_args);
  REQUIRE(eval_from_csv.exit_code == 0);
  CHECK(eval_from_csv.output == eval.output);

  REQUIRE(run_cli("plot --report " + eval_dir + " --embeddings " + embed_dir +
                  "/embeddings.csv --data " + data + " --label-dim 1 --out " +
                  plot_dir)
              .exit_code == 0);
  CHECK(fs::exists(plot_dir + "/roc.svg"));
  CHECK(fs::exists(plot_dir + "/cmc.svg"));
  CHECK(fs::exists(plot_dir + "/embeddings.svg"));

  for (const std::string& dir : {gen_dir, gen_again, train_dir, train_again,
                                 embed_dir, eval_dir, eval_again, plot_dir}) {
    fs::remove_all(dir);
  }
}

TEST_CASE("bad invocations exit nonzero with an error message") {
  const std::string out = fresh_dir("semquad_cli_bad");

  const RunResult unknown_key =
      run_cli("gen --out " + out + " --seed 1 --set bogus_knob=2");
  CHECK(unknown_key.exit_code == 1);
  CHECK(unknown_key.output.find("error:") != std::string::npos);
  CHECK(unknown_key.output.find("bogus_knob") != std::string::npos);

  CHECK(run_cli("gen").exit_code != 0);
  CHECK(run_cli("train --data /no/such/dataset.txt --out " + out).exit_code == 1);
  CHECK(run_cli("eval --out " + out).exit_code != 0);
  CHECK(run_cli("plot --out " + out).exit_code == 1);

  const RunResult both = run_cli("eval --model a --embeddings b --data c --out " +
                                 out);
  CHECK(both.exit_code != 0);

  fs::remove_all(out);
}
