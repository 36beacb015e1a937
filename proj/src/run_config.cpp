#include "semquad/run_config.hpp"

#include "semquad/rng.hpp"

namespace semquad {

GenSetup parse_gen_config(KeyValueConfig config) {
  GenSetup setup;
  setup.seed = config.take_u64("seed", 1);
  SyntheticSpec& spec = setup.spec;
  spec.identities = config.take_size("identities", spec.identities);
  spec.soft_dims = config.take_size("soft_dims", spec.soft_dims);
  spec.soft_cardinality = static_cast<Label>(
      config.take_u64("soft_cardinality", spec.soft_cardinality));
  spec.samples_per_identity =
      config.take_size("samples_per_identity", spec.samples_per_identity);
  spec.feature_dim = config.take_size("feature_dim", spec.feature_dim);
  spec.noise_sigma = config.take_double("noise_sigma", spec.noise_sigma);
  spec.semantic_correlation =
      config.take_double("semantic_correlation", spec.semantic_correlation);
  spec.spread = config.take_double("spread", spec.spread);
  spec.identity_sigma = config.take_double("identity_sigma", spec.identity_sigma);
  config.finish();
  spec.validate();
  return setup;
}

TrainSetup parse_train_config(KeyValueConfig config) {
  TrainSetup setup;
  TrainConfig& train = setup.train;
  train.seed = config.take_u64("seed", train.seed);
  train.loss = loss_from_string(config.take_string("loss", to_string(train.loss)));
  train.learning_rate = config.take_double("learning_rate", train.learning_rate);
  train.momentum = config.take_double("momentum", train.momentum);
  train.weight_decay = config.take_double("weight_decay", train.weight_decay);
  train.batch_size = config.take_size("batch_size", train.batch_size);
  train.minibatch_size = config.take_size("minibatch_size", train.minibatch_size);
  train.patience = config.take_size("patience", train.patience);
  train.max_epochs = config.take_size("max_epochs", train.max_epochs);
  train.margin = config.take_double("margin", train.margin);
  train.validation_fraction =
      config.take_double("validation_fraction", train.validation_fraction);
  train.iters_per_epoch = config.take_size("iters_per_epoch", train.iters_per_epoch);
  train.semi_hard = config.take_bool("semi_hard", train.semi_hard);
  train.center_lambda = config.take_double("center_lambda", train.center_lambda);
  train.center_learning_rate =
      config.take_double("center_learning_rate", train.center_learning_rate);
  train.lr_step_epochs = config.take_size("lr_step_epochs", train.lr_step_epochs);
  train.lr_step_factor = config.take_double("lr_step_factor", train.lr_step_factor);

  NetworkConfig& network = setup.network;
  network.hidden = config.take_size_list("hidden", network.hidden);
  network.embedding_dim = config.take_size("embedding_dim", network.embedding_dim);
  network.activation = activation_from_string(
      config.take_string("activation", to_string(network.activation)));
  network.normalize_output =
      config.take_bool("normalize_output", network.normalize_output);
  config.finish();
  train.validate();
  return setup;
}

EvalSetup parse_eval_config(KeyValueConfig config) {
  EvalSetup setup;
  const std::uint64_t seed = config.take_u64("seed", 1);
  setup.split.seed = derive_seed(seed, "gallery-probe");
  setup.split.open_set = config.take_bool("open_set", setup.split.open_set);
  setup.split.gallery_fraction =
      config.take_double("gallery_fraction", setup.split.gallery_fraction);
  setup.split.impostor_fraction =
      config.take_double("impostor_fraction", setup.split.impostor_fraction);

  setup.report.seed = seed;
  setup.report.soft_dims = config.take_size_list("soft_dims", setup.report.soft_dims);
  setup.report.filter_dims =
      config.take_size_list("filter_dims", setup.report.filter_dims);
  setup.report.dir_thresholds =
      config.take_double_list("dir_thresholds", setup.report.dir_thresholds);
  setup.report.bootstrap_trials =
      config.take_size("bootstrap_trials", setup.report.bootstrap_trials);
  setup.report.bootstrap_fraction =
      config.take_double("bootstrap_fraction", setup.report.bootstrap_fraction);
  config.finish();
  return setup;
}

}  // namespace semquad
