#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "semquad/eval.hpp"

using namespace semquad;

namespace {

oracle::Labels identity_column(const std::vector<LabelVector>& labels) {
  oracle::Labels ids;
  for (const auto& row : labels) ids.push_back(row[0]);
  return ids;
}

// Random closed-set split; label layout (identity, soft1, soft2).
GalleryProbeSplit random_split(std::mt19937_64& rng, std::size_t identities,
                               std::size_t gallery_per_id, std::size_t probes_per_id,
                               std::size_t dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<Label> soft(0, 1);
  GalleryProbeSplit split;
  for (Label id = 0; id < identities; ++id) {
    const LabelVector labels = {id, soft(rng), soft(rng)};
    for (std::size_t k = 0; k < gallery_per_id; ++k) {
      Embedding e(dim);
      for (double& v : e) v = gauss(rng);
      split.gallery_embeddings.push_back(e);
      split.gallery_labels.push_back(labels);
    }
    for (std::size_t k = 0; k < probes_per_id; ++k) {
      Embedding e(dim);
      for (double& v : e) v = gauss(rng);
      split.probe_embeddings.push_back(e);
      split.probe_labels.push_back(labels);
    }
  }
  return split;
}

bool curves_equal(const std::vector<CurvePoint>& lib,
                  const std::vector<oracle::Point>& ref) {
  if (lib.size() != ref.size()) return false;
  for (std::size_t k = 0; k < lib.size(); ++k) {
    if (lib[k].x != ref[k].first || lib[k].y != ref[k].second) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("make_gallery_probe_split partitions every sample deterministically") {
  std::mt19937_64 data_rng(1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Embedding> embeddings;
  std::vector<LabelVector> labels;
  for (Label id = 0; id < 5; ++id) {
    for (std::size_t k = 0; k < 6; ++k) {
      embeddings.push_back({gauss(data_rng), gauss(data_rng)});
      labels.push_back({id, id % 2});
    }
  }

  SplitSpec spec;
  spec.gallery_fraction = 0.5;
  spec.seed = 9;
  const GalleryProbeSplit split = make_gallery_probe_split(embeddings, labels, spec);
  CHECK_NOTHROW(split.validate());
  CHECK(split.gallery_embeddings.size() == 15);
  CHECK(split.probe_embeddings.size() == 15);
  CHECK_FALSE(split.open_set);

  const GalleryProbeSplit again = make_gallery_probe_split(embeddings, labels, spec);
  CHECK(again.gallery_embeddings == split.gallery_embeddings);
  CHECK(again.probe_labels == split.probe_labels);

  SplitSpec open = spec;
  open.open_set = true;
  open.impostor_fraction = 0.4;
  const GalleryProbeSplit os = make_gallery_probe_split(embeddings, labels, open);
  CHECK(os.open_set);
  CHECK(os.impostor_probes.size() == 12);  // 2 of 5 identities, 6 samples each
  CHECK_NOTHROW(os.validate());

  SplitSpec bad = spec;
  bad.gallery_fraction = 0.0;
  CHECK_THROWS_AS(make_gallery_probe_split(embeddings, labels, bad), ConfigError);
}

TEST_CASE("split validation catches inconsistent shapes and impostor lists") {
  GalleryProbeSplit split;
  split.gallery_embeddings = {{0.0, 0.0}};
  split.gallery_labels = {{0}};
  split.probe_embeddings = {{1.0, 1.0}};
  split.probe_labels = {{0}};
  CHECK_NOTHROW(split.validate());

  GalleryProbeSplit mixed = split;
  mixed.probe_embeddings.push_back({1.0});
  mixed.probe_labels.push_back({0});
  CHECK_THROWS_AS(mixed.validate(), ProtocolError);

  GalleryProbeSplit closed_with_impostor = split;
  closed_with_impostor.impostor_probes = {0};
  CHECK_THROWS_AS(closed_with_impostor.validate(), ProtocolError);

  GalleryProbeSplit open_unlisted = split;
  open_unlisted.open_set = true;
  open_unlisted.probe_labels[0] = {7};
  CHECK_THROWS_AS(open_unlisted.validate(), ProtocolError);  // nothing listed
  open_unlisted.impostor_probes = {0};
  CHECK_NOTHROW(open_unlisted.validate());
}

TEST_CASE("verification_roc matches the brute-force oracle exactly") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const GalleryProbeSplit split = random_split(rng, 4, 2, 2, 3);
    const auto lib = verification_roc(split);
    const auto ref =
        oracle::roc(split.gallery_embeddings, identity_column(split.gallery_labels),
                    split.probe_embeddings, identity_column(split.probe_labels));
    CHECK(curves_equal(lib, ref));
    CHECK(lib.front().x == 0.0);
    CHECK(lib.front().y == 0.0);
    CHECK(lib.back().x == 1.0);
    CHECK(lib.back().y == 1.0);
    for (std::size_t k = 1; k < lib.size(); ++k) {
      CHECK(lib[k].x >= lib[k - 1].x);
      CHECK(lib[k].y >= lib[k - 1].y);
    }
  }
}

TEST_CASE("verification_roc needs both pair classes") {
  GalleryProbeSplit split;
  split.gallery_embeddings = {{0.0}};
  split.gallery_labels = {{0}};
  split.probe_embeddings = {{1.0}};
  split.probe_labels = {{0}};
  CHECK_THROWS_AS(verification_roc(split), ProtocolError);  // no impostor pairs
  split.probe_labels = {{1}};
  CHECK_THROWS_AS(verification_roc(split), ProtocolError);  // no genuine pairs
}

TEST_CASE("cmc_curve matches the oracle and is monotone") {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 20; ++trial) {
    const GalleryProbeSplit split = random_split(rng, 5, 2, 1, 2);
    const auto lib = cmc_curve(split);
    const auto ref =
        oracle::cmc(split.gallery_embeddings, identity_column(split.gallery_labels),
                    split.probe_embeddings, identity_column(split.probe_labels));
    CHECK(curves_equal(lib, ref));
    REQUIRE_FALSE(lib.empty());
    CHECK(lib.back().y == 1.0);
    for (std::size_t k = 1; k < lib.size(); ++k) CHECK(lib[k].y >= lib[k - 1].y);
  }
}

TEST_CASE("cmc_curve rejects unenrolled probes") {
  GalleryProbeSplit split;
  split.gallery_embeddings = {{0.0}};
  split.gallery_labels = {{0}};
  split.probe_embeddings = {{1.0}};
  split.probe_labels = {{3}};
  CHECK_THROWS_AS(cmc_curve(split), ProtocolError);
}

TEST_CASE("cmc_curve breaks distance ties by gallery index") {
  GalleryProbeSplit split;
  // Two gallery entries at the same spot; the lower index wins rank 1.
  split.gallery_embeddings = {{1.0, 0.0}, {1.0, 0.0}};
  split.gallery_labels = {{5}, {6}};
  split.probe_embeddings = {{1.0, 0.0}};
  split.probe_labels = {{6}};
  const auto curve = cmc_curve(split);
  CHECK(curve[0].y == 0.0);  // rank 1 went to identity 5
  CHECK(curve[1].y == 1.0);
}

TEST_CASE("dir_at_rank1 matches the oracle on open-set splits") {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 20; ++trial) {
    GalleryProbeSplit split = random_split(rng, 4, 2, 2, 3);
    // Re-label the last two probes with unenrolled identities.
    const std::size_t n = split.probe_labels.size();
    split.open_set = true;
    split.probe_labels[n - 1][0] = 90;
    split.probe_labels[n - 2][0] = 91;
    split.impostor_probes = {n - 2, n - 1};

    std::vector<bool> impostor(n, false);
    impostor[n - 1] = impostor[n - 2] = true;

    const auto lib = dir_at_rank1(split);
    const auto ref = oracle::dir_rank1(
        split.gallery_embeddings, identity_column(split.gallery_labels),
        split.probe_embeddings, identity_column(split.probe_labels), impostor, {});
    CHECK(curves_equal(lib, ref));

    const std::vector<double> taus = {0.5, 2.0, 8.0};
    CHECK(curves_equal(dir_at_rank1(split, taus),
                       oracle::dir_rank1(split.gallery_embeddings,
                                         identity_column(split.gallery_labels),
                                         split.probe_embeddings,
                                         identity_column(split.probe_labels),
                                         impostor, taus)));
  }
}

TEST_CASE("dir_at_rank1 requires an open-set split") {
  std::mt19937_64 rng(56);
  const GalleryProbeSplit split = random_split(rng, 3, 2, 1, 2);
  CHECK_THROWS_AS(dir_at_rank1(split), ProtocolError);
}

TEST_CASE("map_score on hand-checked relevance lists") {
  // AP = (1/1)/2 + (2/3)/2 = 5/6; second query has nothing relevant.
  const MapResult r = map_score(std::vector<std::vector<bool>>{
      {true, false, true}, {false, false, false}});
  CHECK(r.value == doctest::Approx(5.0 / 6.0));
  CHECK(r.excluded_queries == 1);

  CHECK_THROWS_AS(map_score(std::vector<std::vector<bool>>{{false, false}}),
                  ProtocolError);
}

TEST_CASE("map_score over a split matches the oracle exactly") {
  std::mt19937_64 rng(66);
  for (int trial = 0; trial < 20; ++trial) {
    const GalleryProbeSplit split = random_split(rng, 4, 3, 2, 2);
    std::size_t ref_excluded = 0;
    const double ref = oracle::mean_average_precision(
        split.gallery_embeddings, identity_column(split.gallery_labels),
        split.probe_embeddings, identity_column(split.probe_labels), &ref_excluded);
    const MapResult lib = map_score(split);
    CHECK(lib.value == ref);
    CHECK(lib.excluded_queries == ref_excluded);
  }
}

TEST_CASE("knn_soft_labels transfers the nearest gallery row's dimensions") {
  GalleryProbeSplit split;
  split.gallery_embeddings = {{0.0, 0.0}, {10.0, 0.0}};
  split.gallery_labels = {{0, 3, 7}, {1, 4, 8}};
  split.probe_embeddings = {{1.0, 0.0}, {9.0, 0.0}};
  split.probe_labels = {{0, 0, 0}, {1, 0, 0}};
  const auto predicted = knn_soft_labels(split, {1, 2});
  REQUIRE(predicted.size() == 2);
  CHECK(predicted[0] == LabelVector{3, 7});
  CHECK(predicted[1] == LabelVector{4, 8});
  CHECK_THROWS_AS(knn_soft_labels(split, {5}), DimensionError);
}

TEST_CASE("labelling_error averages disagreements over n * t") {
  // 3 disagreements over 2 rows * 2 dims.
  const double e = labelling_error({{1, 2}, {3, 4}}, {{1, 0}, {0, 0}}, 2);
  CHECK(e == doctest::Approx(0.75));
  CHECK(labelling_error({{1}}, {{1}}, 1) == 0.0);
  CHECK_THROWS_AS(labelling_error({{1}}, {{1}, {2}}, 1), DimensionError);
  CHECK_THROWS_AS(labelling_error({{1, 2}}, {{1}}, 1), DimensionError);
}

TEST_CASE("1-NN labelling error matches the oracle on random splits") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const GalleryProbeSplit split = random_split(rng, 4, 2, 2, 3);
    const std::vector<std::size_t> dims = {1, 2};
    const auto predicted = knn_soft_labels(split, dims);
    std::vector<LabelVector> truth;
    std::vector<std::vector<std::uint32_t>> gallery_soft, probe_soft;
    for (const auto& row : split.gallery_labels) {
      gallery_soft.push_back({row[1], row[2]});
    }
    for (const auto& row : split.probe_labels) {
      truth.push_back({row[1], row[2]});
      probe_soft.push_back({row[1], row[2]});
    }
    const double lib = labelling_error(predicted, truth, 2);
    const double ref = oracle::labelling_error_1nn(
        split.gallery_embeddings, gallery_soft, split.probe_embeddings, probe_soft);
    CHECK(lib == ref);
  }
}

TEST_CASE("semantic_retrieval with a vacuous filter equals the baseline exactly") {
  std::mt19937_64 rng(88);
  const GalleryProbeSplit split = random_split(rng, 5, 3, 2, 3);
  const RetrievalCurve baseline = semantic_retrieval(split, {});
  CHECK(baseline.emptied_queries == 0);
  REQUIRE(baseline.points.size() == split.gallery_embeddings.size());
  CHECK(baseline.points.back().x == 1.0);
  CHECK(baseline.points.back().y == 1.0);
}

TEST_CASE("semantic_retrieval matches the oracle with and without filters") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const GalleryProbeSplit split = random_split(rng, 4, 3, 2, 2);
    for (const std::vector<std::size_t>& dims :
         {std::vector<std::size_t>{}, {1}, {1, 2}}) {
      std::size_t ref_emptied = 0;
      const auto ref = oracle::hit_penetration(
          split.gallery_embeddings, split.gallery_labels, split.probe_embeddings,
          split.probe_labels, dims, &ref_emptied);
      const RetrievalCurve lib = semantic_retrieval(split, dims);
      CHECK(curves_equal(lib.points, ref));
      CHECK(lib.emptied_queries == ref_emptied);
    }
  }
}

TEST_CASE("filtered retrieval dominates the baseline at every penetration") {
  std::mt19937_64 rng(111);
  for (int trial = 0; trial < 10; ++trial) {
    const GalleryProbeSplit split = random_split(rng, 5, 4, 3, 2);
    const RetrievalCurve baseline = semantic_retrieval(split, {});
    const RetrievalCurve filtered = semantic_retrieval(split, {1, 2});
    REQUIRE(filtered.points.size() == baseline.points.size());
    for (std::size_t k = 0; k < filtered.points.size(); ++k) {
      CHECK(filtered.points[k].x == baseline.points[k].x);
      CHECK(filtered.points[k].y >= baseline.points[k].y);
    }
  }
}

TEST_CASE("semantic_retrieval counts queries whose filter empties the gallery") {
  GalleryProbeSplit split;
  split.gallery_embeddings = {{0.0}, {1.0}};
  split.gallery_labels = {{0, 0}, {1, 0}};
  split.probe_embeddings = {{0.1}};
  split.probe_labels = {{0, 1}};  // no gallery entry carries soft label 1
  const RetrievalCurve curve = semantic_retrieval(split, {1});
  CHECK(curve.emptied_queries == 1);
  for (const CurvePoint& point : curve.points) CHECK(point.y == 0.0);
}

TEST_CASE("bootstrap_eval is deterministic with sample statistics") {
  int calls = 0;
  const auto metric = [&](const std::vector<std::size_t>& idx) {
    ++calls;
    CHECK(idx.size() == 9);  // round(0.9 * 10)
    double sum = 0.0;
    for (std::size_t k : idx) {
      CHECK(k < 10);
      sum += static_cast<double>(k);
    }
    return sum / static_cast<double>(idx.size());
  };
  const Statistic a = bootstrap_eval(metric, 10, 10, 0.9, 123);
  CHECK(calls == 10);
  const Statistic b = bootstrap_eval(metric, 10, 10, 0.9, 123);
  CHECK(a.mean == b.mean);
  CHECK(a.stddev == b.stddev);
  CHECK(a.stddev > 0.0);

  const auto constant = [](const std::vector<std::size_t>&) { return 4.0; };
  const Statistic c = bootstrap_eval(constant, 10, 10, 0.9, 1);
  CHECK(c.mean == 4.0);
  CHECK(c.stddev == 0.0);
  const Statistic single = bootstrap_eval(constant, 10, 1, 0.9, 1);
  CHECK(single.stddev == 0.0);

  CHECK_THROWS_AS(bootstrap_eval(constant, 0, 10, 0.9, 1), ConfigError);
  CHECK_THROWS_AS(bootstrap_eval(constant, 10, 0, 0.9, 1), ConfigError);
  CHECK_THROWS_AS(bootstrap_eval(constant, 10, 10, 1.5, 1), ConfigError);
}

TEST_CASE("evaluate fills a closed-set report") {
  std::mt19937_64 rng(222);
  const GalleryProbeSplit split = random_split(rng, 5, 3, 2, 3);
  ReportConfig config;
  config.filter_dims = {1, 2};
  config.seed = 7;
  const EvalReport report = evaluate(split, config);

  CHECK_FALSE(report.roc.empty());
  CHECK_FALSE(report.cmc.empty());
  CHECK(report.dir_rank1.empty());
  CHECK(report.rank1 == report.cmc.front().y);
  // top10 reads the CMC at rank ceil(0.1 * 15) = 2.
  CHECK(report.top10 == report.cmc[1].y);
  CHECK(report.hit_penetration.size() == split.gallery_embeddings.size());
  CHECK(report.hit_penetration_baseline.size() == split.gallery_embeddings.size());
  CHECK(report.map_score > 0.0);
  CHECK(report.rank1_stat.mean >= 0.0);
  CHECK(std::isfinite(report.labelling_error_stat.mean));

  const EvalReport again = evaluate(split, config);
  CHECK(again.rank1_stat.mean == report.rank1_stat.mean);
  CHECK(again.map_stat.stddev == report.map_stat.stddev);
}

TEST_CASE("evaluate produces a DIR curve only for open-set splits") {
  std::mt19937_64 rng(333);
  GalleryProbeSplit split = random_split(rng, 5, 3, 2, 3);
  const std::size_t n = split.probe_labels.size();
  split.open_set = true;
  split.probe_labels[n - 1][0] = 70;
  split.impostor_probes = {n - 1};

  ReportConfig config;
  const EvalReport report = evaluate(split, config);
  CHECK_FALSE(report.dir_rank1.empty());
}

TEST_CASE("spearman_correlation on hand-checked sequences") {
  CHECK(spearman_correlation({1.0, 2.0, 3.0}, {10.0, 20.0, 30.0}) ==
        doctest::Approx(1.0));
  CHECK(spearman_correlation({1.0, 2.0, 3.0}, {3.0, 2.0, 1.0}) ==
        doctest::Approx(-1.0));
  // Ties get average ranks; a single swapped pair lowers the correlation.
  CHECK(spearman_correlation({1.0, 2.0, 3.0, 4.0}, {1.0, 3.0, 2.0, 4.0}) ==
        doctest::Approx(0.8));
  CHECK(spearman_correlation({1.0, 1.0, 2.0}, {1.0, 1.0, 2.0}) ==
        doctest::Approx(1.0));
  CHECK_THROWS_AS(spearman_correlation({1.0}, {1.0}), ConfigError);
  CHECK_THROWS_AS(spearman_correlation({1.0, 1.0}, {1.0, 2.0}), ConfigError);
  CHECK_THROWS_AS(spearman_correlation({1.0, 2.0}, {1.0}), DimensionError);
}
