#ifndef SEMQUAD_EVAL_HPP_
#define SEMQUAD_EVAL_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "semquad/types.hpp"

namespace semquad {

struct GalleryProbeSplit {
  std::vector<Embedding> gallery_embeddings;
  std::vector<LabelVector> gallery_labels;
  std::vector<Embedding> probe_embeddings;
  std::vector<LabelVector> probe_labels;
  bool open_set = false;
  // Positions into the probe arrays whose identities are absent from the
  // gallery; meaningful only when open_set.
  std::vector<std::size_t> impostor_probes;

  void validate() const;
  bool is_impostor(std::size_t probe) const;
};

struct SplitSpec {
  bool open_set = false;
  double gallery_fraction = 0.5;   // share of each enrolled identity's samples
  double impostor_fraction = 0.25; // share of identities withheld from the gallery
  std::uint64_t seed = 1;
};

GalleryProbeSplit make_gallery_probe_split(const std::vector<Embedding>& embeddings,
                                           const std::vector<LabelVector>& labels,
                                           const SplitSpec& spec);

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
};

struct Statistic {
  double mean = 0.0;
  double stddev = 0.0;
};

// Sweeps a squared-distance acceptance threshold over every probe-gallery
// pair. Points are (FAR, VR) sorted by FAR, with a (0, 0) anchor prepended.
// Throws ProtocolError when the split yields no genuine or no impostor pairs.
std::vector<CurvePoint> verification_roc(const GalleryProbeSplit& split);

// Closed-set identification: point k holds (k, fraction of probes whose
// nearest k gallery entries contain a same-identity one). Distance ties break
// by ascending gallery index. Throws ProtocolError when a probe's identity is
// missing from the gallery.
std::vector<CurvePoint> cmc_curve(const GalleryProbeSplit& split);

// Open-set detection and identification at rank 1: for each threshold, DIR is
// the fraction of genuine probes whose nearest gallery entry shares their
// identity and lies within the threshold, FAR the fraction of impostor probes
// whose nearest entry lies within it. An empty threshold list sweeps every
// distinct observed nearest-neighbour distance.
std::vector<CurvePoint> dir_at_rank1(const GalleryProbeSplit& split,
                                     const std::vector<double>& thresholds = {});

struct MapResult {
  double value = 0.0;
  std::size_t excluded_queries = 0;  // queries with no relevant gallery entry
};

// Mean average precision over ranked relevance lists: per query the average
// of precision-at-k over relevant ranks, then the mean across queries.
// Queries without any relevant entry are excluded and counted.
MapResult map_score(const std::vector<std::vector<bool>>& ranked_relevance);

// Convenience form: ranks the gallery per probe by squared distance (ties by
// index) with same-identity relevance.
MapResult map_score(const GalleryProbeSplit& split);

// 1-nearest-neighbour label transfer: each probe inherits the requested label
// dimensions of its closest gallery entry (ties by ascending index).
std::vector<LabelVector> knn_soft_labels(const GalleryProbeSplit& split,
                                         const std::vector<std::size_t>& label_dims);

// Mean per-dimension disagreement rate between prediction and ground truth:
// sum of label-disagreement counts over n rows, divided by n*t.
double labelling_error(const std::vector<LabelVector>& predicted,
                       const std::vector<LabelVector>& ground_truth, std::size_t t);

// Resamples round(fraction * n) indices with replacement `trials` times and
// reports mean and sample standard deviation of the metric (0 when a single
// trial). The metric receives the resampled index multiset.
template <typename MetricFn>
Statistic bootstrap_eval(const MetricFn& metric, std::size_t test_size,
                         std::size_t trials, double fraction, std::uint64_t seed);

struct RetrievalCurve {
  // (penetration, hit rate) for k = 1..gallery size; penetration is always
  // k over the full enrolled gallery so filtered and baseline curves share
  // an axis.
  std::vector<CurvePoint> points;
  std::size_t emptied_queries = 0;  // queries whose filter removed every entry
};

// Identity retrieval with semantic filtering: gallery entries disagreeing
// with the probe on any of filter_dims are removed before ranking. An empty
// filter_dims reproduces the unfiltered baseline exactly. Queries are the
// probes whose identity is enrolled in the gallery.
RetrievalCurve semantic_retrieval(const GalleryProbeSplit& split,
                                  const std::vector<std::size_t>& filter_dims);

struct EvalReport {
  std::vector<CurvePoint> roc;
  std::vector<CurvePoint> cmc;
  std::vector<CurvePoint> dir_rank1;
  std::vector<CurvePoint> hit_penetration;
  std::vector<CurvePoint> hit_penetration_baseline;  // present when a filter ran
  double map_score = 0.0;
  std::size_t map_excluded_queries = 0;
  double rank1 = 0.0;
  double top10 = 0.0;  // identification rate at rank ceil(0.1 * gallery size)
  double labelling_error = 0.0;
  std::size_t retrieval_emptied_queries = 0;
  Statistic rank1_stat;
  Statistic map_stat;
  Statistic labelling_error_stat;
};

struct ReportConfig {
  std::vector<std::size_t> soft_dims;    // label dims inferred by 1-NN; empty = all but 0
  std::vector<std::size_t> filter_dims;  // retrieval filter; empty = baseline only
  std::vector<double> dir_thresholds;    // empty = observed NN distances
  std::size_t bootstrap_trials = 10;
  double bootstrap_fraction = 0.9;
  std::uint64_t seed = 1;
};

// Runs every protocol the split supports and aggregates the results. CMC,
// rank-1, top-10% and retrieval use the genuine probes; the DIR curve is
// produced only for open-set splits.
EvalReport evaluate(const GalleryProbeSplit& split, const ReportConfig& config);

// Spearman rank correlation with average ranks on ties. Throws ConfigError
// for fewer than two points or a constant sequence.
double spearman_correlation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace semquad

#include "semquad/eval_impl.hpp"

#endif  // SEMQUAD_EVAL_HPP_
