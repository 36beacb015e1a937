#include "semquad/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "semquad/metric.hpp"
#include "semquad/rng.hpp"

namespace semquad {

namespace {

struct Neighbour {
  std::size_t index = 0;
  double dist = 0.0;
};

Neighbour nearest(const std::vector<Embedding>& gallery, const Embedding& probe) {
  Neighbour best{0, squared_distance(gallery[0], probe)};
  for (std::size_t g = 1; g < gallery.size(); ++g) {
    const double d = squared_distance(gallery[g], probe);
    if (d < best.dist) best = Neighbour{g, d};
  }
  return best;
}

// Rank (1-based) of the closest same-identity gallery entry under the
// (distance, index) order; 0 when the identity is not enrolled.
std::size_t first_match_rank(const std::vector<Embedding>& gallery_embeddings,
                             const std::vector<LabelVector>& gallery_labels,
                             const Embedding& probe, Label identity) {
  std::size_t best = gallery_embeddings.size();
  double best_dist = 0.0;
  std::vector<double> dists(gallery_embeddings.size());
  for (std::size_t g = 0; g < gallery_embeddings.size(); ++g) {
    dists[g] = squared_distance(gallery_embeddings[g], probe);
    if (gallery_labels[g][0] == identity && best == gallery_embeddings.size()) {
      best = g;
      best_dist = dists[g];
    } else if (gallery_labels[g][0] == identity && dists[g] < best_dist) {
      best = g;
      best_dist = dists[g];
    }
  }
  if (best == gallery_embeddings.size()) return 0;

  std::size_t rank = 1;
  for (std::size_t g = 0; g < gallery_embeddings.size(); ++g) {
    if (dists[g] < best_dist || (dists[g] == best_dist && g < best)) ++rank;
  }
  return rank;
}

std::set<Label> gallery_identities(const GalleryProbeSplit& split) {
  std::set<Label> ids;
  for (const auto& labels : split.gallery_labels) ids.insert(labels[0]);
  return ids;
}

// Probe positions whose identity is enrolled in the gallery.
std::vector<std::size_t> enrolled_probes(const GalleryProbeSplit& split) {
  const auto ids = gallery_identities(split);
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < split.probe_embeddings.size(); ++p) {
    if (ids.count(split.probe_labels[p][0]) > 0) out.push_back(p);
  }
  return out;
}

GalleryProbeSplit probe_subset(const GalleryProbeSplit& base,
                               const std::vector<std::size_t>& positions) {
  GalleryProbeSplit out;
  out.gallery_embeddings = base.gallery_embeddings;
  out.gallery_labels = base.gallery_labels;
  for (std::size_t p : positions) {
    out.probe_embeddings.push_back(base.probe_embeddings[p]);
    out.probe_labels.push_back(base.probe_labels[p]);
  }
  return out;
}

double rank1_rate(const GalleryProbeSplit& split) {
  std::size_t hits = 0;
  for (std::size_t p = 0; p < split.probe_embeddings.size(); ++p) {
    if (first_match_rank(split.gallery_embeddings, split.gallery_labels,
                         split.probe_embeddings[p], split.probe_labels[p][0]) == 1) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(split.probe_embeddings.size());
}

void check_label_dims(const std::vector<std::size_t>& dims, std::size_t t,
                      const char* who) {
  for (std::size_t d : dims) {
    if (d >= t) {
      throw DimensionError(std::string(who) + ": label dimension " +
                           std::to_string(d) + " out of range (t=" +
                           std::to_string(t) + ")");
    }
  }
}

}  // namespace

void GalleryProbeSplit::validate() const {
  if (gallery_embeddings.size() != gallery_labels.size() ||
      probe_embeddings.size() != probe_labels.size()) {
    throw ProtocolError("split: embedding and label counts differ");
  }
  if (gallery_embeddings.empty()) throw ProtocolError("split: empty gallery");

  const std::size_t d = gallery_embeddings[0].size();
  const std::size_t t = gallery_labels[0].size();
  if (t == 0) throw ProtocolError("split: labels need at least the identity dimension");
  const auto check = [&](const std::vector<Embedding>& embs,
                         const std::vector<LabelVector>& labs, const char* side) {
    for (const auto& e : embs) {
      if (e.size() != d) {
        throw ProtocolError(std::string("split: inconsistent embedding size in ") + side);
      }
    }
    for (const auto& l : labs) {
      if (l.size() != t) {
        throw ProtocolError(std::string("split: inconsistent label size in ") + side);
      }
    }
  };
  check(gallery_embeddings, gallery_labels, "gallery");
  check(probe_embeddings, probe_labels, "probes");

  if (!open_set) {
    if (!impostor_probes.empty()) {
      throw ProtocolError("split: impostor probes listed on a closed-set split");
    }
    return;
  }
  if (impostor_probes.empty()) {
    throw ProtocolError("split: open-set mode requires at least one impostor probe");
  }
  const auto enrolled = gallery_identities(*this);
  std::set<std::size_t> impostors(impostor_probes.begin(), impostor_probes.end());
  if (impostors.size() != impostor_probes.size()) {
    throw ProtocolError("split: duplicate impostor probe positions");
  }
  for (std::size_t p = 0; p < probe_labels.size(); ++p) {
    const bool listed = impostors.count(p) > 0;
    const bool present = enrolled.count(probe_labels[p][0]) > 0;
    if (p >= probe_embeddings.size()) {
      throw ProtocolError("split: impostor position out of range");
    }
    if (listed && present) {
      throw ProtocolError("split: probe " + std::to_string(p) +
                          " is listed as impostor but its identity is enrolled");
    }
    if (!listed && !present) {
      throw ProtocolError("split: probe " + std::to_string(p) +
                          " has an unenrolled identity but is not listed as impostor");
    }
  }
  for (std::size_t p : impostor_probes) {
    if (p >= probe_embeddings.size()) {
      throw ProtocolError("split: impostor position out of range");
    }
  }
}

bool GalleryProbeSplit::is_impostor(std::size_t probe) const {
  return std::find(impostor_probes.begin(), impostor_probes.end(), probe) !=
         impostor_probes.end();
}

GalleryProbeSplit make_gallery_probe_split(const std::vector<Embedding>& embeddings,
                                           const std::vector<LabelVector>& labels,
                                           const SplitSpec& spec) {
  if (embeddings.size() != labels.size()) {
    throw DimensionError("make_gallery_probe_split: embedding and label counts differ");
  }
  if (embeddings.empty()) throw ProtocolError("make_gallery_probe_split: empty input");
  if (spec.gallery_fraction <= 0.0 || spec.gallery_fraction > 1.0) {
    throw ConfigError("gallery_fraction must lie in (0, 1]");
  }
  if (spec.impostor_fraction < 0.0 || spec.impostor_fraction >= 1.0) {
    throw ConfigError("impostor_fraction must lie in [0, 1)");
  }

  std::map<Label, std::vector<std::size_t>> groups;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (labels[k].empty()) {
      throw ProtocolError("make_gallery_probe_split: sample without labels");
    }
    groups[labels[k][0]].push_back(k);
  }

  Rng rng(spec.seed);
  std::set<Label> impostor_ids;
  if (spec.open_set) {
    if (groups.size() < 2) {
      throw ProtocolError("open-set split needs at least 2 identities");
    }
    std::vector<Label> ids;
    for (const auto& [id, members] : groups) ids.push_back(id);
    std::shuffle(ids.begin(), ids.end(), rng);
    std::size_t n_imp = static_cast<std::size_t>(
        std::llround(spec.impostor_fraction * static_cast<double>(ids.size())));
    n_imp = std::clamp<std::size_t>(n_imp, 1, ids.size() - 1);
    impostor_ids.insert(ids.begin(), ids.begin() + static_cast<long>(n_imp));
  }

  GalleryProbeSplit split;
  split.open_set = spec.open_set;
  for (auto& [id, members] : groups) {
    if (impostor_ids.count(id) > 0) {
      for (std::size_t k : members) {
        split.impostor_probes.push_back(split.probe_embeddings.size());
        split.probe_embeddings.push_back(embeddings[k]);
        split.probe_labels.push_back(labels[k]);
      }
      continue;
    }
    std::shuffle(members.begin(), members.end(), rng);
    std::size_t n_gallery = static_cast<std::size_t>(
        std::llround(spec.gallery_fraction * static_cast<double>(members.size())));
    n_gallery = std::clamp<std::size_t>(n_gallery, 1, members.size());
    for (std::size_t k = 0; k < members.size(); ++k) {
      if (k < n_gallery) {
        split.gallery_embeddings.push_back(embeddings[members[k]]);
        split.gallery_labels.push_back(labels[members[k]]);
      } else {
        split.probe_embeddings.push_back(embeddings[members[k]]);
        split.probe_labels.push_back(labels[members[k]]);
      }
    }
  }
  split.validate();
  return split;
}

std::vector<CurvePoint> verification_roc(const GalleryProbeSplit& split) {
  split.validate();
  std::vector<double> genuine, impostor;
  for (std::size_t p = 0; p < split.probe_embeddings.size(); ++p) {
    for (std::size_t g = 0; g < split.gallery_embeddings.size(); ++g) {
      const double d =
          squared_distance(split.probe_embeddings[p], split.gallery_embeddings[g]);
      (split.probe_labels[p][0] == split.gallery_labels[g][0] ? genuine : impostor)
          .push_back(d);
    }
  }
  if (genuine.empty()) throw ProtocolError("verification_roc: no genuine pairs");
  if (impostor.empty()) throw ProtocolError("verification_roc: no impostor pairs");

  std::vector<double> thresholds;
  thresholds.insert(thresholds.end(), genuine.begin(), genuine.end());
  thresholds.insert(thresholds.end(), impostor.begin(), impostor.end());
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  std::sort(genuine.begin(), genuine.end());
  std::sort(impostor.begin(), impostor.end());

  std::vector<CurvePoint> points{{0.0, 0.0}};
  std::size_t gi = 0, ii = 0;
  for (double tau : thresholds) {
    while (gi < genuine.size() && genuine[gi] <= tau) ++gi;
    while (ii < impostor.size() && impostor[ii] <= tau) ++ii;
    points.push_back(CurvePoint{
        static_cast<double>(ii) / static_cast<double>(impostor.size()),
        static_cast<double>(gi) / static_cast<double>(genuine.size())});
  }
  return points;
}

std::vector<CurvePoint> cmc_curve(const GalleryProbeSplit& split) {
  split.validate();
  if (split.probe_embeddings.empty()) {
    throw ProtocolError("cmc_curve: no probes to identify");
  }
  const std::size_t g_size = split.gallery_embeddings.size();
  std::vector<std::size_t> hits_at_rank(g_size + 1, 0);
  for (std::size_t p = 0; p < split.probe_embeddings.size(); ++p) {
    const std::size_t rank =
        first_match_rank(split.gallery_embeddings, split.gallery_labels,
                         split.probe_embeddings[p], split.probe_labels[p][0]);
    if (rank == 0) {
      throw ProtocolError("cmc_curve: probe identity " +
                          std::to_string(split.probe_labels[p][0]) +
                          " is not enrolled in the gallery");
    }
    ++hits_at_rank[rank];
  }

  std::vector<CurvePoint> points;
  points.reserve(g_size);
  std::size_t cumulative = 0;
  for (std::size_t k = 1; k <= g_size; ++k) {
    cumulative += hits_at_rank[k];
    points.push_back(CurvePoint{
        static_cast<double>(k),
        static_cast<double>(cumulative) /
            static_cast<double>(split.probe_embeddings.size())});
  }
  return points;
}

std::vector<CurvePoint> dir_at_rank1(const GalleryProbeSplit& split,
                                     const std::vector<double>& thresholds) {
  split.validate();
  if (!split.open_set) {
    throw ProtocolError("dir_at_rank1 requires an open-set split");
  }

  std::vector<std::pair<double, bool>> genuine;  // nn distance, same identity
  std::vector<double> impostor;
  for (std::size_t p = 0; p < split.probe_embeddings.size(); ++p) {
    const Neighbour nn = nearest(split.gallery_embeddings, split.probe_embeddings[p]);
    if (split.is_impostor(p)) {
      impostor.push_back(nn.dist);
    } else {
      genuine.emplace_back(
          nn.dist, split.gallery_labels[nn.index][0] == split.probe_labels[p][0]);
    }
  }
  if (genuine.empty()) throw ProtocolError("dir_at_rank1: no genuine probes");

  std::vector<double> grid = thresholds;
  if (grid.empty()) {
    for (const auto& [dist, same] : genuine) grid.push_back(dist);
    grid.insert(grid.end(), impostor.begin(), impostor.end());
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<CurvePoint> points;
  points.reserve(grid.size());
  for (double tau : grid) {
    std::size_t detected = 0;
    for (const auto& [dist, same] : genuine) {
      if (same && dist <= tau) ++detected;
    }
    std::size_t false_accepts = 0;
    for (double dist : impostor) {
      if (dist <= tau) ++false_accepts;
    }
    points.push_back(CurvePoint{
        static_cast<double>(false_accepts) / static_cast<double>(impostor.size()),
        static_cast<double>(detected) / static_cast<double>(genuine.size())});
  }
  return points;
}

MapResult map_score(const std::vector<std::vector<bool>>& ranked_relevance) {
  MapResult result;
  double sum = 0.0;
  std::size_t included = 0;
  for (const auto& flags : ranked_relevance) {
    const std::size_t relevant =
        static_cast<std::size_t>(std::count(flags.begin(), flags.end(), true));
    if (relevant == 0) {
      ++result.excluded_queries;
      continue;
    }
    // Sum of precision(k) * recall-increment(k) over relevant ranks, with the
    // 1/R increment applied per term.
    double average_precision = 0.0;
    std::size_t seen = 0;
    for (std::size_t k = 0; k < flags.size(); ++k) {
      if (!flags[k]) continue;
      ++seen;
      const double precision =
          static_cast<double>(seen) / static_cast<double>(k + 1);
      average_precision += precision / static_cast<double>(relevant);
    }
    sum += average_precision;
    ++included;
  }
  if (included == 0) {
    throw ProtocolError("map_score: every query lacked a relevant gallery entry");
  }
  result.value = sum / static_cast<double>(included);
  return result;
}

MapResult map_score(const GalleryProbeSplit& split) {
  split.validate();
  if (split.probe_embeddings.empty()) {
    throw ProtocolError("map_score: no probes to rank");
  }
  std::vector<std::vector<bool>> relevance;
  relevance.reserve(split.probe_embeddings.size());
  std::vector<std::size_t> order(split.gallery_embeddings.size());
  std::vector<double> dists(split.gallery_embeddings.size());
  for (std::size_t p = 0; p < split.probe_embeddings.size(); ++p) {
    for (std::size_t g = 0; g < split.gallery_embeddings.size(); ++g) {
      dists[g] = squared_distance(split.probe_embeddings[p],
                                  split.gallery_embeddings[g]);
    }
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return dists[a] < dists[b] || (dists[a] == dists[b] && a < b);
    });
    std::vector<bool> flags(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
      flags[k] = split.gallery_labels[order[k]][0] == split.probe_labels[p][0];
    }
    relevance.push_back(std::move(flags));
  }
  return map_score(relevance);
}

std::vector<LabelVector> knn_soft_labels(const GalleryProbeSplit& split,
                                         const std::vector<std::size_t>& label_dims) {
  split.validate();
  check_label_dims(label_dims, split.gallery_labels[0].size(), "knn_soft_labels");

  std::vector<LabelVector> predictions;
  predictions.reserve(split.probe_embeddings.size());
  for (const auto& probe : split.probe_embeddings) {
    const Neighbour nn = nearest(split.gallery_embeddings, probe);
    LabelVector predicted;
    predicted.reserve(label_dims.size());
    for (std::size_t dim : label_dims) {
      predicted.push_back(split.gallery_labels[nn.index][dim]);
    }
    predictions.push_back(std::move(predicted));
  }
  return predictions;
}

double labelling_error(const std::vector<LabelVector>& predicted,
                       const std::vector<LabelVector>& ground_truth, std::size_t t) {
  if (predicted.size() != ground_truth.size()) {
    throw DimensionError("labelling_error: prediction and truth counts differ");
  }
  if (predicted.empty() || t == 0) {
    throw ConfigError("labelling_error: needs at least one row and one dimension");
  }
  std::size_t disagreements = 0;
  for (std::size_t k = 0; k < predicted.size(); ++k) {
    if (predicted[k].size() != t || ground_truth[k].size() != t) {
      throw DimensionError("labelling_error: row " + std::to_string(k) +
                           " does not have " + std::to_string(t) + " labels");
    }
    disagreements += semantic_dissimilarity(predicted[k], ground_truth[k]);
  }
  return static_cast<double>(disagreements) /
         static_cast<double>(predicted.size() * t);
}

RetrievalCurve semantic_retrieval(const GalleryProbeSplit& split,
                                  const std::vector<std::size_t>& filter_dims) {
  split.validate();
  check_label_dims(filter_dims, split.gallery_labels[0].size(), "semantic_retrieval");

  const std::vector<std::size_t> queries = enrolled_probes(split);
  if (queries.empty()) {
    throw ProtocolError("semantic_retrieval: no probe has an enrolled identity");
  }
  const std::size_t g_size = split.gallery_embeddings.size();

  RetrievalCurve curve;
  std::vector<std::size_t> ranks;  // 0 marks a query that can never hit
  ranks.reserve(queries.size());
  for (std::size_t p : queries) {
    const Embedding& probe = split.probe_embeddings[p];
    const LabelVector& wanted = split.probe_labels[p];

    std::size_t candidates = 0;
    bool have_match = false;
    double match_dist = 0.0;
    std::size_t match_index = 0;
    for (std::size_t g = 0; g < g_size; ++g) {
      bool passes = true;
      for (std::size_t dim : filter_dims) {
        if (split.gallery_labels[g][dim] != wanted[dim]) {
          passes = false;
          break;
        }
      }
      if (!passes) continue;
      ++candidates;
      if (split.gallery_labels[g][0] != wanted[0]) continue;
      const double d = squared_distance(split.gallery_embeddings[g], probe);
      if (!have_match || d < match_dist) {
        have_match = true;
        match_dist = d;
        match_index = g;
      }
    }
    if (candidates == 0) {
      ++curve.emptied_queries;
      ranks.push_back(0);
      continue;
    }
    if (!have_match) {
      ranks.push_back(0);
      continue;
    }

    std::size_t rank = 1;
    for (std::size_t g = 0; g < g_size; ++g) {
      bool passes = true;
      for (std::size_t dim : filter_dims) {
        if (split.gallery_labels[g][dim] != wanted[dim]) {
          passes = false;
          break;
        }
      }
      if (!passes) continue;
      const double d = squared_distance(split.gallery_embeddings[g], probe);
      if (d < match_dist || (d == match_dist && g < match_index)) ++rank;
    }
    ranks.push_back(rank);
  }

  curve.points.reserve(g_size);
  for (std::size_t k = 1; k <= g_size; ++k) {
    std::size_t hits = 0;
    for (std::size_t rank : ranks) {
      if (rank != 0 && rank <= k) ++hits;
    }
    curve.points.push_back(CurvePoint{
        static_cast<double>(k) / static_cast<double>(g_size),
        static_cast<double>(hits) / static_cast<double>(queries.size())});
  }
  return curve;
}

EvalReport evaluate(const GalleryProbeSplit& split, const ReportConfig& config) {
  split.validate();
  const std::size_t t = split.gallery_labels[0].size();

  std::vector<std::size_t> soft_dims = config.soft_dims;
  if (soft_dims.empty()) {
    for (std::size_t d = 1; d < t; ++d) soft_dims.push_back(d);
  }
  check_label_dims(soft_dims, t, "evaluate");
  check_label_dims(config.filter_dims, t, "evaluate");

  const std::vector<std::size_t> genuine_positions = enrolled_probes(split);
  if (genuine_positions.empty()) {
    throw ProtocolError("evaluate: no probe has an enrolled identity");
  }
  const GalleryProbeSplit genuine = probe_subset(split, genuine_positions);

  EvalReport report;
  report.roc = verification_roc(split);
  report.cmc = cmc_curve(genuine);
  report.rank1 = report.cmc.front().y;
  const std::size_t top10_rank = (split.gallery_embeddings.size() + 9) / 10;
  report.top10 = report.cmc[top10_rank - 1].y;
  if (split.open_set) {
    report.dir_rank1 = dir_at_rank1(split, config.dir_thresholds);
  }

  const MapResult map = map_score(split);
  report.map_score = map.value;
  report.map_excluded_queries = map.excluded_queries;

  if (!soft_dims.empty()) {
    const auto predicted = knn_soft_labels(split, soft_dims);
    std::vector<LabelVector> truth;
    truth.reserve(split.probe_labels.size());
    for (const auto& labels : split.probe_labels) {
      LabelVector row;
      for (std::size_t dim : soft_dims) row.push_back(labels[dim]);
      truth.push_back(std::move(row));
    }
    report.labelling_error = labelling_error(predicted, truth, soft_dims.size());
  }

  if (config.filter_dims.empty()) {
    report.hit_penetration = semantic_retrieval(split, {}).points;
  } else {
    const RetrievalCurve filtered = semantic_retrieval(split, config.filter_dims);
    report.hit_penetration = filtered.points;
    report.retrieval_emptied_queries = filtered.emptied_queries;
    report.hit_penetration_baseline = semantic_retrieval(split, {}).points;
  }

  if (config.bootstrap_trials > 0) {
    report.rank1_stat = bootstrap_eval(
        [&](const std::vector<std::size_t>& idx) {
          return rank1_rate(probe_subset(genuine, idx));
        },
        genuine.probe_embeddings.size(), config.bootstrap_trials,
        config.bootstrap_fraction, derive_seed(config.seed, "bootstrap-rank1"));
    report.map_stat = bootstrap_eval(
        [&](const std::vector<std::size_t>& idx) {
          return map_score(probe_subset(genuine, idx)).value;
        },
        genuine.probe_embeddings.size(), config.bootstrap_trials,
        config.bootstrap_fraction, derive_seed(config.seed, "bootstrap-map"));
    if (!soft_dims.empty()) {
      report.labelling_error_stat = bootstrap_eval(
          [&](const std::vector<std::size_t>& idx) {
            const GalleryProbeSplit sub = probe_subset(split, idx);
            const auto predicted = knn_soft_labels(sub, soft_dims);
            std::vector<LabelVector> truth;
            for (const auto& labels : sub.probe_labels) {
              LabelVector row;
              for (std::size_t dim : soft_dims) row.push_back(labels[dim]);
              truth.push_back(std::move(row));
            }
            return labelling_error(predicted, truth, soft_dims.size());
          },
          split.probe_embeddings.size(), config.bootstrap_trials,
          config.bootstrap_fraction, derive_seed(config.seed, "bootstrap-error"));
    }
  }
  return report;
}

double spearman_correlation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw DimensionError("spearman_correlation: length mismatch");
  }
  if (a.size() < 2) {
    throw ConfigError("spearman_correlation: needs at least two points");
  }
  const auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return v[x] < v[y]; });
    std::vector<double> r(v.size());
    std::size_t k = 0;
    while (k < order.size()) {
      std::size_t end = k;
      while (end + 1 < order.size() && v[order[end + 1]] == v[order[k]]) ++end;
      const double avg = 0.5 * static_cast<double>(k + end) + 1.0;
      for (std::size_t m = k; m <= end; ++m) r[order[m]] = avg;
      k = end + 1;
    }
    return r;
  };

  const std::vector<double> ra = ranks(a);
  const std::vector<double> rb = ranks(b);
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ma += ra[k];
    mb += rb[k];
  }
  ma /= n;
  mb /= n;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    cov += (ra[k] - ma) * (rb[k] - mb);
    va += (ra[k] - ma) * (ra[k] - ma);
    vb += (rb[k] - mb) * (rb[k] - mb);
  }
  if (va == 0.0 || vb == 0.0) {
    throw ConfigError("spearman_correlation: constant sequence");
  }
  return cov / std::sqrt(va * vb);
}

}  // namespace semquad
