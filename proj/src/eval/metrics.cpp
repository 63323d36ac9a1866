#include "coldbench/eval/metrics.hpp"

#include <stdexcept>

namespace coldbench::eval {

using detection::Action;

std::string_view to_string(Truth truth) {
  switch (truth) {
    case Truth::tp: return "TP";
    case Truth::fp: return "FP";
    case Truth::tn: return "TN";
    case Truth::fn: return "FN";
  }
  return "?";
}

Truth classify(const GroundTruthStep& gt, const Prediction& pred) {
  const bool gt_positive = gt.action != Action::none;
  const bool pred_positive = pred.action != Action::none || pred.event_count > 0;
  if (!gt_positive) return pred_positive ? Truth::fp : Truth::tn;
  if (!pred_positive) return Truth::fn;
  if (pred.event_count > 1) return Truth::fp;
  if (pred.action != gt.action || pred.position != gt.position) return Truth::fp;
  // A remove reports the item the system believed was there, so a misnamed
  // add surfaces again at its removal.
  if (!pred.item || *pred.item != gt.item) return Truth::fp;
  if (gt.instance && pred.instance && *gt.instance != *pred.instance) return Truth::fp;
  return Truth::tp;
}

Prediction perfect_prediction(const GroundTruthStep& gt) {
  Prediction p;
  p.action = gt.action;
  if (gt.action != Action::none) {
    p.item = gt.item;
    p.position = gt.position;
    p.instance = gt.instance;
    p.event_count = 1;
  }
  return p;
}

void ConfusionCounts::add(Truth truth) {
  switch (truth) {
    case Truth::tp: ++tp; break;
    case Truth::fp: ++fp; break;
    case Truth::tn: ++tn; break;
    case Truth::fn: ++fn; break;
  }
}

ConfusionCounts count(const std::vector<Truth>& truths) {
  ConfusionCounts c;
  for (const Truth t : truths) c.add(t);
  return c;
}

Metrics compute_metrics(const ConfusionCounts& c) {
  if (c.total() == 0) throw std::invalid_argument("metrics need at least one classified step");
  Metrics m;
  if (c.tp + c.fp > 0) {
    m.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    m.precision_error = 1.0 - *m.precision;
  }
  m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
  m.accuracy_error = 1.0 - m.accuracy;
  return m;
}

}  // namespace coldbench::eval
