#include "coldbench/eval/report.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "coldbench/eval/baselines.hpp"

namespace coldbench::eval {

using detection::Action;
using nlohmann::json;

namespace {

std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string describe(const Prediction& p) {
  if (p.action == Action::none && p.event_count == 0) return "none";
  std::string out = p.action == Action::add ? "add(" : "remove(";
  out += p.item.value_or("?") + "," + (p.position ? std::to_string(*p.position) : "?") + ")";
  if (p.event_count > 1) out += "+" + std::to_string(p.event_count - 1);
  return out;
}

std::vector<double> precisions(const std::vector<SubsampleResult>& rs) {
  std::vector<double> out;
  for (const auto& r : rs) {
    if (r.precision) out.push_back(*r.precision);
  }
  return out;
}

std::vector<double> accuracies(const std::vector<SubsampleResult>& rs) {
  std::vector<double> out;
  for (const auto& r : rs) out.push_back(r.accuracy);
  return out;
}

std::optional<TTest> maybe_test(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2) return std::nullopt;
  return welch_t_test(a, b);
}

json test_json(const std::optional<TTest>& t) {
  if (!t) return nullptr;
  return t->p_value;
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

}  // namespace

std::optional<double> mean_precision(const std::vector<SubsampleResult>& results) {
  const auto ps = precisions(results);
  if (ps.empty()) return std::nullopt;
  return mean(ps);
}

double mean_accuracy(const std::vector<SubsampleResult>& results) {
  if (results.empty()) throw std::invalid_argument("no subsamples");
  return mean(accuracies(results));
}

Analysis analyze(const ExperimentRun& run, const AnalysisOptions& options) {
  Analysis a;
  a.options = options;
  a.subsamples = bootstrap(run.steps, options.subsamples, options.subsample_size, options.seed);
  a.curve = overhead_curve(a.subsamples);

  const std::size_t positions = [&] {
    std::size_t n = 0;
    for (const auto& s : run.steps) {
      if (s.ground_truth.position) n = std::max(n, *s.ground_truth.position + 1);
    }
    return std::max<std::size_t>(n, 1);
  }();
  a.random_steps = random_baseline(run.steps, run.items, positions, derive_seed(options.seed, 20));
  a.random_subsamples = bootstrap(a.random_steps, options.subsamples, options.subsample_size, options.seed);
  a.barcode_steps = barcode_baseline(run.steps, options.barcode_overhead_s);

  Summary& s = a.summary;
  s.flavor = run.flavor;
  s.steps = run.steps.size();
  s.mean_precision = mean_precision(a.subsamples);
  s.mean_accuracy = mean_accuracy(a.subsamples);
  s.random_mean_precision = mean_precision(a.random_subsamples);
  s.random_mean_accuracy = mean_accuracy(a.random_subsamples);
  s.nh_precision = maybe_test(precisions(a.subsamples), precisions(a.random_subsamples));
  s.nh_accuracy = maybe_test(accuracies(a.subsamples), accuracies(a.random_subsamples));

  std::size_t adds = 0, correct_items = 0;
  double total_overhead = 0.0, total_baseline = 0.0;
  std::vector<double> add_overheads, other_overheads, barcode_add_overheads;
  double image_add_time = 0.0, barcode_add_time = 0.0;
  for (std::size_t i = 0; i < run.steps.size(); ++i) {
    const ExperimentStep& step = run.steps[i];
    s.counts.add(step.truth);
    total_overhead += step.overhead_s();
    total_baseline += step.baseline_duration_s;
    if (step.ground_truth.action == Action::add) {
      ++adds;
      if (step.predicted.action == Action::add && step.predicted.item == step.ground_truth.item) ++correct_items;
      add_overheads.push_back(step.overhead_s());
      barcode_add_overheads.push_back(a.barcode_steps[i].overhead_s());
      image_add_time += step.door_open_duration_s;
      barcode_add_time += a.barcode_steps[i].door_open_duration_s;
    } else {
      other_overheads.push_back(step.overhead_s());
    }
  }
  if (adds > 0) {
    s.correct_item_ratio_add = static_cast<double>(correct_items) / static_cast<double>(adds);
    s.add_overhead_s = mean(add_overheads);
    if (barcode_add_time > 0) s.overhead_vs_barcode = (image_add_time - barcode_add_time) / barcode_add_time;
  }
  if (!other_overheads.empty()) s.remove_none_overhead_s = mean(other_overheads);
  if (total_baseline > 0) s.overhead_vs_baseline = total_overhead / total_baseline;
  s.nh_barcode = maybe_test(add_overheads, barcode_add_overheads);
  return a;
}

json summary_to_json(const Summary& s) {
  json j;
  j["flavor"] = s.flavor;
  j["steps"] = s.steps;
  j["Mean precision"] = opt_json(s.mean_precision);
  j["Mean accuracy"] = s.mean_accuracy;
  j["Correct item ratio for add action"] = opt_json(s.correct_item_ratio_add);
  j["P-value of NH_p"] = test_json(s.nh_precision);
  j["P-value of NH_a"] = test_json(s.nh_accuracy);
  j["Overhead compared to baseline"] = s.overhead_vs_baseline;
  j["Add action overhead"] = opt_json(s.add_overhead_s);
  j["Remove and Dummy action overhead"] = opt_json(s.remove_none_overhead_s);
  j["P-value of NH_b"] = test_json(s.nh_barcode);
  j["Overhead compared to barcode scanning"] = opt_json(s.overhead_vs_barcode);
  j["random_baseline"] = {{"mean_precision", opt_json(s.random_mean_precision)},
                          {"mean_accuracy", s.random_mean_accuracy}};
  j["counts"] = {{"TP", s.counts.tp}, {"FP", s.counts.fp}, {"TN", s.counts.tn}, {"FN", s.counts.fn}};
  return j;
}

std::string steps_csv(const std::vector<ExperimentStep>& steps) {
  std::ostringstream out;
  out << "index,ground_truth,predicted,truth,door_open_duration_s,baseline_duration_s,overhead_s\n";
  for (const auto& s : steps) {
    out << s.ground_truth.index << ',' << csv_field(describe(s.ground_truth)) << ','
        << csv_field(describe(s.predicted)) << ',' << to_string(s.truth) << ',' << num(s.door_open_duration_s)
        << ',' << num(s.baseline_duration_s) << ',' << num(s.overhead_s()) << '\n';
  }
  return out.str();
}

std::string subsamples_csv(const std::vector<SubsampleResult>& results) {
  std::ostringstream out;
  out << "subsample,indices,precision,accuracy,mean_overhead_s\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    std::string indices;
    for (const std::size_t k : results[i].indices) indices += (indices.empty() ? "" : " ") + std::to_string(k);
    out << i << ',' << indices << ',' << opt(results[i].precision) << ',' << num(results[i].accuracy) << ','
        << num(results[i].mean_overhead_s) << '\n';
  }
  return out.str();
}

std::string curve_csv(const std::vector<CurvePoint>& curve) {
  std::ostringstream out;
  out << "x_s,subsamples,precision_subsamples,pe_mean,pe_stderr,ae_mean,ae_stderr\n";
  for (const auto& p : curve) {
    out << num(p.x) << ',' << p.subsamples << ',' << p.precision_subsamples << ',' << num(p.precision_error_mean)
        << ',' << num(p.precision_error_stderr) << ',' << num(p.accuracy_error_mean) << ','
        << num(p.accuracy_error_stderr) << '\n';
  }
  return out.str();
}

void write_outputs(const std::filesystem::path& dir, const Analysis& analysis, const ExperimentRun& run,
                   BaselineView view) {
  std::filesystem::create_directories(dir);
  const std::vector<ExperimentStep>* steps = &run.steps;
  const std::vector<SubsampleResult>* subsamples = &analysis.subsamples;
  std::vector<SubsampleResult> barcode_subsamples;
  if (view == BaselineView::random) {
    steps = &analysis.random_steps;
    subsamples = &analysis.random_subsamples;
  } else if (view == BaselineView::barcode) {
    steps = &analysis.barcode_steps;
    barcode_subsamples = bootstrap(analysis.barcode_steps, analysis.options.subsamples,
                                   analysis.options.subsample_size, analysis.options.seed);
    subsamples = &barcode_subsamples;
  }
  write_file(dir / "steps.csv", steps_csv(*steps));
  write_file(dir / "subsamples.csv", subsamples_csv(*subsamples));
  write_file(dir / "curve.csv", curve_csv(overhead_curve(*subsamples)));
  write_file(dir / "summary.json", summary_to_json(analysis.summary).dump(2) + "\n");
}

}  // namespace coldbench::eval
