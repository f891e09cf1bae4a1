// Copyright 2026 The skinaudit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "skinaudit/cli.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <json.hpp>
#include <map>
#include <ostream>

#include "skinaudit/augment.hpp"
#include "skinaudit/bayes.hpp"
#include "skinaudit/bias.hpp"
#include "skinaudit/color.hpp"
#include "skinaudit/dataset.hpp"
#include "skinaudit/eval.hpp"
#include "skinaudit/parallel.hpp"
#include "skinaudit/png_io.hpp"
#include "skinaudit/rules.hpp"
#include "text_util.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace skinaudit::cli {

namespace {

std::size_t Workers(const CommandConfig& c) {
  return c.workers == 0 ? DefaultWorkers() : c.workers;
}

void MakeDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

void RequireOut(const CommandConfig& c) {
  if (c.out.empty()) throw InvalidArgument(c.subcommand + " needs --out");
}

void RequireDelta(double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw InvalidArgument(fmt::format("--delta {} outside [0, 1]", delta));
  }
}

const fs::path& RequireMask(const dataset::SampleRecord& r) {
  if (!r.mask) throw InvalidArgument("record '" + r.id + "' has no mask");
  return *r.mask;
}

const fs::path& RequirePrediction(const dataset::SampleRecord& r) {
  if (!r.prediction) {
    throw InvalidArgument("record '" + r.id + "' has no prediction");
  }
  return *r.prediction;
}

// Processes records in chunks of `workers`: each chunk is computed in
// parallel, then `write` runs on the calling thread in manifest order.
template <typename Result, typename Compute, typename Write>
void ForEachRecord(const dataset::Manifest& m, std::size_t workers,
                   Compute&& compute, Write&& write) {
  const std::size_t chunk = std::max<std::size_t>(workers, 1);
  for (std::size_t begin = 0; begin < m.size(); begin += chunk) {
    const std::size_t n = std::min(chunk, m.size() - begin);
    std::vector<Result> results(n);
    ParallelFor(n, workers, [&](std::size_t k) {
      results[k] = compute(m.records[begin + k]);
    });
    for (std::size_t k = 0; k < n; ++k) {
      write(m.records[begin + k], std::move(results[k]));
    }
  }
}

// ---------------------------------------------------------------------------
// augment

void Augment(const CommandConfig& c, std::ostream& log) {
  RequireOut(c);
  const dataset::Manifest m = dataset::LoadManifest(c.manifest);
  const augment::AugmentationPlan plan =
      c.plan ? augment::LoadPlan(*c.plan) : augment::DefaultPlan();

  const fs::path images_dir = c.out / "images";
  const fs::path masks_dir = c.out / "masks";
  MakeDir(images_dir);
  MakeDir(masks_dir);

  struct Variant {
    std::string label;
    RgbImage image;
  };
  struct Result {
    std::vector<Variant> variants;
    std::optional<BinaryMask> mask;
  };

  dataset::Manifest out_manifest;
  out_manifest.corpus = m.corpus;
  std::size_t written = 0;

  ForEachRecord<Result>(
      m, Workers(c),
      [&](const dataset::SampleRecord& r) {
        Result res;
        const RgbImage image = io::ReadRgb(r.image);
        if (r.mask) {
          res.mask = dataset::LoadMask(*r.mask);
          if (!SameShape(*res.mask, image)) {
            throw InvalidArgument("record '" + r.id + "': mask and image sizes differ");
          }
        }
        if (c.include_original) res.variants.push_back({"original", image});
        for (const auto& adj : plan.adjustments()) {
          res.variants.push_back({adj.Label(), adj.Apply(image)});
        }
        if (c.grayscale) res.variants.push_back({"gray", color::ToGrayscale(image)});
        return res;
      },
      [&](const dataset::SampleRecord& r, Result res) {
        for (const Variant& v : res.variants) {
          dataset::SampleRecord rec = r;
          rec.id = r.id + "__" + v.label;
          rec.image = images_dir / (rec.id + ".png");
          rec.prediction.reset();
          io::WriteRgb(rec.image, v.image);
          if (res.mask) {
            rec.mask = masks_dir / (rec.id + ".png");
            dataset::SaveMask(*rec.mask, *res.mask);
          }
          out_manifest.records.push_back(std::move(rec));
          ++written;
        }
      });

  dataset::SaveManifest(out_manifest, c.out / "manifest.txt");
  log << fmt::format("augment: {} samples -> {} images ({} adjustments each)\n",
                     m.size(), written, plan.size());
}

// ---------------------------------------------------------------------------
// train-bayes

void TrainBayes(const CommandConfig& c, std::ostream& log) {
  if (!c.model) throw InvalidArgument("train-bayes needs --model (output path)");
  const dataset::Manifest m = dataset::LoadManifest(c.manifest);
  std::vector<RgbImage> images(m.size());
  std::vector<BinaryMask> masks(m.size());
  ParallelFor(m.size(), Workers(c), [&](std::size_t i) {
    images[i] = io::ReadRgb(m.records[i].image);
    masks[i] = dataset::LoadMask(RequireMask(m.records[i]));
  });
  std::vector<detect::LabeledImage> corpus;
  for (std::size_t i = 0; i < m.size(); ++i) corpus.push_back({&images[i], &masks[i]});

  detect::BayesOptions options;
  options.bins_per_channel = c.bins.value_or(32);
  options.smoothing_alpha = c.alpha;
  options.prior_skin = c.prior;
  const detect::BayesModel model = detect::BayesModel::Train(corpus, options);
  if (c.model->has_parent_path()) MakeDir(c.model->parent_path());
  model.Save(*c.model);
  log << fmt::format("train-bayes: {} skin / {} non-skin pixels, prior {:.6f}\n",
                     model.skin_total(), model.nonskin_total(), model.prior_skin());
}

// ---------------------------------------------------------------------------
// detect

void Detect(const CommandConfig& c, std::ostream& log) {
  RequireOut(c);
  if (c.rules.has_value() == c.model.has_value()) {
    throw InvalidArgument("detect needs exactly one of --rules or --model");
  }
  // Everything that can fail on bad inputs is loaded before the output
  // directory is touched.
  std::optional<detect::RuleSet> rules;
  std::optional<detect::BayesModel> model;
  if (c.rules) {
    rules = detect::LoadRuleSet(*c.rules);
  } else {
    model = detect::BayesModel::Load(*c.model);
  }
  const dataset::Manifest m = dataset::LoadManifest(c.manifest);

  const fs::path pred_dir = c.out / "predictions";
  MakeDir(pred_dir);
  dataset::Manifest out_manifest = m;

  ForEachRecord<ProbabilityMap>(
      m, Workers(c),
      [&](const dataset::SampleRecord& r) {
        const RgbImage image = io::ReadRgb(r.image);
        if (model) return model->Predict(image);
        const BinaryMask mask = detect::DetectRules(image, *rules);
        ProbabilityMap pm(mask.width(), mask.height());
        for (std::size_t i = 0; i < mask.size(); ++i) pm.set(i, mask[i] ? 1.0 : 0.0);
        return pm;
      },
      [&, i = std::size_t{0}](const dataset::SampleRecord& r, ProbabilityMap pm) mutable {
        const fs::path path = pred_dir / (r.id + ".png");
        dataset::SaveProbabilityMap(path, pm);
        out_manifest.records[i++].prediction = path;
      });

  dataset::SaveManifest(out_manifest, c.out / "manifest.txt");
  log << fmt::format("detect: {} predictions written with {}\n", m.size(),
                     rules ? "rules '" + rules->name() + "'" : std::string("bayes model"));
}

// ---------------------------------------------------------------------------
// evaluate

json MetricsJson(const eval::ConfusionCounts& cc, const eval::MetricsReport& mr) {
  return json{{"tp", cc.tp},           {"fp", cc.fp},
              {"tn", cc.tn},           {"fn", cc.fn},
              {"accuracy", mr.accuracy}, {"precision", mr.precision},
              {"recall", mr.recall},   {"f1", mr.f1},
              {"iou", mr.iou}};
}

struct Scored {
  BinaryMask truth;
  ProbabilityMap prediction;
};

std::vector<Scored> LoadScored(const dataset::Manifest& m, std::size_t workers) {
  std::vector<Scored> out(m.size());
  ParallelFor(m.size(), workers, [&](std::size_t i) {
    const auto& r = m.records[i];
    out[i].truth = dataset::LoadMask(RequireMask(r));
    out[i].prediction = dataset::LoadProbabilityMap(RequirePrediction(r));
    if (!SameShape(out[i].truth, out[i].prediction)) {
      throw InvalidArgument("record '" + r.id + "': prediction and mask sizes differ");
    }
  });
  return out;
}

void Evaluate(const CommandConfig& c, std::ostream& log) {
  RequireOut(c);
  RequireDelta(c.delta);
  const double eps = c.eps.value_or(eval::kDefaultBceEps);
  if (!(eps > 0.0 && eps < 0.5)) throw InvalidArgument("--eps must be in (0, 0.5)");
  const dataset::Manifest m = dataset::LoadManifest(c.manifest);
  const std::vector<Scored> scored = LoadScored(m, Workers(c));
  MakeDir(c.out);

  std::string csv = eval::MetricsCsvHeader();
  json per_image = json::array();
  eval::ConfusionCounts pooled;
  double bce_sum = 0.0;
  std::uint64_t pixels = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto cc = eval::Confusion(eval::Binarize(scored[i].prediction, c.delta),
                                    scored[i].truth);
    const double bce = eval::Bce(scored[i].prediction, scored[i].truth, eps);
    pooled += cc;
    bce_sum += bce * static_cast<double>(cc.total());
    pixels += cc.total();
    if (c.per_image) {
      const auto mr = eval::Metrics(cc);
      csv += eval::MetricsCsvRow("image", m.records[i].id, cc, mr, bce);
      json row = MetricsJson(cc, mr);
      row["id"] = m.records[i].id;
      row["bce"] = bce;
      per_image.push_back(std::move(row));
    }
  }
  const auto overall = eval::Metrics(pooled);
  const double bce = bce_sum / static_cast<double>(pixels);
  csv += eval::MetricsCsvRow("overall", "ALL", pooled, overall, bce);
  text::WriteFile(c.out / "metrics.csv", csv);

  json doc{{"corpus", m.corpus},
           {"samples", m.size()},
           {"delta", c.delta},
           {"bce_eps", eps},
           {"overall", MetricsJson(pooled, overall)}};
  doc["overall"]["bce"] = bce;
  if (c.per_image) doc["images"] = std::move(per_image);
  text::WriteFile(c.out / "metrics.json", doc.dump(2) + "\n");

  log << fmt::format(
      "evaluate: acc {:.4f} pre {:.4f} rec {:.4f} f1 {:.4f} iou {:.4f} bce {:.4f}\n",
      overall.accuracy, overall.precision, overall.recall, overall.f1, overall.iou,
      bce);
}

// ---------------------------------------------------------------------------
// pr-curve

void PrCurve(const CommandConfig& c, std::ostream& log) {
  RequireOut(c);
  const dataset::Manifest m = dataset::LoadManifest(c.manifest);
  const std::vector<Scored> scored = LoadScored(m, Workers(c));
  std::vector<eval::ScoredMask> pairs;
  for (const Scored& s : scored) pairs.push_back({&s.prediction, &s.truth});
  const auto thresholds = eval::UniformThresholds(c.steps);
  const auto curve = eval::PrCurve(pairs, thresholds);
  MakeDir(c.out);
  text::WriteFile(c.out / "pr_curve.csv", eval::PrCurveCsv(curve));
  log << fmt::format("pr-curve: {} thresholds over {} samples\n", curve.size(),
                     m.size());
}

// ---------------------------------------------------------------------------
// bias-report

std::string GroupOf(const dataset::SampleRecord& r) {
  if (r.group) return *r.group;
  if (r.skin_type) return std::string(bias::SkinToneName(*r.skin_type));
  return "all";
}

// Skin/face ratios per group, in first-seen group order.
using GroupedRatios = std::vector<std::pair<std::string, std::vector<double>>>;

void AddRatio(GroupedRatios& groups, const std::string& name, double ratio) {
  for (auto& [g, v] : groups) {
    if (g == name) {
      v.push_back(ratio);
      return;
    }
  }
  groups.push_back({name, {ratio}});
}

// Ground-truth skin/face ratios over every face of every masked record.
std::vector<double> ReferenceRatios(const dataset::Manifest& m) {
  std::vector<double> out;
  for (const auto& r : m.records) {
    if (!r.mask || r.faces.empty()) continue;
    const BinaryMask mask = dataset::LoadMask(*r.mask);
    for (const auto& f : r.faces) out.push_back(bias::SkinFaceRatio(mask, f));
  }
  return out;
}

void BiasReport(const CommandConfig& c, std::ostream& log) {
  RequireOut(c);
  const int bins = c.bins.value_or(static_cast<int>(bias::RatioDistribution::kDefaultBins));
  if (bins < 2) throw InvalidArgument("--bins must be >= 2");
  const double eps = c.eps.value_or(bias::kDefaultKlEps);
  RequireDelta(c.delta);
  if (!(eps > 0.0)) throw InvalidArgument("--eps must be > 0");
  const dataset::Manifest m = dataset::LoadManifest(c.manifest);
  std::optional<dataset::Manifest> reference;
  if (c.reference) reference = dataset::LoadManifest(*c.reference);

  struct PerRecord {
    std::optional<eval::ConfusionCounts> counts;
    std::vector<double> ratios;
  };
  std::vector<PerRecord> per(m.size());
  ParallelFor(m.size(), Workers(c), [&](std::size_t i) {
    const auto& r = m.records[i];
    if (!r.prediction) return;
    const BinaryMask pred =
        eval::Binarize(dataset::LoadProbabilityMap(*r.prediction), c.delta);
    if (r.mask && r.skin_type) {
      per[i].counts = eval::Confusion(pred, dataset::LoadMask(*r.mask));
    }
    for (const auto& f : r.faces) per[i].ratios.push_back(bias::SkinFaceRatio(pred, f));
  });

  std::vector<std::pair<eval::ConfusionCounts, bias::SkinTone>> labelled;
  GroupedRatios grouped;
  std::vector<double> all_ratios;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (per[i].counts) labelled.push_back({*per[i].counts, *m.records[i].skin_type});
    for (double ratio : per[i].ratios) {
      AddRatio(grouped, GroupOf(m.records[i]), ratio);
      all_ratios.push_back(ratio);
    }
  }
  const bool has_strata = std::any_of(labelled.begin(), labelled.end(), [](auto& p) {
    return p.second != bias::SkinTone::kUnknown;
  });
  if (!has_strata && all_ratios.empty()) {
    throw InvalidArgument(
        "bias-report found no records with prediction+mask+skin_type or "
        "prediction+faces");
  }

  MakeDir(c.out);
  json doc{{"corpus", m.corpus}, {"delta", c.delta}};

  if (has_strata) {
    const bias::StratifiedReport report = bias::BuildStratifiedReport(labelled);
    text::WriteFile(c.out / "stratified.csv", bias::StratifiedCsv(report));
    text::WriteFile(c.out / "stratified_detail.csv", bias::StratifiedDetailCsv(report));
    json groups = json::object();
    for (const auto& g : report.groups) {
      groups[std::string(bias::SkinToneName(g.tone))] = MetricsJson(g.counts, g.metrics);
    }
    doc["stratified"] = {{"groups", groups},
                         {"sigma_f1", report.sigma_f1},
                         {"sigma_iou", report.sigma_iou}};
    log << fmt::format("bias-report: {} skin-tone groups, sigma f1 {:.4f}, iou {:.4f}\n",
                       report.groups.size(), report.sigma_f1, report.sigma_iou);
  }

  if (!all_ratios.empty()) {
    grouped.push_back({"Overall", all_ratios});
    const auto ref_ratios = ReferenceRatios(reference ? *reference : m);
    std::optional<bias::RatioDistribution> ref_dist;
    if (!ref_ratios.empty()) {
      ref_dist = bias::RatioDistribution::FromRatios(ref_ratios, bins);
    }

    std::string table = "group,faces,mean_ratio_percent\n";
    std::string kl_csv = "group,kl\n";
    std::vector<bias::RatioDistribution> dists;
    json ratio_doc = json::object();
    for (const auto& [name, ratios] : grouped) {
      double mean = 0.0;
      for (double r : ratios) mean += r;
      mean /= static_cast<double>(ratios.size());
      table += fmt::format("{},{},{:.2f}\n", name, ratios.size(), 100.0 * mean);
      dists.push_back(bias::RatioDistribution::FromRatios(ratios, bins));
      json entry{{"faces", ratios.size()}, {"mean_ratio", mean}};
      if (ref_dist) {
        const double kl = bias::KlDivergence(*ref_dist, dists.back(), eps);
        kl_csv += fmt::format("{},{}\n", name, eval::FormatReal(kl));
        entry["kl_from_reference"] = kl;
      }
      ratio_doc[name] = std::move(entry);
    }
    text::WriteFile(c.out / "skin_face.csv", table);

    std::string dist_csv = "bin_lo,bin_hi";
    if (ref_dist) dist_csv += ",reference";
    for (const auto& [name, ratios] : grouped) dist_csv += "," + name;
    dist_csv += "\n";
    for (int b = 0; b < bins; ++b) {
      dist_csv += fmt::format("{},{}", eval::FormatReal(static_cast<double>(b) / bins),
                              eval::FormatReal(static_cast<double>(b + 1) / bins));
      if (ref_dist) dist_csv += "," + eval::FormatReal(ref_dist->probabilities()[b]);
      for (const auto& d : dists) dist_csv += "," + eval::FormatReal(d.probabilities()[b]);
      dist_csv += "\n";
    }
    text::WriteFile(c.out / "ratio_distribution.csv", dist_csv);
    if (ref_dist) text::WriteFile(c.out / "kl.csv", kl_csv);

    doc["skin_face"] = {{"bins", bins},
                        {"kl_eps", eps},
                        {"reference_faces", ref_ratios.size()},
                        {"groups", ratio_doc}};
    log << fmt::format("bias-report: {} face ratios in {} groups{}\n", all_ratios.size(),
                       grouped.size() - 1, ref_dist ? ", KL vs reference" : "");
  }
  text::WriteFile(c.out / "report.json", doc.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// heatmap

void RenderHeatmap(const fs::path& path, const bias::Histogram2D& h, bool log_scale) {
  constexpr std::size_t kScale = 4;
  const double max = static_cast<double>(
      *std::max_element(h.counts().begin(), h.counts().end()));
  const std::size_t w = h.bins_x() * kScale, ht = h.bins_y() * kScale;
  std::vector<std::uint8_t> gray(w * ht, 0);
  for (std::size_t y = 0; y < ht; ++y) {
    // Highest y bin at the top of the picture.
    const std::size_t by = h.bins_y() - 1 - y / kScale;
    for (std::size_t x = 0; x < w; ++x) {
      const double v = static_cast<double>(h.at(x / kScale, by));
      double level = 0.0;
      if (max > 0.0) level = log_scale ? std::log1p(v) / std::log1p(max) : v / max;
      gray[y * w + x] = color::ToByte(255.0 * level);
    }
  }
  io::WriteGray(path, w, ht, gray);
}

void Heatmap(const CommandConfig& c, std::ostream& log) {
  RequireOut(c);
  const std::size_t bins = static_cast<std::size_t>(
      c.bins.value_or(static_cast<int>(bias::Histogram2D::kDefaultBins)));
  if (bins < 1) throw InvalidArgument("--bins must be >= 1");
  std::vector<bias::AxisPair> pairs;
  if (c.pair == "all") {
    pairs = {bias::AxisPair::kSV, bias::AxisPair::kSH, bias::AxisPair::kVH};
  } else if (const auto p = bias::ParseAxisPair(c.pair)) {
    pairs = {*p};
  } else {
    throw InvalidArgument("--pair must be sv, sh, vh or all");
  }
  if (c.render != "none" && c.render != "linear" && c.render != "log") {
    throw InvalidArgument("--render must be none, linear or log");
  }
  const dataset::Manifest m = dataset::LoadManifest(c.manifest);

  // Per-record heatmaps merged by addition; group "all" plus one per tone.
  std::vector<std::vector<bias::Histogram2D>> per(m.size());
  ParallelFor(m.size(), Workers(c), [&](std::size_t i) {
    const RgbImage image = io::ReadRgb(m.records[i].image);
    const BinaryMask mask = dataset::LoadMask(RequireMask(m.records[i]));
    const bias::MaskedImage sample{&image, &mask};
    for (bias::AxisPair p : pairs) {
      per[i].push_back(bias::HsvHeatmap({&sample, 1}, p, bins));
    }
  });

  std::map<std::string, std::vector<bias::Histogram2D>> groups;
  const auto add = [&](const std::string& name, const std::vector<bias::Histogram2D>& h) {
    auto [it, inserted] = groups.try_emplace(name, h);
    if (!inserted) {
      for (std::size_t k = 0; k < h.size(); ++k) it->second[k] += h[k];
    }
  };
  for (std::size_t i = 0; i < m.size(); ++i) {
    add("all", per[i]);
    if (m.records[i].skin_type) {
      add(std::string(bias::SkinToneName(*m.records[i].skin_type)), per[i]);
    }
  }

  MakeDir(c.out);
  for (const auto& [name, hists] : groups) {
    for (const auto& h : hists) {
      const std::string stem =
          fmt::format("heatmap_{}_{}", bias::AxisPairName(h.pair()), name);
      text::WriteFile(c.out / (stem + ".csv"), h.ToCsv());
      if (c.render != "none") RenderHeatmap(c.out / (stem + ".png"), h, c.render == "log");
    }
  }
  log << fmt::format("heatmap: {} groups x {} axis pairs, {}x{} bins\n", groups.size(),
                     pairs.size(), bins, bins);
}

// ---------------------------------------------------------------------------
// split

void SplitCmd(const CommandConfig& c, std::ostream& log) {
  RequireOut(c);
  if (c.fractions.size() != 3) {
    throw InvalidArgument("--fractions takes three values: train,val,test");
  }
  const dataset::Manifest m = dataset::LoadManifest(c.manifest);
  const auto split = dataset::SplitManifest(
      m, {c.fractions[0], c.fractions[1], c.fractions[2]}, c.seed);
  MakeDir(c.out);
  // Paths are rewritten relative to the output directory.
  for (const auto& [name, part] :
       {std::pair{"train.txt", &split.train}, std::pair{"val.txt", &split.val},
        std::pair{"test.txt", &split.test}}) {
    text::WriteFile(c.out / name, dataset::SerializeManifest(*part, c.out));
  }
  log << fmt::format("split: {} -> train {}, val {}, test {}\n", m.size(),
                     split.train.size(), split.val.size(), split.test.size());
}

std::string Env(const std::string& flag) {
  std::string name = kEnvPrefix;
  for (char ch : flag) {
    name += ch == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  }
  return name;
}

}  // namespace

void Execute(const CommandConfig& c, std::ostream& log) {
  if (c.subcommand == "augment") return Augment(c, log);
  if (c.subcommand == "train-bayes") return TrainBayes(c, log);
  if (c.subcommand == "detect") return Detect(c, log);
  if (c.subcommand == "evaluate") return Evaluate(c, log);
  if (c.subcommand == "pr-curve") return PrCurve(c, log);
  if (c.subcommand == "bias-report") return BiasReport(c, log);
  if (c.subcommand == "heatmap") return Heatmap(c, log);
  if (c.subcommand == "split") return SplitCmd(c, log);
  throw InvalidArgument("unknown subcommand '" + c.subcommand + "'");
}

int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"skinaudit: color-space augmentation, skin detectors and "
               "skin-tone bias evaluation"};
  app.require_subcommand(1);
  CommandConfig c;

  const auto manifest = [&](CLI::App* sub) {
    sub->add_option("--manifest", c.manifest, "Input manifest")
        ->required()
        ->envname(Env("manifest"));
  };
  const auto out_dir = [&](CLI::App* sub) {
    sub->add_option("--out", c.out, "Output directory")->required()->envname(Env("out"));
  };
  const auto workers = [&](CLI::App* sub) {
    sub->add_option("--workers", c.workers, "Worker threads (0 = all cores)")
        ->envname(Env("workers"));
  };
  const auto delta = [&](CLI::App* sub) {
    // Range checks happen in Execute: CLI11 would silently drop an invalid
    // environment value instead of reporting it.
    sub->add_option("--delta", c.delta, "Binarization threshold in [0, 1]")
        ->envname(Env("delta"));
  };
  const auto bins = [&](CLI::App* sub, const std::string& what) {
    sub->add_option("--bins", c.bins, what)->envname(Env("bins"));
  };
  const auto eps = [&](CLI::App* sub, const std::string& what) {
    sub->add_option("--eps", c.eps, what)->envname(Env("eps"));
  };

  auto* aug = app.add_subcommand("augment", "Export an HSV-augmented corpus");
  manifest(aug), out_dir(aug), workers(aug);
  aug->add_option("--plan", c.plan, "Plan file (hue/saturation/value lists)")
      ->envname(Env("plan"));
  aug->add_flag("!--no-original", c.include_original, "Do not emit the unmodified image");
  aug->add_flag("--grayscale", c.grayscale, "Also emit a grayscale variant");

  auto* train = app.add_subcommand("train-bayes", "Train the color-histogram model");
  manifest(train), workers(train), bins(train, "Bins per RGB channel (default 32)");
  train->add_option("--model", c.model, "Output model file")->required()->envname(Env("model"));
  train->add_option("--alpha", c.alpha, "Laplace smoothing")->envname(Env("alpha"));
  train->add_option("--prior", c.prior, "Skin prior (default: empirical)")
      ->envname(Env("prior"));

  auto* det = app.add_subcommand("detect", "Run a rule set or Bayes model");
  manifest(det), out_dir(det), workers(det);
  det->add_option("--rules", c.rules, "Rule file or preset name (kolkur)")
      ->envname(Env("rules"));
  det->add_option("--model", c.model, "Bayes model file")->envname(Env("model"));

  auto* ev = app.add_subcommand("evaluate", "Metrics of predictions against masks");
  manifest(ev), out_dir(ev), workers(ev), delta(ev);
  eps(ev, "BCE probability clamp (default 1e-7)");
  ev->add_flag("--per-image", c.per_image, "Also emit one row per image");

  auto* pr = app.add_subcommand("pr-curve", "Micro-averaged precision-recall sweep");
  manifest(pr), out_dir(pr), workers(pr);
  pr->add_option("--steps", c.steps, "Number of thresholds in [0, 1]")
      ->envname(Env("steps"));

  auto* br = app.add_subcommand("bias-report", "Skin-tone stratified metrics and "
                                               "skin/face ratio analysis");
  manifest(br), out_dir(br), workers(br), delta(br);
  bins(br, "Ratio distribution bins (default 100)");
  eps(br, "KL smoothing (default 1e-9)");
  br->add_option("--reference", c.reference,
                 "Manifest whose ground-truth masks give the reference ratio curve")
      ->envname(Env("reference"));

  auto* hm = app.add_subcommand("heatmap", "HSV heatmaps of skin pixels");
  manifest(hm), out_dir(hm), workers(hm);
  bins(hm, "Bins per axis (default 64)");
  hm->add_option("--pair", c.pair, "sv, sh, vh or all")->envname(Env("pair"));
  hm->add_option("--render", c.render, "none, linear or log")->envname(Env("render"));

  auto* sp = app.add_subcommand("split", "Seeded train/val/test split");
  manifest(sp), out_dir(sp);
  sp->add_option("--fractions", c.fractions, "train,val,test")
      ->delimiter(',')
      ->expected(3)
      ->envname(Env("fractions"));
  sp->add_option("--seed", c.seed, "Shuffle seed")->envname(Env("seed"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  for (CLI::App* sub : app.get_subcommands()) c.subcommand = sub->get_name();

  try {
    Execute(c, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace skinaudit::cli
