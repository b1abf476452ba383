// Copyright (c) 2026 The stepgame authors
// SPDX-License-Identifier: Apache-2.0

#include "stepgame/eval.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "stepgame/errors.hpp"
#include "stepgame/rng.hpp"

namespace stepgame {
namespace {

AnswerLabel parse_label_or_throw(const std::string& text, const std::string& where) {
  const auto label = label_from_name(text);
  if (!label) throw ValidationError("unknown label \"" + text + "\" (" + where + ")");
  return *label;
}

}  // namespace

EvalReport score(const std::vector<Sample>& gold, const std::vector<Prediction>& predictions) {
  if (gold.empty()) throw ValidationError("score: empty gold set");

  std::unordered_map<std::string, AnswerLabel> by_id;
  by_id.reserve(predictions.size());
  for (const Prediction& p : predictions) {
    if (!by_id.emplace(p.id, p.label).second) {
      throw ValidationError("duplicate prediction id: " + p.id);
    }
  }

  EvalReport report;
  std::unordered_set<std::string> gold_ids;
  gold_ids.reserve(gold.size());
  for (const Sample& s : gold) {
    if (!gold_ids.insert(s.id).second) throw ValidationError("duplicate gold id: " + s.id);
    ++report.per_k_total[s.k];
    ++report.total;
    const auto it = by_id.find(s.id);
    if (it == by_id.end()) {
      report.unmatched_gold_ids.push_back(s.id);
      continue;
    }
    if (it->second == s.label) {
      ++report.per_k_correct[s.k];
      ++report.correct;
    }
  }
  for (const Prediction& p : predictions) {
    if (!gold_ids.contains(p.id)) report.unknown_prediction_ids.push_back(p.id);
  }

  double sum = 0.0;
  for (const auto& [k, total] : report.per_k_total) {
    const auto it = report.per_k_correct.find(k);
    const int correct = it == report.per_k_correct.end() ? 0 : it->second;
    report.per_k_correct[k] = correct;
    const double acc = static_cast<double>(correct) / static_cast<double>(total);
    report.per_k_accuracy[k] = acc;
    sum += acc;
  }
  report.mean_over_k = sum / static_cast<double>(report.per_k_total.size());
  report.micro = static_cast<double>(report.correct) / static_cast<double>(report.total);
  return report;
}

Json eval_to_json(const EvalReport& report) {
  Json j;
  j["total"] = report.total;
  j["correct"] = report.correct;
  j["micro_accuracy"] = report.micro;
  j["mean_over_k_accuracy"] = report.mean_over_k;
  Json per_k = Json::object();
  for (const auto& [k, total] : report.per_k_total) {
    Json entry;
    entry["total"] = total;
    entry["correct"] = report.per_k_correct.at(k);
    entry["accuracy"] = report.per_k_accuracy.at(k);
    per_k[std::to_string(k)] = std::move(entry);
  }
  j["per_k"] = std::move(per_k);
  j["unmatched_gold_ids"] = report.unmatched_gold_ids;
  j["unknown_prediction_ids"] = report.unknown_prediction_ids;
  return j;
}

std::vector<Prediction> read_predictions(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());

  std::vector<Prediction> predictions;
  std::unordered_set<std::string> seen;
  std::string line;
  int line_no = 0;
  bool format_known = false;
  bool jsonl = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!format_known) {
      jsonl = line.front() == '{';
      format_known = true;
    }
    const std::string where = path.string() + ":" + std::to_string(line_no);
    Prediction p;
    if (jsonl) {
      Json j;
      try {
        j = Json::parse(line);
        p.id = j.at("id").get<std::string>();
        p.label = parse_label_or_throw(j.at("label").get<std::string>(), where);
      } catch (const ValidationError&) {
        throw;
      } catch (const std::exception& e) {
        throw ParseFailure(where + ": " + e.what());
      }
    } else {
      const std::size_t tab = line.find('\t');
      if (tab == std::string::npos) {
        throw ParseFailure(where + ": expected id<TAB>label");
      }
      p.id = line.substr(0, tab);
      p.label = parse_label_or_throw(line.substr(tab + 1), where);
    }
    if (!seen.insert(p.id).second) {
      throw ValidationError("duplicate prediction id: " + p.id + " (" + where + ")");
    }
    predictions.push_back(std::move(p));
  }
  return predictions;
}

void write_predictions(const std::vector<Prediction>& predictions,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  for (const Prediction& p : predictions) {
    Json j;
    j["id"] = p.id;
    j["label"] = label_name(p.label);
    out << j.dump() << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<Prediction> baseline_random(const std::vector<Sample>& gold, std::uint64_t seed) {
  Pcg32 rng(seed);
  std::vector<Prediction> predictions;
  predictions.reserve(gold.size());
  for (const Sample& s : gold) {
    predictions.push_back({s.id, kAllLabels[rng.bounded(9)]});
  }
  return predictions;
}

AnswerLabel majority_label(const std::vector<Sample>& train) {
  if (train.empty()) throw ValidationError("majority_label: empty training set");
  std::array<int, 9> counts{};
  for (const Sample& s : train) ++counts[static_cast<std::size_t>(s.label)];
  // Ties break toward the earlier label in canonical order.
  AnswerLabel best = kAllLabels[0];
  for (AnswerLabel l : kAllLabels) {
    if (counts[static_cast<std::size_t>(l)] > counts[static_cast<std::size_t>(best)]) best = l;
  }
  return best;
}

std::vector<Prediction> baseline_majority(const std::vector<Sample>& train,
                                          const std::vector<Sample>& gold) {
  const AnswerLabel label = majority_label(train);
  std::vector<Prediction> predictions;
  predictions.reserve(gold.size());
  for (const Sample& s : gold) predictions.push_back({s.id, label});
  return predictions;
}

SolveOutcome solver_predict(const std::vector<Sample>& samples, const TemplateSet& templates) {
  SolveOutcome outcome;
  for (const Sample& s : samples) {
    ParsedStory story;
    try {
      story = templates.parse_story(s.story, s.question);
    } catch (const ParseFailure& e) {
      outcome.failures.emplace_back(s.id, e.what());
      continue;
    }

    // Breadth-first position propagation from the first question entity.
    // Each statement (a, r, b) pins positions[a] = positions[b] + offset(r).
    std::map<Entity, std::vector<std::pair<Entity, GridVec>>> adjacent;
    for (const Statement& e : story.edges) {
      const GridVec off = offset_of(e.rel);
      adjacent[e.subject].emplace_back(e.object, off);    // subject = object + off
      adjacent[e.object].emplace_back(e.subject, -off);   // object = subject - off
    }

    PositionMap positions;
    positions[story.question_first] = {0, 0};
    std::vector<Entity> frontier{story.question_first};
    bool contradiction = false;
    while (!frontier.empty() && !contradiction) {
      const Entity current = frontier.back();
      frontier.pop_back();
      const auto it = adjacent.find(current);
      if (it == adjacent.end()) continue;
      for (const auto& [neighbor, delta] : it->second) {
        // neighbor = current - delta under the stored orientation.
        const GridVec pos = positions[current] - delta;
        const auto found = positions.find(neighbor);
        if (found == positions.end()) {
          positions[neighbor] = pos;
          frontier.push_back(neighbor);
        } else if (found->second != pos) {
          contradiction = true;
          break;
        }
      }
    }

    if (contradiction) {
      outcome.failures.emplace_back(s.id, "contradictory statements");
      outcome.abstained_ids.push_back(s.id);
      continue;
    }
    if (!positions.contains(story.question_second)) {
      outcome.abstained_ids.push_back(s.id);
      continue;
    }
    outcome.predictions.push_back(
        {s.id, answer(positions, story.question_first, story.question_second)});
  }
  return outcome;
}

Json solve_to_json(const SolveOutcome& outcome) {
  Json j;
  j["predicted"] = outcome.predictions.size();
  j["abstained_ids"] = outcome.abstained_ids;
  Json failures = Json::array();
  for (const auto& [id, reason] : outcome.failures) {
    Json f;
    f["id"] = id;
    f["reason"] = reason;
    failures.push_back(std::move(f));
  }
  j["failures"] = std::move(failures);
  return j;
}

}  // namespace stepgame
