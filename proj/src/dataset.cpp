// Copyright (c) 2026 The stepgame authors
// SPDX-License-Identifier: Apache-2.0

#include "stepgame/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <functional>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "stepgame/errors.hpp"
#include "stepgame/version.hpp"

namespace stepgame {
namespace {

constexpr const char* kPrngName = "pcg32 (PCG-XSH-RR 64/32)";
constexpr const char* kSeedDerivation =
    "sample_seed = mix64(mix64(master_seed ^ mix64(fnv1a64(stream_tag))) ^ stream_index); "
    "one pcg32 stream per sample drives chain, question, noise, rendering and shuffle in "
    "that order";

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

unsigned worker_count(int jobs) {
  if (jobs > 0) return static_cast<unsigned>(jobs);
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

struct GeneratedSample {
  Sample sample;
  std::string chain_key;
};

// Builds one fully rendered sample. Pure in (cfg, tag, index, excluded), so
// results are identical for any worker count or completion order.
GeneratedSample make_sample(const GenConfig& cfg, const std::string& split_name,
                            const std::string& stream_tag, std::uint64_t stream_index,
                            int file_index, const TemplateSet& templates,
                            const std::unordered_set<std::string>* excluded) {
  const std::uint64_t seed = derive_sample_seed(cfg.master_seed, stream_tag, stream_index);
  Pcg32 rng(seed);
  SampleSpec spec = make_sample_spec(cfg, rng, excluded);
  spec.sample_seed = seed;
  const StoryText text = templates.render_story(spec, rng);

  // Self-check: the stored label must equal the oracle recomputation from
  // the chain's own positions.
  if (answer(resolve_positions(spec.chain), spec.question_first, spec.question_second) !=
      spec.gold) {
    throw Error("internal: gold label mismatch during generation");
  }

  GeneratedSample out;
  out.chain_key = chain_question_key(spec.chain, spec.question_first, spec.question_second);
  out.sample.id = split_name + "-k" + std::to_string(cfg.k) + "-" + std::to_string(file_index);
  out.sample.split = split_name;
  out.sample.k = cfg.k;
  out.sample.story = text.sentences;
  out.sample.question = text.question;
  out.sample.label = spec.gold;
  out.sample.noise = spec.noise;
  out.sample.seed = seed;
  return out;
}

// Parallel index loop; chunked to keep contention low.
void parallel_for(int total, unsigned workers, const std::function<void(int)>& body) {
  if (total <= 0) return;
  if (workers <= 1) {
    for (int i = 0; i < total; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  constexpr int kChunk = 64;
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int begin = next.fetch_add(kChunk);
        if (begin >= total) return;
        const int end = std::min(total, begin + kChunk);
        try {
          for (int i = begin; i < end; ++i) body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::string surface_key(const Sample& s) {
  std::vector<std::string> sorted = s.story;
  std::sort(sorted.begin(), sorted.end());
  std::string key;
  for (const auto& sentence : sorted) {
    key += sentence;
    key.push_back('\x1e');
  }
  key.push_back('\x1f');
  key += s.question;
  return key;
}

// Canonical edges of the connected component containing the question
// entities, sorted, plus the ordered question pair. Disconnected noise falls
// out; branch and detour noise stays (it is not identifiable from surface
// form).
std::string structural_key(const Sample& s, const TemplateSet& templates) {
  ParsedStory story;
  try {
    story = templates.parse_story(s.story, s.question);
  } catch (const ParseFailure& e) {
    throw ParseFailure(s.id + ": " + e.what());
  }

  // Union-find over entities; sets are tiny, no compression needed.
  std::map<Entity, Entity> parent;
  const auto find = [&parent](Entity x) {
    parent.try_emplace(x, x);
    while (parent[x] != x) x = parent[x];
    return x;
  };
  for (const Statement& e : story.edges) {
    const Entity ra = find(e.subject);
    const Entity rb = find(e.object);
    if (ra != rb) parent[ra] = rb;
  }
  const Entity root_first = find(story.question_first);
  const Entity root_second = find(story.question_second);

  std::vector<std::string> parts;
  for (const Statement& e : story.edges) {
    const Entity r = find(e.subject);
    if (r != root_first && r != root_second) continue;
    std::string part;
    part.push_back(e.subject);
    part.append(relation_name(e.rel));
    part.push_back(e.object);
    parts.push_back(std::move(part));
  }
  std::sort(parts.begin(), parts.end());
  std::string key;
  for (const auto& p : parts) {
    key += p;
    key.push_back('|');
  }
  key.push_back('?');
  key.push_back(story.question_first);
  key.push_back(story.question_second);
  return key;
}

}  // namespace

Json sample_to_json(const Sample& s) {
  Json noise;
  noise["irrelevant"] = s.noise.irrelevant;
  noise["disconnected"] = s.noise.disconnected;
  noise["supporting"] = s.noise.supporting;
  Json j;
  j["id"] = s.id;
  j["split"] = s.split;
  j["k"] = s.k;
  j["story"] = s.story;
  j["question"] = s.question;
  j["label"] = label_name(s.label);
  j["noise"] = std::move(noise);
  j["seed"] = s.seed;
  return j;
}

Sample sample_from_json(const Json& j) {
  Sample s;
  s.id = j.at("id").get<std::string>();
  s.split = j.at("split").get<std::string>();
  s.k = j.at("k").get<int>();
  s.story = j.at("story").get<std::vector<std::string>>();
  s.question = j.at("question").get<std::string>();
  const auto label = label_from_name(j.at("label").get<std::string>());
  if (!label) {
    throw ValidationError("unknown label \"" + j.at("label").get<std::string>() + "\"");
  }
  s.label = *label;
  const auto& noise = j.at("noise");
  s.noise.irrelevant = noise.at("irrelevant").get<int>();
  s.noise.disconnected = noise.at("disconnected").get<int>();
  s.noise.supporting = noise.at("supporting").get<int>();
  s.seed = j.at("seed").get<std::uint64_t>();
  if (s.k < 1) throw ValidationError("k must be >= 1");
  if (s.story.empty()) throw ValidationError("empty story");
  return s;
}

void write_jsonl(const std::vector<Sample>& samples, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  for (const Sample& s : samples) {
    out << sample_to_json(s).dump() << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<Sample> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  std::vector<Sample> samples;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      samples.push_back(sample_from_json(Json::parse(line)));
    } catch (const std::exception& e) {
      throw ParseFailure(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return samples;
}

std::vector<SplitPlan> default_splits() {
  return {
      {"train", 1, 5, 10000, false},
      {"valid", 1, 5, 1000, false},
      {"test", 1, 10, 10000, true},
  };
}

void DatasetOptions::validate() const {
  noise.validate();
  if (entity_pool_size < 2 || entity_pool_size > kMaxEntityPool) {
    throw ValidationError("entity_pool_size must be in [2, 26]");
  }
  if (jobs < 0) throw ValidationError("jobs must be >= 0");
  std::set<std::string> names;
  for (const SplitPlan& plan : splits.empty() ? default_splits() : splits) {
    if (plan.name.empty()) throw ValidationError("split name must be non-empty");
    if (!names.insert(plan.name).second) {
      throw ValidationError("duplicate split name: " + plan.name);
    }
    if (plan.per_k <= 0) throw ValidationError(plan.name + ": per_k must be > 0");
    if (plan.k_min < 1 || plan.k_max < plan.k_min) {
      throw ValidationError(plan.name + ": invalid k range");
    }
    if (plan.k_max + 1 > entity_pool_size) {
      throw ValidationError(plan.name + ": k_max needs more entities than the pool holds");
    }
  }
}

Json generate_dataset(const DatasetOptions& options, const TemplateSet& templates,
                      const std::filesystem::path& out_dir) {
  options.validate();
  const std::vector<SplitPlan> splits = options.splits.empty() ? default_splits() : options.splits;
  const unsigned workers = worker_count(options.jobs);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + out_dir.string());

  // The validation split continues the training seed stream; every other
  // split owns a stream named after it.
  std::uint64_t train_total = 0;
  for (const SplitPlan& plan : splits) {
    if (plan.name == "train") {
      train_total = static_cast<std::uint64_t>(plan.k_max - plan.k_min + 1) *
                    static_cast<std::uint64_t>(plan.per_k);
    }
  }
  const bool has_train = std::any_of(splits.begin(), splits.end(),
                                     [](const SplitPlan& p) { return p.name == "train"; });
  const bool has_test = std::any_of(splits.begin(), splits.end(),
                                    [](const SplitPlan& p) { return p.name == "test"; });
  const bool dedup = options.dedup_test_vs_train && has_train && has_test;

  // Chain+question keys of training samples with k >= 2; test draws
  // colliding with them are redrawn so structural leakage beyond k = 1 is
  // zero by construction. Requires the train split to precede the test
  // split, as in the default plan.
  std::unordered_set<std::string> train_keys;

  Json manifest;
  manifest["tool"] = "stepgame";
  manifest["version"] = kVersion;
  manifest["master_seed"] = options.master_seed;
  manifest["entity_pool_size"] = options.entity_pool_size;
  manifest["prng"] = kPrngName;
  manifest["seed_derivation"] = kSeedDerivation;
  {
    Json tpl;
    tpl["source"] = templates.source_name();
    tpl["fnv1a64"] = hex64(templates.checksum());
    Json counts;
    for (const auto& [name, count] : templates.counts()) counts[name] = count;
    tpl["counts"] = std::move(counts);
    manifest["templates"] = std::move(tpl);
  }
  {
    const auto type_json = [](const NoiseTypeConfig& t) {
      Json j;
      j["probability"] = t.probability;
      j["min"] = t.min_count;
      j["max"] = t.max_count;
      return j;
    };
    Json noise;
    noise["irrelevant"] = type_json(options.noise.irrelevant);
    noise["disconnected"] = type_json(options.noise.disconnected);
    noise["supporting"] = type_json(options.noise.supporting);
    manifest["noise"] = std::move(noise);
  }
  manifest["dedup_test_vs_train"] = dedup;
  manifest["splits"] = Json::array();

  std::uint64_t total_samples = 0;
  for (const SplitPlan& plan : splits) {
    const std::string stream_tag = plan.name == "valid" ? "train" : plan.name;
    const std::uint64_t stream_base = plan.name == "valid" ? train_total : 0;

    Json split_json;
    split_json["name"] = plan.name;
    split_json["k_min"] = plan.k_min;
    split_json["k_max"] = plan.k_max;
    split_json["per_k"] = plan.per_k;
    split_json["noise"] = plan.noise;
    {
      Json stream;
      stream["tag"] = stream_tag;
      stream["offset"] = stream_base;
      split_json["seed_stream"] = std::move(stream);
    }
    split_json["files"] = Json::array();

    std::uint64_t k_offset = 0;
    for (int k = plan.k_min; k <= plan.k_max; ++k) {
      GenConfig cfg;
      cfg.k = k;
      cfg.entity_pool_size = options.entity_pool_size;
      cfg.master_seed = options.master_seed;
      cfg.noise = options.noise;
      cfg.noise.enabled = plan.noise;

      const std::unordered_set<std::string>* excluded =
          (dedup && plan.name == "test" && k >= 2) ? &train_keys : nullptr;

      std::vector<GeneratedSample> generated(static_cast<std::size_t>(plan.per_k));
      parallel_for(plan.per_k, workers, [&](int i) {
        generated[static_cast<std::size_t>(i)] =
            make_sample(cfg, plan.name, stream_tag, stream_base + k_offset + static_cast<std::uint64_t>(i),
                        i, templates, excluded);
      });

      if (dedup && plan.name == "train" && k >= 2) {
        for (const GeneratedSample& g : generated) train_keys.insert(g.chain_key);
      }

      std::vector<Sample> samples;
      samples.reserve(generated.size());
      for (GeneratedSample& g : generated) samples.push_back(std::move(g.sample));

      const std::string file_name = plan.name + "-k" + std::to_string(k) + ".jsonl";
      const std::filesystem::path file_path = out_dir / file_name;
      write_jsonl(samples, file_path);

      // Hash the bytes just written so the manifest pins file content.
      std::ifstream check(file_path, std::ios::binary);
      std::ostringstream bytes;
      bytes << check.rdbuf();
      Json file_json;
      file_json["file"] = file_name;
      file_json["k"] = k;
      file_json["count"] = plan.per_k;
      file_json["fnv1a64"] = hex64(fnv1a64(bytes.str()));
      split_json["files"].push_back(std::move(file_json));

      k_offset += static_cast<std::uint64_t>(plan.per_k);
      total_samples += static_cast<std::uint64_t>(plan.per_k);
    }
    manifest["splits"].push_back(std::move(split_json));
  }
  manifest["total_samples"] = total_samples;

  std::ofstream out(out_dir / "manifest.json", std::ios::binary);
  if (!out) throw IoError("cannot write manifest: " + (out_dir / "manifest.json").string());
  out << manifest.dump(2) << '\n';
  return manifest;
}

LeakageReport leakage_report(const std::vector<Sample>& train, const std::vector<Sample>& test,
                             LeakageMode mode, const TemplateSet* templates) {
  if (train.empty() || test.empty()) {
    throw ValidationError("leakage_report: both sample sets must be non-empty");
  }
  if (mode == LeakageMode::Structural && templates == nullptr) {
    throw ValidationError("leakage_report: structural mode needs a template set");
  }
  const auto key_of = [&](const Sample& s) {
    return mode == LeakageMode::Surface ? surface_key(s) : structural_key(s, *templates);
  };

  std::vector<std::string> parse_errors;
  std::unordered_set<std::string> train_keys;
  for (const Sample& s : train) {
    try {
      train_keys.insert(key_of(s));
    } catch (const ParseFailure& e) {
      parse_errors.emplace_back(e.what());
    }
  }

  LeakageReport report;
  report.mode = mode;
  report.train_total = static_cast<int>(train.size());
  report.test_total = static_cast<int>(test.size());
  for (const Sample& s : test) {
    ++report.test_per_k[s.k];
    std::string key;
    try {
      key = key_of(s);
    } catch (const ParseFailure& e) {
      parse_errors.emplace_back(e.what());
      continue;
    }
    if (train_keys.contains(key)) {
      ++report.overlapping;
      ++report.overlap_per_k[s.k];
      report.overlapping_ids.push_back(s.id);
    }
  }
  if (!parse_errors.empty()) {
    std::string msg = "structural leakage: " + std::to_string(parse_errors.size()) +
                      " unparseable sample(s); first: " + parse_errors.front();
    throw ParseFailure(msg);
  }
  report.overall_fraction =
      static_cast<double>(report.overlapping) / static_cast<double>(report.test_total);
  return report;
}

Json leakage_to_json(const LeakageReport& report) {
  Json j;
  j["mode"] = report.mode == LeakageMode::Surface ? "surface" : "structural";
  j["train_total"] = report.train_total;
  j["test_total"] = report.test_total;
  j["overlapping"] = report.overlapping;
  j["overall_fraction"] = report.overall_fraction;
  Json per_k = Json::object();
  for (const auto& [k, total] : report.test_per_k) {
    const auto it = report.overlap_per_k.find(k);
    const int overlap = it == report.overlap_per_k.end() ? 0 : it->second;
    Json entry;
    entry["total"] = total;
    entry["overlapping"] = overlap;
    entry["fraction"] = total == 0 ? 0.0 : static_cast<double>(overlap) / total;
    per_k[std::to_string(k)] = std::move(entry);
  }
  j["per_k"] = std::move(per_k);
  j["overlapping_ids"] = report.overlapping_ids;
  return j;
}

Json stats_report(const std::vector<Sample>& samples) {
  if (samples.empty()) throw ValidationError("stats_report: no samples");

  std::map<int, int> per_k;
  std::map<std::string, int> labels;
  for (AnswerLabel l : kAllLabels) labels[std::string(label_name(l))] = 0;
  std::map<int, int> sentence_counts;
  NoiseRecord noise_totals;
  int with_noise = 0;
  std::map<std::string, int> entity_mentions;

  for (const Sample& s : samples) {
    ++per_k[s.k];
    ++labels[std::string(label_name(s.label))];
    ++sentence_counts[static_cast<int>(s.story.size())];
    noise_totals.irrelevant += s.noise.irrelevant;
    noise_totals.disconnected += s.noise.disconnected;
    noise_totals.supporting += s.noise.supporting;
    if (s.noise.irrelevant + s.noise.disconnected + s.noise.supporting > 0) ++with_noise;
    // Entities surface as standalone single capital letters.
    const auto scan = [&entity_mentions](const std::string& text) {
      for (std::size_t i = 0; i < text.size(); ++i) {
        if (!is_entity_name(text[i])) continue;
        const bool left_ok = i == 0 || !std::isalnum(static_cast<unsigned char>(text[i - 1]));
        const bool right_ok =
            i + 1 == text.size() || !std::isalnum(static_cast<unsigned char>(text[i + 1]));
        if (left_ok && right_ok) ++entity_mentions[std::string(1, text[i])];
      }
    };
    for (const auto& sentence : s.story) scan(sentence);
    scan(s.question);
  }

  Json j;
  j["total"] = samples.size();
  Json per_k_json = Json::object();
  for (const auto& [k, n] : per_k) per_k_json[std::to_string(k)] = n;
  j["per_k"] = std::move(per_k_json);
  Json labels_json = Json::object();
  for (AnswerLabel l : kAllLabels) {
    labels_json[std::string(label_name(l))] = labels[std::string(label_name(l))];
  }
  j["labels"] = std::move(labels_json);
  Json sentences_json = Json::object();
  for (const auto& [n, count] : sentence_counts) sentences_json[std::to_string(n)] = count;
  j["sentences_per_story"] = std::move(sentences_json);
  Json noise_json;
  noise_json["irrelevant"] = noise_totals.irrelevant;
  noise_json["disconnected"] = noise_totals.disconnected;
  noise_json["supporting"] = noise_totals.supporting;
  noise_json["samples_with_noise"] = with_noise;
  j["noise"] = std::move(noise_json);
  Json entities_json = Json::object();
  for (const auto& [name, count] : entity_mentions) entities_json[name] = count;
  j["entity_mentions"] = std::move(entities_json);
  return j;
}

}  // namespace stepgame
