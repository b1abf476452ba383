// Copyright (c) 2026 The stepgame authors
// SPDX-License-Identifier: Apache-2.0

#include "stepgame/templates.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <optional>
#include <sstream>

#include "stepgame/errors.hpp"

namespace stepgame {
namespace {

#include "default_templates.inc"

std::string location(std::string_view source, int line_no) {
  std::string out(source);
  out.push_back(':');
  out += std::to_string(line_no);
  return out;
}

// Splits a pattern around its {A} and {B} placeholders. Throws unless each
// occurs exactly once.
void compile_pattern(Template& t, std::string_view source) {
  const auto count = [&](std::string_view needle) {
    std::size_t n = 0, pos = 0;
    while ((pos = t.pattern.find(needle, pos)) != std::string::npos) {
      ++n;
      pos += needle.size();
    }
    return n;
  };
  if (t.pattern.empty()) {
    throw ValidationError(location(source, t.line_no) + ": empty pattern");
  }
  if (count("{A}") != 1) {
    throw ValidationError(location(source, t.line_no) + ": pattern must contain {A} exactly once");
  }
  if (count("{B}") != 1) {
    throw ValidationError(location(source, t.line_no) + ": pattern must contain {B} exactly once");
  }
  const std::size_t pa = t.pattern.find("{A}");
  const std::size_t pb = t.pattern.find("{B}");
  t.a_first = pa < pb;
  const std::size_t first = std::min(pa, pb);
  const std::size_t second = std::max(pa, pb);
  t.pre = t.pattern.substr(0, first);
  t.mid = t.pattern.substr(first + 3, second - first - 3);
  t.post = t.pattern.substr(second + 3);
}

// Positions of the two single-letter holes in the rendered sentence.
std::pair<std::size_t, std::size_t> hole_positions(const Template& t) {
  return {t.pre.size(), t.pre.size() + 1 + t.mid.size()};
}

// Literal character of the rendered sentence at `pos`, or nullopt when `pos`
// is one of the holes.
std::optional<char> literal_at(const Template& t, std::size_t pos) {
  const auto [h1, h2] = hole_positions(t);
  if (pos == h1 || pos == h2) return std::nullopt;
  if (pos < h1) return t.pre[pos];
  if (pos < h2) return t.mid[pos - h1 - 1];
  return t.post[pos - h2 - 1];
}

// (A, B) extracted from a rendered sentence's two hole characters.
std::pair<Entity, Entity> extract(const Template& t, char first_hole, char second_hole) {
  return t.a_first ? std::make_pair(first_hole, second_hole)
                   : std::make_pair(second_hole, first_hole);
}

// If the two templates can render the same sentence from valid statements,
// returns that sentence; otherwise nullopt. Exact because entities are
// single uppercase letters: rendered sentences of a template differ only at
// its two hole positions.
std::optional<std::string> common_sentence(const Template& s, const Template& t) {
  if (s.rendered_size() != t.rendered_size()) return std::nullopt;
  const std::size_t len = s.rendered_size();
  std::string sentence(len, '\0');
  std::vector<std::size_t> free_positions;
  for (std::size_t pos = 0; pos < len; ++pos) {
    const auto cs = literal_at(s, pos);
    const auto ct = literal_at(t, pos);
    if (cs && ct) {
      if (*cs != *ct) return std::nullopt;
      sentence[pos] = *cs;
    } else if (cs || ct) {
      const char c = cs ? *cs : *ct;
      if (!is_entity_name(c)) return std::nullopt;  // hole cannot hold this literal
      sentence[pos] = c;
    } else {
      free_positions.push_back(pos);  // hole in both
    }
  }
  // Fill positions that are holes in both templates so that each template
  // sees two distinct entities.
  static constexpr std::array<char, 4> kProbe = {'X', 'Y', 'W', 'V'};
  const auto holes_ok = [&sentence](const Template& tpl) {
    const auto [h1, h2] = hole_positions(tpl);
    return sentence[h1] != sentence[h2];
  };
  if (free_positions.empty()) {
    return (holes_ok(s) && holes_ok(t)) ? std::optional(sentence) : std::nullopt;
  }
  for (char c1 : kProbe) {
    sentence[free_positions[0]] = c1;
    if (free_positions.size() == 1) {
      if (holes_ok(s) && holes_ok(t)) return sentence;
      continue;
    }
    for (char c2 : kProbe) {
      sentence[free_positions[1]] = c2;
      if (holes_ok(s) && holes_ok(t)) return sentence;
    }
  }
  return std::nullopt;
}

Statement statement_of(const Template& t, const std::string& sentence) {
  const auto [h1, h2] = hole_positions(t);
  const auto [a, b] = extract(t, sentence[h1], sentence[h2]);
  return {a, t.rel, b};
}

}  // namespace

std::optional<std::pair<Entity, Entity>> Template::match(std::string_view sentence) const {
  if (sentence.size() != rendered_size()) return std::nullopt;
  std::size_t pos = 0;
  if (sentence.substr(pos, pre.size()) != pre) return std::nullopt;
  pos += pre.size();
  const char first_hole = sentence[pos++];
  if (!is_entity_name(first_hole)) return std::nullopt;
  if (sentence.substr(pos, mid.size()) != mid) return std::nullopt;
  pos += mid.size();
  const char second_hole = sentence[pos++];
  if (!is_entity_name(second_hole)) return std::nullopt;
  if (sentence.substr(pos) != post) return std::nullopt;
  if (first_hole == second_hole) return std::nullopt;
  return extract(*this, first_hole, second_hole);
}

TemplateSet TemplateSet::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open template file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_text(buffer.str(), path);
}

TemplateSet TemplateSet::load_text(std::string_view text, std::string_view source_name) {
  TemplateSet set;
  set.checksum_ = fnv1a64(text);
  set.source_name_ = std::string(source_name);

  int line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    const std::size_t tab1 = line.find('\t');
    const std::size_t tab2 = tab1 == std::string_view::npos ? std::string_view::npos
                                                            : line.find('\t', tab1 + 1);
    if (tab2 == std::string_view::npos) {
      throw ValidationError(location(source_name, line_no) +
                            ": expected kind<TAB>relation<TAB>pattern");
    }
    const std::string_view kind = line.substr(0, tab1);
    const std::string_view rel_name = line.substr(tab1 + 1, tab2 - tab1 - 1);
    Template t;
    t.pattern = std::string(line.substr(tab2 + 1));
    t.line_no = line_no;

    if (kind == "stmt") {
      const auto rel = relation_from_name(rel_name);
      if (!rel) {
        throw ValidationError(location(source_name, line_no) + ": unknown relation '" +
                              std::string(rel_name) + "'");
      }
      t.rel = *rel;
      compile_pattern(t, source_name);
      set.statements_.push_back(std::move(t));
    } else if (kind == "question") {
      if (rel_name != "-") {
        throw ValidationError(location(source_name, line_no) +
                              ": question records use '-' as the relation field");
      }
      compile_pattern(t, source_name);
      set.questions_.push_back(std::move(t));
    } else {
      throw ValidationError(location(source_name, line_no) + ": unknown record kind '" +
                            std::string(kind) + "'");
    }
  }

  if (set.statements_.empty() && set.questions_.empty()) {
    throw ValidationError(std::string(source_name) + ": no templates");
  }
  set.validate(source_name);
  set.build_indexes();
  return set;
}

void TemplateSet::validate(std::string_view source_name) const {
  for (Relation r : kAllRelations) {
    const bool any = std::any_of(statements_.begin(), statements_.end(),
                                 [r](const Template& t) { return t.rel == r; });
    if (!any) {
      throw ValidationError(std::string(source_name) + ": no statement template for relation '" +
                            std::string(relation_name(r)) + "'");
    }
  }
  if (questions_.empty()) {
    throw ValidationError(std::string(source_name) + ": no question template");
  }

  // Exact duplicates are counted as collection mistakes.
  for (std::size_t i = 0; i < statements_.size(); ++i) {
    for (std::size_t j = i + 1; j < statements_.size(); ++j) {
      if (statements_[i].rel == statements_[j].rel &&
          statements_[i].pattern == statements_[j].pattern) {
        throw ValidationError(location(source_name, statements_[j].line_no) +
                              ": duplicate of line " + std::to_string(statements_[i].line_no));
      }
    }
  }

  // Two statement templates may share a surface sentence only when they
  // parse it to the same canonical statement.
  for (std::size_t i = 0; i < statements_.size(); ++i) {
    for (std::size_t j = i + 1; j < statements_.size(); ++j) {
      const auto sentence = common_sentence(statements_[i], statements_[j]);
      if (!sentence) continue;
      const Statement si = canonical(statement_of(statements_[i], *sentence));
      const Statement sj = canonical(statement_of(statements_[j], *sentence));
      if (!(si == sj)) {
        throw ValidationError(location(source_name, statements_[i].line_no) + " and line " +
                              std::to_string(statements_[j].line_no) +
                              ": ambiguous pair; both can produce \"" + *sentence + "\"");
      }
    }
  }

  // Question templates must agree on the extracted ordered pair.
  for (std::size_t i = 0; i < questions_.size(); ++i) {
    for (std::size_t j = i + 1; j < questions_.size(); ++j) {
      const auto sentence = common_sentence(questions_[i], questions_[j]);
      if (!sentence) continue;
      const auto [h1i, h2i] = hole_positions(questions_[i]);
      const auto [h1j, h2j] = hole_positions(questions_[j]);
      if (extract(questions_[i], (*sentence)[h1i], (*sentence)[h2i]) !=
          extract(questions_[j], (*sentence)[h1j], (*sentence)[h2j])) {
        throw ValidationError(location(source_name, questions_[i].line_no) + " and line " +
                              std::to_string(questions_[j].line_no) +
                              ": ambiguous question pair");
      }
    }
  }
}

void TemplateSet::build_indexes() {
  by_relation_.assign(kAllRelations.size(), {});
  for (std::size_t i = 0; i < statements_.size(); ++i) {
    by_relation_[static_cast<std::size_t>(statements_[i].rel)].push_back(static_cast<int>(i));
    stmt_by_size_[statements_[i].rendered_size()].push_back(static_cast<int>(i));
  }
  for (std::size_t i = 0; i < questions_.size(); ++i) {
    question_by_size_[questions_[i].rendered_size()].push_back(static_cast<int>(i));
  }
}

const TemplateSet& TemplateSet::bundled_default() {
  static const TemplateSet set = load_text(kDefaultTemplatesText, "<bundled>");
  return set;
}

std::map<std::string, int> TemplateSet::counts() const {
  std::map<std::string, int> out;
  for (Relation r : kAllRelations) out[std::string(relation_name(r))] = 0;
  for (const Template& t : statements_) ++out[std::string(relation_name(t.rel))];
  out["question"] = static_cast<int>(questions_.size());
  return out;
}

std::string TemplateSet::render_statement(const Statement& s, Pcg32& rng) const {
  // Fair coin: describe as given, or flipped through the inverse relation.
  Statement surface = s;
  if (rng.bounded(2) == 1) {
    surface = {s.object, inverse_of(s.rel), s.subject};
  }
  const auto& group = by_relation_[static_cast<std::size_t>(surface.rel)];
  const Template& t = statements_[static_cast<std::size_t>(
      group[rng.bounded(static_cast<std::uint32_t>(group.size()))])];
  return t.render(surface.subject, surface.object);
}

std::string TemplateSet::render_question(Entity first, Entity second, Pcg32& rng) const {
  const Template& t =
      questions_[rng.bounded(static_cast<std::uint32_t>(questions_.size()))];
  return t.render(first, second);
}

StoryText TemplateSet::render_story(const SampleSpec& spec, Pcg32& rng) const {
  StoryText out;
  out.sentences.reserve(spec.graph.edges.size());
  for (const Edge& e : spec.graph.edges) {
    out.sentences.push_back(render_statement({e.subject, e.rel, e.object}, rng));
  }
  rng.shuffle(out.sentences);
  out.question = render_question(spec.question_first, spec.question_second, rng);
  return out;
}

std::optional<Statement> TemplateSet::try_parse_statement(std::string_view sentence,
                                                          int* template_index) const {
  const auto bucket = stmt_by_size_.find(sentence.size());
  if (bucket == stmt_by_size_.end()) return std::nullopt;
  for (int idx : bucket->second) {
    const Template& t = statements_[static_cast<std::size_t>(idx)];
    if (const auto ab = t.match(sentence)) {
      if (template_index != nullptr) *template_index = idx;
      return canonical({ab->first, t.rel, ab->second});
    }
  }
  return std::nullopt;
}

Statement TemplateSet::parse_statement(std::string_view sentence) const {
  if (const auto s = try_parse_statement(sentence)) return *s;
  throw ParseFailure("no template matches: \"" + std::string(sentence) + "\"");
}

std::optional<std::pair<Entity, Entity>> TemplateSet::try_parse_question(
    std::string_view question, int* template_index) const {
  const auto bucket = question_by_size_.find(question.size());
  if (bucket == question_by_size_.end()) return std::nullopt;
  for (int idx : bucket->second) {
    const Template& t = questions_[static_cast<std::size_t>(idx)];
    if (const auto ab = t.match(question)) {
      if (template_index != nullptr) *template_index = idx;
      return ab;
    }
  }
  return std::nullopt;
}

std::pair<Entity, Entity> TemplateSet::parse_question(std::string_view question) const {
  if (const auto q = try_parse_question(question)) return *q;
  throw ParseFailure("no question template matches: \"" + std::string(question) + "\"");
}

ParsedStory TemplateSet::parse_story(std::span<const std::string> sentences,
                                     std::string_view question) const {
  ParsedStory out;
  out.edges.reserve(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const auto s = try_parse_statement(sentences[i]);
    if (!s) {
      throw ParseFailure("sentence " + std::to_string(i) + " unparseable: \"" + sentences[i] +
                         "\"");
    }
    out.edges.push_back(*s);
  }
  std::tie(out.question_first, out.question_second) = parse_question(question);
  return out;
}

}  // namespace stepgame
