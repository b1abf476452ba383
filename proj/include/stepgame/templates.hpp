// Copyright (c) 2026 The stepgame authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stepgame/generator.hpp"
#include "stepgame/relations.hpp"
#include "stepgame/rng.hpp"

namespace stepgame {

// subject is `rel` of object.
struct Statement {
  Entity subject;
  Relation rel;
  Entity object;

  friend bool operator==(const Statement& a, const Statement& b) {
    return a.subject == b.subject && a.rel == b.rel && a.object == b.object;
  }
};

// Canonical direction: subject name < object name, flipping through
// inverse_of when needed. (X, left, Y) and (Y, right, X) canonicalize to the
// same statement.
inline Statement canonical(Statement s) {
  if (s.subject > s.object) return {s.object, inverse_of(s.rel), s.subject};
  return s;
}

// One surface pattern. {A} is the subject located `rel` relative to {B};
// the placeholders may appear in either order in the text.
struct Template {
  Relation rel = Relation::Top;  // unused for question templates
  std::string pattern;
  int line_no = 0;

  // Compiled form: literal pieces around the two single-letter holes, in
  // surface order. a_first says whether the {A} hole comes first.
  std::string pre, mid, post;
  bool a_first = true;

  std::size_t rendered_size() const { return pre.size() + mid.size() + post.size() + 2; }

  std::string render(Entity a, Entity b) const {
    std::string out;
    out.reserve(rendered_size());
    out.append(pre);
    out.push_back(a_first ? a : b);
    out.append(mid);
    out.push_back(a_first ? b : a);
    out.append(post);
    return out;
  }

  // Returns the (A, B) entities if the sentence matches, nullopt otherwise.
  std::optional<std::pair<Entity, Entity>> match(std::string_view sentence) const;
};

struct StoryText {
  std::vector<std::string> sentences;
  std::string question;
};

struct ParsedStory {
  std::vector<Statement> edges;  // canonical, in sentence order
  Entity question_first;
  Entity question_second;
};

// A validated, immutable template collection. Loading rejects malformed
// records and any pair of templates that could render the same sentence
// from structurally different statements.
class TemplateSet {
 public:
  static TemplateSet load_file(const std::string& path);
  static TemplateSet load_text(std::string_view text, std::string_view source_name);
  // The compiled-in default set.
  static const TemplateSet& bundled_default();

  // Per-relation statement counts plus a "question" entry.
  std::map<std::string, int> counts() const;
  std::uint64_t checksum() const { return checksum_; }
  const std::string& source_name() const { return source_name_; }
  std::size_t statement_count() const { return statements_.size(); }
  std::size_t question_count() const { return questions_.size(); }

  // Renders (subject, rel, object) as-is or, on a fair coin, flipped as
  // (object, inverse rel, subject); the template is then chosen uniformly
  // within the surviving relation's list. Draw order: coin, then template.
  std::string render_statement(const Statement& s, Pcg32& rng) const;

  // Question direction is never flipped: it asks for `first` relative to
  // `second`.
  std::string render_question(Entity first, Entity second, Pcg32& rng) const;

  // One sentence per graph edge (in edge order), then a full shuffle, then
  // the question. All draws come from `rng` in that documented order.
  StoryText render_story(const SampleSpec& spec, Pcg32& rng) const;

  // Unique canonical statement whose rendering equals the sentence.
  // Throws ParseFailure when nothing matches.
  Statement parse_statement(std::string_view sentence) const;
  std::optional<Statement> try_parse_statement(std::string_view sentence,
                                               int* template_index = nullptr) const;

  std::pair<Entity, Entity> parse_question(std::string_view question) const;
  std::optional<std::pair<Entity, Entity>> try_parse_question(std::string_view question,
                                                              int* template_index = nullptr) const;

  // Parses every sentence plus the question; reports the first unparseable
  // sentence with its index.
  ParsedStory parse_story(std::span<const std::string> sentences,
                          std::string_view question) const;

  const std::vector<Template>& statement_templates() const { return statements_; }
  const std::vector<Template>& question_templates() const { return questions_; }

 private:
  TemplateSet() = default;
  void build_indexes();
  void validate(std::string_view source_name) const;

  std::vector<Template> statements_;
  std::vector<Template> questions_;
  std::vector<std::vector<int>> by_relation_;               // statement indexes per relation
  std::map<std::size_t, std::vector<int>> stmt_by_size_;    // rendered size -> statement indexes
  std::map<std::size_t, std::vector<int>> question_by_size_;
  std::uint64_t checksum_ = 0;
  std::string source_name_;
};

}  // namespace stepgame
