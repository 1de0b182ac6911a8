#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "arena/chat.hpp"
#include "arena/crawler.hpp"
#include "arena/infotree.hpp"

namespace arena {

struct Task {
  std::string question;
  std::string word_limit_instruction;
  std::vector<std::string> checklist_width;
  std::vector<std::string> checklist_depth;
  std::string rationale;
  TreePath source_path;
  int depth = 0;
  int width = 2;

  bool operator==(const Task&) const = default;

  json to_json() const;
  static Task from_json(const json& doc);
};

// Replaces every {{name}} in `tmpl`. Substituted text is not rescanned.
// Throws kUnfilledPlaceholder for a name missing from `values`.
std::string render_template(std::string_view tmpl,
                            const std::map<std::string, std::string>& values);

const std::string& task_prompt_template();

// "[Node id] title / URL / Relation / Content" blocks separated by blank lines.
std::string serialize_nodes(const std::vector<InfoNode>& nodes,
                            std::size_t content_chars = 2000);

std::string assemble_task_prompt(const std::string& root_topic,
                                 const std::vector<InfoNode>& deep_context,
                                 const std::vector<InfoNode>& wide_context,
                                 const std::string& word_limit);

// Parses an examiner reply (JSON possibly wrapped in prose or fences).
// A missing word_limit_instruction falls back to word_limit(depth, width).
Task parse_task(const std::string& raw, const TreePath& path, int depth, int width);

// Leak checks against the tree; returns one message per violation.
std::vector<std::string> lint_decontextualization(const Task& task,
                                                  const InfoTree& tree);

struct WordLimitParams {
  int base = 120;
  int per_width = 80;
  int per_depth = 40;
};

std::string word_limit(int depth, int width, const WordLimitParams& params = {});

// Asks the examiner for one relation label per link. Any malformed reply
// yields "related" for the whole batch.
std::vector<std::string> label_relations(ChatClient& examiner,
                                         const FetchedPage& parent,
                                         const std::vector<Link>& links);

RelationLabeler examiner_labeler(ChatClient& examiner);

struct TaskGenOptions {
  int retry_budget = 2;
  std::size_t content_chars = 2000;
  WordLimitParams word_limit;
  Decoding decoding;
};

// Ensures the focal cohort holds `width` nodes (expanding through the
// crawler when short), then prompts the examiner until a reply parses and
// passes the lint, or the retry budget runs out.
Task generate_task(ChatClient& examiner, InfoTree& tree, const TreePath& path,
                   int width, Crawler& crawler, const TaskGenOptions& options = {});

}  // namespace arena
