#include "arena/taskgen.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "arena/error.hpp"
#include "fmt/format.h"
#include "spdlog/spdlog.h"

namespace arena {
namespace {

const char* const kTaskTemplate = R"TPL(# TASK: Generate a "Deep & Wide" Search Evaluation Query

You are an expert at creating complex, multi-hop search queries designed to test the limits of Search Agents. Your goal is to synthesize a question that requires **Logical Reasoning (Deep)** to identify the subjects and **Broad Information Aggregation (Wide)** to answer fully.

--- 1. THE HIDDEN KNOWLEDGE (Source Material) ---
*Note: This content is hidden from the test taker. It is only for you to formulate the question and the grading criteria.*

**OVERALL DOMAIN/TOPIC**: "{{root_topic}}"
**A. Reasoning Chain (Background/Context)**:
{{reasoning_nodes}}
**B. Target Answers (The Facts to Retrieve)**:
{{target_nodes}}

--- 2. QUESTION GENERATION STEPS (READ CAREFULLY) ---
**Rule 1: ABSOLUTE GROUNDING - CRITICAL**
- **YOU MUST** generate the question based **ONLY** on the specific entities and facts found in the [Hidden Knowledge] above.
- **STRICT PROHIBITION:** Do NOT ignore the provided text.
- **Relevance**: The question MUST be relevant to the **Overall Domain/Topic** ("{{root_topic}}"). Do not hallucinate unrelated topics.

**Rule 2: COMPLETE DE-CONTEXTUALIZATION (No Leaking)**
- **FORBIDDEN:** You MUST NOT mention the specific filename, website title, directory name, or document header found in the source.
- **REQUIRED:** Treat the provided text as just *one instance* of a universal fact. Ask about the *entities themselves*, not about the *document* describing them.
- **Litmus Test:** If the user needs the specific JSON file you read to understand the question, YOU FAILED. The question must be solvable using Google/Bing to find the *original primary sources*.

**STEP 1: Deep Reasoning (The Filter)**
- Analyze the [Reasoning Chain] to identify the specific logic, condition, or category that groups the target entities together.
- **RULE**: Do NOT mention the specific names of the [Target Entities] in the question.
- **RULE**: Use the [Reasoning Chain] logic to strictly define the group.

**STEP 2: Wide Aggregation (The Scope)**
- If the [Target Answers] contain multiple entities, the question MUST require reading and comparing information from **ALL** of them.
- The answer must not be resolvable by finding a single document; it must require aggregating details across all identified targets.

**STEP 3: Synthesis (The Deep & Wide Question)**
- Combine Step 1 and Step 2 into a single, cohesive natural language question.
- **CRITICAL**: Ensure the question targets **Publicly Verifiable Facts**. Do not ask about obscure details that exist *only* within the specific phrasing of the provided source text. The question must be answerable by searching external, general web sources.

--- 3. CHECKLIST DEFINITIONS (CRITICAL) ---
**STEP 1 Draft the Gold Standard Answer**: Formulate a complete answer based on the [Hidden Knowledge].
**STEP 2 Extract Checklists**: Deconstruct the answer into specific verification points.
    - **Checklist Width (Completeness & Details)**: **Content**: The Specific Attributes/Facts requested in the query. **Purpose**: Once the entity is found, did the agent gather *all* the requested scattered details?
    - **Checklist Depth (Identity & Logic)**: **Content**: The Correct Entity Names + The Logic Validation. **Purpose**: Did the agent use the reasoning chain to find the *correct* person/thing?

--- 4. OUTPUT FORMAT (JSON) ---
Return the result in the following JSON format:
{
    "question": "The final Deep & Wide search query",
    "word_limit_instruction": "{{word_limit}}",
    "checklist_width": [
        "Specific Detail A for Entity 1",
        "Specific Detail B for Entity 1",
        ...
    ],
    "checklist_depth": [
        "Target Entity 1 Name + Logic Proof",
        ...
    ],
    "rationale": "Briefly explain how the question uses logic to mask entities (Deep) and requests scattered info (Wide)."
}
)TPL";

const char* const kLabelTemplate = R"TPL(You are annotating hyperlinks found on a web page so they can be grouped by meaning.

Page title: {{title}}
Page URL: {{url}}

For each numbered link below, give a short lowercase noun phrase naming the relation between the page and the link target (for example "varieties", "successors", "members"). Links that belong to the same group must share the same label.

{{links}}

Return JSON only: {"labels": ["label for link 1", "label for link 2", ...]} with exactly {{count}} labels.
)TPL";

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

// Cuts at a UTF-8 boundary.
std::string truncate_utf8(const std::string& s, std::size_t limit) {
  if (s.size() <= limit) return s;
  std::size_t cut = limit;
  while (cut > 0 && (static_cast<unsigned char>(s[cut]) & 0xC0) == 0x80) --cut;
  return s.substr(0, cut) + " ...";
}

std::vector<std::string> checklist_field(const json& doc, const char* name) {
  if (!doc.contains(name) || doc[name].is_null())
    throw Error(ErrorCode::kMissingField, std::string("task reply lacks '") + name + "'");
  const json& field = doc[name];
  std::vector<std::string> items;
  auto push = [&](const json& item) {
    std::string text;
    if (item.is_string()) {
      text = item.get<std::string>();
    } else if (item.is_number() || item.is_boolean()) {
      text = item.dump();
    } else {
      throw Error(ErrorCode::kMissingField,
                  std::string("'") + name + "' holds a non-text item");
    }
    auto b = text.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return;
    auto e = text.find_last_not_of(" \t\r\n");
    items.push_back(text.substr(b, e - b + 1));
  };
  if (field.is_array()) {
    for (const auto& item : field) push(item);
  } else {
    push(field);
  }
  if (items.empty())
    throw Error(ErrorCode::kEmptyChecklist, std::string("'") + name + "' is empty");
  return items;
}

const std::set<std::string>& stopwords() {
  static const std::set<std::string> words = {
      "a",    "an",   "the",  "of",   "and",  "or",   "in",   "on",  "at",
      "to",   "for",  "by",   "with", "from", "as",   "is",   "are", "was",
      "be",   "it",   "its",  "this", "that", "vs",   "de",   "la",  "le",
      "page", "home", "wiki", "main", "index"};
  return words;
}

int content_words(std::string_view title) {
  int count = 0;
  std::string word;
  auto flush = [&] {
    if (word.empty()) return;
    bool alpha = std::any_of(word.begin(), word.end(),
                             [](unsigned char c) { return std::isalpha(c); });
    if (alpha && word.size() >= 2 && !stopwords().count(word)) ++count;
    word.clear();
  };
  for (char c : title) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '\'') {
      word += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else {
      flush();
    }
  }
  flush();
  return count;
}

std::vector<InfoNode> collect(const InfoTree& tree, const std::vector<NodeId>& ids) {
  std::vector<InfoNode> out;
  out.reserve(ids.size());
  for (NodeId id : ids) out.push_back(tree.node(id));
  return out;
}

}  // namespace

json Task::to_json() const {
  json path = json::array();
  for (NodeId id : source_path.nodes) path.push_back(to_int(id));
  return {{"question", question},
          {"word_limit_instruction", word_limit_instruction},
          {"checklist_width", checklist_width},
          {"checklist_depth", checklist_depth},
          {"rationale", rationale},
          {"source_path", path},
          {"depth", depth},
          {"width", width}};
}

Task Task::from_json(const json& doc) {
  try {
    Task t;
    t.question = doc.at("question").get<std::string>();
    t.word_limit_instruction = doc.at("word_limit_instruction").get<std::string>();
    t.checklist_width = doc.at("checklist_width").get<std::vector<std::string>>();
    t.checklist_depth = doc.at("checklist_depth").get<std::vector<std::string>>();
    t.rationale = doc.value("rationale", "");
    for (const auto& id : doc.at("source_path")) t.source_path.nodes.push_back(NodeId{id.get<int>()});
    t.depth = doc.at("depth").get<int>();
    t.width = doc.at("width").get<int>();
    return t;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMissingField, std::string("task record: ") + e.what());
  }
}

std::string render_template(std::string_view tmpl,
                            const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(tmpl.size() + 1024);
  std::size_t i = 0;
  while (i < tmpl.size()) {
    const auto open = tmpl.find("{{", i);
    if (open == std::string_view::npos) {
      out.append(tmpl.substr(i));
      break;
    }
    const auto close = tmpl.find("}}", open + 2);
    if (close == std::string_view::npos) {
      out.append(tmpl.substr(i));
      break;
    }
    const std::string name(tmpl.substr(open + 2, close - open - 2));
    auto it = values.find(name);
    if (it == values.end())
      throw Error(ErrorCode::kUnfilledPlaceholder, "no value for {{" + name + "}}");
    out.append(tmpl.substr(i, open - i));
    out.append(it->second);
    i = close + 2;
  }
  return out;
}

const std::string& task_prompt_template() {
  static const std::string tmpl = kTaskTemplate;
  return tmpl;
}

std::string serialize_nodes(const std::vector<InfoNode>& nodes,
                            std::size_t content_chars) {
  std::string out;
  for (const auto& node : nodes) {
    if (!out.empty()) out += "\n";
    out += fmt::format("[Node {}] {}\nURL: {}\nRelation: {}\nContent: {}\n",
                       to_int(node.id), node.title, node.url,
                       node.relation.empty() ? "root" : node.relation,
                       truncate_utf8(node.content, content_chars));
  }
  return out;
}

std::string assemble_task_prompt(const std::string& root_topic,
                                 const std::vector<InfoNode>& deep_context,
                                 const std::vector<InfoNode>& wide_context,
                                 const std::string& word_limit) {
  if (wide_context.empty())
    throw Error(ErrorCode::kEmptyContext, "no target nodes for the task");
  return render_template(task_prompt_template(),
                         {{"root_topic", root_topic},
                          {"reasoning_nodes", serialize_nodes(deep_context)},
                          {"target_nodes", serialize_nodes(wide_context)},
                          {"word_limit", word_limit}});
}

Task parse_task(const std::string& raw, const TreePath& path, int depth, int width) {
  const json doc = extract_json_object(raw);
  Task task;
  if (!doc.contains("question") || !doc["question"].is_string() ||
      doc["question"].get<std::string>().find_first_not_of(" \t\r\n") == std::string::npos)
    throw Error(ErrorCode::kMissingField, "task reply lacks 'question'");
  task.question = doc["question"].get<std::string>();
  task.checklist_width = checklist_field(doc, "checklist_width");
  task.checklist_depth = checklist_field(doc, "checklist_depth");
  if (doc.contains("word_limit_instruction") && doc["word_limit_instruction"].is_string() &&
      !doc["word_limit_instruction"].get<std::string>().empty()) {
    task.word_limit_instruction = doc["word_limit_instruction"].get<std::string>();
  } else {
    task.word_limit_instruction = word_limit(depth, width);
  }
  if (doc.contains("rationale") && doc["rationale"].is_string())
    task.rationale = doc["rationale"].get<std::string>();
  task.source_path = path;
  task.depth = depth;
  task.width = width;
  return task;
}

std::vector<std::string> lint_decontextualization(const Task& task,
                                                  const InfoTree& tree) {
  std::vector<std::string> violations;
  const std::string question = lower(task.question);
  std::set<std::string> seen;
  // The overall topic is given to the examiner openly, so its own words
  // (and URL slugs spelling them) are not leaks.
  auto squash = [](const std::string& text) {
    std::string out;
    for (char c : text)
      if (std::isalnum(static_cast<unsigned char>(c))) out += c;
    return out;
  };
  const std::string topic = squash(lower(tree.topic()));
  auto flag = [&](const std::string& kind, const std::string& token) {
    if (token.empty() || !seen.insert(kind + ":" + token).second) return;
    if (const auto t = squash(token); !t.empty() && topic.find(t) != std::string::npos) return;
    if (question.find(token) != std::string::npos)
      violations.push_back(fmt::format("question leaks {} \"{}\"", kind, token));
  };
  for (const auto& node : tree.nodes()) {
    if (content_words(node.title) >= 2) flag("title", lower(node.title));
    for (const auto& segment : url_path_segments(node.url))
      if (segment.size() >= 5) flag("path segment", lower(segment));
  }
  if (!tree.empty()) {
    std::string host = lower(url_host(tree.node(tree.root()).url));
    flag("domain", host);
    if (host.starts_with("www.")) flag("domain", host.substr(4));
  }
  return violations;
}

std::string word_limit(int depth, int width, const WordLimitParams& params) {
  if (depth < 0 || width < 2)
    throw Error(ErrorCode::kInvalidArgument, "word_limit needs depth >= 0 and width >= 2");
  return fmt::format("Maximum {} words",
                     params.base + params.per_width * width + params.per_depth * depth);
}

std::vector<std::string> label_relations(ChatClient& examiner,
                                         const FetchedPage& parent,
                                         const std::vector<Link>& links) {
  if (links.empty()) return {};
  std::string listing;
  for (std::size_t i = 0; i < links.size(); ++i) {
    listing += fmt::format("{}. \"{}\" -> {}\n   context: {}\n", i + 1, links[i].anchor,
                           links[i].url, truncate_utf8(links[i].context, 300));
  }
  const std::string prompt =
      render_template(kLabelTemplate, {{"title", parent.title},
                                       {"url", parent.url},
                                       {"links", listing},
                                       {"count", std::to_string(links.size())}});
  std::vector<std::string> fallback(links.size(), kDefaultRelation);
  try {
    const auto reply = examiner.chat({prompt, Decoding{}});
    json labels;
    try {
      labels = extract_json_object(reply.text).at("labels");
    } catch (const json::exception&) {
      return fallback;
    }
    if (!labels.is_array() || labels.size() != links.size()) return fallback;
    std::vector<std::string> out;
    for (const auto& label : labels) {
      if (!label.is_string()) return fallback;
      out.push_back(clean_relation(label.get<std::string>()));
    }
    return out;
  } catch (const Error& e) {
    spdlog::debug("relation labelling fell back: {}", e.what());
    return fallback;
  }
}

RelationLabeler examiner_labeler(ChatClient& examiner) {
  return [&examiner](const FetchedPage& parent, const std::vector<Link>& links) {
    return label_relations(examiner, parent, links);
  };
}

Task generate_task(ChatClient& examiner, InfoTree& tree, const TreePath& path,
                   int width, Crawler& crawler, const TaskGenOptions& options) {
  if (!tree.is_valid_path(path))
    throw Error(ErrorCode::kInvalidArgument, "path is not a root chain of the tree");
  if (width < 2) throw Error(ErrorCode::kInvalidArgument, "width must be >= 2");
  const NodeId focal = path.focal();
  if (tree.needs_width_expansion(focal, width)) crawler.expand_width(tree, focal, width);
  const auto cohort = tree.siblings(focal, static_cast<std::size_t>(width));
  if (static_cast<int>(cohort.size()) < width)
    throw Error(ErrorCode::kExpansionExhausted,
                fmt::format("cohort of node {} holds {} of {} nodes", to_int(focal),
                            cohort.size(), width));

  const int depth = path.depth();
  const std::string limit = word_limit(depth, width, options.word_limit);
  const std::string prompt =
      render_template(task_prompt_template(),
                      {{"root_topic", tree.topic()},
                       {"reasoning_nodes",
                        serialize_nodes(collect(tree, tree.ancestors(focal)), options.content_chars)},
                       {"target_nodes", serialize_nodes(collect(tree, cohort), options.content_chars)},
                       {"word_limit", limit}});

  Error last(ErrorCode::kParseFailure, "no attempt made");
  for (int attempt = 0; attempt <= options.retry_budget; ++attempt) {
    const auto reply = examiner.chat({prompt, options.decoding});
    Task task;
    try {
      task = parse_task(reply.text, path, depth, width);
    } catch (const Error& e) {
      last = Error(ErrorCode::kParseFailure, e.what());
      spdlog::debug("task attempt {} unparseable: {}", attempt + 1, e.what());
      continue;
    }
    if (task.word_limit_instruction.empty()) task.word_limit_instruction = limit;
    const auto violations = lint_decontextualization(task, tree);
    if (violations.empty()) return task;
    last = Error(ErrorCode::kLintFailure, violations.front());
    spdlog::debug("task attempt {} leaks: {}", attempt + 1, violations.front());
  }
  throw last;
}

}  // namespace arena
