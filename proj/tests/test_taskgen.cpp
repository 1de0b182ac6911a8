#include <gtest/gtest.h>

#include <regex>

#include "arena/taskgen.hpp"
#include "checks.hpp"
#include "support.hpp"

namespace arena {
namespace {

int limit_words(const std::string& instruction) {
  std::smatch m;
  EXPECT_TRUE(std::regex_search(instruction, m, std::regex("(\\d+)")));
  return std::stoi(m[1]);
}

TreePath leaf_path(const InfoTree& tree, int leaf) {
  return tree.path_to(*tree.find_url("https://consoles.example.com/hub/lineup/" + std::to_string(leaf)));
}

// ---- Templates ------------------------------------------------------------------

TEST(RenderTemplate, FillsEveryPlaceholder) {
  EXPECT_EQ(render_template("{{a}} and {{b}}, {{a}}", {{"a", "x"}, {"b", "y"}}), "x and y, x");
}

TEST(RenderTemplate, SubstitutedTextIsNotRescanned) {
  EXPECT_EQ(render_template("[{{a}}]", {{"a", "{{b}}"}}), "[{{b}}]");
}

TEST(RenderTemplate, MissingValueIsAnError) {
  EXPECT_ARENA_ERROR(render_template("{{a}} {{zz}}", {{"a", "x"}}), ErrorCode::kUnfilledPlaceholder);
}

TEST(RenderTemplate, UnclosedBracesStayLiteral) {
  EXPECT_EQ(render_template("keep {{ this", {}), "keep {{ this");
}

TEST(TaskPrompt, TemplateCarriesTheFourSections) {
  const auto& t = task_prompt_template();
  for (const char* marker :
       {"--- 1. THE HIDDEN KNOWLEDGE (Source Material) ---",
        "--- 2. QUESTION GENERATION STEPS (READ CAREFULLY) ---",
        "--- 3. CHECKLIST DEFINITIONS (CRITICAL) ---", "--- 4. OUTPUT FORMAT (JSON) ---",
        "**Rule 2: COMPLETE DE-CONTEXTUALIZATION (No Leaking)**", "{{root_topic}}",
        "{{reasoning_nodes}}", "{{target_nodes}}", "{{word_limit}}"}) {
    EXPECT_NE(t.find(marker), std::string::npos) << marker;
  }
}

TEST(TaskPrompt, GoldenRendering) {
  const InfoTree tree = fx::flat_tree(4);
  const TreePath path = leaf_path(tree, 1);
  std::vector<InfoNode> deep, wide;
  for (NodeId id : tree.ancestors(path.focal())) deep.push_back(tree.node(id));
  for (NodeId id : tree.siblings(path.focal(), 3)) wide.push_back(tree.node(id));
  const std::string prompt = assemble_task_prompt(tree.topic(), deep, wide, word_limit(2, 3));
  EXPECT_EQ(fx::golden_mismatch("task_prompt.txt", prompt), "");
  EXPECT_EQ(prompt.find("{{"), std::string::npos);
}

TEST(TaskPrompt, SerializedNodeBlocks) {
  const InfoTree tree = fx::flat_tree(2);
  const std::string text = serialize_nodes({tree.node(tree.root()), tree.node(NodeId{2})});
  EXPECT_EQ(text,
            "[Node 0] Portable Gaming Overview\nURL: https://consoles.example.com/hub\n"
            "Relation: root\nContent: Overview of portable systems.\n\n"
            "[Node 2] Unit 0\nURL: https://consoles.example.com/hub/lineup/0\n"
            "Relation: members\nContent: Fact: unit 0 exists.\n");
  InfoNode long_node = tree.node(NodeId{2});
  long_node.content = std::string(50, 'x');
  EXPECT_NE(serialize_nodes({long_node}, 10).find("Content: xxxxxxxxxx ...\n"), std::string::npos);
}

TEST(TaskPrompt, EmptyReasoningChainIsAllowed) {
  const InfoTree tree = fx::flat_tree(2);
  const std::string prompt =
      assemble_task_prompt("topic", {}, {tree.node(NodeId{2})}, word_limit(0, 2));
  EXPECT_NE(prompt.find("**A. Reasoning Chain (Background/Context)**:\n\n**B. Target Answers"),
            std::string::npos);
}

TEST(TaskPrompt, EmptyTargetsRejected) {
  const InfoTree tree = fx::flat_tree(2);
  EXPECT_ARENA_ERROR(assemble_task_prompt("topic", {tree.node(tree.root())}, {}, "Maximum 200 words"),
                     ErrorCode::kEmptyContext);
}

// ---- Word limits --------------------------------------------------------------------

TEST(WordLimit, KnownValues) {
  EXPECT_EQ(word_limit(2, 2), "Maximum 360 words");
  EXPECT_EQ(word_limit(0, 2), "Maximum 280 words");
  EXPECT_EQ(word_limit(3, 5, WordLimitParams{100, 50, 10}), "Maximum 380 words");
  EXPECT_ARENA_ERROR(word_limit(1, 1), ErrorCode::kInvalidArgument);
  EXPECT_ARENA_ERROR(word_limit(-1, 3), ErrorCode::kInvalidArgument);
}

TEST(WordLimit, StrictlyIncreasingInDepthAndWidth) {
  for (int d = 0; d < 8; ++d) {
    for (int w = 2; w < 12; ++w) {
      const int here = limit_words(word_limit(d, w));
      EXPECT_LT(here, limit_words(word_limit(d + 1, w)));
      EXPECT_LT(here, limit_words(word_limit(d, w + 1)));
    }
  }
}

// ---- Parsing replies ------------------------------------------------------------------

TEST(ParseTask, ExampleOneWithProseAndFence) {
  const json doc = {
      {"question",
       "Locate the gymnastics organization in the New York/New Jersey area that structures its "
       "competitive teams into three specific tiers. Provide the name of this organization, the "
       "specific name of the high-performance program, and a list of all the cities where they "
       "currently operate gyms."},
      {"word_limit_instruction", "Maximum 520 words"},
      {"checklist_width",
       {"High-Performance Program Name: Junior Olympic Program", "City 1: Centereach",
        "City 2: Garden City", "City 3: Huntington", "City 4: Levittown", "City 5: Rocky Point",
        "City 6: Short Hills", "City 7: Smithtown"}},
      {"checklist_depth", {"Target Entity: Gold Medal Gymnastics"}},
      {"rationale", "Tiers identify the gym; cities are scattered."}};
  const std::string raw = "Here is the task.\n```json\n" + doc.dump(4) + "\n```\nDone.";
  const TreePath path{{NodeId{0}, NodeId{1}, NodeId{2}}};
  const Task t = parse_task(raw, path, 2, 8);
  EXPECT_EQ(t.checklist_width.size(), 8u);
  EXPECT_EQ(t.checklist_width.front(), "High-Performance Program Name: Junior Olympic Program");
  EXPECT_EQ(t.checklist_width.back(), "City 7: Smithtown");
  EXPECT_EQ(t.checklist_depth, std::vector<std::string>{"Target Entity: Gold Medal Gymnastics"});
  EXPECT_EQ(t.word_limit_instruction, "Maximum 520 words");
  EXPECT_EQ(t.source_path, path);
  EXPECT_EQ(t.depth, 2);
  EXPECT_EQ(t.width, 8);
}

TEST(ParseTask, EmptyReplyIsMalformedJson) {
  EXPECT_ARENA_ERROR(parse_task("", {}, 1, 2), ErrorCode::kMalformedJson);
  EXPECT_ARENA_ERROR(parse_task("no braces here", {}, 1, 2), ErrorCode::kMalformedJson);
}

TEST(ParseTask, ScalarChecklistIsCoerced) {
  const Task t = parse_task(
      R"({"question":"q?","checklist_width":"single detail","checklist_depth":["entity", 7, "  "]})",
      {}, 1, 2);
  EXPECT_EQ(t.checklist_width, std::vector<std::string>{"single detail"});
  EXPECT_EQ(t.checklist_depth, (std::vector<std::string>{"entity", "7"}));
  // No instruction in the reply: computed from depth and width.
  EXPECT_EQ(t.word_limit_instruction, word_limit(1, 2));
  EXPECT_EQ(t.rationale, "");
}

TEST(ParseTask, MissingAndEmptyFields) {
  EXPECT_ARENA_ERROR(parse_task(R"({"question":"q","checklist_width":["a"]})", {}, 1, 2),
                     ErrorCode::kMissingField);
  EXPECT_ARENA_ERROR(parse_task(R"({"checklist_width":["a"],"checklist_depth":["b"]})", {}, 1, 2),
                     ErrorCode::kMissingField);
  EXPECT_ARENA_ERROR(parse_task(R"({"question":"  ","checklist_width":["a"],"checklist_depth":["b"]})",
                                {}, 1, 2),
                     ErrorCode::kMissingField);
  EXPECT_ARENA_ERROR(parse_task(R"({"question":"q","checklist_width":[],"checklist_depth":["b"]})",
                                {}, 1, 2),
                     ErrorCode::kEmptyChecklist);
}

TEST(TaskRecord, JsonRoundTrip) {
  Task t = parse_task(fx::task_reply(), TreePath{{NodeId{0}, NodeId{1}}}, 1, 2);
  t.rationale = "r";
  EXPECT_EQ(Task::from_json(t.to_json()), t);
  json broken = t.to_json();
  broken.erase("checklist_depth");
  EXPECT_ARENA_ERROR(Task::from_json(broken), ErrorCode::kMissingField);
}

// ---- Leak lint --------------------------------------------------------------------------

Task question_task(const std::string& question) {
  Task t;
  t.question = question;
  t.checklist_width = {"w"};
  t.checklist_depth = {"d"};
  return t;
}

TEST(Lint, RootTitleLeaks) {
  const InfoTree tree = fx::flat_tree(3);
  const auto v = lint_decontextualization(
      question_task("According to the portable gaming overview, which units exist?"), tree);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].find("portable gaming overview"), std::string::npos);
}

TEST(Lint, CleanQuestionPasses) {
  const InfoTree tree = fx::flat_tree(3);
  EXPECT_TRUE(lint_decontextualization(
                  question_task("Which portable systems from the early nineties fit the clues?"), tree)
                  .empty());
}

TEST(Lint, ExampleFiveReviewQuestionIsClean) {
  InfoTree tree("1988 album reviews", "https://www.rollingstone.com/reviews/archive",
                "Album Review Archive", "Reviews by year.");
  const NodeId year = tree.add_child(tree.root(), "https://www.rollingstone.com/reviews/archive/1988",
                                     "Reviews Published in 1988", "", "years");
  tree.add_child(year, "https://www.rollingstone.com/reviews/lp/land-of-dreams-19881117",
                 "Land of Dreams Review", "", "reviews");
  tree.add_child(year, "https://www.rollingstone.com/reviews/lp/nothings-shocking-19881117",
                 "Nothing's Shocking Review", "", "reviews");
  const std::string question =
      "In a 1988 review by Steve Pond (RS 537), two distinct Los Angeles-bred acts were compared: "
      "one described as an \"unprolific\" artist making \"immaculate pop music\" with lushness "
      "borrowed from soundtracks, and the other a \"young and restless\" band labeled the \"true "
      "heir to Led Zeppelin\" but stripped of \"fairy-tale whimsy.\" Despite their differences, the "
      "reviewer noted that both artists' respective albums from that year were populated by "
      "\"recognizable, real people.\" Identify these two acts and their corresponding albums. Then, "
      "based on the specific descriptions in the review, list the following tracks: for the band, "
      "the two songs characterized as \"hard-boiled riff rockers\" and the acoustic song deemed a "
      "\"worthy Left Coast successor to 'Walk on the Wild Side'\"; for the songwriter, the two songs "
      "presenting \"bucolic views of a childhood in New Orleans,\" the two \"naive, devoted love "
      "songs,\" and the final track described as a \"chilling, coldblooded moment\" involving a "
      "message to his son.";
  EXPECT_TRUE(lint_decontextualization(question_task(question), tree).empty());
  // Naming one of the source pages is a leak.
  EXPECT_EQ(lint_decontextualization(question_task("What did the Land of Dreams review say?"), tree)
                .size(),
            1u);
}

TEST(Lint, DomainLeaksWithAndWithoutWww) {
  InfoTree tree("handheld games", "https://gamefaqs.gamespot.com/forums", "Message Boards", "");
  tree.add_child(tree.root(), "https://gamefaqs.gamespot.com/forums/gbc", "Game Boy Color Board", "",
                 "boards");
  const auto v = lint_decontextualization(
      question_task("Per gamefaqs.gamespot.com, which handheld had the most boards?"), tree);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].find("domain"), std::string::npos);

  InfoTree www("consoles", "https://www.example-consoles.org/start", "Start", "");
  EXPECT_EQ(lint_decontextualization(question_task("What does example-consoles.org list?"), www).size(),
            1u);
}

TEST(Lint, PathSegmentLeaks) {
  const InfoTree tree = fx::flat_tree(3);
  // "lineup" is a six-letter path segment of the hub page.
  const auto v =
      lint_decontextualization(question_task("Which units appear in the maker's lineup?"), tree);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].find("path segment"), std::string::npos);
}

TEST(Lint, TopicWordsAreNotLeaks) {
  InfoTree tree("Government", "https://wiki.example.org/government", "Government", "");
  tree.add_child(tree.root(), "https://wiki.example.org/government/branches", "Branches of Government",
                 "", "parts");
  EXPECT_TRUE(
      lint_decontextualization(question_task("Which government body passed the act?"), tree).empty());
}

// ---- Relation labels ---------------------------------------------------------------------

std::vector<Link> two_links() {
  return {Link{"Game Boy", "https://a.org/gb", "the Game Boy line", ""},
          Link{"Game Gear", "https://a.org/gg", "Sega's rival", ""}};
}

TEST(LabelRelations, UsesExaminerLabels) {
  ScriptedChatClient examiner;
  examiner.set_default("```json\n{\"labels\": [\" Varieties \", \"varieties\"]}\n```");
  FetchedPage parent{"https://a.org", "Handhelds", "", "", {}};
  EXPECT_EQ(label_relations(examiner, parent, two_links()),
            (std::vector<std::string>{"varieties", "varieties"}));
  EXPECT_NE(examiner.prompts().at(0).find("exactly 2 labels"), std::string::npos);
  EXPECT_NE(examiner.prompts().at(0).find("1. \"Game Boy\" -> https://a.org/gb"), std::string::npos);
}

TEST(LabelRelations, MalformedRepliesFallBack) {
  FetchedPage parent{"https://a.org", "Handhelds", "", "", {}};
  const std::vector<std::string> fallback = {"related", "related"};
  for (const char* reply : {"nonsense", "{\"labels\": [\"one\"]}", "{\"labels\": [1, 2]}",
                            "{\"other\": []}"}) {
    ScriptedChatClient examiner;
    examiner.set_default(reply);
    EXPECT_EQ(label_relations(examiner, parent, two_links()), fallback) << reply;
  }
  ScriptedChatClient silent;  // throws on every call
  EXPECT_EQ(label_relations(silent, parent, two_links()), fallback);
  EXPECT_TRUE(label_relations(silent, parent, {}).empty());
}

// ---- Generation -----------------------------------------------------------------------------

TEST(GenerateTask, PassesThroughAWellFormedReply) {
  InfoTree tree = fx::flat_tree(6);
  FixtureWeb empty;
  Crawler crawler(empty);
  ScriptedChatClient examiner;
  examiner.set_default(fx::task_reply());
  const TreePath path = leaf_path(tree, 2);
  const Task t = generate_task(examiner, tree, path, 3, crawler);
  EXPECT_EQ(t.question, "Which portable systems from the early nineties fit the clues?");
  EXPECT_EQ(t.checklist_width.size(), 2u);
  EXPECT_EQ(t.depth, 2);
  EXPECT_EQ(t.width, 3);
  EXPECT_EQ(t.source_path, path);
  EXPECT_EQ(t.word_limit_instruction, word_limit(2, 3));
  ASSERT_EQ(examiner.calls(), 1u);
  const std::string& prompt = examiner.prompts()[0];
  // Reasoning chain = ancestors; targets = focal first, then siblings.
  const auto targets = prompt.find("**B. Target Answers");
  EXPECT_LT(prompt.find("[Node 1] Lineup"), targets);
  EXPECT_GT(prompt.find("[Node 4] Unit 2"), targets);
  EXPECT_LT(prompt.find("[Node 4] Unit 2"), prompt.find("[Node 2] Unit 0"));
  EXPECT_EQ(prompt.find("Unit 3"), std::string::npos);
  EXPECT_NE(prompt.find("\"word_limit_instruction\": \"Maximum 440 words\""), std::string::npos);
}

TEST(GenerateTask, ExpandsAShortCohortThroughTheCrawler) {
  const auto web = fx::handheld_web();
  Crawler crawler(web);
  InfoTree tree = crawler.build_tree("handheld consoles", web, 3);
  const TreePath path = tree.path_to(*tree.find_url("https://consoles.example.com/game-boy"));
  ScriptedChatClient examiner;
  examiner.set_default(fx::task_reply());
  const std::size_t before = tree.size();
  const Task t = generate_task(examiner, tree, path, 4, crawler);
  EXPECT_EQ(tree.size(), before + 2);
  EXPECT_EQ(t.width, 4);
  EXPECT_NE(examiner.prompts()[0].find("Atari Lynx"), std::string::npos);
}

TEST(GenerateTask, UnfillableCohortIsExhausted) {
  InfoTree tree = fx::flat_tree(2);
  FixtureWeb empty;
  Crawler crawler(empty);
  ScriptedChatClient examiner;
  examiner.set_default(fx::task_reply());
  EXPECT_ARENA_ERROR(generate_task(examiner, tree, leaf_path(tree, 0), 5, crawler),
                     ErrorCode::kExpansionExhausted);
  EXPECT_EQ(examiner.calls(), 0u);
}

TEST(GenerateTask, LintRetriesThenSucceeds) {
  InfoTree tree = fx::flat_tree(4);
  FixtureWeb empty;
  Crawler crawler(empty);
  ScriptedChatClient examiner;
  examiner.push_sequence(fx::task_reply("What does the Portable Gaming Overview list?"));
  examiner.push_sequence(fx::task_reply());
  const Task t = generate_task(examiner, tree, leaf_path(tree, 0), 2, crawler);
  EXPECT_EQ(examiner.calls(), 2u);
  EXPECT_EQ(t.question, "Which portable systems from the early nineties fit the clues?");
}

TEST(GenerateTask, LintFailureAfterRetryBudget) {
  InfoTree tree = fx::flat_tree(4);
  FixtureWeb empty;
  Crawler crawler(empty);
  ScriptedChatClient examiner;
  examiner.set_default(fx::task_reply("What does the Portable Gaming Overview list?"));
  EXPECT_ARENA_ERROR(generate_task(examiner, tree, leaf_path(tree, 0), 2, crawler),
                     ErrorCode::kLintFailure);
  EXPECT_EQ(examiner.calls(), 3u);
}

TEST(GenerateTask, UnparseableRepliesAreParseFailure) {
  InfoTree tree = fx::flat_tree(4);
  FixtureWeb empty;
  Crawler crawler(empty);
  ScriptedChatClient examiner;
  examiner.set_default("I cannot help with that.");
  TaskGenOptions options;
  options.retry_budget = 1;
  EXPECT_ARENA_ERROR(generate_task(examiner, tree, leaf_path(tree, 0), 2, crawler, options),
                     ErrorCode::kParseFailure);
  EXPECT_EQ(examiner.calls(), 2u);
}

TEST(GenerateTask, RejectsBadArguments) {
  InfoTree tree = fx::flat_tree(4);
  FixtureWeb empty;
  Crawler crawler(empty);
  ScriptedChatClient examiner;
  EXPECT_ARENA_ERROR(generate_task(examiner, tree, TreePath{{NodeId{3}}}, 2, crawler),
                     ErrorCode::kInvalidArgument);
  EXPECT_ARENA_ERROR(generate_task(examiner, tree, leaf_path(tree, 0), 1, crawler),
                     ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace arena
