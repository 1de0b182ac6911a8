#include <array>
#include <cctype>

#include "arena/error.hpp"
#include "arena/fixture_web.hpp"
#include "arena/rng.hpp"
#include "fmt/format.h"

namespace arena {
namespace {

constexpr std::array<std::string_view, 8> kRelations = {
    "varieties", "components", "successors", "competitors",
    "processes", "members",    "editions",   "locations"};

constexpr std::array<std::string_view, 16> kOnsets = {
    "Val", "Kor", "Mir", "Tes", "Bran", "Quel", "Dor", "Ash",
    "Lin", "Vex", "Sor", "Pel", "Gar", "Nim", "Oth", "Rav"};
constexpr std::array<std::string_view, 16> kCodas = {
    "ora", "ith", "anx", "eld", "ovan", "ussa", "irin", "olt",
    "ach", "enne", "ulm", "ast", "ova", "ire", "und", "esh"};

std::string slugify(std::string_view text) {
  std::string out;
  bool dash = false;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      if (dash && !out.empty()) out += '-';
      dash = false;
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else {
      dash = true;
    }
  }
  return out.empty() ? "topic" : out;
}

std::string token_for(const std::vector<int>& path) {
  std::string out = "hub";
  for (int i : path) out += "-" + std::to_string(i);
  return out;
}

std::optional<std::vector<int>> parse_token(std::string_view token) {
  if (!token.starts_with("hub")) return std::nullopt;
  std::vector<int> path;
  std::size_t i = 3;
  while (i < token.size()) {
    if (token[i] != '-') return std::nullopt;
    ++i;
    int v = 0;
    std::size_t digits = 0;
    while (i < token.size() && std::isdigit(static_cast<unsigned char>(token[i]))) {
      v = v * 10 + (token[i] - '0');
      ++i;
      ++digits;
    }
    if (digits == 0 || digits > 4) return std::nullopt;
    path.push_back(v);
  }
  return path;
}

std::uint64_t path_hash(std::uint64_t seed, const std::vector<int>& path) {
  std::uint64_t h = derive_seed(seed, {0x5157ULL});
  for (int i : path) h = derive_seed(h, {static_cast<std::uint64_t>(i)});
  return h;
}

}  // namespace

SyntheticWeb::SyntheticWeb(std::string topic, SyntheticWebOptions options)
    : topic_(std::move(topic)), slug_(slugify(topic_)), options_(std::move(options)) {}

std::string SyntheticWeb::base() const {
  return "https://" + options_.domain + "/" + slug_;
}

std::string SyntheticWeb::root_url() const { return base() + "/n/hub"; }

std::string SyntheticWeb::title_for(const std::vector<int>& path) const {
  if (path.empty()) return topic_ + " Reference Hub";
  const std::uint64_t h = path_hash(options_.seed, path);
  auto word = [&](std::uint64_t x) {
    return std::string(kOnsets[x % kOnsets.size()]) +
           std::string(kCodas[(x >> 8) % kCodas.size()]);
  };
  return word(h) + " " + word(h >> 20) + " " + std::to_string(100 + (h >> 40) % 900);
}

std::vector<std::string> SyntheticWeb::search(const std::string& query,
                                              std::size_t k) const {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (normalize_query(query) != normalize_query(topic_)) return {};
  std::vector<std::string> hits = {base() + "/about", base() + "/missing", root_url()};
  if (hits.size() > k) hits.resize(k);
  return hits;
}

FetchedPage SyntheticWeb::fetch(const std::string& url) const {
  if (!is_valid_url(url)) throw Error(ErrorCode::kInvalidArgument, "bad url " + url);
  const std::string normalized = normalize_url(url);
  if (normalized == normalize_url(base() + "/about")) {
    FetchedPage about;
    about.url = normalized;
    about.title = "About this site";
    about.text = "A short page about the site with a single link home.";
    about.links.push_back(Link{"Home", root_url(), "link home", ""});
    return about;
  }
  const std::string prefix = normalize_url(base() + "/n") + "/";
  if (!normalized.starts_with(prefix))
    throw Error(ErrorCode::kHttpError, "404 " + normalized);
  auto path = parse_token(std::string_view(normalized).substr(prefix.size()));
  if (!path || static_cast<int>(path->size()) > options_.max_depth)
    throw Error(ErrorCode::kHttpError, "404 " + normalized);

  const std::size_t per_relation = options_.links_per_relation;
  const std::size_t fanout = per_relation * options_.relations_per_page;
  for (std::size_t i = 0; i < path->size(); ++i) {
    if ((*path)[i] < 0 || static_cast<std::size_t>((*path)[i]) >= fanout)
      throw Error(ErrorCode::kHttpError, "404 " + normalized);
  }

  const std::uint64_t h = path_hash(options_.seed, *path);
  FetchedPage page;
  page.url = normalized;
  page.title = title_for(*path);

  std::string relation_to_parent = "overview";
  std::string parent_title = topic_;
  if (!path->empty()) {
    std::vector<int> parent(path->begin(), path->end() - 1);
    const std::uint64_t ph = path_hash(options_.seed, parent);
    const std::size_t group = static_cast<std::size_t>(path->back()) / per_relation;
    relation_to_parent = std::string(kRelations[(ph + group * 3) % kRelations.size()]);
    parent_title = title_for(parent);
  }
  page.text = fmt::format(
      "{} is listed among the {} of {}. Fact: {} carries registry code {}-{}. "
      "Fact: {} was first documented in {}. Further notes describe its history "
      "and context within {}.",
      page.title, relation_to_parent, parent_title, page.title,
      static_cast<char>('A' + h % 26), (h >> 5) % 10000, page.title,
      1850 + (h >> 17) % 170, topic_);

  if (static_cast<int>(path->size()) >= options_.max_depth) return page;

  // Links home and up first; the crawler must skip these to stay acyclic.
  page.links.push_back(Link{topic_, root_url(), "Back to the hub.", ""});
  if (path->size() > 1) {
    std::vector<int> parent(path->begin(), path->end() - 1);
    page.links.push_back(Link{title_for(parent), base() + "/n/" + token_for(parent),
                              "Up one level.", ""});
  }
  for (std::size_t i = 0; i < fanout; ++i) {
    std::vector<int> child = *path;
    child.push_back(static_cast<int>(i));
    const std::string rel(kRelations[(h + (i / per_relation) * 3) % kRelations.size()]);
    const std::string anchor = title_for(child);
    page.links.push_back(Link{anchor, base() + "/n/" + token_for(child),
                              fmt::format("Among the {} of {} is {}.", rel, page.title, anchor),
                              rel});
  }
  return page;
}

}  // namespace arena
