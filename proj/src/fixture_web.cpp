#include "arena/fixture_web.hpp"

#include <cctype>

#include "arena/error.hpp"

namespace arena {

std::string normalize_query(std::string_view query) {
  std::string out;
  bool space = false;
  for (char c : query) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

FixtureWeb::FixtureWeb(const json& doc) {
  try {
    if (doc.contains("search")) {
      for (auto it = doc["search"].begin(); it != doc["search"].end(); ++it)
        add_search(it.key(), it.value().get<std::vector<std::string>>());
    }
    if (doc.contains("pages")) {
      for (const auto& p : doc["pages"]) {
        FetchedPage page;
        page.url = p.at("url").get<std::string>();
        page.title = p.value("title", "");
        page.text = p.value("text", "");
        page.html = p.value("html", "");
        if (p.contains("links")) {
          for (const auto& l : p["links"]) {
            page.links.push_back(Link{l.value("anchor", ""), l.at("url").get<std::string>(),
                                      l.value("context", ""), l.value("relation", "")});
          }
        }
        add_page(std::move(page));
      }
    }
    if (doc.contains("redirects")) {
      for (auto it = doc["redirects"].begin(); it != doc["redirects"].end(); ++it)
        add_redirect(it.key(), it.value().get<std::string>());
    }
    for (const auto& u : doc.value("excluded", std::vector<std::string>{}))
      excluded_.insert(normalize_url(u));
    for (const auto& u : doc.value("timeouts", std::vector<std::string>{}))
      timeouts_.insert(normalize_url(u));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfigError, std::string("fixture corpus: ") + e.what());
  }
}

FixtureWeb FixtureWeb::load_dir(const std::filesystem::path& dir) {
  return FixtureWeb(read_json_file(dir / "web.json"));
}

void FixtureWeb::add_page(FetchedPage page) {
  page.url = normalize_url(page.url);
  std::string key = page.url;
  pages_.insert_or_assign(std::move(key), std::move(page));
}

void FixtureWeb::add_search(const std::string& query,
                            std::vector<std::string> urls) {
  search_[normalize_query(query)] = std::move(urls);
}

void FixtureWeb::add_redirect(const std::string& from, const std::string& to) {
  redirects_[normalize_url(from)] = normalize_url(to);
}

std::vector<std::string> FixtureWeb::search(const std::string& query,
                                            std::size_t k) const {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  auto it = search_.find(normalize_query(query));
  if (it == search_.end()) return {};
  std::vector<std::string> out(it->second.begin(),
                               it->second.begin() +
                                   static_cast<long>(std::min(k, it->second.size())));
  return out;
}

FetchedPage FixtureWeb::fetch(const std::string& url) const {
  if (!is_valid_url(url)) throw Error(ErrorCode::kInvalidArgument, "bad url " + url);
  std::string current = normalize_url(url);
  for (int hops = 0; hops < 10; ++hops) {
    auto it = redirects_.find(current);
    if (it == redirects_.end()) break;
    current = it->second;
  }
  if (excluded_.count(current)) throw Error(ErrorCode::kRobotsExcluded, current);
  if (timeouts_.count(current)) throw Error(ErrorCode::kTimeout, current);
  auto it = pages_.find(current);
  if (it == pages_.end()) throw Error(ErrorCode::kHttpError, "404 " + current);
  return it->second;
}

}  // namespace arena
