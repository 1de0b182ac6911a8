#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "arena/web.hpp"

namespace arena {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string decode_entities(std::string_view s) {
  static const std::pair<std::string_view, std::string_view> kNamed[] = {
      {"&amp;", "&"}, {"&lt;", "<"},   {"&gt;", ">"},
      {"&quot;", "\""}, {"&#39;", "'"}, {"&apos;", "'"},
      {"&nbsp;", " "}};
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    if (s[i] == '&') {
      bool matched = false;
      for (const auto& [name, value] : kNamed) {
        if (s.substr(i, name.size()) == name) {
          out += value;
          i += name.size();
          matched = true;
          break;
        }
      }
      if (matched) continue;
    }
    out += s[i++];
  }
  return out;
}

// Value of attribute `name` inside a tag body such as `a href="x" id=y`.
std::string attribute(std::string_view tag, std::string_view name) {
  const std::string lt = lower(tag);
  std::size_t pos = 0;
  while ((pos = lt.find(name, pos)) != std::string::npos) {
    const bool boundary =
        pos == 0 || std::isspace(static_cast<unsigned char>(lt[pos - 1]));
    std::size_t i = pos + name.size();
    while (i < lt.size() && std::isspace(static_cast<unsigned char>(lt[i]))) ++i;
    if (!boundary || i >= lt.size() || lt[i] != '=') {
      pos += name.size();
      continue;
    }
    ++i;
    while (i < lt.size() && std::isspace(static_cast<unsigned char>(lt[i]))) ++i;
    if (i >= tag.size()) return {};
    if (tag[i] == '"' || tag[i] == '\'') {
      const char quote = tag[i];
      const std::size_t end = tag.find(quote, i + 1);
      return std::string(tag.substr(i + 1, end == std::string_view::npos
                                                ? std::string_view::npos
                                                : end - i - 1));
    }
    std::size_t end = i;
    while (end < tag.size() && !std::isspace(static_cast<unsigned char>(tag[end])) &&
           tag[end] != '>')
      ++end;
    return std::string(tag.substr(i, end - i));
  }
  return {};
}

const std::unordered_set<std::string>& block_tags() {
  static const std::unordered_set<std::string> tags = {
      "p",  "br", "div", "li", "ul", "ol", "tr", "td", "th", "table",
      "h1", "h2", "h3",  "h4", "h5", "h6", "section", "article", "header",
      "footer", "nav", "blockquote", "pre", "hr", "dt", "dd"};
  return tags;
}

class TextBuilder {
 public:
  void append(std::string_view raw) {
    for (char c : decode_entities(raw)) {
      if (std::isspace(static_cast<unsigned char>(c))) {
        pending_space_ = !text_.empty();
      } else {
        if (pending_space_) text_ += ' ';
        pending_space_ = false;
        text_ += c;
      }
    }
  }
  void separate() { pending_space_ = !text_.empty(); }
  std::size_t position() const {
    return text_.size() + (pending_space_ ? 1 : 0);
  }
  std::size_t committed() const { return text_.size(); }
  std::string take() { return std::move(text_); }

 private:
  std::string text_;
  bool pending_space_ = false;
};

struct OpenAnchor {
  std::string href;
  std::size_t start = 0;
};

}  // namespace

ParsedHtml parse_html(std::string_view html, std::string_view base_url,
                      std::size_t context_chars) {
  ParsedHtml out;
  TextBuilder text;
  struct Span {
    std::string href;
    std::size_t start, end;
  };
  std::vector<Span> spans;
  std::optional<OpenAnchor> open;
  bool in_title = false;
  std::string title;

  auto close_anchor = [&] {
    if (!open) return;
    spans.push_back({open->href, open->start, text.committed()});
    open.reset();
  };

  std::size_t i = 0;
  while (i < html.size()) {
    if (html[i] != '<') {
      std::size_t next = html.find('<', i);
      if (next == std::string_view::npos) next = html.size();
      auto chunk = html.substr(i, next - i);
      if (in_title) {
        title += std::string(chunk);
      } else {
        text.append(chunk);
      }
      i = next;
      continue;
    }
    if (html.substr(i, 4) == "<!--") {
      auto end = html.find("-->", i + 4);
      i = end == std::string_view::npos ? html.size() : end + 3;
      continue;
    }
    auto end = html.find('>', i + 1);
    if (end == std::string_view::npos) {
      // Unterminated tag: treat the rest as text.
      text.append(html.substr(i + 1));
      break;
    }
    std::string_view body = html.substr(i + 1, end - i - 1);
    i = end + 1;
    bool closing = !body.empty() && body.front() == '/';
    if (closing) body.remove_prefix(1);
    std::size_t name_end = 0;
    while (name_end < body.size() &&
           (std::isalnum(static_cast<unsigned char>(body[name_end])) ||
            body[name_end] == '!'))
      ++name_end;
    const std::string name = lower(body.substr(0, name_end));

    if (!closing && (name == "script" || name == "style")) {
      const std::string close = "</" + name;
      std::size_t pos = i;
      while (pos < html.size()) {
        auto cand = html.find("</", pos);
        if (cand == std::string_view::npos) {
          pos = html.size();
          break;
        }
        if (lower(html.substr(cand, close.size())) == close) {
          auto gt = html.find('>', cand);
          pos = gt == std::string_view::npos ? html.size() : gt + 1;
          break;
        }
        pos = cand + 2;
      }
      i = pos;
      continue;
    }
    if (name == "title") {
      in_title = !closing;
      continue;
    }
    if (name == "a") {
      if (closing) {
        close_anchor();
      } else {
        close_anchor();
        std::string href = attribute(body, "href");
        if (!href.empty()) open = OpenAnchor{decode_entities(href), text.position()};
      }
      continue;
    }
    if (block_tags().count(name)) text.separate();
  }
  close_anchor();

  out.text = text.take();
  out.title = trim(decode_entities(title));
  for (const auto& span : spans) {
    auto resolved = resolve_url(base_url, span.href);
    if (!resolved) continue;
    Link link;
    link.url = *resolved;
    const std::size_t start = std::min(span.start, out.text.size());
    const std::size_t stop = std::clamp(span.end, start, out.text.size());
    link.anchor = trim(std::string_view(out.text).substr(start, stop - start));
    const std::size_t ctx_begin = start > context_chars ? start - context_chars : 0;
    const std::size_t ctx_end = std::min(out.text.size(), stop + context_chars);
    link.context = trim(std::string_view(out.text).substr(ctx_begin, ctx_end - ctx_begin));
    out.links.push_back(std::move(link));
  }
  return out;
}

std::vector<Link> extract_links(const FetchedPage& page,
                                std::size_t context_chars) {
  std::vector<Link> out;
  std::unordered_set<std::string> seen;
  const std::string self = normalize_url(page.url);
  auto add = [&](Link link) {
    if (link.url.empty() || link.url == self) return;
    if (!seen.insert(link.url).second) return;
    out.push_back(std::move(link));
  };
  for (const auto& annotated : page.links) {
    auto resolved = resolve_url(page.url, annotated.url);
    if (!resolved) continue;
    Link link = annotated;
    link.url = *resolved;
    if (link.context.size() > 2 * context_chars + link.anchor.size()) {
      link.context.resize(2 * context_chars + link.anchor.size());
    }
    add(std::move(link));
  }
  if (!page.html.empty()) {
    for (auto& link : parse_html(page.html, page.url, context_chars).links) {
      add(std::move(link));
    }
  }
  return out;
}

}  // namespace arena
