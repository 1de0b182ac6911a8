#include <algorithm>
#include <cctype>

#include "arena/web.hpp"

namespace arena {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string remove_dot_segments(const std::string& path) {
  std::vector<std::string> parts;
  std::size_t i = 0;
  const bool trailing = !path.empty() && path.back() == '/';
  while (i <= path.size()) {
    std::size_t j = path.find('/', i);
    if (j == std::string::npos) j = path.size();
    std::string seg = path.substr(i, j - i);
    if (seg == "..") {
      if (!parts.empty()) parts.pop_back();
    } else if (!seg.empty() && seg != ".") {
      parts.push_back(seg);
    }
    i = j + 1;
  }
  std::string out;
  for (const auto& p : parts) out += "/" + p;
  if (out.empty() || trailing) out += "/";
  return out;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string percent_decode(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size()) {
      int hi = hex_value(s[i + 1]);
      int lo = hex_value(s[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out += static_cast<char>(hi * 16 + lo);
        i += 2;
        continue;
      }
    }
    out += s[i];
  }
  return out;
}

}  // namespace

std::optional<UrlParts> split_url(std::string_view url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos || scheme_end == 0) return std::nullopt;
  UrlParts parts;
  parts.scheme = std::string(url.substr(0, scheme_end));
  for (char c : parts.scheme) {
    if (!std::isalpha(static_cast<unsigned char>(c)) && c != '+' && c != '-' &&
        c != '.')
      return std::nullopt;
  }
  std::string_view rest = url.substr(scheme_end + 3);
  if (auto hash = rest.find('#'); hash != std::string_view::npos)
    rest = rest.substr(0, hash);
  const auto host_end = rest.find_first_of("/?");
  parts.host = std::string(rest.substr(0, host_end));
  if (parts.host.empty()) return std::nullopt;
  for (char c : parts.host) {
    if (std::isspace(static_cast<unsigned char>(c))) return std::nullopt;
  }
  if (host_end == std::string_view::npos) return parts;
  rest = rest.substr(host_end);
  const auto q = rest.find('?');
  parts.path = std::string(rest.substr(0, q));
  if (q != std::string_view::npos) parts.query = std::string(rest.substr(q + 1));
  return parts;
}

bool is_valid_url(std::string_view url) {
  auto parts = split_url(url);
  if (!parts) return false;
  auto scheme = lower(parts->scheme);
  return scheme == "http" || scheme == "https";
}

std::string normalize_url(std::string_view url) {
  auto parts = split_url(url);
  if (!parts) {
    std::string raw(url);
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    while (raw.size() > 1 && raw.back() == '/') raw.pop_back();
    return raw;
  }
  std::string path = parts->path;
  while (!path.empty() && path.back() == '/') path.pop_back();
  std::string out = lower(parts->scheme) + "://" + lower(parts->host) + path;
  if (!parts->query.empty()) out += "?" + parts->query;
  return out;
}

std::optional<std::string> resolve_url(std::string_view base,
                                       std::string_view href) {
  std::string h(href);
  while (!h.empty() && std::isspace(static_cast<unsigned char>(h.front())))
    h.erase(h.begin());
  while (!h.empty() && std::isspace(static_cast<unsigned char>(h.back())))
    h.pop_back();
  if (h.empty() || h.front() == '#') return std::nullopt;
  const std::string lh = lower(h);
  if (lh.starts_with("mailto:") || lh.starts_with("javascript:") ||
      lh.starts_with("tel:") || lh.starts_with("data:"))
    return std::nullopt;
  if (h.find("://") != std::string::npos) {
    if (!is_valid_url(h)) return std::nullopt;
    return normalize_url(h);
  }
  auto b = split_url(base);
  if (!b) return std::nullopt;
  std::string target;
  if (h.starts_with("//")) {
    target = b->scheme + ":" + h;
  } else if (h.front() == '/') {
    target = b->scheme + "://" + b->host + remove_dot_segments(h);
  } else if (h.front() == '?') {
    target = b->scheme + "://" + b->host + b->path + h;
  } else {
    std::string dir = b->path;
    auto slash = dir.rfind('/');
    dir = slash == std::string::npos ? "/" : dir.substr(0, slash + 1);
    std::string rel = h;
    std::string query;
    if (auto q = rel.find('?'); q != std::string::npos) {
      query = rel.substr(q);
      rel.resize(q);
    }
    target = b->scheme + "://" + b->host + remove_dot_segments(dir + rel) + query;
  }
  if (!is_valid_url(target)) return std::nullopt;
  return normalize_url(target);
}

std::string url_host(std::string_view url) {
  auto parts = split_url(url);
  if (!parts) return {};
  std::string host = lower(parts->host);
  if (auto colon = host.find(':'); colon != std::string::npos) host.resize(colon);
  return host;
}

std::vector<std::string> url_path_segments(std::string_view url) {
  std::vector<std::string> out;
  auto parts = split_url(url);
  if (!parts) return out;
  std::string_view path = parts->path;
  std::size_t i = 0;
  while (i < path.size()) {
    std::size_t j = path.find('/', i);
    if (j == std::string_view::npos) j = path.size();
    if (j > i) out.push_back(percent_decode(path.substr(i, j - i)));
    i = j + 1;
  }
  return out;
}

}  // namespace arena
