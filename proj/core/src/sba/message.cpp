#include "nwtb/sba/message.hpp"

#include <cstdio>

#include "nwtb/domain/errors.hpp"

namespace nwtb::sba {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kGet: return "GET";
    case Method::kPost: return "POST";
    case Method::kPut: return "PUT";
    case Method::kDelete: return "DELETE";
  }
  return "GET";
}

std::optional<Method> parse_method(std::string_view name) {
  for (auto m : {Method::kGet, Method::kPost, Method::kPut, Method::kDelete}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

Request Request::with_json(Method method, std::string path, const nlohmann::json& body) {
  return {method, std::move(path), body.dump()};
}

std::string Request::path_only() const {
  const auto q = path.find('?');
  return q == std::string::npos ? path : path.substr(0, q);
}

std::map<std::string, std::string> Request::query() const {
  std::map<std::string, std::string> out;
  const auto q = path.find('?');
  if (q == std::string::npos) return out;
  std::string_view rest(path);
  rest.remove_prefix(q + 1);
  while (!rest.empty()) {
    const auto amp = rest.find('&');
    const auto pair = rest.substr(0, amp);
    const auto eq = pair.find('=');
    if (eq == std::string_view::npos) {
      out[url_decode(pair)] = "";
    } else {
      out[url_decode(pair.substr(0, eq))] = url_decode(pair.substr(eq + 1));
    }
    if (amp == std::string_view::npos) break;
    rest.remove_prefix(amp + 1);
  }
  return out;
}

nlohmann::json Request::json() const {
  if (body.empty()) throw ApiError(400, "empty request body");
  auto parsed = nlohmann::json::parse(body, nullptr, false);
  if (parsed.is_discarded()) throw ApiError(400, "malformed JSON body");
  return parsed;
}

Response Response::with_json(int status, const nlohmann::json& body) {
  return {status, body.dump()};
}

Response Response::error(int status, std::string_view detail) {
  return with_json(status, {{"status", status}, {"detail", detail}});
}

nlohmann::json Response::json() const {
  if (body.empty()) return nlohmann::json();
  auto parsed = nlohmann::json::parse(body, nullptr, false);
  if (parsed.is_discarded()) throw TransportError("malformed JSON in response body");
  return parsed;
}

bool is_valid_status(int status) {
  switch (status) {
    case 200: case 201: case 204: case 400: case 404: case 500: return true;
    default: return false;
  }
}

Response invoke_guarded(const Handler& handler, const Request& request) {
  try {
    return handler(request);
  } catch (const ApiError& e) {
    return Response::error(e.status(), e.what());
  } catch (const nlohmann::json::exception& e) {
    return Response::error(400, e.what());
  } catch (const std::invalid_argument& e) {
    return Response::error(400, e.what());
  } catch (const std::exception& e) {
    return Response::error(500, e.what());
  }
}

std::optional<SplitUri> split_uri(std::string_view uri) {
  const auto scheme_end = uri.find("://");
  if (scheme_end == std::string_view::npos || scheme_end == 0) return std::nullopt;
  const auto authority_start = scheme_end + 3;
  const auto path_start = uri.find('/', authority_start);
  const auto authority_end = path_start == std::string_view::npos ? uri.size() : path_start;
  if (authority_end == authority_start) return std::nullopt;
  for (auto c : uri) {
    if (c == ' ' || c == '\n' || c == '\t') return std::nullopt;
  }
  SplitUri out;
  out.base = std::string(uri.substr(0, authority_end));
  if (path_start != std::string_view::npos) out.path = std::string(uri.substr(path_start));
  return out;
}

std::string url_decode(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '%' && i + 2 < text.size()) {
      unsigned value = 0;
      if (std::sscanf(std::string(text.substr(i + 1, 2)).c_str(), "%2x", &value) == 1) {
        out.push_back(static_cast<char>(value));
        i += 2;
        continue;
      }
    }
    out.push_back(text[i] == '+' ? ' ' : text[i]);
  }
  return out;
}

std::string url_encode(std::string_view text) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : text) {
    const bool plain = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                       c == '-' || c == '_' || c == '.' || c == '~';
    if (plain) {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

}  // namespace nwtb::sba
