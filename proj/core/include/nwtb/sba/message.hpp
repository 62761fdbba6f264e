#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace nwtb::sba {

enum class Method { kGet, kPost, kPut, kDelete };

std::string_view to_string(Method method);
std::optional<Method> parse_method(std::string_view name);

// Request/response pair carried by both transport bindings. Bodies are
// canonical JSON text (or empty) and are delivered byte-for-byte.
struct Request {
  Method method = Method::kGet;
  std::string path;  // may carry a query string
  std::string body;

  static Request with_json(Method method, std::string path, const nlohmann::json& body);

  std::string path_only() const;
  std::map<std::string, std::string> query() const;
  // Throws ApiError(400) on malformed or empty body.
  nlohmann::json json() const;
};

struct Response {
  int status = 200;
  std::string body;

  static Response with_json(int status, const nlohmann::json& body);
  static Response empty(int status) { return {status, {}}; }
  static Response error(int status, std::string_view detail);

  bool ok() const noexcept { return status >= 200 && status < 300; }
  nlohmann::json json() const;
};

bool is_valid_status(int status);

using Handler = std::function<Response(const Request&)>;

// Runs a handler and maps ApiError and std::exception to 4xx/500 responses.
Response invoke_guarded(const Handler& handler, const Request& request);

struct SplitUri {
  std::string base;  // scheme://authority
  std::string path;  // starts with '/', or empty
};

// Splits "scheme://authority/path?query" into base and path. nullopt if the
// text has no scheme or no authority.
std::optional<SplitUri> split_uri(std::string_view uri);

// Minimal percent-decoding for path segments and query values.
std::string url_decode(std::string_view text);
std::string url_encode(std::string_view text);

}  // namespace nwtb::sba
