#include "apixplore/value.hpp"

#include <sstream>

namespace apix {

std::string path_to_string(const Path& path) {
  std::ostringstream out;
  for (const auto& step : path) {
    if (std::holds_alternative<std::size_t>(step)) {
      out << '[' << std::get<std::size_t>(step) << ']';
    } else {
      out << '.' << std::get<std::string>(step);
    }
  }
  return out.str();
}

Json path_to_json(const Path& path) {
  Json arr = Json::array();
  for (const auto& step : path) {
    if (std::holds_alternative<std::size_t>(step)) {
      arr.push_back(std::get<std::size_t>(step));
    } else {
      arr.push_back(std::get<std::string>(step));
    }
  }
  return arr;
}

Path path_from_json(const Json& j) {
  Path path;
  for (const auto& step : j) {
    if (step.is_number_unsigned() || step.is_number_integer()) {
      path.emplace_back(static_cast<std::size_t>(step.get<std::uint64_t>()));
    } else {
      path.emplace_back(step.get<std::string>());
    }
  }
  return path;
}

std::optional<Json> value_at_path(const Json& value, const Path& path) {
  const Json* cur = &value;
  for (const auto& step : path) {
    if (std::holds_alternative<std::string>(step)) {
      if (!cur->is_object()) return std::nullopt;
      auto it = cur->find(std::get<std::string>(step));
      if (it == cur->end()) return std::nullopt;
      cur = &*it;
    } else {
      if (!cur->is_array()) return std::nullopt;
      const auto idx = std::get<std::size_t>(step);
      if (idx >= cur->size()) return std::nullopt;
      cur = &(*cur)[idx];
    }
  }
  return *cur;
}

namespace {

void enumerate_rec(const Json& value, Path& prefix,
                   std::vector<std::pair<Path, Json>>& out) {
  out.emplace_back(prefix, value);
  if (value.is_object()) {
    for (auto it = value.begin(); it != value.end(); ++it) {
      prefix.emplace_back(it.key());
      enumerate_rec(it.value(), prefix, out);
      prefix.pop_back();
    }
  } else if (value.is_array()) {
    for (std::size_t i = 0; i < value.size(); ++i) {
      prefix.emplace_back(i);
      enumerate_rec(value[i], prefix, out);
      prefix.pop_back();
    }
  }
}

}  // namespace

std::vector<std::pair<Path, Json>> enumerate_subvalues(const Json& value) {
  std::vector<std::pair<Path, Json>> out;
  Path prefix;
  enumerate_rec(value, prefix, out);
  return out;
}

std::uint64_t fnv1a(std::uint64_t h, const std::string& bytes) {
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace apix
