#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"

namespace plap::cli {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

enum class Status { Pass, Fail, Info };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Info: return "info";
  }
  return "info";
}

/// Bad flags or parameter combinations; exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunReport {
  std::string command;
  Json inputs = Json::object();
  Json results = Json::object();
  Json tolerances = Json::object();
  Status status = Status::Info;

  Json to_json() const {
    return Json{{"schema_version", kSchemaVersion},
                {"command", command},
                {"inputs", inputs},
                {"results", results},
                {"status", to_string(status)},
                {"tolerances", tolerances}};
  }

  int exit_code() const { return status == Status::Fail ? 1 : 0; }
};

}  // namespace plap::cli
