#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "convexreg/body.hpp"

namespace convexreg {

struct BodyJsonError : std::runtime_error {
  BodyJsonError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), pointer(path) {}
  std::string pointer;
};

// Parses a body description:
//   {"type":"vpolytope","vertices":[[...],...]}
//   {"type":"ball","n":n,"radius":r}
//   {"type":"lp_ball","n":n,"p":p|"inf","scale":a}
//   {"type":"simplex","n":n}
// and wrapper nodes
//   {"op":"polar"|"outer"|"inner"|"diff","body":...}
//   {"op":"section"|"project","body":...,"span":[[...],...]}   (rows span H)
//   {"op":"linear","body":...,"matrix":[[...],...]}
//   {"op":"translate","body":...,"shift":[...]}
// Errors carry a JSON-pointer path to the offending node.
ConvexBody body_from_json(const nlohmann::json& j,
                          const std::string& path = "");

ConvexBody load_body(const std::string& file);

}  // namespace convexreg
