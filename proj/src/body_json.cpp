#include "convexreg/body_json.hpp"

#include <fstream>
#include <limits>

namespace convexreg {

namespace {

using nlohmann::json;

double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) throw BodyJsonError(path, "expected a number");
  return j.get<double>();
}

int int_at(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw BodyJsonError(path, "expected an integer");
  return j.get<int>();
}

const json& field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key))
    throw BodyJsonError(path + "/" + key, "missing field");
  return j.at(key);
}

Vector vector_at(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty())
    throw BodyJsonError(path, "expected a non-empty array of numbers");
  Vector v(j.size());
  for (size_t i = 0; i < j.size(); ++i)
    v[static_cast<int>(i)] = number_at(j[i], path + "/" + std::to_string(i));
  return v;
}

Matrix matrix_at(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty())
    throw BodyJsonError(path, "expected a non-empty array of rows");
  Vector first = vector_at(j[0], path + "/0");
  Matrix m(j.size(), first.size());
  m.row(0) = first.transpose();
  for (size_t i = 1; i < j.size(); ++i) {
    std::string rp = path + "/" + std::to_string(i);
    Vector row = vector_at(j[i], rp);
    if (row.size() != first.size())
      throw BodyJsonError(rp, "ragged row length");
    m.row(static_cast<int>(i)) = row.transpose();
  }
  return m;
}

}  // namespace

ConvexBody body_from_json(const nlohmann::json& j, const std::string& path) {
  if (!j.is_object()) throw BodyJsonError(path, "expected an object");

  if (j.contains("op")) {
    const json& opj = j.at("op");
    if (!opj.is_string()) throw BodyJsonError(path + "/op", "expected a string");
    std::string op = opj.get<std::string>();
    ConvexBody inner =
        body_from_json(field(j, "body", path), path + "/body");
    try {
      if (op == "polar") return polar(inner);
      if (op == "outer") return outer_reg(inner);
      if (op == "inner") return inner_reg(inner);
      if (op == "diff") return diff_body(inner);
      if (op == "section" || op == "project") {
        Matrix span = matrix_at(field(j, "span", path), path + "/span");
        if (span.cols() != inner.dim())
          throw BodyJsonError(path + "/span", "span vectors have wrong dimension");
        Subspace h = Subspace::from_span(span.transpose());
        return op == "section" ? section(inner, h) : project(inner, h);
      }
      if (op == "linear") {
        Matrix t = matrix_at(field(j, "matrix", path), path + "/matrix");
        return linear_image(inner, t);
      }
      if (op == "translate") {
        Vector z = vector_at(field(j, "shift", path), path + "/shift");
        return translate(inner, z);
      }
    } catch (const BodyError& e) {
      throw BodyJsonError(path, e.what());
    } catch (const NumericsError& e) {
      throw BodyJsonError(path, e.what());
    }
    throw BodyJsonError(path + "/op", "unknown op '" + op + "'");
  }

  const json& typej = field(j, "type", path);
  if (!typej.is_string())
    throw BodyJsonError(path + "/type", "expected a string");
  std::string type = typej.get<std::string>();
  try {
    if (type == "vpolytope")
      return vpolytope(
          matrix_at(field(j, "vertices", path), path + "/vertices"));
    if (type == "ball")
      return ball(int_at(field(j, "n", path), path + "/n"),
                  number_at(field(j, "radius", path), path + "/radius"));
    if (type == "lp_ball") {
      const json& pj = field(j, "p", path);
      double p = (pj.is_string() && pj.get<std::string>() == "inf")
                     ? std::numeric_limits<double>::infinity()
                     : number_at(pj, path + "/p");
      double scale = j.contains("scale")
                         ? number_at(j.at("scale"), path + "/scale")
                         : 1.0;
      return lp_ball(int_at(field(j, "n", path), path + "/n"), p, scale);
    }
    if (type == "simplex")
      return regular_simplex(int_at(field(j, "n", path), path + "/n"));
  } catch (const BodyError& e) {
    throw BodyJsonError(path, e.what());
  }
  throw BodyJsonError(path + "/type", "unknown type '" + type + "'");
}

ConvexBody load_body(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw BodyJsonError("", "cannot open " + file);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw BodyJsonError("", std::string("parse error: ") + e.what());
  }
  return body_from_json(j);
}

}  // namespace convexreg
