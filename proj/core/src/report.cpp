#include "heq/report.hpp"

#include <json.hpp>

namespace heq {

namespace {

using nlohmann::json;

bool selected(const PointReport& p, const std::optional<std::string>& point) { return !point || p.point == *point; }

}  // namespace

std::string render_text(const Report& r, const std::optional<std::string>& point) {
  std::string out;
  for (const auto& p : r.points) {
    if (!selected(p, point)) continue;
    for (const auto& c : p.constants) out += p.point + ": " + c.var + " == " + c.value.str() + "\n";
    for (const auto& q : p.pairs) out += p.point + ": " + q.str() + "\n";
  }
  out += std::string("ir: ") + (r.ir ? "true" : "false") + "\n";
  out += "iterations: " + std::to_string(r.iterations) + "\n";
  out += "reaching iterations: " + std::to_string(r.reaching_iterations) + "\n";
  out += "max conjunction: " + std::to_string(r.max_conjunction) + " (bound " + std::to_string(r.bound) + ")\n";
  return out;
}

std::string render_json(const Report& r, const std::optional<std::string>& point) {
  json points = json::array();
  for (const auto& p : r.points) {
    if (!selected(p, point)) continue;
    json consts = json::array();
    for (const auto& c : p.constants) consts.push_back({{"var", c.var}, {"term", c.value.str()}});
    json pairs = json::array();
    for (const auto& q : p.pairs)
      pairs.push_back({{"lhs_template", q.lhs_template.str()},
                       {"lhs_var", q.lhs_var},
                       {"rhs_template", q.rhs_template.str()},
                       {"rhs_var", q.rhs_var}});
    points.push_back({{"point", p.point}, {"constants", consts}, {"pairs", pairs}});
  }
  json stats = {{"ir", r.ir},
                {"iterations", r.iterations},
                {"reaching_iterations", r.reaching_iterations},
                {"max_conjunction", r.max_conjunction},
                {"bound", r.bound},
                {"vars", r.n_vars},
                {"small_terms", r.m_small}};
  return json{{"points", points}, {"stats", stats}}.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
  Report r;
  try {
    json j = json::parse(text);
    for (const auto& p : j.at("points")) {
      PointReport pr;
      pr.point = p.at("point").get<std::string>();
      for (const auto& c : p.at("constants"))
        pr.constants.push_back({c.at("var").get<std::string>(), parse_term(c.at("term").get<std::string>())});
      for (const auto& q : p.at("pairs"))
        pr.pairs.push_back({parse_term(q.at("lhs_template").get<std::string>()), q.at("lhs_var").get<std::string>(),
                            parse_term(q.at("rhs_template").get<std::string>()), q.at("rhs_var").get<std::string>()});
      r.points.push_back(std::move(pr));
    }
    const auto& s = j.at("stats");
    r.ir = s.at("ir").get<bool>();
    r.iterations = s.at("iterations").get<std::size_t>();
    r.reaching_iterations = s.at("reaching_iterations").get<std::size_t>();
    r.max_conjunction = s.at("max_conjunction").get<std::size_t>();
    r.bound = s.at("bound").get<std::uint64_t>();
    r.n_vars = s.at("vars").get<std::size_t>();
    r.m_small = s.at("small_terms").get<std::size_t>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed report: ") + e.what());
  } catch (const ParseError& e) {
    throw std::invalid_argument(std::string("malformed term in report: ") + e.what());
  }
  return r;
}

}  // namespace heq
