#include <algorithm>
#include <cstdio>
#include <map>
#include <string>
#include <tuple>

#include <nlohmann/json.hpp>

#include "blockboot/study.hpp"

namespace blockboot {

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

std::string render_csv(const CoverageTable& table) {
  std::string out = "model,estimator,method,n,alpha,ell,k,coverage,mc_se,r_eff,failures\n";
  for (const auto& cell : table.cells) {
    out += model_name(cell.model);
    out += ',';
    out += estimator_name(cell.estimator);
    out += ',';
    out += method_name(cell.method);
    out += ',';
    out += std::to_string(cell.n);
    out += ',';
    out += fixed6(cell.alpha);
    out += ',';
    out += std::to_string(cell.ell);
    out += ',';
    out += std::to_string(cell.k);
    out += ',';
    out += fixed6(cell.coverage());
    out += ',';
    out += fixed6(cell.mc_se());
    out += ',';
    out += std::to_string(cell.r_eff);
    out += ',';
    out += std::to_string(cell.failures);
    out += '\n';
  }
  return out;
}

std::string render_json(const CoverageTable& table) {
  nlohmann::json doc;
  doc["version"] = table.version;
  doc["wall_seconds"] = table.wall_seconds;
  doc["config"] = nlohmann::json::parse(table.config_json);
  auto& cells = doc["cells"] = nlohmann::json::array();
  for (const auto& cell : table.cells) {
    nlohmann::json j;
    j["model"] = model_name(cell.model);
    j["estimator"] = estimator_name(cell.estimator);
    j["method"] = method_name(cell.method);
    j["n"] = cell.n;
    j["alpha"] = cell.alpha;
    j["ell"] = cell.ell;
    j["k"] = cell.k;
    j["coverage"] = cell.coverage();
    j["mc_se"] = cell.mc_se();
    j["r_eff"] = cell.r_eff;
    j["failures"] = cell.failures;
    cells.push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

std::string render_pretty(const CoverageTable& table) {
  // Group cells by (model, estimator, n); methods as rows, alphas as columns.
  using Key = std::tuple<std::string, std::string, std::size_t>;
  std::map<Key, std::vector<const CoverageCell*>> groups;
  std::vector<Key> order;
  for (const auto& cell : table.cells) {
    Key key{model_name(cell.model), estimator_name(cell.estimator), cell.n};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&cell);
  }
  std::sort(order.begin(), order.end(), [&](const Key& a, const Key& b) {
    return groups[a].front() < groups[b].front();  // first-appearance order
  });

  std::string out;
  char buf[128];
  for (const Key& key : order) {
    const auto& cells = groups[key];
    std::snprintf(buf, sizeof(buf), "%s / %s / n=%zu (ell=%zu, k=%zu)\n",
                  std::get<0>(key).c_str(), std::get<1>(key).c_str(), std::get<2>(key),
                  cells.front()->ell, cells.front()->k);
    out += buf;

    std::vector<double> alphas;
    for (const auto* c : cells)
      if (std::find(alphas.begin(), alphas.end(), c->alpha) == alphas.end())
        alphas.push_back(c->alpha);

    std::snprintf(buf, sizeof(buf), "  %-6s", "");
    out += buf;
    for (double a : alphas) {
      std::snprintf(buf, sizeof(buf), "  %8.2f", a);
      out += buf;
    }
    out += '\n';

    for (std::size_t mi = 0; mi < kMethodCount; ++mi) {
      const auto method = static_cast<BoundMethod>(mi);
      std::string row;
      std::snprintf(buf, sizeof(buf), "  %-6s", method_display_name(method));
      row += buf;
      bool any = false;
      std::size_t failures = 0;
      for (double a : alphas) {
        const CoverageCell* found = nullptr;
        for (const auto* c : cells)
          if (c->method == method && c->alpha == a) found = c;
        if (!found) {
          std::snprintf(buf, sizeof(buf), "  %8s", "-");
        } else {
          any = true;
          failures = found->failures;
          if (found->r_eff == 0)
            std::snprintf(buf, sizeof(buf), "  %8s", "fail");
          else
            std::snprintf(buf, sizeof(buf), "  %8.3f", found->coverage());
        }
        row += buf;
      }
      if (!any) continue;
      out += row;
      if (failures > 0) {
        std::snprintf(buf, sizeof(buf), "  [%zu failed]", failures);
        out += buf;
      }
      out += '\n';
    }
    out += '\n';
  }
  if (order.empty()) out = "(no cells)\n";
  return out;
}

}  // namespace blockboot
